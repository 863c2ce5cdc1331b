use crate::error::{domain, Result};
use crate::matrix::RealMatrix;
use crate::rng::RngStream;

/// A permutation of `0..n`, stored as `k -> sigma(k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v >= n || seen[v] {
                return domain(format!("{images:?} is not a permutation"));
            }
            seen[v] = true;
        }
        Ok(Permutation(images))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, k: usize) -> usize {
        self.0[k]
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (k, &v) in self.0.iter().enumerate() {
            inv[v] = k;
        }
        Permutation(inv)
    }

    /// +1 for even, -1 for odd, from the cycle decomposition.
    pub fn sign(&self) -> i32 {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut transpositions = 0;
        for start in 0..n {
            let mut len = 0;
            let mut k = start;
            while !seen[k] {
                seen[k] = true;
                k = self.0[k];
                len += 1;
            }
            if len > 0 {
                transpositions += len - 1;
            }
        }
        if transpositions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// `P` with `P e_k = e_{sigma(k)}`, so `det P = sign(sigma)`.
    pub fn matrix(&self) -> RealMatrix {
        let n = self.0.len();
        let mut m = vec![0.0; n * n];
        for (k, &v) in self.0.iter().enumerate() {
            m[v * n + k] = 1.0;
        }
        RealMatrix::from_row_major(n, &m).expect("permutation matrix")
    }
}

/// Uniform draw from the even permutations of `0..n`: a Fisher-Yates shuffle,
/// then one transposition if it came out odd.
pub fn random_even_permutation(n: usize, rng: &mut RngStream) -> Permutation {
    let mut v: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.below(i as u64 + 1) as usize;
        v.swap(i, j);
    }
    let mut p = Permutation(v);
    if n >= 2 && p.sign() < 0 {
        p.0.swap(0, 1);
    }
    p
}

/// `P A Q` for the permutation matrices of `sigma` (rows) and `tau` (columns):
/// entry `(i, j)` is `A[sigma^{-1}(i), tau(j)]`, so the diagonal collects
/// `A[sigma^{-1}(i), tau(i)]`. With `require_special` both permutations must be
/// even, keeping `P` and `Q` in `SL_n`.
pub fn apply_even_permutations(
    a: &RealMatrix,
    sigma: &Permutation,
    tau: &Permutation,
    require_special: bool,
) -> Result<RealMatrix> {
    let n = a.n();
    if sigma.len() != n || tau.len() != n {
        return domain("permutation sizes must match the matrix");
    }
    if require_special && (sigma.sign() < 0 || tau.sign() < 0) {
        return domain("odd permutation matrices are not in SL_n");
    }
    let inv = sigma.inverse();
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = a.get(inv.apply(i), tau.apply(j));
        }
    }
    RealMatrix::from_row_major(n, &out)
}
