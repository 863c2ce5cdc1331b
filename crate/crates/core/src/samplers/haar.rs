use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::matrix::{ComplexMatrix, RealMatrix};
use crate::rng::RngStream;

/// Below this `|R_ii|` the Gaussian draw is treated as singular and redrawn.
const BREAKDOWN: f64 = 1e-12;

/// A Haar draw and the number of singular Gaussian draws discarded on the way.
#[derive(Debug, Clone)]
pub struct HaarSample<M> {
    pub matrix: M,
    pub resamples: u32,
}

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix, with the
/// columns of Q rescaled by the signs of diag(R) so the factorisation is unique.
pub fn sample_orthogonal_haar(n: usize, rng: &mut RngStream) -> HaarSample<RealMatrix> {
    assert!(n >= 1, "matrix size must be at least 1");
    let mut resamples = 0;
    loop {
        let g = DMatrix::from_fn(n, n, |_, _| rng.normal());
        let qr = g.qr();
        let r = qr.r();
        if (0..n).any(|i| r[(i, i)].abs() < BREAKDOWN) {
            resamples += 1;
            continue;
        }
        let mut q = qr.q();
        for j in 0..n {
            if r[(j, j)] < 0.0 {
                q.column_mut(j).neg_mut();
            }
        }
        let matrix = RealMatrix::from_dmatrix(q).expect("QR of a finite matrix is finite");
        return HaarSample { matrix, resamples };
    }
}

/// Haar-distributed unitary matrix: QR of a complex Ginibre matrix with the
/// columns of Q multiplied by the phases of diag(R).
pub fn sample_unitary_haar(n: usize, rng: &mut RngStream) -> HaarSample<ComplexMatrix> {
    assert!(n >= 1, "matrix size must be at least 1");
    let mut resamples = 0;
    loop {
        let g = DMatrix::from_fn(n, n, |_, _| Complex64::new(rng.normal(), rng.normal()));
        let qr = g.qr();
        let r = qr.r();
        if (0..n).any(|i| r[(i, i)].norm() < BREAKDOWN) {
            resamples += 1;
            continue;
        }
        let mut q = qr.q();
        for j in 0..n {
            let phase = r[(j, j)] / r[(j, j)].norm();
            for i in 0..n {
                q[(i, j)] *= phase;
            }
        }
        let matrix = ComplexMatrix::from_dmatrix(q).expect("square");
        return HaarSample { matrix, resamples };
    }
}
