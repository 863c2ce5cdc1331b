use crate::error::{domain, Result};
use crate::law::DigitLaw;
use crate::matrix::{nilpotent_exp, RealMatrix};
use crate::rng::RngStream;
use crate::significand::Base;

use super::WindowSpec;

/// Which Haar measure of the triangular group to sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Draw from `dx/x` on `[1, B^m)`; its significand is exactly Benford.
pub fn sample_log_uniform(base: Base, m: u32, rng: &mut RngStream) -> f64 {
    let x = (m as f64 * base.ln() * rng.uniform()).exp();
    // exp rounding may touch the open end.
    x.min(base.as_f64().powi(m as i32) * (1.0 - f64::EPSILON))
}

/// Inverse-CDF draw from the density proportional to `x^{-k}` on `[1, B^m)`.
pub fn sample_power_density(base: Base, k: f64, m: u32, rng: &mut RngStream) -> Result<f64> {
    if !(k > 0.0) || !k.is_finite() {
        return domain(format!("power-law exponent must be positive, got {k}"));
    }
    let e = 1.0 - k;
    if e.abs() < 1e-12 {
        return Ok(sample_log_uniform(base, m, rng));
    }
    // x^{1-k} = 1 + U (B^{m(1-k)} - 1)
    let u = rng.uniform();
    let span = (e * m as f64 * base.ln()).exp_m1();
    let ln_x = (u * span).ln_1p() / e;
    let top = base.as_f64().powi(m as i32) * (1.0 - f64::EPSILON);
    Ok(ln_x.exp().clamp(1.0, top))
}

fn signed(v: f64, spec: &WindowSpec, rng: &mut RngStream) -> f64 {
    if spec.random_signs && rng.next_u64() & 1 == 1 {
        -v
    } else {
        v
    }
}

/// Density exponent of diagonal entry `k` (0-based) of the triangular group.
fn triangular_diag_exponent(n: usize, side: Side, k: usize) -> usize {
    match side {
        Side::Left => k + 1,
        Side::Right => n - k,
    }
}

/// Windowed sample from the Haar density of the upper triangular group:
/// `a_kk` with density `a^{-k}` (left) or `a^{-(n-k+1)}` (right) on
/// `[1, B^m)` (1-based `k`), entries above the diagonal uniform on `[-eps, eps]`.
pub fn sample_upper_triangular_window(
    n: usize,
    base: Base,
    spec: &WindowSpec,
    side: Side,
    rng: &mut RngStream,
) -> Result<RealMatrix> {
    spec.validate()?;
    if n < 1 {
        return domain("matrix size must be at least 1");
    }
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        let j = triangular_diag_exponent(n, side, i) as f64;
        let d = sample_power_density(base, j, spec.m, rng)?;
        entries[i * n + i] = signed(d, spec, rng);
        for k in i + 1..n {
            entries[i * n + k] = rng.uniform_in(-spec.eps, spec.eps);
        }
    }
    RealMatrix::from_row_major(n, &entries)
}

/// Predicted significand law of entry `(i, j)` (0-based) of
/// [`sample_upper_triangular_window`]; `None` below the diagonal.
///
/// A diagonal entry with density `x^{-j}` has the `(B, j)` power law. Entries
/// above the diagonal are uniform on `[-eps, eps]`, whose significand is
/// exactly uniform when `eps` is an integer power of `B`.
pub fn triangular_predicted_law(n: usize, base: Base, side: Side, i: usize, j: usize) -> Result<Option<DigitLaw>> {
    if i >= n || j >= n {
        return domain(format!("entry ({i}, {j}) outside a {n}x{n} matrix"));
    }
    Ok(match i.cmp(&j) {
        std::cmp::Ordering::Greater => None,
        std::cmp::Ordering::Equal => Some(DigitLaw::from_density_exponent(
            base,
            triangular_diag_exponent(n, side, i) as f64,
        )?),
        std::cmp::Ordering::Less => Some(DigitLaw::uniform(base)),
    })
}

/// Windowed sample of the diagonal group. Free entries are log-uniform on
/// `[1, B^m)`; with `det_one` the last entry is `1 / prod(others)`.
pub fn sample_diagonal_window(
    n: usize,
    base: Base,
    spec: &WindowSpec,
    det_one: bool,
    rng: &mut RngStream,
) -> Result<RealMatrix> {
    spec.validate()?;
    if n < 1 {
        return domain("matrix size must be at least 1");
    }
    let free = if det_one { n - 1 } else { n };
    let mut d: Vec<f64> = (0..free)
        .map(|_| {
            let v = sample_log_uniform(base, spec.m, rng);
            signed(v, spec, rng)
        })
        .collect();
    if det_one {
        let prod: f64 = d.iter().product();
        d.push(1.0 / prod);
    }
    RealMatrix::diagonal(&d)
}

/// One windowed `SL_n` draw in `LUD` coordinates, `g = exp(X) exp(Y) d`.
#[derive(Debug, Clone)]
pub struct LudSample {
    /// Strictly lower `X`, entries uniform on `[-eps, eps]`.
    pub lower: RealMatrix,
    /// Strictly upper `Y`, entries uniform on `[-eps, eps]`.
    pub upper: RealMatrix,
    /// Determinant-one diagonal factor.
    pub diag: RealMatrix,
    pub g: RealMatrix,
}

pub fn sample_sln_lud_window(n: usize, base: Base, spec: &WindowSpec, rng: &mut RngStream) -> Result<LudSample> {
    spec.validate()?;
    if n < 1 {
        return domain("matrix size must be at least 1");
    }
    let mut lo = vec![0.0; n * n];
    let mut up = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..i {
            lo[i * n + j] = rng.uniform_in(-spec.eps, spec.eps);
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            up[i * n + j] = rng.uniform_in(-spec.eps, spec.eps);
        }
    }
    let lower = RealMatrix::from_row_major(n, &lo)?;
    let upper = RealMatrix::from_row_major(n, &up)?;
    let diag = sample_diagonal_window(n, base, spec, true, rng)?;
    let g = nilpotent_exp(&lower)?.mul(&nilpotent_exp(&upper)?).mul(&diag);
    Ok(LudSample { lower, upper, diag, g })
}

/// One windowed `GL_n^+` draw, `g = r^{1/n} y` with `r` log-uniform and `y` in `SL_n`.
#[derive(Debug, Clone)]
pub struct GlnSample {
    pub r: f64,
    pub y: RealMatrix,
    pub g: RealMatrix,
}

pub fn sample_gln_pos_window(n: usize, base: Base, spec: &WindowSpec, rng: &mut RngStream) -> Result<GlnSample> {
    spec.validate()?;
    let r = sample_log_uniform(base, spec.m, rng);
    let y = sample_sln_lud_window(n, base, spec, rng)?.g;
    let g = y.scale(r.powf(1.0 / n as f64));
    Ok(GlnSample { r, y, g })
}
