//! Numerical checks of the change-of-variables computations behind the
//! `SL_n` digit laws: restricted adjoint determinants, and the hyperbolic and
//! `SL_2` cone volumes.

use nalgebra::{DMatrix, Matrix4};
use serde::Serialize;

use crate::error::{domain, Result};
use crate::matrix::{basis, RealMatrix};
use crate::rng::RngStream;
use crate::significand::Base;
use crate::specfun::{integrate, QuadratureSpec};

/// A restricted adjoint determinant computed by conjugating basis elements.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdjointDet {
    /// Determinant of the assembled coordinate matrix.
    pub value: f64,
    /// Closed-form product over the diagonal entries.
    pub closed_form: f64,
    /// Largest entry strictly below the diagonal of the coordinate matrix.
    pub triangular_residual: f64,
}

fn check_diagonal(d: &RealMatrix) -> Result<()> {
    if !d.is_diagonal() {
        return domain("expected a diagonal matrix");
    }
    if d.diag().iter().any(|v| *v == 0.0 || !v.is_finite()) {
        return domain("diagonal matrix is singular");
    }
    Ok(())
}

/// Matrix of `X -> g^{-1} X g` on the span of `positions`, column `c` holding
/// the coordinates of the image of `E_{positions[c]}`.
fn restricted_adjoint(g: &RealMatrix, positions: &[(usize, usize)]) -> Result<DMatrix<f64>> {
    let n = g.n();
    let g_inv = g.inverse()?;
    let k = positions.len();
    let mut m = DMatrix::zeros(k, k);
    for (c, &(i, j)) in positions.iter().enumerate() {
        let image = g_inv.mul(&RealMatrix::unit(n, i, j)).mul(g);
        for (r, &(p, q)) in positions.iter().enumerate() {
            m[(r, c)] = image.get(p, q);
        }
    }
    Ok(m)
}

fn lower_residual(m: &DMatrix<f64>) -> f64 {
    let k = m.nrows();
    let mut worst: f64 = 0.0;
    for r in 0..k {
        for c in 0..r {
            worst = worst.max(m[(r, c)].abs());
        }
    }
    worst
}

fn det_of(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        1.0
    } else {
        m.determinant()
    }
}

/// `det Ad(d^{-1})` on the strictly upper algebra, `prod_{i<j} d_jj / d_ii`.
pub fn adjoint_det_on_u(d: &RealMatrix) -> Result<AdjointDet> {
    check_diagonal(d)?;
    let positions = basis::upper(d.n());
    let m = restricted_adjoint(d, &positions)?;
    let dv = d.diag();
    let closed_form = positions.iter().map(|&(i, j)| dv[j] / dv[i]).product();
    Ok(AdjointDet {
        value: det_of(&m),
        closed_form,
        triangular_residual: lower_residual(&m),
    })
}

/// `det` of `Ad((ud)^{-1})` on the strictly lower algebra, after projecting
/// away the non-lower part of each image.
///
/// In the basis ordered by sub-diagonal the coordinate matrix is upper
/// triangular with diagonal `d_jj / d_ii`, so the result is
/// `prod_{i>j} d_jj / d_ii` for every `u`.
pub fn adjoint_det_on_l(u: &RealMatrix, d: &RealMatrix) -> Result<AdjointDet> {
    check_diagonal(d)?;
    if u.n() != d.n() {
        return domain("u and d must have the same size");
    }
    if !u.is_unit_upper() {
        return domain("u must be unit upper triangular");
    }
    let positions = basis::lower_by_subdiagonal(d.n());
    let m = restricted_adjoint(&u.mul(d), &positions)?;
    let dv = d.diag();
    let closed_form = positions.iter().map(|&(i, j)| dv[j] / dv[i]).product();
    Ok(AdjointDet {
        value: det_of(&m),
        closed_form,
        triangular_residual: lower_residual(&m),
    })
}

/// Area of the cone over the hyperbola arc `{(x, 1/x) : a <= x <= b}`.
pub fn hyperbolic_cone_area(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0) || !(b >= a) || !b.is_finite() {
        return domain(format!("need 0 < a <= b, got a = {a}, b = {b}"));
    }
    Ok((b / a).ln())
}

/// A Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub trials: u64,
    pub hits: u64,
}

impl McEstimate {
    fn from_hits(hits: u64, trials: u64, box_volume: f64) -> Self {
        let p = hits as f64 / trials as f64;
        McEstimate {
            estimate: p * box_volume,
            std_error: box_volume * (p * (1.0 - p) / trials as f64).sqrt(),
            trials,
            hits,
        }
    }
}

/// Rejection estimate of [`hyperbolic_cone_area`]: a point `(p, q)` of the box
/// `[0, b] x [0, 1/a]` is in the cone iff `pq <= 1` and `p / sqrt(pq)` lies in `[a, b]`.
pub fn hyperbolic_cone_area_mc(a: f64, b: f64, trials: u64, rng: &mut RngStream) -> Result<McEstimate> {
    hyperbolic_cone_area(a, b)?;
    if trials == 0 {
        return domain("need at least one trial");
    }
    let mut hits = 0;
    for _ in 0..trials {
        let p = b * rng.uniform_open();
        let q = rng.uniform_open() / a;
        let delta = p * q;
        if delta <= 1.0 {
            let x = p / delta.sqrt();
            if (a..=b).contains(&x) {
                hits += 1;
            }
        }
    }
    Ok(McEstimate::from_hits(hits, trials, b / a))
}

/// The `SL_2` cone over the graph of `d = (1 + bc) / a` on
/// `D = [1, x) x [-eps, eps] x [-eps, eps]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConeProblem {
    pub x_max: f64,
    pub eps: f64,
    pub base: Base,
}

impl ConeProblem {
    pub fn new(x_max: f64, eps: f64, base: Base) -> Result<Self> {
        if !(x_max > 1.0) || x_max > base.as_f64() {
            return domain(format!("x_max must lie in (1, {}], got {x_max}", base.get()));
        }
        if !(eps > 0.0) {
            return domain(format!("eps must be positive, got {eps}"));
        }
        if eps >= 1.0 {
            return domain(format!("eps = {eps} >= 1 lets 1 + bc vanish on the domain"));
        }
        Ok(ConeProblem { x_max, eps, base })
    }

    fn check_x(&self, x: f64) -> Result<()> {
        if !(x > 1.0) || x > self.x_max {
            return domain(format!("x must lie in (1, {}], got {x}", self.x_max));
        }
        Ok(())
    }
}

/// Terms of the cone volume from slicing along `w = t a`.
///
/// Writing `(w, x, y, z) = t (a, b, c, d)`, a slice at fixed `(w, x, y)` is a
/// `z`-interval of length `(T^2 - t_min^2) / w` with `T = min(1, w)` and
/// `t_min = max(w / x_max, |x| / eps, |y| / eps)`. Integrating over the
/// `(x, y)` square gives `eps^2 (4 T^4 - 2 T^4 - 2 (w / x_max)^4) / w`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConeCoefficient {
    /// `T^2` over the full square for `w >= 1`: coefficient of `log x`.
    pub strip: f64,
    /// `max(|x|, |y|)^2` pyramid for `w >= 1`: coefficient of `log x`, subtracted.
    pub pyramid: f64,
    /// Net `T^2` term for `w < 1` (a constant).
    pub cap: f64,
    /// `(w / x_max)^4` term over `0 < w < x_max` (a constant, subtracted).
    pub apex: f64,
    /// `F(eps) = strip - pyramid`.
    pub total: f64,
    /// `cap - apex`, the part of the volume not proportional to `log x`.
    pub remainder: f64,
}

/// `F(eps)` and the constant terms of the slicing integral.
pub fn cone_coefficient(eps: f64) -> Result<ConeCoefficient> {
    if !(eps > 0.0) || eps >= 1.0 {
        return domain(format!("eps must lie in (0, 1), got {eps}"));
    }
    let e2 = eps * eps;
    // int_1^x dw / w  (4 - 2)  and  int_0^1 w^3 (4 - 2) dw,  int_0^x 2 w^3 / x^4 dw
    let strip = 4.0 * e2;
    let pyramid = 2.0 * e2;
    let cap = 2.0 * e2 / 4.0;
    let apex = 2.0 * e2 / 4.0;
    Ok(ConeCoefficient {
        strip,
        pyramid,
        cap,
        apex,
        total: strip - pyramid,
        remainder: cap - apex,
    })
}

fn cone_jacobian(a: f64, b: f64, c: f64) -> f64 {
    // (t, a, b, c) -> t * (a, b, c, (1 + bc) / a), with the t^3 factored out.
    let d = (1.0 + b * c) / a;
    let m = Matrix4::new(
        a,
        b,
        c,
        d, //
        1.0,
        0.0,
        0.0,
        -d / a, //
        0.0,
        1.0,
        0.0,
        c / a, //
        0.0,
        0.0,
        1.0,
        b / a,
    );
    m.determinant().abs()
}

/// `F(eps)` by integrating the Jacobian of the cone parametrization:
/// `F = (1/4) int int |J(1, b, c)| db dc`, the `a`-dependence being `1/a`.
pub fn cone_coefficient_jacobian(eps: f64) -> Result<f64> {
    cone_coefficient(eps)?;
    let spec = QuadratureSpec::default();
    let inner = |b: f64| integrate(|c| cone_jacobian(1.0, b, c), -eps, eps, spec).unwrap_or(f64::NAN);
    let total = integrate(inner, -eps, eps, spec)?;
    Ok(total / 4.0)
}

/// Volume `log(x) F(eps)` of the cone `{t g : 0 < t <= 1, g in graph}` over `[1, x)`.
pub fn sl2_cone_volume(problem: &ConeProblem, x: f64) -> Result<f64> {
    problem.check_x(x)?;
    let f = cone_coefficient(problem.eps)?;
    Ok(x.ln() * f.total + f.remainder)
}

/// `P(S_B(a) < x) = vol(x) / vol(B)`.
pub fn sl2_induced_cdf(problem: &ConeProblem, x: f64) -> Result<f64> {
    let full = ConeProblem {
        x_max: problem.base.as_f64(),
        ..*problem
    };
    Ok(sl2_cone_volume(&full, x)? / sl2_cone_volume(&full, full.x_max)?)
}

/// Rejection estimate of [`sl2_cone_volume`] over the box
/// `[0, x] x [-eps, eps]^2 x [0, 1 + eps^2]`.
pub fn sl2_cone_volume_mc(problem: &ConeProblem, x: f64, trials: u64, rng: &mut RngStream) -> Result<McEstimate> {
    problem.check_x(x)?;
    if trials == 0 {
        return domain("need at least one trial");
    }
    let eps = problem.eps;
    let z_top = 1.0 + eps * eps;
    let mut hits = 0;
    for _ in 0..trials {
        let w = x * rng.uniform();
        let xh = rng.uniform_in(-eps, eps);
        let yh = rng.uniform_in(-eps, eps);
        let zh = z_top * rng.uniform();
        let delta = w * zh - xh * yh;
        if delta > 0.0 && delta <= 1.0 {
            let t = delta.sqrt();
            let (a, b, c) = (w / t, xh / t, yh / t);
            if (1.0..x).contains(&a) && b.abs() <= eps && c.abs() <= eps {
                hits += 1;
            }
        }
    }
    Ok(McEstimate::from_hits(hits, trials, x * 4.0 * eps * eps * z_top))
}
