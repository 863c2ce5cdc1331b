//! Digit laws of the coordinates of a uniform point on the unit sphere `S^n`.
//!
//! `S^n` sits in `R^{n+1}`; the first coordinate `x_1` has density
//! proportional to `(1 - x^2)^{n/2 - 1}` on `[-1, 1]`. The significand laws
//! below come from summing that density over the scale bands
//! `[a B^{-i}, b B^{-i}]`, either exactly by quadrature or through the Gaussian
//! (erf) approximation that takes over for large `n`.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::significand::Base;
use crate::specfun::{erf_diff, gamma_half_ratio, integrate, integrate_arcsine, log_gamma_ratio, QuadratureSpec};

/// Default relative cut-off for the scale series.
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

/// Scale sums give up after this many terms; `B^{-i}` has long underflowed.
const MAX_SCALES: i32 = 1100;

/// Arguments of erf beyond this contribute less than 1e-19 to any band.
const ERF_SATURATION: f64 = 6.5;

const BAND_QUAD: QuadratureSpec = QuadratureSpec {
    abs_tol: 1e-16,
    rel_tol: 1e-13,
    max_depth: 60,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereLawParams {
    /// Sphere dimension; the point has `n + 1` coordinates.
    pub n: u64,
    pub base: Base,
    pub tail_tol: f64,
}

impl SphereLawParams {
    pub fn new(n: u64, base: Base) -> Result<Self> {
        Self::with_tail_tol(n, base, DEFAULT_TAIL_TOL)
    }

    pub fn with_tail_tol(n: u64, base: Base, tail_tol: f64) -> Result<Self> {
        if n < 1 {
            return domain("sphere dimension must be at least 1");
        }
        if !(tail_tol > 0.0) {
            return domain("tail tolerance must be positive");
        }
        Ok(SphereLawParams { n, base, tail_tol })
    }

    /// `sqrt(n/2)`, the Gaussian scale of a coordinate.
    fn gauss_scale(&self) -> f64 {
        (self.n as f64 / 2.0).sqrt()
    }
}

/// `(1 - x^2)^{n/2 - 1}` for `n >= 2`.
fn marginal_kernel(n: u64, x: f64) -> f64 {
    if n == 2 {
        1.0
    } else {
        ((n as f64 / 2.0 - 1.0) * (-x * x).ln_1p()).exp()
    }
}

/// `int_a^b (1 - x^2)^{n/2 - 1} dx` for `-1 <= a <= b <= 1`.
fn kernel_integral(n: u64, a: f64, b: f64) -> Result<f64> {
    match n {
        1 => integrate_arcsine(|_| 1.0, a, b, BAND_QUAD),
        2 => Ok(b - a),
        _ => integrate(|x| marginal_kernel(n, x), a, b, BAND_QUAD),
    }
}

fn check_s(base: Base, s: f64) -> Result<()> {
    if !(1.0..=base.as_f64()).contains(&s) {
        return domain(format!("significand {s} outside [1, {}]", base.get()));
    }
    Ok(())
}

/// Sums `term(i)` for `i = first, first + 1, ...` until the terms fall below
/// `tail_tol` times the running sum after the series has started to decay.
/// Once the cut is reached the terms shrink like `B^{-i}`, so the remainder is
/// added as a geometric tail.
fn scale_series<T>(base: Base, first: i32, tail_tol: f64, mut term: T) -> Result<f64>
where
    T: FnMut(i32) -> Result<f64>,
{
    let b = base.as_f64();
    let mut sum = 0.0;
    let mut prev = 0.0;
    for i in first..first + MAX_SCALES {
        let t = term(i)?;
        sum += t;
        if sum > 0.0 && t <= prev && t < tail_tol * sum {
            return Ok(sum + t / (b - 1.0));
        }
        prev = t;
    }
    Ok(sum)
}

/// Probability that the first coordinate of a uniform point on `S^n` lies in `(a, b)`.
pub fn sphere_band_prob(n: u64, a: f64, b: f64) -> Result<f64> {
    if n < 1 {
        return domain("sphere dimension must be at least 1");
    }
    if !(-1.0..=1.0).contains(&a) || !(-1.0..=1.0).contains(&b) || a >= b {
        return domain(format!("band ({a}, {b}) must satisfy -1 <= a < b <= 1"));
    }
    Ok(gamma_half_ratio(n)? / PI.sqrt() * kernel_integral(n, a, b)?)
}

/// `P(a <= S_B(x_1) <= b)` by the doubled exact band sum.
fn exact_band_sum(p: &SphereLawParams, a: f64, b: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let c = 2.0 * gamma_half_ratio(p.n)? / PI.sqrt();
    let base = p.base.as_f64();
    let sum = scale_series(p.base, 1, p.tail_tol, |i| {
        let scale = base.powi(-i);
        Ok(c * kernel_integral(p.n, a * scale, (b * scale).min(1.0))?)
    })?;
    Ok(sum)
}

/// Exact significand CDF of the first coordinate on `S^n`.
pub fn sphere_sig_cdf_exact(p: &SphereLawParams, s: f64) -> Result<f64> {
    check_s(p.base, s)?;
    Ok(exact_band_sum(p, 1.0, s)?.clamp(0.0, 1.0))
}

/// Density of [`sphere_sig_cdf_exact`]; infinite at `s = B` when `n = 1`.
pub fn sphere_sig_density_exact(p: &SphereLawParams, s: f64) -> Result<f64> {
    check_s(p.base, s)?;
    let c = 2.0 * gamma_half_ratio(p.n)? / PI.sqrt();
    let base = p.base.as_f64();
    scale_series(p.base, 1, p.tail_tol, |i| {
        let scale = base.powi(-i);
        let x = s * scale;
        let k = if p.n == 1 {
            1.0 / (1.0 - x * x).sqrt()
        } else {
            marginal_kernel(p.n, x)
        };
        Ok(c * scale * k)
    })
}

/// `sum_{i >= first} [erf(c b / B^i) - erf(c a / B^i)]`.
fn erf_scale_sum(c: f64, base: Base, first: i32, a: f64, b: f64, tail_tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let bf = base.as_f64();
    scale_series(base, first, tail_tol, |i| {
        let scale = c * bf.powi(-i);
        erf_diff(a * scale, b * scale)
    })
}

/// Gaussian approximation of the significand band probability `P(a <= S_B(x_1) < b)`.
pub fn sphere_band_erf(p: &SphereLawParams, a: f64, b: f64) -> Result<f64> {
    check_s(p.base, a)?;
    check_s(p.base, b)?;
    if a > b {
        return domain(format!("band [{a}, {b}) is reversed"));
    }
    erf_scale_sum(p.gauss_scale(), p.base, 1, a, b, p.tail_tol)
}

/// Gaussian approximation of the significand CDF, valid as `n` grows.
pub fn sphere_sig_cdf_erf(p: &SphereLawParams, s: f64) -> Result<f64> {
    if p.n < 2 {
        return domain("the erf approximation needs n >= 2");
    }
    Ok(sphere_band_erf(p, 1.0, s)?.clamp(0.0, 1.0))
}

fn gauss_density_sum(c: f64, base: Base, first: i32, s: f64, tail_tol: f64) -> Result<f64> {
    let bf = base.as_f64();
    let k = 2.0 / PI.sqrt();
    scale_series(base, first, tail_tol, |i| {
        let scale = c * bf.powi(-i);
        let y = s * scale;
        Ok(k * scale * (-y * y).exp())
    })
}

pub fn sphere_sig_density_erf(p: &SphereLawParams, s: f64) -> Result<f64> {
    if p.n < 2 {
        return domain("the erf approximation needs n >= 2");
    }
    check_s(p.base, s)?;
    gauss_density_sum(p.gauss_scale(), p.base, 1, s, p.tail_tol)
}

/// First scale index whose erf arguments are no longer saturated.
fn first_live_scale(c: f64, base: Base) -> i32 {
    let b = base.as_f64();
    let mut i = ((c / ERF_SATURATION).ln() / base.ln()).floor() as i32;
    while c * b.powi(-i) < ERF_SATURATION {
        i -= 1;
    }
    while c * b.powi(-(i + 1)) >= ERF_SATURATION {
        i += 1;
    }
    i
}

/// The limiting law `F_n(x) = sum_{i in Z} [erf(sqrt(n/2) x / B^i) - erf(sqrt(n/2) / B^i)]`.
///
/// `F_n = F_{n B^2}`, so there are `B^2 - 1` distinct laws, one for each `1 <= n < B^2`.
pub fn sphere_limit_cdf(n: u64, base: Base, x: f64) -> Result<f64> {
    if n < 1 {
        return domain("limit law index n must be at least 1");
    }
    check_s(base, x)?;
    let c = (n as f64 / 2.0).sqrt();
    let first = first_live_scale(c, base);
    Ok(erf_scale_sum(c, base, first, 1.0, x, DEFAULT_TAIL_TOL)?.clamp(0.0, 1.0))
}

pub fn sphere_limit_density(n: u64, base: Base, x: f64) -> Result<f64> {
    if n < 1 {
        return domain("limit law index n must be at least 1");
    }
    check_s(base, x)?;
    let c = (n as f64 / 2.0).sqrt();
    let first = first_live_scale(c, base);
    gauss_density_sum(c, base, first, x, DEFAULT_TAIL_TOL)
}

/// Whether `n` is large enough (`sqrt(n/2)/B > 4`) for the periodic limit
/// laws to describe `S^{n B^{2l}}`.
pub fn limit_regime_valid(n: u64, base: Base) -> bool {
    (n as f64 / 2.0).sqrt() / base.as_f64() > 4.0
}

/// `int_a^{min(b, R)} (R^2 - x^2)^p dx` with `R = sqrt(r2)`, via `x = R sin(t)`.
fn radial_integral(r2: f64, a: f64, b: f64, p: f64, quad: QuadratureSpec) -> Result<f64> {
    if r2 <= 0.0 {
        return Ok(0.0);
    }
    let r = r2.sqrt();
    if a >= r {
        return Ok(0.0);
    }
    let lo = (a / r).asin();
    let hi = (b.min(r) / r).min(1.0).asin();
    let e = 2.0 * p + 1.0;
    let inner = if e == 0.0 {
        hi - lo
    } else {
        integrate(|t: f64| t.cos().max(0.0).powf(e), lo, hi, quad)?
    };
    Ok(r.powf(e) * inner)
}

/// Number of points in the quasi-random rule used for three coordinates.
const QMC_POINTS: usize = 1 << 18;

/// Joint probability `P(a_j <= |x_j| < b_j, j = 1..k)` for the first `k <= 3`
/// coordinates of a uniform point on `S^n`.
///
/// The box is clipped to the unit ball. `k <= 2` uses nested adaptive
/// quadrature; `k = 3` integrates the first two coordinates with an R2
/// low-discrepancy rule (accuracy about 1e-4) and the last one by quadrature.
pub fn sphere_joint_band_prob(n: u64, bounds: &[(f64, f64)]) -> Result<f64> {
    let k = bounds.len();
    if k == 0 {
        return domain("at least one coordinate band is required");
    }
    if k > 3 {
        return Err(Error::Unsupported(format!(
            "joint band probabilities for {k} > 3 coordinates"
        )));
    }
    if (k as u64) > n {
        return domain(format!("need k < n + 1, got k = {k}, n = {n}"));
    }
    for &(a, b) in bounds {
        if !(0.0 <= a && a < b && b <= 1.0) {
            return domain(format!("band ({a}, {b}) must satisfy 0 <= a < b <= 1"));
        }
    }
    let kf = k as f64;
    let nf = n as f64;
    // (2/sqrt(pi))^k Gamma(n/2 + 1/2) / Gamma(n/2 - k/2 + 1/2)
    let norm = (2.0 / PI.sqrt()).powi(k as i32) * log_gamma_ratio((nf - kf + 1.0) / 2.0, kf / 2.0)?.exp();
    let p = (nf - kf - 1.0) / 2.0;
    let inner_quad = QuadratureSpec {
        abs_tol: 1e-15,
        rel_tol: 1e-12,
        max_depth: 50,
    };
    let value = match k {
        1 => radial_integral(1.0, bounds[0].0, bounds[0].1, p, inner_quad)?,
        2 => {
            let (a1, b1) = bounds[0];
            let (a2, b2) = bounds[1];
            let outer = QuadratureSpec {
                abs_tol: 1e-13,
                rel_tol: 1e-11,
                max_depth: 50,
            };
            let failed = std::cell::Cell::new(None);
            let v = integrate(
                |x: f64| match radial_integral(1.0 - x * x, a2, b2, p, inner_quad) {
                    Ok(v) => v,
                    Err(e) => {
                        failed.set(Some(e));
                        0.0
                    }
                },
                a1,
                b1,
                outer,
            )?;
            if let Some(e) = failed.into_inner() {
                return Err(e);
            }
            v
        }
        _ => {
            let (a1, b1) = bounds[0];
            let (a2, b2) = bounds[1];
            let (a3, b3) = bounds[2];
            let quad = QuadratureSpec {
                abs_tol: 1e-12,
                rel_tol: 1e-9,
                max_depth: 40,
            };
            // R2 sequence: additive recurrence on the plastic number.
            let g = 1.324_717_957_244_746;
            let alpha = (1.0 / g, 1.0 / (g * g));
            let mut acc = 0.0;
            for i in 0..QMC_POINTS {
                let t = i as f64 + 1.0;
                let u = (0.5 + alpha.0 * t).fract();
                let v = (0.5 + alpha.1 * t).fract();
                let x1 = a1 + (b1 - a1) * u;
                let x2 = a2 + (b2 - a2) * v;
                let r2 = 1.0 - x1 * x1 - x2 * x2;
                acc += radial_integral(r2, a3, b3, p, quad)?;
            }
            acc / QMC_POINTS as f64 * (b1 - a1) * (b2 - a2)
        }
    };
    Ok(norm * value)
}

/// Asymptotic joint significand probability
/// `prod_j sum_i [erf(sqrt(n/2) b_j / B^i) - erf(sqrt(n/2) a_j / B^i)]`
/// for the first `bounds.len()` coordinates of a point on `S^n`.
pub fn sphere_joint_sig_approx(n: u64, base: Base, bounds: &[(f64, f64)]) -> Result<f64> {
    if bounds.is_empty() {
        return domain("at least one coordinate band is required");
    }
    let p = SphereLawParams::new(n, base)?;
    bounds
        .iter()
        .try_fold(1.0, |acc, &(a, b)| Ok(acc * sphere_band_erf(&p, a, b)?))
}
