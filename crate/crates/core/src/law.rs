//! Analytic digit laws: densities on `[1, B)` and their CDFs.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::significand::Base;
use crate::sphere::{self, SphereLawParams};

/// Exponents closer to 1 than this are treated as the Benford case.
const UNIT_EXPONENT_EPS: f64 = 1e-12;

/// A significand law on `[1, B)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum DigitLaw {
    /// Density `1 / (s ln B)`, CDF `log_B s`.
    Benford { base: Base },
    /// Density proportional to `s^{-k}`; `k = 1` is Benford.
    PowerLaw { base: Base, k: f64 },
    /// Uniform significand, CDF `(s - 1) / (B - 1)`.
    UniformSig { base: Base },
    /// First coordinate of a uniform point on `S^n`, by exact quadrature.
    SphereExact { base: Base, n: u64 },
    /// Gaussian (erf) approximation of `SphereExact`, `n >= 2`.
    SphereErf { base: Base, n: u64 },
    /// Periodic limiting law `F_n`.
    SphereLimit { base: Base, n: u64 },
    /// Independent coordinates; evaluated with the `joint_*` methods.
    Product { factors: Vec<DigitLaw> },
}

impl DigitLaw {
    pub fn benford(base: Base) -> Self {
        DigitLaw::Benford { base }
    }

    pub fn uniform(base: Base) -> Self {
        DigitLaw::UniformSig { base }
    }

    pub fn power(base: Base, k: f64) -> Result<Self> {
        if !(k > 0.0) || !k.is_finite() {
            return domain(format!("power-law exponent must be positive and finite, got {k}"));
        }
        Ok(DigitLaw::PowerLaw { base, k })
    }

    /// The law of a component whose density is proportional to `x^{-j}`.
    pub fn from_density_exponent(base: Base, j: f64) -> Result<Self> {
        if (j - 1.0).abs() < UNIT_EXPONENT_EPS {
            Ok(DigitLaw::benford(base))
        } else {
            DigitLaw::power(base, j)
        }
    }

    pub fn sphere_exact(base: Base, n: u64) -> Result<Self> {
        SphereLawParams::new(n, base)?;
        Ok(DigitLaw::SphereExact { base, n })
    }

    pub fn sphere_erf(base: Base, n: u64) -> Result<Self> {
        if n < 2 {
            return domain("the erf sphere law needs n >= 2");
        }
        Ok(DigitLaw::SphereErf { base, n })
    }

    pub fn sphere_limit(base: Base, n: u64) -> Result<Self> {
        SphereLawParams::new(n, base)?;
        Ok(DigitLaw::SphereLimit { base, n })
    }

    pub fn product(factors: Vec<DigitLaw>) -> Result<Self> {
        if factors.is_empty() {
            return domain("a product law needs at least one factor");
        }
        if factors.iter().any(|f| matches!(f, DigitLaw::Product { .. })) {
            return domain("product laws do not nest");
        }
        Ok(DigitLaw::Product { factors })
    }

    /// Base of a scalar law; a product reports the base of its first factor.
    pub fn base(&self) -> Base {
        match self {
            DigitLaw::Benford { base }
            | DigitLaw::PowerLaw { base, .. }
            | DigitLaw::UniformSig { base }
            | DigitLaw::SphereExact { base, .. }
            | DigitLaw::SphereErf { base, .. }
            | DigitLaw::SphereLimit { base, .. } => *base,
            DigitLaw::Product { factors } => factors[0].base(),
        }
    }

    pub fn is_scalar(&self) -> bool {
        !matches!(self, DigitLaw::Product { .. })
    }

    fn scalar_only(&self, what: &str) -> Result<()> {
        if self.is_scalar() {
            Ok(())
        } else {
            Err(Error::Unsupported(format!(
                "{what} of a product law; use the joint_* methods"
            )))
        }
    }

    fn check_s(&self, s: f64) -> Result<()> {
        let b = self.base().as_f64();
        if !(1.0..=b).contains(&s) {
            return domain(format!("significand {s} outside [1, {b}]"));
        }
        Ok(())
    }

    /// `P(S_B <= s)` for `s` in `[1, B]`. Returns exactly 0 at `s = 1` and
    /// exactly 1 at `s = B`.
    pub fn cdf(&self, s: f64) -> Result<f64> {
        self.scalar_only("cdf")?;
        self.check_s(s)?;
        let base = self.base();
        let b = base.as_f64();
        if s == 1.0 {
            return Ok(0.0);
        }
        if s == b {
            return Ok(1.0);
        }
        match self {
            DigitLaw::Benford { .. } => Ok(s.ln() / base.ln()),
            DigitLaw::UniformSig { .. } => Ok((s - 1.0) / (b - 1.0)),
            DigitLaw::PowerLaw { k, .. } => Ok(power_cdf(base, *k, s)),
            DigitLaw::SphereExact { n, .. } => sphere::sphere_sig_cdf_exact(&SphereLawParams::new(*n, base)?, s),
            DigitLaw::SphereErf { n, .. } => sphere::sphere_sig_cdf_erf(&SphereLawParams::new(*n, base)?, s),
            DigitLaw::SphereLimit { n, .. } => sphere::sphere_limit_cdf(*n, base, s),
            DigitLaw::Product { .. } => unreachable!(),
        }
    }

    pub fn density(&self, s: f64) -> Result<f64> {
        self.scalar_only("density")?;
        self.check_s(s)?;
        let base = self.base();
        match self {
            DigitLaw::Benford { .. } => Ok(1.0 / (s * base.ln())),
            DigitLaw::UniformSig { .. } => Ok(1.0 / (base.as_f64() - 1.0)),
            DigitLaw::PowerLaw { k, .. } => Ok(power_density(base, *k, s)),
            DigitLaw::SphereExact { n, .. } => sphere::sphere_sig_density_exact(&SphereLawParams::new(*n, base)?, s),
            DigitLaw::SphereErf { n, .. } => sphere::sphere_sig_density_erf(&SphereLawParams::new(*n, base)?, s),
            DigitLaw::SphereLimit { n, .. } => sphere::sphere_limit_density(*n, base, s),
            DigitLaw::Product { .. } => unreachable!(),
        }
    }

    /// Inverse CDF for `p` in `[0, 1]`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        self.scalar_only("quantile")?;
        if !(0.0..=1.0).contains(&p) {
            return domain(format!("probability {p} outside [0, 1]"));
        }
        let base = self.base();
        let b = base.as_f64();
        match self {
            DigitLaw::Benford { .. } => Ok(b.powf(p).clamp(1.0, b)),
            DigitLaw::UniformSig { .. } => Ok(1.0 + (b - 1.0) * p),
            DigitLaw::PowerLaw { k, .. } if (k - 1.0).abs() < UNIT_EXPONENT_EPS => Ok(b.powf(p).clamp(1.0, b)),
            DigitLaw::PowerLaw { k, .. } => {
                // s^{1-k} = 1 + p (B^{1-k} - 1)
                let e = 1.0 - k;
                let t = (p * (e * base.ln()).exp_m1()).ln_1p() / e;
                Ok(t.exp().clamp(1.0, b))
            }
            _ => {
                let (mut lo, mut hi) = (1.0, b);
                for _ in 0..80 {
                    let mid = 0.5 * (lo + hi);
                    if self.cdf(mid)? < p {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                Ok(0.5 * (lo + hi))
            }
        }
    }

    /// Probabilities of the leading digits `1..B`, entry `d - 1` for digit `d`.
    pub fn first_digit_probs(&self) -> Result<Vec<f64>> {
        self.scalar_only("first-digit probabilities")?;
        let digits = self.base().get();
        let cdfs = (1..=digits).map(|d| self.cdf(d as f64)).collect::<Result<Vec<_>>>()?;
        Ok(cdfs.windows(2).map(|w| w[1] - w[0]).collect())
    }

    /// Joint CDF, one coordinate per factor (a scalar law takes one coordinate).
    pub fn joint_cdf(&self, s: &[f64]) -> Result<f64> {
        match self {
            DigitLaw::Product { factors } => {
                if s.len() != factors.len() {
                    return domain(format!("expected {} coordinates, got {}", factors.len(), s.len()));
                }
                factors.iter().zip(s).try_fold(1.0, |acc, (f, &x)| Ok(acc * f.cdf(x)?))
            }
            _ if s.len() == 1 => self.cdf(s[0]),
            _ => domain("a scalar law takes exactly one coordinate"),
        }
    }

    pub fn joint_density(&self, s: &[f64]) -> Result<f64> {
        match self {
            DigitLaw::Product { factors } => {
                if s.len() != factors.len() {
                    return domain(format!("expected {} coordinates, got {}", factors.len(), s.len()));
                }
                factors
                    .iter()
                    .zip(s)
                    .try_fold(1.0, |acc, (f, &x)| Ok(acc * f.density(x)?))
            }
            _ if s.len() == 1 => self.density(s[0]),
            _ => domain("a scalar law takes exactly one coordinate"),
        }
    }
}

/// `(1 - s^{1-k}) / (1 - B^{1-k})`, written with expm1 so that `k -> 1` is smooth.
fn power_cdf(base: Base, k: f64, s: f64) -> f64 {
    let e = 1.0 - k;
    if e.abs() < UNIT_EXPONENT_EPS {
        return s.ln() / base.ln();
    }
    (e * s.ln()).exp_m1() / (e * base.ln()).exp_m1()
}

/// `(k - 1) B^{k-1} / (B^{k-1} - 1) * s^{-k}`, the normalised power density.
fn power_density(base: Base, k: f64, s: f64) -> f64 {
    let e = 1.0 - k;
    if e.abs() < UNIT_EXPONENT_EPS {
        return 1.0 / (s * base.ln());
    }
    e / (e * base.ln()).exp_m1() * s.powf(-k)
}

/// Significand CDF of the density `x^{-k}` restricted to `[1, B^m)`:
/// `sum_{l<m} int_{B^l}^{B^l s} x^{-k} dx / int_1^{B^m} x^{-k} dx`.
pub fn windowed_power_cdf(base: Base, k: f64, m: u32, s: f64) -> Result<f64> {
    if m == 0 {
        return domain("window must span at least one decade (m >= 1)");
    }
    if !(k > 0.0) || !k.is_finite() {
        return domain(format!("power-law exponent must be positive and finite, got {k}"));
    }
    let b = base.as_f64();
    if !(1.0..=b).contains(&s) {
        return domain(format!("significand {s} outside [1, {b}]"));
    }
    let lnb = base.ln();
    let e = 1.0 - k;
    if e.abs() < UNIT_EXPONENT_EPS {
        let num: f64 = (0..m).map(|_| s.ln()).sum();
        return Ok(num / (m as f64 * lnb));
    }
    // int_{B^l}^{B^l s} x^{-k} dx = B^{l(1-k)} (s^{1-k} - 1) / (1-k)
    let piece = (e * s.ln()).exp_m1() / e;
    let num: f64 = (0..m).map(|l| (e * l as f64 * lnb).exp() * piece).sum();
    let den = (e * m as f64 * lnb).exp_m1() / e;
    Ok((num / den).clamp(0.0, 1.0))
}
