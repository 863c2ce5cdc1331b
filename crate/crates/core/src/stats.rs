//! Empirical significand distributions and goodness-of-fit statistics.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::law::DigitLaw;
use crate::significand::{leading_digit_of, significand, Base};
use crate::specfun::erfc;

/// Default significance level for pass/fail decisions.
pub const DEFAULT_ALPHA: f64 = 0.001;

/// Sorted significands of a sample together with leading-digit counts.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDigitDistribution {
    base: Base,
    values: Vec<f64>,
    digit_counts: Vec<u64>,
    rejected: usize,
}

impl EmpiricalDigitDistribution {
    /// Builds from raw samples; zero and non-finite samples are skipped and counted.
    pub fn from_samples(samples: &[f64], base: Base) -> Result<Self> {
        let mut values = Vec::with_capacity(samples.len());
        let mut rejected = 0;
        for &x in samples {
            match significand(x, base) {
                Ok(d) => values.push(d.significand),
                Err(_) => rejected += 1,
            }
        }
        Self::from_significands(values, base, rejected)
    }

    fn from_significands(mut values: Vec<f64>, base: Base, rejected: usize) -> Result<Self> {
        if values.is_empty() {
            return domain(format!("no usable samples ({rejected} rejected)"));
        }
        values.sort_by(f64::total_cmp);
        let mut digit_counts = vec![0; base.digit_count()];
        for &s in &values {
            digit_counts[leading_digit_of(s, base) as usize - 1] += 1;
        }
        Ok(EmpiricalDigitDistribution {
            base,
            values,
            digit_counts,
            rejected,
        })
    }

    pub fn base(&self) -> Base {
        self.base
    }

    /// Sorted significands in `[1, B)`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Count of leading digit `d` at index `d - 1`.
    pub fn digit_counts(&self) -> &[u64] {
        &self.digit_counts
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Number of zero or non-finite inputs that were skipped.
    pub fn rejected(&self) -> usize {
        self.rejected
    }

    pub fn histogram(&self) -> DigitHistogram {
        DigitHistogram::from_counts(self.base, &self.digit_counts).expect("nonempty by construction")
    }
}

/// Shorthand for [`EmpiricalDigitDistribution::from_samples`].
pub fn build_empirical(samples: &[f64], base: Base) -> Result<EmpiricalDigitDistribution> {
    EmpiricalDigitDistribution::from_samples(samples, base)
}

/// Leading-digit frequencies, entry `d - 1` for digit `d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DigitHistogram {
    pub base: Base,
    pub probs: Vec<f64>,
}

impl DigitHistogram {
    pub fn from_counts(base: Base, counts: &[u64]) -> Result<Self> {
        if counts.len() != base.digit_count() {
            return domain(format!(
                "expected {} digit counts, got {}",
                base.digit_count(),
                counts.len()
            ));
        }
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return domain("histogram of zero samples");
        }
        Ok(DigitHistogram {
            base,
            probs: counts.iter().map(|&c| c as f64 / total as f64).collect(),
        })
    }

    pub fn from_law(law: &DigitLaw) -> Result<Self> {
        Ok(DigitHistogram {
            base: law.base(),
            probs: law.first_digit_probs()?,
        })
    }
}

/// Outcome of a goodness-of-fit test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GOFReport {
    pub test: String,
    pub statistic: f64,
    /// Degrees of freedom (chi-square tests only).
    pub dof: Option<u32>,
    /// Approximate upper-tail p-value.
    pub p_approx: f64,
    pub alpha: f64,
    /// Statistic value at which the test starts failing.
    pub critical: f64,
    pub samples: u64,
    pub pass: bool,
}

/// Two-term Kolmogorov tail `P(K > lambda) ~ 2 (e^{-2 lambda^2} - e^{-8 lambda^2})`.
pub fn kolmogorov_tail(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    let l2 = lambda * lambda;
    (2.0 * ((-2.0 * l2).exp() - (-8.0 * l2).exp())).clamp(0.0, 1.0)
}

/// Critical `sqrt(N) D` at level `alpha` for [`kolmogorov_tail`].
pub fn kolmogorov_critical(alpha: f64) -> f64 {
    // The tail is decreasing for lambda above its maximum near 0.59.
    let (mut lo, mut hi) = (0.6, 10.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if kolmogorov_tail(mid) > alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// One-sample KS distance against a scalar law, checked at level `alpha`.
pub fn ks_statistic_at(emp: &EmpiricalDigitDistribution, law: &DigitLaw, alpha: f64) -> Result<GOFReport> {
    if !law.is_scalar() {
        return Err(Error::Unsupported("KS needs a scalar law".into()));
    }
    if law.base() != emp.base {
        return domain("law and sample use different bases");
    }
    check_alpha(alpha)?;
    let n = emp.values.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &s) in emp.values.iter().enumerate() {
        let f = law.cdf(s)?;
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    let root = n.sqrt();
    let critical = kolmogorov_critical(alpha) / root;
    Ok(GOFReport {
        test: "ks".into(),
        statistic: d,
        dof: None,
        p_approx: kolmogorov_tail(root * d),
        alpha,
        critical,
        samples: emp.values.len() as u64,
        pass: d <= critical,
    })
}

/// [`ks_statistic_at`] with [`DEFAULT_ALPHA`].
pub fn ks_statistic(emp: &EmpiricalDigitDistribution, law: &DigitLaw) -> Result<GOFReport> {
    ks_statistic_at(emp, law, DEFAULT_ALPHA)
}

const Z_TABLE: [(f64, f64); 4] = [
    (0.05, 1.6448536269514722),
    (0.01, 2.3263478740408408),
    (0.001, 3.090232306167813),
    (1e-4, 3.7190164854556804),
];

fn upper_normal_quantile(alpha: f64) -> f64 {
    if let Some(&(_, z)) = Z_TABLE.iter().find(|(a, _)| (a - alpha).abs() < 1e-15) {
        return z;
    }
    let (mut lo, mut hi) = (-40.0, 40.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if 0.5 * erfc(mid / std::f64::consts::SQRT_2).unwrap_or(0.0) > alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Wilson-Hilferty upper tail of `chi^2(dof)`.
pub fn chi_square_tail(stat: f64, dof: u32) -> f64 {
    if stat <= 0.0 {
        return 1.0;
    }
    let k = dof as f64;
    let v = 2.0 / (9.0 * k);
    let z = ((stat / k).cbrt() - (1.0 - v)) / v.sqrt();
    (0.5 * erfc(z / std::f64::consts::SQRT_2).unwrap_or(0.0)).clamp(0.0, 1.0)
}

/// Wilson-Hilferty critical value of `chi^2(dof)` at level `alpha`.
pub fn chi_square_critical(dof: u32, alpha: f64) -> f64 {
    let k = dof as f64;
    let v = 2.0 / (9.0 * k);
    k * (1.0 - v + upper_normal_quantile(alpha) * v.sqrt()).powi(3)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return domain(format!("significance level must lie in (0, 1), got {alpha}"));
    }
    Ok(())
}

fn pearson(observed: &[u64], expected: &[f64]) -> f64 {
    observed
        .iter()
        .zip(expected)
        .map(|(&o, &e)| {
            let diff = o as f64 - e;
            diff * diff / e
        })
        .sum()
}

fn chi_square_report(test: &str, stat: f64, dof: u32, samples: u64, alpha: f64) -> GOFReport {
    let critical = chi_square_critical(dof, alpha);
    GOFReport {
        test: test.into(),
        statistic: stat,
        dof: Some(dof),
        p_approx: chi_square_tail(stat, dof),
        alpha,
        critical,
        samples,
        pass: stat <= critical,
    }
}

/// Pearson chi-square of the leading-digit counts against `law`, `B - 2` dof.
pub fn chi_square_first_digit_at(emp: &EmpiricalDigitDistribution, law: &DigitLaw, alpha: f64) -> Result<GOFReport> {
    if law.base() != emp.base {
        return domain("law and sample use different bases");
    }
    check_alpha(alpha)?;
    let digits = emp.base.digit_count();
    if digits < 2 {
        return domain("base 2 has a single leading digit");
    }
    let n = emp.values.len();
    if n < 5 * digits {
        return domain(format!("need at least {} samples, got {n}", 5 * digits));
    }
    let expected: Vec<f64> = law.first_digit_probs()?.iter().map(|p| p * n as f64).collect();
    if expected.iter().any(|&e| e <= 0.0) {
        return domain("law assigns zero mass to a digit");
    }
    let stat = pearson(&emp.digit_counts, &expected);
    Ok(chi_square_report(
        "chi_square",
        stat,
        digits as u32 - 1,
        n as u64,
        alpha,
    ))
}

/// [`chi_square_first_digit_at`] with [`DEFAULT_ALPHA`].
pub fn chi_square_first_digit(emp: &EmpiricalDigitDistribution, law: &DigitLaw) -> Result<GOFReport> {
    chi_square_first_digit_at(emp, law, DEFAULT_ALPHA)
}

/// Contingency chi-square for independence of paired leading digits,
/// `(B - 2)^2` dof. Digits are in `1..B`.
pub fn chi_square_independence_at(pairs: &[(u32, u32)], base: Base, alpha: f64) -> Result<GOFReport> {
    check_alpha(alpha)?;
    let k = base.digit_count();
    if pairs.is_empty() {
        return domain("no digit pairs");
    }
    let mut table = vec![0u64; k * k];
    for &(a, b) in pairs {
        if a < 1 || b < 1 || a as usize > k || b as usize > k {
            return domain(format!("digit pair ({a}, {b}) outside 1..{}", base.get()));
        }
        table[(a as usize - 1) * k + (b as usize - 1)] += 1;
    }
    let n = pairs.len() as f64;
    let rows: Vec<u64> = (0..k).map(|i| table[i * k..(i + 1) * k].iter().sum()).collect();
    let cols: Vec<u64> = (0..k).map(|j| (0..k).map(|i| table[i * k + j]).sum()).collect();
    let mut observed = Vec::new();
    let mut expected = Vec::new();
    for i in 0..k {
        for j in 0..k {
            let e = rows[i] as f64 * cols[j] as f64 / n;
            if e > 0.0 {
                observed.push(table[i * k + j]);
                expected.push(e);
            }
        }
    }
    let used_rows = rows.iter().filter(|&&r| r > 0).count();
    let used_cols = cols.iter().filter(|&&c| c > 0).count();
    if used_rows < 2 || used_cols < 2 {
        return domain("independence test needs at least two observed digits per coordinate");
    }
    let dof = ((used_rows - 1) * (used_cols - 1)) as u32;
    Ok(chi_square_report(
        "chi_square_independence",
        pearson(&observed, &expected),
        dof,
        pairs.len() as u64,
        alpha,
    ))
}

/// Total variation distance `(1/2) sum |p - q|`.
pub fn tv_distance(h1: &DigitHistogram, h2: &DigitHistogram) -> Result<f64> {
    if h1.base != h2.base || h1.probs.len() != h2.probs.len() {
        return domain("histograms use different bases");
    }
    Ok(0.5 * h1.probs.iter().zip(&h2.probs).map(|(p, q)| (p - q).abs()).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    const B10: Base = Base::TEN;

    #[test]
    fn empirical_basics() {
        let e = build_empirical(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0], B10).unwrap();
        assert_eq!(e.digit_counts(), &[1; 9]);
        let e = build_empirical(&[1e-5, 1.0, 1e3, 1e200], B10).unwrap();
        assert!(e.values().iter().all(|&v| v == 1.0));
        let e = build_empirical(&[0.0, f64::NAN, -31.0, f64::INFINITY], B10).unwrap();
        assert_eq!(e.rejected(), 3);
        assert_eq!(e.values(), &[3.1]);
        assert!(build_empirical(&[], B10).is_err());
        assert!(build_empirical(&[0.0], B10).is_err());
    }

    #[test]
    fn kolmogorov_constants() {
        assert!((kolmogorov_critical(0.001) - 1.9495).abs() < 1e-3);
        assert!((kolmogorov_critical(0.05) - 1.3581).abs() < 1e-3);
        assert!((kolmogorov_tail(1.3581) - 0.05).abs() < 1e-4);
    }

    #[test]
    fn ks_on_quantile_set() {
        for law in [
            DigitLaw::benford(B10),
            DigitLaw::power(B10, 2.5).unwrap(),
            DigitLaw::uniform(B10),
        ] {
            let n = 1000;
            let q: Vec<f64> = (1..=n)
                .map(|i| law.quantile((i as f64 - 0.5) / n as f64).unwrap())
                .collect();
            let e = build_empirical(&q, B10).unwrap();
            let r = ks_statistic(&e, &law).unwrap();
            assert!(r.statistic <= 0.5 / n as f64 + 1e-12, "{}", r.statistic);
            assert!(r.pass);
        }
    }

    #[test]
    fn ks_rejects_product() {
        let e = build_empirical(&[2.0; 10], B10).unwrap();
        let p = DigitLaw::product(vec![DigitLaw::benford(B10), DigitLaw::benford(B10)]).unwrap();
        assert!(matches!(ks_statistic(&e, &p), Err(Error::Unsupported(_))));
    }

    #[test]
    fn chi_square_exact_counts() {
        // 1000 samples split in exact uniform proportion, tested against uniform digits.
        let mut xs = Vec::new();
        for d in 1..10 {
            for k in 0..100 {
                xs.push(d as f64 + k as f64 / 100.0);
            }
        }
        let e = build_empirical(&xs, B10).unwrap();
        let r = chi_square_first_digit(&e, &DigitLaw::uniform(B10)).unwrap();
        assert!(r.statistic.abs() < 1e-12);
        assert_eq!(r.dof, Some(8));
        assert!(r.pass);
        assert!(chi_square_first_digit(&build_empirical(&[2.0; 44], B10).unwrap(), &DigitLaw::uniform(B10)).is_err());
    }

    #[test]
    fn wilson_hilferty_accuracy() {
        // Reference quantiles of chi^2 at 0.999.
        assert!((chi_square_critical(8, 0.001) - 26.12).abs() / 26.12 < 0.01);
        assert!((chi_square_critical(64, 0.001) - 104.72).abs() / 104.72 < 0.005);
        assert!((chi_square_tail(chi_square_critical(8, 0.001), 8) - 0.001).abs() < 1e-9);
        assert!((chi_square_tail(8.0, 8) - 0.4335).abs() < 0.01);
    }

    #[test]
    fn uniform_digits_fail_benford() {
        let mut rng = RngStream::new(42, 0);
        let xs: Vec<f64> = (0..100_000).map(|_| 1.0 + 9.0 * rng.uniform()).collect();
        let e = build_empirical(&xs, B10).unwrap();
        let r = chi_square_first_digit(&e, &DigitLaw::benford(B10)).unwrap();
        let pb = DigitLaw::benford(B10).first_digit_probs().unwrap();
        let expected: f64 = 1e5 * pb.iter().map(|p| (1.0 / 9.0 - p).powi(2) / p).sum::<f64>();
        assert!(!r.pass);
        assert!(
            (r.statistic / expected - 1.0).abs() < 0.05,
            "{} vs {expected}",
            r.statistic
        );
        let k = ks_statistic(&e, &DigitLaw::benford(B10)).unwrap();
        assert!(!k.pass && k.statistic > 0.05);
    }

    #[test]
    fn independence_test() {
        let mut rng = RngStream::new(42, 1);
        let pairs: Vec<(u32, u32)> = (0..50_000)
            .map(|_| (1 + rng.below(9) as u32, 1 + rng.below(9) as u32))
            .collect();
        let r = chi_square_independence_at(&pairs, B10, 0.001).unwrap();
        assert_eq!(r.dof, Some(64));
        assert!(r.pass);
        let tied: Vec<(u32, u32)> = pairs.iter().map(|&(a, _)| (a, a)).collect();
        assert!(!chi_square_independence_at(&tied, B10, 0.001).unwrap().pass);
        assert!(chi_square_independence_at(&[(0, 1)], B10, 0.001).is_err());
    }

    #[test]
    fn tv_metric() {
        let point = |d: usize| {
            let mut c = vec![0; 9];
            c[d - 1] = 1;
            DigitHistogram::from_counts(B10, &c).unwrap()
        };
        assert_eq!(tv_distance(&point(1), &point(9)).unwrap(), 1.0);
        assert_eq!(tv_distance(&point(3), &point(3)).unwrap(), 0.0);
        let mut rng = RngStream::new(42, 2);
        let mut rand_hist = || {
            let c: Vec<u64> = (0..9).map(|_| rng.below(100) + 1).collect();
            DigitHistogram::from_counts(B10, &c).unwrap()
        };
        for _ in 0..100 {
            let (a, b, c) = (rand_hist(), rand_hist(), rand_hist());
            let ab = tv_distance(&a, &b).unwrap();
            assert_eq!(ab, tv_distance(&b, &a).unwrap());
            assert!(ab > 0.0);
            assert!(ab <= tv_distance(&a, &c).unwrap() + tv_distance(&c, &b).unwrap() + 1e-15);
        }
        let other = DigitHistogram::from_counts(Base::new(3).unwrap(), &[1, 1]).unwrap();
        assert!(tv_distance(&point(1), &other).is_err());
    }
}
