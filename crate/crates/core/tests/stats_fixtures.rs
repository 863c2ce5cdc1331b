use haar_digits::samplers::sample_log_uniform;
use haar_digits::stats::{chi_square_first_digit, ks_statistic};
use haar_digits::{build_empirical, Base, DigitLaw, RngStream};

const B10: Base = Base::TEN;

/// Largest gap between the uniform and Benford CDFs, found on a fine grid.
/// The exact maximizer is `s = 9 / ln 10`.
const UNIFORM_BENFORD_SUP_GAP: f64 = 0.268_843_449_947_721;

#[test]
fn uniform_benford_sup_gap_oracle() {
    let b = DigitLaw::benford(B10);
    let u = DigitLaw::uniform(B10);
    let gap = (0..=900_000)
        .map(|i| 1.0 + 9.0 * i as f64 / 900_000.0)
        .map(|s| (b.cdf(s).unwrap() - u.cdf(s).unwrap()).abs())
        .fold(0.0, f64::max);
    assert!((gap - UNIFORM_BENFORD_SUP_GAP).abs() < 1e-9, "{gap}");
    let s = 9.0 / 10f64.ln();
    assert!((b.cdf(s).unwrap() - u.cdf(s).unwrap() - UNIFORM_BENFORD_SUP_GAP).abs() < 1e-12);
}

fn benford_samples() -> Vec<f64> {
    let mut rng = RngStream::new(42, 0);
    (0..100_000).map(|_| sample_log_uniform(B10, 6, &mut rng)).collect()
}

#[test]
fn benford_samples_against_uniform_and_benford() {
    let emp = build_empirical(&benford_samples(), B10).unwrap();
    let bad = ks_statistic(&emp, &DigitLaw::uniform(B10)).unwrap();
    assert!(bad.statistic > 0.05 && !bad.pass);
    let good = ks_statistic(&emp, &DigitLaw::benford(B10)).unwrap();
    assert!(good.statistic < 1.36 / (1e5f64).sqrt() * 1.5 && good.pass);
    assert!((0.0..=1.0).contains(&good.p_approx));
}

#[test]
fn log_uniform_digit_one_frequency() {
    let mut rng = RngStream::new(42, 0);
    let xs: Vec<f64> = (0..1_000_000).map(|_| sample_log_uniform(B10, 3, &mut rng)).collect();
    let emp = build_empirical(&xs, B10).unwrap();
    let f = emp.digit_counts()[0] as f64 / 1e6;
    assert!((f - std::f64::consts::LOG10_2).abs() < 0.002);
    assert!(chi_square_first_digit(&emp, &DigitLaw::benford(B10)).unwrap().pass);
}

#[test]
fn gof_report_serializes() {
    let emp = build_empirical(&benford_samples(), B10).unwrap();
    let r = chi_square_first_digit(&emp, &DigitLaw::benford(B10)).unwrap();
    let json = serde_json::to_string(&r).unwrap();
    let back: haar_digits::GOFReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back, r);
}
