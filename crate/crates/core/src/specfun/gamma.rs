use crate::error::{domain, Result};

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// Arguments are shifted up to at least this before the Stirling series.
const STIRLING_MIN: f64 = 15.0;

/// B_{2k} / (2k (2k-1)) for k = 1..=8.
const STIRLING_COEFFS: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
];

/// Correction term of the Stirling series, `ln Gamma(z) - [(z - 1/2) ln z - z + ln sqrt(2 pi)]`.
fn stirling_tail(z: f64) -> f64 {
    let r = 1.0 / z;
    let r2 = r * r;
    let mut acc = 0.0;
    for c in STIRLING_COEFFS.iter().rev() {
        acc = acc * r2 + c;
    }
    acc * r
}

/// Shifts `x` up past `STIRLING_MIN`, returning the shifted value and
/// `ln(x (x+1) ... (x+k-1))`.
fn shift_up(x: f64) -> (f64, f64) {
    let mut z = x;
    let mut prod = 1.0;
    let mut log_prod = 0.0;
    while z < STIRLING_MIN {
        prod *= z;
        z += 1.0;
        if prod > 1e200 {
            log_prod += prod.ln();
            prod = 1.0;
        }
    }
    (z, log_prod + prod.ln())
}

/// Natural log of the gamma function for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("log_gamma needs a finite positive argument, got {x}"));
    }
    if x == 1.0 || x == 2.0 {
        return Ok(0.0);
    }
    let (z, log_prod) = shift_up(x);
    Ok((z - 0.5) * z.ln() - z + HALF_LN_2PI + stirling_tail(z) - log_prod)
}

/// `ln Gamma(x + h) - ln Gamma(x)` for `x > 0`, `h >= 0`, arranged so that
/// large arguments do not cancel.
pub fn log_gamma_ratio(x: f64, h: f64) -> Result<f64> {
    if !(x > 0.0) || !(h >= 0.0) || !x.is_finite() || !h.is_finite() {
        return domain(format!("log_gamma_ratio needs x > 0, h >= 0, got ({x}, {h})"));
    }
    if x < STIRLING_MIN {
        return Ok(log_gamma(x + h)? - log_gamma(x)?);
    }
    // (x+h-1/2) ln(x+h) - (x-1/2) ln x - h = (x-1/2) ln1p(h/x) + h ln(x+h) - h
    let main = (x - 0.5) * (h / x).ln_1p() + h * (x + h).ln() - h;
    Ok(main + stirling_tail(x + h) - stirling_tail(x))
}

/// `Gamma(n/2 + 1/2) / Gamma(n/2)`, the normalising ratio of the sphere laws.
pub fn gamma_half_ratio(n: u64) -> Result<f64> {
    if n < 1 {
        return domain("gamma_half_ratio needs n >= 1");
    }
    Ok(log_gamma_ratio(n as f64 / 2.0, 0.5)?.exp())
}
