//! Base-B significand extraction.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// An integer radix, at least 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Base(u32);

impl Base {
    pub const TEN: Base = Base(10);

    pub fn new(b: u32) -> Result<Self> {
        if b < 2 {
            return domain(format!("base must be at least 2, got {b}"));
        }
        Ok(Base(b))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn as_f64(self) -> f64 {
        self.0 as f64
    }

    #[inline]
    pub fn ln(self) -> f64 {
        (self.0 as f64).ln()
    }

    /// Number of possible leading digits, `B - 1`.
    #[inline]
    pub fn digit_count(self) -> usize {
        (self.0 - 1) as usize
    }
}

impl TryFrom<u32> for Base {
    type Error = crate::Error;

    fn try_from(b: u32) -> Result<Self> {
        Base::new(b)
    }
}

impl From<Base> for u32 {
    fn from(b: Base) -> u32 {
        b.0
    }
}

/// `|x| = significand * B^exponent`, with the sign of `x` kept apart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignificandDecomposition {
    pub significand: f64,
    pub exponent: i32,
    pub negative: bool,
}

impl SignificandDecomposition {
    /// Leading base-B digit, in `1..B`.
    pub fn leading_digit(&self, base: Base) -> u32 {
        leading_digit_of(self.significand, base)
    }

    /// Rebuilds `x` from the decomposition.
    pub fn reconstruct(&self, base: Base) -> f64 {
        let v = scale_by_power(self.significand, base, self.exponent);
        if self.negative {
            -v
        } else {
            v
        }
    }
}

const SNAP_ULPS: f64 = 4.0;

pub(crate) fn leading_digit_of(significand: f64, base: Base) -> u32 {
    (significand.floor() as u32).clamp(1, base.get() - 1)
}

/// `x * B^k`, splitting the power when `B^|k|` alone would overflow.
fn scale_by_power(x: f64, base: Base, k: i32) -> f64 {
    let b = base.as_f64();
    let mut x = x;
    let mut k = k;
    // B^k is exact for small |k| (e.g. 10^22); multiply by exact powers
    // where possible and divide rather than multiply by inexact reciprocals.
    while k != 0 {
        let step = k.clamp(-256, 256);
        let p = b.powi(step.abs());
        x = if step > 0 { x * p } else { x / p };
        k -= step;
    }
    x
}

/// Splits a nonzero finite `x` into sign, exponent and significand in `[1, B)`.
pub fn significand(x: f64, base: Base) -> Result<SignificandDecomposition> {
    if x == 0.0 {
        return domain("significand undefined at zero");
    }
    if !x.is_finite() {
        return domain(format!("significand undefined for non-finite value {x}"));
    }
    let b = base.as_f64();
    let a = x.abs();
    let mut k = (a.ln() / base.ln()).floor() as i32;
    let mut s = scale_by_power(a, base, -k);
    // log rounding can land one decade off.
    while s >= b {
        k += 1;
        s = scale_by_power(a, base, -k);
    }
    while s < 1.0 {
        k -= 1;
        s = scale_by_power(a, base, -k);
    }
    // Inexact powers of B leave exact powers a few ulps short of B.
    if b - s <= SNAP_ULPS * f64::EPSILON * b {
        k += 1;
        s = 1.0;
    }
    Ok(SignificandDecomposition {
        significand: s,
        exponent: k,
        negative: x < 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn decimal_shift() {
        let d = significand(456.789, Base::TEN).unwrap();
        assert!(rel(d.significand, 4.56789) <= 4.0 * f64::EPSILON);
        assert_eq!(d.exponent, 2);
        assert!(!d.negative);
    }

    #[test]
    fn identity_case() {
        let d = significand(1.0, Base::TEN).unwrap();
        assert_eq!(d.significand, 1.0);
        assert_eq!(d.exponent, 0);
    }

    #[test]
    fn negative_input_keeps_sign_apart() {
        let d = significand(-0.05, Base::TEN).unwrap();
        assert!(rel(d.significand, 5.0) <= 4.0 * f64::EPSILON);
        assert_eq!(d.exponent, -2);
        assert!(d.negative);
        assert_eq!(d.leading_digit(Base::TEN), 5);
    }

    #[test]
    fn exact_powers_land_on_one() {
        for k in -300..=300 {
            let x = format!("1e{k}").parse::<f64>().unwrap();
            let d = significand(x, Base::TEN).unwrap();
            assert!((1.0..10.0).contains(&d.significand), "{x}");
            assert_eq!(d.exponent, k, "{x}");
        }
        let d = significand(1024.0, Base::new(2).unwrap()).unwrap();
        assert_eq!((d.significand, d.exponent), (1.0, 10));
    }

    #[test]
    fn rejects_zero_and_non_finite() {
        assert!(significand(0.0, Base::TEN).is_err());
        assert!(significand(f64::NAN, Base::TEN).is_err());
        assert!(significand(f64::INFINITY, Base::TEN).is_err());
        assert!(Base::new(1).is_err());
    }

    #[test]
    fn extremes() {
        for x in [f64::MIN_POSITIVE, 5e-324, f64::MAX] {
            let d = significand(x, Base::TEN).unwrap();
            assert!((1.0..10.0).contains(&d.significand));
        }
    }

    proptest! {
        #[test]
        fn reconstructs_input(x in prop::num::f64::NORMAL, b in 2u32..40) {
            let base = Base::new(b).unwrap();
            let d = significand(x, base).unwrap();
            prop_assert!(d.significand >= 1.0 && d.significand < b as f64);
            prop_assert!(rel(d.reconstruct(base), x) <= 4.0 * f64::EPSILON);
        }

        #[test]
        fn shift_invariant(m in 1.0f64..10.0, j in -200i32..200) {
            let x = format!("{m}e{j}").parse::<f64>().unwrap();
            let s0 = significand(m, Base::TEN).unwrap().significand;
            let sj = significand(x, Base::TEN).unwrap();
            prop_assert_eq!(sj.exponent, j);
            prop_assert!(rel(sj.significand, s0) <= 8.0 * f64::EPSILON);
        }
    }
}
