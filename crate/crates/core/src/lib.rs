//! Leading-digit laws for components of Lie groups and spheres, with seeded
//! samplers and goodness-of-fit checks.
//!
//! ```
//! use haar_digits::{DigitLaw, Base};
//! let benford = DigitLaw::benford(Base::TEN);
//! assert!((benford.cdf(2.0).unwrap() - 0.30103).abs() < 1e-5);
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod error;
pub mod law;
pub mod lie;
pub mod matrix;
pub mod rng;
pub mod samplers;
pub mod significand;
pub mod specfun;
pub mod sphere;
pub mod stats;

pub use error::{Error, Result};
pub use law::{windowed_power_cdf, DigitLaw};
pub use matrix::{ComplexMatrix, RealMatrix};
pub use rng::RngStream;
pub use samplers::WindowSpec;
pub use significand::{significand, Base, SignificandDecomposition};
pub use sphere::SphereLawParams;
pub use stats::{build_empirical, DigitHistogram, EmpiricalDigitDistribution, GOFReport};
