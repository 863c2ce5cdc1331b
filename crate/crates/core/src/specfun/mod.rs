//! Special functions and adaptive quadrature used by the sphere laws.

mod erf;
mod gamma;
mod quad;

pub use erf::{erf, erf_diff, erfc};
pub use gamma::{gamma_half_ratio, log_gamma, log_gamma_ratio};
pub use quad::{integrate, integrate_arcsine, QuadratureSpec};
