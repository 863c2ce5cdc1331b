//! Seeded Monte Carlo samplers for the measures whose digit laws are predicted.
//!
//! Compact groups (spheres, `O(n)`, `U(n)`) are sampled exactly. Noncompact
//! groups have no invariant probability measure, so they are sampled on an
//! explicit [`WindowSpec`]: diagonal and radial coordinates on `[1, B^m)`,
//! unipotent coordinates on `[-eps, eps]`.

mod haar;
mod permutation;
mod sphere;
mod window;

pub use haar::{sample_orthogonal_haar, sample_unitary_haar, HaarSample};
pub use permutation::{apply_even_permutations, random_even_permutation, Permutation};
pub use sphere::{sample_sphere, sample_sphere_leading};
pub use window::{
    sample_diagonal_window, sample_gln_pos_window, sample_log_uniform, sample_power_density, sample_sln_lud_window,
    sample_upper_triangular_window, triangular_predicted_law, GlnSample, LudSample, Side,
};

use crate::error::{domain, Result};
use crate::rng::RngStream;

/// Sampling window for noncompact groups.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowSpec {
    /// Half-width of the boxes for unipotent (off-diagonal) coordinates.
    pub eps: f64,
    /// Number of base-B decades `[1, B^m)` for diagonal and radial coordinates.
    pub m: u32,
    /// Attach independent random signs to diagonal entries.
    pub random_signs: bool,
}

impl Default for WindowSpec {
    fn default() -> Self {
        WindowSpec {
            eps: 1.0,
            m: 3,
            random_signs: false,
        }
    }
}

impl WindowSpec {
    pub fn new(eps: f64, m: u32) -> Result<Self> {
        let spec = WindowSpec {
            eps,
            m,
            random_signs: false,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_random_signs(mut self, on: bool) -> Self {
        self.random_signs = on;
        self
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0) || !self.eps.is_finite() {
            return domain(format!("window half-width must be positive, got {}", self.eps));
        }
        if self.m < 1 {
            return domain("window must span at least one decade (m >= 1)");
        }
        Ok(())
    }
}

/// Runs `draw` `total` times split over `workers` streams.
///
/// Worker `w` owns stream `stream_base + w` and produces a contiguous block
/// (the first `total % workers` workers take one extra draw). Output is in
/// worker order, so it depends only on `(seed, stream_base, workers, total)`.
pub fn parallel_draws<T, F>(seed: u64, stream_base: u64, workers: usize, total: usize, draw: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut RngStream) -> T + Sync,
{
    let workers = workers.max(1);
    let per = total / workers;
    let extra = total % workers;
    let blocks: Vec<Vec<T>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let count = per + usize::from(w < extra);
                let draw = &draw;
                scope.spawn(move || {
                    let mut rng = RngStream::new(seed, stream_base + w as u64);
                    (0..count).map(|_| draw(&mut rng)).collect::<Vec<T>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sampling worker panicked"))
            .collect()
    });
    blocks.into_iter().flatten().collect()
}
