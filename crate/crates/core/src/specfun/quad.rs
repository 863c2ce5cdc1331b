use crate::error::{domain, Error, Result};

/// Tolerances and subdivision budget for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-14,
            rel_tol: 1e-12,
            max_depth: 50,
        }
    }
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_depth: usize) -> Result<Self> {
        let spec = QuadratureSpec {
            abs_tol,
            rel_tol,
            max_depth,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return domain("quadrature tolerances must be positive");
        }
        if self.max_depth < 1 {
            return domain("quadrature max_depth must be at least 1");
        }
        Ok(())
    }
}

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// One 15-point Kronrod panel: (estimate, error estimate).
fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

struct Adaptive<'a, F> {
    f: &'a F,
    spec: QuadratureSpec,
    width: f64,
    tol: f64,
    deepest: usize,
    failed: bool,
}

impl<F: Fn(f64) -> f64> Adaptive<'_, F> {
    fn panel(&mut self, a: f64, b: f64, whole: (f64, f64), depth: usize) -> (f64, f64) {
        self.deepest = self.deepest.max(depth);
        let (est, err) = whole;
        let share = self.tol * (b - a) / self.width;
        if err <= share.max(f64::EPSILON * est.abs()) {
            return whole;
        }
        if depth >= self.spec.max_depth {
            self.failed = true;
            return whole;
        }
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            // Panel has collapsed to adjacent floats.
            self.failed = true;
            return whole;
        }
        let left = kronrod15(self.f, a, mid);
        let right = kronrod15(self.f, mid, b);
        let l = self.panel(a, mid, left, depth + 1);
        let r = self.panel(mid, b, right, depth + 1);
        (l.0 + r.0, l.1 + r.1)
    }
}

/// Adaptive Gauss-Kronrod quadrature of `f` over `[a, b]` by recursive bisection.
///
/// The tolerance target is `max(abs_tol, rel_tol * |I|)`, with `|I|` taken from
/// a first coarse pass and shared among panels in proportion to their width.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: QuadratureSpec) -> Result<f64> {
    spec.validate()?;
    if !(a <= b) || !a.is_finite() || !b.is_finite() {
        return domain(format!("integration bounds must be finite with a <= b, got [{a}, {b}]"));
    }
    if a == b {
        return Ok(0.0);
    }
    // A coarse pass over eight panels sets the relative scale.
    let mut coarse = 0.0;
    let step = (b - a) / 8.0;
    let mut panels = Vec::with_capacity(8);
    for i in 0..8 {
        let lo = a + step * i as f64;
        let hi = if i == 7 { b } else { a + step * (i + 1) as f64 };
        let p = kronrod15(&f, lo, hi);
        coarse += p.0;
        panels.push((lo, hi, p));
    }
    let tol = spec.abs_tol.max(spec.rel_tol * coarse.abs());
    let mut run = Adaptive {
        f: &f,
        spec,
        width: b - a,
        tol,
        deepest: 0,
        failed: false,
    };
    let mut total = 0.0;
    let mut err = 0.0;
    for (lo, hi, p) in panels {
        let (v, e) = run.panel(lo, hi, p, 1);
        total += v;
        err += e;
    }
    if !total.is_finite() {
        return domain("integrand produced a non-finite value");
    }
    if run.failed && err > tol {
        return Err(Error::Convergence {
            estimate: total,
            error_estimate: err,
            depth: run.deepest,
        });
    }
    Ok(total)
}

/// `int_a^b g(x) / sqrt(1 - x^2) dx` for `-1 <= a <= b <= 1`, evaluated in
/// `theta = asin(x)` so that the endpoint singularities at `+-1` disappear.
pub fn integrate_arcsine<G: Fn(f64) -> f64>(g: G, a: f64, b: f64, spec: QuadratureSpec) -> Result<f64> {
    if !(-1.0..=1.0).contains(&a) || !(-1.0..=1.0).contains(&b) || a > b {
        return domain(format!("arcsine integration needs -1 <= a <= b <= 1, got [{a}, {b}]"));
    }
    integrate(|t: f64| g(t.sin()), a.asin(), b.asin(), spec)
}
