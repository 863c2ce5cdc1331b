use haar_digits::lie::{
    adjoint_det_on_l, adjoint_det_on_u, cone_coefficient, cone_coefficient_jacobian, hyperbolic_cone_area,
    hyperbolic_cone_area_mc, sl2_cone_volume, sl2_cone_volume_mc, sl2_induced_cdf, ConeProblem,
};
use haar_digits::samplers::{parallel_draws, sample_log_uniform};
use haar_digits::{Base, DigitLaw, RealMatrix, RngStream};
use serde::Serialize;

use crate::args::{Suite, VerifyArgs};
use crate::law::base_of;
use crate::output::{csv_text, envelope, fmt_float, render};
use crate::{CliError, Report};

#[derive(Clone, Serialize)]
struct Check {
    name: String,
    value: f64,
    tolerance: f64,
    pass: bool,
}

fn check(name: impl Into<String>, value: f64, tolerance: f64) -> Check {
    Check {
        name: name.into(),
        value,
        tolerance,
        pass: value.is_finite() && value < tolerance,
    }
}

fn random_pair(n: usize, base: Base, rng: &mut RngStream) -> (RealMatrix, RealMatrix) {
    let dv: Vec<f64> = (0..n)
        .map(|_| {
            let v = sample_log_uniform(base, 1, rng);
            if rng.next_u64() & 1 == 1 {
                -v
            } else {
                v
            }
        })
        .collect();
    let mut e = vec![0.0; n * n];
    for i in 0..n {
        e[i * n + i] = 1.0;
        for j in i + 1..n {
            e[i * n + j] = rng.uniform_in(-3.0, 3.0);
        }
    }
    (
        RealMatrix::from_row_major(n, &e).expect("square"),
        RealMatrix::diagonal(&dv).expect("diagonal"),
    )
}

fn adjoint_checks(pairs: usize, base: Base, seed: u64) -> Result<Vec<Check>, CliError> {
    let mut out = Vec::new();
    for n in 2..=5usize {
        let mut rng = RngStream::new(seed, n as u64);
        let (mut product, mut tri, mut closed, mut free) = (0f64, 0f64, 0f64, 0f64);
        for _ in 0..pairs {
            let (u, d) = random_pair(n, base, &mut rng);
            let l = adjoint_det_on_l(&u, &d)?;
            let up = adjoint_det_on_u(&d)?;
            let at_id = adjoint_det_on_l(&RealMatrix::identity(n), &d)?;
            product = product.max((l.value * up.value - 1.0).abs());
            tri = tri.max(l.triangular_residual);
            closed = closed
                .max((l.value / l.closed_form - 1.0).abs())
                .max((up.value / up.closed_form - 1.0).abs());
            free = free.max((l.value / at_id.value - 1.0).abs());
        }
        out.push(check(format!("adjoint_product_n{n}"), product, 1e-9));
        out.push(check(format!("adjoint_triangular_n{n}"), tri, 1e-12));
        out.push(check(format!("adjoint_closed_form_n{n}"), closed, 1e-10));
        out.push(check(format!("adjoint_u_independence_n{n}"), free, 1e-10));
    }
    Ok(out)
}

fn cone_checks(eps: f64, trials: u64, base: Base, seed: u64, workers: usize) -> Result<Vec<Check>, CliError> {
    let x_max = base.as_f64();
    let problem = ConeProblem::new(x_max, eps, base)?;
    let xs: Vec<f64> = [2.0, 5.0, 10.0].into_iter().filter(|&x| x <= x_max).collect();
    let ratios = xs
        .iter()
        .map(|&x| Ok(sl2_cone_volume(&problem, x)? / x.ln()))
        .collect::<haar_digits::Result<Vec<f64>>>()?;
    let spread = ratios.iter().cloned().fold(f64::MIN, f64::max) - ratios.iter().cloned().fold(f64::MAX, f64::min);
    let mut out = vec![check("cone_ratio_spread", spread, 1e-9)];

    let f = cone_coefficient(eps)?.total;
    let j = cone_coefficient_jacobian(eps)?;
    out.push(check("cone_coefficient_routes", (f / j - 1.0).abs(), 1e-9));

    let per = (trials / workers as u64).max(1);
    let parts = parallel_draws(seed, 0, workers, workers, |r| {
        sl2_cone_volume_mc(&problem, x_max, per, r)
    });
    let parts = parts.into_iter().collect::<haar_digits::Result<Vec<_>>>()?;
    let hits: u64 = parts.iter().map(|p| p.hits).sum();
    let total: u64 = parts.iter().map(|p| p.trials).sum();
    let box_volume = x_max * 4.0 * eps * eps * (1.0 + eps * eps);
    let mc = box_volume * hits as f64 / total as f64;
    let exact = sl2_cone_volume(&problem, x_max)?;
    out.push(check("cone_mc_relative_gap", (mc / exact - 1.0).abs(), 0.02));

    let x = 2.0f64.min(x_max);
    let cdf_gap = (sl2_induced_cdf(&problem, x)? - DigitLaw::benford(base).cdf(x)?).abs();
    out.push(check("cone_induced_cdf", cdf_gap, 1e-9));

    let mut rng = RngStream::new(seed, 1 << 32);
    let area = hyperbolic_cone_area_mc(1.0, 4.0, (trials / 10).max(1000), &mut rng)?;
    let z = (area.estimate - hyperbolic_cone_area(1.0, 4.0)?).abs() / area.std_error;
    out.push(check("hyperbolic_area_mc_z", z, 4.0));
    Ok(out)
}

#[derive(Serialize)]
struct VerifyReport {
    suite: &'static str,
    base: u32,
    seed: u64,
    workers: usize,
    eps: f64,
    trials: u64,
    checks: Vec<Check>,
    pass: bool,
}

pub fn run(a: &VerifyArgs) -> Result<Report, CliError> {
    let base = base_of(a.common.base)?;
    if a.mc.workers == 0 || a.trials == 0 || a.pairs == 0 {
        return Err(CliError::Usage(
            "--workers, --trials and --pairs must be at least 1".into(),
        ));
    }
    let mut checks = Vec::new();
    if matches!(a.suite, Suite::Adjoint | Suite::All) {
        checks.extend(adjoint_checks(a.pairs, base, a.mc.seed)?);
    }
    if matches!(a.suite, Suite::Cone | Suite::All) {
        checks.extend(cone_checks(a.eps, a.trials, base, a.mc.seed, a.mc.workers)?);
    }
    let pass = checks.iter().all(|c| c.pass);
    let suite = match a.suite {
        Suite::Adjoint => "adjoint",
        Suite::Cone => "cone",
        Suite::All => "all",
    };
    for c in checks.iter().filter(|c| !c.pass) {
        eprintln!(
            "check failed: {} = {} (tolerance {})",
            c.name,
            fmt_float(c.value),
            fmt_float(c.tolerance)
        );
    }
    let text = render(
        a.common.format,
        || {
            envelope(
                "verify",
                &VerifyReport {
                    suite,
                    base: base.get(),
                    seed: a.mc.seed,
                    workers: a.mc.workers,
                    eps: a.eps,
                    trials: a.trials,
                    checks: checks.clone(),
                    pass,
                },
            )
        },
        || {
            let rows: Vec<Vec<String>> = checks
                .iter()
                .map(|c| {
                    vec![
                        c.name.clone(),
                        fmt_float(c.value),
                        fmt_float(c.tolerance),
                        c.pass.to_string(),
                    ]
                })
                .collect();
            csv_text(&["check", "value", "tolerance", "pass"], &rows)
        },
    );
    Ok(Report { text, pass })
}
