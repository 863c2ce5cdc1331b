use haar_digits::samplers::{
    apply_even_permutations, parallel_draws, random_even_permutation, sample_diagonal_window, sample_gln_pos_window,
    sample_log_uniform, sample_orthogonal_haar, sample_power_density, sample_sln_lud_window, sample_sphere_leading,
    sample_unitary_haar, sample_upper_triangular_window, triangular_predicted_law, Side,
};
use haar_digits::stats::{chi_square_first_digit_at, ks_statistic_at, DigitHistogram};
use haar_digits::{build_empirical, significand, Base, DigitLaw, GOFReport, RngStream, WindowSpec};
use serde::Serialize;

use crate::args::{Group, Part, SampleArgs, SideArg};
use crate::law::base_of;
use crate::output::{csv_text, emit, envelope, fmt_float, render};
use crate::{CliError, Report};

type Draw = Box<dyn Fn(&mut RngStream) -> haar_digits::Result<f64> + Sync>;

fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

/// Parses a 1-based `i,j` into 0-based indices inside an `n x n` matrix.
pub fn parse_entry(text: &str, n: usize) -> Result<(usize, usize), CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [i, j] = parts.as_slice() else {
        return usage(format!("--entry expects i,j, got {text:?}"));
    };
    let parse = |t: &str| {
        t.parse::<usize>()
            .map_err(|_| CliError::Usage(format!("bad index {t:?} in --entry")))
    };
    let (i, j) = (parse(i)?, parse(j)?);
    if i == 0 || j == 0 || i > n || j > n {
        return usage(format!(
            "--entry {i},{j} is outside a {n}x{n} matrix (indices are 1-based)"
        ));
    }
    Ok((i - 1, j - 1))
}

#[derive(Serialize)]
struct Window {
    eps: f64,
    m: u32,
    random_signs: bool,
}

#[derive(Serialize)]
struct Setup {
    group: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    entry: Option<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    window: Option<Window>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    options: Vec<String>,
}

struct Plan {
    setup: Setup,
    law: DigitLaw,
    draw: Draw,
}

fn group_name(g: Group) -> &'static str {
    match g {
        Group::Rplus => "rplus",
        Group::Power => "power",
        Group::Triangular => "triangular",
        Group::Diagonal => "diagonal",
        Group::Sln => "sln",
        Group::GlnDet => "gln-det",
        Group::Orthogonal => "orthogonal",
        Group::Unitary => "unitary",
        Group::Sphere => "sphere",
    }
}

fn plan(a: &SampleArgs, base: Base) -> Result<Plan, CliError> {
    let group = a.group;
    let takes_n = !matches!(group, Group::Rplus | Group::Power);
    let takes_entry = matches!(
        group,
        Group::Triangular | Group::Diagonal | Group::Sln | Group::Orthogonal | Group::Unitary
    );
    if a.n.is_some() && !takes_n {
        return usage(format!("--n has no meaning for group {}", group_name(group)));
    }
    if a.entry.is_some() && !takes_entry {
        return usage(format!("--entry has no meaning for group {}", group_name(group)));
    }
    if a.k.is_some() && group != Group::Power {
        return usage("--k only applies to group power");
    }
    let n = a.n.unwrap_or(if group == Group::Sphere { 2 } else { 3 });
    if takes_n && n == 0 {
        return usage("--n must be at least 1");
    }
    let entry = match (&a.entry, takes_entry) {
        (Some(t), _) => Some(parse_entry(t, n)?),
        (None, true) => Some((0, 0)),
        (None, false) => None,
    };
    let spec = WindowSpec::new(a.eps, a.m)?.with_random_signs(a.random_signs);
    let window = Some(Window {
        eps: a.eps,
        m: a.m,
        random_signs: a.random_signs,
    });
    let mut options = Vec::new();
    let mut setup = Setup {
        group: group_name(group).into(),
        n: takes_n.then_some(n),
        entry: entry.map(|(i, j)| [i + 1, j + 1]),
        window: None,
        options: Vec::new(),
    };
    let (i, j) = entry.unwrap_or((0, 0));
    let m = a.m;
    let (law, draw): (DigitLaw, Draw) = match group {
        Group::Rplus => {
            setup.window = Some(Window {
                eps: a.eps,
                m,
                random_signs: false,
            });
            (
                DigitLaw::benford(base),
                Box::new(move |r| Ok(sample_log_uniform(base, m, r))),
            )
        }
        Group::Power => {
            let Some(k) = a.k else {
                return usage("group power needs --k");
            };
            let law = DigitLaw::from_density_exponent(base, k)?;
            options.push(format!("k={}", fmt_float(k)));
            setup.window = window;
            (law, Box::new(move |r| sample_power_density(base, k, m, r)))
        }
        Group::Triangular => {
            let side = match a.side {
                SideArg::Left => Side::Left,
                SideArg::Right => Side::Right,
            };
            let Some(law) = triangular_predicted_law(n, base, side, i, j)? else {
                return usage("entries below the diagonal of a triangular matrix are zero");
            };
            options.push(format!("side={}", if side == Side::Left { "left" } else { "right" }));
            setup.window = window;
            (
                law,
                Box::new(move |r| Ok(sample_upper_triangular_window(n, base, &spec, side, r)?.get(i, j))),
            )
        }
        Group::Diagonal => {
            if i != j {
                return usage("off-diagonal entries of a diagonal matrix are zero");
            }
            if a.det_one && n == 1 {
                return usage("a 1x1 determinant-one diagonal matrix is constant");
            }
            let det_one = a.det_one;
            if det_one {
                options.push("det_one".into());
            }
            setup.window = window;
            (
                DigitLaw::benford(base),
                Box::new(move |r| Ok(sample_diagonal_window(n, base, &spec, det_one, r)?.get(i, i))),
            )
        }
        Group::Sln => {
            if n < 2 {
                return usage("SL_1 is trivial; use --n 2 or more");
            }
            let permute = a.permute;
            if permute {
                options.push("permute".into());
            }
            setup.window = window;
            (
                DigitLaw::benford(base),
                Box::new(move |r| {
                    let g = sample_sln_lud_window(n, base, &spec, r)?.g;
                    if permute {
                        let p = random_even_permutation(n, r);
                        let q = random_even_permutation(n, r);
                        Ok(apply_even_permutations(&g, &p, &q, true)?.get(i, j))
                    } else {
                        Ok(g.get(i, j))
                    }
                }),
            )
        }
        Group::GlnDet => {
            setup.window = window;
            (
                DigitLaw::benford(base),
                Box::new(move |r| Ok(sample_gln_pos_window(n, base, &spec, r)?.g.determinant())),
            )
        }
        Group::Orthogonal => {
            if n < 2 {
                return usage("O(1) entries are +-1; use --n 2 or more");
            }
            (
                DigitLaw::sphere_exact(base, n as u64 - 1)?,
                Box::new(move |r| Ok(sample_orthogonal_haar(n, r).matrix.get(i, j))),
            )
        }
        Group::Unitary => {
            let part = a.part;
            options.push(format!("part={}", if part == Part::Re { "re" } else { "im" }));
            (
                DigitLaw::sphere_exact(base, 2 * n as u64 - 1)?,
                Box::new(move |r| {
                    let z = sample_unitary_haar(n, r).matrix.get(i, j);
                    Ok(if part == Part::Re { z.re } else { z.im })
                }),
            )
        }
        Group::Sphere => (
            DigitLaw::sphere_exact(base, n as u64)?,
            Box::new(move |r| Ok(sample_sphere_leading(n, 1, r)[0])),
        ),
    };
    setup.options = options;
    Ok(Plan { setup, law, draw })
}

#[derive(Serialize)]
struct Digits {
    observed: Vec<f64>,
    expected: Vec<f64>,
}

#[derive(Serialize)]
struct SampleReport<'a> {
    #[serde(flatten)]
    setup: &'a Setup,
    base: u32,
    count: usize,
    seed: u64,
    workers: usize,
    law: &'a DigitLaw,
    rejected: usize,
    first_digit: Digits,
    tests: &'a [GOFReport],
    pass: bool,
}

fn samples_csv(values: &[f64], base: Base) -> String {
    let rows: Vec<Vec<String>> = values
        .iter()
        .enumerate()
        .map(|(k, &x)| match significand(x, base) {
            Ok(d) => vec![
                k.to_string(),
                fmt_float(x),
                fmt_float(d.significand),
                d.leading_digit(base).to_string(),
            ],
            Err(_) => vec![k.to_string(), fmt_float(x), String::new(), String::new()],
        })
        .collect();
    csv_text(&["index", "value", "significand", "digit"], &rows)
}

pub fn run(a: &SampleArgs) -> Result<Report, CliError> {
    let base = base_of(a.common.base)?;
    if a.count == 0 {
        return usage("--N must be at least 1");
    }
    if a.mc.workers == 0 {
        return usage("--workers must be at least 1");
    }
    if !(a.alpha > 0.0 && a.alpha < 1.0) {
        return usage("--alpha must lie in (0, 1)");
    }
    let plan = plan(a, base)?;
    let values = parallel_draws(a.mc.seed, 0, a.mc.workers, a.count, &plan.draw)
        .into_iter()
        .collect::<haar_digits::Result<Vec<f64>>>()?;
    if let Some(path) = &a.samples {
        emit(&samples_csv(&values, base), Some(path))?;
    }
    let emp = build_empirical(&values, base)?;
    let mut tests = vec![ks_statistic_at(&emp, &plan.law, a.alpha)?];
    if emp.len() >= 5 * base.digit_count() && base.digit_count() >= 2 {
        tests.push(chi_square_first_digit_at(&emp, &plan.law, a.alpha)?);
    }
    let pass = tests.iter().all(|t| t.pass);
    let observed = emp.histogram().probs;
    let expected = DigitHistogram::from_law(&plan.law)?.probs;
    let text = render(
        a.common.format,
        || {
            envelope(
                "sample",
                &SampleReport {
                    setup: &plan.setup,
                    base: base.get(),
                    count: a.count,
                    seed: a.mc.seed,
                    workers: a.mc.workers,
                    law: &plan.law,
                    rejected: emp.rejected(),
                    first_digit: Digits { observed, expected },
                    tests: &tests,
                    pass,
                },
            )
        },
        || {
            let rows: Vec<Vec<String>> = tests
                .iter()
                .map(|t| {
                    vec![
                        t.test.clone(),
                        fmt_float(t.statistic),
                        t.dof.map(|d| d.to_string()).unwrap_or_default(),
                        fmt_float(t.p_approx),
                        fmt_float(t.critical),
                        t.pass.to_string(),
                    ]
                })
                .collect();
            csv_text(&["test", "statistic", "dof", "p_approx", "critical", "pass"], &rows)
        },
    );
    Ok(Report { text, pass })
}
