use haar_digits::samplers::{parallel_draws, sample_sphere_leading};
use haar_digits::{build_empirical, DigitLaw};
use serde::Serialize;

use crate::args::Fig1Args;
use crate::law::base_of;
use crate::output::{csv_text, envelope, fmt_float, render};
use crate::{CliError, Report};

#[derive(Clone, Copy, Serialize)]
struct Row {
    dim: u64,
    digit: u32,
    frequency: f64,
    predicted: f64,
}

#[derive(Serialize)]
struct Fig1Report {
    base: u32,
    count: usize,
    seed: u64,
    workers: usize,
    rows: Vec<Row>,
}

/// Worker streams of dimension `k` start at `k << 32`.
pub fn stream_base(dim_index: usize) -> u64 {
    (dim_index as u64) << 32
}

pub fn run(a: &Fig1Args) -> Result<Report, CliError> {
    let base = base_of(a.common.base)?;
    if a.dims.is_empty() {
        return Err(CliError::Usage("--dims must list at least one dimension".into()));
    }
    if a.dims.contains(&0) {
        return Err(CliError::Usage("sphere dimensions must be at least 1".into()));
    }
    if a.count == 0 || a.mc.workers == 0 {
        return Err(CliError::Usage("--N and --workers must be at least 1".into()));
    }
    let mut rows = Vec::new();
    for (k, &dim) in a.dims.iter().enumerate() {
        let n = usize::try_from(dim).map_err(|_| CliError::Usage(format!("dimension {dim} too large")))?;
        let xs = parallel_draws(a.mc.seed, stream_base(k), a.mc.workers, a.count, |r| {
            sample_sphere_leading(n, 1, r)[0]
        });
        let observed = build_empirical(&xs, base)?.histogram().probs;
        let predicted = DigitLaw::sphere_limit(base, dim)?.first_digit_probs()?;
        for (d, (f, p)) in observed.into_iter().zip(predicted).enumerate() {
            rows.push(Row {
                dim,
                digit: d as u32 + 1,
                frequency: f,
                predicted: p,
            });
        }
    }
    let text = render(
        a.common.format,
        || {
            envelope(
                "fig1",
                &Fig1Report {
                    base: base.get(),
                    count: a.count,
                    seed: a.mc.seed,
                    workers: a.mc.workers,
                    rows: rows.clone(),
                },
            )
        },
        || {
            let out: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.dim.to_string(),
                        r.digit.to_string(),
                        fmt_float(r.frequency),
                        fmt_float(r.predicted),
                    ]
                })
                .collect();
            csv_text(&["dim", "digit", "frequency", "predicted"], &out)
        },
    );
    Ok(Report { text, pass: true })
}
