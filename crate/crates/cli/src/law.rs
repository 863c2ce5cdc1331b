use haar_digits::{Base, DigitLaw};
use serde::Serialize;

use crate::args::{LawArgs, LawKind};
use crate::output::{csv_text, envelope, fmt_float, render};
use crate::{CliError, Report};

pub const GRID_POINTS: usize = 99;

/// `s_i = 1 + (B - 1) i / 99`, `i = 0..99`.
pub fn grid(base: Base) -> Vec<f64> {
    (0..GRID_POINTS)
        .map(|i| 1.0 + (base.as_f64() - 1.0) * i as f64 / GRID_POINTS as f64)
        .collect()
}

pub fn base_of(b: u32) -> Result<Base, CliError> {
    Base::new(b).map_err(CliError::from)
}

fn build_law(a: &LawArgs, base: Base) -> Result<DigitLaw, CliError> {
    let needs_k = a.law == LawKind::Power;
    let needs_n = matches!(a.law, LawKind::SphereExact | LawKind::SphereErf | LawKind::SphereLimit);
    if a.k.is_some() && !needs_k {
        return Err(CliError::Usage("--k only applies to --law power".into()));
    }
    if a.n.is_some() && !needs_n {
        return Err(CliError::Usage("--n only applies to the sphere laws".into()));
    }
    let k = || a.k.ok_or_else(|| CliError::Usage("--law power needs --k".into()));
    let n = || a.n.ok_or_else(|| CliError::Usage("sphere laws need --n".into()));
    Ok(match a.law {
        LawKind::Benford => DigitLaw::benford(base),
        LawKind::Uniform => DigitLaw::uniform(base),
        LawKind::Power => DigitLaw::from_density_exponent(base, k()?)?,
        LawKind::SphereExact => DigitLaw::sphere_exact(base, n()?)?,
        LawKind::SphereErf => DigitLaw::sphere_erf(base, n()?)?,
        LawKind::SphereLimit => DigitLaw::sphere_limit(base, n()?)?,
    })
}

#[derive(Clone, Copy, Serialize)]
struct GridRow {
    s: f64,
    cdf: f64,
    density: f64,
}

#[derive(Serialize)]
struct LawReport {
    law: DigitLaw,
    grid: Vec<GridRow>,
    first_digit: Vec<f64>,
}

pub fn run(a: &LawArgs) -> Result<Report, CliError> {
    let base = base_of(a.common.base)?;
    let law = build_law(a, base)?;
    let mut rows = Vec::with_capacity(GRID_POINTS);
    for s in grid(base) {
        rows.push(GridRow {
            s,
            cdf: law.cdf(s)?,
            density: law.density(s)?,
        });
    }
    let first_digit = law.first_digit_probs()?;
    let text = render(
        a.common.format,
        || {
            envelope(
                "law",
                &LawReport {
                    law: law.clone(),
                    grid: rows.clone(),
                    first_digit: first_digit.clone(),
                },
            )
        },
        || {
            let mut out: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        "grid".into(),
                        fmt_float(r.s),
                        fmt_float(r.cdf),
                        fmt_float(r.density),
                        String::new(),
                    ]
                })
                .collect();
            for (d, p) in first_digit.iter().enumerate() {
                out.push(vec![
                    "digit".into(),
                    (d + 1).to_string(),
                    String::new(),
                    String::new(),
                    fmt_float(*p),
                ]);
            }
            csv_text(&["kind", "value", "cdf", "density", "probability"], &out)
        },
    );
    Ok(Report { text, pass: true })
}
