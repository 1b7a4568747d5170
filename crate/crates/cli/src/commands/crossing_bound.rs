//! `crossing-bound`: sweep crossing probabilities against the closed-form
//! bound over an (s, t, a) grid and report the worst ratio.

use std::path::Path;

use fbmrate_core::crossing::{crossing_result, CrossingQuery};
use fbmrate_core::fbm::HurstParam;

use crate::config::parse_grid;
use crate::error::{AppError, AppResult};

use super::RunContext;

#[allow(clippy::too_many_arguments)]
pub fn run(
    ctx: &RunContext,
    hurst: f64,
    s_grid: &str,
    t_grid: &str,
    a_grid: &str,
    quadrature_points: usize,
    out: &Path,
) -> AppResult<()> {
    let hurst = HurstParam::new(hurst)?;
    let s_values = parse_grid(s_grid)?;
    let t_values = parse_grid(t_grid)?;
    let a_values = parse_grid(a_grid)?;
    ctx.note(format!(
        "crossing-bound: H={} s={s_grid} t={t_grid} a={a_grid} q={quadrature_points} -> {}",
        hurst.value(),
        out.display()
    ));

    let mut writer = csv::Writer::from_path(out)
        .map_err(|source| AppError::Csv { path: out.into(), source })?;
    writer
        .write_record(["s", "t", "a", "probability", "bound", "ratio"])
        .map_err(|source| AppError::Csv { path: out.into(), source })?;

    let mut max_ratio = f64::NEG_INFINITY;
    let mut argmax: Option<CrossingQuery> = None;
    let mut rows = 0usize;
    for &s in &s_values {
        for &t in &t_values {
            if t <= s {
                continue;
            }
            for &a in &a_values {
                let q = CrossingQuery::new(s, t, a, hurst)?;
                let r = crossing_result(&q, quadrature_points)?;
                writer
                    .write_record([
                        s.to_string(),
                        t.to_string(),
                        a.to_string(),
                        r.probability.to_string(),
                        r.bound_value.to_string(),
                        r.ratio.to_string(),
                    ])
                    .map_err(|source| AppError::Csv { path: out.into(), source })?;
                rows += 1;
                if r.ratio > max_ratio {
                    max_ratio = r.ratio;
                    argmax = Some(q);
                }
            }
        }
    }
    writer.flush().map_err(AppError::io(out))?;

    match argmax {
        Some(q) => {
            println!(
                "max_ratio={max_ratio} at s={} t={} a={} ({rows} grid points)",
                q.s, q.t, q.a
            );
            Ok(())
        }
        None => Err(AppError::Invalid(
            "grids contain no pair with s < t".into(),
        )),
    }
}
