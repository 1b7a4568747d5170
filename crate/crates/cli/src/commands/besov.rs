//! `besov`: read a sampled path from CSV and emit its Besov report as JSON.

use std::path::Path;

use fbmrate_core::fraccalc::{besov_norms, SampledFunction};

use crate::error::{AppError, AppResult};

use super::RunContext;

pub fn run(
    ctx: &RunContext,
    input: &Path,
    beta: f64,
    path_id: u64,
    t_max_flag: f64,
) -> AppResult<()> {
    ctx.note(format!(
        "besov: input={} beta={beta} path_id={path_id}",
        input.display()
    ));
    let (values, t_max) = read_path_csv(input, path_id)?;
    let f = SampledFunction::new(values, t_max.unwrap_or(t_max_flag))?;
    let report = besov_norms(&f, beta)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("report serialization")
    );
    Ok(())
}

/// Accepts the `simulate-paths` layout (path_id,i,t,value) or a plain
/// file with a `value` column and optional `t`. Returns the values and,
/// when a time column exists, the final time.
fn read_path_csv(path: &Path, path_id: u64) -> AppResult<(Vec<f64>, Option<f64>)> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|source| AppError::Csv { path: path.into(), source })?;
    let headers = reader
        .headers()
        .map_err(|source| AppError::Csv { path: path.into(), source })?
        .clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let value_col = col("value")
        .ok_or_else(|| AppError::Invalid(format!("{}: no 'value' column", path.display())))?;
    let id_col = col("path_id");
    let t_col = col("t");

    let mut values = Vec::new();
    let mut last_t = None;
    for record in reader.records() {
        let record = record.map_err(|source| AppError::Csv { path: path.into(), source })?;
        if let Some(ic) = id_col {
            let id: u64 = record[ic]
                .parse()
                .map_err(|_| AppError::Invalid(format!("bad path_id '{}'", &record[ic])))?;
            if id != path_id {
                continue;
            }
        }
        let v: f64 = record[value_col]
            .parse()
            .map_err(|_| AppError::Invalid(format!("bad value '{}'", &record[value_col])))?;
        values.push(v);
        if let Some(tc) = t_col {
            last_t = Some(
                record[tc]
                    .parse()
                    .map_err(|_| AppError::Invalid(format!("bad t '{}'", &record[tc])))?,
            );
        }
    }
    if values.is_empty() {
        return Err(AppError::Invalid(format!(
            "{}: no rows for path_id {path_id}",
            path.display()
        )));
    }
    Ok((values, last_t))
}
