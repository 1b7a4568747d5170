//! `verify-ito`: empirical L1 distance between the left-point sums and the
//! pathwise change-of-variable value, printed per dyadic level.

use std::path::Path;

use fbmrate_core::discretize;
use fbmrate_core::fbm::{CirculantSampler, HurstParam};
use fbmrate_core::rng::stream_seed;
use fbmrate_core::stats::pairwise_sum;

use crate::config::load_integrand;
use crate::error::{AppError, AppResult};
use crate::parallel::map_replicates;

use super::RunContext;

pub fn run(
    ctx: &RunContext,
    hurst: f64,
    steps: usize,
    paths: usize,
    integrand_path: &Path,
) -> AppResult<()> {
    let hurst = HurstParam::new(hurst)?;
    hurst.require_above_half()?;
    if !steps.is_power_of_two() {
        return Err(AppError::Invalid("--steps must be a power of two".into()));
    }
    if paths == 0 {
        return Err(AppError::Invalid("--paths must be at least 1".into()));
    }
    let integrand = load_integrand(integrand_path)?;
    let seed = ctx.seed_override.unwrap_or(0);
    ctx.note(format!(
        "verify-ito: H={} steps={steps} paths={paths} integrand={} seed={seed}",
        hurst.value(),
        integrand.label()
    ));

    let n_values = dyadic_levels(steps);
    let sampler = CirculantSampler::new(hurst, steps)?;

    let abs_errors = map_replicates(ctx.threads, paths as u64, |k| {
        let path = sampler.sample(stream_seed(seed, k));
        let oracle = discretize::ito_oracle(hurst, path.values(), &integrand)?;
        let results = discretize::results_for_levels(
            path.values(),
            &integrand,
            &n_values,
            oracle,
            discretize::OracleKind::ItoPathwise,
        )?;
        Ok(results.iter().map(|r| r.error.abs()).collect::<Vec<f64>>())
    })?;

    for (j, &n) in n_values.iter().enumerate() {
        let column: Vec<f64> = abs_errors.iter().map(|row| row[j]).collect();
        let l1 = pairwise_sum(&column) / column.len() as f64;
        println!("n={n} l1_error={l1:e}");
    }
    Ok(())
}

/// The dyadic ladder printed by this command: 2, 4, ..., steps.
pub fn dyadic_levels(steps: usize) -> Vec<usize> {
    (1..)
        .map(|k| 1usize << k)
        .take_while(|&n| n <= steps)
        .collect()
}
