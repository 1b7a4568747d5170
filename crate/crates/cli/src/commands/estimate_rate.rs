//! `estimate-rate`: run a configured rate experiment, persist results, and
//! check the fitted slope against the theoretical exponent.

use std::path::Path;

use crate::config::ExperimentConfigFile;
use crate::error::{AppError, AppResult};
use crate::parallel::run_experiment_with_threads;
use crate::results::persist_results;

use super::RunContext;

pub fn run(ctx: &RunContext, config_path: &Path, out: &Path) -> AppResult<()> {
    let file = ExperimentConfigFile::load(config_path)?;
    let resolved = file.resolved(ctx.seed_override);
    ctx.note(format!(
        "estimate-rate: {}",
        serde_json::to_string(&resolved).expect("config echo")
    ));

    let config = file.to_core(ctx.seed_override)?;
    let estimate = run_experiment_with_threads(config, ctx.threads)?;
    persist_results(&estimate, &resolved, out)?;

    for ((n, norm), se) in estimate
        .n_values
        .iter()
        .zip(&estimate.error_norms)
        .zip(&estimate.mc_stderr)
    {
        println!("n={n:>6}  error_norm={norm:.6e}  mc_stderr={se:.2e}");
    }
    println!(
        "slope = {:.4} +/- {:.4}  (intercept {:.4}, theoretical exponent {:.4})",
        estimate.slope, estimate.slope_stderr, estimate.intercept, estimate.theoretical_exponent
    );
    println!("results written to {}", out.display());

    if estimate.passed {
        println!("PASS: slope + 2 stderr >= theoretical exponent");
        Ok(())
    } else {
        println!("FAIL: slope + 2 stderr < theoretical exponent");
        Err(AppError::Core(fbmrate_core::Error::RateBoundFailed {
            slope: estimate.slope,
            stderr: estimate.slope_stderr,
            exponent: estimate.theoretical_exponent,
        }))
    }
}
