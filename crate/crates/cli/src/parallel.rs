//! Deterministic parallel execution of experiment replicates.
//!
//! Replicate k derives its randomness from (seed, k) and the results are
//! collected into a vector indexed by k before the order-fixed reduction in
//! the core crate, so any thread count produces bit-identical output.

use rayon::prelude::*;

use fbmrate_core::experiment::{ExperimentConfig, ExperimentPlan, RateEstimate};

use crate::error::AppResult;

/// Builds a dedicated pool of `threads` workers and runs the experiment.
pub fn run_experiment_with_threads(
    config: ExperimentConfig,
    threads: usize,
) -> AppResult<RateEstimate> {
    let plan = ExperimentPlan::new(config)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| crate::error::AppError::Invalid(format!("thread pool: {e}")))?;
    let errors: Result<Vec<Vec<f64>>, fbmrate_core::Error> = pool.install(|| {
        (0..plan.replicates() as u64)
            .into_par_iter()
            .map(|k| plan.replicate_errors(k))
            .collect()
    });
    Ok(plan.assemble(&errors?)?)
}

/// Index-ordered parallel map over replicates, for commands that do their
/// own reduction.
pub fn map_replicates<T, F>(threads: usize, replicates: u64, f: F) -> AppResult<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T, fbmrate_core::Error> + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| crate::error::AppError::Invalid(format!("thread pool: {e}")))?;
    let out: Result<Vec<T>, fbmrate_core::Error> =
        pool.install(|| (0..replicates).into_par_iter().map(&f).collect());
    Ok(out?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use fbmrate_core::experiment::Scenario;
    use fbmrate_core::fbm::HurstParam;
    use fbmrate_core::integrand::{ConvexSpec, Integrand};

    #[test]
    fn thread_count_does_not_change_bits() {
        let cfg = ExperimentConfig {
            hurst: HurstParam::new(0.75).unwrap(),
            integrand: Integrand::Convex(ConvexSpec::call(0.2)),
            scenario: Scenario::FbmConvex,
            n_values: vec![16, 32, 64],
            fine_grid: 256,
            replicates: 120,
            r_norm: 1.0,
            p_param: Some(1.6),
            beta_param: Some(0.3),
            epsilon: None,
            seed: 5,
        };
        let sequential = fbmrate_core::experiment::run_experiment(cfg.clone()).unwrap();
        for threads in [1, 4, 16] {
            let parallel = run_experiment_with_threads(cfg.clone(), threads).unwrap();
            assert_eq!(sequential, parallel, "threads={threads}");
        }
    }
}
