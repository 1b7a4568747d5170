//! `simulate-paths`: draw fBm trajectories and write them as CSV.

use std::path::Path;

use fbmrate_core::fbm::{CholeskySampler, CirculantSampler, FbmPath, HurstParam, SamplingMethod};
use fbmrate_core::rng::stream_seed;

use crate::error::{AppError, AppResult};
use crate::parallel::map_replicates;

use super::RunContext;

pub fn run(
    ctx: &RunContext,
    hurst: f64,
    steps: usize,
    count: usize,
    method: SamplingMethod,
    out: &Path,
) -> AppResult<()> {
    let hurst = HurstParam::new(hurst)?;
    if count == 0 {
        return Err(AppError::Invalid("--count must be at least 1".into()));
    }
    let seed = ctx.seed_override.unwrap_or(0);
    ctx.note(format!(
        "simulate-paths: H={} steps={steps} count={count} seed={seed} method={method:?} -> {}",
        hurst.value(),
        out.display()
    ));

    enum Sampler {
        Chol(CholeskySampler),
        Circ(CirculantSampler),
    }
    let sampler = match method {
        SamplingMethod::Cholesky => Sampler::Chol(CholeskySampler::new(hurst, steps)?),
        SamplingMethod::CirculantEmbedding => Sampler::Circ(CirculantSampler::new(hurst, steps)?),
    };
    let draw = |k: u64| -> Result<FbmPath, fbmrate_core::Error> {
        Ok(match &sampler {
            Sampler::Chol(s) => s.sample(stream_seed(seed, k)),
            Sampler::Circ(s) => s.sample(stream_seed(seed, k)),
        })
    };
    let paths = map_replicates(ctx.threads, count as u64, draw)?;

    let mut writer = csv::Writer::from_path(out)
        .map_err(|source| AppError::Csv { path: out.into(), source })?;
    writer
        .write_record(["path_id", "i", "t", "value"])
        .map_err(|source| AppError::Csv { path: out.into(), source })?;
    for (k, path) in paths.iter().enumerate() {
        for (i, v) in path.values().iter().enumerate() {
            writer
                .write_record([
                    k.to_string(),
                    i.to_string(),
                    path.time(i).to_string(),
                    v.to_string(),
                ])
                .map_err(|source| AppError::Csv { path: out.into(), source })?;
        }
    }
    writer
        .flush()
        .map_err(AppError::io(out))?;
    ctx.note(format!("wrote {count} paths ({} rows)", count * (steps + 1)));
    Ok(())
}
