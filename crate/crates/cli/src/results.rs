//! Result persistence: versioned JSON plus a plot-ready sidecar.
//!
//! Output is byte-deterministic for a given (config, seed): no wall-clock
//! data is written, key order is fixed by the struct layout, and floats use
//! the shortest round-trip representation.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use fbmrate_core::experiment::RateEstimate;

use crate::config::ExperimentConfigFile;
use crate::error::{AppError, AppResult};

pub const SCHEMA_VERSION: u32 = 1;

/// The document written by `estimate-rate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultsDoc {
    pub schema_version: u32,
    pub library_version: String,
    pub config: ExperimentConfigFile,
    pub estimate: RateEstimate,
}

impl ResultsDoc {
    pub fn new(config: ExperimentConfigFile, estimate: RateEstimate) -> Self {
        ResultsDoc {
            schema_version: SCHEMA_VERSION,
            library_version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            estimate,
        }
    }

    pub fn to_json_bytes(&self) -> Vec<u8> {
        let mut bytes = serde_json::to_vec_pretty(self).expect("result serialization");
        bytes.push(b'\n');
        bytes
    }
}

/// Writes the results JSON and a two-column (log n, log error) data file
/// alongside it (same path with a `.dat` extension).
pub fn persist_results(
    estimate: &RateEstimate,
    config: &ExperimentConfigFile,
    path: &Path,
) -> AppResult<()> {
    let doc = ResultsDoc::new(config.clone(), estimate.clone());
    std::fs::write(path, doc.to_json_bytes()).map_err(AppError::io(path))?;

    let dat_path = sidecar_path(path);
    let mut dat = Vec::new();
    writeln!(dat, "# log_n log_error_norm").expect("in-memory write");
    for (n, v) in estimate.n_values.iter().zip(&estimate.error_norms) {
        writeln!(dat, "{} {}", (*n as f64).ln(), v.ln()).expect("in-memory write");
    }
    std::fs::write(&dat_path, dat).map_err(AppError::io(dat_path.clone()))?;
    Ok(())
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    path.with_extension("dat")
}

pub fn load_results(path: &Path) -> AppResult<ResultsDoc> {
    let text = std::fs::read_to_string(path).map_err(AppError::io(path))?;
    serde_json::from_str(&text).map_err(|source| AppError::Json { path: path.into(), source })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::IntegrandFile;
    use fbmrate_core::experiment::Scenario;

    fn sample_doc() -> (ExperimentConfigFile, RateEstimate) {
        let config = ExperimentConfigFile {
            hurst: 0.75,
            integrand: IntegrandFile::Convex {
                atoms: vec![(0.2, 1.0)],
                slope0: 0.0,
                intercept0: 0.0,
                label: None,
            },
            scenario: Scenario::FbmConvex,
            n_values: vec![16, 32, 64],
            fine_grid: 512,
            replicates: 100,
            r_norm: 1.0,
            p_param: Some(1.6),
            beta_param: Some(0.3),
            epsilon: None,
            seed: 1,
        };
        let estimate = RateEstimate {
            n_values: vec![16, 32, 64],
            error_norms: vec![0.11, 0.08, 0.052],
            mc_stderr: vec![0.002, 0.0017, 0.0011],
            slope: 0.53,
            slope_stderr: 0.02,
            intercept: -0.75,
            theoretical_exponent: 0.16875,
            passed: true,
        };
        (config, estimate)
    }

    #[test]
    fn round_trip_is_exact() {
        let (config, estimate) = sample_doc();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("results.json");
        persist_results(&estimate, &config, &path).unwrap();
        let doc = load_results(&path).unwrap();
        assert_eq!(doc.estimate, estimate);
        assert_eq!(doc.config, config);
        assert_eq!(doc.schema_version, SCHEMA_VERSION);
        assert!(sidecar_path(&path).exists());
        let dat = std::fs::read_to_string(sidecar_path(&path)).unwrap();
        assert_eq!(dat.lines().count(), 1 + estimate.n_values.len());
    }

    #[test]
    fn persist_is_byte_deterministic() {
        let (config, estimate) = sample_doc();
        let a = ResultsDoc::new(config.clone(), estimate.clone()).to_json_bytes();
        let b = ResultsDoc::new(config, estimate).to_json_bytes();
        assert_eq!(a, b);
    }

    #[test]
    fn missing_directory_names_the_path() {
        let (config, estimate) = sample_doc();
        let path = Path::new("/nonexistent-dir-for-test/out.json");
        let err = persist_results(&estimate, &config, path).unwrap_err();
        assert!(err.to_string().contains("nonexistent-dir-for-test"));
    }
}
