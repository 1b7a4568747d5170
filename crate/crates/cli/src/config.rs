//! JSON schemas for integrand descriptions and experiment configs.

use std::path::Path;

use serde::{Deserialize, Serialize};

use fbmrate_core::experiment::{ExperimentConfig, Scenario};
use fbmrate_core::fbm::HurstParam;
use fbmrate_core::integrand::{ConvexSpec, Integrand, LipschitzSpec};

use crate::error::{AppError, AppResult};

/// Integrand description as it appears in config files: either an atomic
/// convex spec or a Lipschitz registry name.
///
/// ```json
/// {"atoms": [[0.2, 1.0]], "slope0": 0.0, "intercept0": 0.0}
/// {"lipschitz": "clipped-identity"}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum IntegrandFile {
    Lipschitz {
        lipschitz: String,
    },
    Convex {
        atoms: Vec<(f64, f64)>,
        #[serde(default)]
        slope0: f64,
        #[serde(default)]
        intercept0: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
}

impl IntegrandFile {
    pub fn to_integrand(&self) -> AppResult<Integrand> {
        match self {
            IntegrandFile::Lipschitz { lipschitz } => LipschitzSpec::from_name(lipschitz)
                .map(Integrand::Lipschitz)
                .ok_or_else(|| {
                    AppError::Invalid(format!(
                        "unknown Lipschitz integrand '{lipschitz}' \
                         (registry: clipped-identity, sine-capped)"
                    ))
                }),
            IntegrandFile::Convex { atoms, slope0, intercept0, label } => {
                let label = label.clone().unwrap_or_else(|| "convex".to_string());
                Ok(Integrand::Convex(ConvexSpec::new(
                    atoms.clone(),
                    *slope0,
                    *intercept0,
                    label,
                )?))
            }
        }
    }

    pub fn from_integrand(integrand: &Integrand) -> Self {
        match integrand {
            Integrand::Lipschitz(l) => IntegrandFile::Lipschitz { lipschitz: l.name().to_string() },
            Integrand::Convex(c) => IntegrandFile::Convex {
                atoms: c.atoms().to_vec(),
                slope0: c.slope0(),
                intercept0: c.intercept0(),
                label: Some(c.label().to_string()),
            },
        }
    }
}

/// Experiment config file, snake_case field names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfigFile {
    pub hurst: f64,
    pub integrand: IntegrandFile,
    pub scenario: Scenario,
    pub n_values: Vec<usize>,
    pub fine_grid: usize,
    pub replicates: usize,
    pub r_norm: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_param: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_param: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    pub seed: u64,
}

impl ExperimentConfigFile {
    pub fn load(path: &Path) -> AppResult<Self> {
        let text = std::fs::read_to_string(path).map_err(AppError::io(path))?;
        serde_json::from_str(&text).map_err(|source| AppError::Json { path: path.into(), source })
    }

    /// Resolves into the core config, applying an optional seed override.
    pub fn to_core(&self, seed_override: Option<u64>) -> AppResult<ExperimentConfig> {
        Ok(ExperimentConfig {
            hurst: HurstParam::new(self.hurst)?,
            integrand: self.integrand.to_integrand()?,
            scenario: self.scenario,
            n_values: self.n_values.clone(),
            fine_grid: self.fine_grid,
            replicates: self.replicates,
            r_norm: self.r_norm,
            p_param: self.p_param,
            beta_param: self.beta_param,
            epsilon: self.epsilon,
            seed: seed_override.unwrap_or(self.seed),
        })
    }

    /// Echo document with all overrides and defaults applied, so the
    /// persisted config names every value the run actually used.
    pub fn resolved(&self, seed_override: Option<u64>) -> Self {
        let epsilon = match self.scenario {
            Scenario::FbmLipschitz => {
                Some(self.epsilon.unwrap_or(fbmrate_core::experiment::DEFAULT_EPSILON))
            }
            _ => self.epsilon,
        };
        ExperimentConfigFile {
            seed: seed_override.unwrap_or(self.seed),
            epsilon,
            ..self.clone()
        }
    }
}

/// Loads a bare integrand file (as used by `verify-ito`).
pub fn load_integrand(path: &Path) -> AppResult<Integrand> {
    let text = std::fs::read_to_string(path).map_err(AppError::io(path))?;
    let file: IntegrandFile = serde_json::from_str(&text)
        .map_err(|source| AppError::Json { path: path.into(), source })?;
    file.to_integrand()
}

/// Parses "lo:hi:count" into an inclusive evenly spaced grid.
pub fn parse_grid(spec: &str) -> AppResult<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(AppError::Invalid(format!(
            "grid '{spec}' must have the form lo:hi:count"
        )));
    }
    let lo: f64 = parts[0]
        .parse()
        .map_err(|_| AppError::Invalid(format!("bad grid endpoint '{}'", parts[0])))?;
    let hi: f64 = parts[1]
        .parse()
        .map_err(|_| AppError::Invalid(format!("bad grid endpoint '{}'", parts[1])))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|_| AppError::Invalid(format!("bad grid count '{}'", parts[2])))?;
    if count == 0 {
        return Err(AppError::Invalid("grid count must be positive".into()));
    }
    Ok(fbmrate_core::crossing::linspace(lo, hi, count))
}
