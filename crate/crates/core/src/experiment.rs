//! Monte Carlo rate estimation.
//!
//! One fine path per replicate feeds every discretization level by striding,
//! so the error sequence across n is coupled to a single realization. The
//! per-replicate work is a pure function of (config, replicate index); the
//! assembly step consumes the replicate results in index order with pairwise
//! summation, which makes the whole pipeline independent of how many workers
//! produced the results. A parallel driver only needs to fill the replicate
//! vector by index and call [`ExperimentPlan::assemble`].

use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::discretize::{isometry_error_norm, ito_oracle, riemann_sum, REFERENCE_HEADROOM};
use crate::error::{Error, Result};
use crate::fbm::{to_geometric, CirculantSampler, HurstParam};
use crate::integrand::{require_rate_params, Integrand};
use crate::rng::stream_seed;
use crate::stats::{batched_mean_stderr, pairwise_sum};

/// Batch count for batched-means standard errors.
const STDERR_BATCHES: usize = 20;
/// Default epsilon in the Lipschitz rate exponent 2H - 1 - epsilon.
pub const DEFAULT_EPSILON: f64 = 0.05;

/// Which driving process / integrand family an experiment measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    FbmConvex,
    FbmGeometric,
    FbmLipschitz,
    BmConvex,
    BmLipschitz,
}

impl Scenario {
    pub fn is_brownian(self) -> bool {
        matches!(self, Scenario::BmConvex | Scenario::BmLipschitz)
    }
}

/// Full description of a rate experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub hurst: HurstParam,
    pub integrand: Integrand,
    pub scenario: Scenario,
    /// Strictly increasing powers of two.
    pub n_values: Vec<usize>,
    /// Resolution of the coupled path; every n must divide it.
    pub fine_grid: usize,
    pub replicates: usize,
    /// Order r of the error norm ||S_n - S||_r.
    pub r_norm: f64,
    pub p_param: Option<f64>,
    pub beta_param: Option<f64>,
    /// Epsilon for the Lipschitz exponent 2H - 1 - epsilon.
    pub epsilon: Option<f64>,
    pub seed: u64,
}

/// Outcome of a rate experiment: per-n error norms with Monte Carlo
/// standard errors, the fitted log-log decay slope, and the comparison
/// against the theoretical exponent. `passed` uses the one-sided rule
/// slope + 2 stderr >= exponent: theory upper-bounds the error norm, so
/// only a slope that is too small falsifies it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateEstimate {
    pub n_values: Vec<usize>,
    pub error_norms: Vec<f64>,
    pub mc_stderr: Vec<f64>,
    pub slope: f64,
    pub slope_stderr: f64,
    pub intercept: f64,
    pub theoretical_exponent: f64,
    pub passed: bool,
}

/// A validated experiment with its sampler tables built.
pub struct ExperimentPlan {
    config: ExperimentConfig,
    sampler: CirculantSampler,
    theoretical_exponent: f64,
}

impl ExperimentPlan {
    pub fn new(config: ExperimentConfig) -> Result<Self> {
        let c = &config;
        if c.n_values.is_empty() {
            return Err(Error::Config("n_values must not be empty"));
        }
        if c.n_values.len() < 3 {
            return Err(Error::Config("need at least 3 discretization levels to fit a slope"));
        }
        for w in c.n_values.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::Config("n_values must be strictly increasing"));
            }
        }
        for &n in &c.n_values {
            if !n.is_power_of_two() {
                return Err(Error::Config("n_values must be powers of two"));
            }
            if !c.fine_grid.is_multiple_of(n) {
                return Err(Error::GridMismatch { n, fine: c.fine_grid });
            }
        }
        if c.replicates < STDERR_BATCHES {
            return Err(Error::Config("need at least 20 replicates for batched stderr"));
        }
        if c.r_norm < 1.0 {
            return Err(Error::Domain { what: "r_norm must be at least 1", value: c.r_norm });
        }

        let h = c.hurst.value();
        let max_n = *c.n_values.last().expect("nonempty");
        if c.scenario.is_brownian() {
            if h != 0.5 {
                return Err(Error::InvalidHurst {
                    value: h,
                    requirement: "H = 1/2 for Brownian scenarios",
                });
            }
            if c.fine_grid < REFERENCE_HEADROOM * max_n {
                return Err(Error::ReferenceTooCoarse { fine: c.fine_grid, max_n });
            }
        } else {
            c.hurst.require_above_half()?;
        }

        let theoretical_exponent = match c.scenario {
            Scenario::FbmConvex | Scenario::FbmGeometric => {
                let p = c.p_param.ok_or(Error::Config("p_param is required"))?;
                let beta = c.beta_param.ok_or(Error::Config("beta_param is required"))?;
                require_rate_params(c.hurst, p, beta)?;
                if c.r_norm >= p {
                    return Err(Error::Domain {
                        what: "r_norm must satisfy 1 <= r < p",
                        value: c.r_norm,
                    });
                }
                let convex = match &c.integrand {
                    Integrand::Convex(spec) => spec,
                    Integrand::Lipschitz(_) => {
                        return Err(Error::Config("convex scenarios need a convex integrand"))
                    }
                };
                if c.scenario == Scenario::FbmGeometric
                    && convex.atoms().iter().any(|&(a, _)| a <= 0.0)
                {
                    return Err(Error::Config(
                        "geometric scenario needs all atoms at positive locations",
                    ));
                }
                h / p - beta
            }
            Scenario::FbmLipschitz => {
                if !matches!(c.integrand, Integrand::Lipschitz(_)) {
                    return Err(Error::Config("Lipschitz scenarios need a registry integrand"));
                }
                let eps = c.epsilon.unwrap_or(DEFAULT_EPSILON);
                if !(eps > 0.0 && eps < 2.0 * h - 1.0) {
                    return Err(Error::Domain {
                        what: "epsilon must lie in (0, 2H-1)",
                        value: eps,
                    });
                }
                2.0 * h - 1.0 - eps
            }
            Scenario::BmConvex => {
                if !matches!(c.integrand, Integrand::Convex(_)) {
                    return Err(Error::Config("convex scenarios need a convex integrand"));
                }
                if c.r_norm > 2.0 {
                    return Err(Error::Domain {
                        what: "Brownian convex norms are proved for 1 <= r <= 2",
                        value: c.r_norm,
                    });
                }
                0.25
            }
            Scenario::BmLipschitz => {
                if !matches!(c.integrand, Integrand::Lipschitz(_)) {
                    return Err(Error::Config("Lipschitz scenarios need a registry integrand"));
                }
                0.5
            }
        };

        let sampler = CirculantSampler::new(c.hurst, c.fine_grid)?;
        Ok(ExperimentPlan { config, sampler, theoretical_exponent })
    }

    pub fn config(&self) -> &ExperimentConfig {
        &self.config
    }

    pub fn theoretical_exponent(&self) -> f64 {
        self.theoretical_exponent
    }

    pub fn replicates(&self) -> usize {
        self.config.replicates
    }

    /// Signed coupled errors (S_n - limit) for replicate `k`, one entry per
    /// n. Pure in (config, k): safe to evaluate from any worker.
    pub fn replicate_errors(&self, k: u64) -> Result<Vec<f64>> {
        let c = &self.config;
        let path = self.sampler.sample(stream_seed(c.seed, k));
        let values = if c.scenario == Scenario::FbmGeometric {
            to_geometric(&path)
        } else {
            path.values().to_vec()
        };

        let oracle = if c.scenario.is_brownian() {
            riemann_sum(&values, &c.integrand, c.fine_grid)?
        } else {
            ito_oracle(c.hurst, &values, &c.integrand)?
        };

        c.n_values
            .iter()
            .map(|&n| Ok(riemann_sum(&values, &c.integrand, n)? - oracle))
            .collect()
    }

    /// Reduces per-replicate error vectors (in replicate order) to the rate
    /// estimate. The reduction order is fixed, so the output is identical
    /// no matter how the vector was produced.
    pub fn assemble(&self, errors_by_replicate: &[Vec<f64>]) -> Result<RateEstimate> {
        let c = &self.config;
        if errors_by_replicate.len() != c.replicates {
            return Err(Error::Config("replicate count mismatch"));
        }
        let r = c.r_norm;
        let mut norms = Vec::with_capacity(c.n_values.len());
        let mut stderrs = Vec::with_capacity(c.n_values.len());
        let mut powered = Vec::with_capacity(c.replicates);
        for (j, &n) in c.n_values.iter().enumerate() {
            powered.clear();
            powered.extend(
                errors_by_replicate
                    .iter()
                    .map(|row| libm::pow(libm::fabs(row[j]), r)),
            );
            let (moment, moment_se) = batched_mean_stderr(&powered, STDERR_BATCHES);
            if moment.is_nan() || moment <= 0.0 {
                return Err(Error::NonPositiveErrorNorm { index: j, value: moment });
            }
            let norm = libm::pow(moment, 1.0 / r);
            // Delta method through x -> x^{1/r}.
            let norm_se = moment_se * norm / (r * moment);
            if moment_se > 0.5 * moment {
                return Err(Error::InsufficientReplicates { n, estimate: norm, stderr: norm_se });
            }
            norms.push(norm);
            stderrs.push(norm_se);
        }

        let (slope, slope_stderr, intercept) = fit_loglog(&c.n_values, &norms, &stderrs)?;
        Ok(RateEstimate {
            n_values: c.n_values.clone(),
            error_norms: norms,
            mc_stderr: stderrs,
            slope,
            slope_stderr,
            intercept,
            theoretical_exponent: self.theoretical_exponent,
            passed: slope + 2.0 * slope_stderr >= self.theoretical_exponent,
        })
    }
}

/// Runs the experiment sequentially.
pub fn run_experiment(config: ExperimentConfig) -> Result<RateEstimate> {
    let plan = ExperimentPlan::new(config)?;
    let mut errors = Vec::with_capacity(plan.replicates());
    for k in 0..plan.replicates() {
        errors.push(plan.replicate_errors(k as u64)?);
    }
    plan.assemble(&errors)
}

/// Weighted least squares of log error norms on log n.
///
/// The slope is reported as a positive decay exponent (errors ~ n^{-slope});
/// weights are the inverse variances of the log norms, falling back to unit
/// weights when no standard errors are available. The slope standard error
/// is scaled by the residual chi-square, so an exact power law reports zero
/// uncertainty.
pub fn fit_loglog(
    n_values: &[usize],
    error_norms: &[f64],
    stderrs: &[f64],
) -> Result<(f64, f64, f64)> {
    let m = n_values.len();
    if m < 3 || error_norms.len() != m || stderrs.len() != m {
        return Err(Error::Config("need at least 3 aligned points to fit"));
    }
    for (j, &v) in error_norms.iter().enumerate() {
        if v.is_nan() || v <= 0.0 {
            return Err(Error::NonPositiveErrorNorm { index: j, value: v });
        }
    }
    let use_weights = stderrs.iter().all(|&s| s > 0.0);
    let xs: Vec<f64> = n_values.iter().map(|&n| libm::log(n as f64)).collect();
    let ys: Vec<f64> = error_norms.iter().map(|&v| libm::log(v)).collect();
    let ws: Vec<f64> = if use_weights {
        stderrs
            .iter()
            .zip(error_norms)
            .map(|(&s, &v)| {
                let rel = s / v;
                1.0 / (rel * rel)
            })
            .collect()
    } else {
        alloc::vec![1.0; m]
    };

    let w_sum = pairwise_sum(&ws);
    let x_bar = pairwise_sum(&ws.iter().zip(&xs).map(|(w, x)| w * x).collect::<Vec<_>>()) / w_sum;
    let y_bar = pairwise_sum(&ws.iter().zip(&ys).map(|(w, y)| w * y).collect::<Vec<_>>()) / w_sum;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for i in 0..m {
        sxx += ws[i] * (xs[i] - x_bar) * (xs[i] - x_bar);
        sxy += ws[i] * (xs[i] - x_bar) * (ys[i] - y_bar);
    }
    if sxx == 0.0 {
        return Err(Error::Config("degenerate abscissae"));
    }
    let b = sxy / sxx;
    let intercept = y_bar - b * x_bar;
    let mut chi2 = 0.0;
    for i in 0..m {
        let r = ys[i] - (intercept + b * xs[i]);
        chi2 += ws[i] * r * r;
    }
    let slope_var = chi2 / (m as f64 - 2.0) / sxx;
    Ok((-b, libm::sqrt(slope_var.max(0.0)), intercept))
}

/// The Brownian convex case without Monte Carlo: exact L2 error norms of
/// the call discretization from the isometry route, fitted against the
/// n^{-1/4} benchmark.
pub fn isometry_rate_curve(
    n_values: &[usize],
    a: f64,
    quadrature_points: usize,
) -> Result<RateEstimate> {
    let norms: Vec<f64> = n_values
        .iter()
        .map(|&n| isometry_error_norm(n, a, quadrature_points))
        .collect::<Result<_>>()?;
    let zeros = alloc::vec![0.0; n_values.len()];
    let (slope, slope_stderr, intercept) = fit_loglog(n_values, &norms, &zeros)?;
    Ok(RateEstimate {
        n_values: n_values.to_vec(),
        error_norms: norms,
        mc_stderr: zeros,
        slope,
        slope_stderr,
        intercept,
        theoretical_exponent: 0.25,
        passed: slope + 2.0 * slope_stderr >= 0.25,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrand::{ConvexSpec, LipschitzSpec};
    use alloc::vec;

    fn h(v: f64) -> HurstParam {
        HurstParam::new(v).unwrap()
    }

    fn fbm_convex_config() -> ExperimentConfig {
        ExperimentConfig {
            hurst: h(0.75),
            integrand: Integrand::Convex(ConvexSpec::call(0.2)),
            scenario: Scenario::FbmConvex,
            n_values: vec![16, 32, 64],
            fine_grid: 512,
            replicates: 200,
            r_norm: 1.0,
            p_param: Some(1.6),
            beta_param: Some(0.3),
            epsilon: None,
            seed: 41,
        }
    }

    #[test]
    fn fit_recovers_exact_power_law() {
        let n = [16usize, 32, 64, 128];
        let norms: Vec<f64> = n.iter().map(|&k| 3.0 * libm::pow(k as f64, -0.5)).collect();
        let zeros = [0.0; 4];
        let (slope, se, intercept) = fit_loglog(&n, &norms, &zeros).unwrap();
        assert!((slope - 0.5).abs() < 1e-12);
        assert!(se < 1e-10);
        assert!((intercept - libm::log(3.0)).abs() < 1e-10);
    }

    #[test]
    fn fit_constant_errors_gives_zero_slope() {
        let n = [16usize, 32, 64];
        let norms = [0.7, 0.7, 0.7];
        let zeros = [0.0; 3];
        let (slope, _, _) = fit_loglog(&n, &norms, &zeros).unwrap();
        assert!(slope.abs() < 1e-12);
    }

    #[test]
    fn fit_tolerates_small_noise() {
        // n^{-1/4} decorated with a deterministic 1% ripple.
        let n = [16usize, 32, 64, 128, 256, 512];
        let norms: Vec<f64> = n
            .iter()
            .enumerate()
            .map(|(i, &k)| libm::pow(k as f64, -0.25) * (1.0 + 0.01 * if i % 2 == 0 { 1.0 } else { -1.0 }))
            .collect();
        let ses: Vec<f64> = norms.iter().map(|v| 0.01 * v).collect();
        let (slope, _, _) = fit_loglog(&n, &norms, &ses).unwrap();
        assert!((slope - 0.25).abs() < 0.01, "{slope}");
    }

    #[test]
    fn fit_rejects_nonpositive_norms() {
        let n = [16usize, 32, 64];
        assert!(fit_loglog(&n, &[0.5, 0.0, 0.1], &[0.0; 3]).is_err());
        assert!(fit_loglog(&n, &[0.5, 0.2], &[0.0; 2]).is_err());
    }

    #[test]
    fn plan_validates_scenario_consistency() {
        let mut cfg = fbm_convex_config();
        cfg.hurst = h(0.5);
        assert!(ExperimentPlan::new(cfg).is_err());

        let mut cfg = fbm_convex_config();
        cfg.p_param = Some(1.4); // p <= 2H
        assert!(ExperimentPlan::new(cfg).is_err());

        let mut cfg = fbm_convex_config();
        cfg.n_values = vec![16, 24, 64]; // 24 is not a power of two
        assert!(ExperimentPlan::new(cfg).is_err());

        let mut cfg = fbm_convex_config();
        cfg.fine_grid = 500; // not divisible
        assert!(ExperimentPlan::new(cfg).is_err());

        let mut cfg = fbm_convex_config();
        cfg.r_norm = 1.7; // >= p
        assert!(ExperimentPlan::new(cfg).is_err());

        // Geometric scenario rejects atoms at nonpositive locations.
        let mut cfg = fbm_convex_config();
        cfg.scenario = Scenario::FbmGeometric;
        cfg.integrand = Integrand::Convex(ConvexSpec::call(0.0));
        assert!(ExperimentPlan::new(cfg).is_err());

        // Brownian scenario demands H = 1/2 and reference headroom.
        let cfg = ExperimentConfig {
            hurst: h(0.5),
            integrand: Integrand::Lipschitz(LipschitzSpec::ClippedIdentity),
            scenario: Scenario::BmLipschitz,
            n_values: vec![16, 32, 64],
            fine_grid: 512, // < 64 * 64
            replicates: 40,
            r_norm: 2.0,
            p_param: None,
            beta_param: None,
            epsilon: None,
            seed: 1,
        };
        assert!(matches!(
            ExperimentPlan::new(cfg),
            Err(Error::ReferenceTooCoarse { .. })
        ));
    }

    #[test]
    fn replicate_errors_couple_all_levels() {
        let plan = ExperimentPlan::new(fbm_convex_config()).unwrap();
        let e = plan.replicate_errors(3).unwrap();
        assert_eq!(e.len(), 3);
        // Same replicate twice: identical bits.
        assert_eq!(e, plan.replicate_errors(3).unwrap());
        assert_ne!(e, plan.replicate_errors(4).unwrap());
    }

    #[test]
    fn sequential_run_decays_and_passes() {
        let est = run_experiment(fbm_convex_config()).unwrap();
        assert_eq!(est.n_values, vec![16, 32, 64]);
        assert!(est.error_norms[2] < est.error_norms[0]);
        assert!((est.theoretical_exponent - (0.75 / 1.6 - 0.3)).abs() < 1e-15);
        assert!(est.passed, "slope {} stderr {}", est.slope, est.slope_stderr);
    }

    #[test]
    fn assemble_is_order_fixed() {
        let plan = ExperimentPlan::new(fbm_convex_config()).unwrap();
        let errors: Vec<Vec<f64>> = (0..plan.replicates())
            .map(|k| plan.replicate_errors(k as u64).unwrap())
            .collect();
        let a = plan.assemble(&errors).unwrap();
        let b = plan.assemble(&errors).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn isometry_curve_has_quarter_slope() {
        let est = isometry_rate_curve(&[16, 32, 64], 0.0, 16).unwrap();
        assert!((est.slope - 0.25).abs() < 0.06, "{}", est.slope);
        assert!(est.passed);
    }

    #[test]
    fn geometric_scenario_runs() {
        let cfg = ExperimentConfig {
            hurst: h(0.75),
            integrand: Integrand::Convex(ConvexSpec::call(1.2)),
            scenario: Scenario::FbmGeometric,
            n_values: vec![16, 32, 64],
            fine_grid: 512,
            replicates: 200,
            r_norm: 1.0,
            p_param: Some(1.6),
            beta_param: Some(0.3),
            epsilon: None,
            seed: 7,
        };
        let est = run_experiment(cfg).unwrap();
        assert!(est.error_norms.iter().all(|&v| v > 0.0));
        assert!(est.error_norms[2] < est.error_norms[0]);
    }
}
