//! Cross-module checks that pit the discretization machinery against the
//! exact pathwise limit and the fractional-calculus route against both.

use fbmrate_core::crossing::{conditional_decomposition, crossing_probability, CrossingQuery};
use fbmrate_core::discretize::ito_oracle;
use fbmrate_core::experiment::{ExperimentConfig, ExperimentPlan, Scenario};
use fbmrate_core::fbm::{CirculantSampler, HurstParam};
use fbmrate_core::fraccalc::{
    besov_norms, gls_integral, sup_frac_derivative_moments, SampledFunction,
};
use fbmrate_core::integrand::{ConvexSpec, Integrand};
use fbmrate_core::rng::{stream_seed, GaussianStream};

fn h(v: f64) -> HurstParam {
    HurstParam::new(v).unwrap()
}

#[test]
fn per_path_error_shrinks_from_coarse_to_fine() {
    // Almost-sure convergence proxy: on at least 95% of paths the coupled
    // error at the finest level improves on the n = 16 level.
    let cfg = ExperimentConfig {
        hurst: h(0.75),
        integrand: Integrand::Convex(ConvexSpec::call(0.2)),
        scenario: Scenario::FbmConvex,
        n_values: vec![16, 256, 4096],
        fine_grid: 4096,
        replicates: 300,
        r_norm: 1.0,
        p_param: Some(1.6),
        beta_param: Some(0.3),
        epsilon: None,
        seed: 31415,
    };
    let plan = ExperimentPlan::new(cfg).unwrap();
    let mut improved = 0;
    for k in 0..300 {
        let e = plan.replicate_errors(k).unwrap();
        // A path that never straddles the kink has exactly zero error at
        // every resolution; that tie is converged, not a regression.
        if e[2].abs() <= e[0].abs() {
            improved += 1;
        }
    }
    assert!(improved >= 285, "only {improved}/300 paths improved");
}

#[test]
fn gls_route_matches_pathwise_oracle_on_fbm() {
    // f = f'_-(B) (an indicator step function), g = the same path. The
    // generalized Stieltjes value must land on f(B_1) - f(0); the
    // certificate must hold on every path (gls_integral errors otherwise).
    let hurst = h(0.75);
    let beta = 0.4;
    let n = 4096;
    let call = ConvexSpec::call(0.2);
    let integrand = Integrand::Convex(call.clone());
    let sampler = CirculantSampler::new(hurst, n).unwrap();
    let paths = 100u64;
    let mut errs: Vec<f64> = Vec::new();
    for k in 0..paths {
        let p = sampler.sample(stream_seed(777, k));
        let g = SampledFunction::new(p.values().to_vec(), 1.0).unwrap();
        let f_values: Vec<f64> = p
            .values()
            .iter()
            .map(|&b| call.eval_left_derivative(b))
            .collect();
        let f = SampledFunction::new(f_values, 1.0).unwrap();
        let (value, certificate) = gls_integral(&f, &g, beta, n).unwrap();
        assert!(value.abs() <= certificate);
        let want = ito_oracle(hurst, p.values(), &integrand).unwrap();
        errs.push((value - want).abs());
    }
    errs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let p95 = errs[95];
    assert!(p95 < 2e-2, "95th percentile {p95}");
}

#[test]
fn besov_seminorm_stabilizes_under_refinement() {
    // An H = 0.8 path has finite ||.||_{1,beta} for beta = 0.6; the grid
    // value moves by well under 5% between 2048 and 4096 steps of the same
    // trajectory.
    let sampler = CirculantSampler::new(h(0.8), 4096).unwrap();
    let p = sampler.sample(stream_seed(4812, 9));
    let fine = SampledFunction::new(p.values().to_vec(), 1.0).unwrap();
    let coarse_values: Vec<f64> = p.values().iter().step_by(2).copied().collect();
    let coarse = SampledFunction::new(coarse_values, 1.0).unwrap();
    let nf = besov_norms(&fine, 0.6).unwrap().norm_1beta;
    let nc = besov_norms(&coarse, 0.6).unwrap().norm_1beta;
    assert!(nf.is_finite() && nc.is_finite() && nc > 0.0);
    let rel = (nf - nc).abs() / nc;
    assert!(rel < 0.05, "relative change {rel}");
}

#[test]
fn sup_derivative_moment_estimate_is_stable() {
    let hurst = h(0.75);
    let m1 = sup_frac_derivative_moments(hurst, 0.3, 2.0, 300, 256, 99).unwrap();
    let m2 = sup_frac_derivative_moments(hurst, 0.3, 2.0, 600, 256, 99).unwrap();
    assert!(m1.is_finite() && m2.is_finite() && m1 > 0.0);
    let rel = (m2 - m1).abs() / m1;
    assert!(rel < 0.2, "m1={m1} m2={m2} rel={rel}");
}

#[test]
fn crossing_quadrature_agrees_with_monte_carlo_grid() {
    // 3 x 3 x 3 (s, t, a) grid at H = 0.6 and H = 0.9, quadrature within
    // 4 Monte Carlo standard errors of 1e6 paired Gaussian draws.
    let draws = 1_000_000u64;
    let mut stream = 0u64;
    for hv in [0.6, 0.9] {
        let hurst = h(hv);
        for s in [0.2, 0.45, 0.7] {
            for dt in [0.1, 0.2, 0.29] {
                let t = s + dt;
                for a in [-0.8, 0.1, 0.9] {
                    let q = CrossingQuery::new(s, t, a, hurst).unwrap();
                    let exact = crossing_probability(&q, 64).unwrap();
                    let (slope, sigma) = conditional_decomposition(&q).unwrap();
                    let s_h = s.powf(hv);
                    let mut g = GaussianStream::new(0xD1CE, stream);
                    stream += 1;
                    let mut hits = 0u64;
                    for _ in 0..draws {
                        let bs = s_h * g.normal();
                        let bt = slope * bs + sigma * g.normal();
                        if bt > a && bs < a {
                            hits += 1;
                        }
                    }
                    let mc = hits as f64 / draws as f64;
                    // Standard error under the quadrature value, floored at
                    // one count, so near-impossible events stay testable.
                    let stderr = (exact * (1.0 - exact) / draws as f64)
                        .sqrt()
                        .max(1.0 / draws as f64);
                    assert!(
                        (mc - exact).abs() < 4.0 * stderr,
                        "H={hv} s={s} t={t} a={a}: {exact} vs MC {mc}"
                    );
                }
            }
        }
    }
}

#[test]
fn fitted_slope_does_not_depend_on_the_norm_order() {
    // The theorem promises one exponent for every r < p; the fitted slopes
    // at r = 1, 1.2, 1.5 must agree within twice their joint stderr.
    let mut estimates = Vec::new();
    for r in [1.0, 1.2, 1.5] {
        let cfg = ExperimentConfig {
            hurst: h(0.75),
            integrand: Integrand::Convex(ConvexSpec::call(0.2)),
            scenario: Scenario::FbmConvex,
            n_values: vec![16, 64, 256],
            fine_grid: 1024,
            replicates: 2000,
            r_norm: r,
            p_param: Some(1.6),
            beta_param: Some(0.3),
            epsilon: None,
            seed: 271828,
        };
        estimates.push(fbmrate_core::experiment::run_experiment(cfg).unwrap());
    }
    for i in 0..estimates.len() {
        for j in i + 1..estimates.len() {
            let (a, b) = (&estimates[i], &estimates[j]);
            let joint = (a.slope_stderr * a.slope_stderr + b.slope_stderr * b.slope_stderr).sqrt();
            assert!(
                (a.slope - b.slope).abs() <= 2.0 * joint,
                "slopes {} vs {} with joint stderr {joint}",
                a.slope,
                b.slope
            );
        }
    }
}
