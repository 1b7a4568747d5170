//! Left-point Riemann sums of pathwise integrals and their limits.
//!
//! A single path sampled at a fine grid of N steps serves every coarser sum:
//! the sum over n points reads the same trajectory at the strided indices
//! i N / n, which couples all discretization levels to one realization and
//! keeps error sequences per-path. No interpolation is ever performed; a
//! coarse grid that does not divide the fine one is a hard error.

use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::crossing::{crossing_probability, CrossingQuery};
use crate::error::{Error, Result};
use crate::fbm::HurstParam;
use crate::integrand::Integrand;
use crate::quad::GaussLegendre;
use crate::stats::normal_tail;

/// Where a sum's limiting value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OracleKind {
    /// Exact pathwise value f(B_1) - f(B_0), valid for H > 1/2.
    ItoPathwise,
    /// The same Riemann sum evaluated on the finest grid, used as a proxy
    /// for the Ito integral at H = 1/2.
    FineGridReference,
}

/// One discretization level against its limiting value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscretizationResult {
    pub n: usize,
    pub sum_value: f64,
    pub oracle_value: f64,
    /// Sign convention: discretization minus limit.
    pub error: f64,
    pub oracle_kind: OracleKind,
}

impl DiscretizationResult {
    pub fn new(n: usize, sum_value: f64, oracle_value: f64, oracle_kind: OracleKind) -> Self {
        DiscretizationResult {
            n,
            sum_value,
            oracle_value,
            error: sum_value - oracle_value,
            oracle_kind,
        }
    }
}

/// Left-point sum with an arbitrary weight function:
/// sum_{i=1..n} g(x_{(i-1)/n}) (x_{i/n} - x_{(i-1)/n}).
///
/// `values` holds the trajectory on a fine grid of `values.len() - 1` steps;
/// `n` must divide that step count.
pub fn riemann_sum_fn<G: FnMut(f64) -> f64>(values: &[f64], n: usize, mut g: G) -> Result<f64> {
    let fine = values.len().saturating_sub(1);
    if n == 0 || fine == 0 || !fine.is_multiple_of(n) {
        return Err(Error::GridMismatch { n, fine });
    }
    let stride = fine / n;
    let mut acc = 0.0;
    let mut left = values[0];
    for i in 1..=n {
        let right = values[i * stride];
        acc += g(left) * (right - left);
        left = right;
    }
    Ok(acc)
}

/// Left-point sum of the integrand's weight function: f'_- for a convex
/// integrand, f itself for a Lipschitz one.
pub fn riemann_sum(values: &[f64], integrand: &Integrand, n: usize) -> Result<f64> {
    riemann_sum_fn(values, n, |x| integrand.weight(x))
}

/// Exact pathwise limit of the left-point sums for H > 1/2: the endpoint
/// increment of the integrand's primitive. Refuses to run at H = 1/2, where
/// the limit is the Ito integral and differs by a local-time term.
pub fn ito_oracle(hurst: HurstParam, values: &[f64], integrand: &Integrand) -> Result<f64> {
    if hurst.value() <= 0.5 {
        return Err(Error::ItoOracleAtHalf);
    }
    let first = *values.first().ok_or(Error::Config("empty path"))?;
    let last = *values.last().ok_or(Error::Config("empty path"))?;
    Ok(integrand.primitive(last) - integrand.primitive(first))
}

/// Headroom required of a Brownian fine-grid reference relative to the
/// largest compared n; anything less measures the reference's own error
/// instead of the n^{-1/4} rate.
pub const REFERENCE_HEADROOM: usize = 64;

/// Fine-grid proxy for the Brownian (Ito) limit: the same left-point sum at
/// the full resolution of `values`. `max_compared_n` is the largest n this
/// reference will be compared against.
pub fn bm_reference(values: &[f64], integrand: &Integrand, max_compared_n: usize) -> Result<f64> {
    let fine = values.len().saturating_sub(1);
    if fine < REFERENCE_HEADROOM * max_compared_n {
        return Err(Error::ReferenceTooCoarse { fine, max_n: max_compared_n });
    }
    riemann_sum(values, integrand, fine)
}

/// Exact L2 error ||T_n - T||_2 of the left-point discretization of the
/// Brownian integral with convex integrand f(x) = (x-a)^+.
///
/// By the Ito isometry the squared error is the time integral of the
/// probability that W straddles the level a between the running time and
/// the left grid point:
///
/// * first cell: the left point is W_0 = 0, so the integrand is the single
///   tail P(|W_t| on the far side of a from 0) = Phi_bar(|a|/sqrt(t))
///   (at a = 0 the left weight f'_-(0) vanishes while W_t > 0 half the
///   time, so this cell still contributes);
/// * later cells: P(W_t > a > W_s) + P(W_t < a < W_s) via the crossing
///   quadrature, the mirrored event obtained by reflecting a -> -a.
///
/// `quadrature_points` (at least 4) is the Gauss-Legendre order of the time
/// integral on each cell.
pub fn isometry_error_norm(n: usize, a: f64, quadrature_points: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Config("n must be at least 1"));
    }
    if quadrature_points < 4 {
        return Err(Error::Config("isometry quadrature needs at least 4 points"));
    }
    let gl = GaussLegendre::new(quadrature_points);
    let half = HurstParam::new(0.5).expect("1/2 is a valid Hurst parameter");
    let h = 1.0 / n as f64;

    // The integrand grows like sqrt(t - s) from each cell's left edge;
    // substituting t = s + v^2 makes it smooth in v.
    let root = libm::sqrt(h);

    let mut total = gl.integrate(0.0, root, |v| {
        if v <= 0.0 {
            return 0.0;
        }
        2.0 * v * normal_tail(libm::fabs(a) / v)
    });

    for i in 2..=n {
        let s = (i - 1) as f64 * h;
        let mut cell_err: Option<Error> = None;
        let cell = gl.integrate(0.0, root, |v| {
            let t = (s + v * v).min(1.0);
            if t <= s {
                return 0.0;
            }
            let q = match CrossingQuery::new(s, t, a, half) {
                Ok(q) => q,
                Err(e) => {
                    cell_err = Some(e);
                    return 0.0;
                }
            };
            let up = crossing_probability(&q, 64);
            let down = crossing_probability(&q.reflected(), 64);
            match (up, down) {
                (Ok(u), Ok(d)) => 2.0 * v * (u + d),
                (Err(e), _) | (_, Err(e)) => {
                    cell_err = Some(e);
                    0.0
                }
            }
        });
        if let Some(e) = cell_err {
            return Err(e);
        }
        total += cell;
    }

    Ok(libm::sqrt(total))
}

/// Couples one fine path to a whole ladder of discretization levels.
pub fn results_for_levels(
    values: &[f64],
    integrand: &Integrand,
    n_values: &[usize],
    oracle_value: f64,
    oracle_kind: OracleKind,
) -> Result<Vec<DiscretizationResult>> {
    n_values
        .iter()
        .map(|&n| {
            let sum = riemann_sum(values, integrand, n)?;
            Ok(DiscretizationResult::new(n, sum, oracle_value, oracle_kind))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fbm::{sample_fbm, to_geometric, SamplingMethod};
    use crate::integrand::ConvexSpec;
    use crate::rng::stream_seed;
    use alloc::vec;
    use alloc::vec::Vec;

    fn h(v: f64) -> HurstParam {
        HurstParam::new(v).unwrap()
    }

    #[test]
    fn constant_weight_telescopes() {
        let p = sample_fbm(h(0.75), 64, 3, SamplingMethod::CirculantEmbedding).unwrap();
        let b1 = *p.values().last().unwrap();
        for n in [1, 2, 4, 16, 64] {
            let s = riemann_sum_fn(p.values(), n, |_| 2.5).unwrap();
            assert!((s - 2.5 * b1).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn zero_path_gives_zero() {
        let values = vec![0.0; 17];
        let s = riemann_sum(&values, &Integrand::Convex(ConvexSpec::call(0.0)), 4).unwrap();
        assert_eq!(s, 0.0);
    }

    #[test]
    fn identity_path_hand_value() {
        // values[i] = i/4, g(x) = x, n = 4: (0 + 1 + 2 + 3)/16 = 0.375.
        let values: Vec<f64> = (0..=4).map(|i| i as f64 / 4.0).collect();
        let s = riemann_sum_fn(&values, 4, |x| x).unwrap();
        assert!((s - 0.375).abs() < 1e-15);
    }

    #[test]
    fn grid_mismatch_is_an_error() {
        let values = vec![0.0; 17];
        let g = Integrand::Convex(ConvexSpec::call(0.0));
        assert!(riemann_sum(&values, &g, 5).is_err());
        assert!(riemann_sum(&values, &g, 32).is_err());
        assert!(riemann_sum(&values, &g, 0).is_err());
    }

    #[test]
    fn riemann_sum_linear_in_the_measure() {
        // Mixture of atoms equals the weighted sum of single-atom results.
        let p = sample_fbm(h(0.7), 256, 11, SamplingMethod::CirculantEmbedding).unwrap();
        let atoms = vec![(-0.3, 0.7), (0.2, 1.5)];
        let mixed = ConvexSpec::new(atoms.clone(), 0.0, 0.0, "mix").unwrap();
        let s_mix = riemann_sum(p.values(), &Integrand::Convex(mixed), 64).unwrap();
        let mut s_parts = 0.0;
        for (a, w) in atoms {
            let single = ConvexSpec::new(vec![(a, 1.0)], 0.0, 0.0, "one").unwrap();
            s_parts += w * riemann_sum(p.values(), &Integrand::Convex(single), 64).unwrap();
        }
        assert!((s_mix - s_parts).abs() < 1e-12);
    }

    #[test]
    fn ito_oracle_examples() {
        let call = Integrand::Convex(ConvexSpec::call(0.0));
        let values = vec![0.0, 0.3, 0.7];
        assert!((ito_oracle(h(0.75), &values, &call).unwrap() - 0.7).abs() < 1e-15);

        let affine = Integrand::Convex(ConvexSpec::affine(2.0, 0.0));
        let values = vec![0.0, 0.1, -0.3];
        assert!((ito_oracle(h(0.75), &values, &affine).unwrap() + 0.6).abs() < 1e-15);
    }

    #[test]
    fn ito_oracle_geometric_substitution() {
        let p = sample_fbm(h(0.75), 16, 4, SamplingMethod::CirculantEmbedding).unwrap();
        let x = to_geometric(&p);
        let strike = 1.2;
        let call = Integrand::Convex(ConvexSpec::call(strike));
        let got = ito_oracle(h(0.75), &x, &call).unwrap();
        let x1 = *x.last().unwrap();
        let want = (x1 - strike).max(0.0) - (1.0 - strike).max(0.0);
        assert!((got - want).abs() < 1e-15);
    }

    #[test]
    fn ito_oracle_rejects_brownian_motion() {
        let values = vec![0.0, 0.5];
        let call = Integrand::Convex(ConvexSpec::call(0.0));
        assert!(matches!(
            ito_oracle(h(0.5), &values, &call),
            Err(Error::ItoOracleAtHalf)
        ));
    }

    #[test]
    fn reference_requires_headroom() {
        let g = Integrand::Convex(ConvexSpec::call(0.0));
        let values = vec![0.0; 16_385];
        assert!(bm_reference(&values, &g, 256).is_ok());
        assert!(matches!(
            bm_reference(&values, &g, 257),
            Err(Error::ReferenceTooCoarse { .. })
        ));
    }

    #[test]
    fn reference_constant_weight_is_resolution_free() {
        let p = sample_fbm(h(0.5), 4096, 17, SamplingMethod::CirculantEmbedding).unwrap();
        let w1 = *p.values().last().unwrap();
        let affine = Integrand::Convex(ConvexSpec::affine(3.0, 0.0));
        let r = bm_reference(p.values(), &affine, 64).unwrap();
        assert!((r - 3.0 * w1).abs() < 1e-10);
    }

    #[test]
    fn isometry_norm_far_level_vanishes() {
        let v = isometry_error_norm(1, 40.0, 16).unwrap();
        assert!(v < 1e-12, "{v}");
    }

    #[test]
    fn isometry_norm_single_cell_at_zero() {
        // n = 1, a = 0: squared error = int_0^1 1/2 dt = 1/2.
        let v = isometry_error_norm(1, 0.0, 32).unwrap();
        assert!((v - libm::sqrt(0.5)).abs() < 1e-10, "{v}");
    }

    #[test]
    fn isometry_norm_matches_brute_force_small_n() {
        // Independent oracle: dense trapezoid in t, crossing probabilities
        // by dense trapezoid over the conditional decomposition.
        // Trapezoid on a mesh graded quadratically toward each cell's left
        // edge, where the integrand has a square-root branch.
        let half = h(0.5);
        for (n, a) in [(2usize, 0.3), (4usize, 0.0)] {
            let mut total = 0.0;
            let cells = 3_000;
            let width = 1.0 / n as f64;
            let graded = |j: usize| width * (j as f64 / cells as f64) * (j as f64 / cells as f64);
            // First cell.
            {
                let mut acc = 0.0;
                for j in 0..cells {
                    let (t0, t1) = (graded(j), graded(j + 1));
                    let val = |t: f64| {
                        if t == 0.0 {
                            if a == 0.0 {
                                0.5
                            } else {
                                0.0
                            }
                        } else {
                            normal_tail(libm::fabs(a) / libm::sqrt(t))
                        }
                    };
                    acc += 0.5 * (val(t0) + val(t1)) * (t1 - t0);
                }
                total += acc;
            }
            for i in 2..=n {
                let s = (i - 1) as f64 * width;
                let prob = |t: f64| {
                    let q = CrossingQuery::new(s, t.min(1.0), a, half).unwrap();
                    crossing_probability(&q, 64).unwrap()
                        + crossing_probability(&q.reflected(), 64).unwrap()
                };
                let mut acc = 0.0;
                for j in 0..cells {
                    let (t0, t1) = (s + graded(j), s + graded(j + 1));
                    acc += 0.5 * (prob(t0) + prob(t1)) * (t1 - t0);
                }
                total += acc;
            }
            let brute = libm::sqrt(total);
            let fast = isometry_error_norm(n, a, 32).unwrap();
            assert!((brute - fast).abs() < 1e-7, "n={n} a={a}: {fast} vs {brute}");
        }
    }

    #[test]
    fn level_results_carry_exact_error_convention() {
        let p = sample_fbm(h(0.75), 64, 9, SamplingMethod::CirculantEmbedding).unwrap();
        let call = Integrand::Convex(ConvexSpec::call(0.1));
        let oracle = ito_oracle(h(0.75), p.values(), &call).unwrap();
        let rs = results_for_levels(p.values(), &call, &[8, 16, 64], oracle, OracleKind::ItoPathwise)
            .unwrap();
        assert_eq!(rs.len(), 3);
        for r in &rs {
            assert_eq!(r.oracle_kind, OracleKind::ItoPathwise);
            assert_eq!(r.oracle_value, oracle);
            assert_eq!(r.error, r.sum_value - r.oracle_value);
        }
        assert!(results_for_levels(p.values(), &call, &[7], oracle, OracleKind::ItoPathwise)
            .is_err());
    }

    #[test]
    fn refinement_error_decreases_on_fbm_paths() {
        // Median coupled |error| over replicates decreases at each doubling.
        let hurst = h(0.75);
        let sampler = crate::fbm::CirculantSampler::new(hurst, 1024).unwrap();
        let call = Integrand::Convex(ConvexSpec::call(0.1));
        let n_values = [16usize, 64, 256, 1024];
        let reps = 400;
        let mut abs_errors = vec![Vec::with_capacity(reps); n_values.len()];
        for k in 0..reps {
            let p = sampler.sample(stream_seed(2024, k as u64));
            let oracle = ito_oracle(hurst, p.values(), &call).unwrap();
            for (j, &n) in n_values.iter().enumerate() {
                let s = riemann_sum(p.values(), &call, n).unwrap();
                abs_errors[j].push(libm::fabs(s - oracle));
            }
        }
        let medians: Vec<f64> = abs_errors
            .iter_mut()
            .map(|errs| {
                errs.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
                errs[reps / 2]
            })
            .collect();
        for w in medians.windows(2) {
            assert!(w[1] < w[0], "medians not decreasing: {medians:?}");
        }
    }
}
