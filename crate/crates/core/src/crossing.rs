//! Gaussian level-crossing probabilities.
//!
//! The joint law of (B_s, B_t) is reduced to one dimension through the
//! conditional decomposition B_t = (R(t,s)/R(s,s)) B_s + sigma Y with Y a
//! standard normal independent of B_s. The crossing probability
//! P(B_t > a, B_s < a) then becomes a one-dimensional integral of a normal
//! tail against the B_s density, evaluated by adaptive Gauss-Legendre
//! quadrature on the standardized variable u = x / s^H.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fbm::{fbm_covariance, HurstParam};
use crate::integrand::constant_c;
use crate::quad::GaussLegendre;
use crate::stats::{normal_pdf, normal_tail};

/// Negative-variance roundoff clip for the conditional variance.
const VARIANCE_TOLERANCE: f64 = 1e-12;
/// Absolute accuracy target of the crossing quadrature.
const QUADRATURE_TARGET: f64 = 1e-10;
/// Standardized integration window: beyond 10 standard deviations the
/// density contributes less than 1e-22.
const WINDOW_SD: f64 = 10.0;

/// A crossing event: does the path sit below `a` at time `s` and above `a`
/// at time `t`?
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossingQuery {
    pub s: f64,
    pub t: f64,
    pub a: f64,
    pub hurst: HurstParam,
}

impl CrossingQuery {
    pub fn new(s: f64, t: f64, a: f64, hurst: HurstParam) -> Result<Self> {
        if !(s > 0.0 && s < 1.0) {
            return Err(Error::Domain { what: "s must lie in (0, 1)", value: s });
        }
        if !(t >= s && t <= 1.0) {
            return Err(Error::Domain { what: "t must lie in [s, 1]", value: t });
        }
        Ok(CrossingQuery { s, t, a, hurst })
    }

    /// The mirrored event P(B_t < a < B_s), which by symmetry of the
    /// centered Gaussian law equals the crossing probability at level -a.
    pub fn reflected(self) -> Self {
        CrossingQuery { a: -self.a, ..self }
    }
}

/// Exact probability together with the closed-form bound it is compared to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossingResult {
    pub probability: f64,
    pub bound_value: f64,
    pub ratio: f64,
}

/// Regression slope and residual standard deviation of B_t given B_s:
/// slope = R(t,s)/R(s,s), sigma^2 = (R(t,t)R(s,s) - R(t,s)^2)/R(s,s).
pub fn conditional_decomposition(q: &CrossingQuery) -> Result<(f64, f64)> {
    let r_ss = fbm_covariance(q.s, q.s, q.hurst)?;
    let r_ts = fbm_covariance(q.t, q.s, q.hurst)?;
    let r_tt = fbm_covariance(q.t, q.t, q.hurst)?;
    let slope = r_ts / r_ss;
    let var = (r_tt * r_ss - r_ts * r_ts) / r_ss;
    if var < -VARIANCE_TOLERANCE {
        return Err(Error::NotPositiveDefinite { pivot: var, index: 0 });
    }
    Ok((slope, libm::sqrt(var.max(0.0))))
}

/// P(B_t > a, B_s < a), accurate to about 1e-10 absolute.
///
/// `quadrature_points` (at least 32) sets the starting Gauss-Legendre order;
/// the order doubles until two successive refinements agree, and a
/// [`Error::QuadratureFailure`] carries the best estimate if they never do.
pub fn crossing_probability(q: &CrossingQuery, quadrature_points: usize) -> Result<f64> {
    if quadrature_points < 32 {
        return Err(Error::Config("crossing quadrature needs at least 32 points"));
    }
    let (slope, sigma) = conditional_decomposition(q)?;
    if sigma == 0.0 {
        // Degenerate t = s: the event {B_s > a > B_s} is empty.
        return Ok(0.0);
    }
    let s_h = libm::pow(q.s, q.hurst.value());

    // P = integral over x < a of P(Y > (a - slope x)/sigma) phi(x/s^H)/s^H dx,
    // standardized to u = x/s^H on [-10, min(a/s^H, 10)].
    let hi = (q.a / s_h).min(WINDOW_SD);
    let lo = -WINDOW_SD;
    if hi <= lo {
        return Ok(0.0);
    }
    let f = |u: f64| normal_tail((q.a - slope * s_h * u) / sigma) * normal_pdf(u);

    let mut points = quadrature_points;
    let mut prev = composite_gl(lo, hi, points, &f);
    loop {
        points *= 2;
        let cur = composite_gl(lo, hi, points, &f);
        let diff = libm::fabs(cur - prev);
        if diff < QUADRATURE_TARGET {
            return Ok(cur);
        }
        if points >= 4096 {
            return Err(Error::QuadratureFailure {
                estimate: cur,
                achieved: diff,
                target: QUADRATURE_TARGET,
            });
        }
        prev = cur;
    }
}

/// Composite Gauss-Legendre rule with panels of width at most one standard
/// deviation of the integration variable.
fn composite_gl<F: Fn(f64) -> f64>(lo: f64, hi: f64, points: usize, f: &F) -> f64 {
    let panels = libm::ceil(hi - lo).max(1.0) as usize;
    let per_panel = points.div_ceil(panels).max(4);
    let gl = GaussLegendre::new(per_panel);
    let width = (hi - lo) / panels as f64;
    let mut acc = 0.0;
    for k in 0..panels {
        let a = lo + k as f64 * width;
        let b = if k + 1 == panels { hi } else { a + width };
        acc += gl.integrate(a, b, f);
    }
    acc
}

/// Crossing probability together with the closed-form bound value:
/// C(a) (t-s)^H s^{-2H} away from H = 1/2, and the level-constant-free
/// exp(-min{a^2,(a-1)^2}/2) sqrt((t-s)/s) form for standard Brownian motion.
pub fn crossing_result(q: &CrossingQuery, quadrature_points: usize) -> Result<CrossingResult> {
    let probability = crossing_probability(q, quadrature_points)?;
    let h = q.hurst.value();
    let bound_value = if q.hurst.is_brownian() {
        let m = (q.a * q.a).min((q.a - 1.0) * (q.a - 1.0));
        libm::exp(-0.5 * m) * libm::sqrt((q.t - q.s) / q.s)
    } else {
        constant_c(q.a) * libm::pow(q.t - q.s, h) * libm::pow(q.s, -2.0 * h)
    };
    let ratio = if bound_value > 0.0 { probability / bound_value } else { 0.0 };
    Ok(CrossingResult { probability, bound_value, ratio })
}

/// Scans probability/bound over a grid and reports the largest ratio seen:
/// an empirical lower estimate for the unknown constant in the crossing
/// bound. Grid points with t <= s are skipped.
pub fn bound_ratio_sweep(
    hurst: HurstParam,
    s_grid: &[f64],
    t_grid: &[f64],
    a_grid: &[f64],
    quadrature_points: usize,
) -> Result<(f64, CrossingQuery)> {
    if s_grid.is_empty() || t_grid.is_empty() || a_grid.is_empty() {
        return Err(Error::Config("sweep grids must be nonempty"));
    }
    let mut max_ratio = -1.0;
    let mut argmax = None;
    for &s in s_grid {
        for &t in t_grid {
            if t <= s {
                continue;
            }
            for &a in a_grid {
                let q = CrossingQuery::new(s, t, a, hurst)?;
                let r = crossing_result(&q, quadrature_points)?;
                if r.ratio > max_ratio {
                    max_ratio = r.ratio;
                    argmax = Some(q);
                }
            }
        }
    }
    match argmax {
        Some(q) => Ok((max_ratio, q)),
        None => Err(Error::Config("sweep grids contain no pair with s < t")),
    }
}

/// The covariance-defect ratio (1 - R(s,s)/R(t,s)) / ((t-s)^H s^{-H}).
///
/// For H > 1/2 the numerator is nonnegative because R(s,s) <= R(t,s); the
/// value stays bounded by roughly 2^H + 2 uniformly in 0 < s <= t <= 1.
pub fn covariance_defect_ratio(s: f64, t: f64, hurst: HurstParam) -> Result<f64> {
    hurst.require_above_half()?;
    if !(s > 0.0 && s <= t && t <= 1.0) {
        return Err(Error::Domain { what: "need 0 < s <= t <= 1", value: s });
    }
    if t == s {
        return Ok(0.0);
    }
    let r_ss = fbm_covariance(s, s, hurst)?;
    let r_ts = fbm_covariance(t, s, hurst)?;
    debug_assert!(r_ss <= r_ts + 1e-15);
    let h = hurst.value();
    let defect = 1.0 - r_ss / r_ts;
    Ok(defect / (libm::pow(t - s, h) * libm::pow(s, -h)))
}

/// Exact normal upper tail next to the bound exp(-a^2/2) / (sqrt(2 pi) a).
/// The tail never exceeds the bound for a > 0.
pub fn normal_tail_bound_check(a: f64) -> Result<(f64, f64)> {
    if a.is_nan() || a <= 0.0 {
        return Err(Error::Domain { what: "tail bound needs a > 0", value: a });
    }
    let tail = normal_tail(a);
    let bound = libm::exp(-0.5 * a * a) / (crate::stats::SQRT_2PI * a);
    Ok((tail, bound))
}

/// Evenly spaced grid helper used by sweeps: `count` points from `lo` to
/// `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return alloc::vec![lo];
    }
    (0..count)
        .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
        .collect()
}
