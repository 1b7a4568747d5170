//! Convex and Lipschitz integrands.
//!
//! A convex integrand is represented by finitely many atoms of its second
//! derivative measure plus an affine part:
//!
//! ```text
//! f(x) = intercept0 + slope0 * x + sum_k w_k (x - a_k)^+
//! ```
//!
//! which makes the left derivative a finite sum and every hypothesis
//! integral a finite sum over atoms. Lipschitz integrands come from a small
//! closed-form registry so the CLI can reference them by name; each entry
//! carries its antiderivative, which is what the pathwise change-of-variable
//! oracle needs.

use alloc::string::String;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fbm::HurstParam;

/// Convex integrand: purely atomic second-derivative measure plus an affine
/// part. Atom locations are strictly increasing and all masses positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexSpec {
    atoms: Vec<(f64, f64)>,
    slope0: f64,
    intercept0: f64,
    label: String,
}

impl ConvexSpec {
    pub fn new(
        atoms: Vec<(f64, f64)>,
        slope0: f64,
        intercept0: f64,
        label: impl Into<String>,
    ) -> Result<Self> {
        for pair in atoms.windows(2) {
            if pair[1].0 <= pair[0].0 {
                return Err(Error::Config("atom locations must be strictly increasing"));
            }
        }
        for &(loc, mass) in &atoms {
            if mass.is_nan() || mass <= 0.0 {
                return Err(Error::Domain { what: "atom mass must be positive", value: mass });
            }
            if !loc.is_finite() {
                return Err(Error::Domain { what: "atom location must be finite", value: loc });
            }
        }
        Ok(ConvexSpec { atoms, slope0, intercept0, label: label.into() })
    }

    /// Single kink (x - a)^+ with unit mass: the call payoff at strike `a`.
    pub fn call(a: f64) -> Self {
        ConvexSpec::new(alloc::vec![(a, 1.0)], 0.0, 0.0, "call").unwrap()
    }

    /// Pure affine integrand (empty measure).
    pub fn affine(slope: f64, intercept: f64) -> Self {
        ConvexSpec::new(Vec::new(), slope, intercept, "affine").unwrap()
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn slope0(&self) -> f64 {
        self.slope0
    }

    pub fn intercept0(&self) -> f64 {
        self.intercept0
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// f(x) = intercept0 + slope0 x + sum_k w_k (x - a_k)^+.
    pub fn eval_f(&self, x: f64) -> f64 {
        let mut y = self.intercept0 + self.slope0 * x;
        for &(a, w) in &self.atoms {
            if x > a {
                y += w * (x - a);
            }
        }
        y
    }

    /// Left derivative f'_-(x) = slope0 + sum over atoms strictly below x.
    /// Atoms located exactly at x are excluded.
    pub fn eval_left_derivative(&self, x: f64) -> f64 {
        let mut d = self.slope0;
        for &(a, w) in &self.atoms {
            if a < x {
                d += w;
            }
        }
        d
    }

    /// Checks one of the summability hypotheses against the atomic measure.
    /// For a finite atomic measure the integral is a finite sum, so the
    /// hypothesis always holds; the value is returned for bookkeeping.
    pub fn check_hypothesis(&self, which: Hypothesis, p: f64) -> Result<(bool, f64)> {
        let mut total = 0.0;
        for &(a, w) in &self.atoms {
            let g = match which {
                Hypothesis::H1 => libm::pow(constant_c(a), 1.0 / p),
                Hypothesis::H2 => {
                    if a <= 0.0 {
                        return Err(Error::Domain {
                            what: "H2 requires atoms at positive locations (log undefined)",
                            value: a,
                        });
                    }
                    libm::pow(constant_c(libm::log(a)), 1.0 / p)
                }
                Hypothesis::H3 => {
                    let m = (a * a).min((a - 1.0) * (a - 1.0));
                    libm::exp(-0.5 * m)
                }
            };
            total += w * g;
        }
        Ok((true, total))
    }
}

/// The three summability hypotheses on the atom measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hypothesis {
    H1,
    H2,
    H3,
}

/// The level-dependent constant
/// C(a) = max(1, |a|) exp(-min{a^2, (a-1)^2} / 2).
///
/// Strictly positive, bounded by max(1, |a|), and decreasing in |a| once
/// |a| >= 2.
pub fn constant_c(a: f64) -> f64 {
    let m = (a * a).min((a - 1.0) * (a - 1.0));
    libm::fabs(a).max(1.0) * libm::exp(-0.5 * m)
}

/// True iff both parameter chains hold:
/// 2H < p < H/(1-H) and 1-H < beta < H/p with beta != 1 - 2H/p
/// (the exclusion enforced with tolerance 1e-12).
pub fn validate_rate_params(hurst: HurstParam, p: f64, beta: f64) -> bool {
    let h = hurst.value();
    if h <= 0.5 {
        return false;
    }
    let p_ok = 2.0 * h < p && p < h / (1.0 - h);
    let beta_ok = 1.0 - h < beta && beta < h / p;
    let excluded = libm::fabs(beta - (1.0 - 2.0 * h / p)) <= 1e-12;
    p_ok && beta_ok && !excluded
}

/// Same check, surfaced as errors naming the violated inequality.
pub fn require_rate_params(hurst: HurstParam, p: f64, beta: f64) -> Result<()> {
    let h = hurst.value();
    hurst.require_above_half()?;
    if !(2.0 * h < p && p < h / (1.0 - h)) {
        return Err(Error::InvalidP { hurst: h, p });
    }
    if !(1.0 - h < beta && beta < h / p) || libm::fabs(beta - (1.0 - 2.0 * h / p)) <= 1e-12 {
        return Err(Error::InvalidBeta { hurst: h, p, beta });
    }
    Ok(())
}

/// Closed-form Lipschitz integrands, referenced by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LipschitzSpec {
    /// x clamped to [-1, 1]; Lipschitz constant 1.
    ClippedIdentity,
    /// sin(x); Lipschitz constant 1.
    SineCapped,
}

impl LipschitzSpec {
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "clipped-identity" => Some(LipschitzSpec::ClippedIdentity),
            "sine-capped" => Some(LipschitzSpec::SineCapped),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LipschitzSpec::ClippedIdentity => "clipped-identity",
            LipschitzSpec::SineCapped => "sine-capped",
        }
    }

    pub fn lipschitz_constant(self) -> f64 {
        1.0
    }

    pub fn eval(self, x: f64) -> f64 {
        match self {
            LipschitzSpec::ClippedIdentity => x.clamp(-1.0, 1.0),
            LipschitzSpec::SineCapped => libm::sin(x),
        }
    }

    /// Antiderivative with F(0) = 0.
    pub fn antiderivative(self, x: f64) -> f64 {
        match self {
            LipschitzSpec::ClippedIdentity => {
                if libm::fabs(x) <= 1.0 {
                    0.5 * x * x
                } else {
                    libm::fabs(x) - 0.5
                }
            }
            LipschitzSpec::SineCapped => 1.0 - libm::cos(x),
        }
    }
}

/// A discretizable integrand: what to evaluate inside the Riemann sum and
/// the primitive whose endpoint increment is the pathwise integral.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Integrand {
    Convex(ConvexSpec),
    Lipschitz(LipschitzSpec),
}

impl Integrand {
    /// The function sampled at the left grid points: f'_- for a convex
    /// integrand, f itself for a Lipschitz one.
    pub fn weight(&self, x: f64) -> f64 {
        match self {
            Integrand::Convex(c) => c.eval_left_derivative(x),
            Integrand::Lipschitz(l) => l.eval(x),
        }
    }

    /// Primitive of [`Integrand::weight`]: f for a convex integrand, the
    /// registry antiderivative for a Lipschitz one.
    pub fn primitive(&self, x: f64) -> f64 {
        match self {
            Integrand::Convex(c) => c.eval_f(x),
            Integrand::Lipschitz(l) => l.antiderivative(x),
        }
    }

    pub fn label(&self) -> &str {
        match self {
            Integrand::Convex(c) => c.label(),
            Integrand::Lipschitz(l) => l.name(),
        }
    }
}
