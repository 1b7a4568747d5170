//! Exact sampling of fractional Brownian motion on uniform grids of [0, 1].
//!
//! Two exact Gaussian samplers are kept side by side for cross-validation:
//! Cholesky factorization of the path covariance (O(n^3) setup, O(n^2) per
//! path) and circulant embedding of the stationary increment covariance
//! (O(n log n) per path). Both draw from the law determined by
//! [`fbm_covariance`].

use alloc::vec;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft::fft_in_place;
use crate::rng::GaussianStream;

/// Hurst parameter, constrained to (0, 1).
///
/// Discretization operations downstream additionally require a value above
/// 1/2; they check at the call site via [`HurstParam::require_above_half`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct HurstParam(f64);

impl HurstParam {
    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value < 1.0 {
            Ok(HurstParam(value))
        } else {
            Err(Error::InvalidHurst {
                value,
                requirement: "0 < H < 1",
            })
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_brownian(self) -> bool {
        self.0 == 0.5
    }

    pub fn require_above_half(self) -> Result<()> {
        if self.0 > 0.5 {
            Ok(())
        } else {
            Err(Error::InvalidHurst {
                value: self.0,
                requirement: "H > 1/2",
            })
        }
    }
}

impl TryFrom<f64> for HurstParam {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        HurstParam::new(v)
    }
}

impl From<HurstParam> for f64 {
    fn from(h: HurstParam) -> f64 {
        h.0
    }
}

/// Exact sampling algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplingMethod {
    Cholesky,
    CirculantEmbedding,
}

/// Covariance R(t, s) = (t^{2H} + s^{2H} - |t-s|^{2H}) / 2 of fractional
/// Brownian motion on [0, 1].
pub fn fbm_covariance(t: f64, s: f64, hurst: HurstParam) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain { what: "t must lie in [0, 1]", value: t });
    }
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::Domain { what: "s must lie in [0, 1]", value: s });
    }
    let two_h = 2.0 * hurst.value();
    Ok(0.5 * (libm::pow(t, two_h) + libm::pow(s, two_h) - libm::pow(libm::fabs(t - s), two_h)))
}

/// A sampled trajectory on the uniform grid t_i = i / n_steps.
///
/// `values[0] = 0` exactly and `values.len() = n_steps + 1`. Identical
/// `(hurst, n_steps, seed, method)` reproduce identical values bit for bit.
#[derive(Debug, Clone, PartialEq)]
pub struct FbmPath {
    hurst: HurstParam,
    n_steps: usize,
    values: Vec<f64>,
    seed: u64,
    method: SamplingMethod,
}

impl FbmPath {
    pub fn hurst(&self) -> HurstParam {
        self.hurst
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn method(&self) -> SamplingMethod {
        self.method
    }

    /// Grid time of index i.
    pub fn time(&self, i: usize) -> f64 {
        i as f64 / self.n_steps as f64
    }
}

/// Pointwise exponential of a path: the geometric process X_t = e^{B_t}.
/// The output starts at 1 and is strictly positive.
pub fn to_geometric(path: &FbmPath) -> Vec<f64> {
    path.values().iter().map(|&x| libm::exp(x)).collect()
}

/// Draws one path. Builds the sampler tables on every call; ensembles should
/// construct a [`CholeskySampler`] or [`CirculantSampler`] once and reuse it.
pub fn sample_fbm(
    hurst: HurstParam,
    n_steps: usize,
    seed: u64,
    method: SamplingMethod,
) -> Result<FbmPath> {
    match method {
        SamplingMethod::Cholesky => Ok(CholeskySampler::new(hurst, n_steps)?.sample(seed)),
        SamplingMethod::CirculantEmbedding => {
            Ok(CirculantSampler::new(hurst, n_steps)?.sample(seed))
        }
    }
}

/// Tolerance below which negative eigenvalues of the embedded spectrum are
/// treated as roundoff and clipped to zero. The embedding of fractional
/// Gaussian noise is nonnegative definite, so anything below this signals a
/// covariance assembly bug.
const SPECTRUM_TOLERANCE: f64 = 1e-10;

/// Unit-lag autocovariance of fractional Gaussian noise.
fn fgn_acvf(k: usize, two_h: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let k = k as f64;
    0.5 * (libm::pow(k + 1.0, two_h) - 2.0 * libm::pow(k, two_h) + libm::pow(k - 1.0, two_h))
}

/// O(n log n) sampler: circulant embedding of the increment covariance,
/// cumulative-summed to the path.
#[derive(Debug, Clone)]
pub struct CirculantSampler {
    hurst: HurstParam,
    n_steps: usize,
    /// Amplitudes sqrt(lambda_j / m) (j = 0, m/2) and sqrt(lambda_j / (2m))
    /// (paired frequencies), indexed 0..=m/2. Empty for the H = 1/2 fast
    /// path, where increments are drawn i.i.d. directly.
    amplitudes: Vec<f64>,
    embedding_len: usize,
    /// Grid-spacing scale (1/n)^H applied to the unit-lag noise.
    increment_scale: f64,
}

impl CirculantSampler {
    pub fn new(hurst: HurstParam, n_steps: usize) -> Result<Self> {
        if n_steps == 0 {
            return Err(Error::Config("n_steps must be at least 1"));
        }
        let increment_scale = libm::pow(1.0 / n_steps as f64, hurst.value());
        if hurst.is_brownian() {
            // Flat spectrum: increments are i.i.d. standard normals.
            return Ok(CirculantSampler {
                hurst,
                n_steps,
                amplitudes: Vec::new(),
                embedding_len: 0,
                increment_scale,
            });
        }

        let m = (2 * n_steps).next_power_of_two();
        let two_h = 2.0 * hurst.value();
        // First row of the circulant matrix: the acvf continued to lag m/2,
        // then mirrored.
        let mut row = vec![0.0; m];
        for (k, r) in row.iter_mut().take(m / 2 + 1).enumerate() {
            *r = fgn_acvf(k, two_h);
        }
        for k in 1..m / 2 {
            row[m - k] = row[k];
        }
        let mut im = vec![0.0; m];
        fft_in_place(&mut row, &mut im, false);

        let lambda_max = row.iter().fold(0.0_f64, |a, &x| a.max(x));
        let tol = SPECTRUM_TOLERANCE * lambda_max.max(1.0);
        let mut min_eig = f64::INFINITY;
        for lam in row.iter() {
            min_eig = min_eig.min(*lam);
        }
        if min_eig < -tol {
            return Err(Error::EmbeddingNotNonnegative { min_eigenvalue: min_eig });
        }

        let mf = m as f64;
        let mut amplitudes = vec![0.0; m / 2 + 1];
        for (j, amp) in amplitudes.iter_mut().enumerate() {
            let lam = row[j].max(0.0);
            *amp = if j == 0 || j == m / 2 {
                libm::sqrt(lam / mf)
            } else {
                libm::sqrt(lam / (2.0 * mf))
            };
        }

        Ok(CirculantSampler {
            hurst,
            n_steps,
            amplitudes,
            embedding_len: m,
            increment_scale,
        })
    }

    pub fn hurst(&self) -> HurstParam {
        self.hurst
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    /// Draws the path for a single-word seed (derive ensemble seeds with
    /// [`crate::rng::stream_seed`]).
    pub fn sample(&self, seed: u64) -> FbmPath {
        let mut g = GaussianStream::from_seed(seed);
        let n = self.n_steps;
        let mut values = vec![0.0; n + 1];

        if self.hurst.is_brownian() {
            let mut acc = 0.0;
            for v in values.iter_mut().skip(1) {
                acc += self.increment_scale * g.normal();
                *v = acc;
            }
        } else {
            let m = self.embedding_len;
            let mut re = vec![0.0; m];
            let mut im = vec![0.0; m];
            re[0] = self.amplitudes[0] * g.normal();
            re[m / 2] = self.amplitudes[m / 2] * g.normal();
            for j in 1..m / 2 {
                let a = self.amplitudes[j];
                let (x, y) = (g.normal(), g.normal());
                re[j] = a * x;
                im[j] = a * y;
                re[m - j] = re[j];
                im[m - j] = -im[j];
            }
            fft_in_place(&mut re, &mut im, false);
            let mut acc = 0.0;
            for (i, v) in values.iter_mut().skip(1).enumerate() {
                acc += self.increment_scale * re[i];
                *v = acc;
            }
        }

        FbmPath {
            hurst: self.hurst,
            n_steps: n,
            values,
            seed,
            method: SamplingMethod::CirculantEmbedding,
        }
    }
}

/// O(n^3) setup sampler: Cholesky factor of the path covariance, kept for
/// cross-validation of the circulant route. Impractical beyond a few
/// thousand steps.
#[derive(Debug, Clone)]
pub struct CholeskySampler {
    hurst: HurstParam,
    n_steps: usize,
    /// Lower-triangular factor, packed row-major: L[i][j] at i(i+1)/2 + j.
    factor: Vec<f64>,
}

impl CholeskySampler {
    pub fn new(hurst: HurstParam, n_steps: usize) -> Result<Self> {
        if n_steps == 0 {
            return Err(Error::Config("n_steps must be at least 1"));
        }
        let n = n_steps;
        let mut cov = vec![0.0; n * n];
        for i in 0..n {
            let ti = (i + 1) as f64 / n as f64;
            for j in 0..=i {
                let tj = (j + 1) as f64 / n as f64;
                let r = fbm_covariance(ti, tj, hurst)?;
                cov[i * n + j] = r;
                cov[j * n + i] = r;
            }
        }

        let mut factor = vec![0.0; n * (n + 1) / 2];
        let idx = |i: usize, j: usize| i * (i + 1) / 2 + j;
        for i in 0..n {
            for j in 0..=i {
                let mut s = cov[i * n + j];
                for k in 0..j {
                    s -= factor[idx(i, k)] * factor[idx(j, k)];
                }
                if i == j {
                    if s < -SPECTRUM_TOLERANCE {
                        return Err(Error::NotPositiveDefinite { pivot: s, index: i });
                    }
                    factor[idx(i, i)] = libm::sqrt(s.max(0.0));
                } else {
                    let d = factor[idx(j, j)];
                    factor[idx(i, j)] = if d > 0.0 { s / d } else { 0.0 };
                }
            }
        }

        Ok(CholeskySampler { hurst, n_steps, factor })
    }

    pub fn hurst(&self) -> HurstParam {
        self.hurst
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn sample(&self, seed: u64) -> FbmPath {
        let mut g = GaussianStream::from_seed(seed);
        let n = self.n_steps;
        let mut z = vec![0.0; n];
        g.fill_normal(&mut z);
        let mut values = vec![0.0; n + 1];
        for i in 0..n {
            let row = &self.factor[i * (i + 1) / 2..i * (i + 1) / 2 + i + 1];
            let mut acc = 0.0;
            for (l, zk) in row.iter().zip(z.iter()) {
                acc += l * zk;
            }
            values[i + 1] = acc;
        }
        FbmPath {
            hurst: self.hurst,
            n_steps: n,
            values,
            seed,
            method: SamplingMethod::Cholesky,
        }
    }

    #[cfg(test)]
    fn reconstruct_covariance(&self, i: usize, j: usize) -> f64 {
        let idx = |r: usize, c: usize| r * (r + 1) / 2 + c;
        let mut s = 0.0;
        for k in 0..=i.min(j) {
            s += self.factor[idx(i, k)] * self.factor[idx(j, k)];
        }
        s
    }
}
