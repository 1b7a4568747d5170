//! Normal distribution helpers and order-stable reductions.

use alloc::vec::Vec;

pub const SQRT_2PI: f64 = 2.5066282746310002;

/// Standard normal density.
pub fn normal_pdf(z: f64) -> f64 {
    libm::exp(-0.5 * z * z) / SQRT_2PI
}

/// Standard normal CDF via the complementary error function.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z * core::f64::consts::FRAC_1_SQRT_2)
}

/// Upper tail P(Z > z) of the standard normal.
pub fn normal_tail(z: f64) -> f64 {
    0.5 * libm::erfc(z * core::f64::consts::FRAC_1_SQRT_2)
}

/// Pairwise (cascade) summation: associativity-safe up to the fixed split
/// order, so parallel producers that fill a slice by index always reduce to
/// the same bits.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 16 {
        let mut s = 0.0;
        for x in xs {
            s += x;
        }
        s
    } else {
        let mid = xs.len() / 2;
        pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
    }
}

pub fn mean(xs: &[f64]) -> f64 {
    pairwise_sum(xs) / xs.len() as f64
}

/// Unbiased sample variance.
pub fn sample_variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    let sq: Vec<f64> = xs.iter().map(|x| (x - m) * (x - m)).collect();
    pairwise_sum(&sq) / (xs.len() - 1) as f64
}

/// Mean and its standard error estimated by batched means.
///
/// Splits the (ordered) samples into `batches` contiguous batches, estimates
/// the standard error from the spread of batch means. Guards against
/// heavy-tailed summands better than the naive variance formula.
pub fn batched_mean_stderr(xs: &[f64], batches: usize) -> (f64, f64) {
    let n = xs.len();
    assert!(n >= 2, "need at least two samples");
    let b = batches.clamp(2, n);
    let base = n / b;
    let extra = n % b;
    let mut batch_means = Vec::with_capacity(b);
    let mut start = 0;
    for i in 0..b {
        let len = base + usize::from(i < extra);
        batch_means.push(mean(&xs[start..start + len]));
        start += len;
    }
    let grand = mean(xs);
    let var_b = sample_variance(&batch_means);
    (grand, libm::sqrt(var_b / b as f64))
}
