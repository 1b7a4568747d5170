//! Iterative radix-2 complex FFT, enough for circulant embedding.

/// In-place FFT of the complex signal (re, im). `len` must be a power of two.
/// Forward transform uses the e^{-2 pi i jk / n} kernel; `inverse` flips the
/// kernel sign but applies no 1/n normalization.
pub fn fft_in_place(re: &mut [f64], im: &mut [f64], inverse: bool) {
    let n = re.len();
    debug_assert_eq!(n, im.len());
    debug_assert!(n.is_power_of_two());
    if n <= 1 {
        return;
    }

    // Bit-reversal permutation.
    let mut j = 0usize;
    for i in 0..n - 1 {
        if i < j {
            re.swap(i, j);
            im.swap(i, j);
        }
        let mut mask = n >> 1;
        while j & mask != 0 {
            j ^= mask;
            mask >>= 1;
        }
        j |= mask;
    }

    let sign = if inverse { 1.0 } else { -1.0 };
    let mut len = 2usize;
    while len <= n {
        let ang = sign * 2.0 * core::f64::consts::PI / len as f64;
        let (wr, wi) = (libm::cos(ang), libm::sin(ang));
        let half = len / 2;
        let mut start = 0;
        while start < n {
            let mut cr = 1.0;
            let mut ci = 0.0;
            for k in 0..half {
                let a = start + k;
                let b = a + half;
                let tr = re[b] * cr - im[b] * ci;
                let ti = re[b] * ci + im[b] * cr;
                re[b] = re[a] - tr;
                im[b] = im[a] - ti;
                re[a] += tr;
                im[a] += ti;
                let ncr = cr * wr - ci * wi;
                ci = cr * wi + ci * wr;
                cr = ncr;
            }
            start += len;
        }
        len <<= 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::vec::Vec;

    fn fft_real(signal: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let mut re = signal.to_vec();
        let mut im = vec![0.0; signal.len()];
        fft_in_place(&mut re, &mut im, false);
        (re, im)
    }

    #[test]
    fn matches_direct_dft() {
        let n = 16;
        let mut g = crate::rng::GaussianStream::new(9, 0);
        let sig: Vec<f64> = (0..n).map(|_| g.normal()).collect();
        let (re, im) = fft_real(&sig);
        for k in 0..n {
            let mut dr = 0.0;
            let mut di = 0.0;
            for (j, x) in sig.iter().enumerate() {
                let ang = -2.0 * core::f64::consts::PI * (j * k) as f64 / n as f64;
                dr += x * libm::cos(ang);
                di += x * libm::sin(ang);
            }
            assert!((re[k] - dr).abs() < 1e-10);
            assert!((im[k] - di).abs() < 1e-10);
        }
    }

    #[test]
    fn round_trip_recovers_signal() {
        let n = 64;
        let mut g = crate::rng::GaussianStream::new(10, 0);
        let sig: Vec<f64> = (0..n).map(|_| g.normal()).collect();
        let (mut re, mut im) = fft_real(&sig);
        fft_in_place(&mut re, &mut im, true);
        for (x, y) in sig.iter().zip(re.iter()) {
            assert!((x - y / n as f64).abs() < 1e-12);
        }
    }
}
