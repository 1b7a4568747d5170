//! Gauss-Legendre quadrature with runtime-chosen order.

use alloc::vec::Vec;

/// Nodes and weights of the order-`p` Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds the rule by Newton iteration on the Legendre polynomial.
    pub fn new(p: usize) -> Self {
        assert!(p >= 1, "quadrature order must be at least 1");
        let mut nodes = alloc::vec![0.0; p];
        let mut weights = alloc::vec![0.0; p];
        // Roots come in +/- pairs; solve the upper half.
        let m = p.div_ceil(2);
        for i in 0..m {
            let mut x = libm::cos(core::f64::consts::PI * (i as f64 + 0.75) / (p as f64 + 0.5));
            let mut dp = 0.0;
            for _ in 0..100 {
                // Legendre recurrence up to degree p at x.
                let mut p0 = 1.0;
                let mut p1 = x;
                for k in 2..=p {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = p as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if libm::fabs(dx) < 1e-15 {
                    break;
                }
            }
            nodes[i] = -x;
            nodes[p - 1 - i] = x;
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            weights[i] = w;
            weights[p - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Integral of `f` over [a, b].
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(self.weights.iter()) {
            acc += w * f(c + h * x);
        }
        acc * h
    }
}
