//! Gauss–Legendre rules and composite panel integration of complex integrands.

use num_complex::Complex64;
use once_cell::sync::Lazy;

/// An `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes are the roots of `P_n`, found by Newton iteration from the
    /// Chebyshev-like initial guesses.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integrates `f` over `[a, b]` with this rule.
    pub fn integrate<F: FnMut(f64) -> Complex64>(&self, a: f64, b: f64, mut f: F) -> Complex64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += f(mid + half * x) * *w;
        }
        acc * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Shared 12-point rule used by the Binet integrals.
pub(crate) static GL12: Lazy<GaussLegendre> = Lazy::new(|| GaussLegendre::new(12));

/// Integrates `f` over consecutive panels `[b_0, b_1], [b_1, b_2], ...`, each
/// panel split into `splits` equal pieces.
pub fn composite<F: FnMut(f64) -> Complex64>(
    rule: &GaussLegendre,
    breaks: &[f64],
    splits: usize,
    mut f: F,
) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for pair in breaks.windows(2) {
        let h = (pair[1] - pair[0]) / splits as f64;
        for j in 0..splits {
            let a = pair[0] + h * j as f64;
            acc += rule.integrate(a, a + h, &mut f);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 2, 5, 12, 20] {
            let r = GaussLegendre::new(n);
            let s: f64 = r.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-14, "n={n} sum={s}");
        }
    }

    #[test]
    fn exact_for_polynomials_up_to_degree_2n_minus_1() {
        let r = GaussLegendre::new(6);
        let v = r.integrate(0.0, 2.0, |x| Complex64::new(x.powi(11), 0.0));
        assert!((v.re - 2f64.powi(12) / 12.0).abs() < 1e-10);
    }

    #[test]
    fn composite_exponential() {
        let r = GaussLegendre::new(12);
        let v = composite(&r, &[0.0, 1.0, 3.0, 10.0], 2, |x| Complex64::new((-x).exp(), 0.0));
        assert!((v.re - (1.0 - (-10f64).exp())).abs() < 1e-14);
    }
}
