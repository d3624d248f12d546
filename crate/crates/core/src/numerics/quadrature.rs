use crate::error::{Error, Result};

/// Integration interval plus the number of Gauss–Legendre nodes to use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub lower: f64,
    pub upper: f64,
    pub node_count: usize,
}

impl QuadratureSpec {
    pub fn new(lower: f64, upper: f64, node_count: usize) -> Result<Self> {
        let spec = Self {
            lower,
            upper,
            node_count,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lower.is_finite() && self.upper.is_finite()) {
            return Err(Error::config("quadrature bounds must be finite"));
        }
        if self.lower >= self.upper {
            return Err(Error::config(format!(
                "quadrature requires lower < upper, got [{}, {}]",
                self.lower, self.upper
            )));
        }
        if self.node_count < 2 {
            return Err(Error::config(format!(
                "quadrature requires at least 2 nodes, got {}",
                self.node_count
            )));
        }
        Ok(())
    }
}

/// Gauss–Legendre rule on the reference interval [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds the `n`-point rule. Nodes are the roots of `P_n`, found by
    /// Newton iteration from the Tricomi initial guess.
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
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                    let (_, d) = legendre_with_derivative(n, x);
                    dp = d;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Integrates `f` over `[a, b]`.
    pub fn integrate<T, F>(&self, f: F, a: f64, b: f64) -> T
    where
        T: std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Default,
        F: Fn(f64) -> T,
    {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let sum = self
            .nodes
            .iter()
            .zip(&self.weights)
            .fold(T::default(), |acc, (&x, &w)| acc + f(mid + half * x) * w);
        sum * half
    }
}

/// `(P_n(x), P_n'(x))` via the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Fixed-node Gauss–Legendre integral of `f` over `spec`.
pub fn integrate_1d<F>(f: F, spec: &QuadratureSpec) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    spec.validate()?;
    Ok(GaussLegendre::new(spec.node_count).integrate(f, spec.lower, spec.upper))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::erfc;
    use proptest::prelude::*;

    #[test]
    fn constant_integrand() {
        let spec = QuadratureSpec::new(0.0, 1.0, 16).unwrap();
        assert!((integrate_1d(|_| 1.0, &spec).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn odd_integrand_vanishes() {
        let spec = QuadratureSpec::new(-1.0, 1.0, 16).unwrap();
        assert!(integrate_1d(|x| x, &spec).unwrap().abs() < 1e-14);
    }

    #[test]
    fn gaussian_matches_erfc_closed_form() {
        // int_{-8}^{8} exp(-x^2) dx = sqrt(pi) * (1 - erfc(8))
        let spec = QuadratureSpec::new(-8.0, 8.0, 200).unwrap();
        let exact = std::f64::consts::PI.sqrt() * (1.0 - erfc(8.0));
        let got = integrate_1d(|x| (-x * x).exp(), &spec).unwrap();
        assert!(((got - exact) / exact).abs() <= 1e-12, "{got} vs {exact}");
    }

    #[test]
    fn shifted_gaussian_with_six_sigma() {
        let (mu, sigma) = (1.3, 0.4);
        let spec = QuadratureSpec::new(mu - 6.5 * sigma, mu + 7.0 * sigma, 200).unwrap();
        let got = integrate_1d(|x| (-(x - mu).powi(2) / (2.0 * sigma * sigma)).exp(), &spec).unwrap();
        let exact =
            sigma * (std::f64::consts::PI / 2.0).sqrt() * (2.0 - erfc(7.0 / 2f64.sqrt()) - erfc(6.5 / 2f64.sqrt()));
        assert!(((got - exact) / exact).abs() <= 1e-12);
    }

    #[test]
    fn weights_sum_to_two_and_polynomials_are_exact() {
        for n in [2, 3, 7, 50, 400] {
            let rule = GaussLegendre::new(n);
            let total: f64 = rule.weights().iter().sum();
            assert!((total - 2.0).abs() < 1e-13, "n = {n}: {total}");
            // degree 2n-1 exactness, checked on x^(2k) for small k
            let k = (n - 1).min(6) as i32;
            let got: f64 = rule.integrate(|x: f64| x.powi(2 * k), -1.0, 1.0);
            assert!((got - 2.0 / (2 * k + 1) as f64).abs() < 1e-13);
        }
    }

    #[test]
    fn invalid_specs_are_rejected() {
        assert!(matches!(QuadratureSpec::new(1.0, 1.0, 10), Err(Error::Config(_))));
        assert!(matches!(QuadratureSpec::new(0.0, 1.0, 1), Err(Error::Config(_))));
        let bad = QuadratureSpec {
            lower: 2.0,
            upper: 1.0,
            node_count: 8,
        };
        assert!(integrate_1d(|x| x, &bad).is_err());
    }

    proptest! {
        #[test]
        fn integration_is_linear(
            a in -3.0f64..3.0,
            b in -3.0f64..3.0,
            c1 in -2.0f64..2.0,
            c2 in 0.1f64..2.0,
        ) {
            let spec = QuadratureSpec::new(-2.0, 3.0, 64).unwrap();
            let f = |x: f64| (c1 * x).sin() + x * x;
            let g = |x: f64| (-(x - c1).powi(2) * c2).exp();
            let lhs = integrate_1d(|x| a * f(x) + b * g(x), &spec).unwrap();
            let rhs = a * integrate_1d(f, &spec).unwrap() + b * integrate_1d(g, &spec).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-13 * (1.0 + lhs.abs()));
        }
    }
}
