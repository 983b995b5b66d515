//! One-dimensional Gauss rules.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::nsphere::gamma;

/// Nodes and weights of a one-dimensional quadrature rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Affinely maps a rule on [-1, 1] onto [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> Rule {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        Rule {
            nodes: self.nodes.iter().map(|t| mid + half * t).collect(),
            weights: self.weights.iter().map(|w| w * half).collect(),
        }
    }

    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// n-point Gauss–Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> Rule {
    assert!(n >= 1, "Gauss-Legendre needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
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
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Rule { nodes, weights }
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
    let nf = n as f64;
    let d = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// n-point Gauss–Gegenbauer rule on [-1, 1] for the weight (1 - t²)^a, a > -1.
///
/// Golub–Welsch supplies starting nodes; each node is then polished by Newton
/// on the orthonormal recurrence and the weights are taken from the
/// Christoffel function, which keeps small end weights accurate.
pub fn gauss_gegenbauer(n: usize, a: f64) -> Rule {
    assert!(n >= 1, "Gauss-Gegenbauer needs at least one node");
    assert!(a > -1.0, "weight exponent must exceed -1");
    if a == 0.0 {
        return gauss_legendre(n);
    }
    let lam = a + 0.5;
    // monic recurrence: p_{k+1} = t p_k - beta_k p_{k-1}
    let beta = |k: usize| {
        let k = k as f64;
        k * (k + 2.0 * lam - 1.0) / (4.0 * (k + lam) * (k + lam - 1.0))
    };
    let offdiag: Vec<f64> = (1..n).map(|k| beta(k).sqrt()).collect();
    let mu0 = PI.sqrt() * gamma(a + 1.0).unwrap() / gamma(a + 1.5).unwrap();

    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    for (k, b) in offdiag.iter().enumerate() {
        jacobi[(k, k + 1)] = *b;
        jacobi[(k + 1, k)] = *b;
    }
    let mut guesses: Vec<f64> = SymmetricEigen::new(jacobi).eigenvalues.iter().copied().collect();
    guesses.sort_by(|x, y| x.total_cmp(y));

    // orthonormal values p_0..p_n and p_n' at t
    let eval = |t: f64| -> (f64, f64, f64) {
        let mut p_prev = 0.0;
        let mut p = 1.0 / mu0.sqrt();
        let mut d_prev = 0.0;
        let mut d = 0.0;
        let mut christoffel = p * p;
        for k in 0..n {
            let b_next = beta(k + 1).sqrt();
            let b_cur = if k == 0 { 0.0 } else { offdiag[k - 1] };
            let p_next = (t * p - b_cur * p_prev) / b_next;
            let d_next = (p + t * d - b_cur * d_prev) / b_next;
            p_prev = p;
            p = p_next;
            d_prev = d;
            d = d_next;
            if k + 1 < n {
                christoffel += p * p;
            }
        }
        (p, d, christoffel)
    };

    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for g in guesses {
        let mut t = g;
        for _ in 0..20 {
            let (p, d, _) = eval(t);
            let step = p / d;
            t -= step;
            if step.abs() <= 1e-16 {
                break;
            }
        }
        let (_, _, christoffel) = eval(t);
        nodes.push(t);
        weights.push(1.0 / christoffel);
    }
    // enforce exact symmetry
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let x = 0.5 * (nodes[j] - nodes[i]);
        let w = 0.5 * (weights[i] + weights[j]);
        nodes[i] = -x;
        nodes[j] = x;
        weights[i] = w;
        weights[j] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Rule { nodes, weights }
}

/// Gauss–Legendre in s over [0, π] for z = lo + (hi - lo)(1 - cos s)/2.
///
/// The returned rule lives in z with the Jacobian folded into the weights.
/// Square-root behaviour of an integrand at either end becomes analytic in s.
pub fn cosine_mapped(n: usize, lo: f64, hi: f64) -> Rule {
    let base = gauss_legendre(n).mapped(0.0, PI);
    let half = 0.5 * (hi - lo);
    Rule {
        nodes: base.nodes.iter().map(|s| lo + half * (1.0 - s.cos())).collect(),
        weights: base
            .nodes
            .iter()
            .zip(&base.weights)
            .map(|(s, w)| w * half * s.sin())
            .collect(),
    }
}
