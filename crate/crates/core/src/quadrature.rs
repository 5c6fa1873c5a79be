//! Gauss–Legendre rules normalised against the uniform density on `[-1, 1]`.

use crate::error::{Error, Result};

/// Classical Legendre polynomial `P_n(x)` and its derivative, by the three-term recurrence.
pub fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 1..n {
        let kf = k as f64;
        let p_next = ((2.0 * kf + 1.0) * x * p - kf * p_prev) / (kf + 1.0);
        p_prev = p;
        p = p_next;
    }
    // P_n' = n (x P_n - P_{n-1}) / (x^2 - 1), valid off the endpoints
    let dp = if (x * x - 1.0).abs() < 1e-300 {
        let nf = n as f64;
        x.powi(n as i32 + 1) * nf * (nf + 1.0) / 2.0
    } else {
        n as f64 * (x * p - p_prev) / (x * x - 1.0)
    };
    (p, dp)
}

pub fn legendre(n: usize, x: f64) -> f64 {
    legendre_with_derivative(n, x).0
}

/// `L`-point Gauss–Legendre rule with weights scaled by the density 1/2,
/// so they sum to one. Nodes are returned in increasing order.
pub fn gauss_legendre(points: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if points == 0 {
        return Err(Error::Quadrature("rule needs at least one point".into()));
    }
    let n = points;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    // roots are symmetric; solve for the non-negative half
    for i in 0..n.div_ceil(2) {
        // Chebyshev-like initial guess for the i-th largest root
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut converged = false;
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let step = p / dp;
            x -= step;
            if step.abs() <= 1e-15 * x.abs().max(1.0) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Quadrature(format!(
                "Newton iteration for root {i} of P_{n} did not converge"
            )));
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[n - 1 - i] = 0.5 * w;
        weights[i] = 0.5 * w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok((nodes, weights))
}

/// Integrates `f` over `[a, b]` with a fixed Gauss–Legendre rule (plain Lebesgue measure).
pub fn integrate(rule: &(Vec<f64>, Vec<f64>), a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
    let (nodes, weights) = rule;
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    // weights sum to one, so scale by the full interval length
    2.0 * half
        * nodes
            .iter()
            .zip(weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
}
