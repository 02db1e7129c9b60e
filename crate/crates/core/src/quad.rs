//! Gauss-Legendre rules and an adaptive bisection integrator built on them.

use std::f64::consts::PI;
use std::sync::OnceLock;

/// Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Computes the rule by Newton iteration on P_n.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
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
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Integrates `f` over [a, b].
    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }

    /// Nodes and weights mapped to [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, w * half))
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

/// Shared rules used throughout the crate.
pub fn gauss_legendre(n: usize) -> &'static GaussLegendre {
    static G2: OnceLock<GaussLegendre> = OnceLock::new();
    static G8: OnceLock<GaussLegendre> = OnceLock::new();
    static G10: OnceLock<GaussLegendre> = OnceLock::new();
    static G16: OnceLock<GaussLegendre> = OnceLock::new();
    static G20: OnceLock<GaussLegendre> = OnceLock::new();
    let cell = match n {
        2 => &G2,
        8 => &G8,
        10 => &G10,
        16 => &G16,
        20 => &G20,
        _ => panic!("no cached Gauss-Legendre rule with {n} nodes"),
    };
    cell.get_or_init(|| GaussLegendre::new(n))
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
}

/// Adaptive bisection on [a, b] with a 10/20-point Gauss-Legendre pair as error indicator.
///
/// An interval is accepted once |Q20 - Q10| falls below its share of `abs_tol`
/// (proportional to its length) or below `rel_tol * |Q20|`. The returned error
/// is the sum of the accepted |Q20 - Q10|, which overestimates the error of Q20.
pub fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Integral {
    let g10 = gauss_legendre(10);
    let g20 = gauss_legendre(20);
    let total = b - a;
    if total == 0.0 {
        return Integral {
            value: 0.0,
            error: 0.0,
        };
    }
    let mut value = 0.0;
    let mut error = 0.0;
    let mut stack = vec![(a, b, 0u32)];
    while let Some((lo, hi, depth)) = stack.pop() {
        let q10 = g10.integrate(lo, hi, f);
        let q20 = g20.integrate(lo, hi, f);
        let est = (q20 - q10).abs();
        let share = abs_tol * (hi - lo) / total;
        if est <= share || est <= rel_tol * q20.abs() || depth >= 60 || !est.is_finite() {
            value += q20;
            error += if est.is_finite() { est } else { f64::INFINITY };
            continue;
        }
        let mid = 0.5 * (lo + hi);
        stack.push((mid, hi, depth + 1));
        stack.push((lo, mid, depth + 1));
    }
    Integral { value, error }
}
