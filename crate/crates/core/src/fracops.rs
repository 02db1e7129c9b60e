//! Riemann-Liouville integrals and Caputo derivatives on uniform time grids.
//!
//! All operators use product integration: the smooth factor is replaced by its
//! piecewise-linear (or piecewise-constant) interpolant and integrated exactly
//! against the singular kernel.

use crate::error::{Error, Result};
use crate::mittag_leffler::gamma::gamma;

/// Uniform partition t_i = i·T/n of [0, T].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t_end: f64,
    n: usize,
}

impl TimeGrid {
    /// Requires T > 0 and n ≥ 2.
    pub fn new(t_end: f64, n: usize) -> Result<Self> {
        if !(t_end > 0.0 && t_end.is_finite()) {
            return Err(Error::invalid("T", t_end, "horizon must be positive"));
        }
        if n < 2 {
            return Err(Error::invalid("n", n as f64, "need at least two cells"));
        }
        Ok(Self { t_end, n })
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    /// Number of cells.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn tau(&self) -> f64 {
        self.t_end / self.n as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        if i == self.n {
            self.t_end
        } else {
            i as f64 * self.tau()
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.n).map(move |i| self.node(i))
    }

    /// Index of the node equal to `t` up to rounding, if any.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let x = t / self.tau();
        let i = x.round();
        if i < 0.0 || i > self.n as f64 || (x - i).abs() > 1e-9 * x.abs().max(1.0) {
            return None;
        }
        Some(i as usize)
    }

    /// The grid with the same horizon and `factor` times as many cells.
    pub fn refine(&self, factor: usize) -> Self {
        Self {
            t_end: self.t_end,
            n: self.n * factor.max(1),
        }
    }
}

/// Samples of a real function at the nodes of a [`TimeGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: TimeGrid,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: TimeGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Mismatch(format!(
                "{} samples for a grid with {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("grid function"));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn<F: FnMut(f64) -> f64>(grid: TimeGrid, mut f: F) -> Result<Self> {
        Self::new(grid, grid.nodes().map(&mut f).collect())
    }

    pub fn zeros(grid: TimeGrid) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn grid(&self) -> TimeGrid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Trapezoid-rule inner product on [0, T].
    pub fn inner(&self, other: &GridFunction) -> Result<f64> {
        same_grid(self, other)?;
        Ok(trapezoid(
            self.grid.tau(),
            self.values.iter().zip(&other.values).map(|(a, b)| a * b),
        ))
    }

    /// Trapezoid-rule L2 norm on [0, T].
    pub fn l2_norm(&self) -> f64 {
        trapezoid(self.grid.tau(), self.values.iter().map(|v| v * v)).sqrt()
    }

    /// Maximum absolute value over the nodes.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Pointwise difference.
    pub fn sub(&self, other: &GridFunction) -> Result<GridFunction> {
        same_grid(self, other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a - b)
            .collect();
        Ok(GridFunction {
            grid: self.grid,
            values,
        })
    }

    fn reversed(&self) -> GridFunction {
        let mut values = self.values.clone();
        values.reverse();
        GridFunction {
            grid: self.grid,
            values,
        }
    }
}

fn same_grid(a: &GridFunction, b: &GridFunction) -> Result<()> {
    if a.grid != b.grid {
        return Err(Error::Mismatch(
            "grid functions live on different grids".into(),
        ));
    }
    Ok(())
}

/// Composite trapezoid rule for equally spaced samples.
pub(crate) fn trapezoid<I: ExactSizeIterator<Item = f64>>(tau: f64, samples: I) -> f64 {
    let last = samples.len().saturating_sub(1);
    samples
        .enumerate()
        .map(|(i, v)| if i == 0 || i == last { 0.5 * v } else { v })
        .sum::<f64>()
        * tau
}

/// A fractional order in (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FracOrder(f64);

impl FracOrder {
    pub fn new(value: f64) -> Result<Self> {
        if !(value > 0.0 && value < 1.0) {
            return Err(Error::invalid("order", value, "must lie in (0, 1)"));
        }
        Ok(Self(value))
    }

    /// Orders admitted by the solver and the seminorm equivalence: (1/2, 1).
    pub fn solver(value: f64) -> Result<Self> {
        if !(value > 0.5 && value < 1.0) {
            return Err(Error::invalid("alpha", value, "must lie in (1/2, 1)"));
        }
        Ok(Self(value))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// (m+1)^p − 2m^p + (m−1)^p without cancellation.
fn second_difference(p: f64, m: usize) -> f64 {
    let mf = m as f64;
    if m < 8 {
        return (mf + 1.0).powf(p) - 2.0 * mf.powf(p) + (mf - 1.0).powf(p);
    }
    // m^p · 2 Σ_k C(p, 2k) m^{-2k}
    let h2 = 1.0 / (mf * mf);
    let mut coeff = p * (p - 1.0) / 2.0;
    let mut h = h2;
    let mut sum = 0.0f64;
    let mut k = 1.0;
    while (coeff * h).abs() > 1e-18 * sum.abs() {
        sum += coeff * h;
        coeff *= (p - 2.0 * k) * (p - 2.0 * k - 1.0) / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
        h *= h2;
        k += 1.0;
    }
    2.0 * mf.powf(p) * sum
}

/// Left Riemann-Liouville integral (1/Γ(β)) ∫_0^t (t−s)^{β−1} f(s) ds.
pub fn rl_left(beta: FracOrder, f: &GridFunction) -> GridFunction {
    let b = beta.value();
    let grid = f.grid;
    let n = grid.n;
    let p = b + 1.0;
    let scale = grid.tau().powf(b) / gamma(b + 2.0);
    let inner: Vec<f64> = (0..=n)
        .map(|m| if m == 0 { 0.0 } else { second_difference(p, m) })
        .collect();
    let fv = &f.values;
    let mut out = vec![0.0; n + 1];
    for (i, o) in out.iter_mut().enumerate().skip(1) {
        let fi = i as f64;
        let first = (fi - 1.0).powf(p) - (fi - 1.0 - b) * fi.powf(b);
        let mut acc = first * fv[0] + fv[i];
        for j in 1..i {
            acc += inner[i - j] * fv[j];
        }
        *o = scale * acc;
    }
    GridFunction { grid, values: out }
}

/// Right Riemann-Liouville integral (1/Γ(β)) ∫_t^T (s−t)^{β−1} f(s) ds.
pub fn rl_right(beta: FracOrder, f: &GridFunction) -> GridFunction {
    rl_left(beta, &f.reversed()).reversed()
}

/// L1 weights b_j = (j+1)^{1−α} − j^{1−α}.
pub(crate) fn l1_weights(alpha: f64, n: usize) -> Vec<f64> {
    let q = 1.0 - alpha;
    (0..n)
        .map(|j| {
            if j == 0 {
                1.0
            } else {
                let jf = j as f64;
                jf.powf(q) * (q * (1.0 / jf).ln_1p()).exp_m1()
            }
        })
        .collect()
}

/// Caputo derivative by the L1 scheme; the value at t_0 is 0 by convention.
pub fn caputo_l1(alpha: FracOrder, f: &GridFunction) -> GridFunction {
    let a = alpha.value();
    let grid = f.grid;
    let n = grid.n;
    let c = grid.tau().powf(-a) / gamma(2.0 - a);
    let b = l1_weights(a, n);
    let diff: Vec<f64> = f.values.windows(2).map(|w| w[1] - w[0]).collect();
    let mut out = vec![0.0; n + 1];
    for (i, o) in out.iter_mut().enumerate().skip(1) {
        *o = c * (0..i).map(|j| b[j] * diff[i - 1 - j]).sum::<f64>();
    }
    GridFunction { grid, values: out }
}

/// Caputo derivative as the composition of a discrete derivative with the
/// Riemann-Liouville integral of order 1−α.
///
/// Difference quotients live at cell midpoints; they are moved to the nodes by
/// averaging (interior) or linear extrapolation (endpoints) before integrating.
pub fn caputo_via_rl(alpha: FracOrder, f: &GridFunction) -> GridFunction {
    let grid = f.grid;
    let n = grid.n;
    let tau = grid.tau();
    let q: Vec<f64> = f.values.windows(2).map(|w| (w[1] - w[0]) / tau).collect();
    let mut v = vec![0.0; n + 1];
    v[0] = 1.5 * q[0] - 0.5 * q[1];
    v[n] = 1.5 * q[n - 1] - 0.5 * q[n - 2];
    for i in 1..n {
        v[i] = 0.5 * (q[i - 1] + q[i]);
    }
    let order = FracOrder(1.0 - alpha.value());
    rl_left(order, &GridFunction { grid, values: v })
}
