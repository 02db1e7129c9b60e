//! Fractional Sobolev norms in time, spectral H^s norms in space, and their
//! Bochner combinations for mode trajectories.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fracops::{caputo_via_rl, trapezoid, FracOrder, GridFunction, TimeGrid};
use crate::quad::gauss_legendre;
use crate::spectral::eigenvalue;

/// Coefficients of a function on (0, L) against the sine eigenbasis
/// w_k(x) = √(2/L) sin(kπx/L), k = 1..M.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    length: f64,
    coeffs: Vec<f64>,
}

impl SpectralField {
    pub fn new(length: f64, coeffs: Vec<f64>) -> Result<Self> {
        check_length(length)?;
        if coeffs.is_empty() {
            return Err(Error::invalid("M", 0.0, "need at least one mode"));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("spectral coefficients"));
        }
        Ok(Self { length, coeffs })
    }

    /// The k-th eigenfunction (1-based) among M modes.
    pub fn unit(length: f64, modes: usize, k: usize) -> Result<Self> {
        if k == 0 || k > modes {
            return Err(Error::invalid("k", k as f64, "mode index out of range"));
        }
        let mut coeffs = vec![0.0; modes];
        coeffs[k - 1] = 1.0;
        Self::new(length, coeffs)
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn modes(&self) -> usize {
        self.coeffs.len()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            length: self.length,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }
}

fn check_length(length: f64) -> Result<()> {
    if !(length > 0.0 && length.is_finite()) {
        return Err(Error::invalid(
            "L",
            length,
            "interval length must be positive",
        ));
    }
    Ok(())
}

fn check_s(s: f64) -> Result<()> {
    if !(-1.0..=1.0).contains(&s) {
        return Err(Error::invalid("s", s, "spatial order must lie in [-1, 1]"));
    }
    Ok(())
}

/// Mode coefficients d_k(t_i) of a space-time function, all on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeTrajectories {
    length: f64,
    grid: TimeGrid,
    modes: Vec<GridFunction>,
}

impl ModeTrajectories {
    pub fn new(length: f64, modes: Vec<GridFunction>) -> Result<Self> {
        check_length(length)?;
        let grid = match modes.first() {
            Some(m) => m.grid(),
            None => return Err(Error::invalid("M", 0.0, "need at least one mode")),
        };
        if modes.iter().any(|m| m.grid() != grid) {
            return Err(Error::Mismatch(
                "mode trajectories on different grids".into(),
            ));
        }
        Ok(Self {
            length,
            grid,
            modes,
        })
    }

    pub fn zeros(length: f64, grid: TimeGrid, modes: usize) -> Result<Self> {
        Self::new(length, vec![GridFunction::zeros(grid); modes])
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn grid(&self) -> TimeGrid {
        self.grid
    }

    pub fn modes(&self) -> &[GridFunction] {
        &self.modes
    }

    pub fn mode_count(&self) -> usize {
        self.modes.len()
    }

    /// The spatial field at node `i`.
    pub fn at(&self, i: usize) -> SpectralField {
        SpectralField {
            length: self.length,
            coeffs: self.modes.iter().map(|m| m.values()[i]).collect(),
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let modes = self
            .modes
            .iter()
            .map(|m| GridFunction::new(self.grid, m.values().iter().map(|v| v * factor).collect()))
            .collect::<Result<_>>()
            .expect("scaling keeps samples finite");
        Self {
            length: self.length,
            grid: self.grid,
            modes,
        }
    }
}

/// Moments of the kernel |s−t|^{−1−2α} against products of the linear
/// interpolants on two cells, for one order and one cell count.
#[derive(Debug, Clone)]
pub struct SlobodeckijQuadrature {
    alpha: f64,
    grid: TimeGrid,
    diagonal: f64,
    adjacent_square: f64,
    adjacent_cross: f64,
    /// For offsets m ≥ 2: J00, J01, J10, J02, J11, J20.
    far: Vec<[f64; 6]>,
}

/// ∫_1^2 w^e dw.
fn power_integral(e: f64) -> f64 {
    if e == -1.0 {
        std::f64::consts::LN_2
    } else {
        ((e + 1.0) * std::f64::consts::LN_2).exp_m1() / (e + 1.0)
    }
}

impl SlobodeckijQuadrature {
    pub fn new(alpha: FracOrder, grid: TimeGrid) -> Self {
        let a = alpha.value();
        let p = 1.0 + 2.0 * a;
        let q = 1.0 - 2.0 * a;
        let diagonal = 2.0 / ((3.0 - p) * (4.0 - p));
        // ∫∫ u² (u+v)^{-p} over the unit square, u, v measured from the shared node
        let tail =
            power_integral(3.0 - p) - 2.0 * power_integral(2.0 - p) + power_integral(1.0 - p);
        let adjacent_square = (1.0 / (4.0 - p) - tail) / (p - 1.0);
        let whole = ((q + 1.0) * std::f64::consts::LN_2).exp_m1() * 2.0 / ((q + 1.0) * (q + 2.0));
        let adjacent_cross = 0.5 * whole - adjacent_square;

        let rule = gauss_legendre(16);
        let seg = gauss_legendre(2);
        let n = grid.n();
        let far = (2..n.max(2))
            .map(|m| {
                let mf = m as f64;
                let mut j = [0.0; 6];
                for (lo, hi) in [(-1.0, 0.0), (0.0, 1.0)] {
                    for (w, ww) in rule.mapped(lo, hi) {
                        let kernel = ww * (mf + w).powf(-p);
                        // x ranges over the part of [0,1] with y = x + w in [0,1]
                        let (x0, x1) = (f64::max(0.0, -w), f64::min(1.0, 1.0 - w));
                        for (x, wx) in seg.mapped(x0, x1) {
                            let y = x + w;
                            let k = kernel * wx;
                            j[0] += k;
                            j[1] += k * y;
                            j[2] += k * x;
                            j[3] += k * y * y;
                            j[4] += k * x * y;
                            j[5] += k * x * x;
                        }
                    }
                }
                j
            })
            .collect();
        Self {
            alpha: a,
            grid,
            diagonal,
            adjacent_square,
            adjacent_cross,
            far,
        }
    }

    /// The seminorm of the piecewise-linear interpolant of `f`.
    pub fn seminorm(&self, f: &GridFunction) -> Result<f64> {
        if f.grid() != self.grid {
            return Err(Error::Mismatch("quadrature built for another grid".into()));
        }
        let v = f.values();
        let n = self.grid.n();
        let d: Vec<f64> = v.windows(2).map(|w| w[1] - w[0]).collect();

        let mut total: f64 = d.iter().map(|x| x * x).sum::<f64>() * self.diagonal;
        let mut near = 0.0;
        for i in 0..n - 1 {
            near += (d[i] * d[i] + d[i + 1] * d[i + 1]) * self.adjacent_square
                + 2.0 * d[i] * d[i + 1] * self.adjacent_cross;
        }
        total += 2.0 * near;
        for (idx, jm) in self.far.iter().enumerate() {
            let m = idx + 2;
            let mut acc = 0.0;
            for i in 0..n - m {
                let (di, dj) = (d[i], d[i + m]);
                let jump = v[i + m] - v[i];
                acc +=
                    jump * jump * jm[0] + 2.0 * jump * (dj * jm[1] - di * jm[2]) + dj * dj * jm[3]
                        - 2.0 * di * dj * jm[4]
                        + di * di * jm[5];
            }
            total += 2.0 * acc;
        }
        let scale = self.grid.tau().powf(1.0 - 2.0 * self.alpha);
        Ok((scale * total).max(0.0).sqrt())
    }
}

/// Slobodeckij seminorm |f|_{H^α(0,T)} of the piecewise-linear interpolant.
pub fn slobodeckij_seminorm(alpha: FracOrder, f: &GridFunction) -> f64 {
    SlobodeckijQuadrature::new(alpha, f.grid())
        .seminorm(f)
        .expect("quadrature built on the input grid")
}

/// L2 norm of the composed Caputo derivative, for α ∈ (1/2, 1).
pub fn seminorm_via_rl(alpha: FracOrder, f: &GridFunction) -> Result<f64> {
    FracOrder::solver(alpha.value())?;
    Ok(caputo_via_rl(alpha, f).l2_norm())
}

/// Spectral H^s norm (Σ λ_k^s g_k²)^{1/2}, s ∈ [−1, 1].
pub fn spatial_norm(s: f64, field: &SpectralField) -> Result<f64> {
    check_s(s)?;
    let sum: f64 = field
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, g)| eigenvalue(field.length, i + 1).powf(s) * g * g)
        .sum();
    Ok(sum.sqrt())
}

/// ‖u‖_{L2(0,T; H^s)} with the trapezoid rule in time.
pub fn bochner_l2(s: f64, traj: &ModeTrajectories) -> Result<f64> {
    check_s(s)?;
    let sum: f64 = traj
        .modes
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let l2 = trapezoid(traj.grid.tau(), d.values().iter().map(|v| v * v));
            eigenvalue(traj.length, i + 1).powf(s) * l2
        })
        .sum();
    Ok(sum.sqrt())
}

/// |u|_{H^α(0,T; H^s)} = (Σ λ_k^s |d_k|²_{H^α})^{1/2}.
pub fn bochner_seminorm(alpha: FracOrder, s: f64, traj: &ModeTrajectories) -> Result<f64> {
    check_s(s)?;
    let quad = SlobodeckijQuadrature::new(alpha, traj.grid);
    let parts = traj
        .modes
        .par_iter()
        .enumerate()
        .map(|(i, d)| {
            let semi = quad.seminorm(d)?;
            Ok(eigenvalue(traj.length, i + 1).powf(s) * semi * semi)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(parts.iter().sum::<f64>().sqrt())
}

/// (‖u‖_{L2(0,T; H¹)}, ‖u‖_{H^α(0,T; H^{−1})}).
pub fn full_solution_norm(alpha: FracOrder, traj: &ModeTrajectories) -> Result<(f64, f64)> {
    let energy = bochner_l2(1.0, traj)?;
    let low = bochner_l2(-1.0, traj)?;
    let semi = bochner_seminorm(alpha, -1.0, traj)?;
    Ok((energy, (low * low + semi * semi).sqrt()))
}
