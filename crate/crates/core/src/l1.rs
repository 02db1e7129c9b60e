//! Implicit L1 time stepping for the mode equations, used as an independent
//! check on the Mittag-Leffler solver.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fracops::{l1_weights, GridFunction};
use crate::mittag_leffler::gamma::gamma;
use crate::norms::ModeTrajectories;
use crate::spectral::{eigenvalue, solve, ProblemSpec, SolutionField};

/// Solves (τ^{−α}/Γ(2−α)) Σ_j b_j (d^{n−j} − d^{n−j−1}) + λ_k d^n = f_k(t_n) mode by mode.
pub fn solve_l1(problem: &ProblemSpec) -> Result<SolutionField> {
    let grid = problem.grid();
    let a = problem.alpha().value();
    let n = grid.n();
    let c = grid.tau().powf(-a) / gamma(2.0 - a);
    let b = l1_weights(a, n);
    let length = problem.length();
    let modes = (1..=problem.modes())
        .into_par_iter()
        .map(|k| {
            let lambda = eigenvalue(length, k);
            let f = problem.forcing().sample(k, grid)?;
            let f = f.values();
            let mut d = vec![0.0; n + 1];
            d[0] = problem.g().coeffs()[k - 1];
            for m in 1..=n {
                let history: f64 = (1..m).map(|j| b[j] * (d[m - j] - d[m - j - 1])).sum();
                d[m] = (f[m] + c * d[m - 1] - c * history) / (c + lambda);
            }
            GridFunction::new(grid, d)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SolutionField {
        traj: ModeTrajectories::new(length, modes)?,
        problem: problem.clone(),
    })
}

/// max_i ‖u(t_i) − v(t_i)‖_{L2(Ω)}, using Parseval over the modes.
pub fn max_l2_distance(u: &ModeTrajectories, v: &ModeTrajectories) -> Result<f64> {
    if u.grid() != v.grid() || u.mode_count() != v.mode_count() {
        return Err(Error::Mismatch(
            "trajectories differ in grid or mode count".into(),
        ));
    }
    let mut worst = 0.0f64;
    for i in 0..u.grid().len() {
        let sq: f64 = u
            .modes()
            .iter()
            .zip(v.modes())
            .map(|(a, b)| (a.values()[i] - b.values()[i]).powi(2))
            .sum();
        worst = worst.max(sq.sqrt());
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub distance: f64,
}

/// Distances between the two solvers on successively doubled grids.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    /// Least-squares slope of −log2(distance) against log2(n); absent when a distance vanishes.
    pub order: Option<f64>,
    /// Distances strictly decrease, or all vanish.
    pub monotone: bool,
}

/// Fitted order of a sequence of errors on grids of size `n`.
pub fn fitted_order(rows: &[ConvergenceRow]) -> Option<f64> {
    if rows.len() < 2
        || rows
            .iter()
            .any(|r| r.distance.is_nan() || r.distance <= 0.0)
    {
        return None;
    }
    let xs: Vec<f64> = rows.iter().map(|r| (r.n as f64).log2()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| -r.distance.log2()).collect();
    let m = xs.len() as f64;
    let xbar = xs.iter().sum::<f64>() / m;
    let ybar = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - xbar) * (y - ybar))
        .sum();
    let sxx: f64 = xs.iter().map(|x| (x - xbar).powi(2)).sum();
    Some(sxy / sxx)
}

pub fn cross_validate(problem: &ProblemSpec, refinements: usize) -> Result<ConvergenceReport> {
    if refinements < 2 {
        return Err(Error::invalid(
            "refinements",
            refinements as f64,
            "need at least two grids",
        ));
    }
    let mut rows = Vec::with_capacity(refinements);
    for r in 0..refinements {
        let p = problem.with_grid(problem.grid().refine(1 << r));
        let spectral = solve(&p)?;
        let stepped = solve_l1(&p)?;
        rows.push(ConvergenceRow {
            n: p.grid().n(),
            distance: max_l2_distance(&spectral.traj, &stepped.traj)?,
        });
    }
    let all_zero = rows.iter().all(|r| r.distance == 0.0);
    let monotone = all_zero || rows.windows(2).all(|w| w[1].distance < w[0].distance);
    Ok(ConvergenceReport {
        order: fitted_order(&rows),
        rows,
        monotone,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fracops::TimeGrid;
    use crate::norms::SpectralField;
    use crate::spectral::Forcing;
    use std::f64::consts::PI;
    use std::sync::Arc;

    fn grid(n: usize) -> TimeGrid {
        TimeGrid::new(1.0, n).unwrap()
    }

    #[test]
    fn zero_data_gives_zero() {
        let g = SpectralField::new(PI, vec![0.0; 3]).unwrap();
        let p = ProblemSpec::new(0.7, grid(16), g, Forcing::Zero).unwrap();
        let sol = solve_l1(&p).unwrap();
        assert!(sol.traj.modes().iter().all(|m| m.max_abs() == 0.0));
        let report = cross_validate(&p, 2).unwrap();
        assert!(report.rows.iter().all(|r| r.distance == 0.0));
        assert!(report.monotone && report.order.is_none());
    }

    #[test]
    fn free_decay_is_positive_and_nonincreasing() {
        let g = SpectralField::new(PI, vec![1.0, 0.5, 2.0, 0.1]).unwrap();
        let p = ProblemSpec::new(0.65, grid(128), g, Forcing::Zero).unwrap();
        let sol = solve_l1(&p).unwrap();
        for m in sol.traj.modes() {
            let v = m.values();
            assert!(v.iter().all(|&x| x > 0.0));
            assert!(v.windows(2).all(|w| w[1] <= w[0]));
        }
    }

    #[test]
    fn manufactured_quadratic_converges_at_l1_rate() {
        let a = 0.6;
        let err = |n| {
            let forcing = Forcing::Function(Arc::new(move |k, t: f64| {
                if k == 1 {
                    2.0 * t.powf(2.0 - a) / gamma(3.0 - a) + t * t
                } else {
                    0.0
                }
            }));
            let g = SpectralField::new(PI, vec![0.0]).unwrap();
            let p = ProblemSpec::new(a, grid(n), g, forcing).unwrap();
            let d = solve_l1(&p).unwrap().traj.modes()[0].clone();
            let exact = GridFunction::from_fn(p.grid(), |t| t * t).unwrap();
            d.sub(&exact).unwrap().max_abs()
        };
        let rows: Vec<ConvergenceRow> = [64, 128, 256, 512]
            .iter()
            .map(|&n| ConvergenceRow {
                n,
                distance: err(n),
            })
            .collect();
        let order = fitted_order(&rows).unwrap();
        assert!((order - (2.0 - a)).abs() < 0.15, "order {order}");
    }

    #[test]
    fn near_unit_order_is_backward_euler() {
        let lambda = 1.0;
        let g = SpectralField::new(PI, vec![1.0]).unwrap();
        let n = 100;
        let p = ProblemSpec::new(0.999, grid(n), g, Forcing::Zero).unwrap();
        let d = solve_l1(&p).unwrap().traj.modes()[0].clone();
        let tau = 1.0 / n as f64;
        for (i, v) in d.values().iter().enumerate() {
            let be = (1.0 + lambda * tau).powi(-(i as i32));
            assert!((v - be).abs() <= 1e-2 * be, "i={i}");
        }
    }

    #[test]
    fn agrees_with_the_spectral_solver_under_refinement() {
        let g = SpectralField::unit(PI, 1, 1).unwrap();
        let p = ProblemSpec::new(0.75, grid(64), g, Forcing::Zero).unwrap();
        let report = cross_validate(&p, 4).unwrap();
        assert!(report.monotone, "{report:?}");
        assert!(report.order.unwrap() > 0.0);
        assert!(report.rows.last().unwrap().distance < 1e-2);
    }

    #[test]
    fn order_fit() {
        let rows: Vec<ConvergenceRow> = (4..8)
            .map(|p| ConvergenceRow {
                n: 1 << p,
                distance: 3.0 * ((1u64 << p) as f64).powf(-1.5),
            })
            .collect();
        assert!((fitted_order(&rows).unwrap() - 1.5).abs() < 1e-12);
        assert!(cross_validate(
            &ProblemSpec::new(
                0.7,
                grid(4),
                SpectralField::new(1.0, vec![1.0]).unwrap(),
                Forcing::Zero
            )
            .unwrap(),
            1
        )
        .is_err());
    }
}
