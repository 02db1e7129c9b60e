//! Seeded random problems and the trace and stability studies built on them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

use subdiff::fracops::TimeGrid;
use subdiff::norms::{spatial_norm, SpectralField};
use subdiff::spectral::{
    caputo_bound_ratio, data_order, eigenvalue, solve, stability_parts_of, Forcing, ProblemSpec,
};

use crate::error::CliResult;

/// Random initial data in H^{1−1/α+δ} and random smooth forcing.
///
/// g_k = λ_k^{−s/2} k^{−1} ξ_k and f_k(t) = k^{−1}(a_k + b_k t + c_k sin πt) with
/// ξ_k, a_k, b_k, c_k uniform on [−1, 1]. Draws are made mode by mode from a
/// stream selected by `trial`, so the first M modes do not depend on the total
/// mode count.
pub fn random_problem(
    alpha: f64,
    delta: f64,
    modes: usize,
    grid: TimeGrid,
    length: f64,
    seed: u64,
    trial: u64,
) -> CliResult<ProblemSpec> {
    let s = data_order(alpha, delta)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let mut g = Vec::with_capacity(modes);
    let mut f = Vec::with_capacity(modes);
    for k in 1..=modes {
        let kf = k as f64;
        let xi: f64 = rng.gen_range(-1.0..=1.0);
        g.push(eigenvalue(length, k).powf(-s / 2.0) / kf * xi);
        let (a, b, c): (f64, f64, f64) = (
            rng.gen_range(-1.0..=1.0),
            rng.gen_range(-1.0..=1.0),
            rng.gen_range(-1.0..=1.0),
        );
        f.push([a / kf, b / kf, c / kf]);
    }
    let forcing = Forcing::Function(Arc::new(move |k, t| {
        let [a, b, c] = f[k - 1];
        a + b * t + c * (std::f64::consts::PI * t).sin()
    }));
    Ok(ProblemSpec::new(
        alpha,
        grid,
        SpectralField::new(length, g)?,
        forcing,
    )?)
}

/// g_k² = λ_k^{−(1−1/α+δ)} k^{−1.01}: barely inside H^{1−1/α+δ}.
pub fn rough_initial_data(
    alpha: f64,
    delta: f64,
    modes: usize,
    length: f64,
) -> CliResult<SpectralField> {
    let s = data_order(alpha, delta)?;
    let g = (1..=modes)
        .map(|k| (eigenvalue(length, k).powf(-s) * (k as f64).powf(-1.01)).sqrt())
        .collect();
    Ok(SpectralField::new(length, g)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceColumn {
    pub s: f64,
    /// True when s < 1 − 1/α, where the distance must vanish as t → 0.
    pub asserted: bool,
    /// ‖u(t_i) − g‖_{H^s} for every node.
    pub distance: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceStudy {
    pub threshold: f64,
    pub times: Vec<f64>,
    pub columns: Vec<TraceColumn>,
}

/// Distance of the free evolution from its rough initial value in H^s.
pub fn trace_study(
    alpha: f64,
    delta: f64,
    s_list: &[f64],
    grid: TimeGrid,
    modes: usize,
    length: f64,
) -> CliResult<TraceStudy> {
    for &s in s_list {
        if !(-1.0..=1.0).contains(&s) {
            return Err(crate::error::invalid(format!(
                "s = {s} lies outside [-1, 1]"
            )));
        }
    }
    let g = rough_initial_data(alpha, delta, modes, length)?;
    let problem = ProblemSpec::new(alpha, grid, g.clone(), Forcing::Zero)?;
    let sol = solve(&problem)?;
    let threshold = 1.0 - 1.0 / alpha;
    let columns = s_list
        .iter()
        .map(|&s| {
            let distance = (0..grid.len())
                .map(|i| {
                    let u = sol.traj.at(i);
                    let diff: Vec<f64> = u
                        .coeffs()
                        .iter()
                        .zip(g.coeffs())
                        .map(|(a, b)| a - b)
                        .collect();
                    spatial_norm(s, &SpectralField::new(length, diff)?)
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(TraceColumn {
                s,
                asserted: s < threshold,
                distance,
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(TraceStudy {
        threshold,
        times: grid.nodes().collect(),
        columns,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityRow {
    pub alpha: f64,
    pub trial: usize,
    pub ratio: f64,
    /// ‖∂_t^α u‖_{L2(H^{−1})} / ‖u‖_{H^α(H^{−1})}.
    pub caputo_ratio: f64,
}

/// Stability ratios over `trials` seeded random problems for each α.
#[allow(clippy::too_many_arguments)]
pub fn stability_study(
    alphas: &[f64],
    delta: f64,
    trials: usize,
    seed: u64,
    modes: usize,
    grid: TimeGrid,
    length: f64,
    scale: f64,
) -> CliResult<Vec<StabilityRow>> {
    for &a in alphas {
        data_order(a, delta)?;
        subdiff::FracOrder::solver(a)?;
    }
    let mut rows = Vec::with_capacity(alphas.len() * trials);
    for &alpha in alphas {
        for trial in 0..trials {
            let p = random_problem(alpha, delta, modes, grid, length, seed, trial as u64)?
                .scaled(scale);
            let sol = solve(&p)?;
            let ratio = stability_parts_of(&sol, delta)?.ratio()?;
            rows.push(StabilityRow {
                alpha,
                trial,
                ratio,
                caputo_ratio: caputo_bound_ratio(&sol)?,
            });
        }
    }
    Ok(rows)
}

/// Largest ratio per α, in the order the α first appear.
pub fn max_per_alpha(rows: &[StabilityRow]) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::new();
    for r in rows {
        match out.iter_mut().find(|(a, _)| *a == r.alpha) {
            Some(e) => e.1 = e.1.max(r.ratio),
            None => out.push((r.alpha, r.ratio)),
        }
    }
    out
}
