//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use subdiff::fracops::{caputo_l1, rl_left, rl_right, FracOrder, GridFunction, TimeGrid};
use subdiff::l1::{cross_validate, fitted_order, max_l2_distance, ConvergenceRow};
use subdiff::norms::{seminorm_via_rl, spatial_norm, SlobodeckijQuadrature, SpectralField};
use subdiff::spectral::{eigenvalue, stability_ratio, Forcing, ProblemSpec};
use subdiff::{ml, solve, MlParams};
use subdiff_cli::studies::{random_problem, stability_study, trace_study};

struct Outcome {
    pass: bool,
    detail: String,
}

type Check = Box<dyn Fn() -> Outcome>;

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn grid(n: usize) -> TimeGrid {
    TimeGrid::new(1.0, n).unwrap()
}

fn e_alpha(alpha: f64, z: f64) -> f64 {
    ml(MlParams::new(alpha, 1.0).unwrap(), z).unwrap()
}

fn linspace(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| a + (b - a) * i as f64 / (n - 1) as f64)
}

fn special_functions() -> Outcome {
    let start = Instant::now();
    let p11 = MlParams::new(1.0, 1.0).unwrap();
    let exp_err = linspace(-30.0, 5.0, 2001)
        .map(|z| ((ml(p11, z).unwrap() - z.exp()) / z.exp()).abs())
        .fold(0.0, f64::max);
    let p21 = MlParams::new(2.0, 1.0).unwrap();
    let cos_err = linspace(0.0, 10.0, 2001)
        .map(|z| (ml(p21, -z * z).unwrap() - z.cos()).abs())
        .fold(0.0, f64::max);
    // e·erfc(1) to 20 digits
    let erfc_err =
        (ml(MlParams::new(0.5, 1.0).unwrap(), -1.0).unwrap() - 0.427_583_576_155_807).abs();
    let elapsed = start.elapsed().as_secs_f64();
    outcome(
        exp_err <= 1e-10 && cos_err <= 1e-10 && erfc_err <= 1e-9 && elapsed < 1.0,
        format!("exp rel err {exp_err:.1e}, cos err {cos_err:.1e}, erfc err {erfc_err:.1e}, {elapsed:.2} s"),
    )
}

fn bound_sup(alpha: f64, points: usize) -> (bool, f64) {
    let mut prev = f64::INFINITY;
    let mut ok = true;
    let mut sup = 0.0f64;
    for i in 0..points {
        let x = 10f64.powf(-6.0 + 12.0 * i as f64 / (points - 1) as f64);
        let v = e_alpha(alpha, -x);
        ok &= v > 0.0 && v <= prev;
        prev = v;
        sup = sup.max((1.0 + x) * v);
    }
    let v0 = e_alpha(alpha, 0.0);
    ok &= v0 >= prev;
    (ok, sup.max(v0))
}

fn monotonicity_and_bound() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for alpha in [0.6, 0.75, 0.9] {
        let (mono, s200) = bound_sup(alpha, 200);
        let (mono400, s400) = bound_sup(alpha, 400);
        let variation = (s400 - s200).abs() / s200;
        pass &= mono && mono400 && s200.is_finite() && variation < 0.01;
        parts.push(format!(
            "a={alpha}: monotone {}, sup {s200:.4}, variation {variation:.1e}",
            mono && mono400
        ));
    }
    outcome(pass, parts.join("; "))
}

fn eigenrelation() -> Outcome {
    let alpha = 0.75;
    let order = FracOrder::new(alpha).unwrap();
    let mut rows = Vec::new();
    for p in 8..=12 {
        let n = 1usize << p;
        let g = grid(n);
        let e = GridFunction::from_fn(g, |t| e_alpha(alpha, -t.powf(alpha))).unwrap();
        let d = caputo_l1(order, &e);
        let tau = g.tau();
        // discrete L2 over t_1..t_n, trapezoid weights with the t_0 node left out
        let (mut num, mut den) = (0.0, 0.0);
        for i in 1..=n {
            let w = if i == n { 0.5 } else { 1.0 } * tau;
            num += w * (d.values()[i] + e.values()[i]).powi(2);
            den += w * e.values()[i].powi(2);
        }
        rows.push(ConvergenceRow {
            n,
            distance: (num / den).sqrt(),
        });
    }
    let decreasing = rows.windows(2).all(|w| w[1].distance < w[0].distance);
    let order = fitted_order(&rows).unwrap_or(f64::NAN);
    let last = rows.last().unwrap().distance;
    outcome(
        decreasing && order > 0.5 && last <= 1e-2,
        format!(
            "residuals decreasing {decreasing}, order {order:.3}, residual at n=4096 {last:.2e}"
        ),
    )
}

fn random_cubic(rng: &mut ChaCha8Rng) -> [f64; 4] {
    [0; 4].map(|_| rng.gen_range(-1.0..=1.0))
}

fn poly(c: &[f64; 4], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, k| acc * t + k)
}

fn adjoint_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let pairs: Vec<_> = (0..20)
        .map(|_| (random_cubic(&mut rng), random_cubic(&mut rng)))
        .collect();
    let mut pass = true;
    let mut parts = Vec::new();
    for beta in [0.25, 0.5, 0.75] {
        let b = FracOrder::new(beta).unwrap();
        let mut worst = f64::INFINITY;
        let mut all_decreasing = true;
        let mut passing = 0;
        for (cu, cv) in &pairs {
            let rows: Vec<ConvergenceRow> = [64, 128, 256, 512, 1024]
                .iter()
                .map(|&n| {
                    let g = grid(n);
                    let u = GridFunction::from_fn(g, |t| poly(cu, t)).unwrap();
                    let v = GridFunction::from_fn(g, |t| poly(cv, t)).unwrap();
                    let lhs = rl_left(b, &u).inner(&v).unwrap();
                    let rhs = u.inner(&rl_right(b, &v)).unwrap();
                    ConvergenceRow {
                        n,
                        distance: (lhs - rhs).abs(),
                    }
                })
                .collect();
            let decreasing = rows.windows(2).all(|w| w[1].distance < w[0].distance);
            let order = fitted_order(&rows).unwrap_or(f64::NAN);
            all_decreasing &= decreasing;
            worst = worst.min(order);
            passing += usize::from(decreasing && order >= 1.5);
        }
        pass &= all_decreasing && worst >= 1.5;
        parts.push(format!(
            "b={beta}: min order {worst:.3}, decreasing {all_decreasing}, {passing}/{} pairs pass",
            pairs.len()
        ));
    }
    outcome(pass, parts.join("; "))
}

fn random_trig(rng: &mut ChaCha8Rng) -> Vec<(usize, f64, f64)> {
    let degree = rng.gen_range(1..=8);
    (0..=degree)
        .map(|j| (j, rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)))
        .collect()
}

fn norm_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let family: Vec<_> = (0..50).map(|_| random_trig(&mut rng)).collect();
    let eval = |terms: &[(usize, f64, f64)], t: f64| {
        terms
            .iter()
            .map(|&(j, a, b)| {
                let w = 2.0 * PI * j as f64 * t;
                a * w.cos() + b * w.sin()
            })
            .sum::<f64>()
    };
    let mut pass = true;
    let mut parts = Vec::new();
    for alpha in [0.6, 0.75, 0.9] {
        let order = FracOrder::new(alpha).unwrap();
        let mut bounds = Vec::new();
        for n in [1024usize, 2048] {
            let g = grid(n);
            let quad = SlobodeckijQuadrature::new(order, g);
            let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
            for f in &family {
                let f = GridFunction::from_fn(g, |t| eval(f, t)).unwrap();
                let r = seminorm_via_rl(order, &f).unwrap() / quad.seminorm(&f).unwrap();
                lo = lo.min(r);
                hi = hi.max(r);
            }
            bounds.push((lo, hi));
        }
        let (c, cc) = bounds[1];
        let shift = ((bounds[1].0 - bounds[0].0) / bounds[0].0)
            .abs()
            .max(((bounds[1].1 - bounds[0].1) / bounds[0].1).abs());
        pass &= cc / c <= 10.0 && shift < 0.05;
        parts.push(format!(
            "a={alpha}: [{c:.4}, {cc:.4}] C/c {:.3}, shift {shift:.1e}",
            cc / c
        ));
    }
    outcome(pass, parts.join("; "))
}

fn interpolation_inequality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let modes = rng.gen_range(1..=64);
        let length = rng.gen_range(0.2..6.0);
        let coeffs = (0..modes).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let g = SpectralField::new(length, coeffs).unwrap();
        let low = spatial_norm(-1.0, &g).unwrap();
        let high = spatial_norm(1.0, &g).unwrap();
        for s in [-0.5, 0.0, 0.5] {
            let rhs = low.powf((1.0 - s) / 2.0) * high.powf((1.0 + s) / 2.0);
            worst = worst.max(spatial_norm(s, &g).unwrap() / rhs);
        }
    }
    outcome(worst <= 1.0 + 1e-12, format!("max lhs/rhs {worst:.15}"))
}

fn solver_correctness() -> Outcome {
    let alpha = 0.75;
    // manufactured u = t^α w_1
    let rows: Vec<ConvergenceRow> = [32usize, 64, 128, 256]
        .iter()
        .map(|&n| {
            let lambda = eigenvalue(PI, 1);
            let gamma = subdiff::mittag_leffler::gamma::gamma(alpha + 1.0);
            let f = Forcing::Function(std::sync::Arc::new(move |k, t: f64| {
                if k == 1 {
                    gamma + lambda * t.powf(alpha)
                } else {
                    0.0
                }
            }));
            let p = ProblemSpec::new(
                alpha,
                grid(n),
                SpectralField::new(PI, vec![0.0]).unwrap(),
                f,
            )
            .unwrap();
            let d = solve(&p).unwrap().traj.modes()[0].clone();
            let exact = GridFunction::from_fn(p.grid(), |t| t.powf(alpha)).unwrap();
            ConvergenceRow {
                n,
                distance: d.sub(&exact).unwrap().max_abs(),
            }
        })
        .collect();
    let manufactured_decreasing = rows.windows(2).all(|w| w[1].distance < w[0].distance);
    let manufactured_order = fitted_order(&rows).unwrap_or(f64::NAN);

    // α → 1 against the heat semigroup
    let g: Vec<f64> = (1..=8).map(|k| 1.0 / k as f64).collect();
    let p = ProblemSpec::new(
        0.999,
        grid(64),
        SpectralField::new(PI, g.clone()).unwrap(),
        Forcing::Zero,
    )
    .unwrap();
    let sol = solve(&p).unwrap();
    let heat = subdiff::norms::ModeTrajectories::new(
        PI,
        g.iter()
            .enumerate()
            .map(|(k, &gk)| {
                let lambda = eigenvalue(PI, k + 1);
                GridFunction::from_fn(p.grid(), |t| gk * (-lambda * t).exp()).unwrap()
            })
            .collect(),
    )
    .unwrap();
    let scale = (0..p.grid().len())
        .map(|i| spatial_norm(0.0, &heat.at(i)).unwrap())
        .fold(0.0, f64::max);
    let heat_err = max_l2_distance(&sol.traj, &heat).unwrap() / scale;

    // spectral against L1 on seeded problems
    let mut all_monotone = true;
    let mut min_order = f64::INFINITY;
    for trial in 0..10u64 {
        let a = [0.6, 0.75, 0.9][trial as usize % 3];
        let p = random_problem(a, 0.1, 4, grid(64), PI, 7, trial).unwrap();
        let report = cross_validate(&p, 4).unwrap();
        all_monotone &= report.monotone;
        min_order = min_order.min(report.order.unwrap_or(f64::NAN));
    }
    outcome(
        manufactured_decreasing && manufactured_order > 0.5 && heat_err <= 1e-2 && all_monotone,
        format!(
            "manufactured order {manufactured_order:.3} (decreasing {manufactured_decreasing}), \
             heat-limit rel err {heat_err:.2e}, cross-validation monotone on 10/10: {all_monotone} \
             (min order {min_order:.3})"
        ),
    )
}

fn stability() -> Outcome {
    let alphas = [0.6, 0.75, 0.9];
    let delta = 0.1;
    let g = grid(128);
    let max_for = |modes: usize| -> Vec<f64> {
        let rows = stability_study(&alphas, delta, 20, 8, modes, g, PI, 1.0).unwrap();
        alphas
            .iter()
            .map(|&a| {
                rows.iter()
                    .filter(|r| r.alpha == a)
                    .map(|r| r.ratio)
                    .fold(0.0, f64::max)
            })
            .collect()
    };
    let m32 = max_for(32);
    let m64 = max_for(64);
    let mut pass = true;
    let mut parts = Vec::new();
    for i in 0..3 {
        let change = (m64[i] - m32[i]).abs() / m32[i];
        pass &= change < 0.05;
        parts.push(format!(
            "a={}: max {:.4} -> {:.4} ({:.2}%)",
            alphas[i],
            m32[i],
            m64[i],
            100.0 * change
        ));
    }
    let mut worst_scale = 0.0f64;
    for trial in 0..3 {
        let p = random_problem(0.75, delta, 16, g, PI, 8, trial).unwrap();
        let r = stability_ratio(&p, delta).unwrap();
        let r3 = stability_ratio(&p.scaled(3.0), delta).unwrap();
        worst_scale = worst_scale.max((r - r3).abs() / r);
    }
    pass &= worst_scale <= 1e-12;
    parts.push(format!("scaling rel diff {worst_scale:.1e}"));
    outcome(pass, parts.join("; "))
}

fn trace_embedding(suite_start: Instant) -> Outcome {
    let n = 4096;
    let study = trace_study(0.75, 0.1, &[-0.5], grid(n), 256, PI).unwrap();
    let d = &study.columns[0].distance;
    let ratio = d[1] / d[n / 4];
    let elapsed = suite_start.elapsed().as_secs_f64();
    outcome(
        ratio < 0.1 && elapsed <= 300.0,
        format!(
            "distance(T/n) = {:.4e}, distance(T/4) = {:.4e}, ratio {ratio:.4} (need < 0.1); suite {elapsed:.1} s",
            d[1],
            d[n / 4]
        ),
    )
}

fn main() {
    let start = Instant::now();
    let criteria: Vec<(&str, Check)> = vec![
        ("special functions", Box::new(special_functions)),
        (
            "complete monotonicity and decay bound",
            Box::new(monotonicity_and_bound),
        ),
        (
            "eigenrelation of the Caputo derivative",
            Box::new(eigenrelation),
        ),
        (
            "adjoint identity of the fractional integrals",
            Box::new(adjoint_identity),
        ),
        ("seminorm equivalence", Box::new(norm_equivalence)),
        (
            "spectral interpolation inequality",
            Box::new(interpolation_inequality),
        ),
        ("solver correctness", Box::new(solver_correctness)),
        ("stability constant", Box::new(stability)),
        ("trace embedding", Box::new(move || trace_embedding(start))),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = check();
        if !r.pass {
            failed += 1;
        }
        println!(
            "{} criterion {}: {name}: {} [{:.1} s]",
            if r.pass { "PASS" } else { "FAIL" },
            i + 1,
            r.detail,
            t.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} of {} criteria passed in {:.1} s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
