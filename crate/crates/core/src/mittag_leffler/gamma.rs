//! Gamma function via the Lanczos approximation (g = 7, nine coefficients).

#![allow(clippy::excessive_precision)]

use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Largest argument for which `gamma` is finite in f64.
pub const GAMMA_MAX_ARG: f64 = 171.624_376_956_302_7;

/// sin(πx) with exact zeros at the integers and argument reduction done before scaling.
pub fn sin_pi(x: f64) -> f64 {
    if !x.is_finite() {
        return f64::NAN;
    }
    let r = x - 2.0 * (x / 2.0).floor(); // r in [0, 2)
    let (r, sign) = if r >= 1.0 { (r - 1.0, -1.0) } else { (r, 1.0) };
    if r == 0.0 {
        return 0.0;
    }
    let v = if r <= 0.25 {
        (PI * r).sin()
    } else if r <= 0.75 {
        (PI * (0.5 - r)).cos()
    } else {
        (PI * (1.0 - r)).sin()
    };
    sign * v
}

/// cos(πx), exact at half-integers.
pub fn cos_pi(x: f64) -> f64 {
    sin_pi(x + 0.5)
}

fn lanczos_sum(x: f64) -> f64 {
    // x is the shifted argument (original minus one)
    let mut acc = LANCZOS[0];
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    acc
}

fn factorial(n: usize) -> f64 {
    (2..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Euler's Gamma function on the real line.
///
/// Poles at the non-positive integers return `NaN`; the result overflows to
/// `+inf` past [`GAMMA_MAX_ARG`].
pub fn gamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x <= 0.0 && x == x.floor() {
        return f64::NAN;
    }
    if x < 0.5 {
        return PI / (sin_pi(x) * gamma(1.0 - x));
    }
    if x > GAMMA_MAX_ARG {
        return f64::INFINITY;
    }
    if x == x.floor() && x <= 171.0 {
        return factorial(x as usize - 1);
    }
    let xm = x - 1.0;
    let w = xm + LANCZOS_G + 0.5;
    // split the power so that w^(xm+1/2) does not overflow before exp(-w) is applied
    let half = w.powf(0.5 * (xm + 0.5));
    (2.0 * PI).sqrt() * half * (half * (-w).exp()) * lanczos_sum(xm)
}

/// 1/Γ(x), an entire function: exactly zero at the poles of Γ.
pub fn rgamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x <= 0.0 && x == x.floor() {
        return 0.0;
    }
    if x < 0.5 {
        // 1/Γ(x) = sin(πx) Γ(1-x) / π
        let g = gamma(1.0 - x);
        if g.is_infinite() {
            return (ln_gamma(1.0 - x) - PI.ln()).exp().copysign(sin_pi(x)) * sin_pi(x).abs();
        }
        return sin_pi(x) * g / PI;
    }
    if x > GAMMA_MAX_ARG {
        return (-ln_gamma(x)).exp();
    }
    1.0 / gamma(x)
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    if x.is_nan() || x <= 0.0 {
        return f64::NAN;
    }
    if x < 0.5 {
        return (PI / sin_pi(x)).ln() - ln_gamma(1.0 - x);
    }
    let xm = x - 1.0;
    let w = xm + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (xm + 0.5) * w.ln() - w + lanczos_sum(xm).ln()
}
