//! Two-parameter Mittag-Leffler function E_{α,β}(z) = Σ_k z^k / Γ(αk + β) on the real line.
//!
//! Every evaluation carries an error estimate and is only returned when that
//! estimate is below [`TOLERANCE`] (absolute, or relative once |E| > 1).
//! Three regimes cover the negative axis:
//!
//! * the Taylor series, while its largest term stays small enough that
//!   cancellation in f64 is harmless;
//! * the algebraic asymptotic expansion -Σ z^{-k}/Γ(β - αk), truncated at its
//!   smallest envelope term, with the dominant exponential contributions added
//!   explicitly for 1 < α ≤ 2;
//! * in between, the real Laplace-type integral obtained by folding the
//!   Bromwich contour of s^{α-β}/(s^α + x) onto the negative axis, evaluated
//!   by adaptive Gauss-Legendre quadrature.
//!
//! The non-negative axis is handled by the Taylor series alone.

pub mod gamma;

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quad;
use gamma::{cos_pi, ln_gamma, rgamma, sin_pi};

/// Certified accuracy of every returned value.
pub const TOLERANCE: f64 = 1e-10;

/// Accuracy at which a regime is accepted without trying the next one.
const TARGET: f64 = 1e-12;

const MAX_TAYLOR_TERMS: usize = 5000;
const MAX_ASYMPTOTIC_TERMS: usize = 400;
/// Upper limit of the Laplace integral; e^{-60} is below any tolerance used here.
const LAPLACE_CUTOFF: f64 = 60.0;

/// Orders (α, β) of a Mittag-Leffler function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlParams {
    alpha: f64,
    beta: f64,
}

impl MlParams {
    /// Requires α ∈ (0, 2] and β > 0.
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 2.0) {
            return Err(Error::invalid("alpha", alpha, "must lie in (0, 2]"));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::invalid("beta", beta, "must be positive"));
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// Which representation produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    Taylor,
    Asymptotic,
    Integral,
}

/// A value together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlValue {
    pub value: f64,
    pub error: f64,
    pub method: Method,
}

impl MlValue {
    fn meets(&self, tol: f64) -> bool {
        self.value.is_finite() && self.error <= tol * self.value.abs().max(1.0)
    }

    fn better(self, other: Option<MlValue>) -> MlValue {
        match other {
            Some(o) if o.value.is_finite() && (o.error < self.error || !self.value.is_finite()) => {
                o
            }
            _ => self,
        }
    }
}

/// E_{α,β}(z).
pub fn ml(params: MlParams, z: f64) -> Result<f64> {
    ml_eval(params, z).map(|v| v.value)
}

/// E'_{α,1}(z) = E_{α,α}(z)/α, for α ∈ (0, 1].
pub fn ml_deriv(alpha: f64, z: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::invalid(
            "alpha",
            alpha,
            "derivative needs alpha in (0, 1]",
        ));
    }
    let v = ml_eval(MlParams::new(alpha, alpha)?, z)?;
    Ok(v.value / alpha)
}

/// E_{α,β}(z) with its error estimate and the regime that produced it.
pub fn ml_eval(params: MlParams, z: f64) -> Result<MlValue> {
    let MlParams { alpha, beta } = params;
    if !z.is_finite() {
        return Err(Error::invalid("z", z, "must be finite"));
    }
    let uncertified = |estimate: f64| Error::Uncertified {
        alpha,
        beta,
        z,
        estimate,
    };

    if z == 0.0 {
        return Ok(MlValue {
            value: rgamma(beta),
            error: 0.0,
            method: Method::ClosedForm,
        });
    }
    if alpha == 1.0 && beta == 1.0 {
        return Ok(MlValue {
            value: z.exp(),
            error: f64::EPSILON * z.exp(),
            method: Method::ClosedForm,
        });
    }
    if z > 0.0 {
        let t = taylor(alpha, beta, z).ok_or_else(|| uncertified(f64::INFINITY))?;
        return if t.meets(TOLERANCE) {
            Ok(t)
        } else {
            Err(uncertified(t.error))
        };
    }

    if alpha == 1.0 {
        return unit_alpha_negative(beta, z);
    }

    let x = -z;
    let scale = x.powf(1.0 / alpha);
    let mut best: Option<MlValue> = None;

    if scale <= 12.0 {
        if let Some(t) = taylor(alpha, beta, z) {
            if t.meets(TARGET) {
                return Ok(t);
            }
            best = Some(t);
        }
    }
    if scale >= 2.0 {
        if let Some(a) = asymptotic(alpha, beta, x) {
            if a.meets(TARGET) {
                return Ok(a);
            }
            best = Some(a.better(best));
        }
    }
    let i = laplace(alpha, beta, x);
    let best = i.better(best);
    if best.meets(TOLERANCE) {
        Ok(best)
    } else {
        Err(uncertified(best.error))
    }
}

#[derive(Default)]
struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    fn add(&mut self, v: f64) {
        let y = v - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }
}

/// Power series; `None` when it overflows or fails to converge.
fn taylor(alpha: f64, beta: f64, z: f64) -> Option<MlValue> {
    let x = z.abs();
    let ln_x = x.ln();
    let mut sum = Kahan::default();
    let mut abs_sum = 0.0f64;
    // exp of a large logarithm loses |log| ulps
    let mut log_err = 0.0f64;
    let mut prev = f64::INFINITY;
    for k in 0..MAX_TAYLOR_TERMS {
        let arg = alpha * k as f64 + beta;
        let kf = k as f64;
        let mag = if k == 0 {
            rgamma(arg)
        } else if arg < 160.0 && kf * ln_x < 650.0 {
            x.powf(kf) * rgamma(arg)
        } else {
            let lg = ln_gamma(arg);
            let m = (kf * ln_x - lg).exp();
            log_err += m * f64::EPSILON * ((kf * ln_x).abs() + lg.abs());
            m
        };
        // cancellation has eaten every digit
        if !mag.is_finite() || abs_sum > 1.0 / f64::EPSILON {
            return None;
        }
        let term = if z < 0.0 && k % 2 == 1 { -mag } else { mag };
        sum.add(term);
        abs_sum += mag;
        if k > 0 && mag < 0.5 * prev && mag <= 1e-17 * abs_sum {
            let rounding = (8.0 + kf.log2()) * f64::EPSILON * abs_sum;
            return Some(MlValue {
                value: sum.sum,
                error: mag + rounding + log_err,
                method: Method::Taylor,
            });
        }
        prev = mag;
    }
    None
}

/// Asymptotic expansion on the negative axis, x = -z > 0.
fn asymptotic(alpha: f64, beta: f64, x: f64) -> Option<MlValue> {
    let ln_x = x.ln();
    let mut sum = Kahan::default();
    let mut prev_env = f64::INFINITY;
    let mut omitted = f64::INFINITY;
    for k in 1..=MAX_ASYMPTOTIC_TERMS {
        let kf = k as f64;
        let y = beta - alpha * kf;
        let c = rgamma(y);
        // |1/Γ(y)| ≤ Γ(1 - y)/π once y < 1/2
        let env = if y < 0.5 {
            (ln_gamma(1.0 - y) - PI.ln() - kf * ln_x).exp()
        } else {
            c.abs() * (-kf * ln_x).exp()
        };
        if env > prev_env && k > 1 {
            omitted = env;
            break;
        }
        let term = c * (-kf * ln_x).exp() * if k % 2 == 0 { 1.0 } else { -1.0 };
        // E ≈ -Σ z^{-k}/Γ(β-αk), z = -x
        sum.add(-term);
        prev_env = env;
        if env <= 1e-18 * sum.sum.abs() {
            omitted = env;
            break;
        }
    }
    if !omitted.is_finite() {
        return None;
    }
    let r = x.powf(1.0 / alpha);
    let mut value = sum.sum;
    let mut error = omitted + 4.0 * f64::EPSILON * value.abs();
    if alpha < 1.0 {
        // exponentially small remainder that the algebraic series cannot represent
        error += (-r).exp() * r.powf(1.0 - beta).max(1.0) / alpha;
    } else {
        value += exponential_pair(alpha, beta, r);
    }
    Some(MlValue {
        value,
        error,
        method: Method::Asymptotic,
    })
}

/// (2/α) Re[ζ^{1-β} e^ζ] with ζ = x^{1/α} e^{iπ/α}: the two poles of the
/// Laplace transform that sit on the principal sheet when α > 1.
fn exponential_pair(alpha: f64, beta: f64, r: f64) -> f64 {
    let theta = PI / alpha;
    2.0 / alpha
        * r.powf(1.0 - beta)
        * (r * theta.cos()).exp()
        * ((1.0 - beta) * theta + r * theta.sin()).cos()
}

/// Laplace-integral regime for α ∈ (0, 2], α ≠ 1, x = -z > 0.
fn laplace(alpha: f64, beta: f64, x: f64) -> MlValue {
    // The folded contour needs β < 1 + α; larger β are reached through
    // E_{α,b+α}(z) = (E_{α,b}(z) - 1/Γ(b))/z.
    let shifts = ((beta - 1.0 - 0.5 * alpha) / alpha).ceil().max(0.0) as usize;
    let base = beta - shifts as f64 * alpha;
    let mut v = laplace_base(alpha, base, x);
    let z = -x;
    for j in 0..shifts {
        let b = base + j as f64 * alpha;
        v = MlValue {
            value: (v.value - rgamma(b)) / z,
            error: v.error / x + f64::EPSILON * (v.value.abs() + rgamma(b).abs()) / x,
            method: Method::Integral,
        };
    }
    v
}

fn laplace_base(alpha: f64, beta: f64, x: f64) -> MlValue {
    let gamma_exp = 1.0 + alpha - beta;
    let sb = sin_pi(beta);
    let sba = sin_pi(beta - alpha);
    let ca = cos_pi(alpha);
    let sa = sin_pi(alpha);
    let integrand = |r: f64| -> f64 {
        let ra = r.powf(alpha);
        let num = ra * sb + x * sba;
        let den = (ra + x * ca).powi(2) + (x * sa).powi(2);
        (-r).exp() * r.powf(alpha - beta) * num / den / PI
    };
    // the denominator is smallest where r^α = -x cos πα
    let peak = if ca < 0.0 {
        (-x * ca).powf(1.0 / alpha)
    } else {
        x.powf(1.0 / alpha)
    };
    let r_a = f64::min(1.0, 0.5 * peak);

    // r = r_a e^s turns the r^{α-β} endpoint behaviour into e^{γ s} decay
    let depth = 40.0 / gamma_exp;
    let head = |s: f64| {
        let r = r_a * s.exp();
        integrand(r) * r
    };
    let mut value = 0.0;
    let mut error = 0.0;
    let mut lo = -depth;
    while lo < 0.0 {
        let hi = f64::min(0.0, lo + 8.0);
        let piece = quad::adaptive(&head, lo, hi, 1e-16, 1e-14);
        value += piece.value;
        error += piece.error;
        lo = hi;
    }
    // what lies below r_a e^{-depth} is of relative size e^{-40}
    error += 5e-18 * value.abs();

    let mut breaks = vec![r_a];
    // e^{-r} varies by a bounded factor across each panel
    for r in [
        0.5 * peak,
        peak,
        2.0 * peak,
        2.0,
        4.0,
        8.0,
        16.0,
        32.0,
        LAPLACE_CUTOFF,
    ] {
        if r > r_a && r <= LAPLACE_CUTOFF {
            breaks.push(r);
        }
    }
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breaks.dedup();
    for w in breaks.windows(2) {
        let piece = quad::adaptive(&integrand, w[0], w[1], 1e-16, 1e-14);
        value += piece.value;
        error += piece.error;
    }
    if alpha > 1.0 {
        value += exponential_pair(alpha, beta, x.powf(1.0 / alpha));
    }
    error += 8.0 * f64::EPSILON * value.abs();
    MlValue {
        value,
        error,
        method: Method::Integral,
    }
}

/// α = 1, β ≠ 1, z < 0.
fn unit_alpha_negative(beta: f64, z: f64) -> Result<MlValue> {
    let x = -z;
    let uncertified = |estimate: f64| Error::Uncertified {
        alpha: 1.0,
        beta,
        z,
        estimate,
    };
    if x <= 8.0 {
        if let Some(t) = taylor(1.0, beta, z) {
            if t.meets(TOLERANCE) {
                return Ok(t);
            }
        }
    }
    let v = if beta > 1.0 {
        // E_{1,β}(-x) = (1/Γ(β)) ∫_0^1 exp(-x (1 - v^{1/(β-1)})) dv
        let c = 1.0 / (beta - 1.0);
        let f = |v: f64| (-x * (1.0 - v.powf(c))).exp();
        let r = quad::adaptive(&f, 0.0, 1.0, 1e-15, 1e-14);
        let g = rgamma(beta);
        MlValue {
            value: g * r.value,
            error: g * r.error + 4.0 * f64::EPSILON * (g * r.value).abs(),
            method: Method::Integral,
        }
    } else {
        let up = unit_alpha_negative(beta + 1.0, z)?;
        let value = rgamma(beta) + z * up.value;
        MlValue {
            value,
            error: x * up.error + 4.0 * f64::EPSILON * (rgamma(beta).abs() + (z * up.value).abs()),
            method: up.method,
        }
    };
    if v.meets(TOLERANCE) {
        Ok(v)
    } else {
        Err(uncertified(v.error))
    }
}
