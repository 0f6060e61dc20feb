//! Special functions and log-domain numeric kernels.
//!
//! Everything the analytical formulas need: log-gamma, the upper incomplete
//! gamma function, the confluent hypergeometric series 1F1, and the
//! exponential integral Ei for negative arguments. Only the parameter
//! regions the fading formulas actually visit are supported; this is not a
//! general-purpose special-function library.

use crate::error::{Error, Result};
use crate::lognum::LogNum;
use crate::series::SeriesConfig;
use std::sync::OnceLock;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

// Lanczos approximation, g = 607/128, 15 coefficients (Godfrey's set).
// Relative error below 1e-14 over the positive real axis.
const LANCZOS_G: f64 = 4.742_187_5;
const LANCZOS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_746,
    -0.491_913_816_097_620_2,
    3.399_464_998_481_188_9e-5,
    4.652_362_892_704_857_5e-5,
    -9.837_447_530_487_956e-5,
    1.580_887_032_249_124_9e-4,
    -2.102_644_417_241_048_7e-4,
    2.174_396_181_152_126_4e-4,
    -1.643_181_065_367_639e-4,
    8.441_822_398_385_274e-5,
    -2.619_083_840_158_141e-5,
    3.689_918_265_953_162e-6,
];

/// Natural log of the gamma function for `s > 0`.
pub fn ln_gamma(s: f64) -> Result<f64> {
    if !(s > 0.0) {
        return Err(Error::Domain(format!("ln_gamma requires s > 0, got {s}")));
    }
    Ok(ln_gamma_unchecked(s))
}

fn ln_gamma_unchecked(s: f64) -> f64 {
    if s < 0.5 {
        // Reflection keeps the Lanczos argument away from zero.
        let pi = std::f64::consts::PI;
        return (pi / (pi * s).sin()).ln() - ln_gamma_unchecked(1.0 - s);
    }
    let x = s - 1.0;
    let t = x + LANCZOS_G + 0.5;
    let mut sum = LANCZOS[0];
    for (k, c) in LANCZOS.iter().enumerate().skip(1) {
        sum += c / (x + k as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + sum.ln()
}

const LN_FACT_TABLE_SIZE: usize = 16384;

/// ln(n!) with a cached table for small n.
pub fn ln_factorial(n: usize) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut v = Vec::with_capacity(LN_FACT_TABLE_SIZE);
        v.push(0.0);
        for k in 1..LN_FACT_TABLE_SIZE {
            v.push(v[k - 1] + (k as f64).ln());
        }
        v
    });
    if n < table.len() {
        table[n]
    } else {
        ln_gamma_unchecked(n as f64 + 1.0)
    }
}

/// ln C(n, k).
pub fn ln_choose(n: usize, k: usize) -> f64 {
    debug_assert!(k <= n);
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// Upper incomplete gamma function Gamma(s, x) in log domain.
///
/// Continued fraction for `x > s + 1`, complement of the lower series
/// otherwise; the split keeps both routes well away from cancellation.
pub fn upper_inc_gamma(s: f64, x: f64) -> Result<LogNum> {
    if !(s > 0.0) {
        return Err(Error::Domain(format!(
            "upper_inc_gamma requires s > 0, got {s}"
        )));
    }
    if !(x >= 0.0) {
        return Err(Error::Domain(format!(
            "upper_inc_gamma requires x >= 0, got {x}"
        )));
    }
    let lg = ln_gamma_unchecked(s);
    if x == 0.0 {
        return Ok(LogNum::from_ln(lg));
    }
    if x > s + 1.0 {
        Ok(LogNum::from_ln(-x + s * x.ln() + upper_cf(s, x)?.ln()))
    } else {
        // gamma(s, x) = x^s e^{-x} sum_{n>=0} x^n / (s (s+1) ... (s+n))
        let mut sum = 1.0 / s;
        let mut del = sum;
        let mut ap = s;
        for _ in 0..500 {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if del.abs() < sum.abs() * 1e-17 {
                let ln_lower = -x + s * x.ln() + sum.ln();
                return Ok(LogNum::from_ln(lg).sub(LogNum::from_ln(ln_lower)));
            }
        }
        Err(Error::Convergence(format!(
            "lower incomplete gamma series stalled at s={s}, x={x}"
        )))
    }
}

/// Lentz continued fraction for Gamma(s, x) * e^x * x^{-s}, valid x > s + 1.
fn upper_cf(s: f64, x: f64) -> Result<f64> {
    const FPMIN: f64 = 1e-300;
    let mut b = x + 1.0 - s;
    let mut c = 1.0 / FPMIN;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=1000 {
        let an = -(i as f64) * (i as f64 - s);
        b += 2.0;
        d = an * d + b;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b + an / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            return Ok(h);
        }
    }
    Err(Error::Convergence(format!(
        "incomplete gamma continued fraction stalled at s={s}, x={x}"
    )))
}

/// Result of a truncated series evaluation.
#[derive(Debug, Clone)]
pub struct SeriesEval {
    pub value: LogNum,
    /// Per-index retained terms.
    pub terms: Vec<LogNum>,
    /// Estimated magnitude of the discarded tail (geometric bound from the
    /// ratio of the last two retained terms; 0 when the series terminated).
    pub tail_estimate: f64,
    /// Set when the term-ratio test shows no decay at the truncation point.
    pub warning: Option<String>,
}

/// Truncated Kummer confluent hypergeometric series 1F1(a, b; z), z >= 0.
///
/// Returns the partial sum together with the individual terms
/// `(a)_k z^k / ((b)_k k!)`; the hop-coefficient series weights are built
/// from these.
pub fn kummer_1f1_series(a: f64, b: f64, z: f64, trunc: &SeriesConfig) -> Result<SeriesEval> {
    if b <= 0.0 && (b - b.round()).abs() < 1e-12 {
        return Err(Error::Domain(format!(
            "1F1 undefined for non-positive integer b = {b}"
        )));
    }
    if !(z >= 0.0) {
        return Err(Error::Domain(format!("1F1 series needs z >= 0, got {z}")));
    }
    if trunc.depth < 1 {
        return Err(Error::Domain("truncation depth must be >= 1".into()));
    }
    let mut terms: Vec<LogNum> = Vec::with_capacity(trunc.depth);
    let mut t = LogNum::ONE;
    let mut max_ln = 0.0f64;
    for k in 0..trunc.depth {
        terms.push(t);
        max_ln = max_ln.max(t.ln_mag);
        let kf = k as f64;
        let factor = (a + kf) * z / ((b + kf) * (kf + 1.0));
        t = t.mul(LogNum::from_f64(factor));
        if t.is_zero() {
            break;
        }
    }
    // Prune trailing terms that no longer matter.
    let cut = (trunc.prune.ln() + max_ln).max(f64::NEG_INFINITY);
    while terms.len() > 1 && terms.last().unwrap().ln_mag < cut {
        terms.pop();
    }
    let n = terms.len();
    let (tail_estimate, warning) = if n >= 2 {
        let last = terms[n - 1].ln_mag;
        let prev = terms[n - 2].ln_mag;
        let ratio = (last - prev).exp();
        if ratio < 1.0 {
            (((last).exp()) * ratio / (1.0 - ratio), None)
        } else {
            (
                f64::INFINITY,
                Some(format!(
                    "1F1 term ratio {ratio:.3} >= 1 at truncation depth {n}; \
                     series not yet decaying"
                )),
            )
        }
    } else {
        (0.0, None)
    };
    let mut value = LogNum::ZERO;
    for t in &terms {
        value = value.add(*t);
    }
    Ok(SeriesEval {
        value,
        terms,
        tail_estimate,
        warning,
    })
}

/// Crossover between power series and continued fraction for Ei. The
/// alternating series loses roughly e^r * eps of absolute accuracy to
/// cancellation, so it is only used where that is negligible; both routes
/// agree through the overlap region (see the overlap test).
const EI_CROSSOVER: f64 = 6.0;

/// Exponential integral Ei(x) for x < 0.
pub fn expint_ei(x: f64) -> Result<f64> {
    if !(x < 0.0) {
        return Err(Error::Domain(format!("expint_ei requires x < 0, got {x}")));
    }
    let r = -x;
    if r <= EI_CROSSOVER {
        Ok(ei_neg_series(r))
    } else {
        Ok(-((-r).exp() * e1_scaled_cf(r)))
    }
}

/// Ei(-r) via the ascending series, r > 0 moderate.
fn ei_neg_series(r: f64) -> f64 {
    // Ei(-r) = gamma + ln r + sum_{k>=1} (-r)^k / (k k!)
    let mut sum = 0.0f64;
    let mut comp = 0.0f64; // Kahan compensation
    let mut term = 1.0f64;
    for k in 1..=400 {
        let kf = k as f64;
        term *= -r / kf;
        let add = term / kf;
        let y = add - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if add.abs() < 1e-18 * sum.abs().max(1.0) && k as f64 > r {
            break;
        }
    }
    EULER_GAMMA + r.ln() + sum
}

/// e^r * E1(r) for r > 0, computed without under/overflow.
pub fn e1_scaled(r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("e1_scaled requires r > 0, got {r}")));
    }
    if r >= 1.0 {
        Ok(e1_scaled_cf(r))
    } else {
        Ok(r.exp() * -ei_neg_series(r))
    }
}

/// Lentz evaluation of the continued fraction
/// E1(r) e^r = 1 / (r + 1 - 1^2/(r + 3 - 2^2/(r + 5 - ...))).
fn e1_scaled_cf(r: f64) -> f64 {
    const FPMIN: f64 = 1e-300;
    let mut b = r + 1.0;
    let mut c = 1.0 / FPMIN;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=1000 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = an * d + b;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b + an / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}
