//! Kappa-mu shadowed fading parameterization and per-hop SNR statistics.
//!
//! A hop's SNR density is a gamma mixture: expanding the confluent
//! hypergeometric factor of the kappa-mu shadowed PDF term by term gives
//!
//! ```text
//! f(x) = sum_e  c1 * w_e * x^(mu - 1 + e) * exp(-rate * x)
//! ```
//!
//! with all coefficients carried in log domain. Multi-antenna hops use the
//! same form with `mu` and `m` scaled by the antenna count.

use crate::error::{Error, Result};
use crate::lognum::{ln_sum_exp, LogNum};
use crate::series::SeriesConfig;
use crate::specfun::{ln_gamma, upper_inc_gamma};

/// Finite shadowing stand-in for `m = inf` on the analytical path.
/// The Rician-K density is the m -> inf limit and the deviation decays like
/// 1/m; at m = 2000 the pointwise PDF deviation from exact Rician stays
/// below 1e-3 (verified in tests). Convergence depth is unaffected: the
/// mixture-weight profile tends to a Poisson law with mean ~ mu*kappa as
/// m grows.
pub const M_EFF_SURROGATE: f64 = 2000.0;

/// One link's kappa-mu shadowed shape triple plus average SNR (linear).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingParams {
    /// Dominant-to-scattered power ratio, >= 0.
    pub kappa: f64,
    /// Number of multipath clusters, > 0.
    pub mu: f64,
    /// Nakagami shadowing severity, > 0; `f64::INFINITY` means unshadowed LOS.
    pub m: f64,
    /// Average SNR, linear scale, > 0.
    pub avg_snr: f64,
}

impl FadingParams {
    pub fn new(kappa: f64, mu: f64, m: f64, avg_snr: f64) -> Result<Self> {
        let p = FadingParams {
            kappa,
            mu,
            m,
            avg_snr,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.kappa >= 0.0) {
            return Err(Error::Domain(format!("kappa must be >= 0, got {}", self.kappa)));
        }
        if !(self.mu > 0.0) {
            return Err(Error::Domain(format!("mu must be > 0, got {}", self.mu)));
        }
        if !(self.m > 0.0) {
            return Err(Error::Domain(format!("m must be > 0 or inf, got {}", self.m)));
        }
        if !(self.avg_snr > 0.0) || !self.avg_snr.is_finite() {
            return Err(Error::Domain(format!(
                "avg_snr must be positive and finite, got {}",
                self.avg_snr
            )));
        }
        Ok(())
    }
}

/// Closed-form coefficients of one hop's SNR distribution, antenna scaling
/// already applied.
#[derive(Debug, Clone)]
pub struct HopCoefficients {
    /// Leading coefficient (alpha_1 / beta_1 / iota_1 pattern).
    pub c1: LogNum,
    /// Exponential rate (A2 / B2 / C2 pattern), = shape_base*(1+kappa)/avg_snr.
    pub rate: f64,
    /// mu scaled by the antenna count.
    pub shape_base: f64,
    /// Effective shadowing shape (m scaled by antennas; surrogate if m = inf).
    pub shadow_shape: f64,
    /// Argument rate of the 1F1 factor (alpha_3 / beta_2 / iota_2 pattern).
    pub mixture_rate: f64,
    /// Per-index series weights alpha_e; weights[0] = 1.
    pub term_weights: Vec<LogNum>,
    /// Estimated probability mass discarded by truncation/pruning.
    pub tail_estimate: f64,
    /// True when m = inf was replaced by the finite surrogate.
    pub surrogate_shadowing: bool,
}

/// Builds all closed-form coefficients for a hop, with `mu` and `m` each
/// multiplied by `antennas`, truncated per `trunc`.
pub fn hop_coefficients(
    p: &FadingParams,
    antennas: u32,
    trunc: &SeriesConfig,
) -> Result<HopCoefficients> {
    p.validate()?;
    if antennas < 1 {
        return Err(Error::Domain("antennas must be >= 1".into()));
    }
    let g = antennas as f64;
    let mu_t = p.mu * g;
    // With kappa = 0 the shadowing factor cancels exactly (m^m / (0 + m)^m = 1
    // and the 1F1 argument vanishes), so no surrogate is needed there.
    let (m_t, surrogate) = if p.m.is_infinite() {
        if p.kappa == 0.0 {
            (1.0 * g, false)
        } else {
            (M_EFF_SURROGATE * g, true)
        }
    } else {
        (p.m * g, false)
    };
    let rate = mu_t * (1.0 + p.kappa) / p.avg_snr;
    let mixture_rate = if p.kappa == 0.0 {
        0.0
    } else {
        mu_t * mu_t * p.kappa * (1.0 + p.kappa) / ((mu_t * p.kappa + m_t) * p.avg_snr)
    };
    let ln_c1 = mu_t * mu_t.ln() + m_t * m_t.ln() + mu_t * (1.0 + p.kappa).ln()
        - ln_gamma(mu_t)?
        - mu_t * p.avg_snr.ln()
        - m_t * (mu_t * p.kappa + m_t).ln();
    let c1 = LogNum::from_ln(ln_c1);

    // alpha_e via the ratio recurrence; the mixture mass of index e is
    // W_e = c1 * alpha_e * Gamma(mu_t + e) / rate^(mu_t + e), sum W_e = 1.
    let mut weights = Vec::with_capacity(trunc.depth);
    let mut w = LogNum::ONE;
    for e in 0..trunc.depth {
        weights.push(w);
        if mixture_rate == 0.0 {
            break;
        }
        let ef = e as f64;
        w = w.mul(LogNum::from_f64(
            (m_t + ef) * mixture_rate / ((mu_t + ef) * (ef + 1.0)),
        ));
    }
    // Prune trailing indices whose mixture mass is negligible.
    let mass_ln = |e: usize, a: LogNum| -> f64 {
        c1.ln_mag + a.ln_mag + crate::specfun::ln_gamma(mu_t + e as f64).unwrap_or(0.0)
            - (mu_t + e as f64) * rate.ln()
    };
    let masses: Vec<f64> = weights.iter().enumerate().map(|(e, &a)| mass_ln(e, a)).collect();
    let max_mass = masses.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let cut = max_mass + trunc.prune.ln();
    let mut keep = weights.len();
    while keep > 1 && masses[keep - 1] < cut {
        keep -= 1;
    }
    weights.truncate(keep);

    // Geometric tail bound from the last two retained masses.
    let tail_estimate = if keep >= 2 {
        let ratio = (masses[keep - 1] - masses[keep - 2]).exp();
        if ratio < 1.0 {
            masses[keep - 1].exp() * ratio / (1.0 - ratio)
        } else {
            f64::INFINITY
        }
    } else {
        0.0
    };

    Ok(HopCoefficients {
        c1,
        rate,
        shape_base: mu_t,
        shadow_shape: m_t,
        mixture_rate,
        term_weights: weights,
        tail_estimate,
        surrogate_shadowing: surrogate,
    })
}

impl HopCoefficients {
    /// Full series coefficient of index e: c1 * alpha_e.
    pub fn coeff(&self, e: usize) -> LogNum {
        self.c1.mul(self.term_weights[e])
    }

    /// Probability mass of mixture component e (integral of its term).
    pub fn mixture_weight(&self, e: usize) -> LogNum {
        self.coeff(e)
            .mul(LogNum::from_ln(
                crate::specfun::ln_gamma(self.shape_base + e as f64).unwrap(),
            ))
            .div(LogNum::from_ln(
                (self.shape_base + e as f64) * self.rate.ln(),
            ))
    }
}

/// SNR density of one hop at `snr`, via the truncated series form.
pub fn hop_pdf(c: &HopCoefficients, snr: f64) -> f64 {
    assert!(snr >= 0.0, "snr must be nonnegative");
    if snr == 0.0 {
        // Only the e = 0 term can be nonzero (or infinite for mu < 1).
        let p0 = c.shape_base - 1.0;
        return if p0 > 0.0 {
            0.0
        } else if p0 == 0.0 {
            c.coeff(0).to_f64()
        } else {
            f64::INFINITY
        };
    }
    let ln_snr = snr.ln();
    let lns: Vec<f64> = c
        .term_weights
        .iter()
        .enumerate()
        .map(|(e, &a)| {
            c.c1.ln_mag + a.ln_mag + (c.shape_base - 1.0 + e as f64) * ln_snr - c.rate * snr
        })
        .collect();
    ln_sum_exp(&lns).exp()
}

/// Pr(SNR > snr) for one hop, via the truncated incomplete-gamma series,
/// clamped to [0, 1].
pub fn hop_ccdf(c: &HopCoefficients, snr: f64) -> f64 {
    assert!(snr >= 0.0, "snr must be nonnegative");
    let x = c.rate * snr;
    let mut acc = LogNum::ZERO;
    for (e, &a) in c.term_weights.iter().enumerate() {
        let s = c.shape_base + e as f64;
        let g = upper_inc_gamma(s, x).expect("shape and argument are positive");
        let term = c.c1.mul(a).mul(g).div(LogNum::from_ln(s * c.rate.ln()));
        acc = acc.add(term);
    }
    acc.to_f64().clamp(0.0, 1.0)
}

/// Density via the direct 1F1 form (the un-expanded closed form); used as a
/// cross-check of the series path.
pub fn hop_pdf_direct(c: &HopCoefficients, snr: f64, trunc: &SeriesConfig) -> Result<f64> {
    if snr < 0.0 {
        return Err(Error::Domain("snr must be nonnegative".into()));
    }
    if snr == 0.0 {
        return Ok(hop_pdf(c, 0.0));
    }
    let f11 = crate::specfun::kummer_1f1_series(
        c.shadow_shape,
        c.shape_base,
        c.mixture_rate * snr,
        trunc,
    )?;
    let ln = c.c1.ln_mag + (c.shape_base - 1.0) * snr.ln() - c.rate * snr + f11.value.ln_mag;
    Ok(ln.exp())
}
