//! The three secrecy metrics — PNSMC, SOPM, ESMC — each computable by a
//! closed-form truncated series, by adaptive quadrature over the exact
//! pointwise distributions, or by Monte-Carlo simulation.
//!
//! The three paths share no numerical machinery beyond the hop coefficient
//! series, so pairwise agreement is a strong correctness check:
//!
//! * closed form: the order-statistic densities become [`ExpoPolySum`]
//!   expansions, and every required integral (survival of the worst
//!   receiver past an affine threshold, expectation of `log2(1+x)`)
//!   reduces to factorials, incomplete gammas, and exponential integrals;
//! * quadrature: semi-infinite adaptive Gauss-Kronrod over products of the
//!   direct density/CDF evaluations (absolute tolerance 1e-6);
//! * Monte-Carlo: [`crate::montecarlo`] draws the fading realizations.

use crate::channel::hop_coefficients;
use crate::config::{MethodKind, NetworkConfig};
use crate::dualhop::DualHopDist;
use crate::error::Result;
use crate::extremes::{
    max_snr_cdf_direct, max_snr_pdf, max_snr_pdf_direct, min_snr_pdf, min_snr_pdf_direct,
    ExpoPolySum,
};
use crate::lognum::{signed_sum, LogNum};
use crate::montecarlo::{simulate_metrics, SimMode, SimPlan};
use crate::quad;
use crate::series::SeriesConfig;
use crate::specfun::{e1_scaled, ln_choose, ln_factorial};

/// Absolute tolerance for every quadrature-path integral.
pub const QUAD_TOL: f64 = 1e-6;

/// How a metric is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    /// Truncated-series closed form; requires integer shape parameters.
    ClosedForm,
    /// Adaptive quadrature over the pointwise distributions (default;
    /// handles arbitrary real shapes).
    Quadrature,
    /// Stochastic estimate from `trials` fading realizations.
    MonteCarlo { trials: u64, seed: u64 },
}

impl Method {
    pub fn kind(&self) -> MethodKind {
        match self {
            Method::ClosedForm => MethodKind::ClosedForm,
            Method::Quadrature => MethodKind::Quadrature,
            Method::MonteCarlo { .. } => MethodKind::MonteCarlo,
        }
    }
}

/// A metric value with its evaluation metadata.
#[derive(Debug, Clone)]
pub struct MetricResult {
    pub value: f64,
    pub method: MethodKind,
    /// Series terms carried (closed form), trials (Monte-Carlo), 0 otherwise.
    pub terms_used: u64,
    /// Upper bound on discarded-series mass (closed form), the quadrature
    /// tolerance, or the Monte-Carlo standard error.
    pub tail_estimate: f64,
    pub warnings: Vec<String>,
}

/// The two best-relay distributions (toward receivers and eavesdroppers)
/// implied by a network configuration.
#[derive(Debug, Clone)]
pub struct NetworkModel {
    /// Source -> relay -> receiver link, best of P relays.
    pub mult: DualHopDist,
    /// Source -> relay -> eavesdropper link, best of P relays.
    pub eav: DualHopDist,
    pub receivers: u32,
    pub eavesdroppers: u32,
}

/// Builds both best-relay distributions from a network configuration.
pub fn build_model(net: &NetworkConfig, trunc: &SeriesConfig) -> Result<NetworkModel> {
    net.validate()?;
    let sp = hop_coefficients(&net.hop_sp, 1, trunc)?;
    let pq = hop_coefficients(&net.hop_pq, net.antennas_rx, trunc)?;
    let pw = hop_coefficients(&net.hop_pw, net.antennas_eve, trunc)?;
    Ok(NetworkModel {
        mult: DualHopDist::new(sp.clone(), pq, net.relays),
        eav: DualHopDist::new(sp, pw, net.relays),
        receivers: net.receivers,
        eavesdroppers: net.eavesdroppers,
    })
}

fn model_warnings(model: &NetworkModel) -> Vec<String> {
    let mut w = Vec::new();
    if model.mult.first_hop.surrogate_shadowing
        || model.mult.second_hop.surrogate_shadowing
        || model.eav.second_hop.surrogate_shadowing
    {
        w.push(
            "unshadowed (m = inf) hop replaced by a large finite shadowing \
             shape on the analytical path"
                .into(),
        );
    }
    w
}

fn hop_tail_sum(model: &NetworkModel) -> f64 {
    model.mult.first_hop.tail_estimate
        + model.mult.second_hop.tail_estimate
        + model.eav.second_hop.tail_estimate
}

fn clamp_probability(raw: f64, warnings: &mut Vec<String>) -> f64 {
    if raw < -1e-6 || raw > 1.0 + 1e-6 {
        warnings.push(format!(
            "raw series value {raw} outside [0, 1]; clamped"
        ));
    }
    raw.clamp(0.0, 1.0)
}

/// Survival function of an expansion past an affine threshold, re-expanded
/// in the threshold's free variable: with `density = sum a_n x^n e^(-r x)`,
/// returns the expansion in y of
/// `integral_{p + q y}^inf density(x) dx`  (p >= 0, q > 0).
fn survival_after_affine(density: &ExpoPolySum, p: f64, q: f64) -> ExpoPolySum {
    let ln_p = LogNum::from_f64(p);
    let ln_q = LogNum::from_f64(q);
    let mut out = ExpoPolySum::default();
    for g in &density.groups {
        let r = g.rate;
        let ln_r = r.ln();
        let deg = g.coeffs.len() - 1;
        // Suffix sums S_f = sum_{n >= f} a_n n! / r^(n+1); all a_n in a
        // group share a sign, so the accumulation never cancels.
        let mut coeff = vec![LogNum::ZERO; deg + 1];
        let mut suffix = LogNum::ZERO;
        for f in (0..=deg).rev() {
            let a = g.coeffs[f];
            if !a.is_zero() {
                suffix =
                    suffix.add(a.mul(LogNum::from_ln(ln_factorial(f) - (f as f64 + 1.0) * ln_r)));
            }
            // coefficient of t^f in the survival polynomial: S_f r^f / f!
            coeff[f] = suffix.mul(LogNum::from_ln(f as f64 * ln_r - ln_factorial(f)));
        }
        // Substitute t = p + q y and collect powers of y.
        let mut b = vec![LogNum::ZERO; deg + 1];
        for (f, &cf) in coeff.iter().enumerate() {
            if cf.is_zero() {
                continue;
            }
            for (m, bm) in b.iter_mut().enumerate().take(f + 1) {
                let w = LogNum::from_ln(ln_choose(f, m))
                    .mul(ln_p.powi((f - m) as u32))
                    .mul(ln_q.powi(m as u32));
                *bm = bm.add(cf.mul(w));
            }
        }
        // e^{-r(p + q y)} contributes the scale e^{-rp} and the y-rate r q.
        let scale = LogNum::from_ln(-r * p);
        for bm in &mut b {
            *bm = bm.mul(scale);
        }
        while b.len() > 1 && b.last().unwrap().is_zero() {
            b.pop();
        }
        out = out.add(&ExpoPolySum::single_group(r * q, b));
    }
    out
}

/// Table of `I_n = integral_0^inf x^n e^(-r x) ln(1+x) dx` for n = 0..=n_max,
/// in log domain.
///
/// Built from `J_n = integral_0^inf t^n e^(-r t) / (1+t) dt` via the exact
/// identity `J_n + J_{n-1} = (n-1)!/r^n`, anchored where the recurrence is
/// stable in both directions: forward (solving for J_n) is stable for n > r,
/// backward (solving for J_{n-1}) for n <= r. The anchor J_{n*} at
/// n* = min(n_max, ceil(r)) comes from `e^r E_1(r)` when n* = 0 and from a
/// log-scaled adaptive quadrature otherwise. Then
/// `I_0 = J_0 / r` and `I_n = (n I_{n-1} + J_n) / r` (all terms positive).
fn log_expectation_table(r: f64, n_max: usize) -> Result<Vec<LogNum>> {
    let mut j = vec![LogNum::ZERO; n_max + 1];
    let n_star = (r.ceil() as usize).min(n_max);
    if n_star == 0 {
        j[0] = LogNum::from_f64(e1_scaled(r)?);
    } else {
        // Peak of t^n e^{-rt} sits at t = n/r with log-height M.
        let n = n_star as f64;
        let m_ln = n * (n / r).ln() - n;
        let scaled = quad::integrate_semi_infinite(
            |t| {
                if t <= 0.0 {
                    0.0
                } else {
                    (n * t.ln() - r * t - m_ln).exp() / (1.0 + t)
                }
            },
            (1e-13 * (2.0 * std::f64::consts::PI * n).sqrt() / r).max(1e-280),
        )?;
        j[n_star] = LogNum::from_ln(m_ln + scaled.ln());
        for n in (1..=n_star).rev() {
            // J_{n-1} = (n-1)!/r^n - J_n, stable for n <= r.
            let jn = LogNum::from_ln(ln_factorial(n - 1) - n as f64 * r.ln()).sub(j[n]);
            j[n - 1] = if jn.sign > 0 { jn } else { LogNum::ZERO };
        }
    }
    for n in n_star + 1..=n_max {
        // J_n = (n-1)!/r^n - J_{n-1}, stable for n > r.
        let jn = LogNum::from_ln(ln_factorial(n - 1) - n as f64 * r.ln()).sub(j[n - 1]);
        j[n] = if jn.sign > 0 { jn } else { LogNum::ZERO };
    }
    let inv_r = LogNum::from_ln(-r.ln());
    let mut i = vec![LogNum::ZERO; n_max + 1];
    i[0] = j[0].mul(inv_r);
    for n in 1..=n_max {
        i[n] = LogNum::from_f64(n as f64).mul(i[n - 1]).add(j[n]).mul(inv_r);
    }
    Ok(i)
}

/// `integral_0^inf density(x) ln(1+x) dx` for a closed-form expansion.
fn expectation_log1p(density: &ExpoPolySum) -> Result<LogNum> {
    let mut pieces = Vec::new();
    for g in &density.groups {
        let table = log_expectation_table(g.rate, g.coeffs.len() - 1)?;
        for (n, &a) in g.coeffs.iter().enumerate() {
            if !a.is_zero() {
                pieces.push(a.mul(table[n]));
            }
        }
    }
    Ok(signed_sum(&pieces))
}

struct ClosedFormParts {
    f_min: ExpoPolySum,
    f_max: ExpoPolySum,
    terms: u64,
}

fn closed_form_parts(model: &NetworkModel, trunc: &SeriesConfig) -> Result<ClosedFormParts> {
    let f_min = min_snr_pdf(&model.mult, model.receivers, trunc)?;
    let f_max = max_snr_pdf(&model.eav, model.eavesdroppers, trunc)?;
    let terms = (f_min.term_count() + f_max.term_count()) as u64;
    Ok(ClosedFormParts { f_min, f_max, terms })
}

/// Pr(worst receiver > p + q * strongest eavesdropper) in closed form.
fn closed_joint_survival(parts: &ClosedFormParts, p: f64, q: f64, budget: u64) -> Result<f64> {
    let surv = survival_after_affine(&parts.f_min, p, q);
    Ok(surv.mul(&parts.f_max, budget)?.integral().to_f64())
}

/// Probability of non-zero secrecy multicast capacity,
/// Pr(worst receiver SNR > strongest eavesdropper SNR).
pub fn pnsmc(net: &NetworkConfig, trunc: &SeriesConfig, method: &Method) -> Result<MetricResult> {
    let model = build_model(net, trunc)?;
    let mut warnings = model_warnings(&model);
    match method {
        Method::ClosedForm => {
            let parts = closed_form_parts(&model, trunc)?;
            let raw = closed_joint_survival(&parts, 0.0, 1.0, trunc.budget)?;
            let value = clamp_probability(raw, &mut warnings);
            Ok(MetricResult {
                value,
                method: MethodKind::ClosedForm,
                terms_used: parts.terms,
                tail_estimate: hop_tail_sum(&model),
                warnings,
            })
        }
        Method::Quadrature => {
            let (q, w) = (model.receivers, model.eavesdroppers);
            let raw = quad::integrate_semi_infinite(
                |x| min_snr_pdf_direct(&model.mult, q, x) * max_snr_cdf_direct(&model.eav, w, x),
                QUAD_TOL,
            )?;
            let value = clamp_probability(raw, &mut warnings);
            Ok(MetricResult {
                value,
                method: MethodKind::Quadrature,
                terms_used: 0,
                tail_estimate: QUAD_TOL,
                warnings,
            })
        }
        Method::MonteCarlo { trials, seed } => {
            let est = simulate_metrics(
                &SimPlan {
                    trials: *trials,
                    seed: *seed,
                    mode: SimMode::AnalysisConsistent,
                    net: net.clone(),
                },
                1.0,
            )?;
            warnings.extend(est.warnings);
            Ok(MetricResult {
                value: est.pnsmc,
                method: MethodKind::MonteCarlo,
                terms_used: *trials,
                tail_estimate: est.pnsmc_stderr,
                warnings,
            })
        }
    }
}

/// Secure outage probability for multicasting at target secrecy rate
/// `target_rate` (bits/s/Hz): Pr(secrecy capacity < target_rate).
pub fn sopm(
    net: &NetworkConfig,
    target_rate: f64,
    trunc: &SeriesConfig,
    method: &Method,
) -> Result<MetricResult> {
    if !(target_rate > 0.0) {
        return Err(crate::error::Error::Domain(format!(
            "target_rate must be > 0, got {target_rate}"
        )));
    }
    let model = build_model(net, trunc)?;
    let mut warnings = model_warnings(&model);
    // The outage threshold on the worst receiver is affine in the strongest
    // eavesdropper SNR y: psi(y) = 2^xi (1 + y) - 1 = p + q y.
    let q_rate = 2f64.powf(target_rate);
    let p_off = q_rate - 1.0;
    match method {
        Method::ClosedForm => {
            let parts = closed_form_parts(&model, trunc)?;
            let raw = 1.0 - closed_joint_survival(&parts, p_off, q_rate, trunc.budget)?;
            let value = clamp_probability(raw, &mut warnings);
            Ok(MetricResult {
                value,
                method: MethodKind::ClosedForm,
                terms_used: parts.terms,
                tail_estimate: hop_tail_sum(&model),
                warnings,
            })
        }
        Method::Quadrature => {
            let (q, w) = (model.receivers, model.eavesdroppers);
            let keep = quad::integrate_semi_infinite(
                |y| {
                    max_snr_pdf_direct(&model.eav, w, y)
                        * model.mult.bestrelay_ccdf(p_off + q_rate * y).powi(q as i32)
                },
                QUAD_TOL,
            )?;
            let value = clamp_probability(1.0 - keep, &mut warnings);
            Ok(MetricResult {
                value,
                method: MethodKind::Quadrature,
                terms_used: 0,
                tail_estimate: QUAD_TOL,
                warnings,
            })
        }
        Method::MonteCarlo { trials, seed } => {
            let est = simulate_metrics(
                &SimPlan {
                    trials: *trials,
                    seed: *seed,
                    mode: SimMode::AnalysisConsistent,
                    net: net.clone(),
                },
                target_rate,
            )?;
            warnings.extend(est.warnings);
            Ok(MetricResult {
                value: est.sopm,
                method: MethodKind::MonteCarlo,
                terms_used: *trials,
                tail_estimate: est.sopm_stderr,
                warnings,
            })
        }
    }
}

/// Ergodic secrecy multicast capacity,
/// `E[log2(1 + worst receiver)] - E[log2(1 + strongest eavesdropper)]`,
/// in bits/s/Hz. Signed: the definition carries no positive-part operator.
pub fn esmc(net: &NetworkConfig, trunc: &SeriesConfig, method: &Method) -> Result<MetricResult> {
    let model = build_model(net, trunc)?;
    let mut warnings = model_warnings(&model);
    match method {
        Method::ClosedForm => {
            let parts = closed_form_parts(&model, trunc)?;
            let gain = expectation_log1p(&parts.f_min)?;
            let loss = expectation_log1p(&parts.f_max)?;
            let value = gain.sub(loss).to_f64() / std::f64::consts::LN_2;
            Ok(MetricResult {
                value,
                method: MethodKind::ClosedForm,
                terms_used: parts.terms,
                tail_estimate: hop_tail_sum(&model),
                warnings,
            })
        }
        Method::Quadrature => {
            let (q, w) = (model.receivers, model.eavesdroppers);
            let gain = quad::integrate_semi_infinite(
                |x| (1.0 + x).log2() * min_snr_pdf_direct(&model.mult, q, x),
                QUAD_TOL,
            )?;
            let loss = quad::integrate_semi_infinite(
                |x| (1.0 + x).log2() * max_snr_pdf_direct(&model.eav, w, x),
                QUAD_TOL,
            )?;
            Ok(MetricResult {
                value: gain - loss,
                method: MethodKind::Quadrature,
                terms_used: 0,
                tail_estimate: QUAD_TOL,
                warnings,
            })
        }
        Method::MonteCarlo { trials, seed } => {
            let est = simulate_metrics(
                &SimPlan {
                    trials: *trials,
                    seed: *seed,
                    mode: SimMode::AnalysisConsistent,
                    net: net.clone(),
                },
                1.0,
            )?;
            warnings.extend(est.warnings);
            Ok(MetricResult {
                value: est.esmc,
                method: MethodKind::MonteCarlo,
                terms_used: *trials,
                tail_estimate: est.esmc_stderr,
                warnings,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::FadingParams;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
    }

    fn net(
        p: u32,
        q: u32,
        w: u32,
        g: u32,
        fading: (f64, f64, f64),
        snr_main: f64,
        snr_eve: f64,
    ) -> NetworkConfig {
        let (kappa, mu, m) = fading;
        NetworkConfig {
            relays: p,
            receivers: q,
            eavesdroppers: w,
            antennas_rx: g,
            antennas_eve: g,
            hop_sp: FadingParams::new(kappa, mu, m, 10.0).unwrap(),
            hop_pq: FadingParams::new(kappa, mu, m, snr_main).unwrap(),
            hop_pw: FadingParams::new(kappa, mu, m, snr_eve).unwrap(),
        }
    }

    fn symmetric() -> NetworkConfig {
        net(1, 1, 1, 2, (1.0, 1.0, 2.0), 2.0, 2.0)
    }

    #[test]
    fn expectation_table_matches_quadrature() {
        for &(r, n) in &[(0.3, 0usize), (0.3, 5), (2.0, 3), (30.0, 7), (3.0, 60)] {
            let table = log_expectation_table(r, n).unwrap();
            // Oracle: log-scaled direct quadrature of x^n e^{-rx} ln(1+x).
            let scale = if n == 0 {
                0.0
            } else {
                n as f64 * ((n as f64 / r).ln()) - n as f64
            };
            let oracle = quad::integrate_semi_infinite(
                |x| {
                    if x <= 0.0 {
                        0.0
                    } else {
                        (n as f64 * x.ln() - r * x - scale).exp() * (1.0 + x).ln()
                    }
                },
                1e-13,
            )
            .unwrap();
            let got = (table[n].ln_mag - scale).exp();
            assert!(rel(got, oracle) < 1e-8, "r={r} n={n}: {got} vs {oracle}");
        }
    }

    #[test]
    fn expectation_table_i0_identity() {
        // I_0 = e^r E_1(r) / r.
        for &r in &[0.5, 4.0, 80.0] {
            let table = log_expectation_table(r, 0).unwrap();
            let expect = e1_scaled(r).unwrap().ln() - r.ln();
            assert!((table[0].ln_mag - expect).abs() < 1e-9, "r={r}");
        }
    }

    #[test]
    fn survival_affine_matches_tail_integral() {
        let cfg = SeriesConfig::default();
        let model = build_model(&net(2, 2, 2, 2, (1.0, 1.0, 2.0), 3.0, 0.5), &cfg).unwrap();
        let parts = closed_form_parts(&model, &cfg).unwrap();
        let (p, q) = (0.7, 1.3);
        let surv = survival_after_affine(&parts.f_min, p, q);
        for i in 0..10 {
            let y = 0.3 * i as f64;
            let direct = parts.f_min.integral_from(p + q * y).to_f64();
            assert!(rel(surv.eval(y), direct) < 1e-6, "y={y}");
        }
    }

    #[test]
    fn symmetric_network_is_fair_coin() {
        let cfg = SeriesConfig::default();
        let n = symmetric();
        let q = pnsmc(&n, &cfg, &Method::Quadrature).unwrap();
        assert!((q.value - 0.5).abs() < 2e-3, "quadrature {}", q.value);
        let c = pnsmc(&n, &cfg, &Method::ClosedForm).unwrap();
        assert!((c.value - 0.5).abs() < 2e-3, "closed {}", c.value);
        let e = esmc(&n, &cfg, &Method::Quadrature).unwrap();
        assert!(e.value.abs() < 5e-3, "esmc {}", e.value);
        let ec = esmc(&n, &cfg, &Method::ClosedForm).unwrap();
        assert!(ec.value.abs() < 5e-3, "esmc closed {}", ec.value);
    }

    #[test]
    fn closed_form_agrees_with_quadrature() {
        let cfg = SeriesConfig::default();
        let n = net(2, 2, 2, 2, (1.0, 1.0, 2.0), 3.16, 0.1);
        let pq = pnsmc(&n, &cfg, &Method::Quadrature).unwrap().value;
        let pc = pnsmc(&n, &cfg, &Method::ClosedForm).unwrap().value;
        assert!((pq - pc).abs() < 5e-4, "pnsmc {pq} vs {pc}");
        let sq = sopm(&n, 0.5, &cfg, &Method::Quadrature).unwrap().value;
        let sc = sopm(&n, 0.5, &cfg, &Method::ClosedForm).unwrap().value;
        assert!((sq - sc).abs() < 5e-4, "sopm {sq} vs {sc}");
        let eq = esmc(&n, &cfg, &Method::Quadrature).unwrap().value;
        let ec = esmc(&n, &cfg, &Method::ClosedForm).unwrap().value;
        assert!((eq - ec).abs() < 5e-3, "esmc {eq} vs {ec}");
    }

    #[test]
    fn sopm_limit_recovers_pnsmc() {
        let cfg = SeriesConfig::default();
        let n = net(2, 2, 2, 2, (1.0, 1.0, 2.0), 3.16, 0.1);
        for method in [Method::Quadrature, Method::ClosedForm] {
            let p = pnsmc(&n, &cfg, &method).unwrap().value;
            let s = sopm(&n, 1e-9, &cfg, &method).unwrap().value;
            assert!((p - (1.0 - s)).abs() < 1e-6, "{method:?}: {p} vs 1-{s}");
        }
    }

    #[test]
    fn sopm_vanishes_at_high_main_snr() {
        let cfg = SeriesConfig::default();
        let n = net(2, 2, 2, 2, (1.0, 1.0, 2.0), 1e6, 0.1);
        let s = sopm(&n, 0.5, &cfg, &Method::Quadrature).unwrap();
        assert!(s.value < 0.01, "{}", s.value);
    }

    #[test]
    fn pnsmc_dominance_limit() {
        let cfg = SeriesConfig::default();
        let n = net(1, 1, 1, 1, (1.0, 1.0, 2.0), 1e5, 0.01);
        let p = pnsmc(&n, &cfg, &Method::Quadrature).unwrap();
        assert!(p.value > 0.999, "{}", p.value);
    }

    #[test]
    fn esmc_positive_with_degraded_eavesdropper() {
        let cfg = SeriesConfig::default();
        let n = net(1, 1, 1, 1, (1.0, 1.0, 2.0), 10.0, 1e-6);
        let e = esmc(&n, &cfg, &Method::Quadrature).unwrap();
        // With a vanishing eavesdropper the value is E[log2(1 + lambda_min)].
        let model = build_model(&n, &cfg).unwrap();
        let alone = quad::integrate_semi_infinite(
            |x| (1.0 + x).log2() * min_snr_pdf_direct(&model.mult, 1, x),
            1e-9,
        )
        .unwrap();
        assert!(e.value > 0.0);
        assert!((e.value - alone).abs() < 1e-4, "{} vs {alone}", e.value);
    }

    #[test]
    fn non_integer_shape_routes_to_error_only_on_closed_form() {
        let cfg = SeriesConfig::default();
        let n = net(1, 1, 1, 1, (1.0, 1.5, 2.0), 2.0, 1.0);
        assert!(pnsmc(&n, &cfg, &Method::ClosedForm).is_err());
        assert!(pnsmc(&n, &cfg, &Method::Quadrature).is_ok());
    }
}
