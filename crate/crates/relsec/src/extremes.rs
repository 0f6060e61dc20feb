//! Order statistics across receivers and eavesdroppers, and the canonical
//! "polynomial times exponential" expansion behind the closed-form metrics.
//!
//! With integer shape parameters every incomplete-gamma factor collapses to
//! a finite sum, so each hop CCDF/PDF becomes a polynomial times a single
//! exponential. Products, binomial-expanded powers, and order-statistic
//! combinations then stay inside the [`ExpoPolySum`] form
//! `sum_i c_i * x^k_i * e^(-r_i x)`, which integrates in closed form against
//! everything the secrecy metrics need.
//!
//! Powers of the inner CCDF-product series are computed by repeated
//! polynomial multiplication with like-power merging; this is the multinomial
//! expansion with equal `(power, rate)` terms combined numerically, and the
//! explicit weak-composition enumeration is kept (and cross-checked in
//! tests) as [`enumerate_compositions`] / [`multinomial_expand`].

use crate::channel::HopCoefficients;
use crate::dualhop::DualHopDist;
use crate::error::{Error, Result};
use crate::lognum::{signed_sum, LogNum};
use crate::series::SeriesConfig;
use crate::specfun::{ln_choose, ln_factorial, upper_inc_gamma};

/// One term of a multinomial-expanded power: weight * x^power * e^(-rate x).
#[derive(Debug, Clone, Copy)]
pub struct CompositionTerm {
    pub weight: LogNum,
    pub power: u32,
    pub rate: f64,
}

/// Iterator over weak compositions of `total` into `cells` nonnegative parts.
pub struct Compositions {
    state: Option<Vec<u32>>,
    cells: usize,
    total: u32,
}

impl Iterator for Compositions {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let current = self.state.take()?;
        let out = current.clone();
        // Successor: move one unit from the first nonzero cell rightward,
        // dumping its remainder back into cell 0.
        if self.cells > 1 && current[self.cells - 1] != self.total {
            let mut next = current;
            let i = next.iter().position(|&g| g > 0).unwrap();
            if i + 1 < self.cells {
                let v = next[i];
                next[i] = 0;
                next[0] = v - 1;
                next[i + 1] += 1;
                self.state = Some(next);
            }
        }
        Some(out)
    }
}

/// Number of weak compositions, C(cells + total - 1, total), in u128;
/// `None` on overflow.
pub fn composition_count(cells: usize, total: u32) -> Option<u128> {
    // C(n, k) with n = cells + total - 1, k = total
    let n = cells as u128 + total as u128 - 1;
    let k = (total as u128).min(n - total as u128);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)?;
        acc /= i + 1;
    }
    Some(acc)
}

/// Enumerates every assignment of nonnegative integers to `cells` cells
/// summing to `total`, exactly once. Errors when the enumeration would
/// exceed `budget` terms.
pub fn enumerate_compositions(cells: usize, total: u32, budget: u64) -> Result<Compositions> {
    if cells < 1 {
        return Err(Error::Domain("cells must be >= 1".into()));
    }
    let count = composition_count(cells, total)
        .ok_or(Error::BudgetExceeded { needed: u128::MAX, budget })?;
    if count > budget as u128 {
        return Err(Error::BudgetExceeded { needed: count, budget });
    }
    let mut first = vec![0u32; cells];
    first[0] = total;
    Ok(Compositions {
        state: Some(first),
        cells,
        total,
    })
}

/// Expands `(sum_i base_i)^k` by explicit multinomial enumeration. Each base
/// term is (weight, power, rate). Used as the term-level reference for the
/// merged polynomial powering; subject to the same budget.
pub fn multinomial_expand(
    base: &[CompositionTerm],
    k: u32,
    budget: u64,
) -> Result<Vec<CompositionTerm>> {
    let mut out = Vec::new();
    for comp in enumerate_compositions(base.len(), k, budget)? {
        let mut ln_w = ln_factorial(k as usize);
        let mut sign = 1i8;
        let mut power = 0u32;
        let mut rate = 0.0;
        for (i, &g) in comp.iter().enumerate() {
            if g == 0 {
                continue;
            }
            ln_w -= ln_factorial(g as usize);
            if base[i].weight.sign == 0 {
                sign = 0;
            } else {
                ln_w += g as f64 * base[i].weight.ln_mag;
                if base[i].weight.sign < 0 && g % 2 == 1 {
                    sign = -sign;
                }
            }
            power += g * base[i].power;
            rate += g as f64 * base[i].rate;
        }
        if sign != 0 {
            out.push(CompositionTerm {
                weight: LogNum::new(ln_w, sign),
                power,
                rate,
            });
        }
    }
    Ok(out)
}

/// One exponential rate with its polynomial coefficients:
/// `e^(-rate x) * sum_k coeffs[k] x^k`.
#[derive(Debug, Clone)]
pub struct RateGroup {
    pub rate: f64,
    pub coeffs: Vec<LogNum>,
}

/// Canonical expansion `sum c * x^k * e^(-r x)`, grouped by rate.
/// All rates are positive, so the sum is integrable on [0, inf).
#[derive(Debug, Clone, Default)]
pub struct ExpoPolySum {
    pub groups: Vec<RateGroup>,
}

const RATE_MERGE_REL: f64 = 1e-12;

impl ExpoPolySum {
    pub fn single_group(rate: f64, coeffs: Vec<LogNum>) -> Self {
        assert!(rate > 0.0, "rates must be positive");
        ExpoPolySum {
            groups: vec![RateGroup { rate, coeffs }],
        }
    }

    pub fn term_count(&self) -> usize {
        self.groups.iter().map(|g| g.coeffs.len()).sum()
    }

    /// Flat view as (coeff, power, rate) terms, zero coefficients skipped.
    pub fn terms(&self) -> impl Iterator<Item = CompositionTerm> + '_ {
        self.groups.iter().flat_map(|g| {
            g.coeffs.iter().enumerate().filter_map(move |(k, &c)| {
                (!c.is_zero()).then_some(CompositionTerm {
                    weight: c,
                    power: k as u32,
                    rate: g.rate,
                })
            })
        })
    }

    pub fn eval(&self, x: f64) -> f64 {
        assert!(x >= 0.0);
        let mut pieces = Vec::with_capacity(self.term_count());
        let ln_x = if x > 0.0 { x.ln() } else { f64::NEG_INFINITY };
        for g in &self.groups {
            for (k, &c) in g.coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let ln_xk = if k == 0 { 0.0 } else { k as f64 * ln_x };
                pieces.push(LogNum::new(c.ln_mag + ln_xk - g.rate * x, c.sign));
            }
        }
        signed_sum(&pieces).to_f64()
    }

    /// Exact integral over [0, inf): sum c k! / r^(k+1).
    pub fn integral(&self) -> LogNum {
        let mut pieces = Vec::with_capacity(self.term_count());
        for g in &self.groups {
            let ln_r = g.rate.ln();
            for (k, &c) in g.coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                pieces.push(LogNum::new(
                    c.ln_mag + ln_factorial(k) - (k as f64 + 1.0) * ln_r,
                    c.sign,
                ));
            }
        }
        signed_sum(&pieces)
    }

    /// Exact tail integral over [x, inf): sum c Gamma(k+1, r x) / r^(k+1).
    pub fn integral_from(&self, x: f64) -> LogNum {
        if x == 0.0 {
            return self.integral();
        }
        let mut pieces = Vec::with_capacity(self.term_count());
        for g in &self.groups {
            let ln_r = g.rate.ln();
            for (k, &c) in g.coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let gamma = upper_inc_gamma(k as f64 + 1.0, g.rate * x)
                    .expect("positive shape and argument");
                pieces.push(
                    LogNum::new(c.ln_mag - (k as f64 + 1.0) * ln_r, c.sign).mul(gamma),
                );
            }
        }
        signed_sum(&pieces)
    }

    pub fn scale(&mut self, s: LogNum) {
        for g in &mut self.groups {
            for c in &mut g.coeffs {
                *c = c.mul(s);
            }
        }
    }

    fn push_group(&mut self, rate: f64, coeffs: Vec<LogNum>) {
        for g in &mut self.groups {
            if (g.rate - rate).abs() <= RATE_MERGE_REL * rate.abs() {
                if g.coeffs.len() < coeffs.len() {
                    g.coeffs.resize(coeffs.len(), LogNum::ZERO);
                }
                for (k, c) in coeffs.into_iter().enumerate() {
                    g.coeffs[k] = g.coeffs[k].add(c);
                }
                return;
            }
        }
        self.groups.push(RateGroup { rate, coeffs });
    }

    pub fn add(&self, other: &ExpoPolySum) -> ExpoPolySum {
        let mut out = self.clone();
        for g in &other.groups {
            out.push_group(g.rate, g.coeffs.clone());
        }
        out
    }

    /// Product of two expansions; rates add, polynomials convolve.
    pub fn mul(&self, other: &ExpoPolySum, budget: u64) -> Result<ExpoPolySum> {
        let mut out = ExpoPolySum::default();
        for ga in &self.groups {
            for gb in &other.groups {
                let n = ga.coeffs.len() + gb.coeffs.len() - 1;
                let mut conv = vec![LogNum::ZERO; n];
                for (i, &a) in ga.coeffs.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for (j, &b) in gb.coeffs.iter().enumerate() {
                        if b.is_zero() {
                            continue;
                        }
                        conv[i + j] = conv[i + j].add(a.mul(b));
                    }
                }
                out.push_group(ga.rate + gb.rate, conv);
            }
        }
        if out.term_count() as u128 > budget as u128 {
            return Err(Error::BudgetExceeded {
                needed: out.term_count() as u128,
                budget,
            });
        }
        Ok(out)
    }

    /// k-th power by repeated multiplication (multinomial expansion with
    /// like terms merged). `pow(0)` is the constant 1 carried at `unit_rate`
    /// power zero... no: the callers only ever multiply the result into
    /// another expansion, so `None` signals the multiplicative identity.
    pub fn pow(&self, k: u32, budget: u64) -> Result<Option<ExpoPolySum>> {
        if k == 0 {
            return Ok(None);
        }
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.mul(self, budget)?;
        }
        Ok(Some(acc))
    }

    /// Drops coefficients whose integral contribution `|c| k! / r^(k+1)` is
    /// below `threshold` relative to the group's largest.
    pub fn prune(&mut self, threshold: f64) {
        let ln_thresh = threshold.ln();
        for g in &mut self.groups {
            let ln_r = g.rate.ln();
            let measure = |k: usize, c: LogNum| -> f64 {
                if c.is_zero() {
                    f64::NEG_INFINITY
                } else {
                    c.ln_mag + ln_factorial(k) - (k as f64 + 1.0) * ln_r
                }
            };
            let max_m = g
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| measure(k, c))
                .fold(f64::NEG_INFINITY, f64::max);
            let cut = max_m + ln_thresh;
            for (k, c) in g.coeffs.iter_mut().enumerate() {
                if measure(k, *c) < cut {
                    *c = LogNum::ZERO;
                }
            }
            while g.coeffs.len() > 1 && g.coeffs.last().unwrap().is_zero() {
                g.coeffs.pop();
            }
        }
        self.groups.retain(|g| g.coeffs.iter().any(|c| !c.is_zero()));
    }
}

/// Requires `v` to be a positive integer (within tolerance); returns it.
fn require_integer_shape(v: f64, what: &str) -> Result<usize> {
    let r = v.round();
    if r >= 1.0 && (v - r).abs() < 1e-9 {
        Ok(r as usize)
    } else {
        Err(Error::ShapeIntegrality(format!(
            "{what} = {v} must be a positive integer for the closed-form expansion"
        )))
    }
}

/// Hop CCDF as polynomial * exp(-rate x), using the finite-sum identity
/// Gamma(n, x) = (n-1)! e^{-x} sum_{j<n} x^j / j!.
fn ccdf_expansion(h: &HopCoefficients, what: &str) -> Result<ExpoPolySum> {
    let shape = require_integer_shape(h.shape_base, what)?;
    let max_deg = shape + h.term_weights.len() - 1;
    let mut coeffs = vec![LogNum::ZERO; max_deg];
    let ln_r = h.rate.ln();
    for (e, _) in h.term_weights.iter().enumerate() {
        let n = shape + e;
        // mixture weight W_e = c1 alpha_e (n-1)! / rate^n
        let w = h
            .coeff(e)
            .mul(LogNum::from_ln(ln_factorial(n - 1) - n as f64 * ln_r));
        for (j, c) in coeffs.iter_mut().enumerate().take(n) {
            *c = c.add(w.mul(LogNum::from_ln(j as f64 * ln_r - ln_factorial(j))));
        }
    }
    Ok(ExpoPolySum::single_group(h.rate, coeffs))
}

/// Hop PDF as polynomial * exp(-rate x).
fn pdf_expansion(h: &HopCoefficients, what: &str) -> Result<ExpoPolySum> {
    let shape = require_integer_shape(h.shape_base, what)?;
    let mut coeffs = vec![LogNum::ZERO; shape + h.term_weights.len()];
    for (e, _) in h.term_weights.iter().enumerate() {
        coeffs[shape - 1 + e] = h.coeff(e);
    }
    Ok(ExpoPolySum::single_group(h.rate, coeffs))
}

/// Shared expansion of `count`-fold order statistics of the best-relay SNR.
/// `minimum = true` gives the worst-case receiver (min over Q), false the
/// strongest eavesdropper (max over W).
fn order_stat_expansion(
    d: &DualHopDist,
    count: u32,
    minimum: bool,
    trunc: &SeriesConfig,
) -> Result<ExpoPolySum> {
    assert!(count >= 1);
    let relays = d.relays;
    let ccdf1 = ccdf_expansion(&d.first_hop, "first-hop shape mu_a")?;
    let ccdf2 = ccdf_expansion(&d.second_hop, "second-hop shape G*mu")?;
    let pdf1 = pdf_expansion(&d.first_hop, "first-hop shape mu_a")?;
    let pdf2 = pdf_expansion(&d.second_hop, "second-hop shape G*mu")?;

    // G(x) = Pr(hop1 > x) Pr(hop2 > x) = 1 - F_dualhop; single rate r1 + r2.
    let mut inner = ccdf1.mul(&ccdf2, trunc.budget)?;
    inner.prune(trunc.prune);
    // f_dualhop = pdf1*ccdf2 + pdf2*ccdf1; same rate r1 + r2.
    let mut dens = pdf1.mul(&ccdf2, trunc.budget)?.add(&pdf2.mul(&ccdf1, trunc.budget)?);
    dens.prune(trunc.prune);

    // Outer scalar weights: for the minimum,
    //   f_min = P Q f_dh sum_{e8 <= Q-1} C(Q-1,e8)(-1)^{e8} G^(P + P e8 - 1)
    // expanded in powers of G via the binomial theorem; for the maximum,
    //   f_max = P W f_dh sum_{e14 <= PW-1} C(PW-1,e14)(-1)^{e14} G^{e14}.
    let p = relays as usize;
    let n = count as usize;
    let max_pow = p * n - 1;
    let mut scalars = vec![LogNum::ZERO; max_pow + 1];
    if minimum {
        for e8 in 0..n {
            let top = p + p * e8 - 1;
            for (k, s) in scalars.iter_mut().enumerate().take(top + 1) {
                let sign = if (e8 + k) % 2 == 0 { 1 } else { -1 };
                let ln_w = ln_choose(n - 1, e8) + ln_choose(top, k);
                *s = s.add(LogNum::new(ln_w, sign));
            }
        }
    } else {
        for (k, s) in scalars.iter_mut().enumerate() {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            *s = s.add(LogNum::new(ln_choose(max_pow, k), sign));
        }
    }
    let front = LogNum::from_f64((p * n) as f64);

    let mut out = ExpoPolySum::default();
    let mut g_pow: Option<ExpoPolySum> = None; // G^k, grown incrementally
    for (k, &s) in scalars.iter().enumerate() {
        if k > 0 {
            let mut next = match g_pow {
                Some(ref gp) => gp.mul(&inner, trunc.budget)?,
                None => inner.clone(),
            };
            next.prune(trunc.prune);
            g_pow = Some(next);
        }
        if s.is_zero() {
            continue;
        }
        let mut piece = match g_pow {
            Some(ref gp) => dens.mul(gp, trunc.budget)?,
            None => dens.clone(),
        };
        piece.scale(s.mul(front));
        out = out.add(&piece);
        if out.term_count() as u128 > trunc.budget as u128 {
            return Err(Error::BudgetExceeded {
                needed: out.term_count() as u128,
                budget: trunc.budget,
            });
        }
    }
    out.prune(trunc.prune);
    Ok(out)
}

/// Density of the worst-case receiver SNR (min over Q best-relay links) as
/// a closed-form expansion. Requires integer shapes.
pub fn min_snr_pdf(mult: &DualHopDist, q: u32, trunc: &SeriesConfig) -> Result<ExpoPolySum> {
    order_stat_expansion(mult, q, true, trunc)
}

/// Density of the strongest eavesdropper SNR (max over W best-relay links).
pub fn max_snr_pdf(eav: &DualHopDist, w: u32, trunc: &SeriesConfig) -> Result<ExpoPolySum> {
    order_stat_expansion(eav, w, false, trunc)
}

/// Direct (un-expanded) evaluation of the same order statistics, used as the
/// pointwise oracle and the quadrature backend.
pub fn min_snr_pdf_direct(mult: &DualHopDist, q: u32, x: f64) -> f64 {
    q as f64 * mult.bestrelay_pdf(x) * mult.bestrelay_ccdf(x).powi(q as i32 - 1)
}

pub fn max_snr_pdf_direct(eav: &DualHopDist, w: u32, x: f64) -> f64 {
    w as f64 * eav.bestrelay_pdf(x) * eav.bestrelay_cdf(x).powi(w as i32 - 1)
}

/// CDF of the worst-case receiver SNR: 1 - (1 - F_best)^Q.
pub fn min_snr_cdf_direct(mult: &DualHopDist, q: u32, x: f64) -> f64 {
    1.0 - mult.bestrelay_ccdf(x).powi(q as i32)
}

/// CDF of the strongest eavesdropper SNR: F_best^W.
pub fn max_snr_cdf_direct(eav: &DualHopDist, w: u32, x: f64) -> f64 {
    eav.bestrelay_cdf(x).powi(w as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{hop_coefficients, FadingParams};

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
    }

    fn dist(kappa: f64, mu: f64, m: f64, snr1: f64, snr2: f64, g: u32, p: u32) -> DualHopDist {
        let cfg = SeriesConfig::default();
        let h1 = hop_coefficients(&FadingParams::new(kappa, mu, m, snr1).unwrap(), 1, &cfg).unwrap();
        let h2 = hop_coefficients(&FadingParams::new(kappa, mu, m, snr2).unwrap(), g, &cfg).unwrap();
        DualHopDist::new(h1, h2, p)
    }

    #[test]
    fn composition_counts() {
        assert_eq!(enumerate_compositions(3, 2, 1000).unwrap().count(), 6);
        assert_eq!(enumerate_compositions(5, 3, 1000).unwrap().count(), 35);
        let one: Vec<_> = enumerate_compositions(4, 0, 1000).unwrap().collect();
        assert_eq!(one, vec![vec![0, 0, 0, 0]]);
        assert!(matches!(
            enumerate_compositions(30, 9, 1000),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn compositions_match_brute_force() {
        // cells=5, total=3 against exhaustive nested loops.
        let mut brute = Vec::new();
        for a in 0..=3u32 {
            for b in 0..=3 - a {
                for c in 0..=3 - a - b {
                    for d in 0..=3 - a - b - c {
                        brute.push(vec![a, b, c, d, 3 - a - b - c - d]);
                    }
                }
            }
        }
        let mut got: Vec<_> = enumerate_compositions(5, 3, 1000).unwrap().collect();
        brute.sort();
        got.sort();
        assert_eq!(brute, got);
    }

    #[test]
    fn multinomial_theorem_sanity() {
        // Sum of multinomial coefficients over all compositions = cells^total.
        for cells in 1..=6usize {
            for total in 0..=4u32 {
                let base: Vec<CompositionTerm> = (0..cells)
                    .map(|_| CompositionTerm {
                        weight: LogNum::ONE,
                        power: 0,
                        rate: 1.0,
                    })
                    .collect();
                let terms = multinomial_expand(&base, total, 10_000).unwrap();
                let sum: f64 = terms.iter().map(|t| t.weight.to_f64()).sum();
                assert!(
                    rel(sum, (cells as f64).powi(total as i32)) < 1e-12,
                    "cells={cells} total={total}"
                );
            }
        }
    }

    #[test]
    fn pow_matches_multinomial_expansion() {
        // Merged polynomial powering vs explicit composition enumeration.
        let base = ExpoPolySum::single_group(
            1.5,
            vec![
                LogNum::from_f64(0.3),
                LogNum::from_f64(-1.2),
                LogNum::from_f64(0.05),
            ],
        );
        let terms: Vec<CompositionTerm> = base.terms().collect();
        for k in 1..=4u32 {
            let merged = base.pow(k, 1_000_000).unwrap().unwrap();
            let expanded = multinomial_expand(&terms, k, 1_000_000).unwrap();
            // collapse the expanded form by power (all rates equal here)
            let deg = expanded.iter().map(|t| t.power).max().unwrap() as usize;
            let mut coeffs = vec![LogNum::ZERO; deg + 1];
            for t in &expanded {
                coeffs[t.power as usize] = coeffs[t.power as usize].add(t.weight);
            }
            assert_eq!(merged.groups.len(), 1);
            assert!((merged.groups[0].rate - 1.5 * k as f64).abs() < 1e-12);
            for (a, b) in merged.groups[0].coeffs.iter().zip(&coeffs) {
                let (av, bv) = (a.to_f64(), b.to_f64());
                assert!((av - bv).abs() < 1e-10 * av.abs().max(bv.abs()).max(1e-12));
            }
        }
    }

    #[test]
    fn expopoly_eval_and_integral() {
        // 2 x e^{-x} + 3 x^2 e^{-2x}
        let s = ExpoPolySum::single_group(1.0, vec![LogNum::ZERO, LogNum::from_f64(2.0)]).add(
            &ExpoPolySum::single_group(
                2.0,
                vec![LogNum::ZERO, LogNum::ZERO, LogNum::from_f64(3.0)],
            ),
        );
        let x = 1.3f64;
        let expect = 2.0 * x * (-x).exp() + 3.0 * x * x * (-2.0 * x).exp();
        assert!(rel(s.eval(x), expect) < 1e-13);
        // integral: 2*1!/1^2 + 3*2!/2^3 = 2 + 0.75
        assert!(rel(s.integral().to_f64(), 2.75) < 1e-13);
        let tail = crate::quad::integrate_from(|t| s.eval(t), 0.8, 1e-12).unwrap();
        assert!(rel(s.integral_from(0.8).to_f64(), tail) < 1e-10);
    }

    #[test]
    fn min_expansion_q1_p1_equals_bestrelay_pdf() {
        let d = dist(1.0, 1.0, 2.0, 1.0, 1.0, 1, 1);
        let cfg = SeriesConfig::default();
        let e = min_snr_pdf(&d, 1, &cfg).unwrap();
        for i in 1..=40 {
            let x = 0.25 * i as f64;
            let a = e.eval(x);
            let b = d.bestrelay_pdf(x);
            assert!(rel(a, b) < 1e-6, "x={x}: {a} vs {b}");
        }
    }

    #[test]
    fn min_expansion_matches_direct_product_form() {
        // fig-2-style parameters with surrogate shadowing.
        let d = dist(2.0, 2.0, f64::INFINITY, 3.16, 3.16, 2, 2);
        let cfg = SeriesConfig::default();
        let e = min_snr_pdf(&d, 5, &cfg).unwrap();
        let mut max_rel_of_peak = 0.0f64;
        let peak = (1..=50)
            .map(|i| min_snr_pdf_direct(&d, 5, 0.08 * i as f64))
            .fold(0.0f64, f64::max);
        for i in 1..=50 {
            let x = 0.08 * i as f64;
            let a = e.eval(x);
            let b = min_snr_pdf_direct(&d, 5, x);
            max_rel_of_peak = max_rel_of_peak.max((a - b).abs() / peak);
        }
        assert!(max_rel_of_peak < 1e-4, "max deviation {max_rel_of_peak}");
    }

    #[test]
    fn max_expansion_matches_direct_product_form() {
        let d = dist(2.0, 2.0, f64::INFINITY, 3.16, 0.1, 2, 2);
        let cfg = SeriesConfig::default();
        let e = max_snr_pdf(&d, 2, &cfg).unwrap();
        let peak = (1..=50)
            .map(|i| max_snr_pdf_direct(&d, 2, 0.04 * i as f64))
            .fold(0.0f64, f64::max);
        for i in 1..=50 {
            let x = 0.04 * i as f64;
            let a = e.eval(x);
            let b = max_snr_pdf_direct(&d, 2, x);
            assert!((a - b).abs() / peak < 1e-4, "x={x}: {a} vs {b}");
        }
    }

    #[test]
    fn expansions_normalize() {
        let cfg = SeriesConfig::default();
        let d = dist(1.0, 1.0, 2.0, 1.0, 2.0, 2, 2);
        let e_min = min_snr_pdf(&d, 3, &cfg).unwrap();
        assert!((e_min.integral().to_f64() - 1.0).abs() < 1e-4);
        let e_max = max_snr_pdf(&d, 3, &cfg).unwrap();
        assert!((e_max.integral().to_f64() - 1.0).abs() < 1e-4);
    }

    #[test]
    fn stochastic_ordering() {
        let cfg = SeriesConfig::default();
        let d = dist(1.0, 1.0, 2.0, 1.0, 1.0, 1, 2);
        let e_min = min_snr_pdf(&d, 4, &cfg).unwrap();
        let e_max = max_snr_pdf(&d, 4, &cfg).unwrap();
        for i in 1..=20 {
            let x = 0.4 * i as f64;
            let single_cdf = d.bestrelay_cdf(x);
            let min_cdf = (LogNum::ONE.sub(e_min.integral_from(x))).to_f64();
            let max_cdf = (LogNum::ONE.sub(e_max.integral_from(x))).to_f64();
            assert!(min_cdf >= single_cdf - 1e-6, "x={x}");
            assert!(max_cdf <= single_cdf + 1e-6, "x={x}");
        }
    }

    #[test]
    fn non_integer_shape_rejected() {
        let cfg = SeriesConfig::default();
        let h1 = hop_coefficients(
            &FadingParams::new(1.0, 1.5, 2.0, 1.0).unwrap(),
            1,
            &cfg,
        )
        .unwrap();
        let h2 = hop_coefficients(&FadingParams::new(1.0, 1.0, 2.0, 1.0).unwrap(), 1, &cfg).unwrap();
        let d = DualHopDist::new(h1, h2, 1);
        assert!(matches!(
            min_snr_pdf(&d, 2, &cfg),
            Err(Error::ShapeIntegrality(_))
        ));
    }
}
