//! Parameter sweeps to CSV and three-method comparison reports.
//!
//! Sweep points are dispatched to a worker pool but emitted in grid order,
//! and every numeric cell is formatted deterministically, so identical
//! configurations and seeds produce byte-identical CSV (once the optional
//! timestamp header and wall-clock column are suppressed).

use crate::config::{MethodKind, MetricKind, NetworkConfig, RunConfig, SweepSpec};
use crate::error::{Error, Result};
use crate::metrics::{esmc, pnsmc, sopm, Method, MetricResult};
use crate::montecarlo::SimPlan;
use crate::series::SeriesConfig;
use rayon::prelude::*;
use std::fmt::Write as _;
use std::time::Instant;

/// One output row of a sweep.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub variable: &'static str,
    pub value: f64,
    pub metric: MetricKind,
    pub method: MethodKind,
    /// Metric value; `None` when the point failed.
    pub result: Option<f64>,
    /// Monte-Carlo standard error or closed-form tail bound.
    pub stderr_or_tail: Option<f64>,
    pub terms_used: u64,
    /// Wall-clock time of this evaluation; zeroed when timing is suppressed
    /// for byte-reproducible output.
    pub wall_ms: u64,
    pub error: Option<String>,
}

fn evaluate(
    net: &NetworkConfig,
    metric: MetricKind,
    method: &Method,
    target_rate: f64,
    series: &SeriesConfig,
) -> Result<MetricResult> {
    match metric {
        MetricKind::Pnsmc => pnsmc(net, series, method),
        MetricKind::Sopm => sopm(net, target_rate, series, method),
        MetricKind::Esmc => esmc(net, series, method),
    }
}

fn to_method(kind: MethodKind, sim: &SimPlan) -> Method {
    match kind {
        MethodKind::ClosedForm => Method::ClosedForm,
        MethodKind::Quadrature => Method::Quadrature,
        MethodKind::MonteCarlo => Method::MonteCarlo {
            trials: sim.trials,
            seed: sim.seed,
        },
    }
}

/// Runs a sweep; one row per (grid value, metric, method), in that order.
/// Per-point failures become rows with the `error` column set.
pub fn run_sweep(
    net: &NetworkConfig,
    spec: &SweepSpec,
    series: &SeriesConfig,
    sim: &SimPlan,
    default_target: f64,
    record_wall: bool,
) -> Vec<SweepRow> {
    let target = spec.target_rate.unwrap_or(default_target);
    let points: Vec<(f64, MetricKind, MethodKind)> = spec
        .grid
        .iter()
        .flat_map(|&v| {
            spec.metrics.iter().flat_map(move |&m| {
                spec.methods.iter().map(move |&k| (v, m, k))
            })
        })
        .collect();
    points
        .into_par_iter()
        .map(|(v, metric, kind)| {
            let (point_net, point_target) = spec.variable.apply(net, target, v);
            let start = Instant::now();
            let outcome = point_net.validate().and_then(|_| {
                evaluate(
                    &point_net,
                    metric,
                    &to_method(kind, sim),
                    point_target,
                    series,
                )
            });
            let wall_ms = if record_wall {
                start.elapsed().as_millis() as u64
            } else {
                0
            };
            match outcome {
                Ok(r) => SweepRow {
                    variable: spec.variable.name(),
                    value: v,
                    metric,
                    method: kind,
                    result: Some(r.value),
                    stderr_or_tail: Some(r.tail_estimate),
                    terms_used: r.terms_used,
                    wall_ms,
                    error: None,
                },
                Err(e) => SweepRow {
                    variable: spec.variable.name(),
                    value: v,
                    metric,
                    method: kind,
                    result: None,
                    stderr_or_tail: None,
                    terms_used: 0,
                    wall_ms,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect()
}

/// [`run_sweep`] driven by a full [`RunConfig`]; errors if it has no sweep.
pub fn run_config_sweep(cfg: &RunConfig, record_wall: bool) -> Result<Vec<SweepRow>> {
    let spec = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| Error::Config("config has no 'sweep' section".into()))?;
    Ok(run_sweep(
        &cfg.network,
        spec,
        &cfg.series,
        &cfg.sim,
        cfg.target_rate,
        record_wall,
    ))
}

fn csv_escape(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x}")).unwrap_or_default()
}

/// Renders rows as RFC-4180-style CSV with a mandatory header row and an
/// optional leading timestamp comment line.
pub fn rows_to_csv(rows: &[SweepRow], timestamp: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(ts) = timestamp {
        let _ = writeln!(out, "# generated: {ts}");
    }
    out.push_str("variable,value,metric,method,result,stderr_or_tail,terms_used,wall_ms,error\r\n");
    for r in rows {
        let _ = write!(
            out,
            "{},{},{},{},{},{},{},{},{}\r\n",
            r.variable,
            r.value,
            r.metric.name(),
            r.method.name(),
            fmt_opt(r.result),
            fmt_opt(r.stderr_or_tail),
            r.terms_used,
            r.wall_ms,
            csv_escape(r.error.as_deref().unwrap_or("")),
        );
    }
    out
}

/// One metric's three-method comparison.
#[derive(Debug, Clone)]
pub struct CompareLine {
    pub metric: MetricKind,
    /// `None` when the closed form is unavailable (non-integer shapes).
    pub closed_form: Option<f64>,
    pub quadrature: f64,
    pub monte_carlo: f64,
    pub mc_stderr: f64,
    pub pass: bool,
    pub notes: Vec<String>,
}

/// Agreement report across the three methods at one configuration.
#[derive(Debug, Clone)]
pub struct CompareReport {
    pub lines: Vec<CompareLine>,
    pub pass: bool,
}

/// Closed form vs quadrature absolute tolerance for probabilities.
pub const CF_TOL_PROB: f64 = 5e-4;
/// Closed form vs quadrature absolute tolerance for ESMC, bits/s/Hz.
pub const CF_TOL_BITS: f64 = 5e-3;
/// Two-sided 99% normal quantile for the Monte-Carlo confidence band.
pub const Z_99: f64 = 2.5758293035489004;

/// Evaluates every metric by all three methods and checks agreement:
/// |closed_form - quadrature| within tolerance, and quadrature inside the
/// Monte-Carlo 99% confidence band.
pub fn run_compare(cfg: &RunConfig) -> Result<CompareReport> {
    let mut lines = Vec::new();
    for metric in [MetricKind::Pnsmc, MetricKind::Sopm, MetricKind::Esmc] {
        let tol = if metric == MetricKind::Esmc {
            CF_TOL_BITS
        } else {
            CF_TOL_PROB
        };
        let quad = evaluate(
            &cfg.network,
            metric,
            &Method::Quadrature,
            cfg.target_rate,
            &cfg.series,
        )?;
        let mc = evaluate(
            &cfg.network,
            metric,
            &Method::MonteCarlo {
                trials: cfg.sim.trials,
                seed: cfg.sim.seed,
            },
            cfg.target_rate,
            &cfg.series,
        )?;
        let mut notes = Vec::new();
        let mut pass = true;
        let closed = match evaluate(
            &cfg.network,
            metric,
            &Method::ClosedForm,
            cfg.target_rate,
            &cfg.series,
        ) {
            Ok(r) => {
                if (r.value - quad.value).abs() >= tol {
                    pass = false;
                    notes.push(format!(
                        "closed form {} vs quadrature {} exceeds tolerance {tol}",
                        r.value, quad.value
                    ));
                }
                Some(r.value)
            }
            Err(Error::ShapeIntegrality(msg)) => {
                notes.push(format!("closed form unavailable: {msg}"));
                None
            }
            Err(e) => return Err(e),
        };
        // Degenerate stderr (probability estimate 0 or 1) gets a tiny
        // floor so the band is not a single point.
        let band = Z_99 * mc.tail_estimate.max(1.0 / cfg.sim.trials as f64);
        if (mc.value - quad.value).abs() > band {
            pass = false;
            notes.push(format!(
                "quadrature {} outside Monte-Carlo 99% band {} +- {band}",
                quad.value, mc.value
            ));
        }
        lines.push(CompareLine {
            metric,
            closed_form: closed,
            quadrature: quad.value,
            monte_carlo: mc.value,
            mc_stderr: mc.tail_estimate,
            pass,
            notes,
        });
    }
    let pass = lines.iter().all(|l| l.pass);
    Ok(CompareReport { lines, pass })
}

/// Human-readable rendering of a comparison report.
pub fn render_compare(report: &CompareReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<6} {:>14} {:>14} {:>14} {:>12}  status",
        "metric", "closed_form", "quadrature", "monte_carlo", "mc_stderr"
    );
    for l in &report.lines {
        let cf = l
            .closed_form
            .map(|v| format!("{v:.8}"))
            .unwrap_or_else(|| "n/a".into());
        let _ = writeln!(
            out,
            "{:<6} {:>14} {:>14.8} {:>14.8} {:>12.3e}  {}",
            l.metric.name(),
            cf,
            l.quadrature,
            l.monte_carlo,
            l.mc_stderr,
            if l.pass { "pass" } else { "FAIL" }
        );
        for n in &l.notes {
            let _ = writeln!(out, "       note: {n}");
        }
    }
    let _ = writeln!(out, "overall: {}", if report.pass { "pass" } else { "FAIL" });
    out
}
