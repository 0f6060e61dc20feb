//! Scenario configuration: network topology, per-hop fading parameters,
//! named channel presets, sweep definitions, and JSON loading.
//!
//! SNRs are expressed in dB everywhere on the external interface (config
//! files, CLI, CSV) and converted to linear scale on load.

use crate::channel::FadingParams;
use crate::error::{Error, Result};
use crate::montecarlo::{SimMode, SimPlan};
use crate::series::SeriesConfig;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::path::Path;

/// dB to linear power ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Linear power ratio to dB.
pub fn linear_to_db(lin: f64) -> f64 {
    10.0 * lin.log10()
}

/// Topology and per-hop fading of the whole network. Average SNRs are
/// stored linear; construct from dB via [`load_config`] or [`db_to_linear`].
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkConfig {
    /// Relay count P.
    pub relays: u32,
    /// Multicast receiver count Q.
    pub receivers: u32,
    /// Eavesdropper count W.
    pub eavesdroppers: u32,
    /// Antennas per receiver.
    pub antennas_rx: u32,
    /// Antennas per eavesdropper.
    pub antennas_eve: u32,
    /// Source -> relay hop.
    pub hop_sp: FadingParams,
    /// Relay -> receiver hop.
    pub hop_pq: FadingParams,
    /// Relay -> eavesdropper hop.
    pub hop_pw: FadingParams,
}

impl NetworkConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("relays", self.relays),
            ("receivers", self.receivers),
            ("eavesdroppers", self.eavesdroppers),
            ("antennas_rx", self.antennas_rx),
            ("antennas_eve", self.antennas_eve),
        ] {
            if v < 1 {
                return Err(Error::Config(format!("{name} must be >= 1, got {v}")));
            }
        }
        self.hop_sp.validate()?;
        self.hop_pq.validate()?;
        self.hop_pw.validate()?;
        Ok(())
    }
}

/// Named special cases of the kappa-mu shadowed family, as (kappa, mu, m).
pub fn preset_params(name: &str) -> Result<(f64, f64, f64)> {
    let (head, args) = match name.find('(') {
        Some(i) => {
            let inner = name[i + 1..]
                .strip_suffix(')')
                .ok_or_else(|| Error::Config(format!("preset '{name}': missing ')'")))?;
            (name[..i].trim(), Some(inner))
        }
        None => (name.trim(), None),
    };
    let parse_args = |inner: &str, keys: &[&str]| -> Result<Vec<f64>> {
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        if parts.len() != keys.len() {
            return Err(Error::Config(format!(
                "preset '{head}' expects {} argument(s) {keys:?}",
                keys.len()
            )));
        }
        let mut out = vec![f64::NAN; keys.len()];
        for (pos, part) in parts.iter().enumerate() {
            let (idx, lit) = match part.split_once('=') {
                Some((k, v)) => {
                    let k = k.trim();
                    let idx = keys
                        .iter()
                        .position(|&key| key.eq_ignore_ascii_case(k))
                        .ok_or_else(|| {
                            Error::Config(format!("preset '{head}': unknown argument '{k}'"))
                        })?;
                    (idx, v.trim())
                }
                None => (pos, *part),
            };
            out[idx] = lit
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("preset '{head}': bad number '{lit}'")))?;
        }
        Ok(out)
    };
    match head {
        "rayleigh" => Ok((0.0, 1.0, f64::INFINITY)),
        "one_sided_gaussian" => Ok((0.0, 0.5, f64::INFINITY)),
        "nakagami_m" => {
            let a = parse_args(args.unwrap_or_default(), &["m"])?;
            Ok((0.0, a[0], f64::INFINITY))
        }
        "rician_k" => {
            let a = parse_args(args.unwrap_or_default(), &["K"])?;
            Ok((a[0], 1.0, f64::INFINITY))
        }
        "shadowed_rician" => {
            let a = parse_args(args.unwrap_or_default(), &["K", "m"])?;
            Ok((a[0], 1.0, a[1]))
        }
        other => Err(Error::Config(format!(
            "unknown preset '{other}' (known: rayleigh, one_sided_gaussian, \
             nakagami_m(m), rician_k(K), shadowed_rician(K,m))"
        ))),
    }
}

/// Which scalar a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    /// Relay -> receiver average SNR, in dB.
    MainSnrDb,
    /// Relay -> eavesdropper average SNR, in dB.
    EveSnrDb,
    /// Source -> relay average SNR, in dB.
    SourceSnrDb,
    TargetRate,
    Relays,
    Receivers,
    Eavesdroppers,
    AntennasRx,
    AntennasEve,
    KappaSp,
    KappaPq,
    KappaPw,
    MuSp,
    MuPq,
    MuPw,
    MSp,
    MPq,
    MPw,
}

impl SweepVariable {
    pub fn is_count(self) -> bool {
        matches!(
            self,
            SweepVariable::Relays
                | SweepVariable::Receivers
                | SweepVariable::Eavesdroppers
                | SweepVariable::AntennasRx
                | SweepVariable::AntennasEve
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::MainSnrDb => "main_snr_db",
            SweepVariable::EveSnrDb => "eve_snr_db",
            SweepVariable::SourceSnrDb => "source_snr_db",
            SweepVariable::TargetRate => "target_rate",
            SweepVariable::Relays => "relays",
            SweepVariable::Receivers => "receivers",
            SweepVariable::Eavesdroppers => "eavesdroppers",
            SweepVariable::AntennasRx => "antennas_rx",
            SweepVariable::AntennasEve => "antennas_eve",
            SweepVariable::KappaSp => "kappa_sp",
            SweepVariable::KappaPq => "kappa_pq",
            SweepVariable::KappaPw => "kappa_pw",
            SweepVariable::MuSp => "mu_sp",
            SweepVariable::MuPq => "mu_pq",
            SweepVariable::MuPw => "mu_pw",
            SweepVariable::MSp => "m_sp",
            SweepVariable::MPq => "m_pq",
            SweepVariable::MPw => "m_pw",
        }
    }

    /// Returns (network, target_rate) with this variable set to `v`.
    pub fn apply(self, base: &NetworkConfig, target_rate: f64, v: f64) -> (NetworkConfig, f64) {
        let mut net = base.clone();
        let mut rate = target_rate;
        match self {
            SweepVariable::MainSnrDb => net.hop_pq.avg_snr = db_to_linear(v),
            SweepVariable::EveSnrDb => net.hop_pw.avg_snr = db_to_linear(v),
            SweepVariable::SourceSnrDb => net.hop_sp.avg_snr = db_to_linear(v),
            SweepVariable::TargetRate => rate = v,
            SweepVariable::Relays => net.relays = v as u32,
            SweepVariable::Receivers => net.receivers = v as u32,
            SweepVariable::Eavesdroppers => net.eavesdroppers = v as u32,
            SweepVariable::AntennasRx => net.antennas_rx = v as u32,
            SweepVariable::AntennasEve => net.antennas_eve = v as u32,
            SweepVariable::KappaSp => net.hop_sp.kappa = v,
            SweepVariable::KappaPq => net.hop_pq.kappa = v,
            SweepVariable::KappaPw => net.hop_pw.kappa = v,
            SweepVariable::MuSp => net.hop_sp.mu = v,
            SweepVariable::MuPq => net.hop_pq.mu = v,
            SweepVariable::MuPw => net.hop_pw.mu = v,
            SweepVariable::MSp => net.hop_sp.m = v,
            SweepVariable::MPq => net.hop_pq.m = v,
            SweepVariable::MPw => net.hop_pw.m = v,
        }
        (net, rate)
    }
}

/// Which metric a row reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    Pnsmc,
    Sopm,
    Esmc,
}

impl MetricKind {
    pub fn name(self) -> &'static str {
        match self {
            MetricKind::Pnsmc => "pnsmc",
            MetricKind::Sopm => "sopm",
            MetricKind::Esmc => "esmc",
        }
    }
}

/// Which evaluation path a row uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodKind {
    ClosedForm,
    Quadrature,
    MonteCarlo,
}

impl std::str::FromStr for MethodKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed_form" => Ok(MethodKind::ClosedForm),
            "quadrature" => Ok(MethodKind::Quadrature),
            "monte_carlo" => Ok(MethodKind::MonteCarlo),
            other => Err(Error::Config(format!(
                "unknown method '{other}' (closed_form, quadrature, monte_carlo)"
            ))),
        }
    }
}

impl MethodKind {
    pub fn name(self) -> &'static str {
        match self {
            MethodKind::ClosedForm => "closed_form",
            MethodKind::Quadrature => "quadrature",
            MethodKind::MonteCarlo => "monte_carlo",
        }
    }
}

/// One-variable sweep over a grid, producing CSV rows per
/// (value, metric, method).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub grid: Vec<f64>,
    pub metrics: Vec<MetricKind>,
    pub methods: Vec<MethodKind>,
    /// Target secrecy rate xi_s for SOPM; falls back to the document-level
    /// value when absent.
    #[serde(default)]
    pub target_rate: Option<f64>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(Error::Config("sweep.grid must be nonempty".into()));
        }
        if self.grid.len() > 1 {
            let inc = self.grid.windows(2).all(|w| w[1] > w[0]);
            let dec = self.grid.windows(2).all(|w| w[1] < w[0]);
            if !inc && !dec {
                return Err(Error::Config(format!(
                    "sweep.grid must be strictly monotone, got {:?}",
                    self.grid
                )));
            }
        }
        if self.variable.is_count() {
            for &v in &self.grid {
                if v < 1.0 || v.fract() != 0.0 {
                    return Err(Error::Config(format!(
                        "sweep.grid: '{}' requires positive integers, got {v}",
                        self.variable.name()
                    )));
                }
            }
        }
        if self.metrics.is_empty() {
            return Err(Error::Config("sweep.metrics must be nonempty".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::Config("sweep.methods must be nonempty".into()));
        }
        if let Some(r) = self.target_rate {
            if !(r > 0.0) {
                return Err(Error::Config(format!(
                    "sweep.target_rate must be > 0, got {r}"
                )));
            }
        }
        Ok(())
    }
}

/// Everything a run needs, parsed from one JSON document.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub network: NetworkConfig,
    pub sweep: Option<SweepSpec>,
    pub series: SeriesConfig,
    pub sim: SimPlan,
    /// Document-level target secrecy rate (default 0.5 bits/s/Hz).
    pub target_rate: f64,
}

fn expect_obj<'a>(v: &'a Value, what: &str) -> Result<&'a serde_json::Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::Config(format!("'{what}' must be a JSON object")))
}

fn check_keys(obj: &serde_json::Map<String, Value>, what: &str, allowed: &[&str]) -> Result<()> {
    for k in obj.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(Error::Config(format!(
                "unknown key '{k}' in '{what}' (allowed: {allowed:?})"
            )));
        }
    }
    Ok(())
}

fn get_f64(obj: &serde_json::Map<String, Value>, what: &str, key: &str) -> Result<f64> {
    obj.get(key)
        .ok_or_else(|| Error::Config(format!("'{what}' is missing required key '{key}'")))?
        .as_f64()
        .ok_or_else(|| Error::Config(format!("'{what}.{key}' must be a number")))
}

/// Parses one hop object: either explicit {kappa, mu, m, avg_snr_db} (m may
/// be the string "inf"), a {preset, avg_snr_db} pair, or {avg_snr_db} alone
/// when a network-level preset supplies the shape.
fn parse_hop(v: &Value, what: &str, net_preset: Option<(f64, f64, f64)>) -> Result<FadingParams> {
    let obj = expect_obj(v, what)?;
    check_keys(obj, what, &["kappa", "mu", "m", "preset", "avg_snr_db"])?;
    let snr_db = get_f64(obj, what, "avg_snr_db")?;
    let avg_snr = db_to_linear(snr_db);
    let (kappa, mu, m) = if let Some(p) = obj.get("preset") {
        if obj.contains_key("kappa") || obj.contains_key("mu") || obj.contains_key("m") {
            return Err(Error::Config(format!(
                "'{what}': give either 'preset' or explicit kappa/mu/m, not both"
            )));
        }
        let name = p
            .as_str()
            .ok_or_else(|| Error::Config(format!("'{what}.preset' must be a string")))?;
        preset_params(name)?
    } else if obj.contains_key("kappa") || obj.contains_key("mu") || obj.contains_key("m") {
        let m = match obj
            .get("m")
            .ok_or_else(|| Error::Config(format!("'{what}' is missing required key 'm'")))?
        {
            Value::String(s) if s.eq_ignore_ascii_case("inf") => f64::INFINITY,
            other => other
                .as_f64()
                .ok_or_else(|| Error::Config(format!("'{what}.m' must be a number or \"inf\"")))?,
        };
        (get_f64(obj, what, "kappa")?, get_f64(obj, what, "mu")?, m)
    } else if let Some(p) = net_preset {
        p
    } else {
        return Err(Error::Config(format!(
            "'{what}' needs kappa/mu/m, a 'preset', or a network-level preset"
        )));
    };
    FadingParams::new(kappa, mu, m, avg_snr)
        .map_err(|e| Error::Config(format!("'{what}': {e}")))
}

fn parse_network(v: &Value) -> Result<NetworkConfig> {
    let obj = expect_obj(v, "network")?;
    check_keys(
        obj,
        "network",
        &[
            "relays",
            "receivers",
            "eavesdroppers",
            "antennas_rx",
            "antennas_eve",
            "preset",
            "hop_sp",
            "hop_pq",
            "hop_pw",
        ],
    )?;
    let count = |key: &str| -> Result<u32> {
        let v = get_f64(obj, "network", key)?;
        if v >= 1.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
            Ok(v as u32)
        } else {
            Err(Error::Config(format!(
                "'network.{key}' must be a positive integer, got {v}"
            )))
        }
    };
    let net_preset = match obj.get("preset") {
        Some(p) => Some(preset_params(p.as_str().ok_or_else(|| {
            Error::Config("'network.preset' must be a string".into())
        })?)?),
        None => None,
    };
    let hop = |key: &str| -> Result<FadingParams> {
        let v = obj
            .get(key)
            .ok_or_else(|| Error::Config(format!("'network' is missing required key '{key}'")))?;
        parse_hop(v, &format!("network.{key}"), net_preset)
    };
    let net = NetworkConfig {
        relays: count("relays")?,
        receivers: count("receivers")?,
        eavesdroppers: count("eavesdroppers")?,
        antennas_rx: count("antennas_rx")?,
        antennas_eve: count("antennas_eve")?,
        hop_sp: hop("hop_sp")?,
        hop_pq: hop("hop_pq")?,
        hop_pw: hop("hop_pw")?,
    };
    net.validate()
        .map_err(|e| Error::Config(format!("network: {e}")))?;
    Ok(net)
}

/// Loads and validates a full run configuration from a JSON file.
pub fn load_config(path: impl AsRef<Path>) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path.as_ref())?;
    parse_config(&text)
}

/// [`load_config`] on an in-memory JSON document.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let doc: Value =
        serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid JSON: {e}")))?;
    let obj = expect_obj(&doc, "document root")?;
    check_keys(
        obj,
        "document root",
        &["network", "sweep", "series", "sim", "target_rate"],
    )?;
    let network = parse_network(
        obj.get("network")
            .ok_or_else(|| Error::Config("missing required key 'network'".into()))?,
    )?;
    let sweep = match obj.get("sweep") {
        Some(v) => {
            let s: SweepSpec = serde_json::from_value(v.clone())
                .map_err(|e| Error::Config(format!("sweep: {e}")))?;
            s.validate()?;
            Some(s)
        }
        None => None,
    };
    let series = match obj.get("series") {
        Some(v) => {
            let s: SeriesConfig = serde_json::from_value(v.clone())
                .map_err(|e| Error::Config(format!("series: {e}")))?;
            if s.depth < 1 || !(s.prune > 0.0 && s.prune < 1.0) || s.budget < 1 {
                return Err(Error::Config(format!(
                    "series: depth >= 1, 0 < prune < 1, budget >= 1 required, got {s:?}"
                )));
            }
            s
        }
        None => SeriesConfig::default(),
    };
    let target_rate = match obj.get("target_rate") {
        Some(v) => {
            let r = v
                .as_f64()
                .ok_or_else(|| Error::Config("'target_rate' must be a number".into()))?;
            if !(r > 0.0) {
                return Err(Error::Config(format!("'target_rate' must be > 0, got {r}")));
            }
            r
        }
        None => 0.5,
    };
    let sim = match obj.get("sim") {
        Some(v) => {
            let o = expect_obj(v, "sim")?;
            check_keys(o, "sim", &["trials", "seed", "mode"])?;
            let trials = match o.get("trials") {
                Some(t) => {
                    let t = t
                        .as_u64()
                        .filter(|&t| t >= 1)
                        .ok_or_else(|| Error::Config("'sim.trials' must be an integer >= 1".into()))?;
                    t
                }
                None => 1_000_000,
            };
            let seed = match o.get("seed") {
                Some(s) => s
                    .as_u64()
                    .ok_or_else(|| Error::Config("'sim.seed' must be a nonnegative integer".into()))?,
                None => 0,
            };
            let mode = match o.get("mode") {
                Some(m) => serde_json::from_value(m.clone())
                    .map_err(|e| Error::Config(format!("sim.mode: {e}")))?,
                None => SimMode::AnalysisConsistent,
            };
            SimPlan {
                trials,
                seed,
                mode,
                net: network.clone(),
            }
        }
        None => SimPlan {
            trials: 1_000_000,
            seed: 0,
            mode: SimMode::AnalysisConsistent,
            net: network.clone(),
        },
    };
    Ok(RunConfig {
        network,
        sweep,
        series,
        sim,
        target_rate,
    })
}
