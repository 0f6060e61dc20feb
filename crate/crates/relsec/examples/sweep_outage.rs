//! Secure outage probability versus main-link SNR: a sweep emitted as CSV,
//! the same output the `relsec sweep` subcommand produces.
//!
//! Run with: cargo run --release --example sweep_outage

use relsec::channel::FadingParams;
use relsec::config::{MethodKind, MetricKind, NetworkConfig, SweepSpec, SweepVariable};
use relsec::montecarlo::{SimMode, SimPlan};
use relsec::series::SeriesConfig;
use relsec::sweep::{rows_to_csv, run_sweep};

fn main() {
    let net = NetworkConfig {
        relays: 2,
        receivers: 2,
        eavesdroppers: 2,
        antennas_rx: 2,
        antennas_eve: 2,
        hop_sp: FadingParams::new(1.0, 1.0, 2.0, 10.0).unwrap(),
        hop_pq: FadingParams::new(1.0, 1.0, 2.0, 1.0).unwrap(),
        hop_pw: FadingParams::new(1.0, 1.0, 2.0, 0.1).unwrap(),
    };
    let spec = SweepSpec {
        variable: SweepVariable::MainSnrDb,
        grid: (0..=6).map(|i| -5.0 + 5.0 * i as f64).collect(),
        metrics: vec![MetricKind::Sopm],
        methods: vec![MethodKind::ClosedForm, MethodKind::Quadrature],
        target_rate: Some(0.5),
    };
    let sim = SimPlan {
        trials: 100_000,
        seed: 7,
        mode: SimMode::AnalysisConsistent,
        net: net.clone(),
    };
    let rows = run_sweep(&net, &spec, &SeriesConfig::default(), &sim, 0.5, false);
    print!("{}", rows_to_csv(&rows, None));
}
