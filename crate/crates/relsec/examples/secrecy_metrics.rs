//! All three secrecy metrics by all three independent evaluation paths at
//! one network configuration, with their mutual agreement.
//!
//! Run with: cargo run --release --example secrecy_metrics

use relsec::channel::FadingParams;
use relsec::config::NetworkConfig;
use relsec::metrics::{esmc, pnsmc, sopm, Method};
use relsec::series::SeriesConfig;

fn main() {
    let net = NetworkConfig {
        relays: 2,
        receivers: 2,
        eavesdroppers: 2,
        antennas_rx: 2,
        antennas_eve: 2,
        hop_sp: FadingParams::new(1.0, 1.0, 2.0, 10.0).unwrap(),
        hop_pq: FadingParams::new(1.0, 1.0, 2.0, 3.16).unwrap(),
        hop_pw: FadingParams::new(1.0, 1.0, 2.0, 0.1).unwrap(),
    };
    let trunc = SeriesConfig::default();
    let target_rate = 0.5;
    let methods = [
        Method::ClosedForm,
        Method::Quadrature,
        Method::MonteCarlo {
            trials: 200_000,
            seed: 42,
        },
    ];

    println!(
        "{:>12} {:>14} {:>14} {:>14}",
        "metric", "closed_form", "quadrature", "monte_carlo"
    );
    for (name, f) in [
        ("pnsmc", Box::new(|m: &Method| pnsmc(&net, &trunc, m)) as Box<dyn Fn(&Method) -> _>),
        ("sopm", Box::new(|m: &Method| sopm(&net, target_rate, &trunc, m))),
        ("esmc", Box::new(|m: &Method| esmc(&net, &trunc, m))),
    ] {
        let vals: Vec<f64> = methods.iter().map(|m| f(m).unwrap().value).collect();
        println!(
            "{:>12} {:>14.8} {:>14.8} {:>14.8}",
            name, vals[0], vals[1], vals[2]
        );
    }
}
