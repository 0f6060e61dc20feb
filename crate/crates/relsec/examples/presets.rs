//! Ergodic secrecy capacity across the classic fading special cases
//! (Rayleigh, Nakagami-m, Rician, shadowed Rician) at one topology.
//!
//! Run with: cargo run --release --example presets

use relsec::channel::FadingParams;
use relsec::config::{db_to_linear, preset_params, NetworkConfig};
use relsec::metrics::{esmc, Method};
use relsec::series::SeriesConfig;

fn main() {
    let trunc = SeriesConfig::default();
    let presets = [
        "rayleigh",
        "nakagami_m(2)",
        "rician_k(2)",
        "shadowed_rician(K=2,m=3)",
    ];
    println!("{:>28} {:>12} {:>12}", "preset", "esmc@0dB", "esmc@10dB");
    for name in presets {
        let (kappa, mu, m) = preset_params(name).unwrap();
        let hop = |snr_db: f64| FadingParams::new(kappa, mu, m, db_to_linear(snr_db)).unwrap();
        let mut vals = Vec::new();
        for main_db in [0.0, 10.0] {
            let net = NetworkConfig {
                relays: 2,
                receivers: 2,
                eavesdroppers: 2,
                antennas_rx: 2,
                antennas_eve: 2,
                hop_sp: hop(10.0),
                hop_pq: hop(main_db),
                hop_pw: hop(-10.0),
            };
            vals.push(esmc(&net, &trunc, &Method::Quadrature).unwrap().value);
        }
        println!("{:>28} {:>12.6} {:>12.6}", name, vals[0], vals[1]);
    }
}
