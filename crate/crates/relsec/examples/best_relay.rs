//! Dual-hop and best-relay SNR distributions: how opportunistic selection
//! over more relays shifts the end-to-end SNR law.
//!
//! Run with: cargo run --example best_relay

use relsec::channel::{hop_coefficients, FadingParams};
use relsec::dualhop::DualHopDist;
use relsec::quad;
use relsec::series::SeriesConfig;

fn main() {
    let trunc = SeriesConfig::default();
    let first = hop_coefficients(
        &FadingParams::new(1.0, 1.0, 2.0, 10.0).unwrap(),
        1,
        &trunc,
    )
    .unwrap();
    let second = hop_coefficients(
        &FadingParams::new(1.0, 1.0, 2.0, 2.0).unwrap(),
        2,
        &trunc,
    )
    .unwrap();

    println!("{:>7} {:>12} {:>12} {:>12}", "snr", "P=1 cdf", "P=2 cdf", "P=4 cdf");
    let dists: Vec<DualHopDist> = [1, 2, 4]
        .iter()
        .map(|&p| DualHopDist::new(first.clone(), second.clone(), p))
        .collect();
    for i in 0..=8 {
        let x = 0.5 * i as f64;
        println!(
            "{:>7.2} {:>12.6} {:>12.6} {:>12.6}",
            x,
            dists[0].bestrelay_cdf(x),
            dists[1].bestrelay_cdf(x),
            dists[2].bestrelay_cdf(x)
        );
    }

    for (p, d) in [1u32, 2, 4].iter().zip(&dists) {
        let mean = quad::integrate_semi_infinite(|x| x * d.bestrelay_pdf(x), 1e-8).unwrap();
        println!("P={p}: mean best-relay SNR = {mean:.4}");
    }
}
