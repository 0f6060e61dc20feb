//! Per-hop SNR statistics: build the kappa-mu shadowed coefficient series
//! for a few named channels and print density/CCDF values on a grid.
//!
//! Run with: cargo run --example hop_density

use relsec::channel::{hop_coefficients, hop_ccdf, hop_pdf, FadingParams};
use relsec::config::preset_params;
use relsec::series::SeriesConfig;

fn main() {
    let trunc = SeriesConfig::default();
    let cases = [
        ("rayleigh", 1),
        ("nakagami_m(3)", 1),
        ("rician_k(2)", 1),
        ("shadowed_rician(K=2,m=3)", 1),
        ("shadowed_rician(K=2,m=3)", 2), // two receive antennas
    ];
    for (name, antennas) in cases {
        let (kappa, mu, m) = preset_params(name).unwrap();
        let p = FadingParams::new(kappa, mu, m, 1.0).unwrap();
        let c = hop_coefficients(&p, antennas, &trunc).unwrap();
        println!(
            "{name} (antennas={antennas}): shape={}, rate={:.4}, series terms={}, \
             truncated mass <= {:.2e}{}",
            c.shape_base,
            c.rate,
            c.term_weights.len(),
            c.tail_estimate,
            if c.surrogate_shadowing {
                ", finite surrogate for m = inf"
            } else {
                ""
            }
        );
        println!("  {:>6} {:>12} {:>12}", "snr", "pdf", "ccdf");
        for i in 0..=5 {
            let x = 0.5 * i as f64;
            println!(
                "  {:>6.2} {:>12.6} {:>12.6}",
                x,
                hop_pdf(&c, x),
                hop_ccdf(&c, x)
            );
        }
    }
}
