//! Dual-hop (min of two hops) SNR distributions and best-relay selection.
//!
//! The end-to-end SNR of a relayed link is the minimum of its two hop SNRs,
//! so the single-relay CDF is `1 - ccdf1 * ccdf2`. Opportunistic selection
//! over P i.i.d. relay branches raises that CDF to the P-th power. The
//! eavesdropper side reuses the same machinery with its own second hop.

use crate::channel::{hop_ccdf, hop_pdf, HopCoefficients};

/// Distribution of the best-relay dual-hop SNR, built from the two hop
/// coefficient sets and the relay count.
#[derive(Debug, Clone)]
pub struct DualHopDist {
    pub first_hop: HopCoefficients,
    pub second_hop: HopCoefficients,
    /// Number of relays P, >= 1.
    pub relays: u32,
}

impl DualHopDist {
    pub fn new(first_hop: HopCoefficients, second_hop: HopCoefficients, relays: u32) -> Self {
        assert!(relays >= 1, "relay count must be >= 1");
        DualHopDist {
            first_hop,
            second_hop,
            relays,
        }
    }

    /// Pr(min of the two hop SNRs > snr).
    fn min_ccdf(&self, snr: f64) -> f64 {
        hop_ccdf(&self.first_hop, snr) * hop_ccdf(&self.second_hop, snr)
    }

    /// Single-relay dual-hop CDF: 1 - ccdf1 * ccdf2.
    pub fn dualhop_cdf(&self, snr: f64) -> f64 {
        (1.0 - self.min_ccdf(snr)).clamp(0.0, 1.0)
    }

    /// Single-relay dual-hop density: f1*ccdf2 + f2*ccdf1.
    pub fn dualhop_pdf(&self, snr: f64) -> f64 {
        hop_pdf(&self.first_hop, snr) * hop_ccdf(&self.second_hop, snr)
            + hop_pdf(&self.second_hop, snr) * hop_ccdf(&self.first_hop, snr)
    }

    /// CDF of the best-relay SNR: [dualhop_cdf]^P.
    pub fn bestrelay_cdf(&self, snr: f64) -> f64 {
        self.dualhop_cdf(snr).powi(self.relays as i32)
    }

    /// Pr(best-relay SNR > snr).
    pub fn bestrelay_ccdf(&self, snr: f64) -> f64 {
        (1.0 - self.bestrelay_cdf(snr)).clamp(0.0, 1.0)
    }

    /// Density of the best-relay SNR: P * f * F^(P-1).
    pub fn bestrelay_pdf(&self, snr: f64) -> f64 {
        let p = self.relays as f64;
        p * self.dualhop_pdf(snr) * self.dualhop_cdf(snr).powi(self.relays as i32 - 1)
    }
}
