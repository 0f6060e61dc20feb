//! Physical-layer security metrics for dual-hop multicast relay networks
//! over kappa-mu shadowed fading.
//!
//! The crate evaluates the probability of non-zero secrecy multicast
//! capacity (PNSMC), the secure outage probability for multicasting (SOPM),
//! and the ergodic secrecy multicast capacity (ESMC) of a source talking to
//! Q multi-antenna receivers through the best of P relays while W
//! multi-antenna eavesdroppers overhear, with every link kappa-mu shadowed.
//!
//! Three mutually independent evaluation paths are provided and cross-check
//! one another:
//!
//! * a closed-form truncated-series path ([`metrics`] with
//!   [`metrics::Method::ClosedForm`]), built on the expansions in
//!   [`channel`] and [`extremes`];
//! * a semi-analytical path that integrates the exact distribution
//!   functions with adaptive quadrature ([`metrics::Method::Quadrature`]);
//! * a Monte-Carlo simulator that draws fading realizations directly
//!   ([`montecarlo`]).
//!
//! Start from the `examples/` directory: each example exercises one major
//! capability end to end. The `relsec` binary exposes the same machinery as
//! `eval`, `sweep`, `compare`, and `sample` subcommands.

pub mod channel;
pub mod config;
pub mod dualhop;
pub mod error;
pub mod extremes;
pub mod lognum;
pub mod metrics;
pub mod montecarlo;
pub mod quad;
pub mod series;
pub mod specfun;
pub mod sweep;

pub use channel::FadingParams;
pub use config::{NetworkConfig, SweepSpec};
pub use error::{Error, Result};
pub use metrics::{esmc, pnsmc, sopm, MetricResult, Method};
pub use montecarlo::{simulate_metrics, SimPlan};
pub use series::SeriesConfig;
