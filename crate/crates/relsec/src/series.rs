use serde::{Deserialize, Serialize};

/// Truncation policy for the infinite series in the analytical path.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct SeriesConfig {
    /// Number of retained terms per infinite series index.
    pub depth: usize,
    /// Relative magnitude below which terms are dropped.
    pub prune: f64,
    /// Hard cap on enumerated/carried term counts.
    pub budget: u64,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        SeriesConfig {
            depth: 25,
            prune: 1e-16,
            budget: 5_000_000,
        }
    }
}

impl SeriesConfig {
    pub fn with_depth(depth: usize) -> Self {
        SeriesConfig {
            depth,
            ..Default::default()
        }
    }
}
