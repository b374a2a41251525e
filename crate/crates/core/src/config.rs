//! Read-only run configuration: numeral budget, search caps and extra sample points.

use serde::{Deserialize, Serialize};

use crate::numeral::{Arith, DEFAULT_BUDGET_BITS};

/// Environment variable overriding the numeral bit budget.
pub const BUDGET_ENV: &str = "BOUNDCALC_BUDGET_BITS";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Config {
    /// Bits an exact numeral may occupy before switching to towers.
    pub budget_bits: u64,
    /// Largest power exponent tried by the power relations.
    pub power_cap: u32,
    /// Largest iterate tried when comparing generic bounds under iteration.
    pub it_depth_cap: u32,
    /// Number of iterated logarithms kept in the Type 1 base set.
    pub log_cap: u32,
    /// Deepest midpoint generation accepted.
    pub max_depth: u32,
    /// Partition oracle: largest `n`.
    pub n_max: u64,
    /// Superadditivity sweep: largest `a + b`.
    pub s_max: u64,
    /// Add `2^k + r` probes so periodic behaviour shows up at large scales.
    pub residue_probes: bool,
    /// Extra sample points, in numeral syntax (`123`, `2^70`, `T(5)`).
    pub extra_points: Vec<String>,
}

impl Default for Config {
    fn default() -> Self {
        let budget_bits = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_BUDGET_BITS);
        Config {
            budget_bits,
            power_cap: 8,
            it_depth_cap: 6,
            log_cap: 4,
            max_depth: 6,
            n_max: 10,
            s_max: 512,
            residue_probes: true,
            extra_points: Vec::new(),
        }
    }
}

impl Config {
    pub fn arith(&self) -> Arith {
        Arith::new(self.budget_bits)
    }
}
