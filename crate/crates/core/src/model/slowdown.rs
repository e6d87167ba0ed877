use serde::{Deserialize, Serialize};

use super::ModelError;
use crate::scalar::Scalar;

pub const DEFAULT_CLOCK_GHZ: f64 = 5.0;
pub const DEFAULT_GATE_OVERHEAD: f64 = 100.0;
pub const DEFAULT_ALG_CONSTANT_RATIO: f64 = 1.0;

/// Hardware slowdown as the product of a speed ratio and two overheads.
///
/// The speed ratio is the quantum 2-qubit gate time measured in classical
/// clock cycles, `gate_time_ns * clock_ghz`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct SlowdownBreakdown<T> {
    pub gate_time_ns: T,
    #[serde(default = "default_clock")]
    pub classical_clock_ghz: T,
    #[serde(default = "default_overhead")]
    pub gate_overhead: T,
    #[serde(default = "default_ratio")]
    pub alg_constant_ratio: T,
}

fn default_clock<T: Scalar>() -> T {
    T::lit(DEFAULT_CLOCK_GHZ)
}

fn default_overhead<T: Scalar>() -> T {
    T::lit(DEFAULT_GATE_OVERHEAD)
}

fn default_ratio<T: Scalar>() -> T {
    T::lit(DEFAULT_ALG_CONSTANT_RATIO)
}

impl<T: Scalar> SlowdownBreakdown<T> {
    /// Default clock, gate overhead and constant ratio for a given gate time.
    pub fn from_gate_time(gate_time_ns: T) -> Self {
        Self {
            gate_time_ns,
            classical_clock_ghz: default_clock(),
            gate_overhead: default_overhead(),
            alg_constant_ratio: default_ratio(),
        }
    }

    /// `log10` of the composed slowdown (`hws`).
    pub fn compose(&self) -> Result<T, ModelError> {
        let fields = [
            ("gate_time_ns", self.gate_time_ns),
            ("classical_clock_ghz", self.classical_clock_ghz),
            ("gate_overhead", self.gate_overhead),
            ("alg_constant_ratio", self.alg_constant_ratio),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > T::zero()) {
                return Err(ModelError::invalid(name, format!("must be positive, got {v}")));
            }
        }
        Ok(self.gate_time_ns.log10()
            + self.classical_clock_ghz.log10()
            + self.gate_overhead.log10()
            + self.alg_constant_ratio.log10())
    }
}
