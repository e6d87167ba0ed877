//! The parameter set and the three curves over time, all in log10(n):
//!
//! * `Adv(t)`: smallest problem size where the quantum machine is at least
//!   as fast as a cost-equivalent classical machine,
//! * `Feas(t)`: largest problem size the projected logical qubits can hold,
//! * `Adv_c(t)`: smallest problem size where quantum total work is cheaper.

mod crossing;
mod qps;
mod slowdown;

use serde::Serialize;
use thiserror::Error;

pub use crossing::SIZE_CAP_LOG10;
pub use qps::QpsKind;
pub use slowdown::{
    SlowdownBreakdown, DEFAULT_ALG_CONSTANT_RATIO, DEFAULT_CLOCK_GHZ, DEFAULT_GATE_OVERHEAD,
};

use crate::expressions::{Bindings, EvalError, Expression, Var, VarSet};
use crate::logvalue::LogValue;
use crate::roadmap::{QubitKind, Roadmap, RoadmapError};
use crate::scalar::Scalar;

/// Error-correction schemes need at least this many physical qubits per logical one.
pub const PLQR_FLOOR: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid parameter '{field}': {message}")]
    Invalid { field: String, message: String },
    #[error("{slot} failed at log10(n) = {log10_n}: {source}")]
    Eval {
        slot: &'static str,
        log10_n: f64,
        source: EvalError,
    },
    #[error(transparent)]
    Roadmap(#[from] RoadmapError),
    #[error("no convergence while scanning log10(n) in [{from}, {to}]: {message}")]
    NoConvergence { from: f64, to: f64, message: String },
}

impl ModelError {
    pub fn invalid(field: impl Into<String>, message: impl Into<String>) -> Self {
        ModelError::Invalid {
            field: field.into(),
            message: message.into(),
        }
    }
}

/// Complete input to the curve computations.
///
/// Rates are signed percent per year; negative values shrink the quantum
/// overhead they apply to.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct ModelParams<T> {
    /// `C(n, procs)`.
    pub classical_runtime: Expression<T>,
    /// `Q(n)`.
    pub quantum_runtime: Expression<T>,
    /// `C_w(n)`, total classical operations.
    pub classical_work: Expression<T>,
    /// `Q_w(n, q)`, total quantum operations.
    pub quantum_work: Expression<T>,
    /// `P(q)`.
    pub connectivity_penalty: Expression<T>,
    pub qps: QpsKind,
    /// log10 of the hardware slowdown.
    pub hws: T,
    pub qir_pct: T,
    pub plqr: T,
    pub rir_pct: T,
    /// log10 of the cost-equivalent classical processor count.
    pub processors_log10: T,
    pub cir_pct: T,
    /// log10 of the per-operation cost factor.
    pub cost_factor_log10: T,
    pub roadmap: Roadmap<T>,
    /// Reference year the starting values describe.
    pub t0: T,
}

impl<T: Scalar> ModelParams<T> {
    /// Parameters with neutral hardware: no slowdown, no rates, unit penalty,
    /// a single processor, and work formulas derived from the runtimes.
    pub fn new(
        classical_runtime: Expression<T>,
        quantum_runtime: Expression<T>,
        qps: QpsKind,
        roadmap: Roadmap<T>,
        t0: T,
    ) -> Self {
        let classical_work = classical_runtime.substitute(Var::Procs, T::one());
        let quantum_work = quantum_runtime.times_var(Var::Q);
        Self {
            classical_runtime,
            quantum_runtime,
            classical_work,
            quantum_work,
            connectivity_penalty: Expression::parse("1", VarSet::PENALTY)
                .expect("constant penalty parses"),
            qps,
            hws: T::zero(),
            qir_pct: T::zero(),
            plqr: T::lit(PLQR_FLOOR),
            rir_pct: T::zero(),
            processors_log10: T::zero(),
            cir_pct: T::zero(),
            cost_factor_log10: T::zero(),
            roadmap,
            t0,
        }
    }

    /// Every violated constraint, as `(field, message)`.
    pub fn diagnostics(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        let scopes = [
            ("classical_runtime", &self.classical_runtime, VarSet::CLASSICAL_RUNTIME),
            ("quantum_runtime", &self.quantum_runtime, VarSet::SIZE_ONLY),
            ("classical_work", &self.classical_work, VarSet::SIZE_ONLY),
            ("quantum_work", &self.quantum_work, VarSet::QUANTUM_WORK),
            ("connectivity_penalty", &self.connectivity_penalty, VarSet::PENALTY),
        ];
        for (field, expr, allowed) in scopes {
            for v in expr.variables().iter() {
                if !allowed.contains(v) {
                    out.push((
                        field.to_string(),
                        format!("references '{v}', allowed variables are {allowed}"),
                    ));
                }
            }
        }
        let finite = [
            ("hws", self.hws),
            ("processors_log10", self.processors_log10),
            ("cost_factor_log10", self.cost_factor_log10),
            ("t0", self.t0),
        ];
        for (field, v) in finite {
            if !v.is_finite() {
                out.push((field.to_string(), format!("must be finite, got {v}")));
            }
        }
        if !(self.plqr.is_finite() && self.plqr >= T::lit(PLQR_FLOOR)) {
            out.push((
                "plqr".to_string(),
                format!("must be at least the floor of {PLQR_FLOOR}, got {}", self.plqr),
            ));
        }
        for (field, v) in [
            ("qir_pct", self.qir_pct),
            ("rir_pct", self.rir_pct),
            ("cir_pct", self.cir_pct),
        ] {
            if !(v.is_finite() && v > T::lit(-100.0)) {
                out.push((
                    field.to_string(),
                    format!("must be a finite percentage above -100, got {v}"),
                ));
            }
        }
        if let Err(e) = self.roadmap.validate() {
            out.push(("roadmap".to_string(), e.to_string()));
        }
        out
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        match self.diagnostics().into_iter().next() {
            None => Ok(()),
            Some((field, message)) => Err(ModelError::Invalid { field, message }),
        }
    }

    fn log10_growth(rate_pct: T, years: T) -> T {
        if years == T::zero() {
            return T::zero();
        }
        years * (T::one() + rate_pct / T::lit(100.0)).log10()
    }

    /// log10 of `max(1, 10^hws * (1 + QIR/100)^(t - t0))`.
    pub fn slowdown_log10_at(&self, t: T) -> T {
        (self.hws + Self::log10_growth(self.qir_pct, t - self.t0)).max(T::zero())
    }

    /// log10 of `max(1, 10^p * (1 + CIR/100)^(t - t0))`.
    pub fn processors_log10_at(&self, t: T) -> T {
        (self.processors_log10 + Self::log10_growth(self.cir_pct, t - self.t0)).max(T::zero())
    }

    /// log10 of `max(1, 10^cf * (1 + CIR/100)^(t - t0))`.
    pub fn cost_factor_log10_at(&self, t: T) -> T {
        (self.cost_factor_log10 + Self::log10_growth(self.cir_pct, t - self.t0)).max(T::zero())
    }

    /// `max(3, PLQR * (1 + RIR/100)^(t - t0))`.
    pub fn plqr_at(&self, t: T) -> T {
        let g = Self::log10_growth(self.rir_pct, t - self.t0);
        (self.plqr * T::lit(10.0).powf(g)).max(T::lit(PLQR_FLOOR))
    }

    /// Logical qubits available at year `t`.
    pub fn logical_qubits_at(&self, t: T) -> Result<T, ModelError> {
        let r = self.roadmap.qubits_at(t)?;
        Ok(match self.roadmap.qubit_kind {
            QubitKind::Physical => r / self.plqr_at(t),
            QubitKind::Logical => r,
        })
    }

    /// `Feas(t)`: log10 of the largest feasible size; `-inf` when nothing fits.
    pub fn feasible_size_at(&self, t: T) -> Result<T, ModelError> {
        let qubits = self.logical_qubits_at(t)?;
        if qubits == T::infinity() {
            return Ok(T::infinity());
        }
        let q = LogValue::from_linear(qubits)
            .ok_or_else(|| ModelError::invalid("roadmap", format!("projected qubits {qubits} at {t}")))?;
        match self.qps.forward(q) {
            Ok(n) => Ok(n.log10_magnitude()),
            Err(EvalError::Overflow) => Ok(T::infinity()),
            Err(source) => Err(ModelError::Eval {
                slot: "qps",
                log10_n: f64::NAN,
                source,
            }),
        }
    }

    /// `Adv(t)`: log10 of the minimum advantageous size; `+inf` when none
    /// exists below [`SIZE_CAP_LOG10`].
    pub fn advantage_size_at(&self, t: T) -> Result<T, ModelError> {
        self.advantage_size_with(self.slowdown_log10_at(t), self.processors_log10_at(t))
    }

    /// `Adv` for an explicit effective slowdown and processor count.
    pub fn advantage_size_with(&self, slowdown_log10: T, procs_log10: T) -> Result<T, ModelError> {
        let procs = LogValue::from_log10(procs_log10);
        crossing::min_advantage_log10(|l| {
            let n = LogValue::from_log10(l);
            let classical = side(
                "classical_runtime",
                l,
                self.classical_runtime
                    .eval_log10(&Bindings::new().with(Var::N, n).with(Var::Procs, procs)),
            )?;
            let quantum = self.quantum_total(l, slowdown_log10, &self.quantum_runtime, "quantum_runtime")?;
            Ok(quantum <= classical)
        })
    }

    /// `Adv_c(t)`: the cost-mode counterpart of [`Self::advantage_size_at`].
    pub fn cost_advantage_size_at(&self, t: T) -> Result<T, ModelError> {
        self.cost_advantage_size_with(self.cost_factor_log10_at(t))
    }

    pub fn cost_advantage_size_with(&self, cost_factor_log10: T) -> Result<T, ModelError> {
        crossing::min_advantage_log10(|l| {
            let n = LogValue::from_log10(l);
            let classical = side(
                "classical_work",
                l,
                self.classical_work.eval_log10(&Bindings::new().with(Var::N, n)),
            )?;
            let quantum = self.quantum_total(l, cost_factor_log10, &self.quantum_work, "quantum_work")?;
            Ok(quantum <= classical)
        })
    }

    /// `factor + body(n, q) + P(q)` in log10, with `q = QPS^-1(n)`.
    fn quantum_total(
        &self,
        l: T,
        factor_log10: T,
        body: &Expression<T>,
        slot: &'static str,
    ) -> Result<T, ModelError> {
        let n = LogValue::from_log10(l);
        let q = match self.qps.inverse(n) {
            Ok(q) => q,
            Err(EvalError::Overflow) => return Ok(T::infinity()),
            Err(source) => {
                return Err(ModelError::Eval {
                    slot: "qps",
                    log10_n: l.to_f64_lossy(),
                    source,
                })
            }
        };
        let b = Bindings::new().with(Var::N, n).with(Var::Q, q);
        let body = side(slot, l, body.eval_log10(&b))?;
        let penalty = side("connectivity_penalty", l, self.connectivity_penalty.eval_log10(&b))?;
        // a zero factor wins over an overflowing one
        if body == T::neg_infinity() || penalty == T::neg_infinity() {
            return Ok(T::neg_infinity());
        }
        Ok(factor_log10 + body + penalty)
    }

    /// Samples `Adv`, `Feas` and `Adv_c` on `t_start, t_start + step, ..., t_end`.
    pub fn sample_curves(&self, t_start: T, t_end: T, step: T) -> Result<CurveSet<T>, ModelError> {
        let years = year_grid(t_start, t_end, step)?;
        let mut set = CurveSet {
            adv: Vec::with_capacity(years.len()),
            feas: Vec::with_capacity(years.len()),
            adv_cost: Vec::with_capacity(years.len()),
        };
        for t in years {
            set.adv.push(CurvePoint::new(t, self.advantage_size_at(t)?));
            set.feas.push(CurvePoint::new(t, self.feasible_size_at(t)?));
            set.adv_cost.push(CurvePoint::new(t, self.cost_advantage_size_at(t)?));
        }
        Ok(set)
    }
}

fn side<T: Scalar>(
    slot: &'static str,
    l: T,
    value: Result<LogValue<T>, EvalError>,
) -> Result<T, ModelError> {
    match value {
        Ok(v) => Ok(v.log10_magnitude()),
        Err(EvalError::Overflow) => Ok(T::infinity()),
        Err(source) => Err(ModelError::Eval {
            slot,
            log10_n: l.to_f64_lossy(),
            source,
        }),
    }
}

/// Years `t_start + k * step` up to `t_end`, rounded to 1e-6 so printed values
/// are exactly the sampled ones.
pub fn year_grid<T: Scalar>(t_start: T, t_end: T, step: T) -> Result<Vec<T>, ModelError> {
    if !(step.is_finite() && step > T::zero()) {
        return Err(ModelError::invalid("step", format!("must be positive, got {step}")));
    }
    if !(t_start.is_finite() && t_end.is_finite() && t_start < t_end) {
        return Err(ModelError::invalid(
            "t_start",
            format!("must be finite and before t_end ({t_start} >= {t_end})"),
        ));
    }
    let count = ((t_end - t_start) / step + T::lit(1e-9)).floor().to_usize().unwrap_or(0);
    let scale = T::lit(1e6);
    Ok((0..=count)
        .map(|k| ((t_start + T::from_usize(k).expect("index fits") * step) * scale).round() / scale)
        .collect())
}

/// One value of a sampled curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct CurveSample<T> {
    pub t: T,
    pub log10_n: T,
}

/// A sample, or a gap where the curve has no finite value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case", bound = "T: Scalar")]
pub enum CurvePoint<T> {
    Sample { t: T, log10_n: T },
    Gap { t: T },
}

impl<T: Scalar> CurvePoint<T> {
    pub fn new(t: T, log10_n: T) -> Self {
        if log10_n.is_finite() {
            CurvePoint::Sample { t, log10_n }
        } else {
            CurvePoint::Gap { t }
        }
    }

    pub fn t(&self) -> T {
        match *self {
            CurvePoint::Sample { t, .. } | CurvePoint::Gap { t } => t,
        }
    }

    pub fn sample(&self) -> Option<CurveSample<T>> {
        match *self {
            CurvePoint::Sample { t, log10_n } => Some(CurveSample { t, log10_n }),
            CurvePoint::Gap { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct CurveSet<T> {
    pub adv: Vec<CurvePoint<T>>,
    pub feas: Vec<CurvePoint<T>>,
    pub adv_cost: Vec<CurvePoint<T>>,
}

impl<T: Scalar> CurveSet<T> {
    pub fn len(&self) -> usize {
        self.adv.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adv.is_empty()
    }
}

#[cfg(test)]
mod tests;
