//! One-at-a-time robustness sweeps: perturb a single parameter, re-solve the
//! advantage year for a fixed problem size, and report the shift.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{ModelError, ModelParams, PLQR_FLOOR};
use crate::scalar::Scalar;
use crate::solver::{advantage_year_for_size, Mode};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SensitivityError {
    #[error("invalid perturbation of '{parameter}': {message}")]
    InvalidPerturbation { parameter: String, message: String },
    #[error("spread is undefined: no row has an advantage year")]
    Undefined,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A perturbable field of [`ModelParams`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParameterId {
    Hws,
    QirPct,
    Plqr,
    RirPct,
    ProcessorsLog10,
    CirPct,
    CostFactorLog10,
}

impl ParameterId {
    pub const ALL: [ParameterId; 7] = [
        ParameterId::Hws,
        ParameterId::QirPct,
        ParameterId::Plqr,
        ParameterId::RirPct,
        ParameterId::ProcessorsLog10,
        ParameterId::CirPct,
        ParameterId::CostFactorLog10,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ParameterId::Hws => "hws",
            ParameterId::QirPct => "qir_pct",
            ParameterId::Plqr => "plqr",
            ParameterId::RirPct => "rir_pct",
            ParameterId::ProcessorsLog10 => "processors_log10",
            ParameterId::CirPct => "cir_pct",
            ParameterId::CostFactorLog10 => "cost_factor_log10",
        }
    }

    pub fn from_name(name: &str) -> Option<ParameterId> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }

    /// Stored as log10, so scaling adds `log10(multiplier)`.
    fn is_log10(self) -> bool {
        matches!(
            self,
            ParameterId::Hws | ParameterId::ProcessorsLog10 | ParameterId::CostFactorLog10
        )
    }

    fn get<T: Scalar>(self, p: &ModelParams<T>) -> T {
        match self {
            ParameterId::Hws => p.hws,
            ParameterId::QirPct => p.qir_pct,
            ParameterId::Plqr => p.plqr,
            ParameterId::RirPct => p.rir_pct,
            ParameterId::ProcessorsLog10 => p.processors_log10,
            ParameterId::CirPct => p.cir_pct,
            ParameterId::CostFactorLog10 => p.cost_factor_log10,
        }
    }

    fn set<T: Scalar>(self, p: &mut ModelParams<T>, v: T) {
        let slot = match self {
            ParameterId::Hws => &mut p.hws,
            ParameterId::QirPct => &mut p.qir_pct,
            ParameterId::Plqr => &mut p.plqr,
            ParameterId::RirPct => &mut p.rir_pct,
            ParameterId::ProcessorsLog10 => &mut p.processors_log10,
            ParameterId::CirPct => &mut p.cir_pct,
            ParameterId::CostFactorLog10 => &mut p.cost_factor_log10,
        };
        *slot = v;
    }
}

impl fmt::Display for ParameterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Values to try for one parameter: either replacement values or multipliers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound = "T: Scalar")]
pub struct Perturbation<T> {
    pub parameter: ParameterId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multipliers: Option<Vec<T>>,
}

impl<T: Scalar> Perturbation<T> {
    pub fn values(parameter: ParameterId, values: &[f64]) -> Self {
        Self {
            parameter,
            values: Some(values.iter().map(|v| T::lit(*v)).collect()),
            multipliers: None,
        }
    }

    pub fn multipliers(parameter: ParameterId, multipliers: &[f64]) -> Self {
        Self {
            parameter,
            values: None,
            multipliers: Some(multipliers.iter().map(|v| T::lit(*v)).collect()),
        }
    }
}

/// Rates swept over a grid of %/yr values; scale parameters at ×0.1 and ×10.
pub fn default_perturbations<T: Scalar>() -> Vec<Perturbation<T>> {
    let rates = [0.0, -5.0, -10.0, -20.0, -30.0];
    let scales = [0.1, 10.0];
    vec![
        Perturbation::multipliers(ParameterId::Hws, &scales),
        Perturbation::values(ParameterId::QirPct, &rates),
        Perturbation::multipliers(ParameterId::Plqr, &scales),
        Perturbation::values(ParameterId::RirPct, &rates),
        Perturbation::multipliers(ParameterId::ProcessorsLog10, &scales),
        Perturbation::values(ParameterId::CirPct, &rates),
    ]
}

#[derive(Clone, Debug)]
pub struct SweepSpec<T> {
    pub baseline: ModelParams<T>,
    pub target_size_log10: T,
    pub mode: Mode,
    pub perturbations: Vec<Perturbation<T>>,
}

/// One perturbed parameter set, before solving.
#[derive(Clone, Debug)]
pub struct Case<T> {
    pub parameter: ParameterId,
    pub multiplier: Option<T>,
    pub value: T,
    pub clamped: bool,
    params: ModelParams<T>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct SweepRow<T> {
    /// `None` on the baseline row.
    pub parameter: Option<ParameterId>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub multiplier: Option<T>,
    /// Effective value of the parameter in this row.
    pub value: Option<T>,
    /// The value was raised to the PLQR floor.
    pub clamped: bool,
    pub year: Option<T>,
    pub delta_years: Option<T>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct SweepReport<T> {
    pub target_size_log10: T,
    pub mode: Mode,
    pub baseline_year: Option<T>,
    pub rows: Vec<SweepRow<T>>,
}

impl<T: Scalar> SweepSpec<T> {
    /// Expands and validates every perturbation, in input order.
    pub fn cases(&self) -> Result<Vec<Case<T>>, SensitivityError> {
        let mut out = Vec::new();
        for pert in &self.perturbations {
            let id = pert.parameter;
            let bad = |message: String| SensitivityError::InvalidPerturbation {
                parameter: id.name().to_string(),
                message,
            };
            let base = id.get(&self.baseline);
            let changes: Vec<(Option<T>, T)> = match (&pert.values, &pert.multipliers) {
                (Some(vs), None) => vs.iter().map(|v| (None, *v)).collect(),
                (None, Some(ms)) => {
                    let mut changes = Vec::with_capacity(ms.len());
                    for &m in ms {
                        if !(m.is_finite() && m > T::zero()) {
                            return Err(bad(format!("multiplier {m} must be positive")));
                        }
                        let v = if id.is_log10() { base + m.log10() } else { base * m };
                        changes.push((Some(m), v));
                    }
                    changes
                }
                _ => return Err(bad("give exactly one of 'values' or 'multipliers'".into())),
            };
            for (multiplier, raw) in changes {
                let clamped = id == ParameterId::Plqr && raw < T::lit(PLQR_FLOOR);
                let value = if clamped { T::lit(PLQR_FLOOR) } else { raw };
                let mut params = self.baseline.clone();
                id.set(&mut params, value);
                if let Some((_, message)) = params.diagnostics().into_iter().next() {
                    return Err(bad(message));
                }
                out.push(Case {
                    parameter: id,
                    multiplier,
                    value,
                    clamped,
                    params,
                });
            }
        }
        Ok(out)
    }

    pub fn baseline_year(&self) -> Result<Option<T>, SensitivityError> {
        self.baseline.validate()?;
        Ok(advantage_year_for_size(
            &self.baseline,
            self.target_size_log10,
            self.mode,
        )?)
    }

    pub fn baseline_row(&self, baseline_year: Option<T>) -> SweepRow<T> {
        SweepRow {
            parameter: None,
            multiplier: None,
            value: None,
            clamped: false,
            year: baseline_year,
            delta_years: baseline_year.map(|_| T::zero()),
        }
    }

    pub fn run_case(&self, case: &Case<T>, baseline_year: Option<T>) -> Result<SweepRow<T>, SensitivityError> {
        let year = advantage_year_for_size(&case.params, self.target_size_log10, self.mode)?;
        Ok(SweepRow {
            parameter: Some(case.parameter),
            multiplier: case.multiplier,
            value: Some(case.value),
            clamped: case.clamped,
            year,
            delta_years: match (year, baseline_year) {
                (Some(y), Some(b)) => Some(y - b),
                _ => None,
            },
        })
    }
}

/// Runs every case in parallel; rows keep input order after the baseline row.
pub fn run_sweep<T: Scalar>(spec: &SweepSpec<T>) -> Result<SweepReport<T>, SensitivityError> {
    let cases = spec.cases()?;
    let baseline_year = spec.baseline_year()?;
    let mut rows = vec![spec.baseline_row(baseline_year)];
    let perturbed = cases
        .par_iter()
        .map(|c| spec.run_case(c, baseline_year))
        .collect::<Result<Vec<_>, _>>()?;
    rows.extend(perturbed);
    Ok(SweepReport {
        target_size_log10: spec.target_size_log10,
        mode: spec.mode,
        baseline_year,
        rows,
    })
}

/// Latest minus earliest defined year across the rows.
pub fn spread<T: Scalar>(report: &SweepReport<T>) -> Result<T, SensitivityError> {
    let years = report.rows.iter().filter_map(|r| r.year);
    let (lo, hi) = years.fold((None::<T>, None::<T>), |(lo, hi), y| {
        (Some(lo.map_or(y, |l| l.min(y))), Some(hi.map_or(y, |h| h.max(y))))
    });
    match (lo, hi) {
        (Some(lo), Some(hi)) => Ok(hi - lo),
        _ => Err(SensitivityError::Undefined),
    }
}
