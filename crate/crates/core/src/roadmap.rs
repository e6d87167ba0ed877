//! Vendor qubit roadmaps and the projected qubit count `R(t)`.
//!
//! Between milestones the count follows either a geometric (log-linear) or a
//! straight-line segment. Outside the milestone range the nearest segment's
//! rate is continued: the final segment forward, the first one backward.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;

/// Queries further than this before the first milestone are rejected.
pub const MAX_YEARS_BEFORE_FIRST: f64 = 50.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RoadmapError {
    #[error("invalid roadmap '{label}': {reason}")]
    Invalid { label: String, reason: String },
    #[error("invalid edit: {0}")]
    InvalidEdit(String),
    #[error("year {year} is more than {MAX_YEARS_BEFORE_FIRST} years before the first milestone ({first})")]
    YearOutOfRange { year: f64, first: f64 },
    #[error("malformed roadmap document: {0}")]
    Format(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Extrapolation {
    Exponential,
    Linear,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QubitKind {
    Physical,
    Logical,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct RoadmapPoint<T> {
    pub year: T,
    pub qubits: T,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub source_note: String,
}

impl<T: Scalar> RoadmapPoint<T> {
    pub fn new(year: T, qubits: T) -> Self {
        Self {
            year,
            qubits,
            source_note: String::new(),
        }
    }
}

/// Dated qubit milestones plus the rule for filling in the gaps.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Roadmap<T> {
    pub label: String,
    pub qubit_kind: QubitKind,
    pub extrapolation: Extrapolation,
    pub points: Vec<RoadmapPoint<T>>,
}

impl<T: Scalar> Roadmap<T> {
    pub fn new(
        label: impl Into<String>,
        qubit_kind: QubitKind,
        extrapolation: Extrapolation,
        points: Vec<RoadmapPoint<T>>,
    ) -> Result<Self, RoadmapError> {
        let rm = Self {
            label: label.into(),
            qubit_kind,
            extrapolation,
            points,
        };
        rm.validate()?;
        Ok(rm)
    }

    /// Checks: at least two points, strictly increasing years, positive counts.
    pub fn validate(&self) -> Result<(), RoadmapError> {
        let invalid = |reason: String| RoadmapError::Invalid {
            label: self.label.clone(),
            reason,
        };
        if self.points.len() < 2 {
            return Err(invalid(format!(
                "needs at least 2 points, has {}",
                self.points.len()
            )));
        }
        for (i, p) in self.points.iter().enumerate() {
            if !p.year.is_finite() {
                return Err(invalid(format!("point {i}: year is not finite")));
            }
            if !(p.qubits.is_finite() && p.qubits > T::zero()) {
                return Err(invalid(format!(
                    "point {i}: qubit count {} is not strictly positive",
                    p.qubits
                )));
            }
        }
        for (i, w) in self.points.windows(2).enumerate() {
            if w[1].year <= w[0].year {
                return Err(invalid(format!(
                    "years must be strictly increasing: point {} ({}) follows point {i} ({})",
                    i + 1,
                    w[1].year,
                    w[0].year
                )));
            }
        }
        Ok(())
    }

    /// Projected qubit count at year `t`.
    ///
    /// Linear roadmaps extrapolated backward past zero are clamped to zero.
    pub fn qubits_at(&self, t: T) -> Result<T, RoadmapError> {
        self.validate()?;
        let first = self.points[0].year;
        if t < first - T::lit(MAX_YEARS_BEFORE_FIRST) {
            return Err(RoadmapError::YearOutOfRange {
                year: t.to_f64_lossy(),
                first: first.to_f64_lossy(),
            });
        }
        // segment whose rate applies at t
        let last = self.points.len() - 2;
        let seg = self
            .points
            .windows(2)
            .position(|w| t <= w[1].year)
            .unwrap_or(last);
        let (a, b) = (&self.points[seg], &self.points[seg + 1]);
        if t == a.year {
            return Ok(a.qubits);
        }
        if t == b.year {
            return Ok(b.qubits);
        }
        let frac = (t - a.year) / (b.year - a.year);
        Ok(match self.extrapolation {
            Extrapolation::Exponential => {
                let log_a = a.qubits.log10();
                T::lit(10.0).powf(log_a + frac * (b.qubits.log10() - log_a))
            }
            Extrapolation::Linear => (a.qubits + frac * (b.qubits - a.qubits)).max(T::zero()),
        })
    }

    /// Moves point `index` to `(year, qubits)`; the list must stay ordered.
    pub fn with_point_moved(&self, index: usize, year: T, qubits: T) -> Result<Self, RoadmapError> {
        if index >= self.points.len() {
            return Err(RoadmapError::InvalidEdit(format!(
                "no point {index} (roadmap has {})",
                self.points.len()
            )));
        }
        let mut next = self.clone();
        next.points[index].year = year;
        next.points[index].qubits = qubits;
        next.checked_edit()
    }

    /// Inserts a milestone at its year-ordered position.
    pub fn with_point_inserted(&self, point: RoadmapPoint<T>) -> Result<Self, RoadmapError> {
        let mut next = self.clone();
        let at = next.points.partition_point(|p| p.year < point.year);
        next.points.insert(at, point);
        next.checked_edit()
    }

    pub fn with_point_removed(&self, index: usize) -> Result<Self, RoadmapError> {
        if index >= self.points.len() {
            return Err(RoadmapError::InvalidEdit(format!("no point {index}")));
        }
        let mut next = self.clone();
        next.points.remove(index);
        next.checked_edit()
    }

    fn checked_edit(self) -> Result<Self, RoadmapError> {
        match self.validate() {
            Ok(()) => Ok(self),
            Err(RoadmapError::Invalid { reason, .. }) => Err(RoadmapError::InvalidEdit(reason)),
            Err(e) => Err(e),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, RoadmapError> {
        let rm: Self = toml::from_str(text).map_err(|e| RoadmapError::Format(e.to_string()))?;
        rm.validate()?;
        Ok(rm)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("roadmap serializes to TOML")
    }
}
