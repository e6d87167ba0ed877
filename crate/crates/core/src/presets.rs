//! Bundled problem, hardware and roadmap presets.
//!
//! The data lives in TOML files under `data/`, compiled into the binary. A
//! directory with the same layout (`problems.toml`, `hardware.toml`,
//! `roadmaps/*.toml`) can be loaded instead to use edited roadmaps.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expressions::{Expression, VarSet};
use crate::model::{ModelParams, QpsKind, SlowdownBreakdown};
use crate::roadmap::Roadmap;
use crate::scalar::Scalar;

const PROBLEMS: &str = include_str!("../data/problems.toml");
const HARDWARE: &str = include_str!("../data/hardware.toml");
const ROADMAPS: [(&str, &str); 5] = [
    ("google.toml", include_str!("../data/roadmaps/google.toml")),
    ("ibm.toml", include_str!("../data/roadmaps/ibm.toml")),
    ("ionq.toml", include_str!("../data/roadmaps/ionq.toml")),
    ("pasqal.toml", include_str!("../data/roadmaps/pasqal.toml")),
    ("quera.toml", include_str!("../data/roadmaps/quera.toml")),
];

/// Largest accepted gap between a stored `hws` and the composed gate-time slowdown.
pub const HWS_TOLERANCE: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PresetError {
    #[error("corrupt preset data in {file}: {message}")]
    Corrupt { file: String, message: String },
    #[error("unknown {kind} preset '{name}' (available: {available})")]
    Unknown {
        kind: &'static str,
        name: String,
        available: String,
    },
    #[error("invalid override '{field}': {message}")]
    InvalidOverride { field: String, message: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemPreset {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub classical_runtime: String,
    pub quantum_runtime: String,
    pub classical_work: String,
    pub quantum_work: String,
    pub qps: QpsKind,
    /// Runtimes are placeholders rather than published complexities.
    #[serde(default)]
    pub illustrative: bool,
    #[serde(default)]
    pub notes: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound = "T: Scalar")]
pub struct HardwarePreset<T> {
    pub name: String,
    pub gate_time_ns: T,
    pub hws: T,
    pub qir_pct: T,
    pub connectivity_penalty: String,
    pub plqr: T,
    pub rir_pct: T,
    pub cir_pct: T,
    pub processors_log10: T,
    /// Defaults to `hws + processors_log10`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost_factor_log10: Option<T>,
    /// Label of the roadmap this hardware follows.
    pub roadmap: String,
}

/// Parsed formulas of a problem.
pub struct ProblemExpressions<T> {
    pub classical_runtime: Expression<T>,
    pub quantum_runtime: Expression<T>,
    pub classical_work: Expression<T>,
    pub quantum_work: Expression<T>,
}

impl ProblemPreset {
    /// Parses every formula; errors name the offending field.
    pub fn expressions<T: Scalar>(&self) -> Result<ProblemExpressions<T>, (String, String)> {
        let parse = |field: &str, src: &str, vars: VarSet| {
            Expression::parse(src, vars).map_err(|e| (field.to_string(), e.to_string()))
        };
        Ok(ProblemExpressions {
            classical_runtime: parse(
                "classical_runtime",
                &self.classical_runtime,
                VarSet::CLASSICAL_RUNTIME,
            )?,
            quantum_runtime: parse("quantum_runtime", &self.quantum_runtime, VarSet::SIZE_ONLY)?,
            classical_work: parse("classical_work", &self.classical_work, VarSet::SIZE_ONLY)?,
            quantum_work: parse("quantum_work", &self.quantum_work, VarSet::QUANTUM_WORK)?,
        })
    }
}

/// Parameter overrides applied after the presets; unset fields keep preset values.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound = "T: Scalar")]
pub struct Overrides<T> {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hws: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qir_pct: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plqr: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rir_pct: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub processors_log10: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cir_pct: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost_factor_log10: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub connectivity_penalty: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t0: Option<T>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct Catalog<T> {
    pub problems: Vec<ProblemPreset>,
    pub hardware: Vec<HardwarePreset<T>>,
    pub roadmaps: Vec<Roadmap<T>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemFile {
    problem: Vec<ProblemPreset>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, bound = "T: Scalar")]
struct HardwareFile<T> {
    hardware: Vec<HardwarePreset<T>>,
}

fn corrupt(file: &str, message: impl ToString) -> PresetError {
    PresetError::Corrupt {
        file: file.to_string(),
        message: message.to_string(),
    }
}

/// Environment variable naming a preset directory to use instead of the bundled data.
pub const PRESET_DIR_ENV: &str = "QEA_PRESET_DIR";

/// The catalog from [`PRESET_DIR_ENV`] if set, else the bundled one.
pub fn load_presets<T: Scalar>() -> Result<Catalog<T>, PresetError> {
    match std::env::var_os(PRESET_DIR_ENV) {
        Some(dir) => Catalog::load_dir(Path::new(&dir)),
        None => Catalog::bundled(),
    }
}

/// Calendar year of the system clock, the default reference year.
pub fn current_year<T: Scalar>() -> T {
    use chrono::Datelike;
    T::from_i32(chrono::Utc::now().year()).expect("year fits")
}

impl<T: Scalar> Catalog<T> {
    /// The presets compiled into the crate.
    pub fn bundled() -> Result<Self, PresetError> {
        let roadmaps: Vec<(String, String)> = ROADMAPS
            .iter()
            .map(|(f, t)| (format!("roadmaps/{f}"), t.to_string()))
            .collect();
        Self::from_sources(PROBLEMS, HARDWARE, &roadmaps)
    }

    /// Loads a preset directory; roadmap files are read in file-name order.
    pub fn load_dir(dir: &Path) -> Result<Self, PresetError> {
        let read = |rel: &str| {
            fs::read_to_string(dir.join(rel)).map_err(|e| corrupt(rel, e))
        };
        let problems = read("problems.toml")?;
        let hardware = read("hardware.toml")?;
        let rdir = dir.join("roadmaps");
        let mut names: Vec<String> = fs::read_dir(&rdir)
            .map_err(|e| corrupt("roadmaps", e))?
            .filter_map(|e| e.ok())
            .map(|e| e.file_name().to_string_lossy().into_owned())
            .filter(|n| n.ends_with(".toml"))
            .collect();
        names.sort();
        let mut roadmaps = Vec::with_capacity(names.len());
        for n in names {
            let rel = format!("roadmaps/{n}");
            let text = read(&rel)?;
            roadmaps.push((rel, text));
        }
        Self::from_sources(&problems, &hardware, &roadmaps)
    }

    fn from_sources(
        problems: &str,
        hardware: &str,
        roadmaps: &[(String, String)],
    ) -> Result<Self, PresetError> {
        let problems = toml::from_str::<ProblemFile>(problems)
            .map_err(|e| corrupt("problems.toml", e))?
            .problem;
        let hardware = toml::from_str::<HardwareFile<T>>(hardware)
            .map_err(|e| corrupt("hardware.toml", e))?
            .hardware;
        let roadmaps = roadmaps
            .iter()
            .map(|(file, text)| Roadmap::from_toml(text).map_err(|e| corrupt(file, e)))
            .collect::<Result<Vec<_>, _>>()?;
        let catalog = Self {
            problems,
            hardware,
            roadmaps,
        };
        catalog.check()?;
        Ok(catalog)
    }

    /// Every preset parses, matches its gate time, and every pairing validates.
    fn check(&self) -> Result<(), PresetError> {
        for p in &self.problems {
            p.expressions::<T>()
                .map_err(|(field, msg)| corrupt("problems.toml", format!("{}.{field}: {msg}", p.name)))?;
        }
        for h in &self.hardware {
            let composed = SlowdownBreakdown::from_gate_time(h.gate_time_ns)
                .compose()
                .map_err(|e| corrupt("hardware.toml", format!("{}: {e}", h.name)))?;
            if (composed - h.hws).abs() > T::lit(HWS_TOLERANCE) {
                return Err(corrupt(
                    "hardware.toml",
                    format!(
                        "{}: hws {} disagrees with gate time {} ns (composes to {composed})",
                        h.name, h.hws, h.gate_time_ns
                    ),
                ));
            }
            for p in &self.problems {
                let params = self
                    .build_params(p, h, &Overrides::default())
                    .map_err(|e| corrupt("hardware.toml", format!("{} with {}: {e}", h.name, p.name)))?;
                params
                    .validate()
                    .map_err(|e| corrupt("hardware.toml", format!("{} with {}: {e}", h.name, p.name)))?;
            }
        }
        Ok(())
    }

    pub fn problem(&self, name: &str) -> Result<&ProblemPreset, PresetError> {
        self.problems
            .iter()
            .find(|p| p.name.eq_ignore_ascii_case(name))
            .ok_or_else(|| PresetError::Unknown {
                kind: "problem",
                name: name.to_string(),
                available: join(self.problems.iter().map(|p| p.name.as_str())),
            })
    }

    pub fn hardware(&self, name: &str) -> Result<&HardwarePreset<T>, PresetError> {
        self.hardware
            .iter()
            .find(|h| h.name.eq_ignore_ascii_case(name))
            .ok_or_else(|| PresetError::Unknown {
                kind: "hardware",
                name: name.to_string(),
                available: join(self.hardware.iter().map(|h| h.name.as_str())),
            })
    }

    pub fn roadmap(&self, label: &str) -> Result<&Roadmap<T>, PresetError> {
        self.roadmaps
            .iter()
            .find(|r| r.label.eq_ignore_ascii_case(label))
            .ok_or_else(|| PresetError::Unknown {
                kind: "roadmap",
                name: label.to_string(),
                available: join(self.roadmaps.iter().map(|r| r.label.as_str())),
            })
    }

    /// Combines a problem with a hardware preset and its roadmap.
    pub fn build_params(
        &self,
        problem: &ProblemPreset,
        hardware: &HardwarePreset<T>,
        overrides: &Overrides<T>,
    ) -> Result<ModelParams<T>, PresetError> {
        let roadmap = self.roadmap(&hardware.roadmap)?.clone();
        build_params(problem, hardware, roadmap, overrides)
    }
}

/// Merges presets and overrides into model parameters and validates them.
///
/// `t0` defaults to the current calendar year and the cost factor to
/// `hws + processors_log10` of the merged values.
pub fn build_params<T: Scalar>(
    problem: &ProblemPreset,
    hardware: &HardwarePreset<T>,
    roadmap: Roadmap<T>,
    overrides: &Overrides<T>,
) -> Result<ModelParams<T>, PresetError> {
    let params = assemble(problem, hardware, roadmap, overrides)?;
    match params.diagnostics().into_iter().next() {
        Some((field, message)) => Err(PresetError::InvalidOverride { field, message }),
        None => Ok(params),
    }
}

/// The merge of [`build_params`] without the range checks, so callers can
/// collect every diagnostic at once.
pub fn assemble<T: Scalar>(
    problem: &ProblemPreset,
    hardware: &HardwarePreset<T>,
    roadmap: Roadmap<T>,
    overrides: &Overrides<T>,
) -> Result<ModelParams<T>, PresetError> {
    let invalid = |field: &str, message: String| PresetError::InvalidOverride {
        field: field.to_string(),
        message,
    };
    let exprs = problem
        .expressions::<T>()
        .map_err(|(field, msg)| invalid(&field, msg))?;
    let penalty_src = overrides
        .connectivity_penalty
        .as_deref()
        .unwrap_or(&hardware.connectivity_penalty);
    let penalty = Expression::parse(penalty_src, VarSet::PENALTY)
        .map_err(|e| invalid("connectivity_penalty", e.to_string()))?;
    let hws = overrides.hws.unwrap_or(hardware.hws);
    let processors_log10 = overrides.processors_log10.unwrap_or(hardware.processors_log10);
    let mut params = ModelParams::new(
        exprs.classical_runtime,
        exprs.quantum_runtime,
        problem.qps,
        roadmap,
        overrides.t0.unwrap_or_else(current_year),
    );
    params.classical_work = exprs.classical_work;
    params.quantum_work = exprs.quantum_work;
    params.connectivity_penalty = penalty;
    params.hws = hws;
    params.qir_pct = overrides.qir_pct.unwrap_or(hardware.qir_pct);
    params.plqr = overrides.plqr.unwrap_or(hardware.plqr);
    params.rir_pct = overrides.rir_pct.unwrap_or(hardware.rir_pct);
    params.processors_log10 = processors_log10;
    params.cir_pct = overrides.cir_pct.unwrap_or(hardware.cir_pct);
    params.cost_factor_log10 = overrides
        .cost_factor_log10
        .or(hardware.cost_factor_log10)
        .unwrap_or(hws + processors_log10);
    Ok(params)
}

fn join<'a>(names: impl Iterator<Item = &'a str>) -> String {
    names.collect::<Vec<_>>().join(", ")
}
