//! Run configuration: the document read by the command line tool and posted
//! to the HTTP service, and its resolution into model parameters.

use serde::{Deserialize, Serialize};

use crate::expressions::{Expression, VarSet};
use crate::model::{ModelParams, QpsKind, SlowdownBreakdown};
use crate::presets::{assemble, Catalog, HardwarePreset, Overrides, PresetError, ProblemPreset, HWS_TOLERANCE};
use crate::roadmap::Roadmap;
use crate::sensitivity::{default_perturbations, Perturbation, SweepSpec};
use crate::solver::Mode;

/// Length of the default curve window, in years after `t0`.
pub const DEFAULT_CURVE_YEARS: f64 = 30.0;
pub const DEFAULT_CURVE_STEP: f64 = 0.1;

/// One problem found while checking a configuration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    /// Dotted path of the offending field.
    pub field: String,
    pub message: String,
}

impl Diagnostic {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeSelection {
    Speed,
    Cost,
    #[default]
    Both,
}

impl ModeSelection {
    pub fn modes(self) -> &'static [Mode] {
        match self {
            ModeSelection::Speed => &[Mode::Speed],
            ModeSelection::Cost => &[Mode::Cost],
            ModeSelection::Both => &[Mode::Speed, Mode::Cost],
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        }
    }
}

/// A problem preset name, or the formulas written out.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSource {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classical_runtime: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantum_runtime: Option<String>,
    /// Defaults to the classical runtime on one processor.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classical_work: Option<String>,
    /// Defaults to the quantum runtime times `q`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantum_work: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qps: Option<QpsKind>,
}

/// A roadmap label from the catalog, or a full roadmap.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RoadmapSource {
    Label(String),
    Inline(Roadmap<f64>),
}

/// A hardware preset name, or every parameter given explicitly.
///
/// A preset may be combined with `roadmap` to swap in another roadmap.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HardwareSource {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hws: Option<f64>,
    /// Composed into `hws` when `hws` is absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slowdown: Option<SlowdownBreakdown<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qir_pct: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub connectivity_penalty: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plqr: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rir_pct: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cir_pct: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub processors_log10: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost_factor_log10: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub roadmap: Option<RoadmapSource>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveWindow {
    /// Defaults to `t0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<f64>,
    /// Defaults to `start + 30`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub end: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PerturbationList {
    /// Only `"default"` is recognized.
    Named(String),
    Explicit(Vec<Perturbation<f64>>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub target_size_log10: f64,
    #[serde(default = "speed")]
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturbations: Option<PerturbationList>,
}

fn speed() -> Mode {
    Mode::Speed
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub format: OutputFormat,
    /// Output directory.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub mode: ModeSelection,
    /// Problem sizes, as log10(n), whose advantage year is reported.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fixed_sizes: Vec<f64>,
    pub problem: ProblemSource,
    pub hardware: HardwareSource,
    #[serde(default)]
    pub overrides: Overrides<f64>,
    #[serde(default)]
    pub curves: CurveWindow,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, Vec<Diagnostic>> {
        toml::from_str(text).map_err(|e| {
            vec![Diagnostic::new(
                "document",
                e.message().to_string() + &span_note(text, e.span()),
            )]
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes to TOML")
    }
}

fn span_note(text: &str, span: Option<std::ops::Range<usize>>) -> String {
    match span {
        Some(r) => {
            let line = text[..r.start.min(text.len())].matches('\n').count() + 1;
            format!(" (line {line})")
        }
        None => String::new(),
    }
}

/// A configuration with presets merged and every check passed.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub params: ModelParams<f64>,
    pub mode: ModeSelection,
    pub fixed_sizes: Vec<f64>,
    pub curve_start: f64,
    pub curve_end: f64,
    pub curve_step: f64,
    pub sweep: Option<SweepSpec<f64>>,
    pub output: OutputConfig,
}

impl Resolved {
    pub fn curve_samples(&self) -> usize {
        ((self.curve_end - self.curve_start) / self.curve_step + 1e-9).floor() as usize + 1
    }
}

/// Every problem in `config`; empty means it is valid.
pub fn validate(config: &RunConfig, catalog: &Catalog<f64>) -> Vec<Diagnostic> {
    match resolve(config, catalog) {
        Ok(_) => Vec::new(),
        Err(d) => d,
    }
}

pub fn resolve(config: &RunConfig, catalog: &Catalog<f64>) -> Result<Resolved, Vec<Diagnostic>> {
    let mut diags = Vec::new();
    let problem = resolve_problem(&config.problem, catalog, &mut diags);
    let hardware = resolve_hardware(&config.hardware, catalog, &mut diags);
    for (i, s) in config.fixed_sizes.iter().enumerate() {
        if !(s.is_finite() && *s >= 0.0) {
            diags.push(Diagnostic::new(
                format!("fixed_sizes[{i}]"),
                format!("log10 size must be finite and nonnegative, got {s}"),
            ));
        }
    }
    let params = match (problem, hardware) {
        (Some(p), Some((h, rm))) => merge(&p, &h, rm, &config.overrides, &mut diags),
        _ => None,
    };
    let Some(params) = params else {
        return Err(diags);
    };

    let start = config.curves.start.unwrap_or(params.t0);
    let end = config.curves.end.unwrap_or(start + DEFAULT_CURVE_YEARS);
    let step = config.curves.step.unwrap_or(DEFAULT_CURVE_STEP);
    if !(step.is_finite() && step > 0.0) {
        diags.push(Diagnostic::new("curves.step", format!("must be positive, got {step}")));
    }
    if !(start.is_finite() && end.is_finite() && start < end) {
        diags.push(Diagnostic::new(
            "curves",
            format!("start ({start}) must be before end ({end})"),
        ));
    }

    let sweep = config.sweep.as_ref().and_then(|s| {
        let perturbations = match &s.perturbations {
            None => default_perturbations(),
            Some(PerturbationList::Named(n)) if n == "default" => default_perturbations(),
            Some(PerturbationList::Named(n)) => {
                diags.push(Diagnostic::new(
                    "sweep.perturbations",
                    format!("unknown perturbation set '{n}' (use \"default\" or a list)"),
                ));
                return None;
            }
            Some(PerturbationList::Explicit(list)) => list.clone(),
        };
        if !(s.target_size_log10.is_finite() && s.target_size_log10 >= 0.0) {
            diags.push(Diagnostic::new(
                "sweep.target_size_log10",
                format!("must be finite and nonnegative, got {}", s.target_size_log10),
            ));
            return None;
        }
        let spec = SweepSpec {
            baseline: params.clone(),
            target_size_log10: s.target_size_log10,
            mode: s.mode,
            perturbations,
        };
        if let Err(e) = spec.cases() {
            diags.push(Diagnostic::new("sweep.perturbations", e.to_string()));
            return None;
        }
        Some(spec)
    });

    if !diags.is_empty() {
        return Err(diags);
    }
    Ok(Resolved {
        params,
        mode: config.mode,
        fixed_sizes: config.fixed_sizes.clone(),
        curve_start: start,
        curve_end: end,
        curve_step: step,
        sweep,
        output: config.output.clone(),
    })
}

fn resolve_problem(
    src: &ProblemSource,
    catalog: &Catalog<f64>,
    diags: &mut Vec<Diagnostic>,
) -> Option<ProblemPreset> {
    let inline = [
        &src.classical_runtime,
        &src.quantum_runtime,
        &src.classical_work,
        &src.quantum_work,
    ]
    .iter()
    .any(|f| f.is_some())
        || src.qps.is_some();
    if let Some(name) = &src.preset {
        if inline || src.name.is_some() {
            diags.push(Diagnostic::new(
                "problem",
                "give either a preset or inline formulas, not both",
            ));
            return None;
        }
        return match catalog.problem(name) {
            Ok(p) => Some(p.clone()),
            Err(e) => {
                diags.push(Diagnostic::new("problem.preset", e.to_string()));
                None
            }
        };
    }
    let start = diags.len();
    let mut need = |field: &str, v: &Option<String>| match v {
        Some(s) => Some(s.clone()),
        None => {
            diags.push(Diagnostic::new(
                format!("problem.{field}"),
                "required when no preset is given",
            ));
            None
        }
    };
    let classical = need("classical_runtime", &src.classical_runtime);
    let quantum = need("quantum_runtime", &src.quantum_runtime);
    if src.qps.is_none() {
        diags.push(Diagnostic::new(
            "problem.qps",
            "required when no preset is given (exponential, linear or logarithmic)",
        ));
    }
    let (Some(classical), Some(quantum), Some(qps)) = (classical, quantum, src.qps) else {
        return None;
    };
    let check = |field: &str, text: &str, vars: VarSet, diags: &mut Vec<Diagnostic>| {
        match Expression::<f64>::parse(text, vars) {
            Ok(e) => Some(e),
            Err(err) => {
                diags.push(Diagnostic::new(format!("problem.{field}"), err.to_string()));
                None
            }
        }
    };
    let c = check("classical_runtime", &classical, VarSet::CLASSICAL_RUNTIME, diags);
    let q = check("quantum_runtime", &quantum, VarSet::SIZE_ONLY, diags);
    let classical_work = match &src.classical_work {
        Some(t) => {
            check("classical_work", t, VarSet::SIZE_ONLY, diags);
            t.clone()
        }
        None => c
            .as_ref()
            .map(|e| e.substitute(crate::expressions::Var::Procs, 1.0).to_string())
            .unwrap_or_default(),
    };
    let quantum_work = match &src.quantum_work {
        Some(t) => {
            check("quantum_work", t, VarSet::QUANTUM_WORK, diags);
            t.clone()
        }
        None => q
            .as_ref()
            .map(|e| e.times_var(crate::expressions::Var::Q).to_string())
            .unwrap_or_default(),
    };
    if diags.len() > start {
        return None;
    }
    Some(ProblemPreset {
        name: src.name.clone().unwrap_or_else(|| "custom".to_string()),
        description: String::new(),
        classical_runtime: classical,
        quantum_runtime: quantum,
        classical_work,
        quantum_work,
        qps,
        illustrative: false,
        notes: String::new(),
    })
}

fn resolve_roadmap(
    src: &RoadmapSource,
    catalog: &Catalog<f64>,
    diags: &mut Vec<Diagnostic>,
) -> Option<Roadmap<f64>> {
    match src {
        RoadmapSource::Label(label) => match catalog.roadmap(label) {
            Ok(r) => Some(r.clone()),
            Err(e) => {
                diags.push(Diagnostic::new("hardware.roadmap", e.to_string()));
                None
            }
        },
        RoadmapSource::Inline(rm) => match rm.validate() {
            Ok(()) => Some(rm.clone()),
            Err(e) => {
                diags.push(Diagnostic::new("hardware.roadmap", e.to_string()));
                None
            }
        },
    }
}

fn resolve_hardware(
    src: &HardwareSource,
    catalog: &Catalog<f64>,
    diags: &mut Vec<Diagnostic>,
) -> Option<(HardwarePreset<f64>, Roadmap<f64>)> {
    let roadmap = src
        .roadmap
        .as_ref()
        .map(|r| resolve_roadmap(r, catalog, diags));
    if let Some(name) = &src.preset {
        let params_given = src.name.is_some()
            || src.hws.is_some()
            || src.slowdown.is_some()
            || src.qir_pct.is_some()
            || src.connectivity_penalty.is_some()
            || src.plqr.is_some()
            || src.rir_pct.is_some()
            || src.cir_pct.is_some()
            || src.processors_log10.is_some()
            || src.cost_factor_log10.is_some();
        if params_given {
            diags.push(Diagnostic::new(
                "hardware",
                "give either a preset or inline parameters, not both (use [overrides] to adjust a preset)",
            ));
            return None;
        }
        let preset = match catalog.hardware(name) {
            Ok(h) => h.clone(),
            Err(e) => {
                diags.push(Diagnostic::new("hardware.preset", e.to_string()));
                return None;
            }
        };
        let roadmap = match roadmap {
            Some(r) => r?,
            None => match catalog.roadmap(&preset.roadmap) {
                Ok(r) => r.clone(),
                Err(e) => {
                    diags.push(Diagnostic::new("hardware.preset", e.to_string()));
                    return None;
                }
            },
        };
        return Some((preset, roadmap));
    }

    let start = diags.len();
    let hws = match (src.hws, &src.slowdown) {
        (Some(h), None) => Some(h),
        (None, Some(b)) => match b.compose() {
            Ok(h) => Some(h),
            Err(e) => {
                diags.push(Diagnostic::new("hardware.slowdown", e.to_string()));
                None
            }
        },
        (Some(h), Some(b)) => {
            if let Ok(c) = b.compose() {
                if (c - h).abs() > HWS_TOLERANCE {
                    diags.push(Diagnostic::new(
                        "hardware.hws",
                        format!("{h} disagrees with the slowdown breakdown, which composes to {c}"),
                    ));
                }
            }
            Some(h)
        }
        (None, None) => {
            diags.push(Diagnostic::new(
                "hardware.hws",
                "required when no preset is given (or give a slowdown breakdown)",
            ));
            None
        }
    };
    let mut need = |field: &str, v: Option<f64>| {
        if v.is_none() {
            diags.push(Diagnostic::new(
                format!("hardware.{field}"),
                "required when no preset is given",
            ));
        }
        v
    };
    let qir = need("qir_pct", src.qir_pct);
    let plqr = need("plqr", src.plqr);
    let rir = need("rir_pct", src.rir_pct);
    let cir = need("cir_pct", src.cir_pct);
    let procs = need("processors_log10", src.processors_log10);
    if roadmap.is_none() {
        diags.push(Diagnostic::new(
            "hardware.roadmap",
            "required when no preset is given",
        ));
    }
    if diags.len() > start {
        return None;
    }
    let (Some(hws), Some(qir), Some(plqr), Some(rir), Some(cir), Some(procs), Some(Some(roadmap))) =
        (hws, qir, plqr, rir, cir, procs, roadmap)
    else {
        return None;
    };
    let gate_time_ns = src.slowdown.map(|b| b.gate_time_ns).unwrap_or(f64::NAN);
    Some((
        HardwarePreset {
            name: src.name.clone().unwrap_or_else(|| "custom".to_string()),
            gate_time_ns,
            hws,
            qir_pct: qir,
            connectivity_penalty: src
                .connectivity_penalty
                .clone()
                .unwrap_or_else(|| "1".to_string()),
            plqr,
            rir_pct: rir,
            cir_pct: cir,
            processors_log10: procs,
            cost_factor_log10: src.cost_factor_log10,
            roadmap: roadmap.label.clone(),
        },
        roadmap,
    ))
}

fn merge(
    problem: &ProblemPreset,
    hardware: &HardwarePreset<f64>,
    roadmap: Roadmap<f64>,
    overrides: &Overrides<f64>,
    diags: &mut Vec<Diagnostic>,
) -> Option<ModelParams<f64>> {
    let section = |field: &str| {
        if overrides_has(overrides, field) {
            format!("overrides.{field}")
        } else if field.ends_with("_runtime") || field.ends_with("_work") {
            format!("problem.{field}")
        } else {
            format!("hardware.{field}")
        }
    };
    match assemble(problem, hardware, roadmap, overrides) {
        Ok(params) => {
            let found = params.diagnostics();
            if found.is_empty() {
                return Some(params);
            }
            for (field, message) in found {
                diags.push(Diagnostic::new(section(&field), message));
            }
            None
        }
        Err(PresetError::InvalidOverride { field, message }) => {
            diags.push(Diagnostic::new(section(&field), message));
            None
        }
        Err(e) => {
            diags.push(Diagnostic::new("hardware", e.to_string()));
            None
        }
    }
}

fn overrides_has(o: &Overrides<f64>, field: &str) -> bool {
    match field {
        "hws" => o.hws.is_some(),
        "qir_pct" => o.qir_pct.is_some(),
        "plqr" => o.plqr.is_some(),
        "rir_pct" => o.rir_pct.is_some(),
        "processors_log10" => o.processors_log10.is_some(),
        "cir_pct" => o.cir_pct.is_some(),
        "cost_factor_log10" => o.cost_factor_log10.is_some(),
        "connectivity_penalty" => o.connectivity_penalty.is_some(),
        "t0" => o.t0.is_some(),
        _ => false,
    }
}
