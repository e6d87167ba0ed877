//! Evaluating a resolved configuration and rendering the results.
//!
//! Rendering is deterministic: identical inputs produce byte-identical text.

use serde::Serialize;
use thiserror::Error;

use crate::config::{Diagnostic, ModeSelection, OutputFormat, Resolved};
use crate::model::{CurvePoint, CurveSet, ModelError, ModelParams};
use crate::sensitivity::{run_sweep, SensitivityError, SweepReport, SweepRow};
use crate::solver::{
    advantage_year_for_size, report_year, solve_mode, summary_year, Evaluator, Mode,
    SolveOptions, SolverWarning, Status,
};

#[derive(Debug, Error)]
pub enum RunError {
    #[error("invalid configuration: {}", join_diagnostics(.0))]
    Config(Vec<Diagnostic>),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Sweep(#[from] SensitivityError),
}

fn join_diagnostics(d: &[Diagnostic]) -> String {
    d.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; ")
}

/// Coarse classification used for exit codes and HTTP status codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FailureKind {
    /// The inputs are unacceptable.
    Config,
    /// The inputs are acceptable but a computation failed.
    Solver,
}

impl RunError {
    pub fn kind(&self) -> FailureKind {
        match self {
            RunError::Config(_) => FailureKind::Config,
            RunError::Model(e) | RunError::Sweep(SensitivityError::Model(e)) => match e {
                ModelError::Invalid { .. } | ModelError::Roadmap(_) => FailureKind::Config,
                ModelError::Eval { .. } | ModelError::NoConvergence { .. } => FailureKind::Solver,
            },
            RunError::Sweep(SensitivityError::InvalidPerturbation { .. }) => FailureKind::Config,
            RunError::Sweep(SensitivityError::Undefined) => FailureKind::Solver,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FixedSizeYear {
    pub log10_n: f64,
    pub mode: Mode,
    pub year: Option<f64>,
    pub year_floor: Option<i64>,
}

/// Result summary; field names follow the solver result.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub mode: ModeSelection,
    pub status: Option<Status>,
    pub t_star: Option<f64>,
    pub t_star_year: Option<i64>,
    pub n_star_log10: Option<f64>,
    pub cost_status: Option<Status>,
    pub t_c_star: Option<f64>,
    pub t_c_star_year: Option<i64>,
    pub n_c_star_log10: Option<f64>,
    pub fixed_sizes: Vec<FixedSizeYear>,
    pub warnings: Vec<SolverWarning>,
    /// The fully merged parameters the numbers were computed from.
    pub parameters: ModelParams<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunOutput {
    pub summary: Summary,
    pub curves: CurveSet<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepReport<f64>>,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

/// Solves the selected modes, fixed sizes and curve window.
pub fn summarize(resolved: &Resolved) -> Result<(Summary, CurveSet<f64>), RunError> {
    let params = &resolved.params;
    params.validate()?;
    let opts = SolveOptions::default();
    let mut eval = Evaluator::new(params);
    let mut summary = Summary {
        mode: resolved.mode,
        status: None,
        t_star: None,
        t_star_year: None,
        n_star_log10: None,
        cost_status: None,
        t_c_star: None,
        t_c_star_year: None,
        n_c_star_log10: None,
        fixed_sizes: Vec::new(),
        warnings: Vec::new(),
        parameters: params.clone(),
    };
    for &mode in resolved.mode.modes() {
        let out = solve_mode(&mut eval, mode, &opts)?;
        let year = out.year.map(report_year);
        let floor = out.year.map(summary_year);
        let size = finite(out.size_log10);
        match mode {
            Mode::Speed => {
                summary.status = Some(out.status);
                summary.t_star = year;
                summary.t_star_year = floor;
                summary.n_star_log10 = size;
            }
            Mode::Cost => {
                summary.cost_status = Some(out.status);
                summary.t_c_star = year;
                summary.t_c_star_year = floor;
                summary.n_c_star_log10 = size;
            }
        }
        summary.warnings.extend(out.warning);
    }
    for &log10_n in &resolved.fixed_sizes {
        for &mode in resolved.mode.modes() {
            let year = advantage_year_for_size(params, log10_n, mode)?;
            summary.fixed_sizes.push(FixedSizeYear {
                log10_n,
                mode,
                year: year.map(report_year),
                year_floor: year.map(summary_year),
            });
        }
    }
    let curves = eval.sample_curves(resolved.curve_start, resolved.curve_end, resolved.curve_step)?;
    Ok((summary, curves))
}

/// Runs the configured sweep, with years at report resolution.
pub fn sweep(resolved: &Resolved) -> Result<Option<SweepReport<f64>>, RunError> {
    let Some(spec) = &resolved.sweep else {
        return Ok(None);
    };
    let mut report = run_sweep(spec)?;
    report.baseline_year = report.baseline_year.map(report_year);
    let baseline = report.baseline_year;
    report.rows = report.rows.into_iter().map(|r| round_row(r, baseline)).collect();
    Ok(Some(report))
}

/// Rounds a sweep row's year to report resolution; `baseline_year` must
/// already be rounded.
pub fn round_row(mut row: SweepRow<f64>, baseline_year: Option<f64>) -> SweepRow<f64> {
    row.year = row.year.map(report_year);
    row.delta_years = match (row.year, baseline_year) {
        (Some(y), Some(b)) => Some(report_year(y - b)),
        _ => None,
    };
    row
}

pub fn evaluate(resolved: &Resolved) -> Result<RunOutput, RunError> {
    let (summary, curves) = summarize(resolved)?;
    Ok(RunOutput {
        summary,
        curves,
        sweep: sweep(resolved)?,
    })
}

pub fn to_json<S: Serialize>(value: &S) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes to JSON");
    s.push('\n');
    s
}

fn cell(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("CSV is UTF-8")
}

/// Two-column `key,value` rendering of the summary.
pub fn summary_csv(s: &Summary) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let status = |st: Option<Status>| {
        st.map(|v| {
            serde_json::to_value(v)
                .ok()
                .and_then(|j| j.as_str().map(str::to_string))
                .unwrap_or_default()
        })
        .unwrap_or_default()
    };
    let p = &s.parameters;
    let mut rows: Vec<(String, String)> = vec![
        ("mode".into(), format!("{:?}", s.mode).to_lowercase()),
        ("status".into(), status(s.status)),
        ("t_star".into(), cell(s.t_star)),
        ("t_star_year".into(), s.t_star_year.map(|y| y.to_string()).unwrap_or_default()),
        ("n_star_log10".into(), cell(s.n_star_log10)),
        ("cost_status".into(), status(s.cost_status)),
        ("t_c_star".into(), cell(s.t_c_star)),
        ("t_c_star_year".into(), s.t_c_star_year.map(|y| y.to_string()).unwrap_or_default()),
        ("n_c_star_log10".into(), cell(s.n_c_star_log10)),
    ];
    for f in &s.fixed_sizes {
        let mode = if f.mode == Mode::Speed { "speed" } else { "cost" };
        rows.push((format!("fixed_size.{}.{mode}.year", f.log10_n), cell(f.year)));
    }
    for w in &s.warnings {
        let SolverWarning::NonMonotone { mode, sign_changes } = w;
        rows.push((format!("warning.non_monotone.{mode:?}").to_lowercase(), sign_changes.to_string()));
    }
    for (k, v) in [
        ("t0", p.t0),
        ("hws", p.hws),
        ("qir_pct", p.qir_pct),
        ("plqr", p.plqr),
        ("rir_pct", p.rir_pct),
        ("processors_log10", p.processors_log10),
        ("cir_pct", p.cir_pct),
        ("cost_factor_log10", p.cost_factor_log10),
    ] {
        rows.push((format!("parameters.{k}"), v.to_string()));
    }
    w.write_record(["key", "value"]).expect("in-memory write");
    for (k, v) in rows {
        w.write_record([k, v]).expect("in-memory write");
    }
    finish(w)
}

/// `year,adv_log10n,feas_log10n,advcost_log10n`; gaps are empty cells.
pub fn curves_csv(c: &CurveSet<f64>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["year", "adv_log10n", "feas_log10n", "advcost_log10n"])
        .expect("in-memory write");
    let value = |p: &CurvePoint<f64>| cell(p.sample().map(|s| s.log10_n));
    for ((a, f), c) in c.adv.iter().zip(&c.feas).zip(&c.adv_cost) {
        w.write_record([a.t().to_string(), value(a), value(f), value(c)])
            .expect("in-memory write");
    }
    finish(w)
}

pub fn sweep_csv(r: &SweepReport<f64>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["parameter", "multiplier", "value", "clamped", "year", "delta_years"])
        .expect("in-memory write");
    for row in &r.rows {
        w.write_record([
            row.parameter.map(|p| p.name()).unwrap_or("baseline").to_string(),
            cell(row.multiplier),
            cell(row.value),
            row.clamped.to_string(),
            cell(row.year),
            cell(row.delta_years),
        ])
        .expect("in-memory write");
    }
    finish(w)
}

/// Output files as `(file name, contents)`, in a fixed order.
pub fn render(output: &RunOutput, format: OutputFormat) -> Vec<(String, String)> {
    let mut files = vec![(
        format!("summary.{}", format.extension()),
        match format {
            OutputFormat::Json => to_json(&output.summary),
            OutputFormat::Csv => summary_csv(&output.summary),
        },
    )];
    files.push(("curves.csv".to_string(), curves_csv(&output.curves)));
    if let Some(sweep) = &output.sweep {
        files.push(render_sweep(sweep, format));
    }
    files
}

pub fn render_sweep(sweep: &SweepReport<f64>, format: OutputFormat) -> (String, String) {
    (
        format!("sweep.{}", format.extension()),
        match format {
            OutputFormat::Json => to_json(sweep),
            OutputFormat::Csv => sweep_csv(sweep),
        },
    )
}
