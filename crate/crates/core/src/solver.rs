//! Crossover years: when the feasible size first reaches the advantageous size.

use std::collections::HashMap;

use serde::Serialize;

use crate::model::{year_grid, CurvePoint, CurveSet, ModelError, ModelParams};
use crate::scalar::Scalar;

/// Last year scanned for a crossing.
pub const HORIZON_YEAR: f64 = 3000.0;
pub const DEFAULT_SCAN_STEP: f64 = 0.25;
pub const DEFAULT_YEAR_TOLERANCE: f64 = 1e-3;

/// Which comparison defines advantage.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Wall-clock runtime against a cost-equivalent classical cluster.
    Speed,
    /// Total operations weighted by the cost factor.
    Cost,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    AlreadyAchieved,
    AdvantageAt,
    #[serde(rename = "no_advantage_by_3000")]
    NoAdvantageBy3000,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SolverWarning {
    /// Feasibility and advantage cross more than once; the first crossing is reported.
    NonMonotone { mode: Mode, sign_changes: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct QeaResult<T> {
    pub status: Status,
    pub t_star: Option<T>,
    /// `Adv(t0)`.
    pub n_star_log10: T,
    pub cost_status: Status,
    pub t_c_star: Option<T>,
    /// `Adv_c(t0)`.
    pub n_c_star_log10: T,
    pub warnings: Vec<SolverWarning>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curves: Option<CurveSet<T>>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions {
    /// Years between scan points before bisection.
    pub scan_step: f64,
    /// Width of the final bisection bracket, in years.
    pub tolerance: f64,
    pub horizon: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            scan_step: DEFAULT_SCAN_STEP,
            tolerance: DEFAULT_YEAR_TOLERANCE,
            horizon: HORIZON_YEAR,
        }
    }
}

/// Evaluates `Adv`, `Adv_c` and `Feas`, remembering advantage sizes per
/// effective overhead. Once the time-dependent factors hit their floors every
/// later year maps to the same key, so long scans stay cheap.
pub struct Evaluator<'a, T: Scalar> {
    params: &'a ModelParams<T>,
    speed: HashMap<(u64, u64), T>,
    cost: HashMap<u64, T>,
}

impl<'a, T: Scalar> Evaluator<'a, T> {
    pub fn new(params: &'a ModelParams<T>) -> Self {
        Self {
            params,
            speed: HashMap::new(),
            cost: HashMap::new(),
        }
    }

    pub fn params(&self) -> &ModelParams<T> {
        self.params
    }

    pub fn advantage(&mut self, mode: Mode, t: T) -> Result<T, ModelError> {
        let p = self.params;
        match mode {
            Mode::Speed => {
                let s = p.slowdown_log10_at(t);
                let procs = p.processors_log10_at(t);
                let key = (s.to_f64_lossy().to_bits(), procs.to_f64_lossy().to_bits());
                if let Some(v) = self.speed.get(&key) {
                    return Ok(*v);
                }
                let v = p.advantage_size_with(s, procs)?;
                self.speed.insert(key, v);
                Ok(v)
            }
            Mode::Cost => {
                let cf = p.cost_factor_log10_at(t);
                let key = cf.to_f64_lossy().to_bits();
                if let Some(v) = self.cost.get(&key) {
                    return Ok(*v);
                }
                let v = p.cost_advantage_size_with(cf)?;
                self.cost.insert(key, v);
                Ok(v)
            }
        }
    }

    /// `Adv`, `Feas` and `Adv_c` on a year grid, sharing the cache.
    pub fn sample_curves(&mut self, t_start: T, t_end: T, step: T) -> Result<CurveSet<T>, ModelError> {
        let years = year_grid(t_start, t_end, step)?;
        let mut set = CurveSet {
            adv: Vec::with_capacity(years.len()),
            feas: Vec::with_capacity(years.len()),
            adv_cost: Vec::with_capacity(years.len()),
        };
        for t in years {
            set.adv.push(CurvePoint::new(t, self.advantage(Mode::Speed, t)?));
            set.feas.push(CurvePoint::new(t, self.feasible(t)?));
            set.adv_cost.push(CurvePoint::new(t, self.advantage(Mode::Cost, t)?));
        }
        Ok(set)
    }

    pub fn feasible(&self, t: T) -> Result<T, ModelError> {
        self.params.feasible_size_at(t)
    }

    /// `Feas(t) >= Adv(t)` with a finite advantage size.
    fn crossed(&mut self, mode: Mode, t: T) -> Result<bool, ModelError> {
        let adv = self.advantage(mode, t)?;
        Ok(adv.is_finite() && self.feasible(t)? >= adv)
    }

    /// Feasible and advantageous at size `10^size_log10`.
    fn size_reached(&mut self, mode: Mode, size_log10: T, t: T) -> Result<bool, ModelError> {
        Ok(self.feasible(t)? >= size_log10 && self.advantage(mode, t)? <= size_log10)
    }
}

struct Scan<T> {
    first: Option<T>,
    sign_changes: usize,
}

/// Finds the first year in `[t0, horizon]` where `pred` turns true, counting
/// every change of the predicate along the way when `count_all` is set.
fn scan<T, F>(t0: T, opts: &SolveOptions, count_all: bool, mut pred: F) -> Result<Scan<T>, ModelError>
where
    T: Scalar,
    F: FnMut(T) -> Result<bool, ModelError>,
{
    let step = T::lit(opts.scan_step);
    let horizon = T::lit(opts.horizon);
    let mut prev_t = t0;
    let mut prev = pred(t0)?;
    let mut out = Scan {
        first: prev.then_some(t0),
        sign_changes: 0,
    };
    if prev && !count_all {
        return Ok(out);
    }
    let mut k = 1usize;
    while prev_t < horizon {
        let t = (t0 + T::from_usize(k).expect("step index fits") * step).min(horizon);
        let now = pred(t)?;
        if now != prev {
            out.sign_changes += 1;
            if now && out.first.is_none() {
                out.first = Some(bisect(prev_t, t, opts.tolerance, &mut pred)?);
                if !count_all {
                    return Ok(out);
                }
            }
        }
        prev = now;
        prev_t = t;
        k += 1;
    }
    Ok(out)
}

/// Narrows `(lo, hi]`, with `pred(lo)` false and `pred(hi)` true, to `tolerance`.
fn bisect<T, F>(mut lo: T, mut hi: T, tolerance: f64, pred: &mut F) -> Result<T, ModelError>
where
    T: Scalar,
    F: FnMut(T) -> Result<bool, ModelError>,
{
    let tol = T::lit(tolerance);
    while hi - lo > tol {
        let mid = (lo + hi) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Crossing result for one mode.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeOutcome<T> {
    pub status: Status,
    pub year: Option<T>,
    /// Advantage size at `t0`.
    pub size_log10: T,
    pub warning: Option<SolverWarning>,
}

/// Scans for the first year `Feas >= Adv` in one mode.
pub fn solve_mode<T: Scalar>(
    eval: &mut Evaluator<'_, T>,
    mode: Mode,
    opts: &SolveOptions,
) -> Result<ModeOutcome<T>, ModelError> {
    let t0 = eval.params().t0;
    let s = scan(t0, opts, true, |t| eval.crossed(mode, t))?;
    let status = match s.first {
        Some(t) if t == t0 => Status::AlreadyAchieved,
        Some(_) => Status::AdvantageAt,
        None => Status::NoAdvantageBy3000,
    };
    // being ahead at t0 counts like one change into advantage
    let changes = s.sign_changes + usize::from(status == Status::AlreadyAchieved);
    Ok(ModeOutcome {
        status,
        year: s.first,
        size_log10: eval.advantage(mode, t0)?,
        warning: (changes > 1).then_some(SolverWarning::NonMonotone {
            mode,
            sign_changes: s.sign_changes,
        }),
    })
}

pub fn solve_qea<T: Scalar>(params: &ModelParams<T>) -> Result<QeaResult<T>, ModelError> {
    solve_qea_with(params, &SolveOptions::default())
}

pub fn solve_qea_with<T: Scalar>(
    params: &ModelParams<T>,
    opts: &SolveOptions,
) -> Result<QeaResult<T>, ModelError> {
    params.validate()?;
    let mut eval = Evaluator::new(params);
    let speed = solve_mode(&mut eval, Mode::Speed, opts)?;
    let cost = solve_mode(&mut eval, Mode::Cost, opts)?;
    Ok(QeaResult {
        status: speed.status,
        t_star: speed.year,
        n_star_log10: speed.size_log10,
        cost_status: cost.status,
        t_c_star: cost.year,
        n_c_star_log10: cost.size_log10,
        warnings: speed.warning.into_iter().chain(cost.warning).collect(),
        curves: None,
    })
}

/// First year a size-`10^size_log10` problem is both feasible and advantageous.
pub fn advantage_year_for_size<T: Scalar>(
    params: &ModelParams<T>,
    size_log10: T,
    mode: Mode,
) -> Result<Option<T>, ModelError> {
    advantage_year_for_size_with(params, size_log10, mode, &SolveOptions::default())
}

pub fn advantage_year_for_size_with<T: Scalar>(
    params: &ModelParams<T>,
    size_log10: T,
    mode: Mode,
    opts: &SolveOptions,
) -> Result<Option<T>, ModelError> {
    if size_log10.is_nan() || size_log10 < T::zero() {
        return Err(ModelError::invalid(
            "fixed_size",
            format!("log10 size must be nonnegative, got {size_log10}"),
        ));
    }
    let mut eval = Evaluator::new(params);
    let s = scan(params.t0, opts, false, |t| eval.size_reached(mode, size_log10, t))?;
    Ok(s.first)
}

/// Rounds a year to the 0.1-year resolution used in reports.
pub fn report_year<T: Scalar>(t: T) -> T {
    (t * T::lit(10.0)).round() / T::lit(10.0)
}

/// Whole year shown in summaries.
pub fn summary_year<T: Scalar>(t: T) -> i64 {
    report_year(t).floor().to_i64().unwrap_or(i64::MAX)
}
