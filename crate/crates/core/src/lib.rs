//! Forecasting when quantum computers become economically worthwhile for a
//! given problem.
//!
//! A quantum algorithm with a better asymptotic runtime still loses to a
//! classical machine on small inputs because each quantum operation is slow,
//! and a problem only counts if today's hardware has enough logical qubits to
//! hold it. The crate tracks two curves over time, in log10 of the problem
//! size:
//!
//! * the smallest size where the quantum runtime beats a cost-equivalent
//!   classical cluster ([`model::ModelParams::advantage_size_at`]), and
//! * the largest size that fits on the projected qubits
//!   ([`model::ModelParams::feasible_size_at`]).
//!
//! Their first intersection is the year of economic advantage
//! ([`solver::solve_qea`]).
//!
//! Every numeric type is generic over [`scalar::Scalar`] (`f32` or `f64`);
//! the aliases below fix it to `f64`.
//!
//! ```
//! use qea_core::presets::Overrides;
//! use qea_core::solver::{solve_qea, Status};
//!
//! let catalog = qea_core::Catalog::bundled().unwrap();
//! let overrides = Overrides { t0: Some(2025.0), ..Overrides::default() };
//! let params = catalog
//!     .build_params(catalog.problem("search").unwrap(), catalog.hardware("QuEra").unwrap(), &overrides)
//!     .unwrap();
//! let result = solve_qea(&params).unwrap();
//! assert_eq!(result.status, Status::AdvantageAt);
//! ```

pub mod config;
pub mod expressions;
pub mod logvalue;
pub mod model;
pub mod presets;
pub mod report;
pub mod roadmap;
pub mod scalar;
pub mod sensitivity;
pub mod solver;

pub type Expression = expressions::Expression<f64>;
pub type LogValue = logvalue::LogValue<f64>;
pub type Roadmap = roadmap::Roadmap<f64>;
pub type RoadmapPoint = roadmap::RoadmapPoint<f64>;
pub type ModelParams = model::ModelParams<f64>;
pub type CurveSet = model::CurveSet<f64>;
pub type QeaResult = solver::QeaResult<f64>;
pub type Catalog = presets::Catalog<f64>;
pub type HardwarePreset = presets::HardwarePreset<f64>;
pub type SweepSpec = sensitivity::SweepSpec<f64>;
pub type SweepReport = sensitivity::SweepReport<f64>;
