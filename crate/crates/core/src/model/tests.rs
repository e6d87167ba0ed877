use super::*;
use crate::roadmap::{Extrapolation, RoadmapPoint};

fn flat_roadmap(kind: QubitKind, qubits: f64) -> Roadmap<f64> {
    Roadmap::new(
        "flat",
        kind,
        Extrapolation::Exponential,
        vec![
            RoadmapPoint::new(2025.0, qubits),
            RoadmapPoint::new(2035.0, qubits),
        ],
    )
    .unwrap()
}

fn params(c: &str, q: &str, qps: QpsKind) -> ModelParams<f64> {
    ModelParams::new(
        Expression::parse(c, VarSet::CLASSICAL_RUNTIME).unwrap(),
        Expression::parse(q, VarSet::SIZE_ONLY).unwrap(),
        qps,
        flat_roadmap(QubitKind::Logical, 100.0),
        2025.0,
    )
}

fn grover() -> ModelParams<f64> {
    params("n / procs", "sqrt(n)", QpsKind::Exponential)
}

#[test]
fn grover_threshold_is_twice_the_overheads() {
    let mut p = grover();
    p.hws = 8.48;
    p.processors_log10 = 8.0;
    let adv = p.advantage_size_at(2025.0).unwrap();
    assert!((adv - 32.96).abs() < 1e-6, "{adv}");
}

#[test]
fn no_overheads_means_immediate_advantage() {
    assert_eq!(grover().advantage_size_at(2025.0).unwrap(), 0.0);
}

#[test]
fn slowdown_shift_doubles_for_square_root_speedup() {
    let mut p = grover();
    p.hws = 3.0;
    let a = p.advantage_size_at(2025.0).unwrap();
    p.hws = 4.5;
    let b = p.advantage_size_at(2025.0).unwrap();
    assert!((b - a - 3.0).abs() < 1e-6);
}

#[test]
fn derived_work_formulas() {
    let p = grover();
    assert_eq!(p.classical_work.to_string(), "n / 1");
    assert_eq!(p.quantum_work.to_string(), "sqrt(n) * q");
}

#[test]
fn feasibility_examples() {
    let mut p = params("n", "sqrt(n)", QpsKind::Linear);
    p.roadmap = flat_roadmap(QubitKind::Logical, 10.0);
    assert!((p.feasible_size_at(2030.0).unwrap() - 1.0).abs() < 1e-12);

    p.qps = QpsKind::Exponential;
    assert!((p.feasible_size_at(2030.0).unwrap() - 3.010_299_956_639_812).abs() < 1e-9);

    p.qps = QpsKind::Linear;
    p.roadmap = flat_roadmap(QubitKind::Physical, 1000.0);
    p.plqr = 400.0;
    p.rir_pct = -23.0;
    let expected = (1000.0 / (400.0 * 0.77_f64.powi(10))).log10();
    assert!((p.feasible_size_at(2035.0).unwrap() - expected).abs() < 1e-9);
    assert!((10f64.powf(expected) - 34.12).abs() < 0.01);
}

#[test]
fn logical_roadmaps_skip_error_correction() {
    let mut p = params("n", "sqrt(n)", QpsKind::Linear);
    p.plqr = 1000.0;
    assert!((p.feasible_size_at(2025.0).unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn cost_crossing_for_search_work() {
    let mut p = grover();
    p.classical_work = Expression::parse("n", VarSet::SIZE_ONLY).unwrap();
    p.quantum_work = Expression::parse("sqrt(n) * q", VarSet::QUANTUM_WORK).unwrap();
    let got = p.cost_advantage_size_at(2025.0).unwrap();
    assert!((got - 16f64.log10()).abs() < 1e-9, "{got}");
}

#[test]
fn floors_hold() {
    let mut p = grover();
    p.hws = 2.0;
    p.qir_pct = -30.0;
    p.processors_log10 = 1.0;
    p.cir_pct = -30.0;
    p.cost_factor_log10 = 1.0;
    p.plqr = 10.0;
    p.rir_pct = -50.0;
    for k in 0..100 {
        let t = 2025.0 + k as f64;
        assert!(p.slowdown_log10_at(t) >= 0.0);
        assert!(p.processors_log10_at(t) >= 0.0);
        assert!(p.cost_factor_log10_at(t) >= 0.0);
        assert!(p.plqr_at(t) >= PLQR_FLOOR);
    }
    assert_eq!(p.slowdown_log10_at(2124.0), 0.0);
    assert_eq!(p.plqr_at(2124.0), PLQR_FLOOR);
}

#[test]
fn advantage_shrinks_as_overheads_fall() {
    let mut p = grover();
    p.hws = 6.0;
    p.qir_pct = -10.0;
    p.processors_log10 = 4.0;
    let mut prev = f64::INFINITY;
    for k in 0..40 {
        let a = p.advantage_size_at(2025.0 + k as f64).unwrap();
        assert!(a <= prev + 1e-9);
        prev = a;
    }
}

#[test]
fn no_advantage_is_infinite() {
    let p = params("n / procs", "n^2", QpsKind::Linear);
    assert_eq!(p.advantage_size_at(2025.0).unwrap(), f64::INFINITY);
}

#[test]
fn factoring_against_dense_scan() {
    let mut p = params(
        "e^((64/9 * n)^(1/3) * (ln(n))^(2/3)) / procs",
        "n^2 * ln(n)",
        QpsKind::Linear,
    );
    p.hws = 3.78;
    p.processors_log10 = 8.0;
    p.connectivity_penalty = Expression::parse("sqrt(q)", VarSet::PENALTY).unwrap();
    let got = p.advantage_size_at(2025.0).unwrap();
    // dense brute-force scan of the closed forms in linear space
    let gap = |l: f64| {
        let n = 10f64.powf(l);
        let c = (64.0 / 9.0 * n).cbrt() * n.ln().powf(2.0 / 3.0) / std::f64::consts::LN_10 - 8.0;
        let q = 3.78 + (n * n * n.ln()).log10() + 0.5 * l;
        q - c
    };
    let mut l = 1.0;
    while gap(l) > 0.0 {
        l += 1e-4;
    }
    assert!((got - l).abs() < 2e-4, "{got} vs {l}");
}

#[test]
fn validation_reports_each_problem() {
    let mut p = grover();
    p.plqr = 1.0;
    p.qir_pct = -100.0;
    p.hws = f64::NAN;
    let fields: Vec<String> = p.diagnostics().into_iter().map(|(f, _)| f).collect();
    assert!(fields.contains(&"plqr".to_string()));
    assert!(fields.contains(&"qir_pct".to_string()));
    assert!(fields.contains(&"hws".to_string()));
    assert!(p.validate().is_err());
    assert!(grover().validate().is_ok());
}

#[test]
fn curves_mark_gaps() {
    let p = params("n / procs", "n^2", QpsKind::Linear);
    let set = p.sample_curves(2025.0, 2026.0, 0.5).unwrap();
    assert_eq!(set.len(), 3);
    assert!(matches!(set.adv[0], CurvePoint::Gap { .. }));
    assert!(set.feas[2].sample().is_some());
    assert_eq!(set.adv[1].t(), 2025.5);
}

#[test]
fn year_grid_endpoints() {
    let g = year_grid(2025.0, 2055.0, 0.1).unwrap();
    assert_eq!(g.len(), 301);
    assert_eq!(g[1], 2025.1);
    assert_eq!(*g.last().unwrap(), 2055.0);
    assert!(year_grid(2025.0, 2020.0, 0.1).is_err());
    assert!(year_grid(2025.0, 2030.0, 0.0).is_err());
}

#[test]
fn single_precision_agrees() {
    let p = ModelParams::<f32>::new(
        Expression::parse("n / procs", VarSet::CLASSICAL_RUNTIME).unwrap(),
        Expression::parse("sqrt(n)", VarSet::SIZE_ONLY).unwrap(),
        QpsKind::Exponential,
        Roadmap::new(
            "f",
            QubitKind::Logical,
            Extrapolation::Exponential,
            vec![RoadmapPoint::new(2025.0, 10.0), RoadmapPoint::new(2030.0, 20.0)],
        )
        .unwrap(),
        2025.0,
    );
    let mut p = p;
    p.hws = 8.48;
    p.processors_log10 = 8.0;
    assert!((p.advantage_size_at(2025.0).unwrap() - 32.96).abs() < 1e-3);
}
