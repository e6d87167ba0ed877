use qea_core::config::{resolve, validate, Diagnostic, RunConfig};
use qea_core::presets::Catalog;
use qea_core::report::{curves_csv, evaluate, render, summary_csv, to_json, FailureKind, RunError};
use qea_core::solver::Status;

fn catalog() -> Catalog<f64> {
    Catalog::bundled().unwrap()
}

fn diagnostics(text: &str) -> Vec<Diagnostic> {
    match RunConfig::from_toml(text) {
        Ok(c) => validate(&c, &catalog()),
        Err(d) => d,
    }
}

const SEARCH_QUERA: &str = r#"
mode = "both"

[problem]
preset = "search"

[hardware]
preset = "QuEra"

[overrides]
t0 = 2025
"#;

#[test]
fn preset_config_is_valid() {
    assert_eq!(diagnostics(SEARCH_QUERA), vec![]);
}

#[test]
fn unknown_preset_names_field() {
    let d = diagnostics(&SEARCH_QUERA.replace("QuEra", "Rigetti"));
    assert_eq!(d.len(), 1);
    assert_eq!(d[0].field, "hardware.preset");
    assert!(d[0].message.contains("Rigetti"));
}

#[test]
fn decreasing_roadmap_gives_one_diagnostic() {
    let text = r#"
[problem]
preset = "search"

[hardware]
hws = 5.1
qir_pct = -10
plqr = 100
rir_pct = -23
cir_pct = -10
processors_log10 = 8

[hardware.roadmap]
label = "mine"
qubit_kind = "physical"
extrapolation = "exponential"
points = [{ year = 2027, qubits = 100 }, { year = 2025, qubits = 1000 }]
"#;
    let d = diagnostics(text);
    assert_eq!(d.len(), 1, "{d:?}");
    assert_eq!(d[0].field, "hardware.roadmap");
    assert!(d[0].message.contains("increasing"));
}

#[test]
fn classical_runtime_scope() {
    let text = r#"
[problem]
classical_runtime = "n * q"
quantum_runtime = "sqrt(n)"
qps = "exponential"

[hardware]
preset = "IonQ"
"#;
    let d = diagnostics(text);
    assert_eq!(d.len(), 1, "{d:?}");
    assert_eq!(d[0].field, "problem.classical_runtime");
    assert!(d[0].message.contains("'q'"));
}

#[test]
fn plqr_floor_and_rate_reported_together() {
    let text = format!("{SEARCH_QUERA}plqr = 1\nqir_pct = -120\n");
    let d = diagnostics(&text);
    let fields: Vec<&str> = d.iter().map(|d| d.field.as_str()).collect();
    assert_eq!(fields, ["overrides.plqr", "overrides.qir_pct"]);
    assert!(d[0].message.contains('3'));
}

#[test]
fn mixing_preset_and_inline_rejected() {
    let text = SEARCH_QUERA.replace("preset = \"search\"", "preset = \"search\"\nqps = \"linear\"");
    assert_eq!(diagnostics(&text)[0].field, "problem");
}

#[test]
fn unknown_keys_rejected() {
    let d = diagnostics(&format!("{SEARCH_QUERA}colour = 3\n"));
    assert_eq!(d[0].field, "document");
    assert!(d[0].message.contains("colour"));
}

#[test]
fn inline_problem_derives_work() {
    let text = r#"
[problem]
name = "grover"
classical_runtime = "n / procs"
quantum_runtime = "sqrt(n)"
qps = "exponential"

[hardware]
preset = "IonQ"

[overrides]
t0 = 2025
"#;
    let r = resolve(&RunConfig::from_toml(text).unwrap(), &catalog()).unwrap();
    assert_eq!(r.params.classical_work.to_string(), "n / 1");
    assert_eq!(r.params.quantum_work.to_string(), "sqrt(n) * q");
}

#[test]
fn slowdown_breakdown_composes() {
    let text = r#"
[problem]
preset = "search"

[hardware]
qir_pct = -10
plqr = 264
rir_pct = -23
cir_pct = -10
processors_log10 = 8
roadmap = "ibm"
slowdown = { gate_time_ns = 12 }
"#;
    let r = resolve(&RunConfig::from_toml(text).unwrap(), &catalog()).unwrap();
    assert!((r.params.hws - 3.78).abs() < 0.01);
    assert_eq!(r.params.roadmap.label, "ibm");
}

#[test]
fn config_toml_round_trip() {
    let c = RunConfig::from_toml(SEARCH_QUERA).unwrap();
    assert_eq!(RunConfig::from_toml(&c.to_toml()).unwrap(), c);
}

#[test]
fn evaluate_search_quera() {
    let mut c = RunConfig::from_toml(SEARCH_QUERA).unwrap();
    c.fixed_sizes = vec![20.0];
    let r = resolve(&c, &catalog()).unwrap();
    let out = evaluate(&r).unwrap();
    let s = &out.summary;
    assert_eq!(s.status, Some(Status::AdvantageAt));
    assert_eq!(s.t_star_year, Some(2025));
    assert_eq!(s.fixed_sizes.len(), 2);
    assert_eq!(out.curves.len(), 301);

    // summary t* sits within one grid step of where the emitted columns cross
    let csv = curves_csv(&out.curves);
    let mut crossing = None;
    for line in csv.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let (adv, feas) = (cols[1].parse::<f64>(), cols[2].parse::<f64>());
        if let (Ok(a), Ok(f)) = (adv, feas) {
            if f >= a {
                crossing = Some(cols[0].parse::<f64>().unwrap());
                break;
            }
        }
    }
    assert!((crossing.unwrap() - s.t_star.unwrap()).abs() <= 0.1 + 0.05);

    // CSV values are exact
    let first = csv.lines().nth(1).unwrap();
    let adv: f64 = first.split(',').nth(1).unwrap().parse().unwrap();
    assert_eq!(Some(adv), out.curves.adv[0].sample().map(|p| p.log10_n));

    assert!(to_json(s).contains("\"status\": \"advantage_at\""));
    assert!(summary_csv(s).starts_with("key,value\nmode,both\nstatus,advantage_at\n"));
    let names: Vec<String> = render(&out, Default::default()).into_iter().map(|f| f.0).collect();
    assert_eq!(names, ["summary.json", "curves.csv"]);
}

#[test]
fn speed_only_leaves_cost_empty() {
    let text = SEARCH_QUERA.replace("mode = \"both\"", "mode = \"speed\"");
    let r = resolve(&RunConfig::from_toml(&text).unwrap(), &catalog()).unwrap();
    let out = evaluate(&r).unwrap();
    assert!(out.summary.cost_status.is_none());
    assert!(out.summary.status.is_some());
}

#[test]
fn sweep_section() {
    let text = format!("{SEARCH_QUERA}\n[sweep]\ntarget_size_log10 = 20\nperturbations = \"default\"\n");
    let r = resolve(&RunConfig::from_toml(&text).unwrap(), &catalog()).unwrap();
    let out = evaluate(&r).unwrap();
    let sweep = out.sweep.unwrap();
    assert_eq!(sweep.rows.len(), 22);
    for row in &sweep.rows {
        if let (Some(y), Some(d)) = (row.year, row.delta_years) {
            assert!((y - sweep.baseline_year.unwrap() - d).abs() < 1e-9);
        }
    }
    let bad = format!("{SEARCH_QUERA}\n[sweep]\ntarget_size_log10 = 20\nperturbations = [{{ parameter = \"hws\", multipliers = [0] }}]\n");
    assert_eq!(diagnostics(&bad)[0].field, "sweep.perturbations");
}

#[test]
fn domain_failures_are_solver_errors() {
    let text = r#"
[problem]
classical_runtime = "n / procs"
quantum_runtime = "ln(n - 5)"
qps = "linear"

[hardware]
preset = "IonQ"
"#;
    let r = resolve(&RunConfig::from_toml(text).unwrap(), &catalog()).unwrap();
    let err = evaluate(&r).unwrap_err();
    assert!(matches!(err, RunError::Model(_)));
    assert_eq!(err.kind(), FailureKind::Solver);
}
