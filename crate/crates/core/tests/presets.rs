use std::fs;

use qea_core::expressions::Var;
use qea_core::model::QpsKind;
use qea_core::presets::{Catalog, Overrides, PresetError};
use qea_core::roadmap::Roadmap;
use qea_core::solver::{advantage_year_for_size, solve_qea, Mode, Status};

fn catalog() -> Catalog<f64> {
    Catalog::bundled().unwrap()
}

fn at_2025() -> Overrides<f64> {
    Overrides {
        t0: Some(2025.0),
        ..Overrides::default()
    }
}

#[test]
fn hardware_rows() {
    let c = catalog();
    let ibm = c.hardware("IBM").unwrap();
    assert_eq!(ibm.hws, 3.78);
    assert_eq!(ibm.connectivity_penalty, "sqrt(q)");
    assert_eq!(ibm.plqr, 264.0);
    let ionq = c.hardware("ionq").unwrap();
    assert_eq!(ionq.hws, 8.48);
    assert_eq!(ionq.connectivity_penalty, "1");
    assert_eq!(ionq.plqr, 32.0);
    let quera = c.hardware("QuEra").unwrap();
    assert_eq!(quera.hws, 5.1);
    assert_eq!(quera.plqr, 100.0);
    for h in &c.hardware {
        assert_eq!((h.qir_pct, h.rir_pct, h.cir_pct), (-10.0, -23.0, -10.0));
        assert_eq!(h.processors_log10, 8.0);
    }
}

#[test]
fn problem_rows() {
    let c = catalog();
    let search = c.problem("search").unwrap();
    assert_eq!(search.quantum_work, "sqrt(n) * q");
    assert_eq!(search.qps, QpsKind::Exponential);
    assert_eq!(c.problem("factoring").unwrap().qps, QpsKind::Linear);
    assert!(c.problem("tsp").unwrap().illustrative);
    let err = c.problem("sorting").unwrap_err();
    assert!(err.to_string().contains("factoring, search, tsp"));
}

#[test]
fn bundled_roadmaps_round_trip() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/data/roadmaps");
    for entry in fs::read_dir(dir).unwrap() {
        let text = fs::read_to_string(entry.unwrap().path()).unwrap();
        let rm = Roadmap::<f64>::from_toml(&text).unwrap();
        assert_eq!(rm.to_toml(), text);
    }
}

#[test]
fn build_factoring_ibm() {
    let c = catalog();
    let p = c
        .build_params(c.problem("factoring").unwrap(), c.hardware("IBM").unwrap(), &at_2025())
        .unwrap();
    assert_eq!(p.connectivity_penalty.to_string(), "sqrt(q)");
    assert!(p.connectivity_penalty.variables().contains(Var::Q));
    assert_eq!(p.plqr, 264.0);
    assert_eq!(p.cost_factor_log10, 11.78);
    assert_eq!(p.t0, 2025.0);
}

#[test]
fn overrides_apply_last() {
    let c = catalog();
    let o = Overrides {
        hws: Some(5.0),
        ..Overrides::default()
    };
    let p = c
        .build_params(c.problem("search").unwrap(), c.hardware("IonQ").unwrap(), &o)
        .unwrap();
    assert_eq!(p.hws, 5.0);
    assert_eq!(p.cost_factor_log10, 13.0);
}

#[test]
fn plqr_override_below_floor() {
    let c = catalog();
    let o = Overrides {
        plqr: Some(2.0),
        ..Overrides::default()
    };
    let err = c
        .build_params(c.problem("factoring").unwrap(), c.hardware("QuEra").unwrap(), &o)
        .unwrap_err();
    match err {
        PresetError::InvalidOverride { field, message } => {
            assert_eq!(field, "plqr");
            assert!(message.contains('3'));
        }
        other => panic!("{other}"),
    }
}

#[test]
fn corrupt_directory_is_reported() {
    let dir = std::env::temp_dir().join(format!("qea-presets-{}", std::process::id()));
    let src = concat!(env!("CARGO_MANIFEST_DIR"), "/data");
    fs::create_dir_all(dir.join("roadmaps")).unwrap();
    for f in ["problems.toml", "hardware.toml"] {
        fs::copy(format!("{src}/{f}"), dir.join(f)).unwrap();
    }
    for f in ["ibm.toml", "ionq.toml", "quera.toml"] {
        fs::copy(format!("{src}/roadmaps/{f}"), dir.join("roadmaps").join(f)).unwrap();
    }
    assert_eq!(
        Catalog::<f64>::load_dir(&dir).unwrap().hardware,
        catalog().hardware
    );
    fs::write(dir.join("roadmaps/ibm.toml"), "label = \"ibm\"\npoints = 3\n").unwrap();
    let err = Catalog::<f64>::load_dir(&dir).unwrap_err();
    assert!(matches!(err, PresetError::Corrupt { ref file, .. } if file == "roadmaps/ibm.toml"));
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn vendor_roadmap_years_within_two() {
    let c = catalog();
    let table = [
        ("IBM", 2030.0, 2032.0, 2034.0),
        ("IonQ", 2030.0, 2029.0, 2033.0),
        ("QuEra", 2025.0, 2026.0, 2028.0),
    ];
    for (hw, search, factoring, rsa) in table {
        let h = c.hardware(hw).unwrap();
        let s = c.build_params(c.problem("search").unwrap(), h, &at_2025()).unwrap();
        let f = c.build_params(c.problem("factoring").unwrap(), h, &at_2025()).unwrap();
        let rs = solve_qea(&s).unwrap();
        let rf = solve_qea(&f).unwrap();
        assert_ne!(rs.status, Status::NoAdvantageBy3000);
        let ts = qea_core::solver::report_year(rs.t_star.unwrap());
        let tf = qea_core::solver::report_year(rf.t_star.unwrap());
        let tr = advantage_year_for_size(&f, 2048f64.log10(), Mode::Speed)
            .unwrap()
            .unwrap();
        assert!((ts - search).abs() <= 2.0, "{hw} search {ts}");
        assert!((tf - factoring).abs() <= 2.0, "{hw} factoring {tf}");
        assert!((tr - rsa).abs() <= 2.0, "{hw} rsa {tr}");
    }
}
