use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diatherm"))
        .args(args)
        .env_remove("DIATHERM_CATALOG")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Header row followed by data rows, provenance stripped.
fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn column(table: &[Vec<String>], name: &str) -> Vec<f64> {
    let i = table[0]
        .iter()
        .position(|h| h == name)
        .expect("column present");
    table[1..].iter().map(|r| r[i].parse().unwrap()).collect()
}

#[test]
fn spectrum_range() {
    let t = rows(&stdout(&run(&[
        "spectrum", "H2", "--q", "1.0", "--n", "0..4",
    ])));
    assert_eq!(t[0], ["n", "l", "q", "E_eV"]);
    assert_eq!(t.len(), 6);
    let e = column(&t, "E_eV");
    assert!(((e[0] + 4.1436) / 4.1436).abs() < 0.01, "{}", e[0]);
    assert!(e.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn spectrum_default_stops_at_last_bound_level() {
    let t = rows(&stdout(&run(&["spectrum", "H2"])));
    assert_eq!(t.len() - 1, 9);
    assert!(column(&t, "E_eV").iter().all(|&e| e < 0.0));
}

#[test]
fn spectrum_out_of_range_is_usage_error() {
    let out = run(&["spectrum", "H2", "--n", "100"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("last bound level"));
}

#[test]
fn invalid_q_is_usage_error() {
    assert_eq!(
        run(&["spectrum", "H2", "--q", "0.5"]).status.code(),
        Some(2)
    );
}

#[test]
fn unknown_molecule_is_usage_error() {
    assert_eq!(run(&["spectrum", "Xe2"]).status.code(), Some(2));
}

#[test]
fn published_grid_has_every_cell() {
    let t = rows(&stdout(&run(&["spectrum", "--table2"])));
    assert_eq!(t.len() - 1, 180);
    let dev = column(&t, "rel_deviation");
    assert!(dev.iter().all(|d| d.is_finite()));
}

#[test]
fn lambdamax_h2_matches() {
    let t = rows(&stdout(&run(&["lambdamax", "H2"])));
    assert_eq!(t[1][0], "H2");
    assert_eq!(t[1][2], "8");
    assert_eq!(t[1][5], "match");
}

#[test]
fn thermo_single_beta() {
    let t = rows(&stdout(&run(&[
        "thermo",
        "H2",
        "--beta-min",
        "1",
        "--beta-steps",
        "1",
    ])));
    assert_eq!(t.len(), 2);
    assert_eq!(column(&t, "beta"), [1.0]);
    let lnz = column(&t, "lnZ_closed")[0];
    let f = column(&t, "F")[0];
    assert!((f + lnz).abs() < 1e-12);
}

#[test]
fn thermo_temperature_grid_and_q_column() {
    let t = rows(&stdout(&run(&[
        "thermo",
        "CO",
        "--temp-min",
        "300",
        "--temp-max",
        "3000",
        "--temp-steps",
        "3",
        "--q",
        "1,2",
    ])));
    assert_eq!(&t[0][..3], ["q", "T_K", "beta"]);
    assert_eq!(t.len() - 1, 6);
}

#[test]
fn thermo_conflicting_ranges() {
    let out = run(&["thermo", "H2", "--beta-min", "1", "--temp-min", "300"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn thermo_writes_one_file_per_molecule() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    stdout(&run(&[
        "thermo",
        "H2",
        "CO",
        "--out",
        d,
        "--beta-steps",
        "4",
    ]));
    for name in ["H2", "CO"] {
        let text = std::fs::read_to_string(dir.path().join(format!("thermo_{name}.csv"))).unwrap();
        assert!(text.contains(&format!("# molecule: {name}")));
        assert_eq!(rows(&text).len() - 1, 4);
    }
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 2);
}

#[test]
fn thermo_several_molecules_need_a_directory() {
    assert_eq!(run(&["thermo", "H2", "CO"]).status.code(), Some(2));
}

#[test]
fn sweep_with_no_steps_is_empty() {
    let t = rows(&stdout(&run(&[
        "sweep", "H2", "--param", "c", "--from", "0", "--to", "1", "--steps", "0",
    ])));
    assert_eq!(t, [["c", "n", "l", "E_eV"]]);
}

#[test]
fn sweep_levels_deepen_with_c() {
    let t = rows(&stdout(&run(&[
        "sweep", "H2", "--param", "c", "--from", "0", "--to", "0.5", "--steps", "5", "--n", "0",
    ])));
    let e = column(&t, "E_eV");
    assert_eq!(e.len(), 5);
    assert!(e.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn wavefunction_nodes_and_norm() {
    let text = stdout(&run(&["wavefunction", "CO", "--n", "3"]));
    assert!(text.contains("nodes=3"));
    let t = rows(&text);
    let r = column(&t, "r_A");
    let u = column(&t, "amplitude");
    let integral: f64 = (1..r.len())
        .map(|i| 0.5 * (u[i] * u[i] + u[i - 1] * u[i - 1]) * (r[i] - r[i - 1]))
        .sum();
    assert!((integral - 1.0).abs() < 1e-3, "{integral}");
}

#[test]
fn validate_passes_for_h2() {
    let text = stdout(&run(&["validate"]));
    assert!(!text.contains("FAIL"));
    assert!(text.contains("7 of 7 checks passed"));
}

#[test]
fn literal_lambda_fails_validation() {
    let out = run(&["validate", "H2", "--debug-literal-lambda"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL two-form"));
}

#[test]
fn missing_catalog_file() {
    let out = run(&["--catalog", "/nonexistent/catalog.csv", "spectrum", "H2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn catalog_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("extra.csv");
    std::fs::write(&path, "name,r_e,D_e,m,alpha\nXY,1.2,3.0,6.5,1.4\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_diatherm"))
        .args(["spectrum", "XY", "--n", "0"])
        .env("DIATHERM_CATALOG", &path)
        .output()
        .unwrap();
    let text = stdout(&out);
    assert!(text.contains(&format!("# catalog: {}", Path::new(&path).display())));
    assert_eq!(rows(&text).len(), 2);
}

#[test]
fn calibrate_reduces_residual() {
    let out = run(&["calibrate", "H2"]);
    let text = stdout(&out);
    let t = rows(&text);
    assert_eq!(t.len() - 1, 30);
    let c = column(&t, "c")[0];
    assert!(c > 0.0);
    let worst = column(&t, "rel_deviation")
        .iter()
        .fold(0.0f64, |m, d| m.max(d.abs()));
    assert!(worst < 1e-3, "{worst}");
}

#[test]
fn calibrate_fixed_c() {
    let t = rows(&stdout(&run(&["calibrate", "H2", "--c", "0"])));
    assert!(column(&t, "c").iter().all(|&c| c == 0.0));
    let worst = column(&t, "rel_deviation")
        .iter()
        .fold(0.0f64, |m, d| m.max(d.abs()));
    assert!(worst > 1e-3);
}

#[test]
fn diagnostics_report_both_index_forms() {
    let t = rows(&stdout(&run(&["diagnostics", "H2"])));
    let quantities: Vec<&str> = t[1..].iter().map(|r| r[1].as_str()).collect();
    for q in [
        "eta2_published",
        "eta2_exact",
        "Lambda_literal_eV_A",
        "norm_ratio_n0",
    ] {
        assert!(quantities.contains(&q), "{q}");
    }
}

#[test]
fn output_is_deterministic() {
    let a = stdout(&run(&["spectrum", "--table2"]));
    let b = stdout(&run(&["spectrum", "--table2"]));
    assert_eq!(a, b);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("levels.csv");
    let out = run(&["spectrum", "HCl", "--out", path.to_str().unwrap()]);
    assert!(stdout(&out).is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# diatherm"));
}
