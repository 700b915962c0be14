use std::path::PathBuf;
use std::process::{Command, Output};

use gaussmap::analyzer::Outcome;
use gaussmap::catalog::builtin;
use gaussmap::expr::parse_surface;
use gaussmap::geometry::frame_at;
use gaussmap::verify::oracle::riemann_curvature;
use gaussmap_cli::{Report, CSV_HEADER};

fn gaussmap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gaussmap")).args(args).output().expect("binary runs")
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn load_errors_exit_2() {
    let o = gaussmap(&["analyze", "missing.surf"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("missing.surf"));

    let o = gaussmap(&["analyze", "catalog:nope"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("generic-minimal"));

    let o = gaussmap(&["analyze", "catalog:plane", "--grid", "2"]);
    assert_eq!(o.status.code(), Some(2));

    let o = gaussmap(&["fields", "missing.surf"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn engine_errors_exit_3() {
    let o = gaussmap(&["analyze", "catalog:riemannian-graph"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("not Lorentzian"));
    // the report is still written
    let r: Report = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.excluded.len(), 289);
}

#[test]
fn unknown_suite_exits_2_and_lists_suites() {
    let o = gaussmap(&["verify", "bogus"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    for s in ["algebra", "jets", "engine", "identities", "classification", "all"] {
        assert!(err.contains(s), "{err}");
    }
}

#[test]
fn verify_algebra_exits_0() {
    let o = gaussmap(&["verify", "algebra", "--seed", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("plucker-identity") && out.contains("0 failed"));
}

#[test]
fn verdicts_do_not_change_the_exit_code() {
    let o = gaussmap(&["analyze", "catalog:nonminimal-graph"]);
    assert_eq!(o.status.code(), Some(0));
    let r: Report = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(!r.minimal && r.battery.is_none());
    assert_eq!(r.verdict("lemma31").unwrap().outcome, Outcome::Inconclusive);
}

#[test]
fn plane_is_harmonic() {
    let o = gaussmap(&["analyze", "catalog:plane"]);
    assert_eq!(o.status.code(), Some(0));
    let r: Report = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.verdict("pointwise-1-type").unwrap().label, "harmonic");
    assert_eq!(r.verdict("null-2-type").unwrap().label, "harmonic");
}

#[test]
fn json_report_round_trips_exactly() {
    let path = tmp("roundtrip.json");
    let o = gaussmap(&["analyze", "catalog:generic-minimal", "--json", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("lemma31"));
    let text = std::fs::read_to_string(&path).unwrap();
    let r: Report = serde_json::from_str(&text).unwrap();
    assert_eq!(r.to_json(), text);
    // every number in the text parses back to the same double
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let again: serde_json::Value = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
    assert_eq!(v, again);
    let l31 = r.verdict("lemma31").unwrap();
    assert!(l31.holds() && l31.worst_residual <= 1e-8);
    assert_eq!(r.grid.n_s, 17);
}

#[test]
fn reports_are_identical_across_thread_counts() {
    let one = gaussmap(&["--threads", "1", "analyze", "catalog:degenerate-null"]);
    let three = gaussmap(&["--threads", "3", "analyze", "catalog:degenerate-null"]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, three.stdout);
    let r: Report = serde_json::from_str(&stdout(&one)).unwrap();
    assert!(r.timings.is_none());
    let b = r.battery.unwrap();
    assert!(b.consistent && b.predicates.iter().all(|v| v.holds()));
}

#[test]
fn timings_are_opt_in() {
    let o = gaussmap(&["analyze", "catalog:plane", "--grid", "5", "--timings"]);
    let r: Report = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(r.timings.unwrap().sampling_seconds >= 0.0);
}

#[test]
fn report_echo_reruns_to_the_same_report() {
    let o = gaussmap(&["analyze", "catalog:hyperplane-minimal", "--grid", "7", "--domain", "-0.5", "0.5", "-0.6", "0.6"]);
    assert_eq!(o.status.code(), Some(0));
    let r: Report = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.grid.domain.as_array(), [-0.5, 0.5, -0.6, 0.6]);
    let path = tmp("echo.surf");
    std::fs::write(&path, &r.surface.definition).unwrap();
    let again = gaussmap(&["analyze", path.to_str().unwrap(), "--grid", "7", "--domain", "-0.5", "0.5", "-0.6", "0.6"]);
    assert_eq!(o.stdout, again.stdout);
}

#[test]
fn custom_tolerance_is_recorded() {
    let o = gaussmap(&["analyze", "catalog:plane", "--grid", "3", "--tol", "1e-6"]);
    let r: Report = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.grid.tol.identity_tol, 1e-6);
    let o = gaussmap(&["analyze", "catalog:plane", "--tol", "1e-12"]);
    assert_eq!(o.status.code(), Some(2));
}

fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect()
}

#[test]
fn fields_csv() {
    let o = gaussmap(&["fields", "catalog:plane", "--grid", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 25);
    assert!(rows.iter().all(|r| r.len() == 7 && r[3..].iter().all(|x| *x == 0.0)));

    let path = tmp("degenerate.csv");
    let o = gaussmap(&["fields", "catalog:degenerate-null", "--csv", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&std::fs::read_to_string(&path).unwrap());
    assert_eq!(rows.len(), 289);
    assert!(rows.iter().all(|r| r[3].abs() <= 1e-10 && r[4].abs() <= 1e-10 && r[6] <= 1e-10));

    let o = gaussmap(&["fields", "catalog:generic-minimal", "--grid", "5"]);
    let rows = csv_rows(&stdout(&o));
    let surf = builtin("generic-minimal").unwrap();
    for r in &rows {
        let fp = frame_at(&surf, (r[0], r[1])).unwrap();
        let k = riemann_curvature(&fp.x_jets);
        assert!((r[3] - k).abs() <= 1e-9 * k.abs().max(1.0));
    }
    let (lo, hi) = rows.iter().fold((f64::MAX, f64::MIN), |(l, h), r| (l.min(r[3]), h.max(r[3])));
    assert!(hi - lo > 1e-2);
}

#[test]
fn catalog_listing() {
    let o = gaussmap(&["catalog"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "catalog:degenerate-null"));
    let o = gaussmap(&["catalog", "generic-minimal"]);
    let s = parse_surface(&stdout(&o)).unwrap();
    assert_eq!(s, builtin("generic-minimal").unwrap());
}
