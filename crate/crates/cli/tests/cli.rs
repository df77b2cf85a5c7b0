use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_barbilian"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn dist_from_file() {
    let o = run(&["dist", "--domain", &fixture("unit_circle.json"), "--a", "0,0", "--b", "0.5,0"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next(), Some("1.098612288668"));
}

#[test]
fn dist_negative_coordinates() {
    let o = run(&["dist", "--domain", &fixture("unit_circle.json"), "--a", "-0.5,0", "--b", "0.5,-0"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: f64 = stdout(&o).lines().next().unwrap().parse().unwrap();
    assert!((v - 9f64.ln()).abs() < 1e-11);
}

#[test]
fn two_point_domain_is_degenerate_on_the_axis() {
    let o = run(&["dist", "--domain", &fixture("two_points.json"), "--a", "0,0", "--b", "1,0", "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["value"], 0.0);
    assert_eq!(v["degenerate"], true);
    let m = 2.0 / 5f64.sqrt();
    assert!((v["extrema"]["max"]["ratio"].as_f64().unwrap() - m).abs() < 1e-15);
    assert!((v["extrema"]["min"]["ratio"].as_f64().unwrap() - m).abs() < 1e-15);
}

#[test]
fn axioms_on_two_point_domain_exit_zero() {
    let o = run(&[
        "axioms", "--domain", &fixture("two_points.json"), "--points", "10", "--point", "0,0", "--point", "1,0",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("verdict: pass"), "{out}");
    assert!(out.contains("(0, 0) (1, 0) d=0e0"), "{out}");
}

#[test]
fn axioms_json_schema() {
    let o = run(&["axioms", "--domain", &fixture("unit_circle.json"), "--points", "30", "--seed", "42", "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["report"]["pairs_checked"], 435);
    assert_eq!(v["report"]["triples_checked"], 4060);
    assert_eq!(v["metric_upgrade"]["holds"], true);
    assert!(v["report"]["symmetry_violations"].as_array().unwrap().is_empty());
}

#[test]
fn field_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let csv: PathBuf = dir.path().join("f.csv");
    let args = ["field", "--domain", &fixture("pentagon.json"), "--grid", "9", "--ref", "0.1,0.1"];
    let to_stdout = run(&args);
    let mut with_out = args.to_vec();
    let csv_arg = csv.display().to_string();
    with_out.extend(["--out", &csv_arg]);
    assert!(run(&with_out).status.success());
    assert_eq!(std::fs::read(&csv).unwrap(), to_stdout.stdout);
    let text = stdout(&to_stdout);
    assert_eq!(text.lines().count(), 82);
    assert!(text.ends_with('\n') && !text.ends_with("\n\n"));
    assert!(text.lines().skip(1).any(|l| l.ends_with(',')), "corner cells lie outside the pentagon");
}

#[test]
fn field_rejects_reference_on_source() {
    let o = run(&["field", "--domain", &fixture("unit_circle.json"), "--grid", "4", "--ref", "0,1"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn geodesic_writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, svg) = (dir.path().join("g.csv"), dir.path().join("g.svg"));
    let o = run(&[
        "geodesic", "--domain", &fixture("unit_circle.json"), "--a", "-0.5,0", "--b", "0.5,0", "--grid", "64",
        "--out", &csv.display().to_string(), "--svg", &svg.display().to_string(),
    ]);
    assert!(o.status.success());
    let summary = stdout(&o);
    let length: f64 = summary.lines().next().unwrap().strip_prefix("length: ").unwrap().parse().unwrap();
    assert!(length >= 2.0 * 3f64.ln() - 1e-9);
    let path = std::fs::read_to_string(&csv).unwrap();
    assert!(path.starts_with("x,y\n-0.5,0\n"));
    assert!(std::fs::read_to_string(&svg).unwrap().contains("<path"));
}

#[test]
fn geodesic_grid_too_small() {
    let o = run(&["geodesic", "--domain", &fixture("unit_circle.json"), "--a", "0,0", "--b", "0.5,0", "--grid", "8"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn help_and_unknown_flags() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["dist", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&[]).status.code(), Some(2));
}

#[test]
fn missing_domain_file_names_the_path() {
    let o = run(&["dist", "--domain", "no/such/file.json", "--a", "0,0", "--b", "1,1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no/such/file.json"));
}
