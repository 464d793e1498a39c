use std::path::PathBuf;
use std::process::{Command, Output};

use conestrat::report::AnalysisReport;
use conestrat::strata::StratumSize;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn conestrat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conestrat")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> AnalysisReport {
    AnalysisReport::from_json(std::str::from_utf8(&out.stdout).unwrap()).expect("stdout is a report")
}

#[test]
fn analyze_square_cone_succeeds() {
    let out = conestrat(&["analyze", data("square_cone.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r.report_version, 1);
    assert!(r.all_passed);
    let sizes = &r.stratification.as_ref().unwrap().stratum_sizes;
    assert_eq!(sizes, &[1, 4, 4, 1].map(StratumSize::Finite));
}

#[test]
fn every_bundled_document_but_the_indefinite_one_passes() {
    for entry in std::fs::read_dir(data("")).unwrap() {
        let path = entry.unwrap().path();
        let out = conestrat(&["analyze", path.to_str().unwrap()]);
        let expected = if path.ends_with("siegel_indefinite.json") { 2 } else { 0 };
        assert_eq!(out.status.code(), Some(expected), "{}", path.display());
    }
}

#[test]
fn input_errors_exit_with_one() {
    let dir = std::env::temp_dir().join(format!("conestrat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"ambient_dim": 2, "generators": [["1", "x"]]}"#).unwrap();
    let out = conestrat(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("$.generators[0][1]"));

    assert_eq!(conestrat(&["analyze", dir.join("missing.json").to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(conestrat(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(conestrat(&["classical", "--term", "-1=2", "--term", "0=1", "--term", "1=0.5"]).status.code(), Some(1));
    assert_eq!(conestrat(&["siegel"]).status.code(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn violated_enforced_check_exits_with_two() {
    let out = conestrat(&["analyze", data("siegel_indefinite.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let r = report(&out);
    assert!(!r.all_passed);
    assert!(r.checks.iter().any(|c| c.enforced && !c.passed));
}

#[test]
fn classical_negative_degrees() {
    let out = conestrat(&["classical", "--term", "-2=1", "--term", "-3=0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let check = report(&out).classical.unwrap();
    assert_eq!((check.winding, check.index), (-2, 2));
}

#[test]
fn report_file_and_markdown() {
    let path = std::env::temp_dir().join(format!("conestrat-report-{}.md", std::process::id()));
    let out = conestrat(&[
        "stratify",
        data("quadrant3.json").to_str().unwrap(),
        "--format",
        "markdown",
        "--report",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let md = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert!(md.starts_with("# Analysis of `quadrant3`"));
    assert!(md.contains("## Stratification"));
}

#[test]
fn metric_subcommand_reports_polarity() {
    let out = conestrat(&["metric", data("quadrant2.json").to_str().unwrap(), data("wedge.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let p = &r.metric.polarity[0];
    // the ray (1, 0) is farthest from the wedge, at the sine of its angle to (2, 1)
    let expected = (1.0f64 / 5.0).sqrt();
    assert!((p.h_primal - expected).abs() < 5e-3, "{}", p.h_primal);
    assert!(p.gap <= p.tolerance);
}

#[test]
fn siegel_lorentz_identification() {
    let out = conestrat(&["siegel", "--m", "2", "--samples", "2000", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(report(&out).siegel.is_some());
}

#[test]
fn metric_on_two_rays_reports_the_closed_form() {
    let dir = std::env::temp_dir().join(format!("conestrat-rays-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (a, b) = (dir.join("a.json"), dir.join("b.json"));
    std::fs::write(&a, r#"{"ambient_dim": 2, "generators": [["1", "0"]]}"#).unwrap();
    std::fs::write(&b, r#"{"ambient_dim": 2, "generators": [["3", "4"]]}"#).unwrap();
    let out = conestrat(&["metric", a.to_str().unwrap(), b.to_str().unwrap()]);
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(out.status.code(), Some(0));
    let pair = &report(&out).metric.ray_pairs[0];
    // angle with cos 3/5
    assert!((pair.closed_form - 0.8).abs() < 1e-12);
    assert!((pair.h - 0.8).abs() < 5e-3);
}

#[test]
fn metric_rejects_curved_cones() {
    let out = conestrat(&["metric", data("lorentz3.json").to_str().unwrap(), data("quadrant3.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not a polyhedral cone"));
}
