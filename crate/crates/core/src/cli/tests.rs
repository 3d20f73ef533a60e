use std::path::{Path, PathBuf};

use tempfile::TempDir;

use super::*;

fn call(args: &[&str]) -> Result<(), (i32, String)> {
    execute(std::iter::once("pdrbc").chain(args.iter().copied()))
}

fn code(args: &[&str]) -> i32 {
    call(args).err().map_or(0, |(c, _)| c)
}

/// Runs with `--out` pointed into `dir` and returns the written text.
fn output(dir: &TempDir, args: &[&str]) -> String {
    let out = dir.path().join("out");
    let mut all = args.to_vec();
    all.extend(["--out", out.to_str().unwrap()]);
    call(&all).unwrap();
    std::fs::read_to_string(out).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn identity_json() -> String {
    let ch = DiscreteChannel::from_fn(crate::info::Alphabets::binary(), |x, _, y1, y2, y3| {
        (x == y1 && x == y2 && x == y3) as u8 as f64
    })
    .unwrap();
    serde_json::to_string(&ch.to_file()).unwrap()
}

#[test]
fn type3_gaussian_region_contains_half_split_corner() {
    let dir = tempfile::tempdir().unwrap();
    let text = output(&dir, &["region-gaussian", "--type", "3", "--p", "1", "--s1", "0.25", "--s2", "1", "--grid", "41"]);
    assert!(text.starts_with("r1_bits,r2_bits\n"));
    let region = RateRegion::from_csv(&text, "cli").unwrap();
    assert!(region
        .boundary()
        .iter()
        .any(|p| (p.r1 - 0.792481250).abs() < 1e-9 && (p.r2 - 0.207518750).abs() < 1e-9));
}

#[test]
fn classify_identity_channel() {
    let dir = tempfile::tempdir().unwrap();
    let ch = write(dir.path(), "id.json", &identity_json());
    let text = output(&dir, &["classify", "--channel", ch.to_str().unwrap()]);
    assert_eq!(text.lines().next(), Some("TypeI"));
    assert!(text.contains("TypeIII deviations"));
}

#[test]
fn fm_on_split_system_prints_five_rows() {
    let dir = tempfile::tempdir().unwrap();
    let sys = write(dir.path(), "sys.json", &serde_json::to_string(&type1_split_system().to_json()).unwrap());
    let sys = sys.to_str().unwrap();
    let text = output(&dir, &["fm", "--system", sys, "--eliminate", "R1p,R1pp", "--format", "text"]);
    assert_eq!(text.lines().filter(|l| l.contains("<=")).count(), 5);
    assert!(text.contains("R1 + R2 <= A1 + A3"));

    let json: serde_json::Value = serde_json::from_str(&output(&dir, &["fm", "--system", sys, "--eliminate", "R1p,R1pp"])).unwrap();
    assert_eq!(json["vars"], serde_json::json!(["R1", "R2"]));
    assert_eq!(json["ineqs"].as_array().unwrap().len(), 5);

    let builtin = output(&dir, &["fm", "--builtin", "type1-split", "--eliminate", "R1p,R1pp"]);
    assert_eq!(serde_json::from_str::<serde_json::Value>(&builtin).unwrap(), json);

    let (c, msg) = call(&["fm", "--system", sys, "--eliminate", "R9"]).unwrap_err();
    assert_eq!(c, 1);
    assert!(msg.starts_with("pdrbc fm: fm_eliminate:"), "{msg}");
}

#[test]
fn compare_csv_regions() {
    let dir = tempfile::tempdir().unwrap();
    let tri = write(dir.path(), "tri.csv", "r1_bits,r2_bits\n0,1\n1,0\n");
    let sq = write(dir.path(), "sq.csv", "r1_bits,r2_bits\n1,1\n");
    let (tri, sq) = (tri.to_str().unwrap(), sq.to_str().unwrap());
    assert_eq!(output(&dir, &["compare", "--a", tri, "--b", tri]), "subset: true, violation 0\n");
    assert!(output(&dir, &["compare", "--a", tri, "--b", sq]).starts_with("subset: true"));
    assert!(output(&dir, &["compare", "--a", sq, "--b", tri]).starts_with("subset: false"));
    assert_eq!(code(&["compare", "--a", "builtin:nothing", "--b", tri]), 2);
}

#[test]
fn builtin_comparison_of_the_two_type1_forms() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["compare", "--a", "builtin:bhaskaran", "--b", "builtin:type1", "--s1", "0.5", "--s2", "1", "--s3", "0.2", "--grid", "41"];
    assert_eq!(output(&dir, &args), "subset: true, violation 0\n");
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["nonsense"]), 2);
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["region-gaussian", "--type", "7"]), 2);
    assert_eq!(code(&["region-gaussian", "--type", "1", "--s1", "1", "--s2", "1"]), 2);
    let (c, msg) = call(&["region-gaussian", "--type", "1", "--s1", "2", "--s2", "1", "--s3", "0.5"]).unwrap_err();
    assert_eq!(c, 1);
    assert!(msg.starts_with("pdrbc region-gaussian:"), "{msg}");
    assert_eq!(code(&["classify", "--channel", "/nonexistent/ch.json"]), 1);
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"x":2,"x3":1,"y1":1,"y2":1,"y3":1,"pmf":[0.5,0.6]}"#);
    assert_eq!(code(&["classify", "--channel", bad.to_str().unwrap()]), 1);
    assert_eq!(code(&["simulate", "--scheme", "1", "--s1", "0.5", "--s2", "1", "--s3", "0.2"]), 2);
}

#[test]
fn budget_parsing() {
    assert_eq!(parse_budget(None).ok(), Some(crate::dm::DEFAULT_BUDGET));
    assert_eq!(parse_budget(Some("2e7")).ok(), Some(20_000_000));
    assert!(matches!(parse_budget(Some("lots")), Err(Failure::Usage(_))));
    assert!(matches!(parse_budget(Some("0")), Err(Failure::Usage(_))));
}

#[test]
fn region_dm_traces_identity_channel() {
    let dir = tempfile::tempdir().unwrap();
    let ch = write(dir.path(), "id.json", &identity_json());
    let ch = ch.to_str().unwrap();
    let text = output(&dir, &["region-dm", "--channel", ch, "--type", "2", "--resolution", "2", "--card-u", "2"]);
    let region = RateRegion::from_csv(&text, "dm").unwrap();
    assert!((region.max_r2().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(code(&["region-dm", "--channel", ch, "--type", "1", "--resolution", "0"]), 1);
}

#[test]
fn outputs_replace_files_in_place() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("region.csv");
    std::fs::write(&out, "stale").unwrap();
    call(&["region-gaussian", "--type", "2", "--s1", "0.5", "--s2", "1", "--s3", "0.7", "--out", out.to_str().unwrap()]).unwrap();
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("r1_bits,r2_bits\n"));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn simulate_writes_report_and_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let base = ["simulate", "--scheme", "2", "--s1", "0.5", "--s2", "1", "--s3", "0.7", "--alpha", "0.3", "--beta", "0.6"];
    let mut args = base.to_vec();
    args.extend(["--n", "8", "--trials", "10", "--r1", "0.25", "--r2", "0.125"]);
    let report: serde_json::Value = serde_json::from_str(&output(&dir, &args)).unwrap();
    assert_eq!(report["trials"], 10);
    assert_eq!(report["bits"], serde_json::json!([2, 1, 0]));

    let mut args = base.to_vec();
    args.extend(["--n", "8", "--trials", "10", "--sweep", "0:0,0.25:0.125", "--csv", csv.to_str().unwrap()]);
    let reports: serde_json::Value = serde_json::from_str(&output(&dir, &args)).unwrap();
    assert_eq!(reports.as_array().unwrap().len(), 2);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("r1,r2,relay_err,rx1_err,rx2_err,overall"));
    assert_eq!(lines.next(), Some("0,0,0,0,0,0"));

    let mut args = base.to_vec();
    args.extend(["--n", "8", "--r1", "0.3"]);
    let (c, msg) = call(&args).unwrap_err();
    assert_eq!(c, 1);
    assert!(msg.contains("whole number of bits"), "{msg}");
    assert_eq!(code(&["simulate", "--scheme", "3", "--s1", "1", "--s2", "2", "--alpha", "0.5", "--sweep", "1-2"]), 2);
}
