use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use vkwave_cli::{run_scenario, Scenario, Status};

fn scenario_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

fn vkwave(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vkwave")).args(args).output().unwrap()
}

fn check(name: &str, extra: &[&str]) -> Output {
    let path = scenario_path(name);
    let mut args = vec!["check", "--scenario", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    vkwave(&args)
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn status_of<'a>(report: &'a serde_json::Value, name: &str) -> &'a str {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check {name}"))["status"]
        .as_str()
        .unwrap()
}

#[test]
fn reference_wave_passes_every_check() {
    let out = check("acceleration_wave.toml", &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    assert_eq!(r["summary"]["failed"], 0);
    assert_eq!(r["summary"]["passed"], r["summary"]["checks"]);
    assert_eq!(r["tool"]["name"], "vkwave");
}

#[test]
fn violated_energy_relation_fails_only_the_relations() {
    let out = check("energy_relation_violated.toml", &[]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    assert_eq!(status_of(&r, "ej_oj"), "fail");
    assert_eq!(status_of(&r, "energy_jump"), "fail");
    assert_eq!(status_of(&r, "dynamic_jumps"), "pass");
    assert_eq!(status_of(&r, "pde_residual"), "pass");
    assert_eq!(status_of(&r, "fundamental_balances"), "pass");
    let ej = r["checks"].as_array().unwrap().iter().find(|c| c["name"] == "ej_oj").unwrap();
    let rec = |label: &str| ej["records"].as_array().unwrap().iter().find(|x| x["label"] == label).unwrap().clone();
    // DEhω⁴c₁² − 4c₂² = 1 − 0.64
    assert!((rec("energy")["residual"].as_f64().unwrap() - 0.36).abs() < 1e-12);
    assert_eq!(rec("scaling")["pass"], true);
}

#[test]
fn smooth_wave_passes() {
    assert_eq!(check("smooth_wave.toml", &[]).status.code(), Some(0));
}

#[test]
fn summary_counts_match_records() {
    for name in ["acceleration_wave.toml", "energy_relation_violated.toml", "smooth_wave.toml"] {
        let r = json(&check(name, &[]));
        let checks = r["checks"].as_array().unwrap();
        let count = |s: &str| checks.iter().filter(|c| c["status"] == s).count() as u64;
        assert_eq!(r["summary"]["checks"].as_u64().unwrap(), checks.len() as u64);
        assert_eq!(r["summary"]["passed"].as_u64().unwrap(), count("pass"));
        assert_eq!(r["summary"]["failed"].as_u64().unwrap(), count("fail"));
        assert_eq!(r["summary"]["errors"].as_u64().unwrap(), count("error"));
        let records: usize = checks.iter().map(|c| c["records"].as_array().unwrap().len()).sum();
        assert_eq!(r["summary"]["records"].as_u64().unwrap(), records as u64);
        for (i, c) in checks.iter().enumerate() {
            assert_eq!(c["index"].as_u64().unwrap(), i as u64);
        }
    }
}

#[test]
fn output_is_byte_identical_across_runs() {
    for format in ["json", "csv", "human"] {
        let a = check("smooth_wave.toml", &["--format", format]);
        let b = check("smooth_wave.toml", &["--format", format]);
        assert_eq!(a.stdout, b.stdout, "{format}");
        assert!(!a.stdout.is_empty());
    }
}

#[test]
fn seed_flag_changes_sampled_points_only() {
    let base = json(&check("smooth_wave.toml", &[]));
    let same = json(&check("smooth_wave.toml", &["--seed", "7"]));
    assert_eq!(base, same);
    let other = json(&check("smooth_wave.toml", &["--seed", "8"]));
    assert_eq!(other["scenario"]["seed"], 8);
    assert_ne!(base["checks"][1]["records"], other["checks"][1]["records"]);
    assert_eq!(base["checks"][0]["records"], other["checks"][0]["records"]);
}

#[test]
fn timing_is_opt_in() {
    assert!(json(&check("smooth_wave.toml", &[])).get("duration_seconds").is_none());
    let timed = json(&check("smooth_wave.toml", &["--timing"]));
    assert!(timed["duration_seconds"].as_f64().unwrap() >= 0.0);
}

#[test]
fn csv_has_one_row_per_check() {
    let out = check("acceleration_wave.toml", &["--format", "csv"]);
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    let headers = rdr.headers().unwrap().clone();
    assert_eq!(&headers[0], "index");
    assert_eq!(&headers[3], "status");
    let rows: Vec<_> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().all(|r| &r[3] == "pass"));
}

#[test]
fn human_table_has_fixed_columns() {
    let out = check("energy_relation_violated.toml", &["--format", "human"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<_> = text.lines().collect();
    let status_col = lines[1].find("status").unwrap();
    for line in &lines[2..10] {
        let s = &line[status_col..status_col + 4];
        assert!(s == "pass" || s == "fail", "{line}");
    }
    assert!(text.contains("8 checks: 5 passed, 3 failed, 0 errors"));
}

#[test]
fn out_flag_writes_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("report.json");
    let out = check("acceleration_wave.toml", &["--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written: serde_json::Value = serde_json::from_slice(&std::fs::read(&target).unwrap()).unwrap();
    assert_eq!(written["summary"]["failed"], 0);
}

#[test]
fn scenario_echo_reruns_to_the_same_report() {
    let dir = tempfile::tempdir().unwrap();
    let first = check("energy_relation_violated.toml", &[]);
    let report = json(&first);
    let echo = dir.path().join("echo.json");
    std::fs::write(&echo, serde_json::to_vec(&report["scenario"]).unwrap()).unwrap();

    let original = Scenario::from_path(&scenario_path("energy_relation_violated.toml")).unwrap();
    assert_eq!(Scenario::from_path(&echo).unwrap(), original);

    let second = vkwave(&["check", "--scenario", echo.to_str().unwrap()]);
    assert_eq!(second.status.code(), Some(1));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn validation_errors_exit_2_with_a_field_path() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(scenario_path("smooth_wave.toml"))
        .unwrap()
        .replace("kind = \"dynamic_jumps\"", "kind = \"table2\"\nlaws = [\"galilean_x2\"]");
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, text).unwrap();
    let out = vkwave(&["check", "--scenario", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("checks[2].laws[0]"), "{err}");

    let missing = vkwave(&["check", "--scenario", dir.path().join("nope.toml").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(2));

    std::fs::write(&bad, "[plate]\nyoungs_modulus = \"stiff\"\n").unwrap();
    assert_eq!(vkwave(&["check", "--scenario", bad.to_str().unwrap()]).status.code(), Some(2));

    let path = scenario_path("smooth_wave.toml");
    let wrong_format = vkwave(&["check", "--scenario", path.to_str().unwrap(), "--format", "xml"]);
    assert_eq!(wrong_format.status.code(), Some(2));
}

#[test]
fn runtime_errors_are_reported_and_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(scenario_path("acceleration_wave.toml"))
        .unwrap()
        .replace(
            "sample = { count = 16, x1 = [-2.0, 2.0], x2 = [-2.0, 2.0], t = [-1.0, 1.0] }",
            "points = [[0.5, 0.0, 0.5]]",
        );
    let path = dir.path().join("on_front.toml");
    std::fs::write(&path, text).unwrap();
    let out = vkwave(&["check", "--scenario", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let r = json(&out);
    assert_eq!(r["checks"][0]["status"], "error");
    assert!(r["checks"][0]["error"].as_str().unwrap().contains("front"));
    // the remaining checks still ran
    assert_eq!(r["summary"]["passed"], 7);
}

#[test]
fn zero_scenario_library_run() {
    let s = Scenario::from_toml_str(
        "[plate]\nyoungs_modulus = 5.0\npoisson_ratio = 0.2\nthickness = 0.5\nareal_density = 2.0\n\
         [solution]\nfamily = \"zero\"\n\
         [front]\nkind = \"circle\"\ncenter = [0.1, 0.0]\nradius = 0.5\n\
         [region]\nx1 = [-1.0, 1.0]\nx2 = [-1.0, 1.0]\n\
         [[checks]]\nkind = \"pde_residual\"\n[[checks]]\nkind = \"conservation\"\nsample = { count = 2 }\n\
         [[checks]]\nkind = \"dynamic_jumps\"\n[[checks]]\nkind = \"balance_jump\"\n\
         [[checks]]\nkind = \"table2\"\n[[checks]]\nkind = \"balance\"\n",
    )
    .unwrap();
    let r = run_scenario(&s).unwrap();
    assert!(r.checks.iter().all(|c| c.status == Status::Pass));
    assert!(r.checks.iter().flat_map(|c| &c.records).all(|x| x.residual == 0.0));
}
