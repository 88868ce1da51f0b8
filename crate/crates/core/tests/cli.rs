use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_harmonic-range")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn eval_origin_of_exp_wedge() {
    let out = run(&["eval", "--map", "u=re(z); v=im(exp(z))", "--z", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["values"][0]["w"], "0+0i");
}

#[test]
fn log2_check_exits_zero() {
    let out = run(&["check", "--theorem", "log2", "--n", "1000000", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["consistent"], true);
    assert_eq!(doc["verdicts"][0]["sampling"]["points"], 1_000_000);
}

#[test]
fn directions_of_exp_exp_cross() {
    let out = run(&["directions", "--catalog", "exp-exp-cross"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["expected"]["matches"], true);
    assert!(doc["expected"]["hausdorff_deg"].as_f64().unwrap() <= 2.0);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--map", "u=re(z", "--z", "0"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--catalog", "no-such-map", "--z", "0"]).status.code(), Some(2));
    let out = run(&["eval", "--z", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(json(&out)["error"].is_string());
}

#[test]
fn mismatched_verdict_exits_one() {
    // the estimate is a bin or so off the stated set, far more than 0.001°
    let out = run(&["directions", "--catalog", "exp-wedge", "--match-tol-deg", "0.001"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["expected"]["matches"], false);
}

#[test]
fn every_subcommand_has_a_schema() {
    for cmd in [
        "eval", "sample", "directions", "antipodal", "normalize", "lewis-discs", "rescale", "zeros", "local-structure",
        "tracts", "dependence", "phi", "check", "catalog", "plot",
    ] {
        let out = run(&[cmd, "--schema"]);
        assert_eq!(out.status.code(), Some(0), "{cmd}");
        let s = json(&out);
        assert_eq!(s["type"], "object", "{cmd}");
        assert!(s["properties"]["command"].is_object(), "{cmd}");
    }
}

#[test]
fn antipodal_of_lewis_cross_is_empty() {
    let doc = json(&run(&["antipodal", "--catalog", "lewis-cross"]));
    assert_eq!(doc["has_antipodal_pair"], false);
    assert!(doc["gap_alpha"].as_f64().unwrap() > 0.0);
}

#[test]
fn artifacts_are_written_only_on_request() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    let out = run(&["sample", "--catalog", "identity", "--radius", "2", "--n-grid", "64", "--out", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("z_re,z_im,w_re,w_im\n"));
    assert_eq!(text.lines().count() - 1, json(&out)["points"].as_u64().unwrap() as usize);

    let svg = dir.path().join("r.svg");
    let out = run(&["plot", "--catalog", "exp-wedge", "--n-grid", "64", "--out", svg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.contains(r#"viewBox="0 0 800 800""#));

    let zcsv = dir.path().join("z.csv");
    let out = run(&["zeros", "--map", "u=re(z^2); v=im(z)", "--out", zcsv.to_str().unwrap()]);
    assert_eq!(json(&out)["curves"].as_array().unwrap().len(), 2);
    assert!(std::fs::read_to_string(&zcsv).unwrap().starts_with("curve,x,y\n"));
}

#[test]
fn config_file_supplies_missing_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# evaluation point\nz = 1+i\nmap = u=re(z^2); v=im(z^2)\n").unwrap();
    let doc = json(&run(&["eval", "--config", cfg.to_str().unwrap()]));
    assert_eq!(doc["values"][0]["w"], "0+2i");
    // command-line flags win
    let doc = json(&run(&["eval", "--config", cfg.to_str().unwrap(), "--z", "2"]));
    assert_eq!(doc["values"][0]["w"], "4+0i");
}

#[test]
fn thread_cap_is_honored_and_output_unchanged() {
    let args = ["directions", "--catalog", "exp-wedge", "--n-grid", "128"];
    let a = run(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_harmonic-range")).args(args).env("HARMONIC_RANGE_THREADS", "1").output().unwrap();
    assert_eq!(a.stdout, b.stdout);
    let bad = Command::new(env!("CARGO_BIN_EXE_harmonic-range")).args(args).env("HARMONIC_RANGE_THREADS", "zero").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn structure_commands() {
    let doc = json(&run(&["local-structure", "--map", "u=re(z^3); v=im(z)"]));
    assert_eq!(doc["structure"]["multiplicity"], 3);
    let out = run(&["tracts", "--map", "u=re(z^2 + 5*z); v=im(z)", "--radius", "100"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["report"]["sign_changes"], 4);
    let doc = json(&run(&["dependence", "--catalog", "dependent-3", "--n-grid", "64"]));
    assert!((doc["report"]["b"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-12);
    let doc = json(&run(&["normalize", "--arcs-deg", "60,60"]));
    assert!(doc["normalization"].is_object());
    let doc = json(&run(&["catalog", "--name", "lewis-cross"]));
    assert_eq!(doc["entry"]["verified"], true);
}

#[test]
fn lewis_and_rescale_commands() {
    let out = run(&["lewis-discs", "--map", "u=re(z^3); v=im(z)"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["disc"]["c0"].as_f64().unwrap() <= 100.0);
    let out = run(&["rescale", "--catalog", "identity", "--schedule", "2,4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["all_hold"], true);
}

#[test]
fn suite_on_a_nonconstant_map_is_consistent() {
    let out = run(&["check", "--catalog", "exp-exp-cross", "--theorem", "suite", "--n-grid", "128"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let ids: Vec<&str> = doc["summary"].as_array().unwrap().iter().map(|s| s["theorem"].as_str().unwrap()).collect();
    assert_eq!(ids, ["lewis", "thm_antipodal", "thm_halfplane", "cor_alpha", "thm_murdoch_kuran"]);
}
