use std::process::{Command, Output};

fn phi4(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_phi4"))
        .args(args)
        .env_remove("PHI4_WORK_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let o = phi4(&["cumulants", "--order", "3", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(phi4(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn invalid_arguments_exit_two() {
    assert_eq!(phi4(&["cumulants", "--order", "9"]).status.code(), Some(2));
    let o = phi4(&["valuation", "pi", "--graph", "not-a-graph", "--cutoff", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = phi4(&["valuation", "pi", "--graph", "fgii", "--cutoff", "2", "--method", "grid", "--grid", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn third_cumulant_table() {
    let o = phi4(&["cumulants", "--order", "3", "--format", "json", "--deterministic"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], "phi4-hopf/1");
    assert_eq!(v["config"]["command"]["cumulants"]["order"], 3);
    assert!(v["config"].get("timestamp").is_none());
    let mut third: Vec<String> = v["result"]["classes"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["n"] == 3)
        .map(|c| c["coefficient"].as_str().unwrap().to_string())
        .collect();
    third.sort();
    assert_eq!(third, ["-1728/1", "-576/1", "-72/1", "-8/1"]);
    assert!(v["result"]["classes"].as_array().unwrap().iter().all(|c| c["connected"] == true));
}

#[test]
fn deterministic_output_is_byte_identical() {
    let args = ["valuation", "mc", "--cutoff", "1", "--samples", "2000", "--seed", "7", "--deterministic"];
    let (a, b) = (phi4(&args), phi4(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let threads = phi4(&[&args[..], &["--threads", "1"]].concat());
    let strip = |o: &Output| {
        let mut v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        let config = v["config"].as_object_mut().unwrap();
        config.remove("threads");
        config.remove("threads_used");
        v
    };
    assert_eq!(strip(&a), strip(&threads));
    let other_seed = phi4(&["valuation", "mc", "--cutoff", "1", "--samples", "2000", "--seed", "8", "--deterministic"]);
    assert_ne!(strip(&a)["result"], strip(&other_seed)["result"]);
}

#[test]
fn counterterm_csv() {
    let o = phi4(&["valuation", "counterterms", "--n-min", "0", "--n-max", "2", "--csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("N,C1,C2,C3,C4"));
    assert_eq!(lines.next(), Some("0,1,6,0.75,4.5"));
    assert_eq!(lines.count(), 2);
}

#[test]
fn valuation_methods_agree() {
    let value = |method: &str| {
        let o = phi4(&["valuation", "pi", "--graph", "x2y", "--cutoff", "2", "--method", method]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["result"]["method"], method);
        v["result"]["value"].as_f64().unwrap()
    };
    let m = value("momentum");
    assert!((value("grid") - m).abs() <= 1e-10 * m);
    assert!((value("spectral") - m).abs() <= 1e-10 * m);
}

#[test]
fn dot_directory_export() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("classes");
    let o = phi4(&["cumulants", "--order", "3", "--format", "dot-dir", "--out-dir", out.to_str().unwrap()]);
    assert!(o.status.success());
    let mut names: Vec<String> = std::fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names.len(), stdout(&o).lines().count());
    assert!(names.len() >= 6);
    assert!(names.iter().all(|n| n.ends_with(".dot")));
    let text = std::fs::read_to_string(out.join(&names[0])).unwrap();
    assert!(text.starts_with("graph G {"));
}

#[test]
fn hopf_worked_example() {
    let o = phi4(&["hopf", "coproduct", "--graph", "0-1,0-1,0-1,0-2,1-2"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"].as_array().unwrap().len(), 3);
    let o = phi4(&["hopf", "verify", "--order", "4"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn borel_commands() {
    let o = phi4(&["borel", "resum", "--eps", "0.1", "--order", "20"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["result"]["relative_error"].as_f64().unwrap() < 1e-4);
    let o = phi4(&["borel", "sokal", "--n-max", "10", "--eps", "0.05,0.1", "--csv"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 1 + 2 * 10);
    let o = phi4(&["borel", "coeffs", "--order", "4", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"]["asymptotic"]["exact"][1], "-3/4");
}

#[test]
fn verify_subset() {
    let o = phi4(&["verify-all", "--level", "fast", "--only", "1,5"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"]["criteria"].as_array().unwrap().len(), 2);
    assert_eq!(phi4(&["verify-all", "--only", "99"]).status.code(), Some(2));
}
