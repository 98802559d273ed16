use serde_json::Value;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mockasym")).args(args).env_remove("MOCKASYM_DIGITS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn expand_r33_csv() {
    let o = run(&["expand", "--which", "R3", "--k", "3", "--N", "49", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let rows: Vec<&str> = s.lines().skip(1).collect();
    assert_eq!(s.lines().next(), Some("n,c"));
    assert_eq!(rows.len(), 50);
    for want in ["3,-1", "11,-2", "21,-4", "35,-9", "49,-16"] {
        assert!(rows.contains(&want), "{want}");
    }
}

#[test]
fn expand_nu_is_weakly_increasing() {
    let o = run(&["expand", "--which", "nu", "--N", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let c: Vec<i64> = stdout(&o).lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(c.len(), 11);
    assert!(c.iter().all(|&x| x >= 0));
    assert!(c.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn expand_json_keeps_big_coefficients_exact() {
    let o = run(&["expand", "--which", "R1", "--N", "1600", "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["k"], 3);
    let last = v["series"]["coeffs"][1600].as_str().unwrap();
    assert!(last.len() > 20);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["expand", "--which", "R1", "--k", "7"]).status.code(), Some(2));
    assert_eq!(run(&["expand", "--which", "R2", "--N", "5"]).status.code(), Some(2));
    assert_eq!(run(&["expand", "--which", "R1", "--k", "2", "--N", "5"]).status.code(), Some(2));
    assert_eq!(run(&["ratios", "--which", "c"]).status.code(), Some(2));
    assert_eq!(run(&["ratios", "--which", "a", "--ns", "0"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "everything"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "wright", "--digits", "10"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "minor-arcs", "--format", "csv"]).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_mockasym"))
        .args(["verify", "wright"])
        .env("MOCKASYM_DIGITS", "9")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn ratios() {
    let o = run(&["ratios", "--which", "a", "--ns", "100,500,1000", "--assert-paper"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["ratios", "--which", "b", "--ns", "100"]);
    let s = stdout(&o);
    assert_eq!(s.lines().count(), 2);
    let ratio: f64 = s.lines().nth(1).unwrap().split(',').nth(3).unwrap().parse().unwrap();
    assert!((ratio - 0.98067).abs() < 5e-5);
    let v = json(&run(&["ratios", "--which", "b", "--ns", "100,500", "--format", "json"]));
    assert_eq!(v["schema"], 1);
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn verify_minor_arcs() {
    let o = run(&["verify", "minor-arcs"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["pass"], true);
    let global = v["cases"].as_array().unwrap().iter().find(|c| c["name"] == "global maximum").unwrap();
    assert_eq!(global["max"], "13/9");
    assert_eq!(v["info"]["with_half"]["all_below_2"], false);
}

#[test]
fn verify_identities() {
    let o = run(&["verify", "identities", "--N", "2000"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["cases"][0]["name"], "R1(3) = nu(-q)");
    assert_eq!(v["cases"][0]["pass"], true);
    assert_eq!(v["cases"][0]["N"], 2000);
}

#[test]
fn verify_transforms_is_seeded() {
    let a = run(&["verify", "transforms", "--samples", "20", "--digits", "30"]);
    assert_eq!(a.status.code(), Some(0));
    let v = json(&a);
    let cases = v["cases"].as_array().unwrap();
    assert!(cases.iter().all(|c| c["pass"] == true));
    assert!(cases.iter().any(|c| c["note"].as_str().unwrap().contains("printed sign")));
    let b = run(&["verify", "transforms", "--samples", "20", "--digits", "30", "--seed", "0"]);
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["verify", "transforms", "--samples", "20", "--digits", "30", "--seed", "1"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn verify_monotone_and_wright() {
    let o = run(&["verify", "monotone", "--N", "300"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["cases"][1]["note"], "conjecture support");
    let o = run(&["verify", "wright"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["cases"].as_array().unwrap().len(), 4);
}

/// Two of the three rate fits are not yet in their asymptotic regime at
/// v = 0.02, so the suite reports them and exits 1.
#[test]
fn verify_cusp_reports_each_fit() {
    let o = run(&["verify", "cusp"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    let cases = v["cases"].as_array().unwrap();
    assert_eq!(cases.len(), 3);
    assert_eq!(cases[0]["pass"], true);
    assert!(cases.iter().all(|c| c["rel_err"].is_number() && c["exact"].is_string()));
}

#[test]
fn out_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("r.csv");
    let o = run(&["expand", "--which", "phi", "--N", "5", "--out", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&p).unwrap(), "n,c\n0,1\n1,2\n2,2\n3,3\n4,4\n5,4\n");
    let o = run(&["expand", "--which", "phi", "--N", "5", "--out", dir.path().join("no/such/dir").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
