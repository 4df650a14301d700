use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bryant(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bryant")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn without_timestamp(text: &str) -> String {
    text.lines().filter(|l| !l.trim_start().starts_with("\"timestamp\"")).collect::<Vec<_>>().join("\n")
}

#[test]
fn default_certification_is_verified_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (p1, p2) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for p in [&p1, &p2] {
        let o = bryant(&["certify", "--out", p.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    let cert = read_json(&p1);
    assert_eq!(cert["verdict"]["status"], "VERIFIED");
    assert_eq!(cert["params"]["n"], 4000);
    assert_eq!(cert["sweep"].as_array().unwrap().len(), 50);
    let (t1, t2) = (std::fs::read_to_string(&p1).unwrap(), std::fs::read_to_string(&p2).unwrap());
    assert!(t1.contains("\"timestamp\""));
    assert_eq!(without_timestamp(&t1), without_timestamp(&t2));
}

#[test]
fn failed_certification_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("cert.json");
    let o = bryant(&["certify", "--epsilon-scale", "1e6", "--out", p.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let cert = read_json(&p);
    assert_eq!(cert["verdict"]["status"], "FAILED");
    assert!(cert["verdict"]["reason"].as_str().unwrap().starts_with("endpoint sign not separable"));
}

#[test]
fn usage_errors_exit_with_one() {
    let o = bryant(&["certify", "--c1", "0.06", "--c2", "0.05"]);
    assert_eq!(code(&o), 1);
    assert!(!o.stderr.is_empty());
    for args in [
        &["certify", "--bogus"][..],
        &["frobnicate"],
        &["certify", "--n", "many"],
        &["certify", "--n", "4001"],
        &["bounds", "--override-bounds", "1,2,3"],
        &["bounds", "--override-bounds", "1,1,1,1"],
        &["mesh", "--preset", "sphere", "--out", "x.obj"],
        &["sweep", "--grid", "0.05:0.04:0.001"],
    ] {
        assert_eq!(code(&bryant(args)), 1, "{args:?}");
    }
}

#[test]
fn help_shows_defaults() {
    let o = bryant(&["certify", "--help"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    for d in ["[default: 1.78]", "[default: 0.0495]", "[default: 0.0505]", "[default: 4000]", "[default: 50]"] {
        assert!(text.contains(d), "{d} missing from help");
    }
    for sub in ["sweep", "bounds", "integrate", "mesh"] {
        assert_eq!(code(&bryant(&[sub, "--help"])), 0);
    }
}

#[test]
fn sweep_writes_eleven_rows() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("f.csv");
    let o = bryant(&["sweep", "--a", "1.78", "--grid", "0.0495:0.0505:0.0001", "--out", p.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&p).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "c,f1,f2,f1_width,f2_width,flag");
    assert_eq!(lines.len(), 12);
    assert!(lines[1].starts_with("0.0495,") && lines[11].starts_with("0.0505,"));
    let diff = |l: &str| {
        let f: Vec<f64> = l.split(',').skip(1).take(2).map(|x| x.parse().unwrap()).collect();
        f[0] - f[1]
    };
    assert!(diff(lines[1]) > 0.0 && diff(lines[11]) < 0.0);
}

#[test]
fn bounds_report() {
    let o = bryant(&["bounds"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["published_dominates"], true);
    assert!(v["budget"]["epsilon"].as_f64().unwrap() < 1e-8);
    assert!(v["alpha2"]["M"].as_f64().unwrap() < 4.6);
    let p = bryant(&["bounds", "--override-bounds", "4.6,48,850,25000", "--n", "500"]);
    assert_eq!(code(&p), 0);
    let v: Value = serde_json::from_slice(&p.stdout).unwrap();
    assert!(v["budget"]["epsilon"].as_f64().unwrap() < 1e-5);
}

#[test]
fn integrate_reports_unimodular_matrix() {
    let o = bryant(&["integrate", "--path", "alpha2", "--c", "0.05"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let re = v["det"]["re"].as_array().unwrap();
    let im = v["det"]["im"].as_array().unwrap();
    assert!(re[0].as_f64().unwrap() <= 1.0 && 1.0 <= re[1].as_f64().unwrap());
    assert!(im[0].as_f64().unwrap() <= 0.0 && 0.0 <= im[1].as_f64().unwrap());
    assert!(v["max_width"].as_f64().unwrap() < 1e-8);
    for key in ["lr", "ur", "li", "ui"] {
        assert!(v["matrix"]["A"][key].is_number());
    }
}

#[test]
fn mesh_presets_export_obj() {
    let dir = tempfile::tempdir().unwrap();
    for preset in ["horosphere", "enneper_cousin", "catenoid_cousin", "genus1_catenoid", "euclidean_minimal_catenoid", "euclidean_enneper"] {
        let p = dir.path().join(format!("{preset}.obj"));
        let o = bryant(&["mesh", "--preset", preset, "--grid", "12x10", "--out", p.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{preset}: {}", String::from_utf8_lossy(&o.stderr));
        let text = std::fs::read_to_string(&p).unwrap();
        assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 120);
        assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 99);
    }
    let p = dir.path().join("cousin.obj");
    let o = bryant(&["mesh", "--preset", "catenoid_cousin", "--lambda", "0.25", "--c", "1", "--out", p.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
}

#[test]
fn thread_cap_is_honoured() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_bryant"))
            .env("BRYANT_THREADS", threads)
            .args(["sweep", "--grid", "0.05"])
            .output()
            .unwrap()
    };
    let one = run("1");
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, run("3").stdout);
    assert_eq!(code(&run("0")), 1);
    assert_eq!(code(&run("lots")), 1);
}
