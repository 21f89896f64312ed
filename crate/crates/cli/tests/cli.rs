use std::fs;
use std::process::{Command, Output};

fn rankgain(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rankgain"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const CUBIC: [&str; 6] = ["gain", "--d=-3", "--A=0", "--B=1", "--n=3", "--param=1"];

#[test]
fn gain_emits_a_valid_certificate() {
    let o = rankgain(&CUBIC);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["version"], "rankgain-cert/1");
    assert_eq!(v["n"], 3);
    assert!(v["failure"].is_null());
}

#[test]
fn identical_runs_are_byte_identical() {
    assert_eq!(rankgain(&CUBIC).stdout, rankgain(&CUBIC).stdout);
    let density = [
        "density",
        "--d=-3",
        "--A=0",
        "--B=1",
        "--n=3",
        "--prime=103",
        "--prime=7/2",
    ];
    let one = rankgain(&[&density[..], &["--workers=1"]].concat());
    let four = rankgain(&[&density[..], &["--workers=4"]].concat());
    assert_eq!(code(&one), 0, "{}", stderr(&one));
    assert_eq!(one.stdout, four.stdout);
    let selftest = ["selftest", "--seed=7", "--samples=20"];
    assert_eq!(rankgain(&selftest).stdout, rankgain(&selftest).stdout);
}

#[test]
fn written_certificates_verify_and_tampering_is_caught() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    let p = path.to_str().unwrap();
    let o = rankgain(&[&CUBIC[..], &["--output", p]].concat());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(fs::read(&path).unwrap(), o.stdout);

    let o = rankgain(&["verify", p]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["valid"], true);

    let mut cert: serde_json::Value = serde_json::from_slice(&fs::read(&path).unwrap()).unwrap();
    cert["torsion_bound"] = serde_json::json!(cert["torsion_bound"].as_u64().unwrap() * 2);
    let forged = dir.path().join("forged.json");
    fs::write(&forged, cert.to_string()).unwrap();
    let o = rankgain(&["verify", forged.to_str().unwrap(), "--format=text"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stdout).contains("INVALID"));

    fs::write(&forged, "{\"version\": 1}").unwrap();
    assert_eq!(code(&rankgain(&["verify", forged.to_str().unwrap()])), 3);
}

#[test]
fn field_mismatch_is_invalid_input() {
    let o = rankgain(&["gain", "--d=-1", "--A=0", "--B=1", "--n=3", "--param=1"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("n=3 requires d=-3"), "{}", stderr(&o));
}

#[test]
fn malformed_arguments_are_invalid_input() {
    for args in [
        &["gain", "--d=-3", "--A=x", "--B=1", "--n=3", "--param=1"][..],
        &["gain", "--d=-3", "--A=0", "--B=0", "--n=3", "--param=1"],
        &["gain", "--d=-3", "--A=0", "--B=1", "--n=5", "--param=1"],
        &["gain", "--d=-2", "--A=0", "--B=1", "--n=2", "--param=1"],
        &["gain", "--d=-3", "--A=0", "--B=1", "--n=3", "--param=0"],
        &["gain", "--d=-3", "--A=0", "--B=1", "--n=3"],
        &["density", "--d=-3", "--A=0", "--B=1", "--n=2", "--prime=91"],
        &[
            "search",
            "--d=-3",
            "--A=0",
            "--B=1",
            "--n=2",
            "--constraint=13:sideways",
        ],
        &["verify", "/nonexistent/cert.json"],
        &["selftest", "--samples=0"],
    ] {
        let o = rankgain(args);
        assert_eq!(code(&o), 2, "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn search_honours_constraints() {
    let base = ["search", "--d=-3", "--A=0", "--B=1", "--n=2"];
    let constraints = ["--constraint=13/6:irreducible", "--constraint=31/11:split"];
    let o = rankgain(&[&base[..], &constraints].concat());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["param"]["a"], "1/1");
    let parallel = rankgain(&[&base[..], &constraints, &["--workers=3"]].concat());
    assert_eq!(parallel.stdout, o.stdout);
}

#[test]
fn impossible_searches_find_nothing() {
    let o = rankgain(&[
        "search",
        "--d=-3",
        "--A=0",
        "--B=1",
        "--n=2",
        "--constraint=7/2:irreducible",
    ]);
    assert_eq!(code(&o), 1, "{}", stderr(&o));
    let o = rankgain(&["gain", "--d=-3", "--A=0", "--B=1/36", "--n=3", "--param=1"]);
    assert_eq!(code(&o), 1, "{}", stderr(&o));
}

#[test]
fn density_reports_exact_fractions() {
    let o = rankgain(&["density", "--d=-3", "--A=0", "--B=1", "--n=2", "--prime=101"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["fraction"], "49/100");
    assert_eq!(v[0]["total"], 10200);
}

#[test]
fn selftest_passes() {
    let o = rankgain(&["selftest", "--samples=20", "--format=text"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.lines().all(|l| !l.starts_with("FAIL")));
}
