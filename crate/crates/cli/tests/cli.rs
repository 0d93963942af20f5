use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn qrank(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qrank"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn status(args: &[&str]) -> i32 {
    qrank(args).status.code().expect("exit code")
}

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

fn report(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

const TOWER_F2_F4: &str = r#"{"base":{"p":2,"e":1,"modulus":[0,1]},"top":{"p":2,"e":2,"modulus":[1,1,1]},"embed_root":0,"pi_basis":[1,2]}"#;

#[test]
fn malformed_inputs() {
    let dir = TempDir::new().unwrap();
    let empty = write(dir.path(), "empty.json", "");
    let garbage = write(dir.path(), "garbage.json", "{not json");
    let wrong_shape = write(dir.path(), "shape.json", r#"{"n": 3}"#);
    let bad_field = write(
        dir.path(),
        "field.json",
        r#"{"tower":{"base":{"p":4,"e":1,"modulus":[0,1]},"top":{"p":4,"e":1,"modulus":[0,1]},"embed_root":0,"pi_basis":[1]},"n":1,"storage":"explicit","codewords":[[0]]}"#,
    );
    let bad_entry = write(
        dir.path(),
        "entry.json",
        &format!(r#"{{"tower":{TOWER_F2_F4},"n":2,"storage":"explicit","codewords":[[0,9]]}}"#),
    );
    let bad_len = write(
        dir.path(),
        "len.json",
        &format!(r#"{{"tower":{TOWER_F2_F4},"n":2,"storage":"explicit","codewords":[[0,1,2]]}}"#),
    );
    let missing = dir.path().join("nope.json").to_string_lossy().into_owned();
    for file in [&empty, &garbage, &wrong_shape, &bad_field, &bad_entry, &bad_len, &missing] {
        assert_eq!(status(&["code", "info", file]), 3, "{file}");
        assert_eq!(status(&["weights", file]), 3, "{file}");
    }
    assert_eq!(status(&["code", "info", "/dev/null"]), 3);
}

#[test]
fn usage_errors() {
    let code = data("split_len4.json");
    assert_eq!(status(&["frobnicate"]), 2);
    assert_eq!(status(&["code", "info", &code, "--no-such-flag"]), 2);
    assert_eq!(status(&["code", "check-aa", &code, "--scope", "most"]), 2);
    assert_eq!(status(&["code", "puncture", &code]), 2);
    assert_eq!(status(&["weights"]), 2);
    assert_eq!(status(&["verify-paper", "--only", "99"]), 2);
}

#[test]
fn budget_and_verdict_codes() {
    let code = data("split_len4.json");
    assert_eq!(status(&["--budget", "10", "qmatroid", "table", &code]), 4);
    let dir = TempDir::new().unwrap();
    // two codewords: no projection onto F_2^2 has a power of 4 as its size
    let not_aa = write(
        dir.path(),
        "half.json",
        &format!(r#"{{"tower":{TOWER_F2_F4},"n":2,"storage":"explicit","codewords":[[0,0],[1,0]]}}"#),
    );
    assert_eq!(status(&["code", "check-aa", &not_aa]), 5);
    assert_eq!(status(&["code", "check-aa", &code]), 0);
}

#[test]
fn weights_match_bruteforce() {
    for name in ["additive_len3.json", "split_len4.json"] {
        let out = qrank(&["weights", &data(name)]);
        assert!(out.status.success());
        let r = report(&out);
        assert_eq!(r["verdicts"]["formula_matches_bruteforce"], true);
        assert_eq!(r["result"]["A"], r["result"]["bruteforce"]["a"]);
    }
    let out = qrank(&["weights", &data("additive_len3.json")]);
    assert_eq!(report(&out)["result"]["A"], serde_json::json!(["1", "15", "60", "180"]));
}

#[test]
fn reports_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let runs: [&[&str]; 3] = [
        &["weights", &data("additive_len3.json")],
        &["--scope", "sample=50", "--seed", "7", "code", "check-aa", &data("additive_len3.json")],
        &["--seed", "3", "geometry", "roundtrip", &data("gabidulin_2_4_2.json")],
    ];
    for args in runs {
        for p in [&a, &b] {
            let mut full: Vec<&str> = args.to_vec();
            let ps = p.to_str().unwrap();
            full.extend(["--json", ps]);
            assert!(qrank(&full).status.success(), "{args:?}");
        }
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap(), "{args:?}");
    }
}

#[test]
fn port_and_connectivity() {
    let code = data("split_len4.json");
    let out = qrank(&["port", "--code", &code, "--p0", "1,0,1,0", "--p", "0,1,0,0;0,0,1,0;0,0,0,1"]);
    assert!(out.status.success());
    let r = report(&out);
    assert_eq!(r["result"]["gamma_min"].as_array().unwrap().len(), 4);
    for key in ["perfect", "ideal", "connected"] {
        assert_eq!(r["result"][key], true);
    }
    let r = report(&qrank(&["connectivity", "--code", &code]));
    assert_eq!(r["result"]["connectivity"], 1);
    // P0 must meet P trivially
    assert_eq!(status(&["port", "--code", &code, "--p0", "0,1,0,0", "--p", "0,1,0,0;0,0,1,0;0,0,0,1"]), 3);
}

#[test]
fn construct_and_reload() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("g.json");
    let o = out.to_str().unwrap();
    assert_eq!(status(&["construct", "--out", o, "gabidulin", "--q", "2", "--n", "3", "--k", "2"]), 0);
    let r = report(&qrank(&["code", "mindist", o]));
    assert_eq!(r["result"]["min_distance"], 2);
    let r = report(&qrank(&["gen-weights", o]));
    assert_eq!(r["result"]["d"], serde_json::json!([2, 3]));
    let sf = data("semifield_16.json");
    let code = dir.path().join("c3.json");
    let c = code.to_str().unwrap();
    assert_eq!(status(&["construct", "--out", c, "semifield-code", &sf, "--k", "3"]), 0);
    let r = report(&qrank(&["qmatroid", "simple", c]));
    assert_eq!(r["result"]["simple"], false);
    assert_eq!(r["result"]["loops"], serde_json::json!([]));
    assert_eq!(status(&["construct", "example", "nonsense"]), 3);
}

#[test]
fn geometry_commands() {
    let g = data("gabidulin_2_4_2.json");
    let r = report(&qrank(&["geometry", "verify", &g]));
    assert_eq!(r["verdicts"]["properties"], true);
    let dir = TempDir::new().unwrap();
    let built = dir.path().join("geo.json");
    let b = built.to_str().unwrap();
    let out = qrank(&["geometry", "build", &g, "--json", b]);
    assert!(out.status.success());
    let spec = report(&out)["result"].clone();
    let spec_file = write(dir.path(), "spec.json", &spec.to_string());
    let r = report(&qrank(&["geometry", "roundtrip", &spec_file]));
    assert_eq!(r["verdicts"]["standard_basis_recovers_points"], true);
    assert_eq!(r["verdicts"]["random_basis_gives_equivalent_code"], true);
    assert_eq!(status(&["geometry", "verify", &data("split_len4.json")]), 3);
}

#[test]
fn verify_paper_subset() {
    let out = qrank(&["verify-paper", "--only", "1,5,7"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 3);
    assert_eq!(status(&["verify-paper", "--only", "9"]), 5);
}
