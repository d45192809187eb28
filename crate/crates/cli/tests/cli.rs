use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn mfbv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mfbv")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const BV: &str = "schema = 1\nf = \"random_sign\"\nx = [1e4, 1e5]\nq_spec = \"power:0.4\"\nvariant = \"plain,top\"\nk = 1\n";

#[test]
fn output_is_identical_across_threads() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bv.toml", BV);
    let mut outs = Vec::new();
    for threads in ["1", "2", "8"] {
        let out = dir.path().join(format!("out{threads}.csv"));
        let o = mfbv(&["bv-scan", "--config", &cfg, "--out", out.to_str().unwrap(), "--seed", "42", "--threads", threads]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        outs.push(fs::read(out).unwrap());
    }
    assert!(outs.windows(2).all(|w| w[0] == w[1]));
    let text = String::from_utf8(outs[0].clone()).unwrap();
    assert!(text.starts_with("# mfbv ") && text.lines().next().unwrap().contains("seed=42"));
}

#[test]
fn stdout_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "rho.toml", "schema = 1\nu = [0.5, 2.0]\n");
    let json = dir.path().join("rho.json");
    let o = mfbv(&["rho", "--config", &cfg, "--json", json.to_str().unwrap()]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[1], "u,rho");
    assert_eq!(lines[2], "0.5,1.0");
    let doc = fs::read_to_string(json).unwrap();
    assert!(doc.contains("\"columns\"") && doc.contains("\"rho\": \"1.0\""));
}

#[test]
fn missing_key_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.toml", "schema = 1\nf = \"mobius\"\nx = 1e4\n");
    let o = mfbv(&["bv-scan", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("q_spec"), "{err}");
}

#[test]
fn line_anchored_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.toml", "schema = 1\n# comment\nu = [1.0]\nstep = 0.1\n");
    let o = mfbv(&["rho", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("bad.toml:4:") && err.contains("step"), "{err}");
    let o = mfbv(&["nope", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn resource_violation_has_its_own_code() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "big.toml", "schema = 1\nf = \"mobius\"\nlen = 400\nk = 2\n");
    let o = mfbv(&["uk", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    let cfg = write(dir.path(), "big2.toml", "schema = 1\nf = \"mobius\"\nx = 1e12\nq_spec = \"dyadic:10\"\n");
    assert_eq!(mfbv(&["bv-scan", "--config", &cfg]).status.code(), Some(3));
}
