use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn zseries(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zseries"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn classify_text_and_exit_codes() {
    let o = zseries(&["classify", "--p", "3", "--n", "2", "--m", "1", "--beta", "1", "--alpha", "-2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("reducible (rule S3.m-eq-nu)"));

    let o = zseries(&["classify", "--p", "5", "--n", "3", "--m", "2", "--beta", "1", "--alpha", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("irreducible (rule S3.2m-gt-n-odd)"));

    let o = zseries(&["classify", "--p", "4", "--n", "2", "--m", "1", "--beta", "1", "--alpha", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not prime"));

    let o = zseries(&["classify", "--p", "3", "--n", "2", "--m", "1", "--beta", "3", "--alpha", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn classify_json_is_stable() {
    let args = ["classify", "--p", "2", "--n", "5", "--m", "3", "--beta", "1", "--alpha", "-7", "--format", "json"];
    let first = zseries(&args);
    let second = zseries(&args);
    assert_eq!(first.stdout, second.stdout);
    let v = json(&first);
    assert_eq!(v["verdict"]["rule"], "S4.2m-gt-n-odd");
    assert_eq!(v["input"]["p"], 2);
    assert!(v["zp"]["discriminant"].is_string());
}

#[test]
fn beta_zero_and_tail_flags() {
    let o = zseries(&["classify", "--p", "5", "--n", "2", "--beta-zero", "--alpha", "-1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["verdict"]["rule"], "S3.beta-zero");
    assert_eq!(v["verdict"]["kind"], "reducible");

    let o = zseries(&["classify", "--p", "3", "--n", "2", "--m", "1", "--beta", "1", "--alpha", "-2", "--tail", "1,2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("irreducible (rule S5.double-root-c3)"));
}

#[test]
fn explicit_coefficients() {
    let o = zseries(&["classify", "--coeffs", "6,1,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("reducible (rule S2.composite-constant)"));

    let o = zseries(&["classify", "--coeffs", "1,5,-3", "--format", "json"]);
    assert_eq!(json(&o)["verdict"]["kind"], "unit");
}

#[test]
fn factor_round_trips_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("pair");
    let prefix = prefix.to_str().unwrap();
    let o = zseries(&[
        "factor", "--p", "7", "--n", "4", "--m", "2", "--beta", "3", "--alpha", "2", "--terms", "20", "--out", prefix,
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("(pass)"));

    let path = |s: &str| format!("{prefix}.{s}.json");
    let a: Vec<String> = serde_json::from_str(&fs::read_to_string(path("a")).unwrap()).unwrap();
    assert_eq!(a.len(), 21);

    let verify = |b: &str| {
        zseries(&["verify", "--target", &path("target"), "--a", &path("a"), "--b", b, "--format", "json"])
    };
    let o = verify(&path("b"));
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["passed"], true);

    let mut b: Vec<String> = serde_json::from_str(&fs::read_to_string(path("b")).unwrap()).unwrap();
    b[5] = "12345".into();
    let broken = dir.path().join("broken.json");
    fs::write(&broken, serde_json::to_string(&b).unwrap()).unwrap();
    let o = verify(broken.to_str().unwrap());
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["residuals_zero_through"], 4);
}

#[test]
fn factor_refuses_irreducible_inputs() {
    let o = zseries(&["factor", "--p", "3", "--n", "3", "--m", "2", "--beta", "1", "--alpha", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("no factorization"));
}

#[test]
fn padic_helpers() {
    let o = zseries(&["square", "--d", "7", "--p", "3"]);
    assert_eq!(stdout(&o).trim(), "square in Z_3: yes (val 0, unit ≡ 1 mod 3)");

    let o = zseries(&["roots", "--A", "1", "--B", "-3", "--C", "51", "--p", "7", "--k", "3"]);
    assert_eq!(stdout(&o).trim(), "50, 296");

    let o = zseries(&["roots", "--A", "1", "--B", "0", "--C", "-2", "--p", "5", "--k", "2"]);
    assert_eq!(stdout(&o).trim(), "(none)");

    let o = zseries(&["normalize", "--p", "3", "--coeffs", "3,1,1", "--t", "2"]);
    assert_eq!(stdout(&o), "u = [1,-1]\nq = [3,-2,0,-1]\nlambda = -2\n");
}

#[test]
fn batch_keeps_line_order() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("inputs.txt");
    let mut body = String::from("# header comment\n");
    for n in 2..=30u32 {
        body.push_str(&format!("--p 3 --n {n} --m 1 --beta 1 --alpha -2 --terms 8\n"));
    }
    body.push_str("classify --p 3 --n 2\n");
    fs::write(&file, body).unwrap();

    let o = zseries(&["batch", "--file", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let lines: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 30);
    for (i, rec) in lines.iter().enumerate() {
        assert_eq!(rec["line"], i + 2);
    }
    assert_eq!(lines[0]["result"]["verdict"]["kind"], "reducible");
    assert!(lines[29]["result"]["error"].is_string());

    let again = zseries(&["--batch", file.to_str().unwrap()]);
    assert_eq!(o.stdout, again.stdout);
}
