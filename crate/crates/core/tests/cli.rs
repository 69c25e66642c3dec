use std::path::PathBuf;
use std::process::Command;

fn input(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "inputs", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn parikh(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_parikh"))
        .args(args)
        .env_remove("PARIKH_BOX")
        .env_remove("PARIKH_FORMAT")
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn vpf_eval_and_verify() {
    let (code, out, _) = parikh(&["vpf", &input("sum_of_two.sys"), "--eval", "4"]);
    assert_eq!((code, out.as_str()), (0, "5\n"));
    let (code, out, _) = parikh(&["vpf", &input("coins_2_3.sys"), "--verify", "--box", "30"]);
    assert_eq!(code, 0);
    assert!(out.ends_with("OK: 31/31 points match\n"));
}

#[test]
fn malformed_system_reports_line() {
    let (code, out, err) = parikh(&["vpf", &input("malformed.sys")]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn lang_commands() {
    let (code, out, _) = parikh(&["lang", &input("two_way.cfg"), "--eval", "2", "2", "2", "2"]);
    assert_eq!((code, out.as_str()), (0, "1\n"));
    let (code, out, _) = parikh(&["lang", &input("a_b_a.cfg"), "--slender"]);
    assert_eq!((code, out.as_str()), (0, "not slender\n"));
    let (code, out, _) = parikh(&["lang", &input("balanced.cfg"), "--series", "--verify", "--box", "8"]);
    assert_eq!(code, 0);
    assert_eq!(out, "1/(1 - x1 x2)\nOK: 81/81 points match\n");
}

#[test]
fn containment_witness() {
    let (code, _, err) = parikh(&["lang", &input("bad.cfg")]);
    assert_eq!(code, 2);
    assert!(err.contains("\"aba\""), "{err}");
}

#[test]
fn semisimple_commands() {
    let (code, out, _) = parikh(&["semisimple", &input("simple.set")]);
    assert_eq!(code, 0);
    assert_eq!(out, std::fs::read_to_string(input("simple.set")).unwrap());
    let (code, out, _) = parikh(&["semisimple", &input("dependent.set"), "--verify", "--box", "20"]);
    assert_eq!(code, 0);
    assert!(out.ends_with("OK: 441/441 points match\n"));
    let (code, out, _) = parikh(&["semisimple", &input("empty.set")]);
    assert_eq!((code, out.as_str()), (0, ""));
}

#[test]
fn series_and_structured_output() {
    let (code, out, _) = parikh(&["series", &input("coins_2_3.sys"), "--verify", "--format", "structured"]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["text"], "1/((1 - x1^2)(1 - x1^3))");
    assert_eq!(doc["verify"], "OK: 16/16 points match");
}

#[test]
fn output_is_deterministic() {
    let args = ["lang", "--format", "structured"];
    let path = input("two_way.cfg");
    let first = parikh(&[args[0], &path, args[1], args[2]]);
    let second = parikh(&[args[0], &path, args[1], args[2]]);
    assert_eq!(first, second);
}

#[test]
fn environment_overrides_flags() {
    let out = Command::new(env!("CARGO_BIN_EXE_parikh"))
        .args(["vpf", &input("coins_2_3.sys"), "--verify"])
        .env("PARIKH_BOX", "5")
        .output()
        .unwrap();
    assert!(String::from_utf8(out.stdout).unwrap().ends_with("OK: 6/6 points match\n"));
}
