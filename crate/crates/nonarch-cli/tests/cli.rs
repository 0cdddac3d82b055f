use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

fn nonarch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nonarch"))
        .args(args)
        .env_remove("NONARCH_PRECISION")
        .output()
        .expect("binary runs")
}

fn with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_nonarch"))
        .args(args)
        .env_remove("NONARCH_PRECISION")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn truncated_exponential_polygon() {
    let out = nonarch(&["polygon", "--prime", "2", "--poly", "exp-trunc:30"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["result"]["vertices"], json!([[0, 0], [16, -15], [24, -22], [28, -25], [30, -26]]));
    assert_eq!(v["result"]["slopes"], json!(["-15/16", "-7/8", "-3/4", "-1/2"]));
    assert_eq!(v["provenance"], json!({ "module": "newton_polygon", "op": "polygon" }));
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["input", "result", "certificates", "provenance"]);
}

#[test]
fn teichmuller_and_vp_examples() {
    let v = json_of(&nonarch(&["teichmuller", "--prime", "5", "--unit", "2", "--precision", "3"]));
    assert_eq!(v["result"], json!("57 mod 125"));
    let v = json_of(&nonarch(&["vp", "--prime", "2", "--value", "-63/8"]));
    assert_eq!(v["result"], json!(-3));
    let v = json_of(&nonarch(&["vp", "--prime", "3", "--value", "0"]));
    assert_eq!(v["result"], json!("inf"));
}

#[test]
fn exit_codes() {
    // float literals and malformed input are parse errors
    assert_eq!(nonarch(&["vp", "--prime", "2", "--value", "0.5"]).status.code(), Some(1));
    assert_eq!(nonarch(&["vp", "--prime", "4", "--value", "3"]).status.code(), Some(1));
    assert_eq!(nonarch(&["polygon", "--poly", "T^^2"]).status.code(), Some(1));
    assert_eq!(nonarch(&["frobnicate"]).status.code(), Some(1));
    // library preconditions exit 2 with a machine-readable code
    let out = nonarch(&["hensel", "--prime", "7", "--poly", "x^2-2", "--start", "1", "--precision", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_of(&out)["error"]["code"], json!("HenselConditionFailed"));
    let out = nonarch(&["teichmuller", "--prime", "5", "--unit", "10", "--precision", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_of(&out)["error"]["code"], json!("NotAUnitResidue"));
    let out = nonarch(&["polygon", "--prime", "2", "--poly", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(nonarch(&["--help"]).status.code(), Some(0));
}

#[test]
fn deterministic_output() {
    let args = ["polytope", "--poly", "y^6 - 5 x y^5 + x^3 y^4 - 7 x^2 y^2 + 6 x^3 + x^4", "--vars", "y,x"];
    assert_eq!(nonarch(&args).stdout, nonarch(&args).stdout);
    let args = ["weierstrass", "--prime", "5", "--series", "log-trunc:12", "--radius", "1", "--budget", "4"];
    assert_eq!(nonarch(&args).stdout, nonarch(&args).stdout);
}

#[test]
fn lifting_subcommands() {
    let v = json_of(&nonarch(&[
        "hensel-system", "--prime", "7", "--poly", "x^2 - 2", "--poly", "y^2 - x - 1", "--start", "3,2", "--precision", "3",
    ]));
    assert_eq!(v["result"]["root"], json!(["108", "65"]));
    let v = json_of(&nonarch(&["hensel", "--prime", "7", "--poly", "T^2 - 2", "--start", "3", "--precision", "3"]));
    assert_eq!(v["result"]["root"], json!("108"));
    assert_eq!(v["certificates"][0]["holds"], json!(true));
    let v = json_of(&nonarch(&["sqrt", "--prime", "7", "--value", "2", "--precision", "3"]));
    assert_eq!(v["result"]["root"]["value"], json!("108 mod 343"));
    let v = json_of(&nonarch(&["lift-factor", "--prime", "5", "--poly", "T^2 - 6T + 5", "--psi", "T - 1", "--eta", "T - 5", "--precision", "4"]));
    assert_eq!(v["certificates"][0]["holds"], json!(true));
}

#[test]
fn resultant_subcommand() {
    let v = json_of(&nonarch(&["resultant", "--f", "T - 1", "--g", "T + 1"]));
    assert_eq!(v["result"]["value"], json!(2));
    let v = json_of(&nonarch(&["resultant", "--f", "T^2 - 1", "--discriminant"]));
    assert_eq!(v["result"]["value"], json!(-4));
    let v = json_of(&nonarch(&["resultant", "--f", "T^2 + 1", "--g", "T - 2", "--prime", "5", "--exponent", "2"]));
    assert_eq!(v["result"]["value"], json!("5"));
}

#[test]
fn series_subcommands() {
    let v = json_of(&nonarch(&["strassmann", "--prime", "5", "--series", "log-trunc:40", "--radius", "1"]));
    assert_eq!(v["result"]["bound"], json!(1));
    let v = json_of(&nonarch(&["strassmann", "--prime", "5", "--series", "exp-trunc:40", "--radius", "1"]));
    assert_eq!(v["result"]["bound"], json!(0));
    let v = json_of(&nonarch(&["series-norm", "--prime", "2", "--series", "1 + 2T + T^2", "--radius", "-1"]));
    assert_eq!(v["result"], json!({ "w": -2, "argmin_last": 2 }));
    let v = json_of(&nonarch(&["slope-factor", "--prime", "5", "--poly", "(T - 2)(T - 10)", "--precision", "5"]));
    assert_eq!(v["result"]["factors"].as_array().unwrap().len(), 2);
}

#[test]
fn precision_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_nonarch"))
        .args(["teichmuller", "--prime", "5", "--unit", "2"])
        .env("NONARCH_PRECISION", "3")
        .output()
        .unwrap();
    assert_eq!(json_of(&out)["result"], json!("57 mod 125"));
    let out = Command::new(env!("CARGO_BIN_EXE_nonarch"))
        .args(["teichmuller", "--prime", "5", "--unit", "2"])
        .env("NONARCH_PRECISION", "2.5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn render_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for (name, args) in [
        ("polygon", vec!["polygon", "--prime", "2", "--poly", "exp-trunc:30"]),
        ("series", vec!["series-polygon", "--prime", "3", "--series", "log-over-t-trunc:10"]),
        ("polytope", vec!["polytope", "--poly", "1 + x + y + x^2 y"]),
    ] {
        let json_path = dir.path().join(format!("{name}.json"));
        let svg_path = dir.path().join(format!("{name}.svg"));
        std::fs::write(&json_path, nonarch(&args).stdout).unwrap();
        let out = nonarch(&["render", "--input", json_path.to_str().unwrap(), "--output", svg_path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let svg = std::fs::read_to_string(&svg_path).unwrap();
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("slope "));
        let mut direct = args.clone();
        direct.extend(["--format", "svg"]);
        assert_eq!(nonarch(&direct).stdout, svg.as_bytes());
    }
    let svg = String::from_utf8(nonarch(&["polygon", "--prime", "2", "--poly", "exp-trunc:30", "--format", "svg"]).stdout).unwrap();
    assert!(svg.contains("(16, -15)") && svg.contains("slope -15/16"));
    let out = with_stdin(&["render"], r#"{"result": 1, "provenance": {"module": "padic"}}"#);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn tsv_output() {
    let out = nonarch(&["polygon", "--prime", "2", "--poly", "exp-trunc:30", "--format", "tsv"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "0\t0\n16\t-15\n24\t-22\n28\t-25\n30\t-26\n");
    let out = nonarch(&["strassmann", "--prime", "5", "--series", "log-trunc:40", "--radius", "1", "--format", "tsv"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "bound\t1\n");
}

#[test]
fn batch_preserves_order() {
    let mut input = String::new();
    for k in 1..=40 {
        input.push_str(&format!("[\"vp\", \"--prime\", \"2\", \"--value\", \"{}\"]\n", 1u64 << (k % 20)));
    }
    input.push_str("{\"args\": [\"teichmuller\", \"--prime\", \"5\", \"--unit\", \"2\", \"--precision\", \"3\"]}\n");
    let out = with_stdin(&["batch"], &input);
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<Value> = String::from_utf8(out.stdout).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 41);
    for (k, line) in (1..=40).zip(&lines) {
        assert_eq!(line["result"], json!(k % 20));
    }
    assert_eq!(lines[40]["result"], json!("57 mod 125"));

    let out = with_stdin(&["batch"], "[\"vp\", \"--prime\", \"2\", \"--value\", \"4\"]\nnot json\n[\"hensel\", \"--prime\", \"7\", \"--poly\", \"T^2-2\", \"--start\", \"1\"]\n");
    assert_eq!(out.status.code(), Some(2));
    let lines: Vec<Value> = String::from_utf8(out.stdout).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines[0]["result"], json!(2));
    assert_eq!(lines[1]["error"]["code"], json!("Parse"));
    assert_eq!(lines[2]["error"]["code"], json!("HenselConditionFailed"));
}
