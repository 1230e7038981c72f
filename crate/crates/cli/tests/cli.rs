use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_modp-irred")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn ok_payload(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.extend(["--json", "--reproducible"]);
    let (code, out) = run(&a);
    assert_eq!(code, 0, "{args:?}: {out}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["status"], "ok");
    v["payload"].clone()
}

fn schema(name: &str) -> jsonschema::Validator {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.schema.json"));
    let s: Value = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
    jsonschema::validator_for(&s).unwrap()
}

fn assert_valid(name: &str, v: &Value) {
    let errors: Vec<String> = schema(name).iter_errors(v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{name}: {errors:?}\n{v}");
}

#[test]
fn invariants() {
    let p = ok_payload(&["invariants", "Q(sqrt:-5)"]);
    assert_eq!((&p["d"], &p["disc"], &p["h"], &p["r"]), (&"2".into(), &"-20".into(), &"2".into(), &"0".into()));
    let p = ok_payload(&["invariants", "Q"]);
    assert_eq!((&p["d"], &p["disc"], &p["h"], &p["r"]), (&"1".into(), &"1".into(), &"1".into(), &"0".into()));
}

#[test]
fn input_errors_exit_2() {
    let (code, out) = run(&["invariants", "Q(sqrt:4)", "--json"]);
    assert_eq!(code, 2);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["status"], "error");
    assert!(v["payload"]["error"].as_str().unwrap().contains("m not squarefree"));
    assert_valid("command_result", &v);
    assert_valid("error", &v["payload"]);

    assert_eq!(run(&["certify", "Q", "[0,0,0,1]", "--max-prime", "7"]).0, 2);
    assert_eq!(run(&["certify", "Q", "[0,0,0,0,0]", "--max-prime", "7"]).0, 2);
    assert_eq!(run(&["bounds", "Q"]).0, 2);
    assert_eq!(run(&["bounds", "Q", "--n", "2", "--torsion"]).0, 2);
    assert_eq!(run(&["bounds", "Q", "--cK"]).0, 2);
    assert_eq!(run(&["bounds", "Q(sqrt:-1)", "--q", "7"]).0, 2);
    assert_eq!(run(&["verify-case", "Q", "[0,0,0,0,1]", "--prime", "5", "--case", "XX"]).0, 2);
}

#[test]
fn bounds() {
    assert_eq!(ok_payload(&["bounds", "Q", "--n", "2"])["value"], "17305600");
    assert_eq!(ok_payload(&["bounds", "Q", "--torsion"])["value"], "532900");
    let n = num_bigint::BigInt::from(8);
    let want = (n.pow(12) + n.pow(6)).pow(4).to_string();
    assert_eq!(ok_payload(&["bounds", "Q(sqrt:-1)", "--cK", "--A", "1"])["value"], want.as_str());
    for args in [
        &["bounds", "Q(sqrt:2)", "--c2"][..],
        &["bounds", "Q(sqrt:2)", "--c1"],
        &["bounds", "Q(sqrt:-5)", "--delta"],
        &["bounds", "Q(sqrt:-5)", "--jk", "--A", "1/2"],
        &["bounds", "Q(sqrt:-1)", "--q", "5"],
    ] {
        assert_valid("bounds", &ok_payload(args));
    }
}

#[test]
fn certify_examples() {
    let p = ok_payload(&["certify", "Q", "[0,0,0,1,0]", "--max-prime", "7"]);
    assert_valid("certify", &p);
    assert_eq!(p["criterion"], "TheoremI-1");
    let qs: Vec<&str> = p["witnesses"].as_array().unwrap().iter().map(|w| w["place"]["q"].as_str().unwrap()).collect();
    assert_eq!(qs, ["5", "7"]);
    let n = num_bigint::BigInt::from(7);
    assert_eq!(p["bound"], (n.pow(12) + n.pow(6)).pow(2).to_string().as_str());

    let p = ok_payload(&["certify", "Q", "[0,0,0,1,0]", "--max-prime", "5"]);
    assert_valid("certify", &p);
    assert_eq!(p["outcome"], "NoCriterion");

    let p = ok_payload(&["certify", "Q(sqrt:-1)", "[0,0,0,-1,1]", "--max-prime", "60"]);
    assert_valid("certify", &p);
}

#[test]
fn jk_examples() {
    let p = ok_payload(&["jk", "Q(sqrt:-1)", "--A", "1"]);
    assert_valid("jk", &p);
    assert_eq!(p["bound"], "8");
    assert_eq!(p["primes"], serde_json::json!(["5"]));
    assert_eq!(p["coverage"], true);

    let p = ok_payload(&["jk", "Q", "--A", "1"]);
    assert_valid("jk", &p);
    assert_eq!(p["bound"], "2");
    assert_eq!(p["primes"], serde_json::json!(["2"]));

    let p = ok_payload(&["jk", "Q(sqrt:-5)", "--A", "1"]);
    assert_valid("jk", &p);
    assert_eq!(p["coverage"], true);
    assert_eq!(p["class_witnesses"].as_object().unwrap().len(), 2);
}

#[test]
fn classify_case_table_and_verify_case() {
    let p = ok_payload(&["classify", "Q", "[0,0,0,0,1]", "--prime", "5"]);
    assert_valid("classify", &p);
    assert_eq!(p["places"][0]["type"], "good-supersingular");
    assert_eq!(p["places"][0]["cases"], serde_json::json!(["BS"]));
    let p = ok_payload(&["classify", "Q(sqrt:-5)", "[0,0,0,1+s,1]", "--max-prime", "40"]);
    assert_valid("classify", &p);

    for f in ["Q", "Q(sqrt:-1)", "Q(sqrt:3)"] {
        assert_valid("case-table", &ok_payload(&["case-table", f]));
    }

    let p = ok_payload(&["verify-case", "Q", "[0,0,0,0,1]", "--prime", "5", "--case", "BS"]);
    assert_valid("verify-case", &p);
    assert_eq!(p["holds"], true);
    let p = ok_payload(&["verify-case", "Q", "[0,0,0,0,1]", "--prime", "5", "--case", "M1"]);
    assert_eq!(p["holds"], false);
}

#[test]
fn envelope_and_determinism() {
    let args = ["certify", "Q(sqrt:-5)", "[0,0,0,1,1]", "--max-prime", "50", "--json", "--reproducible"];
    let (_, a) = run(&args);
    let (_, b) = run(&args);
    assert_eq!(a, b);
    let (_, c) = run(&[&args[..], &["--jobs", "4"]].concat());
    assert_eq!(a, c);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_valid("command_result", &v);
    assert!(v.get("generated_at").is_none());

    let (_, t) = run(&["invariants", "Q", "--json"]);
    let v: Value = serde_json::from_str(&t).unwrap();
    assert!(v["generated_at"].is_string());
    assert_valid("command_result", &v);
}
