use contraction_groups::cli::run;
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String) {
    run(std::iter::once("contraction").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> Value {
    let (code, out) = call(args);
    assert_eq!(code, 0, "{out}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["format"], 1);
    v
}

#[test]
fn eval_example() {
    assert_eq!(
        call(&["cocycle", "eval", "--p", "2", "--spec", "eta:1", "t^0", "t^2"]),
        (0, "1*t^1".to_string())
    );
}

#[test]
fn fingerprint_example() {
    let spec = "xform(eta:101;a=t^0 + t^1;b=t^0 + t^1)";
    let (code, out) = call(&["fingerprint", "--p", "2", "--spec", spec, "--window", "3"]);
    assert_eq!(code, 0);
    assert!(out.contains("bits=101"), "{out}");
    assert!(out.contains("c=0"), "{out}");

    let v = json(&["fingerprint", "--json", "--spec", spec, "--window", "3", "--probes", "random:10"]);
    assert_eq!(v["bits"], "101");
    assert_eq!(v["c"], 0);
    assert_eq!(v["status"], "OK");
    assert_eq!(v["profile"].as_array().unwrap().len(), 3);
    assert_eq!(v["probes"]["failed"], 0);
}

#[test]
fn fingerprint_tight_budget_exits_two() {
    let (code, out) = call(&["fingerprint", "--spec", "eta:11", "--window", "2", "--budget", "2"]);
    assert_eq!(code, 2, "{out}");
    assert!(out.contains("INSUFFICIENT_PRECISION"), "{out}");
}

#[test]
fn abelian_tables_differ() {
    let four = json(&["classify", "abelian", "--orders", "4", "--json"]);
    let klein = json(&["classify", "abelian", "--orders", "2,2", "--json"]);
    assert_ne!(four["table"], klein["table"]);
    assert_eq!(four["delta"], klein["delta"]);
    let six = json(&["classify", "abelian", "--orders", "6", "--json"]);
    let two_three = json(&["classify", "abelian", "--orders", "2,3", "--json"]);
    assert_eq!(six["table"], two_three["table"]);
}

#[test]
fn poly_tests() {
    let v = json(&["classify", "poly", "--place", "inf", "--poly", "x^2 - 1/2*x + 1/8", "--json"]);
    assert_eq!(v["contractive"], true);
    assert_eq!(v["test"], "schur-cohn");
    let v = json(&["classify", "poly", "--place", "p:2", "--poly", "x^2 - 2", "--json"]);
    assert_eq!(v["contractive"], true);
    assert_eq!(v["test"], "p-adic-valuation");
    let (code, out) = call(&["classify", "poly", "--place", "inf", "--poly", "x^2 +"]);
    assert_eq!(code, 1);
    assert!(out.contains("poly :="), "{out}");
}

#[test]
fn spec_file_canonicalizes() {
    let dir = std::env::temp_dir().join(format!("contraction-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("spec.json");
    std::fs::write(
        &path,
        r#"{"format":1,"blocks":[{"place":"inf","poly":"x - 1/2","n":1,"mult":1},{"place":"p:3","poly":"x - 3","n":1,"mult":2},{"place":"inf","poly":"x - 1/2","n":1,"mult":1}],"torsion":[{"p":2,"n":1,"nu":1}]}"#,
    )
    .unwrap();
    let (code, out) = call(&["classify", "spec", "--file", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["format"], 1);
    let blocks = v["blocks"].as_array().unwrap();
    assert_eq!(blocks.len(), 2);
    assert_eq!(blocks[0]["place"], "p:3");
    assert_eq!(blocks[1]["mult"], 2);

    std::fs::write(&path, r#"{"format":1,"blocks":[{"place":"inf","poly":"x - 2","n":1,"mult":1}]}"#).unwrap();
    let (code, out) = call(&["classify", "spec", "--file", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.contains("schur-cohn"), "{out}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn series_ops() {
    assert_eq!(call(&["series", "add", "1*t^-1 + O(t^3)", "t^0"]).1, "1*t^-1 + 1*t^0 + O(t^3)");
    assert_eq!(call(&["--m", "2", "series", "int-mul", "-3", "t^0"]).1, "1*t^0");
    assert_eq!(call(&["series", "shift", "t^1", "-4"]).1, "1*t^-3");
    assert_eq!(call(&["--prec", "2", "series", "parse", "t^0 + t^5"]).1, "1*t^0 + O(t^2)");
    assert_eq!(call(&["series", "abs", "O(t^5)"]).1, "<= p^-5");
}

#[test]
fn malformed_series_prints_grammar() {
    let (code, out) = call(&["series", "neg", "t^^1"]);
    assert_eq!(code, 1);
    assert!(out.contains("series :="), "{out}");
    let (code, out) = call(&["cocycle", "eval", "--spec", "omega:x", "t^0", "t^0"]);
    assert_eq!(code, 1);
    assert!(out.contains("omega:"), "{out}");
}

#[test]
fn unknown_subcommand_is_usage_error() {
    assert_eq!(call(&["frobnicate"]).0, 1);
    assert_eq!(call(&[]).0, 1);
}

#[test]
fn center_verdicts() {
    let (code, out) = call(&["ext", "center", "--spec", "eta:1", "(0 ; t^0)"]);
    assert_eq!(code, 2);
    assert!(out.contains("probe=t^2"), "{out}");
    assert_eq!(call(&["ext", "center", "--spec", "eta:1", "(t^3 ; 0)"]), (0, "PASS".into()));
    assert_eq!(call(&["ext", "center", "--spec", "eta:0", "(0 ; t^0)", "--probes", "0,1,2"]).0, 0);
}

#[test]
fn ext_algebra() {
    let spec = ["--spec", "eta:1"];
    let mul = call(&["ext", "mul", spec[0], spec[1], "(t^0 ; t^0)", "(0 ; t^2)"]);
    assert_eq!(mul, (0, "(1*t^0 + 1*t^1 ; 1*t^0 + 1*t^2)".into()));
    let comm = call(&["ext", "comm", spec[0], spec[1], "(0 ; t^0)", "(0 ; t^2)"]);
    assert_eq!(comm.0, 0);
    assert!(comm.1.ends_with("; 0)"), "{}", comm.1);
    let v = json(&["ext", "inv", "--json", spec[0], spec[1], "(t^0 ; t^0)"]);
    assert!(v["g"].is_string());
}

#[test]
fn cocycle_check_and_bmap() {
    let (code, out) = call(&["cocycle", "check", "--spec", "xform(eta:11;a=t^0;b=t^0 + t^2)", "--samples", "40"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.starts_with("PASS"));
    let v = json(&["cocycle", "bmap", "--json", "--spec", "eta:101", "--window", "-2..4"]);
    assert_eq!(v["window"], serde_json::json!([-2, 4]));
}

#[test]
fn sections() {
    let (code, out) = call(&["section", "--ctx", "modred:2,3,1", "--input", "1*t^0 + 1*t^2", "--upto", "6"]);
    assert_eq!(code, 0);
    assert!(out.ends_with("agrees-through=t^6"), "{out}");
    let (code, out) = call(&[
        "--p", "2", "section", "--ctx", "extproj:eta:101", "--input", "(t^1 ; t^0 + t^1)", "--upto", "5", "--verify", "10",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("agrees-through=t^5"), "{out}");
    assert!(out.contains("PASS"), "{out}");
    assert_eq!(call(&["section", "--ctx", "bogus", "--upto", "3"]).0, 1);
}

#[test]
fn deterministic_under_seed() {
    let args = ["--seed", "9", "cocycle", "check", "--spec", "eta:11", "--samples", "20", "--json"];
    assert_eq!(call(&args), call(&args));
}

#[test]
fn selftest_passes() {
    let (code, out) = call(&["selftest", "--seed", "3"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.lines().count(), 10);
}
