use serde_json::{json, Value};

use rmodule::cli::run_with;
use rmodule::linalg::{RMatrix, Triangulation};
use rmodule::ore::parse_series;
use rmodule::series::Field;
use rmodule::tropical::Fin;
use rmodule::TwistedPoly;

const SUBCOMMANDS: [&str; 12] = [
    "jump",
    "tropical",
    "hensel-data",
    "hensel-solve",
    "triangulate",
    "normalize-vddku",
    "pseudo-complement",
    "qe-zero",
    "invariant",
    "decide",
    "universalize",
    "axiom-check",
];

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("rmodule").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json_of(args: &[&str]) -> Value {
    let (code, out, err) = call(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn help_for_every_subcommand() {
    let (code, top, _) = call(&["--help"]);
    assert_eq!(code, 0);
    for sub in SUBCOMMANDS {
        assert!(top.contains(sub), "{sub} missing from top-level help");
        let (code, out, _) = call(&[sub, "--help"]);
        assert_eq!(code, 0, "{sub}");
        assert!(out.contains("Usage: rmodule"), "{sub}: {out}");
    }
}

#[test]
fn usage_errors_exit_2() {
    for args in [&["jump"][..], &["no-such-command"], &["--p", "2", "tropical", "--gamma", "x", "--q", "t"], &["--precision", "3", "jump", "--q", "t"]] {
        let (code, out, err) = call(args);
        assert_eq!(code, 2, "{args:?}");
        assert!(out.is_empty());
        assert!(err.starts_with("error:"), "{args:?}: {err}");
    }
}

#[test]
fn math_errors_exit_1_with_json() {
    for (args, kind) in [
        (&["jump", "--q", "t +"][..], "ParseError"),
        (&["--p", "4", "jump", "--q", "t"], "InvalidField"),
        (&["invariant", "--A", "x in P(0) /\\", "--B", "x in P(1)"], "ParseError"),
    ] {
        let (code, out, err) = call(args);
        assert_eq!(code, 1, "{args:?}");
        assert!(out.is_empty());
        let v: Value = serde_json::from_str(err.trim()).unwrap();
        assert_eq!(v["error"], kind, "{args:?}: {err}");
        assert!(v["message"].is_string());
    }
}

#[test]
fn tropical_data_of_t_minus_one() {
    assert_eq!(json_of(&["jump", "--q", "t - 1"]), json!({"jumps": [0], "h": 1, "hens": 1}));
    let v = json_of(&["tropical", "--q", "t - 1", "--gamma", "-3"]);
    assert_eq!(v["value"], json!(-6));
    let v = json_of(&["hensel-data", "--q", "t - 1"]);
    assert_eq!((v["h"].clone(), v["hens"].clone()), (json!(1), json!(1)));
}

#[test]
fn hensel_solution_solves() {
    let f = Field::prime(3).unwrap();
    let v = json_of(&["--p", "3", "hensel-solve", "--s", "t - 1", "--x", "X^2 + X^5"]);
    let y = parse_series(f, v["y"].as_str().unwrap()).unwrap();
    let x = parse_series(f, "X^2 + X^5").unwrap();
    let s = TwistedPoly::parse(f, "t - 1").unwrap();
    let residual = s.apply(&y).sub(&x);
    assert!(residual.val_lower_bound() >= Fin(64), "{residual}");
    assert_eq!(v["valuation"], json!(2));
}

#[test]
fn triangulation_output_is_a_witness() {
    let f = Field::prime(2).unwrap();
    let text = r#"[["t", "X"], ["1", "t"]]"#;
    let v = json_of(&["triangulate", "--matrix", text]);
    let m = |k: &str| RMatrix::parse_json(f, &v[k].to_string()).unwrap();
    let a = RMatrix::parse_json(f, text).unwrap();
    let prec = serde_json::from_value(v["prec"].clone()).unwrap();
    let tr = Triangulation { p: m("p"), q: m("q"), q_inv: m("q_inv"), t: m("t"), rank: 2, prec };
    assert!(tr.verifies(&a));
    assert_eq!(v["rank"], json!(2));
}

#[test]
fn invariant_and_decide_agree() {
    let v = json_of(&["invariant", "--A", "x in P(0)", "--B", "E y : x = y.(t - 1)"]);
    assert_eq!(v, json!({"kind": "finite", "log_d": 1}));
    let v = json_of(&["invariant", "--A", "x in P(0)", "--B", "E y : x = y.(t - 1)", "--explain"]);
    assert!(v["trace"].is_array());
    assert_eq!(json_of(&["decide", "--sentence", "|[x in P(0)] / [E y : x = y.(t - 1)]| = 2"]), json!(true));
    assert_eq!(json_of(&["decide", "--sentence", "|[x in P(0)] / [E y : x = y.(t - 1)]| = 4"]), json!(false));
}

#[test]
fn universal_definition_checks_hold() {
    let v = json_of(&["universalize", "--A", "E y : x = y.(t - 1)"]);
    assert!(v["universal"].as_str().unwrap().starts_with("forall y"));
    for (k, c) in v["checks"].as_object().unwrap() {
        if c.is_boolean() {
            assert_eq!(c, &json!(true), "{k}");
        }
    }
}

#[test]
fn axiom_check_is_clean_and_deterministic() {
    let args = ["--p", "3", "--seed", "7", "axiom-check", "--samples", "50"];
    let (code, first, _) = call(&args);
    let (_, second, _) = call(&args);
    assert_eq!(code, 0);
    assert_eq!(first, second);
    let v: Value = serde_json::from_str(&first).unwrap();
    for t in v["tallies"].as_array().unwrap() {
        assert_eq!(t["violations"], json!(0), "{t}");
    }
    let (_, other, _) = call(&["--p", "3", "--seed", "8", "axiom-check", "--samples", "50"]);
    assert_ne!(serde_json::from_str::<Value>(&other).unwrap()["seed"], v["seed"]);
}

#[test]
fn text_output() {
    let (code, out, _) = call(&["--output", "text", "invariant", "--A", "x in P(0)", "--B", "E y : x = y.(t - 1)"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "2^1");
}

#[test]
fn every_subcommand_runs() {
    let cases: [&[&str]; 12] = [
        &["jump", "--q", "t^2 + X"],
        &["tropical", "--q", "t^2 + X", "--gamma", "2"],
        &["hensel-data", "--q", "t*X + 1"],
        &["hensel-solve", "--s", "t*X + 1", "--x", "X^3"],
        &["triangulate", "--matrix", r#"[["t + X", "1"]]"#],
        &["normalize-vddku", "--matrix", r#"[["t + 1"], ["t*X + 1"]]"#],
        &["pseudo-complement", "--gens", "t - 1,t*X"],
        &["qe-zero", "--formula", "E y : x.(t) = y.(t^2 + X)"],
        &["invariant", "--A", "x in P(-1)", "--B", "x in P(1)"],
        &["decide", "--sentence", "|[x in P(-1)] / [x in P(1)]| > 2"],
        &["universalize", "--A", "E y : x = y.(t*X + 1)"],
        &["axiom-check", "--samples", "20"],
    ];
    for args in cases {
        let (code, out, err) = call(args);
        assert_eq!(code, 0, "{args:?}: {err}");
        serde_json::from_str::<Value>(&out).unwrap_or_else(|e| panic!("{args:?}: {e}: {out}"));
        assert_eq!(call(args).1, out, "{args:?} not deterministic");
    }
}
