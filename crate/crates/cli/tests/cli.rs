//! End-to-end runs of the `spin7` binary.

use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use spin7_core::classes::{product_class, weil_plus_omega_sq};
use spin7_core::json::{form_from_json, form_to_json};
use spin7_core::scalar::Scalar;
use spin7_core::Form;

fn write_form(name: &str, form: &Form<Scalar>) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    let json = form_to_json(form, 4).unwrap();
    std::fs::write(&path, serde_json::to_string_pretty(&json).unwrap()).unwrap();
    path
}

fn spin7(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_spin7")).args(args).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let json = serde_json::from_str(&text).unwrap_or(Value::Null);
    (out.status.code().unwrap(), json, text)
}

#[test]
fn rotate_weil_class_along_c1() {
    let beta = write_form("weil.json", &weil_plus_omega_sq());
    let (code, v, _) = spin7(&["rotate", "--c", "dz12+dz34", "--beta", beta.to_str().unwrap()]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["residual"], "0/1");
    let (omega, degree) = form_from_json(&v["omega_prime"]).unwrap();
    assert_eq!(degree, 2);
    assert!(!omega.is_zero());
}

#[test]
fn residual_of_product_class() {
    let beta = write_form("product.json", &product_class());
    let (code, v, _) = spin7(&["residual", "--c", "(1/2)*dz12 + (1/2)*dz34", "--in", beta.to_str().unwrap()]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["residual"], "0/1");
    assert_eq!(v["k"], "1/3");
}

#[test]
fn bogomolov_is_seed_deterministic() {
    let beta = write_form("weil-b.json", &weil_plus_omega_sq());
    let args = ["bogomolov", "--in", beta.to_str().unwrap(), "--samples", "200", "--seed", "11"];
    let (code, v, first) = spin7(&args);
    let (_, _, second) = spin7(&args);
    assert_eq!(code, 0, "{v}");
    assert_eq!(first, second);
    assert_eq!(v["k_m"]["exact"], "1/1");
    assert_eq!(v["pass"], true);
}

#[test]
fn weil_rotate_reports_checks() {
    let (code, v, _) = spin7(&["weil-rotate", "--d", "1", "--a", "1/3+1/5i", "--y", "1/2"]);
    assert_eq!(code, 0, "{v}");
    let checks = v["checks"].as_array().unwrap();
    let pass = |name: &str| checks.iter().find(|c| c["name"] == name).map(|c| c["pass"].clone());
    assert_eq!(pass("phi^2 = -d"), Some(Value::Bool(true)));
    assert_eq!(pass("F^2 = (4q^2 + 1) Id"), Some(Value::Bool(true)));
    assert_eq!(v["lambda"], "191/300");
}

#[test]
fn exact_mode_refuses_float_steps() {
    let (code, v, _) = spin7(&["weil-rotate", "--exact", "--d", "2", "--a", "1/4+1/7i", "--y", "1"]);
    assert_eq!(code, 3, "{v}");
    assert_eq!(v["error"], "FloatFallbackRequired");
}

#[test]
fn float_mode_decompose() {
    let beta = write_form("product-f.json", &product_class());
    let (code, v, _) = spin7(&["decompose", "--float", "--in", beta.to_str().unwrap()]);
    assert_eq!(code, 0, "{v}");
    assert!(v["summands"]["1"].is_object());
}

#[test]
fn bad_gamma_index_is_a_schema_error() {
    let (code, v, _) = spin7(&["rotate", "--gamma", "9"]);
    assert_eq!(code, 2);
    assert_eq!(v["field"], "gamma");
}
