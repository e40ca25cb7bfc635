use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn jck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jck"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path(p: &PathBuf) -> &str {
    p.to_str().unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

/// Compares stdout with a golden file; `JCK_BLESS=1` rewrites it.
fn check_golden(out: &Output, name: &str) {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let file = golden(name);
    if std::env::var_os("JCK_BLESS").is_some() {
        std::fs::create_dir_all(file.parent().unwrap()).unwrap();
        std::fs::write(&file, &out.stdout).unwrap();
    }
    let expected = std::fs::read(&file).expect("golden file present");
    assert!(expected == out.stdout, "output differs from {}", file.display());
}

#[test]
fn validate_reports() {
    let out = jck(&["validate", "--input", path(&data("seven_circles.json"))]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["valid"], true);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"circles":[{"x":0,"y":0,"r":1},{"x":1,"y":0,"r":1}]}"#).unwrap();
    let out = jck(&["validate", "--input", path(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_of(&out)["report"]["intersecting_pairs"][0], serde_json::json!([1, 2]));
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    let out = jck(&["tree", "--input", path(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    let out = jck(&["tree", "--input", "/nonexistent/x.json"]);
    assert_eq!(out.status.code(), Some(2));
    let out = jck(&["count-components", "--n", "7"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn seven_circles_tree() {
    let out = jck(&["tree", "--input", path(&data("seven_circles.json"))]);
    check_golden(&out, "seven_circles_tree.json");
    assert_eq!(json_of(&out)["tree"]["parents"], serde_json::json!([0, 5, 2, 2, 0, 7, 5]));
}

#[test]
fn classify_verdicts() {
    let out = jck(&[
        "classify",
        "--input",
        path(&data("seven_circles.json")),
        "--input",
        path(&data("seven_polygons.json")),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["same_component"], true);

    let out = jck(&[
        "classify",
        "--input",
        path(&data("two_apart.json")),
        "--input",
        path(&data("nested_pair.json")),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["same_component"], false);

    let f = data("ellipses.json");
    let out = jck(&["classify", "--labeled", "--input", path(&f), "--input", path(&f)]);
    assert_eq!(out.status.code(), Some(0));

    let out = jck(&["classify", "--input", path(&f)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn count_components() {
    let out = jck(&["count-components", "--n", "3", "--samples", "200", "--seed", "42"]);
    let v = json_of(&out);
    assert_eq!((v["enumerated"].as_u64(), v["observed"].as_u64()), (Some(4), Some(4)));
    let out = jck(&["count-components", "--n", "5", "--seed", "42"]);
    assert_eq!(json_of(&out)["enumerated"], 20);
}

#[test]
fn seven_circles_retract_goldens() {
    let input = data("seven_circles.json");
    let out = jck(&["retract", "--input", path(&input), "--frames", "4"]);
    check_golden(&out, "seven_circles_retract.json");
    let frames = json_of(&out)["frames"].as_array().unwrap().clone();
    assert!(frames.windows(2).all(|w| w[0] == w[1]));

    let out = jck(&["retract", "--input", path(&input), "--frames", "4", "--format", "svg"]);
    check_golden(&out, "seven_circles_retract.svg");
}

#[test]
fn ellipses_retract_goldens() {
    let input = data("ellipses.json");
    let args = ["retract", "--input", path(&input), "--frames", "4", "--pipeline", "convex"];
    let out = jck(&args);
    check_golden(&out, "ellipses_retract.json");
    let v = json_of(&out);
    let last = &v["frames"].as_array().unwrap().last().unwrap()["curves"];
    let circle = |i: usize, key: &str| last[i]["circle"][key].as_f64().unwrap();
    assert!((circle(0, "r") - 1.0).abs() < 1e-3);
    assert!((circle(0, "x") + 4.0).abs() < 1e-9);
    assert!((circle(1, "x") + 10.0 / 3.0).abs() < 1e-3);
    assert!((circle(1, "r") - 0.25 / 3.0).abs() < 1e-3);
    assert!((circle(2, "x") + 13.0 / 3.0).abs() < 1e-3);
    assert!((circle(2, "r") - 0.25).abs() < 1e-3);

    let mut svg_args = args.to_vec();
    svg_args.extend(["--format", "svg"]);
    check_golden(&jck(&svg_args), "ellipses_retract.svg");
}

#[test]
fn retract_writes_frame_files_and_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let diag = dir.path().join("diag.json");
    let frames = dir.path().join("frames");
    let out = jck(&[
        "retract",
        "--input",
        path(&data("l_shape.json")),
        "--pipeline",
        "conformal",
        "--frames",
        "3",
        "--diagnostics",
        diag.to_str().unwrap(),
        "--out-dir",
        frames.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let d: Value = serde_json::from_str(&std::fs::read_to_string(&diag).unwrap()).unwrap();
    assert_eq!(d[0]["active"], serde_json::json!([1]));
    assert_eq!(std::fs::read_dir(&frames).unwrap().count(), 4);
    let last = &json_of(&out)["frames"][3]["curves"][0];
    assert!(last["circle"]["r"].as_f64().unwrap() > 0.0);
}

#[test]
fn convex_pipeline_rejects_l_shape() {
    let out = jck(&[
        "retract",
        "--input",
        path(&data("l_shape.json")),
        "--pipeline",
        "convex",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("curve 1"));
}

#[test]
fn group_commands() {
    let out = jck(&["group", "aut-order", "--input", path(&data("seven_circles.json"))]);
    check_golden(&out, "seven_circles_aut_order.json");
    assert_eq!(json_of(&out)["aut_order"], 2);

    let out = jck(&["group", "signature", "--input", path(&data("seven_circles.json"))]);
    assert_eq!(json_of(&out)["pure_signature"], serde_json::json!([2, 2, 2, 1]));

    let dir = tempfile::tempdir().unwrap();
    let a = data("baut_example.json");
    let inv = jck(&["group", "inverse", "--input", path(&a)]);
    let inv_path = dir.path().join("inv.json");
    std::fs::write(&inv_path, &inv.stdout).unwrap();
    let prod = jck(&["group", "compose", "--input", path(&a), "--input", path(&inv_path)]);
    let prod_path = dir.path().join("prod.json");
    std::fs::write(&prod_path, &prod.stdout).unwrap();
    let pure = jck(&["group", "is-pure", "--input", path(&prod_path)]);
    assert_eq!(json_of(&pure)["pure"], true);
    let trivial = jck(&["group", "is-trivial", "--input", path(&prod_path)]);
    assert_eq!(json_of(&trivial)["trivial"], true);

    let id = dir.path().join("id.json");
    std::fs::write(&id, r#"{"tree":{"parents":[0,0]},"element":{"braid":{"strands":2,"word":[]}}}"#)
        .unwrap();
    assert_eq!(json_of(&jck(&["group", "is-pure", "--input", path(&id)]))["pure"], true);

    let out = jck(&["group", "compose", "--input", path(&a), "--input", path(&id)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn outputs_are_deterministic() {
    let input = data("l_shape.json");
    let args = ["retract", "--input", path(&input), "--frames", "2", "--format", "svg"];
    assert_eq!(jck(&args).stdout, jck(&args).stdout);
    let args = ["count-components", "--n", "4", "--seed", "9"];
    assert_eq!(jck(&args).stdout, jck(&args).stdout);
}
