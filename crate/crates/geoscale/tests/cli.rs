use std::process::Command as Process;

use geoscale::cli::{exit, exit_code_for, group_element_from_report, run, BlockOut, Command, Overrides, Problem};
use geoscale::geometry::moment_map_at;
use serde_json::Value;

const MS: &str = r#"{"representation": {"kind": "matrix_scaling", "n": 2}, "group_kind": "SL", "v": [1, 2, 3, 4]"#;

/// `(label, command, document)` triples, each malformed in one way.
fn malformed() -> Vec<(&'static str, Command, String)> {
    let ms = |tail: &str| format!("{MS}{tail}}}");
    let tensor = |target: &str| {
        format!(r#"{{"representation": {{"kind": "tensor", "dims": [2, 2]}}, "v": [1, 0, 0, 1], "target": {target}}}"#)
    };
    vec![
        ("truncated", Command::Scale, "{".to_string()),
        ("trailing text", Command::Scale, format!("{} trailing", ms(""))),
        ("unknown field", Command::Scale, ms(r#", "vector": [1]"#)),
        ("unknown kind", Command::Scale, r#"{"representation": {"kind": "moebius"}, "v": [1]}"#.to_string()),
        ("missing parameter", Command::Scale, r#"{"representation": {"kind": "matrix_scaling"}, "v": [1]}"#.to_string()),
        ("parameter type", Command::Scale, r#"{"representation": {"kind": "matrix_scaling", "n": "two"}, "v": [1]}"#.to_string()),
        ("unknown representation field", Command::Scale, r#"{"representation": {"kind": "matrix_scaling", "n": 2, "m": 1}, "v": [1]}"#.to_string()),
        ("group kind", Command::Scale, r#"{"representation": {"kind": "matrix_scaling", "n": 2}, "group_kind": "XL", "v": [1, 2, 3, 4]}"#.to_string()),
        ("decimal text", Command::Scale, r#"{"representation": {"kind": "matrix_scaling", "n": 2}, "v": [1, "abc", 3, 4]}"#.to_string()),
        ("complex triple", Command::Scale, r#"{"representation": {"kind": "matrix_scaling", "n": 2}, "v": [1, [2, 0, 1], 3, 4]}"#.to_string()),
        ("vector length", Command::Scale, r#"{"representation": {"kind": "matrix_scaling", "n": 2}, "v": [1, 2, 3]}"#.to_string()),
        ("zero vector", Command::Scale, r#"{"representation": {"kind": "matrix_scaling", "n": 2}, "v": [0, 0, 0, 0]}"#.to_string()),
        ("empty vector", Command::Scale, r#"{"representation": {"kind": "torus", "weights": [[1]]}, "v": []}"#.to_string()),
        ("missing vector", Command::Scale, r#"{"representation": {"kind": "matrix_scaling", "n": 2}}"#.to_string()),
        ("zero denominator", Command::Pscale, tensor(r#"[["1/0", "1"], ["1/2", "1/2"]]"#)),
        ("rational text", Command::Pscale, tensor(r#"[["a/b", "1/2"], ["1/2", "1/2"]]"#)),
        ("increasing target", Command::Pscale, tensor(r#"[["1/4", "3/4"], ["1/2", "1/2"]]"#)),
        ("target factor count", Command::Pscale, tensor(r#"[["1/2", "1/2"]]"#)),
        ("unknown solver field", Command::Scale, ms(r#", "solver": {"eps": 0.1}"#)),
        ("solver type", Command::Scale, ms(r#", "solver": {"epsilon": "small"}"#)),
        ("weights with representation", Command::Margin, ms(r#", "weights": [[1, 0]]"#)),
        ("group kind without representation", Command::Margin, r#"{"group_kind": "SL", "weights": [[1]]}"#.to_string()),
    ]
}

#[test]
fn malformed_files_give_distinct_located_diagnostics() {
    let cases = malformed();
    assert!(cases.len() >= 20);
    let mut messages = Vec::new();
    for (label, command, text) in &cases {
        let err = Problem::from_json(text)
            .and_then(|p| run(*command, &p, &Overrides::default()))
            .expect_err(label);
        assert_eq!(exit_code_for(&err), exit::INPUT_ERROR, "{label}: {err}");
        let msg = err.to_string();
        assert!(msg.contains("line ") || msg.contains("field `"), "{label}: unlocated diagnostic {msg}");
        messages.push(msg);
    }
    for i in 0..messages.len() {
        for j in 0..i {
            assert_ne!(messages[i], messages[j], "{} and {} share a diagnostic", cases[i].0, cases[j].0);
        }
    }
}

fn solved(command: Command, text: &str, ov: &Overrides) -> (Problem, Value) {
    let p = Problem::from_json(text).unwrap();
    let report = run(command, &p, ov).unwrap();
    (p, serde_json::from_str(&report.to_json()).unwrap())
}

#[test]
fn recorded_group_element_reproduces_moment_norm() {
    let docs: [(Command, &str); 4] = [
        (Command::Scale, include_str!("../examples/problems/matrix_scaling.json")),
        (Command::Scale, r#"{"representation": {"kind": "torus", "weights": [[1, 0], [0, 1], [-1, -1]]}, "v": [1, [0, 2], 3]}"#),
        (Command::Pscale, include_str!("../examples/problems/tensor_target.json")),
        (Command::Capacity, include_str!("../examples/problems/gt_capacity.json")),
    ];
    for (command, text) in docs {
        let (p, json) = solved(command, text, &Overrides::default());
        let blocks: Vec<BlockOut> = serde_json::from_value(json["final_g"].clone()).unwrap();
        let g = group_element_from_report(&blocks);
        let rep = p.rep().unwrap();
        let mu = moment_map_at(rep.as_ref(), p.vector().unwrap(), &g).unwrap().norm();
        let reported = json["moment_norm"].as_f64().unwrap();
        assert!((mu - reported).abs() <= 1e-9, "{command:?}: {mu} vs {reported}");
    }
}

fn without_wall_time(mut json: Value) -> Value {
    json.as_object_mut().unwrap().remove("wall_time_seconds");
    json
}

#[test]
fn fixed_seed_reproduces_report() {
    let text = include_str!("../examples/problems/tensor_target.json");
    let ov = Overrides { randomize: true, seed: Some(5), ..Default::default() };
    let a = without_wall_time(solved(Command::Pscale, text, &ov).1);
    let b = without_wall_time(solved(Command::Pscale, text, &ov).1);
    assert_eq!(a, b);
    let c = without_wall_time(solved(Command::Pscale, text, &Overrides { seed: Some(6), ..ov }).1);
    assert_ne!(a["details"], c["details"]);
    for command in [Command::Scale, Command::Nullcone, Command::Flow, Command::Margin] {
        let text = include_str!("../examples/problems/left_right_unstable.json");
        let a = without_wall_time(solved(command, text, &Overrides::default()).1);
        let b = without_wall_time(solved(command, text, &Overrides::default()).1);
        assert_eq!(a, b, "{command:?}");
    }
}

fn binary(args: &[&str]) -> (i32, String, String) {
    let out = Process::new(env!("CARGO_BIN_EXE_geoscale")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8_lossy(&out.stdout).into_owned(), String::from_utf8_lossy(&out.stderr).into_owned())
}

fn problem_path(name: &str) -> String {
    format!("{}/examples/problems/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn binary_exit_codes() {
    let (code, stdout, _) = binary(&["scale", "--input", &problem_path("matrix_scaling.json")]);
    assert_eq!(code, exit::SOLVED);
    let json: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(json["status"], "converged");

    let (code, stdout, _) = binary(&["nullcone", "--input", &problem_path("left_right_unstable.json")]);
    assert_eq!(code, exit::SOLVED);
    assert_eq!(serde_json::from_str::<Value>(&stdout).unwrap()["verdict"], "in_null_cone");

    let (code, _, _) = binary(&["scale", "--input", &problem_path("left_right_unstable.json"), "--max-iters", "50"]);
    assert_eq!(code, exit::INCONCLUSIVE);

    let dir = tempfile::tempdir().unwrap();
    for (label, _, text) in malformed().into_iter().take(5) {
        let path = dir.path().join("bad.json");
        std::fs::write(&path, text).unwrap();
        let (code, stdout, stderr) = binary(&["scale", "--input", path.to_str().unwrap()]);
        assert_eq!(code, exit::INPUT_ERROR, "{label}");
        assert!(stdout.is_empty() && stderr.starts_with("error: "), "{label}");
    }
    let (code, _, _) = binary(&["scale", "--input", "/nonexistent/problem.json"]);
    assert_eq!(code, exit::INPUT_ERROR);

    let out = dir.path().join("report.json");
    let (code, stdout, _) = binary(&["margin", "--input", &problem_path("torus_weights.json"), "--output", out.to_str().unwrap()]);
    assert_eq!(code, exit::SOLVED);
    assert!(stdout.is_empty());
    let json: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(json["command"], "margin");
}
