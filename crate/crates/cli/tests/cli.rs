use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn write(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, v.to_string()).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_troplin")).args(args).output().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn segment() -> Value {
    json!({
        "vertices": [{"id": "a", "at_infinity": false}, {"id": "b", "at_infinity": false}],
        "edges": [{"id": "e", "ends": ["a", "b"], "length": "1"}],
    })
}

fn circle() -> Value {
    json!({
        "vertices": [{"id": "p"}, {"id": "q"}],
        "edges": [
            {"id": "e0", "ends": ["p", "q"], "length": "1"},
            {"id": "e1", "ends": ["q", "p"], "length": "1"},
        ],
    })
}

fn reflection() -> Value {
    json!({
        "model": circle(),
        "generators": [{
            "vertex_map": {"p": "p", "q": "q"},
            "edge_map": {"e0": {"to": "e1", "reversed": true}, "e1": {"to": "e0", "reversed": true}},
        }],
    })
}

fn zero_on_circle() -> Value {
    json!({
        "refinement": circle(),
        "values": {"p": "0", "q": "0"},
        "slopes": {"e0": {"slope": 0, "from": "p"}, "e1": {"slope": 0, "from": "q"}},
    })
}

struct Files {
    _dir: TempDir,
    curve: PathBuf,
    divisor: PathBuf,
}

fn segment_files() -> Files {
    let dir = TempDir::new().unwrap();
    let curve = write(dir.path(), "c.json", &segment());
    let divisor = write(dir.path(), "d.json", &json!([{"point": {"vertex": "a"}, "coeff": 1}]));
    Files { _dir: dir, curve, divisor }
}

#[test]
fn gens_lists_two_generators_on_the_segment() {
    let f = segment_files();
    let args = ["gens", "--curve", f.curve.to_str().unwrap(), "--divisor", f.divisor.to_str().unwrap()];
    let o = run(&args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert_eq!(run(&args).stdout, o.stdout);
    let o = run(&[&args[..], &["--minimal", "--pretty"]].concat());
    assert_eq!(stdout_json(&o).as_array().unwrap().len(), 2);
    assert!(String::from_utf8_lossy(&o.stdout).contains('\n'));
}

#[test]
fn quotient_of_the_reflection_is_a_segment() {
    let dir = TempDir::new().unwrap();
    let g = write(dir.path(), "g.json", &reflection());
    let o = run(&["quotient", "--group", g.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["degree"], json!(2));
    let q = &v["quotient"];
    assert_eq!(q["edges"].as_array().unwrap().len(), 1);
    assert_eq!(q["edges"][0]["length"], json!("1"));
    assert_eq!(v["phi"]["dilations"]["e0"], json!(1));
}

#[test]
fn invariant_membership_on_the_reflected_circle() {
    let dir = TempDir::new().unwrap();
    let g = write(dir.path(), "g.json", &reflection());
    let d = write(
        dir.path(),
        "d.json",
        &json!([
            {"point": {"edge": "e0", "offset": "1/2", "anchor": "p"}, "coeff": 1},
            {"point": {"edge": "e0", "offset": "3/4", "anchor": "p"}, "coeff": 1},
        ]),
    );
    let f = write(dir.path(), "f.json", &zero_on_circle());
    let base = ["--group", g.to_str().unwrap(), "--divisor", d.to_str().unwrap(), "--function", f.to_str().unwrap()];
    let o = run(&[&["check", "--in", "sk"], &base[..]].concat());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout_json(&o), json!({"member": true}));
    let o = run(&[&["check", "--in", "s"], &base[..]].concat());
    assert_eq!(stdout_json(&o), json!({"member": false}));
    let o = run(&[&["express"], &base[..]].concat());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["terms"][0]["coefficient"], json!("0"));
}

#[test]
fn precondition_failures_exit_with_three() {
    let f = segment_files();
    let dir = TempDir::new().unwrap();
    let up = write(
        dir.path(),
        "f.json",
        &json!({
            "refinement": segment(),
            "values": {"a": "0", "b": "1"},
            "slopes": {"e": {"slope": 1, "from": "a"}},
        }),
    );
    let o = run(&[
        "check",
        "--in",
        "s",
        "--curve",
        f.curve.to_str().unwrap(),
        "--divisor",
        f.divisor.to_str().unwrap(),
        "--function",
        up.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["errors"][0]["code"], json!("not-member"));
}

#[test]
fn invalid_input_lists_every_error() {
    let dir = TempDir::new().unwrap();
    let c = write(
        dir.path(),
        "c.json",
        &json!({
            "vertices": [{"id": "a"}, {"id": "b"}],
            "edges": [
                {"id": "e", "ends": ["a", "x"], "length": "1"},
                {"id": "f", "ends": ["a", "b"], "length": "0/1"},
            ],
        }),
    );
    let o = run(&["info", "--curve", c.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    let codes: Vec<&str> = err["errors"].as_array().unwrap().iter().map(|e| e["code"].as_str().unwrap()).collect();
    assert_eq!(codes, vec!["dangling-id", "nonpositive-length"]);
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn decompose_and_info() {
    let f = segment_files();
    let dir = TempDir::new().unwrap();
    let clamp = write(
        dir.path(),
        "f.json",
        &json!({
            "refinement": {
                "vertices": [{"id": "a"}, {"id": "b"}, {"id": "e@1/2"}],
                "edges": [
                    {"id": "e#0", "ends": ["a", "e@1/2"], "length": "1/2"},
                    {"id": "e#1", "ends": ["e@1/2", "b"], "length": "1/2"},
                ],
            },
            "values": {"a": "0", "e@1/2": "-1/2", "b": "-1/2"},
            "slopes": {"e#0": {"slope": -1, "from": "a"}, "e#1": {"slope": 0, "from": "e@1/2"}},
        }),
    );
    let o = run(&["decompose", "--curve", f.curve.to_str().unwrap(), "--function", clamp.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    assert_eq!(v["constant"], json!("0"));
    assert_eq!(v["terms"].as_array().unwrap().len(), 1);
    assert_eq!(v["terms"][0]["reach"], json!("1/2"));
    let o = run(&["info", "--curve", f.curve.to_str().unwrap(), "--divisor", f.divisor.to_str().unwrap()]);
    let v = stdout_json(&o);
    assert_eq!(v["curve"]["genus"], json!(0));
    assert_eq!(v["divisor"]["degree"], json!(1));
}
