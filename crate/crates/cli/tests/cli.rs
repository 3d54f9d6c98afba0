use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn exotica() -> Command {
    Command::new(env!("CARGO_BIN_EXE_exotica"))
}

fn run(args: &[&str]) -> Output {
    exotica().args(args).output().expect("binary runs")
}

fn run_with_stdin(args: &[&str], stdin: &[u8]) -> Output {
    let mut child = exotica()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn export(name: &str, dir: &Path) -> PathBuf {
    let o = run(&["catalog", "export", name, "--dir", dir.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    dir.join(format!("{name}.json"))
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn catalog_lists_every_fixture() {
    let o = run(&["catalog", "list"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for name in exotica_core::catalog::FIXTURE_NAMES {
        assert!(text.contains(name), "{name} missing from\n{text}");
    }
}

#[test]
fn decide_projective_types() {
    let dir = tempfile::tempdir().unwrap();
    for (name, headline) in [
        ("rp-w2-zero", "NO EXOTICA (primary obstruction w₁³+w₁w₂ ≠ 0)"),
        ("rp-kreck", "EXOTICA EXIST (w₂ = w₁²)"),
    ] {
        let o = run(&["decide", path_str(&export(name, dir.path()))]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        assert!(stdout(&o).starts_with(headline), "{}", stdout(&o));
    }
}

#[test]
fn decide_semidirect_product_with_cover_lift_and_section() {
    let dir = tempfile::tempdir().unwrap();
    let base = export("z4-semidirect", dir.path());
    let cover = dir.path().join("z4-semidirect.cover.json");
    let o = run(&["decide", path_str(&base), "--cover", path_str(&cover), "--lift", "a", "--section", "s"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("NO EXOTICA (secondary obstruction [f*𝔬] ≠ 0)"), "{}", stdout(&o));
}

#[test]
fn exported_fixture_pipes_into_decide() {
    let exported = run(&["catalog", "export", "z2-remark"]);
    assert!(exported.status.success());
    let o = run_with_stdin(&["decide", "-"], &exported.stdout);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("clause: cohomological-dimension-at-most-3"));
}

#[test]
fn json_and_text_report_the_same_clause() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["rp-w2-zero", "rp-kreck", "z2-remark"] {
        let path = export(name, dir.path());
        let text = stdout(&run(&["decide", path_str(&path)]));
        let json: Value = serde_json::from_str(&stdout(&run(&["decide", path_str(&path), "--json"]))).unwrap();
        let clause = json["verdict"]["clause"].as_str().unwrap();
        assert!(text.contains(&format!("clause: {clause}")), "{name}");
        assert_eq!(text.lines().next().unwrap(), json["headline"].as_str().unwrap());
    }
}

/// Enough of JSON Schema for the published verdict schema: `type`,
/// `enum`, `required`, `properties` and `items`.
fn conforms(value: &Value, schema: &Value, at: &str) -> Result<(), String> {
    if let Some(t) = schema.get("type") {
        let allowed: Vec<&str> = match t {
            Value::String(s) => vec![s.as_str()],
            Value::Array(a) => a.iter().map(|x| x.as_str().unwrap()).collect(),
            _ => unreachable!(),
        };
        let actual = match value {
            Value::Null => "null",
            Value::Bool(_) => "boolean",
            Value::Number(n) if n.is_u64() || n.is_i64() => "integer",
            Value::Number(_) => "number",
            Value::String(_) => "string",
            Value::Array(_) => "array",
            Value::Object(_) => "object",
        };
        if !allowed.contains(&actual) {
            return Err(format!("{at}: {actual} is not one of {allowed:?}"));
        }
    }
    if let Some(Value::Array(options)) = schema.get("enum") {
        if !options.contains(value) {
            return Err(format!("{at}: {value} is not an allowed value"));
        }
    }
    if let Value::Object(map) = value {
        if let Some(Value::Array(required)) = schema.get("required") {
            for key in required {
                let key = key.as_str().unwrap();
                if !map.contains_key(key) {
                    return Err(format!("{at}: missing {key}"));
                }
            }
        }
        if let Some(Value::Object(props)) = schema.get("properties") {
            for (key, sub) in props {
                if let Some(v) = map.get(key) {
                    conforms(v, sub, &format!("{at}.{key}"))?;
                }
            }
        }
    }
    if let (Value::Array(items), Some(sub)) = (value, schema.get("items")) {
        for (i, v) in items.iter().enumerate() {
            conforms(v, sub, &format!("{at}[{i}]"))?;
        }
    }
    Ok(())
}

#[test]
fn json_output_conforms_to_the_published_schema() {
    let schema: Value =
        serde_json::from_str(include_str!("../schema/verdict.schema.json")).expect("schema parses");
    let dir = tempfile::tempdir().unwrap();
    let base = export("z4-semidirect", dir.path());
    let cover = dir.path().join("z4-semidirect.cover.json");
    let mut runs = vec![run(&["decide", path_str(&base), "--cover", path_str(&cover), "--lift", "a", "--json"])];
    for name in ["rp-w2-zero", "rp-kreck", "z2-remark"] {
        runs.push(run(&["decide", path_str(&export(name, dir.path())), "--json"]));
    }
    for o in runs {
        let value: Value = serde_json::from_str(&stdout(&o)).unwrap();
        conforms(&value, &schema, "$").unwrap();
    }
}

#[test]
fn vanishing_w1_is_invalid_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = export("rp-w2-zero", dir.path());
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    doc["cochains"]["w1"]["support"] = Value::Array(vec![]);
    std::fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();
    let o = run(&["decide", path_str(&path)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).starts_with("INVALID INPUT"), "{}", stdout(&o));
    let o = run(&["report", path_str(&path)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn malformed_files_get_line_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\n  \"format_version\": 1,\n  \"max_degree\": oops\n}\n").unwrap();
    let o = run(&["decide", path_str(&path)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
    let o = run(&["report", path_str(&path)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_file_and_unknown_fixture_are_input_errors() {
    assert_eq!(run(&["decide", "/nonexistent/model.json"]).status.code(), Some(2));
    let o = run(&["catalog", "export", "no-such-fixture"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("rp-kreck"), "{}", stderr(&o));
}

#[test]
fn cohomology_of_the_stress_model() {
    let dir = tempfile::tempdir().unwrap();
    let path = export("k2-stress", dir.path());
    let o = run(&["cohomology", path_str(&path), "--deg", "5"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("H^5(X; Z/2) has dimension 2"));
    let o = run(&["cohomology", path_str(&path), "--deg", "2", "--steenrod", "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dimension"], 1);
    assert_eq!(v["steenrod"][0]["operation"], "Sq1");
    assert_ne!(v["steenrod"][0]["images"][0], Value::Array(vec![]), "Sq1 of the fundamental class vanished");
}

#[test]
fn cohomology_degree_out_of_range() {
    let dir = tempfile::tempdir().unwrap();
    let path = export("rp-w2-zero", dir.path());
    assert_eq!(run(&["cohomology", path_str(&path), "--deg", "6"]).status.code(), Some(2));
}

#[test]
fn steenrod_table_on_projective_space() {
    let dir = tempfile::tempdir().unwrap();
    let path = export("rp-kreck", dir.path());
    let o = run(&["cohomology", path_str(&path), "--deg", "2", "--steenrod"]);
    let text = stdout(&o);
    assert!(text.contains("Sq1: H^2 -> H^3\n  e0 -> 0"), "{text}");
    assert!(text.contains("Sq2: H^2 -> H^4\n  e0 -> f0"), "{text}");
}

#[test]
fn report_on_projective_types() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["report", path_str(&export("rp-w2-zero", dir.path()))]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("E2[4,1] -> E2[2,2]: 1x1 rank 1 (isomorphism)"), "{text}");
    assert!(text.contains("d3: nonzero"), "{text}");

    let o = run(&["report", path_str(&export("rp-kreck", dir.path())), "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["report"]["killers"]["summary"], "all differentials into E_{0,4} vanish; [K3] survives");
    assert_eq!(v["report"]["killers"]["clause"], v["verdict"]["verdict"]["clause"]);
}

#[test]
fn export_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["rp-w2-zero", "z2-remark"] {
        let once = std::fs::read(export(name, dir.path())).unwrap();
        let piped = run(&["catalog", "export", name]).stdout;
        assert_eq!(once, piped, "{name}");
    }
}
