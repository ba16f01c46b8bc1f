use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_b2crystal"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn generate(dir: &Path, h: i64, a: i64) -> std::path::PathBuf {
    let p = dir.join(format!("b{h}{a}.json"));
    let o = bin(&[
        "generate",
        "--H",
        &h.to_string(),
        "--A",
        &a.to_string(),
        "--out",
        path_str(&p),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    p
}

fn read(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn generate_writes_documents() {
    let dir = tempfile::tempdir().unwrap();
    let doc = read(&generate(dir.path(), 1, 0));
    assert_eq!(doc["meta"]["kind"], "crystal");
    assert_eq!(doc["vertices"].as_array().unwrap().len(), 4);
    assert_eq!(doc["edges"].as_array().unwrap().len(), 3);

    let doc = read(&generate(dir.path(), 0, 0));
    assert_eq!(doc["vertices"].as_array().unwrap().len(), 1);
    assert!(doc["edges"].as_array().unwrap().is_empty());
}

#[test]
fn generate_is_byte_deterministic_with_dot() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    let (da, db) = (dir.path().join("a.dot"), dir.path().join("b.dot"));
    for (p, d) in [(&a, &da), (&b, &db)] {
        let o = bin(&[
            "generate",
            "--H",
            "2",
            "--A",
            "2",
            "--out",
            path_str(p),
            "--dot",
            path_str(d),
        ]);
        assert_eq!(code(&o), 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let dot = std::fs::read_to_string(&da).unwrap();
    assert_eq!(dot, std::fs::read_to_string(&db).unwrap());
    assert!(dot.contains("color=green, label=\"1/2\""));
}

#[test]
fn bad_flags_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.json");
    assert_eq!(
        code(&bin(&[
            "generate",
            "--H",
            "1",
            "--A",
            "3",
            "--out",
            path_str(&out)
        ])),
        2
    );
    assert!(!out.exists());
    assert_eq!(code(&bin(&["generate", "--H", "1"])), 2);
    assert_eq!(code(&bin(&["frobnicate"])), 2);
    assert_eq!(
        code(&bin(&[
            "generate",
            "--H",
            "1",
            "--A",
            "0",
            "--out",
            "/nonexistent/dir/x.json"
        ])),
        2
    );
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let p = generate(dir.path(), 1, 2);
    let o = bin(&["verify", "--in", path_str(&p), "--derived"]);
    assert_eq!(code(&o), 0);
    let report = json(&o);
    assert_eq!(report["passed"], true);
    assert_eq!(report["stats"]["vertex_count"], 16);
    assert_eq!(report["stats"]["dimension_expected"], 16);

    // edit one label
    let mut doc = read(&p);
    let old = doc["edges"][0]["label_halves"].as_u64().unwrap();
    doc["edges"][0]["label_halves"] = Value::from(2 - old);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, doc.to_string()).unwrap();
    let o = bin(&["verify", "--in", path_str(&bad)]);
    assert_eq!(code(&o), 1);
    assert!(!json(&o)["violations"].as_array().unwrap().is_empty());

    assert_eq!(
        code(&bin(&[
            "verify",
            "--in",
            path_str(&dir.path().join("missing.json"))
        ])),
        2
    );
    std::fs::write(dir.path().join("junk.json"), "{not json").unwrap();
    assert_eq!(
        code(&bin(&[
            "verify",
            "--in",
            path_str(&dir.path().join("junk.json"))
        ])),
        2
    );
}

#[test]
fn verify_single_rules() {
    let dir = tempfile::tempdir().unwrap();
    let p = generate(dir.path(), 2, 2);
    for id in [
        "K0",
        "K1",
        "K2",
        "K3",
        "K4",
        "K5",
        "k5",
        "star-squares",
        "double-half",
    ] {
        assert_eq!(
            code(&bin(&["verify", "--in", path_str(&p), "--axiom", id])),
            0,
            "{id}"
        );
    }
    assert_eq!(
        code(&bin(&["verify", "--in", path_str(&p), "--axiom", "K9"])),
        2
    );
}

#[test]
fn verify_rejects_illegal_colors() {
    let dir = tempfile::tempdir().unwrap();
    let p = generate(dir.path(), 1, 0);
    let mut doc = read(&p);
    doc["edges"][0]["color"] = Value::from("blue");
    std::fs::write(&p, doc.to_string()).unwrap();
    assert_eq!(code(&bin(&["verify", "--in", path_str(&p)])), 2);
}

#[test]
fn sky_from_interval_and_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sky.json");
    let o = bin(&[
        "sky",
        "--H",
        "1",
        "--A",
        "2",
        "--out",
        path_str(&out),
        "--check",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(read(&out)["vertices"].as_array().unwrap().len(), 6);

    let o = bin(&["sky", "--H", "1", "--A", "0"]);
    assert_eq!(code(&o), 0);
    let sky = json(&o);
    let xy: Vec<Value> = sky["vertices"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v["xy"].clone())
        .collect();
    assert_eq!(
        xy,
        vec![serde_json::json!([0, 1]), serde_json::json!([1, 0])]
    );

    let p = generate(dir.path(), 2, 2);
    assert_eq!(code(&bin(&["sky", "--in", path_str(&p), "--check"])), 0);
    assert_eq!(code(&bin(&["sky", "--in", path_str(&out)])), 2);
}

#[test]
fn sky_check_rejects_mutated_crystal() {
    let dir = tempfile::tempdir().unwrap();
    let p = generate(dir.path(), 1, 2);
    let mut doc = read(&p);
    doc["edges"].as_array_mut().unwrap().remove(3);
    std::fs::write(&p, doc.to_string()).unwrap();
    assert_eq!(code(&bin(&["sky", "--in", path_str(&p), "--check"])), 1);
}

#[test]
fn coords_rows() {
    let o = bin(&["coords", "--H", "1", "--A", "2", "--all", "--check"]);
    assert_eq!(code(&o), 0);
    let rows: Vec<Value> = String::from_utf8(o.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(rows.len(), 16);
    assert!(rows
        .iter()
        .all(|r| r["failures"].as_array().unwrap().is_empty()));

    let o = bin(&["coords", "--H", "0", "--A", "2", "--all"]);
    let row = String::from_utf8(o.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str::<Value>(l).unwrap())
        .find(|r| r["config"] == serde_json::json!([2, 1, 0, 0, 0, 0, 0]))
        .unwrap();
    let id = row["id"].as_u64().unwrap().to_string();
    let o = bin(&["coords", "--H", "0", "--A", "2", "--vertex", &id]);
    assert_eq!(code(&o), 0);
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["first"], serde_json::json!([0, 1, 1, 0]));
    assert_eq!(r["second"], serde_json::json!([1, 1, 0, 0]));

    let o = bin(&["coords", "--H", "0", "--A", "0", "--all"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 1);
    assert!(text.contains("\"first\":[0,0,0,0],\"second\":[0,0,0,0]"));

    assert_eq!(
        code(&bin(&["coords", "--H", "1", "--A", "2", "--vertex", "16"])),
        2
    );
}

#[test]
fn stats_lines() {
    let text =
        |h: &str, a: &str| String::from_utf8(bin(&["stats", "--H", h, "--A", a]).stdout).unwrap();
    let s = text("2", "0");
    assert!(
        s.contains("vertices=10\n") && s.contains("fat=3\n") && s.contains("source_weight=(2,0)\n")
    );
    assert!(text("0", "0").contains("vertices=1\n"));
    let s = text("1", "2");
    assert!(
        s.contains("vertices=16\n") && s.contains("fat=4\n") && s.contains("sink_weight=(-1,-1)\n")
    );
}

#[test]
fn iso_command() {
    let dir = tempfile::tempdir().unwrap();
    let p = generate(dir.path(), 1, 2);
    let q = generate(dir.path(), 2, 0);
    assert_eq!(
        code(&bin(&["iso", "--a", path_str(&p), "--b", path_str(&p)])),
        0
    );
    assert_eq!(
        code(&bin(&["iso", "--a", path_str(&p), "--b", path_str(&q)])),
        1
    );
    assert_eq!(
        code(&bin(&[
            "iso",
            "--a",
            path_str(&p),
            "--b",
            "/nonexistent.json"
        ])),
        2
    );

    let (s1, s2) = (dir.path().join("s1.json"), dir.path().join("s2.json"));
    bin(&["sky", "--H", "2", "--A", "4", "--out", path_str(&s1)]);
    let g = generate(dir.path(), 2, 4);
    bin(&["sky", "--in", path_str(&g), "--out", path_str(&s2)]);
    assert_eq!(
        code(&bin(&["iso", "--a", path_str(&s1), "--b", path_str(&s2)])),
        0
    );
}

#[test]
fn help_exits_0() {
    let o = bin(&["--help"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("generate"));
}
