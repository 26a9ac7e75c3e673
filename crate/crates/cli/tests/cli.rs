use std::process::{Command, Output};

fn eternalbar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eternalbar"))
        .args(args)
        .current_dir(concat!(env!("CARGO_MANIFEST_DIR"), "/../.."))
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scratch(name: &str, contents: &str) -> String {
    let dir = std::env::temp_dir().join(format!("eternalbar-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn torus_linear_p() {
    let o = eternalbar(&["torus", "--ham", "linear:1", "--classes", "0", "--gamma"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "k=0 c=1 gamma=2\n");
}

#[test]
fn torus_classes_and_formats() {
    let o = eternalbar(&[
        "torus",
        "--ham",
        "const:0",
        "--dim",
        "2",
        "--classes",
        "3,4;1,1",
        "--classes",
        "0,2",
    ]);
    assert_eq!(stdout(&o), "k=3,4 c=5\nk=1,1 c=√2\nk=0,2 c=2\n");
    let o = eternalbar(&["torus", "--ham", "linear:1", "--classes", "1", "--csv", "--spectrum"]);
    assert_eq!(stdout(&o), "k,c,spectrum,spectrum_complete\n\"1\",2,\"-2;2\",true\n");
    let o = eternalbar(&["--json", "torus", "--ham", "linear:1", "--classes", "0"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["c"], "1");
    let o = eternalbar(&["torus", "--ham", "linear:1,2", "--classes", "0", "--decimal", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn barcode_with_three_eternal_bars() {
    let o = eternalbar(&["barcode", "data/three_eternal.json"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("full=3 half_infinite=0 finite=2"), "{out}");
    assert!(out.contains("eternal_dimension=3"), "{out}");
    let o = eternalbar(&["barcode", "data/three_eternal.json", "--render"]);
    assert_eq!(stdout(&o).matches("(eternal)").count(), 3);
    let o = eternalbar(&["--json", "barcode", "data/presentation.json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["eternal_dimension"], 1);
    assert_eq!(v["half_infinite"], 1);
}

#[test]
fn spectral_of_a_half_bar() {
    let file = scratch("m.json", r#"{"bars":[{"birth":"2","death":"inf"}]}"#);
    let o = eternalbar(&["spectral", &file, "--class", "0"]);
    assert_eq!(stdout(&o), "c=2 eternal=false\n");
    let o = eternalbar(&["spectral", "data/three_eternal.json", "--class", "0,1", "--period", "1"]);
    assert_eq!(stdout(&o), "c=-inf eternal=true ell=-inf\n");
    let o = eternalbar(&["spectral", "data/three_eternal.json", "--class", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn complex_levels() {
    let o = eternalbar(&["complex", "data/complex.json", "--min-filtration", "x1"]);
    assert_eq!(stdout(&o), "level=-1 representative=τ^1·x2\n");
    let o = eternalbar(&["complex", "data/complex.json", "--min-filtration", "x1, x2@1"]);
    assert_eq!(stdout(&o), "level=-inf representative=0\n");
    let o = eternalbar(&["complex", "data/complex.json"]);
    assert!(stdout(&o).starts_with("rank=2\n"));
    let bad = scratch(
        "neg.json",
        r#"{"generators":[{"id":"x","action":"0"},{"id":"y","action":"0"}],"boundary":{"y":[["x","-1"]]}}"#,
    );
    let o = eternalbar(&["complex", &bad]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("negative area"));
}

#[test]
fn algebra_verification_exit_codes() {
    let o = eternalbar(&["algebra-verify", "data/odd_euler.json"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("unit-eternal: true"));
    let o = eternalbar(&["algebra-verify", "data/ideal_violation.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("ideal: FAIL entry 1:"));
    let o = eternalbar(&["algebra-verify", "data/shift_violation.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("product entry 0 violates the shift rule"));
}

#[test]
fn malformed_documents_are_line_anchored() {
    let file = scratch("bad.json", "{\"bars\":[\n{\"birth\":\"x\"}]}");
    let o = eternalbar(&["barcode", &file]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bad.json:2:"), "{}", stderr(&o));
    let csv = scratch("bad.csv", "1,0,1\n-1,0,x\n");
    let o = eternalbar(&["torus", "--ham", &format!("samples:{csv}"), "--classes", "0,0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bad.csv:2:"), "{}", stderr(&o));
    let o = eternalbar(&["barcode"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let args = [
        "torus",
        "--ham",
        "pl:data/circle.json",
        "--classes",
        "0,0;1,-1",
        "--spectrum",
        "--gamma",
    ];
    assert_eq!(stdout(&eternalbar(&args)), stdout(&eternalbar(&args)));
}
