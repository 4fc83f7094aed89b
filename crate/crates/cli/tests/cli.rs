use std::path::PathBuf;
use std::process::{Command, Output};

fn quiver(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "quivers", &format!("{name}.json")]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn coha(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coha")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn qpoly_of_the_closed_orbit() {
    let o = coha(&["qpoly", "--quiver", &quiver("a2"), "--orbit", "1,0,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "w[1,1] - w[2,1]\n");
    assert!(stderr(&o).contains("A_2 numbering 1->1 2->2"));
}

#[test]
fn e6_has_36_roots() {
    let o = coha(&["roots", "--quiver", &quiver("e6")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 36);
}

#[test]
fn reineke_passes_on_a2() {
    let o = coha(&["verify-reineke", "--quiver", &quiver("a2"), "--cap", "3,3", "--precision", "20"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("reineke: PASS"));
}

#[test]
fn json_reports() {
    let o = coha(&["verify-betti", "--quiver", &quiver("a3_sink"), "--max-total", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "PASS");
    assert_eq!(v["instances_checked"], 19);
    assert!(v.get("counterexample").is_none());

    let o = coha(&["codim", "--quiver", &quiver("a2"), "--orbit", "2,0,2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["codim"], 4);
}

#[test]
fn products_and_classes() {
    let a2 = quiver("a2");
    let o = coha(&["mul", "--quiver", &a2, "--gamma1", "1,0", "--f1", "1", "--gamma2", "0,1", "--f2", "1"]);
    assert_eq!(stdout(&o), "1\n");
    let o = coha(&[
        "residue-mul", "--quiver", &a2, "--gamma1", "0,1", "--g", "1", "--gamma2", "1,0", "--f2", "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "residue: w[1,1] - w[2,1]\nshuffle: w[1,1] - w[2,1]\nmatch: true\n");
    let o = coha(&["euler", "--quiver", &a2, "--orbit", "1,0,1"]);
    assert_eq!(stdout(&o), "-u[1,1] + u[3,1]\nweights: -u[1,1] + u[3,1]\nmatch: true\n");
    let o = coha(&["restrict", "--quiver", &a2, "--orbit", "2,2,2", "--f", "w[2,1]+w[2,2]+w[2,3]+w[2,4]"]);
    assert_eq!(stdout(&o), "u[1,1] + u[1,2] + u[2,1] + u[2,2]\n");
}

#[test]
fn structure_check_and_e8_refusal() {
    let o = coha(&["verify-structure", "--quiver", &quiver("a2"), "--gamma", "1,1", "--cap", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("degree 10: dim H = 11, span rank = 11"));
    let o = coha(&["verify-structure", "--quiver", &quiver("e8"), "--gamma", "1,0,0,0,0,0,0,0", "--cap", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("NoUnitCoordinate"));
    let o = coha(&[
        "verify-structure", "--quiver", &quiver("e8"), "--gamma", "1,1,0,0,0,0,0,0", "--cap", "2", "--simple",
    ]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn input_errors_exit_with_2() {
    let a2 = quiver("a2");
    let o = coha(&["mul", "--quiver", &a2, "--gamma1", "1,0", "--f1", "w[1,1] + * 2", "--gamma2", "0,1", "--f2", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 1, column 10"), "{}", stderr(&o));
    let o = coha(&["mul", "--quiver", &a2, "--gamma1", "1,0", "--f1", "w[2,1]", "--gamma2", "0,1", "--f2", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = coha(&["roots"]);
    assert_eq!(o.status.code(), Some(2));
    let o = coha(&["codim", "--quiver", &a2, "--orbit", "1,0"]);
    assert_eq!(o.status.code(), Some(2));

    let dir = std::env::temp_dir().join(format!("coha-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\"vertices\": 3,\n \"edges\": [[1, 2], [2, 3], [3, 1]]}").unwrap();
    let o = coha(&["roots", "--quiver", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::write(&bad, "{\"vertices\": 3,\n \"edges\": [[1, 2],, ]}").unwrap();
    let o = coha(&["roots", "--quiver", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let a3 = quiver("a3_linear");
    let args = |t: &'static str| {
        vec![
            "mul".to_string(), "--quiver".into(), a3.clone(), "--threads".into(), t.into(),
            "--gamma1".into(), "1,1,1".into(), "--f1".into(), "w[1,1]^2 + w[3,1]".into(),
            "--gamma2".into(), "1,1,0".into(), "--f2".into(), "w[2,1] - 2*w[1,1]".into(),
        ]
    };
    let run = |t| {
        let a: Vec<String> = args(t);
        let a: Vec<&str> = a.iter().map(String::as_str).collect();
        coha(&a).stdout
    };
    let one = run("1");
    assert!(!one.is_empty());
    assert_eq!(one, run("4"));
    assert_eq!(one, run("1"));
}
