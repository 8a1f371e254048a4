use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const FGV: &str = r"(\x:Bool@L. x)@L ((\x:Bool@?. x)@L false@H)";

const GOLDEN: &str = "  0     (<(Bool@L -> Bool@L)@L, (Bool@L -> Bool@L)@L>(\\x:Bool@L. x)@L) (<Bool@L, Bool@L>((<(Bool@? -> Bool@?)@L, (Bool@? -> Bool@?)@L>(\\x:Bool@?. x)@L) (<Bool@H, Bool@H>false@H)))
  1 ↦   (<(Bool@L -> Bool@L)@L, (Bool@L -> Bool@L)@L>(\\x:Bool@L. x)@L) (<Bool@L, Bool@L>(<Bool@?, Bool@?>(<Bool@H, Bool@H>false@H :: Bool@?) :: Bool@?))
  2 −→c (<(Bool@L -> Bool@L)@L, (Bool@L -> Bool@L)@L>(\\x:Bool@L. x)@L) (<Bool@L, Bool@L>(<Bool@H, Bool@H>false@H :: Bool@?))
  3 −→c (<(Bool@L -> Bool@L)@L, (Bool@L -> Bool@L)@L>(\\x:Bool@L. x)@L) (error)
ERROR: cannot combine <Bool@H, Bool@H> with <Bool@L, Bool@L> at 1:19-1:43
";

struct Workspace(TempDir);

impl Workspace {
    fn new() -> Self {
        Workspace(tempfile::tempdir().unwrap())
    }

    fn file(&self, name: &str, contents: &str) -> PathBuf {
        let path = self.0.path().join(name);
        std::fs::write(&path, contents).unwrap();
        path
    }
}

fn gsec(args: &[&str], file: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gsec"));
    cmd.env_remove("GSEC_LATTICE").args(args);
    if let Some(f) = file {
        cmd.arg(f);
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn check_prints_the_type() {
    let ws = Workspace::new();
    let f = ws.file("fgv.gsec", FGV);
    let o = gsec(&["check"], Some(&f));
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), ": Bool@L\n");
}

#[test]
fn type_errors_exit_one() {
    let ws = Workspace::new();
    let f = ws.file("fv.gsec", r"(\x:Bool@L. x)@L false@H");
    for cmd in ["check", "elab", "run"] {
        let o = gsec(&[cmd], Some(&f));
        assert_eq!(o.status.code(), Some(1), "{cmd}");
        assert!(stderr(&o).starts_with("error: "), "{cmd}: {}", stderr(&o));
    }
    let o = gsec(&["check", "--static"], Some(&ws.file("g.gsec", "true@?")));
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn elab_prints_the_intrinsic_term() {
    let ws = Workspace::new();
    let o = gsec(&["elab"], Some(&ws.file("fgv.gsec", FGV)));
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("(<(Bool@L -> Bool@L)@L, (Bool@L -> Bool@L)@L>"));
    assert!(stdout(&o).contains("(<Bool@H, Bool@H>false@H)"));
}

#[test]
fn run_reports_values_and_errors() {
    let ws = Workspace::new();
    let o = gsec(
        &["run"],
        Some(&ws.file("ok.gsec", r"(\x:Bool@?. x)@L true@L")),
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "<Bool@L, Bool@?>true@L :: Bool@?");
    let o = gsec(&["run"], Some(&ws.file("plain.gsec", "true@L && false@H")));
    assert_eq!(stdout(&o).trim(), "<Bool@H, Bool@H>false@H :: Bool@H");
    let o = gsec(&["run"], Some(&ws.file("fgv.gsec", FGV)));
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).starts_with("ERROR: cannot combine"));
}

#[test]
fn run_trace_matches_golden() {
    let ws = Workspace::new();
    let o = gsec(&["run", "--trace"], Some(&ws.file("fgv.gsec", FGV)));
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout(&o), GOLDEN);
}

#[test]
fn static_run() {
    let ws = Workspace::new();
    let o = gsec(
        &["run", "--static"],
        Some(&ws.file("s.gsec", "if true@H then true@L else false@L")),
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "true@H");
}

#[test]
fn input_errors_exit_three() {
    let ws = Workspace::new();
    let o = gsec(&["check"], Some(&ws.file("empty.gsec", "")));
    assert_eq!(o.status.code(), Some(3));
    let o = gsec(&["check"], Some(&ws.file("bad.gsec", "(true@L")));
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("1:"), "{}", stderr(&o));
    let o = gsec(&["check"], Some(&ws.0.path().join("missing.gsec")));
    assert_eq!(o.status.code(), Some(3));
    let o = gsec(
        &["check", "--lattice", "nope"],
        Some(&ws.file("t.gsec", "true@L")),
    );
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(gsec(&["bogus"], None).status.code(), Some(3));
    assert_eq!(gsec(&["--help"], None).status.code(), Some(0));
}

#[test]
fn lattice_selection() {
    let ws = Workspace::new();
    let f = ws.file("d.gsec", "true@M1 && false@M2");
    let o = gsec(&["check", "--lattice", "diamond"], Some(&f));
    assert_eq!(stdout(&o), ": Bool@Top\n");
    let o = Command::new(env!("CARGO_BIN_EXE_gsec"))
        .env("GSEC_LATTICE", "diamond")
        .arg("check")
        .arg(&f)
        .output()
        .unwrap();
    assert_eq!(stdout(&o), ": Bool@Top\n");
    let o = gsec(&["check"], Some(&f));
    assert_eq!(o.status.code(), Some(1));
    let json = ws.file(
        "lat.json",
        r#"{"elements": ["P", "S"], "order": [["P", "S"]]}"#,
    );
    let g = ws.file("p.gsec", "true@S || false@P");
    let o = gsec(&["check", "--lattice", json.to_str().unwrap()], Some(&g));
    assert_eq!(stdout(&o), ": Bool@S\n");
}

#[test]
fn props_lines_and_exit_codes() {
    let o = gsec(
        &[
            "props",
            "--suite",
            "galois",
            "--suite",
            "transitivity",
            "--quiet",
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "PROP galois PASS n=1596 cex=0\nPROP transitivity PASS n=111 cex=0\n"
    );
    let o = gsec(
        &[
            "props",
            "--suite",
            "static-safety",
            "--depth",
            "2",
            "--quiet",
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PROP static-safety PASS"));
    let o = gsec(&["props", "--suite", "nope"], None);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn props_reports_counterexamples() {
    let o = gsec(
        &[
            "props",
            "--suite",
            "noninterference",
            "--seed",
            "1",
            "--samples",
            "200000",
            "--depth",
            "4",
        ],
        None,
    );
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(4), "{out}");
    assert!(out.starts_with("PROP noninterference FAIL"));
    assert!(out.contains("input:"));
}
