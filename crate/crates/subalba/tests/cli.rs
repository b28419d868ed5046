use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use subalba::dto::{ClassifyJson, ErrorJson, FrameFile, RunJson, TraceLine, VerifyJson};

fn subalba(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subalba")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("subalba-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    fs::write(&p, contents).unwrap();
    p
}

const REFLEXIVITY: &str = "p prec q => p <= q";
const MCKINSEY: &str = "T <= T => box dia p <= dia box p";

#[test]
fn classify_exit_codes() {
    let file = scratch("refl.sa", "# reflexivity\np prec q =>\n  p <= q\n");
    let ok = subalba(&["classify", file.to_str().unwrap()]);
    assert_eq!(code(&ok), 0);
    assert!(stdout(&ok).starts_with("accepted: eps {"), "{}", stdout(&ok));
    assert_eq!(code(&subalba(&["classify", "-e", MCKINSEY])), 1);
    let bad = scratch("bad.sa", "p prec => q");
    let o = subalba(&["classify", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("parse error: 1:"));
    assert_eq!(code(&subalba(&["classify", "/nonexistent/file.sa"])), 2);
}

#[test]
fn classify_json_schema() {
    let o = subalba(&["--format", "json", "classify", "-e", REFLEXIVITY]);
    let r: ClassifyJson = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!(r.accepted);
    assert_eq!(r.certificate.unwrap().omega.len(), 2);
    let o = subalba(&["--format", "json", "classify", "-e", MCKINSEY]);
    let r: ClassifyJson = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!(!r.accepted && r.certificate.is_none() && r.violation.is_some());
}

#[test]
fn run_prints_pure_output_and_correspondent() {
    let o = subalba(&["run", "-e", REFLEXIVITY, "--translate"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "forall @i. @i <= sdia @i\nfo: forall w. R(w,w)\n");
    let o = subalba(&["run", "-e", "p prec q => E c. p prec c & c prec q", "--translate"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("fo: forall w. forall v. (exists u. R(u,v) & R(w,u)) -> R(w,v)"));
}

#[test]
fn run_failure_dumps_the_stuck_system() {
    let o = subalba(&["run", "-e", MCKINSEY]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("failure: stuck, unresolved p\n"));
    let o = subalba(&["--format", "json", "run", "-e", MCKINSEY]);
    let r: RunJson = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!(!r.success && r.unresolved == ["p"] && !r.system.is_empty());
}

#[test]
fn trace_file_and_topology_report() {
    let dir = std::env::temp_dir().join(format!("subalba-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join("trace.jsonl");
    let o = subalba(&[
        "--format",
        "json",
        "run",
        "-e",
        "p prec q => ~q prec ~p",
        "--check-topo",
        "--trace",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let r: RunJson = serde_json::from_str(stdout(&o).trim()).unwrap();
    let topo = r.topo.unwrap();
    assert!(topo.correct && topo.ackermann_steps > 0);
    let lines: Vec<TraceLine> = fs::read_to_string(&path)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), r.steps);
    assert!(lines.iter().enumerate().all(|(k, l)| l.step == k));
    assert!(lines.iter().any(|l| l.rule == "ackermann-right" || l.rule == "ackermann-left"));
}

#[test]
fn verify_reports_equivalence_and_counterexamples() {
    for src in [REFLEXIVITY, "p prec q => ~q prec ~p"] {
        let o = subalba(&["verify", "-e", src]);
        assert_eq!(code(&o), 0, "{}", stdout(&o));
        assert!(stdout(&o).contains("equivalent ("));
    }
    let o = subalba(&["--format", "json", "verify", "-e", REFLEXIVITY, "--fo", "forall w. forall v. R(w,v)"]);
    assert_eq!(code(&o), 1);
    let r: VerifyJson = serde_json::from_str(stdout(&o).trim()).unwrap();
    let frame = r.counterexample.unwrap();
    assert_eq!(frame.size, 2);
    assert!(frame.r.contains(&(0, 0)) && frame.r.contains(&(1, 1)));
    assert_eq!((r.statement_valid, r.fo_valid), (Some(true), Some(false)));
}

#[test]
fn verify_budgets() {
    let o = subalba(&["verify", "-e", "p prec q => p <= r"]);
    assert_eq!(code(&o), 2);
    assert_eq!(code(&subalba(&["verify", "-e", REFLEXIVITY, "--max-frame", "5"])), 2);
    assert_eq!(code(&subalba(&["verify", "-e", REFLEXIVITY, "--max-frame", "0"])), 2);
    let o = subalba(&["--format", "json", "verify", "-e", REFLEXIVITY, "--max-frame", "4", "--samples", "200"]);
    assert_eq!(code(&o), 0);
    let r: VerifyJson = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!(r.equivalent && r.frames_checked > 530);
    let o = subalba(&["--format", "json", "verify", "-e", "p prec q =>"]);
    let e: ErrorJson = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!(e.error.contains("parse error"));
}

#[test]
fn verify_single_frame_file() {
    let reflexive = FrameFile {
        size: 2,
        r: vec![(0, 0), (1, 1)],
        rp: vec![],
        family: None,
    };
    let f = scratch("refl.json", &serde_json::to_string(&reflexive).unwrap());
    let o = subalba(&["verify", "-e", REFLEXIVITY, "--frame", f.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let with_family = r#"{"size": 2, "R": [[0,1]], "Rp": [], "family": [[], [0,1]]}"#;
    let f = scratch("fam.json", with_family);
    let o = subalba(&["--format", "json", "verify", "-e", REFLEXIVITY, "--frame", f.to_str().unwrap()]);
    let r: VerifyJson = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(r.fo_valid, Some(false));
    let not_closed = scratch("open.json", r#"{"size": 2, "R": [], "Rp": [], "family": [[], [0]]}"#);
    assert_eq!(code(&subalba(&["verify", "-e", REFLEXIVITY, "--frame", not_closed.to_str().unwrap()])), 2);
}

#[test]
fn batch_mode_takes_the_worst_exit_code() {
    let a = scratch("a.sa", REFLEXIVITY);
    let b = scratch("b.sa", MCKINSEY);
    let o = subalba(&["run", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let text = stdout(&o);
    assert!(text.contains("a.sa:\nforall @i. @i <= sdia @i\n") && text.contains("b.sa:\nfailure"));
    let trace = scratch("t.jsonl", "");
    let o = subalba(&["run", a.to_str().unwrap(), b.to_str().unwrap(), "--trace", trace.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}

#[test]
fn translate_pure_and_impure_inputs() {
    let o = subalba(&["translate", "-e", "@i <= sdia @i"]);
    assert_eq!(stdout(&o), "forall w. R(w,w)\n");
    let o = subalba(&["translate", "-e", REFLEXIVITY]);
    assert_eq!(stdout(&o), "forall w. R(w,w)\n");
    assert_eq!(code(&subalba(&["translate", "-e", MCKINSEY])), 1);
}

#[test]
fn demo_runs_all_examples() {
    let o = subalba(&["demo"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let text = stdout(&o);
    for line in [
        "  forall @i. @i <= sdia @i",
        "  forall @i. sbdia @i <= sdia @i",
        "  forall @i. sdia dia @i <= dia sdia @i",
        "  forall @i. sdia sdia @i <= sdia @i",
    ] {
        assert!(text.contains(line), "{text}");
    }
    assert_eq!(text.matches("topology ok").count(), 4);
}
