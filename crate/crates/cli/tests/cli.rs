use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use cestrat::{parse_strategy, parse_term, to_canonical, Strategy};
use tempfile::TempDir;

const FIG_TERM: &str = "∂(v(x,nil),x(nil))";
const FIG_A: &str = "@2.1.{list([],j)}";
const FIG_B: &str = "@1.2.{list([],i)}";

struct Files(TempDir);

impl Files {
    fn new() -> Self {
        Files(TempDir::new().unwrap())
    }

    fn put(&self, name: &str, body: &str) -> PathBuf {
        let p = self.0.path().join(name);
        std::fs::write(&p, body).unwrap();
        p
    }
}

fn cestrat(args: &[&dyn AsRef<std::ffi::OsStr>]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cestrat")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn apply_inserts_at_nested_position() {
    let f = Files::new();
    let (s, t) = (f.put("a.ce", FIG_A), f.put("t", FIG_TERM));
    let o = cestrat(&[&"apply", &s, &t]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "∂(v(x,nil),x(list(nil,j)))");
}

#[test]
fn apply_fail_exits_one() {
    let f = Files::new();
    let o = cestrat(&[&"apply", &f.put("f.ce", "fail"), &f.put("t", FIG_TERM)]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).trim(), "FAIL");
}

#[test]
fn parse_error_reports_location() {
    let f = Files::new();
    let o = cestrat(&[&"apply", &f.put("bad.ce", "@1.(\n  f("), &f.put("t", FIG_TERM)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bad.ce:2:"), "{}", stderr(&o));
}

#[test]
fn ill_founded_strategy_is_rejected() {
    let f = Files::new();
    let o = cestrat(&[&"apply", &f.put("loop.ce", "mu X . X"), &f.put("t", "a")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("well-founded"), "{}", stderr(&o));
}

#[test]
fn psi_prints_embedding() {
    let f = Files::new();
    let o = cestrat(&[&"psi", &f.put("a.ce", FIG_A), &f.put("t", FIG_TERM)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "[@2.1.{list([],j)}]");
}

#[test]
fn combine_merges_both_insertions() {
    let f = Files::new();
    let (a, b, t) = (f.put("a.ce", FIG_A), f.put("b.ce", FIG_B), f.put("t", FIG_TERM));
    let o = cestrat(&[&"combine", &a, &b, &t, &"--check-equiv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert!(parse_strategy(lines[0]).is_ok());
    assert!(lines[1].starts_with("# equivalent on"));
    assert_eq!(parse_term(lines[2]).unwrap(), parse_term("∂(v(x,list(nil,i)),x(list(nil,j)))").unwrap());
}

#[test]
fn unify_with_identity_is_equivalent() {
    let f = Files::new();
    let o = cestrat(&[&"unify", &f.put("a.ce", FIG_A), &f.put("id.ce", "@eps.{[]}"), &"--check-equiv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("# equivalent on"));
}

#[test]
fn fixed_point_pair_unifies_to_mu() {
    let f = Files::new();
    let sig = f.put("sig", "f/2 g/1 h/1 a/0 b/0\n");
    let m1 = f.put("m1.ce", "mu X . ((f(Y,a) => {g([])}) <+ @1.X)");
    let m2 = f.put("m2.ce", "mu V . ((f(b,W) => {h([])}) <+ @1.V)");
    let o = cestrat(&[&"unify", &m1, &m2, &"--signature", &sig, &"--check-equiv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let s = parse_strategy(out.lines().next().unwrap()).unwrap();
    let Strategy::Mu(z, body) = &s else { panic!("expected a fixed point, got {s}") };
    let Strategy::Choice(..) = body.as_ref() else { panic!("expected a choice body") };
    assert!(out.contains(&format!("@1.{z}")));
}

#[test]
fn canon_is_idempotent_through_stdin() {
    let f = Files::new();
    let s = f.put("s.ce", "[@1.{g([])}, @2.{g([])} | x(1) \\/ x(2)]");
    let first = cestrat(&[&"canon", &s]);
    assert_eq!(first.status.code(), Some(0));
    let mut child = Command::new(env!("CARGO_BIN_EXE_cestrat"))
        .args(["canon", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(&first.stdout).unwrap();
    let second = child.wait_with_output().unwrap();
    assert_eq!(stdout(&first), stdout(&second));
    let c = parse_strategy(stdout(&first).trim()).unwrap();
    assert_eq!(to_canonical(&c).unwrap(), c);
}

#[test]
fn signature_rejects_unknown_symbols() {
    let f = Files::new();
    let sig = f.put("sig", "f/2 a/0");
    let o = cestrat(&[&"apply", &f.put("s.ce", "@eps.{[]}"), &f.put("t", "g(a)"), &"--signature", &sig]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn check_single_law() {
    let f = Files::new();
    let sig = f.put("sig", "f/2 g/1 a/0 b/0");
    let o = cestrat(&[&"check", &"idempotence-pce", &"--signature", &sig, &"--max-depth", &"2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("LAW idempotence-pce PASS"));
}

#[test]
fn expected_counterexample_still_exits_zero() {
    let o = cestrat(&[&"check", &"commutativity-pce", &"--max-depth", &"2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("LAW commutativity-pce FAIL"));
}

#[test]
fn check_is_deterministic() {
    let run = || stdout(&cestrat(&[&"check", &"theorem-1", &"--max-depth", &"2", &"--seed", &"7"]));
    assert_eq!(run(), run());
}

#[test]
fn unknown_law_is_an_input_error() {
    let o = cestrat(&[&"check", &"no-such-law"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn laws_lists_catalog() {
    let o = cestrat(&[&"laws"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), cestrat::harness::catalog().len());
}
