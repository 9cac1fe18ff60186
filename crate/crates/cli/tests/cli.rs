use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const TINY_CFG: &str = include_str!("../../../data/tiny.cfg");
const TINY_TRACE: &str = include_str!("../../../data/tiny.trace");

fn force(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_force"))
        .args(args)
        .env_remove("FORCE_THREADS")
        .output()
        .expect("binary runs")
}

fn put(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn tiny(dir: &Path) -> (PathBuf, PathBuf) {
    (
        put(dir, "tiny.cfg", TINY_CFG),
        put(dir, "tiny.trace", TINY_TRACE),
    )
}

#[test]
fn synth_writes_the_expected_formulas() {
    let dir = TempDir::new().unwrap();
    let (cfg, tr) = tiny(dir.path());
    let out = dir.path().join("out.txt");
    let stats = dir.path().join("stats.json");
    let o = force(&[
        "synth",
        "--config",
        s(&cfg),
        "--traces",
        s(&tr),
        "--out",
        s(&out),
        "--stats",
        s(&stats),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "force-format v1");
    assert!(lines.contains(&"forall X1:X. p(X1) | q(X1)"));
    assert!(lines.contains(&"forall X1:X. p(X1) | ~r(X1)"));
    let json = fs::read_to_string(&stats).unwrap();
    assert!(json.contains("\"tested\""));

    let o = force(&[
        "check",
        "--config",
        s(&cfg),
        "--traces",
        s(&tr),
        "--formulas",
        s(&out),
    ]);
    assert!(o.status.success());
    let report = String::from_utf8_lossy(&o.stdout);
    assert_eq!(report.lines().count(), lines.len() - 1);
    assert!(report.lines().all(|l| l.starts_with("ok")));
}

#[test]
fn check_reports_failures() {
    let dir = TempDir::new().unwrap();
    let (cfg, tr) = tiny(dir.path());
    let fs_ok = put(
        dir.path(),
        "ok.txt",
        "forall X1:X. p(X1) | q(X1)\nforall X1:X. p(X1) | ~r(X1)\n",
    );
    let o = force(&[
        "check",
        "--config",
        s(&cfg),
        "--traces",
        s(&tr),
        "--formulas",
        s(&fs_ok),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let fs_bad = put(dir.path(), "bad.txt", "forall X1:X. p(X1)\n");
    let o = force(&[
        "check",
        "--config",
        s(&cfg),
        "--traces",
        s(&tr),
        "--formulas",
        s(&fs_bad),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("FAIL  forall X1:X. p(X1)  (sample 0)"));
}

#[test]
fn usage_and_input_errors() {
    let dir = TempDir::new().unwrap();
    let (cfg, _) = tiny(dir.path());
    let out = dir.path().join("out.txt");
    let o = force(&["synth", "--config", s(&cfg), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(2));
    let broken = put(dir.path(), "broken.trace", "universe X=3\nsample\np(3)\n");
    let o = force(&[
        "synth",
        "--config",
        s(&cfg),
        "--traces",
        s(&broken),
        "--out",
        s(&out),
    ]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("3:3"), "{err}");
    let small = put(dir.path(), "small.trace", "universe X=1\nsample\np(0)\n");
    let two_vars = put(
        dir.path(),
        "two.cfg",
        &TINY_CFG.replace("X: X1", "X: X1, X2"),
    );
    let o = force(&[
        "synth",
        "--config",
        s(&two_vars),
        "--traces",
        s(&small),
        "--out",
        s(&out),
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn filter_format_is_importable() {
    let dir = TempDir::new().unwrap();
    let (cfg, tr) = tiny(dir.path());
    let out = dir.path().join("filter.txt");
    let o = force(&[
        "synth",
        "--config",
        s(&cfg),
        "--traces",
        s(&tr),
        "--out",
        s(&out),
        "--format",
        "filter",
    ]);
    assert!(o.status.success());
    let doc = fs::read_to_string(&out).unwrap();
    let spec = force_core::io::parse_config(TINY_CFG).unwrap();
    let filter = force_core::io::import_clause_filter(&doc, &spec).unwrap();
    assert!(!filter.clauses.is_empty());
}

#[test]
fn threads_do_not_change_output() {
    let dir = TempDir::new().unwrap();
    let cfg = put(
        dir.path(),
        "lockserv.cfg",
        include_str!("../../../data/lockserv.cfg"),
    );
    let tr = dir.path().join("ls.trace");
    let o = force(&[
        "gen-traces",
        "--protocol",
        "lockserv",
        "--universe",
        "node=2,lock=1",
        "--steps",
        "15",
        "--samples",
        "60",
        "--seed",
        "3",
        "--out",
        s(&tr),
    ]);
    assert!(o.status.success());
    let mut outputs = Vec::new();
    for n in ["1", "4"] {
        let out = dir.path().join(format!("out{n}.txt"));
        let o = force(&[
            "synth",
            "--config",
            s(&cfg),
            "--traces",
            s(&tr),
            "--out",
            s(&out),
            "--threads",
            n,
        ]);
        assert!(o.status.success());
        outputs.push(fs::read(&out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn gen_traces_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let (cfg, _) = tiny(dir.path());
    let gen = |name: &str, seed: &str| {
        let out = dir.path().join(name);
        let o = force(&[
            "gen-traces",
            "--protocol",
            "random",
            "--config",
            s(&cfg),
            "--universe",
            "X=2",
            "--universe",
            "X=3",
            "--samples",
            "5",
            "--seed",
            seed,
            "--out",
            s(&out),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        fs::read_to_string(out).unwrap()
    };
    let a = gen("a.trace", "4");
    assert_eq!(a, gen("b.trace", "4"));
    assert_ne!(a, gen("c.trace", "5"));
    let spec = force_core::io::parse_config(TINY_CFG).unwrap();
    let ms = force_core::io::parse_traces(&a, spec.signature()).unwrap();
    assert!(ms.len() <= 10 && !ms.is_empty());
    let o = force(&[
        "gen-traces",
        "--protocol",
        "random",
        "--universe",
        "X=2",
        "--out",
        s(&dir.path().join("d")),
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn oracle_diff_reports_equivalence() {
    let dir = TempDir::new().unwrap();
    let (cfg, tr) = tiny(dir.path());
    let o = force(&["oracle-diff", "--config", s(&cfg), "--traces", s(&tr)]);
    let out = String::from_utf8_lossy(&o.stdout);
    assert_eq!(o.status.code(), Some(0), "{out}");
    assert!(out.contains("raw candidates:      42"));
    assert!(out.trim_end().ends_with("equivalent"));
}
