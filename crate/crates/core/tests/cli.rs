use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_depsense"))
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// Extracts and builds the catch/ball corpus into `dir`; returns the
/// `--counts/--spaces` arguments.
fn prepare(dir: &Path) -> Vec<String> {
    let counts = dir.join("counts.tsv");
    let spaces = dir.join("spaces");
    let c = counts.to_str().unwrap();
    let s = spaces.to_str().unwrap();
    let out = run(&["extract", data("catch_ball.conllu").to_str().unwrap(), "--counts", c]);
    assert!(out.status.success(), "{}", stderr(&out));
    let out = run(&["build", "--counts", c, "--spaces", s, "--min-count", "1"]);
    assert!(out.status.success(), "{}", stderr(&out));
    vec!["--counts".into(), c.into(), "--spaces".into(), s.into()]
}

fn cosine_of(out: &Output) -> f64 {
    let text = stdout(out);
    let row = text.lines().find(|l| !l.starts_with('#')).expect("result row");
    row.split('\t').nth(3).unwrap().parse().unwrap()
}

#[test]
fn extract_summary_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.tsv");
    let b = dir.path().join("b.tsv");
    for path in [&a, &b] {
        let out = run(&["extract", data("catch_ball.conllu").to_str().unwrap(), "--counts", path.to_str().unwrap()]);
        assert!(out.status.success());
        assert!(stderr(&out).contains("sentences 20"));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn empty_corpus_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.conllu");
    std::fs::write(&empty, "").unwrap();
    let out = run(&[
        "extract",
        empty.to_str().unwrap(),
        "--counts",
        dir.path().join("c.tsv").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("no triples extracted"));
}

#[test]
fn missing_prerequisites_name_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let counts = dir.path().join("nowhere.tsv");
    let out = run(&["build", "--counts", counts.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("nowhere.tsv"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["bogus"]).status.code(), Some(1));
    assert_eq!(run(&["extract", "x.conllu", "--mode", "divide"]).status.code(), Some(1));
    assert_eq!(run(&["extract", "x.conllu", "--k", "0"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn similarity_follows_the_grabbing_sense() {
    let dir = tempfile::tempdir().unwrap();
    let common = prepare(dir.path());
    let mut args = vec!["similarity", "girl catch ball", "girl grasp ball"];
    args.extend(common.iter().map(String::as_str));
    let grasp = run(&args);
    assert!(grasp.status.success(), "{}", stderr(&grasp));
    args[2] = "girl catch cold";
    let cold = run(&args);
    assert!(cosine_of(&grasp) > cosine_of(&cold));
}

#[test]
fn classes_listing() {
    let dir = tempfile::tempdir().unwrap();
    let common = prepare(dir.path());
    let mut args = vec!["classes", "ball/NOUN", "obj", "head"];
    args.extend(common[..2].iter().map(String::as_str));
    let out = run(&args);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("# class\t"));
    let first = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(first, "1\tthrow\tVERB\t2");
}

#[test]
fn contextualize_dump_and_oov_warning() {
    let dir = tempfile::tempdir().unwrap();
    let common = prepare(dir.path());
    let input = dir.path().join("in.conllu");
    std::fs::write(
        &input,
        "1\tgirl\tgirl\tNOUN\t_\t_\t2\tnsubj\t_\t_\n2\tcatches\tcatch\tVERB\t_\t_\t0\troot\t_\t_\n3\tball\tball\tNOUN\t_\t_\t2\tobj\t_\t_\n\n\
         1\tzebra\tzebra\tNOUN\t_\t_\t2\tnsubj\t_\t_\n2\tcatches\tcatch\tVERB\t_\t_\t0\troot\t_\t_\n\n",
    )
    .unwrap();
    let mut args = vec!["contextualize", input.to_str().unwrap()];
    args.extend(common.iter().map(String::as_str));
    let out = run(&args);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[1].starts_with("2\tcatch\tVERB\t"));
    assert!(stderr(&out).contains("zebra"));
}

#[test]
fn evaluate_two_models_with_significance() {
    let dir = tempfile::tempdir().unwrap();
    let counts = dir.path().join("c.tsv");
    let spaces = dir.path().join("sp");
    let records = dir.path().join("r.jsonl");
    let report = dir.path().join("report.tsv");
    let (c, s) = (counts.to_str().unwrap(), spaces.to_str().unwrap());
    assert!(run(&["extract", data("synthetic.conllu").to_str().unwrap(), "--counts", c]).status.success());
    assert!(run(&["build", "--counts", c, "--spaces", s]).status.success());
    let out = run(&[
        "evaluate",
        "--dataset",
        data("synthetic_pairs.tsv").to_str().unwrap(),
        "--model",
        "static",
        "--model",
        "compositional",
        "--counts",
        c,
        "--spaces",
        s,
        "--records",
        records.to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("# model\tstatic"));
    assert!(text.contains("# model\tcompositional"));
    assert!(text.contains("# paired_t\tstatic\tcompositional\tn=200"));
    assert_eq!(std::fs::read_to_string(&report).unwrap(), text);
    let lines = std::fs::read_to_string(&records).unwrap();
    assert_eq!(lines.lines().count(), 400);
}

#[test]
fn attention_demo_prints_stochastic_matrix() {
    let out = run(&["attention-demo", "give me love not money", "--spaces", "/nonexistent-dir"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "# weights\tgive\tme\tlove\tnot\tmoney");
    for _ in 0..5 {
        let row: Vec<&str> = lines.next().unwrap().split('\t').collect();
        assert_eq!(row.len(), 6);
        let sum: f64 = row[1..].iter().map(|x| x.parse::<f64>().unwrap()).sum();
        assert!((sum - 1.0).abs() < 1e-5);
    }
    // same seed, same output
    let again = run(&["attention-demo", "give me love not money", "--spaces", "/nonexistent-dir"]);
    assert_eq!(stdout(&again), text);
}

#[test]
fn config_file_with_override() {
    let dir = tempfile::tempdir().unwrap();
    let common = prepare(dir.path());
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, format!("# test run\nk = 1\ncounts = {}\n", common[1])).unwrap();
    let out = run(&["classes", "ball/NOUN", "obj", "head", "--config", cfg.to_str().unwrap()]);
    let rows = stdout(&out).lines().filter(|l| !l.starts_with('#')).count();
    assert_eq!(rows, 1);
    let out = run(&["classes", "ball/NOUN", "obj", "head", "--config", cfg.to_str().unwrap(), "--k", "3"]);
    let rows = stdout(&out).lines().filter(|l| !l.starts_with('#')).count();
    assert_eq!(rows, 3);
}
