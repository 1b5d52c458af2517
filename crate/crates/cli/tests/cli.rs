//! End-to-end checks of the `cspace` binary: exit codes, output shapes and
//! determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn corpus(file: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(file)
}

fn cspace(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cspace"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

#[test]
fn eval_reports_kind_order_and_cardinality() {
    let file = corpus("second_order.cspace");
    let out = cspace(&["eval", file.to_str().unwrap(), "S8"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("kind=parallel"));
    assert!(text.contains("order=2"));
    assert!(text.contains("cardinality=countably-infinite"));
}

#[test]
fn eval_of_empty_has_undefined_order() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("e.cspace");
    std::fs::write(&file, "E = empty\n").unwrap();
    let out = cspace(&["eval", file.to_str().unwrap(), "E"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("order=undefined"));
    assert!(text.contains("cardinality=finite(0)"));
}

#[test]
fn pipeline_singletons_print_their_members() {
    let file = corpus("pipeline.cspace");
    let out = cspace(&["eval", file.to_str().unwrap(), "D"]);
    let text = stdout(&out);
    assert!(text.contains("finite=1"));
    assert!(text.contains("member=<C,S5>"));
}

#[test]
fn unbound_names_exit_2() {
    let file = corpus("pipeline.cspace");
    let out = cspace(&["eval", file.to_str().unwrap(), "nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn parse_failures_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.cspace");
    std::fs::write(&file, "X = seq(\n").unwrap();
    let out = cspace(&["eval", file.to_str().unwrap(), "X"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("error[syntax]"));
}

#[test]
fn missing_files_exit_4() {
    let out = cspace(&["eval", "/definitely/not/here.cspace", "X"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn member_prints_booleans() {
    let file = corpus("pipeline.cspace");
    let file = file.to_str().unwrap();
    let yes = cspace(&["member", file, "S9", "<C,S5>"]);
    assert_eq!(stdout(&yes), "true\n");
    let no = cspace(&["member", file, "S9", "<S5,S5,S1>"]);
    assert_eq!(stdout(&no), "false\n");
}

#[test]
fn nonassociativity_witness_via_member() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("w.cspace");
    std::fs::write(
        &file,
        "S1 = prim(\"S1\")\nS2 = prim(\"S2\")\nS3 = prim(\"S3\")\nL = seq(seq(S1,S2), S3)\nR = seq(S1, seq(S2,S3))\n",
    )
    .unwrap();
    let file = file.to_str().unwrap();
    assert_eq!(stdout(&cspace(&["member", file, "L", "<S1,S1>"])), "false\n");
    assert_eq!(stdout(&cspace(&["member", file, "R", "<S1,S1>"])), "true\n");
}

#[test]
fn classify_prints_class_and_absents() {
    let file = corpus("parallel_space.cspace");
    let out = cspace(&[
        "classify",
        file.to_str().unwrap(),
        "S",
        "{S1:1, S2:2, S3:1}",
    ]);
    let text = stdout(&out);
    assert!(text.contains("class=partial/non-injective"));
    assert!(text.contains("absent=S4"));
}

#[test]
fn enumerate_respects_the_limit_and_is_deterministic() {
    let file = corpus("sequential_space.cspace");
    let args = ["enumerate", file.to_str().unwrap(), "S", "--limit", "7"];
    let first = cspace(&args);
    assert_eq!(first.status.code(), Some(0));
    let text = stdout(&first);
    assert_eq!(text.lines().count(), 7);
    assert_eq!(text.lines().next(), Some("<S1>"));
    assert_eq!(stdout(&cspace(&args)), text);
}

#[test]
fn enumerating_empty_prints_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("e.cspace");
    std::fs::write(&file, "E = empty\n").unwrap();
    let out = cspace(&["enumerate", file.to_str().unwrap(), "E", "--limit", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "");
}

#[test]
fn unsatisfiable_reductions_abort_with_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("u.cspace");
    std::fs::write(
        &file,
        "S1 = prim(\"S1\")\nS2 = prim(\"S2\")\nS = seq(S1,S2)\nU = reduce(S, \"p(1)=S1 & p(1)=S2\")\n",
    )
    .unwrap();
    let out = cspace(&["enumerate", file.to_str().unwrap(), "U", "--limit", "1"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("error[budget]"));
}

#[test]
fn reduce_command_reports_the_reduction() {
    let file = corpus("sequential_space.cspace");
    let out = cspace(&[
        "reduce",
        file.to_str().unwrap(),
        "S",
        "p(1)=S2 & |p|=1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("finite=1"));
    assert!(text.contains("member=<S2>"));
}

#[test]
fn laws_run_exits_0_when_all_pass() {
    let file = corpus("pipeline.cspace");
    let out = cspace(&[
        "laws",
        file.to_str().unwrap(),
        "--budget",
        "80",
        "--samples",
        "40",
        "--seed",
        "7",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("13 laws, 13 passed"));
    assert!(text.contains("not associative (witness <S1,S1>)"));
}

#[test]
fn dot_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("s8.dot");
    let file = corpus("second_order.cspace");
    let out = cspace(&[
        "dot",
        file.to_str().unwrap(),
        "S8",
        "--out",
        target.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&target).unwrap();
    assert!(text.starts_with("digraph space {"));
    assert!(text.contains("label=\"S8\""));
}

#[test]
fn dot_of_a_reduction_shows_the_sigma_chain() {
    let file = corpus("pipeline.cspace");
    let out = cspace(&["dot", file.to_str().unwrap(), "D"]);
    let text = stdout(&out);
    assert!(text.contains("σ["));
    assert!(text.contains("label=\"D\""));
}

#[test]
fn laws_output_is_byte_stable_for_a_seed() {
    let file = corpus("second_order.cspace");
    let args = [
        "laws",
        file.to_str().unwrap(),
        "--budget",
        "60",
        "--samples",
        "30",
        "--seed",
        "11",
    ];
    let first = cspace(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(stdout(&cspace(&args)), stdout(&first));
}

#[test]
fn classify_rejects_nonmembers() {
    let file = corpus("sequential_space.cspace");
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("x.cspace");
    std::fs::write(
        &bad,
        "S1 = prim(\"S1\")\nS2 = prim(\"S2\")\nS9 = prim(\"S9\")\nS = seq(S1,S2)\n",
    )
    .unwrap();
    let out = cspace(&["classify", bad.to_str().unwrap(), "S", "<S9>"]);
    assert_eq!(out.status.code(), Some(1));
    drop(file);
}
