//! End-to-end tests of the `rtriples` binary: exit codes, text formats, and
//! output determinism.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_rtriples"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn rtriples");
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().expect("wait for rtriples")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn consistent_true_and_false() {
    let out = run(&["consistent"], "a b | c\n");
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "true\n");

    let out = run(&["consistent"], "a b | c\na c | b\n");
    assert_eq!(code(&out), 1);
    assert_eq!(stdout(&out), "false\n");
}

#[test]
fn build_newick_and_inconsistent_exit() {
    let out = run(&["build"], "a b | c\nb c | d\n");
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "(((a,b),c),d);\n");

    let out = run(&["build"], "a b | c\na c | b\n");
    assert_eq!(code(&out), 1);
    assert_eq!(stdout(&out), "");
}

#[test]
fn closure_output_round_trips() {
    let out = run(&["closure"], "a b | c\nb c | d\n");
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "a b | c\na b | d\na c | d\nb c | d\n");

    // inconsistent input goes through the subset-union route
    let out = run(&["closure"], "a b | c\na c | b\n");
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "a b | c\na c | b\n");
}

#[test]
fn entails_exit_codes() {
    let out = run(&["entails", "--triple", "a b | d"], "a b | c\nb c | d\n");
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "true\n");

    // inconsistent set, candidate not entailed by any consistent subset
    let out = run(&["entails", "--triple", "b c | a"], "a b | c\na c | b\n");
    assert_eq!(code(&out), 1);
    assert_eq!(stdout(&out), "false\n");
}

#[test]
fn sat_decision() {
    let out = run(&["sat"], "p cnf 1 1\n1 -1 0\n");
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "true\nmodel F\n");

    let out = run(&["sat"], "p cnf 1 2\n1 0\n-1 0\n");
    assert_eq!(code(&out), 1);
    assert_eq!(stdout(&out), "false\n");
}

#[test]
fn verify_tautology_agrees() {
    let out = run(&["verify"], "p cnf 1 1\n1 -1 0\n");
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("sat=true"));
    assert!(text.contains("path_exists=true"));
    assert!(text.contains("entailed=true"));
    assert!(text.contains("agreement=true"));
    // timings go to stderr, keeping stdout deterministic
    assert!(!text.contains("_ms="));
    assert!(String::from_utf8(out.stderr.clone()).unwrap().contains("path_ms="));
}

#[test]
fn verify_with_budget_skips_entailment() {
    let out = run(&["verify", "--entailment-budget", "5"], "p cnf 1 1\n1 -1 0\n");
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("entailed=none"));
}

#[test]
fn verify_lemmas_flag() {
    let out = run(&["verify", "--lemmas"], "p cnf 1 1\n1 -1 0\n");
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("witness_checks=2"));
    assert!(text.contains("all_pass=true"));
}

#[test]
fn path_and_min_path() {
    let graph = "u -> v s\nv -> w s2\nu -> w s3\n";
    let out = run(&["path", "--from", "u", "--to", "w"], graph);
    assert_eq!(code(&out), 0);

    let out = run(&["path", "--from", "u", "--to", "w", "--min"], graph);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "u -> s3 w\n");

    let out = run(&["path", "--from", "w", "--to", "u"], graph);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout(&out), "infeasible\n");
}

#[test]
fn bconnect_lists_nodes() {
    let out = run(&["bconnect", "--from", "u"], "u -> v s1\nv -> w s2\n");
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "s1\ns2\nu\nv\nw\n");
}

#[test]
fn cyclic_decision() {
    let out = run(&["cyclic"], "u -> v s\nv -> u s2\n");
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "true\n");

    let out = run(&["cyclic"], "u -> v s\nv -> w s2\n");
    assert_eq!(code(&out), 1);
    assert_eq!(stdout(&out), "false\n");
}

#[test]
fn amplify_counts_and_budget_guard() {
    let graph = "u -> a v\nb\n"; // four nodes
    let out = run(&["amplify", "--from", "u", "--to", "v", "--eps", "1/2"], graph);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("# dummy_length=64"));
    assert!(text.contains("# non_sink_node_count=67"));

    let out = run(
        &["amplify", "--from", "u", "--to", "v", "--eps", "0.05", "--budget", "100"],
        graph,
    );
    assert_eq!(code(&out), 3);
}

#[test]
fn usage_errors_exit_two() {
    let out = run(&["consistent"], "not a triple line\n");
    assert_eq!(code(&out), 2);

    let out = run(&["nonsense-subcommand"], "");
    assert_eq!(code(&out), 2);

    let out = run(&["path", "--from", "zz", "--to", "u"], "u -> v s\n");
    assert_eq!(code(&out), 2);
}

#[test]
fn guard_errors_exit_three() {
    // an inconsistent core plus padding: 25 triples force the inconsistent
    // closure route, whose subset enumeration is capped at 24
    let mut input = String::from("a b | c\na c | b\n");
    for i in 0..23 {
        input.push_str(&format!("p{i} q{i} | o{i}\n"));
    }
    let out = run(&["closure"], &input);
    assert_eq!(code(&out), 3);
}

#[test]
fn reduce_writes_bundle() {
    let dir = tempfile::tempdir().unwrap();
    let cnf = dir.path().join("f.cnf");
    std::fs::write(&cnf, "p cnf 1 1\n1 -1 0\n").unwrap();
    let prefix = dir.path().join("inst");
    let out = run(
        &["reduce", cnf.to_str().unwrap(), "-o", prefix.to_str().unwrap()],
        "",
    );
    assert_eq!(code(&out), 0);
    let triples = std::fs::read_to_string(prefix.with_extension("triples")).unwrap();
    let hypergraph = std::fs::read_to_string(prefix.with_extension("hypergraph")).unwrap();
    let meta = std::fs::read_to_string(prefix.with_extension("meta")).unwrap();
    assert_eq!(triples.lines().count(), 19);
    assert_eq!(hypergraph.lines().count(), 19);
    assert!(meta.contains("triple_count=19"));
    assert!(meta.contains("source=alpha,beta"));
    assert_eq!(stdout(&out), meta);
}

#[test]
fn identical_invocations_are_byte_identical() {
    let graph = "u -> v s\nv -> w s2\n";
    let a = run(&["path", "--from", "u", "--to", "w", "--dot"], graph);
    let b = run(&["path", "--from", "u", "--to", "w", "--dot"], graph);
    assert_eq!(a.stdout, b.stdout);

    let f = "p cnf 1 1\n1 -1 0\n";
    let a = run(&["verify"], f);
    let b = run(&["verify"], f);
    assert_eq!(a.stdout, b.stdout);
}
