use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_paracomp");

const F2_FILE: &str = "\
# free group on two generators acting on reduced words
space letters a A b B
space forbid aA Aa bB Bb
space initial a A b B
gen ga rule A -> .
gen ga rule a -> aa
gen ga rule b -> ab
gen ga rule B -> aB
gen gb rule b -> bb
gen gb rule B -> .
gen gb rule a -> ba
gen gb rule A -> bA
";

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn action_file_and_builtin_give_the_same_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "f2.act", F2_FILE);
    let from_file = run(&["--action", &file, "check-paradoxical", "--set", "[a]"]);
    let builtin = run(&[
        "--builtin",
        "f2_boundary",
        "check-paradoxical",
        "--set",
        "[a]",
    ]);
    assert_eq!(code(&from_file), 0);
    assert_eq!(stdout(&from_file), stdout(&builtin));
}

#[test]
fn output_flag_writes_a_verifiable_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("out.cert");
    let o = run(&[
        "--builtin",
        "f2_boundary",
        "-o",
        cert.to_str().unwrap(),
        "check-subequiv",
        "--from",
        "[b]|[B]",
        "--to",
        "[a]",
    ]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    assert_eq!(code(&run(&["verify", cert.to_str().unwrap()])), 0);
}

#[test]
fn sequential_flag_does_not_change_output() {
    let args = ["--builtin", "f2_boundary", "check-nfilling", "--n", "2"];
    let par = run(&args);
    let seq = run(&[&["--sequential"], &args[..]].concat());
    assert_eq!(code(&par), 0);
    assert_eq!(stdout(&par), stdout(&seq));
}

#[test]
fn refutations_exit_three_with_a_counter_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "--builtin",
        "bit_permutation:1,0",
        "check-paradoxical",
        "--set",
        "[0]",
    ]);
    assert_eq!(code(&o), 3);
    let text = stdout(&o);
    assert!(text.contains("\nkind measure\n"));
    assert_eq!(
        code(&run(&["verify", &write(dir.path(), "m.cert", &text)])),
        0
    );

    let o = run(&[
        "--builtin",
        "bit_permutation:1,0",
        "semigroup-order",
        "--f",
        "[0]*2",
        "--g",
        "[0]",
    ]);
    assert_eq!(code(&o), 3);
}

#[test]
fn usage_and_input_errors() {
    assert_eq!(code(&run(&["check-paradoxical", "--set", "[a]"])), 1);
    assert_eq!(
        code(&run(&["--builtin", "f2_boundary", "no-such-command"])),
        1
    );
    assert_eq!(
        code(&run(&[
            "--builtin",
            "f2_boundary",
            "check-paradoxical",
            "--set",
            "[aA]"
        ])),
        2
    );
    assert_eq!(
        code(&run(&[
            "--builtin",
            "nonexistent",
            "check-paradoxical",
            "--set",
            "[a]"
        ])),
        2
    );

    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "bad.act",
        &F2_FILE.replace("gen ga rule a -> aa", "gen ga rool a -> aa"),
    );
    let o = run(&["--action", &bad, "check-paradoxical", "--set", "[a]"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 6, column 8"));
    assert_eq!(
        code(&run(&[
            "verify",
            dir.path().join("missing.cert").to_str().unwrap()
        ])),
        2
    );
}

#[test]
fn truncated_and_tampered_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "--builtin",
        "f2_boundary",
        "check-paradoxical",
        "--set",
        "[a]",
    ]);
    let text = stdout(&o);

    let lines: Vec<&str> = text.lines().collect();
    let truncated = lines[..lines.len() - 1].join("\n") + "\n";
    assert_eq!(
        code(&run(&["verify", &write(dir.path(), "t.cert", &truncated)])),
        2
    );

    let target = lines.iter().find(|l| l.starts_with("target2 ")).unwrap();
    let tampered = text.replacen(target, "target2 [b]", 1);
    assert_eq!(
        code(&run(&["verify", &write(dir.path(), "x.cert", &tampered)])),
        3
    );

    let action_edit = text.replacen("gen ga rule a -> aa", "gen ga rule a -> ab", 1);
    assert_eq!(
        code(&run(&[
            "verify",
            &write(dir.path(), "h.cert", &action_edit)
        ])),
        3
    );
}

#[test]
fn unperforation_and_scaling_commands() {
    let o = run(&[
        "--builtin",
        "f2_boundary",
        "semigroup-unperforation",
        "--f",
        "[a]",
        "--g",
        "[b]",
        "--n",
        "2",
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("\nkind order\n"));
    for emit in ["scaling", "isometry", "cuntz"] {
        let o = run(&[
            "--builtin",
            "f2_boundary",
            "scaling-element",
            "--from",
            "[a]",
            "--to",
            "[aba]",
            "--emit",
            emit,
        ]);
        assert_eq!(code(&o), 0, "{emit}");
        assert!(stdout(&o).contains(&format!("\nkind {emit}\n")));
    }
    // Target outside the source: no scaling element.
    let o = run(&[
        "--builtin",
        "f2_boundary",
        "scaling-element",
        "--from",
        "[a]",
        "--to",
        "[b]",
    ]);
    assert_eq!(code(&o), 1);
}
