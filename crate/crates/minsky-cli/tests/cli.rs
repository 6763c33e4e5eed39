//! End-to-end tests of the binary: file round trips, exit codes, and
//! byte-stable output.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn minsky(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minsky"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

struct TempDir(PathBuf);

impl TempDir {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("minsky-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        TempDir(dir)
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.join(name)
    }
}

impl Drop for TempDir {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

fn write(path: &Path, contents: &str) {
    std::fs::write(path, contents).unwrap();
}

#[test]
fn gadget_ack_then_stats_reports_dimension_10() {
    let dir = TempDir::new("ack");
    let prog = dir.path("ack10.prog");
    let out = minsky(&["gadget", "ack", "1", "0", "-o", prog.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let out = minsky(&["stats", "-p", prog.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("dimension 10"), "{text}");
    assert!(text.contains("class     checking"), "{text}");
}

#[test]
fn reach_emits_reach_result_json() {
    let dir = TempDir::new("reach");
    let prog = dir.path("p.prog");
    write(&prog, "loop { inc x }\n");
    let out = minsky(&[
        "reach",
        "-p",
        prog.to_str().unwrap(),
        "--from",
        "{}",
        "--sum-bound",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "{\"exhausted\":true,\"configs\":[{},{\"x\":\"1\"},{\"x\":\"2\"}]}\n"
    );
}

#[test]
fn reach_with_witnesses_replays() {
    let dir = TempDir::new("witness");
    let prog = dir.path("p.prog");
    write(&prog, "inc x; dec x\n");
    let out = minsky(&[
        "reach",
        "-p",
        prog.to_str().unwrap(),
        "--from",
        "{}",
        "--sum-bound",
        "1",
        "--witness",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["witnesses"]["{}"][0], "inc x");
    assert_eq!(value["witnesses"]["{}"][1], "dec x");
}

#[test]
fn output_is_byte_stable() {
    let dir = TempDir::new("stable");
    let prog = dir.path("p.prog");
    let out = minsky(&["gadget", "ack-reduced", "1", "0", "-o", prog.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let args = ["stats", "-p", prog.to_str().unwrap(), "--json"];
    let first = minsky(&args);
    let second = minsky(&args);
    assert_eq!(first.stdout, second.stdout);
    let bytes_one = std::fs::read(&prog).unwrap();
    let out = minsky(&["gadget", "ack-reduced", "1", "0", "-o", prog.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(bytes_one, std::fs::read(&prog).unwrap());
}

#[test]
fn verify_suites_exit_codes() {
    let pass = minsky(&["verify", "loopatmost", "--variant", "1", "--max-c", "3"]);
    assert_eq!(pass.status.code(), Some(0), "{pass:?}");
    let fail = minsky(&["verify", "simtest", "--max-b", "2", "--max-val", "2", "--mutated"]);
    assert_eq!(fail.status.code(), Some(1), "{fail:?}");
    let inconclusive = minsky(&[
        "verify",
        "preamp",
        "--trivial",
        "2",
        "--lmax",
        "2",
        "--sum-bound",
        "1000",
        "--max-states",
        "50",
    ]);
    assert_eq!(inconclusive.status.code(), Some(2), "{inconclusive:?}");
}

#[test]
fn verify_preamp_ack_passes() {
    let out = minsky(&[
        "verify", "preamp", "--ack", "1", "0", "--lmax", "2", "--sum-bound", "16",
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    assert!(stdout(&out).contains("pass"));
}

#[test]
fn compose_files_round_trip() {
    let dir = TempDir::new("compose");
    let preamp = dir.path("a.prog");
    let spec = dir.path("a.spec.json");
    let target = dir.path("m.prog");
    let composed = dir.path("am.prog");
    let out = minsky(&[
        "gadget",
        "trivial-preamp",
        "2",
        "-o",
        preamp.to_str().unwrap(),
        "--spec-out",
        spec.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    write(&target, "loop { inc m1 }; test m1; inc m2\n");
    let out = minsky(&[
        "compose",
        "--preamp",
        preamp.to_str().unwrap(),
        "--spec",
        spec.to_str().unwrap(),
        "--target",
        target.to_str().unwrap(),
        "-o",
        composed.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let out = minsky(&["stats", "-p", composed.to_str().unwrap()]);
    let text = stdout(&out);
    // u + max(s, d) = 3 + max(0, 2)
    assert!(text.contains("dimension 5"), "{text}");
    assert!(text.contains("class     checking"), "{text}");

    // The composition simulates M's K-bounded semantics; spot-check with the
    // suite through the CLI.
    let out = minsky(&[
        "verify",
        "compose",
        "--target",
        target.to_str().unwrap(),
        "-k",
        "2",
        "--preamp",
        preamp.to_str().unwrap(),
        "--spec",
        spec.to_str().unwrap(),
        "--sum-bound",
        "32",
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
}

#[test]
fn export_vass_text_format() {
    let dir = TempDir::new("vass");
    let prog = dir.path("p.prog");
    let vass = dir.path("p.vass");
    write(&prog, "inc x; test x\n");
    let out = minsky(&[
        "export-vass",
        "-p",
        prog.to_str().unwrap(),
        "-o",
        vass.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = std::fs::read_to_string(&vass).unwrap();
    assert!(text.contains("state l0\n"), "{text}");
    assert!(text.contains("init l0\n"), "{text}");
    assert!(text.contains("final l1\n"), "{text}");
    assert!(text.contains("zerofinal x\n"), "{text}");
    assert!(text.contains("trans l0 l1 x:+1\n"), "{text}");

    write(&prog, "test x; inc x\n");
    let out = minsky(&[
        "export-vass",
        "-p",
        prog.to_str().unwrap(),
        "-o",
        vass.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(65), "{out:?}");
}

#[test]
fn usage_and_file_errors() {
    let usage = minsky(&["reach", "--no-such-flag"]);
    assert_eq!(usage.status.code(), Some(64));
    let usage = minsky(&["frobnicate"]);
    assert_eq!(usage.status.code(), Some(64));
    let missing = minsky(&["stats", "-p", "/no/such/file.prog"]);
    assert_eq!(missing.status.code(), Some(66));

    let dir = TempDir::new("data");
    let prog = dir.path("bad.prog");
    write(&prog, "loop { inc x\n");
    let malformed = minsky(&["stats", "-p", prog.to_str().unwrap()]);
    assert_eq!(malformed.status.code(), Some(65));

    let help = minsky(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
}

#[test]
fn gadget_emissions_parse_back() {
    let dir = TempDir::new("emit");
    let prog = dir.path("g.prog");
    for args in [
        vec!["gadget", "simtest", "--budget", "y", "--block", "c,b1", "--pair", "x"],
        vec!["gadget", "loopatmost", "--counter", "c", "--aux", "cp", "--body", "inc z"],
        vec!["gadget", "evalf", "-d", "2"],
        vec!["gadget", "evalf", "-d", "2", "-p", "1"],
        vec!["gadget", "updateb", "-d", "1"],
        vec!["gadget", "trivial-preamp", "3"],
    ] {
        let mut full = args.clone();
        full.push("-o");
        full.push(prog.to_str().unwrap());
        let out = minsky(&full);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {out:?}");
        let text = std::fs::read_to_string(&prog).unwrap();
        minsky::ir::parse(&text).unwrap_or_else(|e| panic!("{args:?} emitted unparsable text: {e}"));
    }
}
