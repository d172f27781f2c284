//! End-to-end tests of the `cpn` binary: payloads, status lines and exit
//! codes.

use std::path::PathBuf;
use std::process::Command;

struct Outcome {
    stdout: String,
    stderr: String,
    code: i32,
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn cpn(args: &[&str]) -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_cpn"))
        .args(args)
        .output()
        .expect("binary runs");
    Outcome {
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
        code: out.status.code().unwrap_or(-1),
    }
}

fn scratch(name: &str, contents: &str) -> String {
    let dir = std::env::temp_dir().join(format!("cpn-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

fn assert_ok(o: &Outcome) {
    assert_eq!(o.code, 0, "stderr: {}", o.stderr);
    assert!(o.stderr.ends_with("status: ok\n"));
}

#[test]
fn forward_examples() {
    let o = cpn(&["forward", &data("edge7.cpn")]);
    assert_ok(&o);
    assert_eq!(o.stdout, "2 2\n-7 7\n7 -7\n");
    let o = cpn(&["forward", &data("star.cpn"), "--format", "text"]);
    assert_ok(&o);
    assert_eq!(o.stdout, "3 3\n-2 1 1\n1 -2 1\n1 1 -2\n");
}

#[test]
fn reconstruct_worked_example() {
    let o = cpn(&[
        "reconstruct",
        &data("example.mat"),
        &data("example.matching"),
    ]);
    assert_ok(&o);
    for v in ["60", "4", "600", "390", "765", "10", "300"] {
        assert!(o.stdout.contains(&format!(": {v} via")), "missing {v}");
    }
    assert!(o.stdout.contains("exterior: 5 via"));
    assert!(o.stdout.contains("edge 4 7 8 1530/13"));
    let o = cpn(&["reconstruct", &data("edge.mat"), &data("edge.matching")]);
    assert_ok(&o);
    assert!(o.stdout.starts_with("cpn 2 0\nedge 0 1 2 7\n"));
}

#[test]
fn seeded_round_trip_through_files() {
    let net = cpn(&["standard", &data("example.matching"), "--seed", "11"]);
    assert_ok(&net);
    assert_eq!(
        net.stdout,
        cpn(&["standard", &data("example.matching"), "--seed", "11"]).stdout
    );
    let net_file = scratch("seeded.cpn", &net.stdout);
    let l = cpn(&["forward", &net_file]);
    assert_ok(&l);
    let l_file = scratch("seeded.mat", &l.stdout);
    let r = cpn(&["reconstruct", &l_file, &data("example.matching")]);
    assert_ok(&r);
    assert!(r.stdout.starts_with(&net.stdout));
    let m = cpn(&["matching", "--response", &l_file]);
    assert_ok(&m);
    assert_eq!(
        m.stdout,
        std::fs::read_to_string(data("example.matching")).unwrap()
    );
}

#[test]
fn verdict_commands() {
    let o = cpn(&["check", &data("triangle.mat")]);
    assert_ok(&o);
    assert!(o.stdout.starts_with("well-connected: true\n"));
    assert_eq!(
        o.stdout
            .lines()
            .filter(|l| l.starts_with("minor") && !l.ends_with(": 0"))
            .count(),
        3
    );
    let o = cpn(&["minimal", &data("parallel.cpn")]);
    assert_ok(&o);
    assert!(o.stdout.starts_with("minimal: false (strands cross twice"));
    let o = cpn(&["minimal", &data("star.cpn")]);
    assert_eq!(o.stdout, "minimal: true\n");
}

#[test]
fn combinatorial_commands() {
    let o = cpn(&["tilings", "1", "1", "0", "7"]);
    assert_ok(&o);
    assert!(o.stdout.contains("laurent: v[1,1]\n"));
    let t = cpn(&["tiling", &data("example.matching")]);
    assert_ok(&t);
    assert_eq!(
        t.stdout.lines().filter(|l| l.starts_with("tile")).count(),
        7
    );
    let back = cpn(&["tiling", "--inverse", &scratch("example.tiling", &t.stdout)]);
    assert_eq!(
        back.stdout,
        std::fs::read_to_string(data("example.matching")).unwrap()
    );
    let o = cpn(&["groves", &data("star.cpn")]);
    assert_ok(&o);
    assert!(o.stdout.contains("partition 3: {1,2,3} sum 27 count 1"));
    let o = cpn(&[
        "groves",
        &data("example.mat"),
        "--partition",
        "{1,4},{2},{3},{5}",
    ]);
    assert_ok(&o);
    assert!(o.stdout.contains("ratio 10 via dual-tripod-pfaffian"));
    let o = cpn(&["bvars", &data("star.cpn")]);
    assert_ok(&o);
    assert_eq!(o.stdout.lines().count(), 7);
    let o = cpn(&["minors", &data("triangle.mat")]);
    assert_ok(&o);
    assert!(o.stdout.lines().all(|l| l.contains("laurent")));
}

#[test]
fn error_statuses() {
    let o = cpn(&["reconstruct", &data("example.mat"), &data("wc5.matching")]);
    assert_eq!(o.code, 3);
    assert!(o.stderr.ends_with("status: not-in-cell\n"));
    assert!(o.stderr.contains("pfaffian"));
    let o = cpn(&["groves", &data("star.cpn"), "--cap", "2"]);
    assert_eq!(o.code, 4);
    assert!(o.stderr.ends_with("status: capacity-error\n"));
    let bad = scratch("bad.cpn", "cpn 2 0\nedge 0 1 2 x\n");
    let o = cpn(&["forward", &bad]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("line 2"));
    assert!(o.stderr.ends_with("status: precondition-error\n"));
    let o = cpn(&["no-such-command"]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.ends_with("status: precondition-error\n"));
}
