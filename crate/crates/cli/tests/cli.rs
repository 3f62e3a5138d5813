use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::{Command, Output};

use fanforge_core::catalog;
use fanforge_core::certifier::{CertTask, CertWitness};
use fanforge_core::fans::fan_indices;
use fanforge_core::fragility::ClassPredicate;
use fanforge_core::glue::{glue_wheels, Blueprint};
use fanforge_core::io::{parse_result_witness, write_fans, write_mtx, FansFile};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fanforge")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fanforge-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn show_reports_rank_and_bases() {
    let o = run(&["show", "--matroid", "U24"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("rank 2"), "{s}");
    assert!(s.contains("bases 6"), "{s}");
}

#[test]
fn whirl_is_fragile_for_u24() {
    let o = run(&["fragile", "--matroid", "whirl3", "--S", "U24"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("fragile: yes"));
}

#[test]
fn bad_input_exits_with_two() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["show", "--matroid", "nonexistent"]).status.code(), Some(2));
    assert_eq!(run(&["show"]).status.code(), Some(2));
}

#[test]
fn missing_minor_exits_with_one() {
    assert_eq!(run(&["has-minor", "--matroid", "F7", "--minor", "U24"]).status.code(), Some(1));
    assert_eq!(run(&["has-minor", "--matroid", "whirl3", "--minor", "U24"]).status.code(), Some(0));
}

#[test]
fn certify_counterexample_file_reverifies() {
    let bp = Blueprint {
        core: catalog::fano(),
        triangles: vec![["2".into(), "1".into(), "3".into()]],
        ranks: vec![3],
        delete: ["1", "3"].iter().map(|s| s.to_string()).collect::<BTreeSet<_>>(),
    };
    let g = glue_wheels(&bp).unwrap();
    let n_path = scratch("seed.mtx");
    let fans_path = scratch("seed.fans");
    let out_path = scratch("seed.result");
    std::fs::write(&n_path, write_mtx("seed", &g.matroid, Some(&g.repr))).unwrap();
    std::fs::write(&fans_path, write_fans(&FansFile { target: None, fans: g.fans.clone() })).unwrap();
    let o = run(&[
        "certify",
        "--N-file",
        n_path.to_str().unwrap(),
        "--fans",
        fans_path.to_str().unwrap(),
        "--depth",
        "2",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert!(text.starts_with("verdict counterexample"), "{text}");
    let (level, matroid, minor) = parse_result_witness(&text).unwrap().expect("witness block");
    let idx = fan_indices(&g.matroid, &g.fans).unwrap();
    let task = CertTask::new(g.repr.clone(), idx, ClassPredicate::default());
    let w = CertWitness { matroid, minor, level };
    assert!(fanforge_core::certifier::verify_witness(&task, &w));
}

#[test]
fn n12_certifies_at_depth_two() {
    let o = run(&["certify", "--N", "N12", "--S", "F7,F7dual", "--field", "2", "--depth", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("certified"));
}
