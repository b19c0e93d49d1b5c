mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use common::*;

fn lfusion(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lfusion")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn karate_path() -> String {
    fixture("karate.tsv").to_str().unwrap().to_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

const BARBELL: &str = "0 1\n1 2\n0 2\n3 4\n4 5\n3 5\n2 3\n";

#[test]
fn partition_writes_every_node_once() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("parts.txt");
    for method in ["lf", "lpa", "random"] {
        let run = lfusion(&[
            "partition",
            "--input",
            &karate_path(),
            "--k",
            "2",
            "--method",
            method,
            "--output",
            s(&out),
        ]);
        assert_eq!(code(&run), 0, "{method}: {}", String::from_utf8_lossy(&run.stderr));
        let text = fs::read_to_string(&out).unwrap();
        let mut ids: Vec<u64> = text
            .lines()
            .map(|l| l.split_whitespace().next().unwrap().parse().unwrap())
            .collect();
        ids.sort_unstable();
        assert_eq!(ids, (0..34).collect::<Vec<_>>());
        let report = String::from_utf8(run.stdout).unwrap();
        assert!(report.contains("n=34\nm=78\n"), "{report}");
    }
}

#[test]
fn lf_output_is_connected_and_reported() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("parts.txt");
    let metrics = dir.path().join("report.txt");
    let run = lfusion(&[
        "partition",
        "--input",
        &karate_path(),
        "--k",
        "2",
        "--method",
        "lf",
        "--output",
        s(&out),
        "--metrics",
        s(&metrics),
    ]);
    assert_eq!(code(&run), 0);
    let report = fs::read_to_string(&metrics).unwrap();
    assert!(
        report.contains("components[0]=1\ncomponents[1]=1\nisolated[0]=0\nisolated[1]=0\n"),
        "{report}"
    );
}

#[test]
fn one_block_and_inner_export_is_the_input_graph() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("parts.txt");
    let run = lfusion(&[
        "partition",
        "--input",
        &karate_path(),
        "--k",
        "1",
        "--method",
        "lf",
        "--output",
        s(&out),
    ]);
    assert_eq!(code(&run), 0);
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.lines().all(|l| l.ends_with(" 0")));
    assert!(String::from_utf8(run.stdout).unwrap().starts_with("tau=0\n"));

    let bundle = dir.path().join("bundle");
    let run = lfusion(&[
        "export",
        "--input",
        &karate_path(),
        "--partitions",
        s(&out),
        "--mode",
        "inner",
        "--output",
        s(&bundle),
    ]);
    assert_eq!(code(&run), 0);
    let mut canonical = Vec::new();
    karate().write_edge_list(&mut canonical).unwrap();
    assert_eq!(fs::read(bundle.join("part-0000/edges.txt")).unwrap(), canonical);
}

#[test]
fn repli_export_lists_halo_nodes() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "barbell.txt", BARBELL);
    let parts = write(dir.path(), "parts.txt", "0 0\n1 0\n2 0\n3 1\n4 1\n5 1\n");
    let bundle = dir.path().join("bundle");
    let run = lfusion(&[
        "export",
        "--input",
        &input,
        "--partitions",
        &parts,
        "--mode",
        "repli",
        "--output",
        s(&bundle),
    ]);
    assert_eq!(code(&run), 0);
    let manifest = fs::read_to_string(bundle.join("part-0000/manifest.txt")).unwrap();
    assert_eq!(manifest, "0 0 owned\n1 1 owned\n2 2 owned\n3 3 halo\n");

    let run = lfusion(&["metrics", "--input", &input, "--partitions", &parts, "--mode", "repli"]);
    assert_eq!(code(&run), 0);
    let report = String::from_utf8(run.stdout).unwrap();
    assert!(report.contains("replication_factor=1.3333333333333333\n"), "{report}");
}

#[test]
fn metrics_of_a_written_partition_reproduce_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("parts.txt");
    let run = lfusion(&[
        "partition",
        "--input",
        &karate_path(),
        "--k",
        "2",
        "--method",
        "lf",
        "--seed",
        "3",
        "--output",
        s(&out),
    ]);
    assert_eq!(code(&run), 0);
    let again = lfusion(&["metrics", "--input", &karate_path(), "--partitions", s(&out)]);
    assert_eq!(code(&again), 0);
    assert_eq!(run.stdout, again.stdout);
}

#[test]
fn fixture_metrics() {
    let run = lfusion(&[
        "metrics",
        "--input",
        &karate_path(),
        "--partitions",
        fixture("karate_lf2.tsv").to_str().unwrap(),
    ]);
    assert_eq!(code(&run), 0);
    let report = String::from_utf8(run.stdout).unwrap();
    assert!(report.starts_with(&format!("tau={}\n", 10.0 / 78.0)), "{report}");
}

#[test]
fn fuse_repairs_a_fragmented_partition() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fused.txt");
    let fragmented = fixture("karate_fragmented2.tsv");
    let run = lfusion(&[
        "fuse",
        "--input",
        &karate_path(),
        "--partitions",
        s(&fragmented),
        "--k",
        "2",
        "--output",
        s(&out),
    ]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    let report =
        String::from_utf8(lfusion(&["metrics", "--input", &karate_path(), "--partitions", s(&out)]).stdout).unwrap();
    assert!(report.contains("components[0]=1\ncomponents[1]=1\n"), "{report}");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.txt");
    let karate = karate_path();

    let bad_k = lfusion(&[
        "partition",
        "--input",
        &karate,
        "--k",
        "0",
        "--method",
        "lf",
        "--output",
        s(&out),
    ]);
    assert_eq!(code(&bad_k), 2);
    let bad_beta = lfusion(&[
        "partition",
        "--input",
        &karate,
        "--k",
        "2",
        "--method",
        "lf",
        "--beta",
        "0",
        "--output",
        s(&out),
    ]);
    assert_eq!(code(&bad_beta), 2);
    let bad_flag = lfusion(&[
        "partition",
        "--input",
        &karate,
        "--k",
        "2",
        "--method",
        "metis",
        "--output",
        s(&out),
    ]);
    assert_eq!(code(&bad_flag), 2);

    let split = write(dir.path(), "split.txt", "0 1\n1 2\n3 4\n");
    let disconnected = lfusion(&[
        "partition",
        "--input",
        &split,
        "--k",
        "2",
        "--method",
        "lf",
        "--output",
        s(&out),
    ]);
    assert_eq!(code(&disconnected), 3);
    let barbell = write(dir.path(), "barbell.txt", BARBELL);
    let whole = write(dir.path(), "whole.txt", "0 0\n1 0\n2 0\n3 0\n4 0\n5 0\n");
    let too_few = lfusion(&[
        "fuse",
        "--input",
        &barbell,
        "--partitions",
        &whole,
        "--k",
        "2",
        "--output",
        s(&out),
    ]);
    assert_eq!(code(&too_few), 3);

    let few_communities = lfusion(&[
        "partition",
        "--input",
        &barbell,
        "--k",
        "3",
        "--method",
        "lf",
        "--beta",
        "1",
        "--output",
        s(&out),
    ]);
    assert_eq!(
        code(&few_communities),
        4,
        "{}",
        String::from_utf8_lossy(&few_communities.stderr)
    );

    let missing = write(dir.path(), "missing.txt", "0 0\n1 0\n2 0\n3 1\n4 1\n");
    assert_eq!(
        code(&lfusion(&["metrics", "--input", &barbell, "--partitions", &missing])),
        5
    );
    let unknown = write(dir.path(), "unknown.txt", "0 0\n1 0\n2 0\n3 1\n4 1\n5 1\n9 1\n");
    assert_eq!(
        code(&lfusion(&["metrics", "--input", &barbell, "--partitions", &unknown])),
        5
    );
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.txt"), dir.path().join("b.txt"));
    for method in ["lf", "lpa", "random"] {
        let first = lfusion(&[
            "partition",
            "--input",
            &karate_path(),
            "--k",
            "2",
            "--method",
            method,
            "--seed",
            "7",
            "--output",
            s(&a),
        ]);
        let second = lfusion(&[
            "partition",
            "--input",
            &karate_path(),
            "--k",
            "2",
            "--method",
            method,
            "--seed",
            "7",
            "--output",
            s(&b),
        ]);
        assert_eq!(first.stdout, second.stdout);
        assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    }
}
