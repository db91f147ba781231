use std::path::Path;
use std::process::{Command, Output};

use semicore::verify::sample_graph_g9;

fn semicore(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semicore"))
        .args(args)
        .output()
        .expect("spawn semicore")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn g9_dir(tmp: &Path) -> std::path::PathBuf {
    let input = tmp.join("g9.txt");
    std::fs::write(&input, sample_graph_g9().to_text()).unwrap();
    let out = tmp.join("g9");
    let o = semicore(&["convert", "--input", s(&input), "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    out
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn decompose_star_on_g9() {
    let tmp = tempfile::tempdir().unwrap();
    let g = g9_dir(tmp.path());
    let cores = tmp.path().join("cores.tsv");
    let report = tmp.path().join("r.json");
    let trace = tmp.path().join("trace.tsv");
    let o = semicore(&[
        "decompose",
        "--graph",
        s(&g),
        "--algo",
        "semicore-star",
        "--cores",
        s(&cores),
        "--report",
        s(&report),
        "--trace",
        s(&trace),
    ]);
    assert!(o.status.success());
    let r = json(&report);
    assert_eq!(r["iterations"], 3);
    assert_eq!(r["node_computations"], 11);
    assert_eq!(r["write_ios"], 0);
    assert_eq!(r["k_max"], 3);
    let keys: Vec<&String> = r.as_object().unwrap().keys().collect();
    assert_eq!(keys.len(), 7);
    assert_eq!(
        std::fs::read_to_string(&cores).unwrap(),
        "0\t3\n1\t3\n2\t3\n3\t3\n4\t2\n5\t2\n6\t2\n7\t2\n8\t1\n"
    );
    let t = std::fs::read_to_string(&trace).unwrap();
    assert!(t.starts_with("iteration\tnode\tcore\trecomputed\n0\t0\t3\t0\n"));
    assert_eq!(t.lines().count(), 1 + 4 * 9);

    let o = semicore(&["verify", "--graph", s(&g), "--cores", s(&cores)]);
    assert_eq!(o.status.code(), Some(0));
    let o = semicore(&["verify", "--graph", s(&g)]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn identical_runs_give_identical_output() {
    let tmp = tempfile::tempdir().unwrap();
    let g = g9_dir(tmp.path());
    let mut outs = Vec::new();
    for i in 0..2 {
        let cores = tmp.path().join(format!("c{i}.tsv"));
        let report = tmp.path().join(format!("r{i}.json"));
        let o = semicore(&[
            "decompose",
            "--graph",
            s(&g),
            "--algo",
            "semicore-plus",
            "--cores",
            s(&cores),
            "--report",
            s(&report),
        ]);
        assert!(o.status.success());
        let mut r = json(&report);
        r.as_object_mut().unwrap().remove("elapsed_seconds");
        outs.push((std::fs::read(&cores).unwrap(), r));
    }
    assert_eq!(outs[0], outs[1]);
}

#[test]
fn verify_detects_wrong_cores() {
    let tmp = tempfile::tempdir().unwrap();
    let g = g9_dir(tmp.path());
    let cores = tmp.path().join("bad.tsv");
    std::fs::write(
        &cores,
        "0\t3\n1\t3\n2\t3\n3\t3\n4\t2\n5\t2\n6\t2\n7\t2\n8\t2\n",
    )
    .unwrap();
    let o = semicore(&["verify", "--graph", s(&g), "--cores", s(&cores)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("node 8"));
}

#[test]
fn update_scenario() {
    let tmp = tempfile::tempdir().unwrap();
    let g = g9_dir(tmp.path());
    let ops = tmp.path().join("ops.txt");
    std::fs::write(&ops, "- 0 1\n+ 4 6\n").unwrap();
    let report = tmp.path().join("u.json");
    let cores = tmp.path().join("after.tsv");
    let o = semicore(&[
        "update",
        "--graph",
        s(&g),
        "--ops",
        s(&ops),
        "--insert-algo",
        "star",
        "--report",
        s(&report),
        "--cores",
        s(&cores),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&report);
    assert_eq!(r[0]["operation"], "delete");
    assert_eq!(r[0]["node_computations"], 4);
    assert_eq!(r[1]["operation"], "insert");
    assert_eq!(r[1]["node_computations"], 5);
    assert_eq!(r[1]["nodes_changed"], 4);
    assert_eq!(r[1]["write_ios"], 0);

    // the updated graph was persisted
    let o = semicore(&["verify", "--graph", s(&g), "--cores", s(&cores)]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn update_two_phase_counts() {
    let tmp = tempfile::tempdir().unwrap();
    let g = g9_dir(tmp.path());
    let ops = tmp.path().join("ops.txt");
    std::fs::write(&ops, "- 0 1\n+ 4 6\n").unwrap();
    let report = tmp.path().join("u.json");
    let o = semicore(&[
        "update",
        "--graph",
        s(&g),
        "--ops",
        s(&ops),
        "--insert-algo",
        "two-phase",
        "--report",
        s(&report),
    ]);
    assert!(o.status.success());
    assert_eq!(json(&report)[1]["node_computations"], 12);
}

#[test]
fn update_with_missing_edge_fails() {
    let tmp = tempfile::tempdir().unwrap();
    let g = g9_dir(tmp.path());
    let ops = tmp.path().join("ops.txt");
    std::fs::write(&ops, "- 0 8\n").unwrap();
    let o = semicore(&["update", "--graph", s(&g), "--ops", s(&ops)]);
    assert_eq!(o.status.code(), Some(1));
    std::fs::write(&ops, "+ 0 1\n").unwrap();
    let o = semicore(&["update", "--graph", s(&g), "--ops", s(&ops)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let g = g9_dir(tmp.path());
    assert_eq!(
        semicore(&["decompose", "--graph", s(&g), "--algo", "fast"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        semicore(&["--block-size", "100", "decompose", "--graph", s(&g)])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(semicore(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        semicore(&["decompose", "--graph", s(&g), "--bogus"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(semicore(&["--help"]).status.code(), Some(0));
}

#[test]
fn missing_graph_exits_1() {
    let tmp = tempfile::tempdir().unwrap();
    let o = semicore(&["decompose", "--graph", s(&tmp.path().join("nope"))]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bench_writes_tsv() {
    let tmp = tempfile::tempdir().unwrap();
    let g = g9_dir(tmp.path());
    let out = tmp.path().join("bench.tsv");
    let o = semicore(&[
        "bench",
        "--out",
        s(&out),
        "--nodes",
        "50,80",
        "--avg-degree",
        "6",
        "--graph",
        s(&g),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "graph\talgorithm\tn\tm\tk_max\titerations\tnode_computations\tread_ios\twrite_ios\telapsed_seconds"
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split('\t').collect()).collect();
    assert_eq!(rows.len(), 5 * 4);
    for r in &rows {
        assert_eq!(r.len(), 10);
        assert_eq!(r[8], "0");
    }
    // algorithms agree on k_max per graph
    for chunk in rows.chunks(4) {
        assert!(chunk.iter().all(|r| r[4] == chunk[0][4]));
    }
}

#[test]
fn in_process_entry_point() {
    assert_eq!(semicore_cli::run(["semicore", "--version"]), 0);
    assert_eq!(semicore_cli::run(["semicore"]), 2);
}
