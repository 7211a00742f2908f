//! End-to-end tests of the binary: exit codes, CSV shapes, determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_diterate"))
}

fn write_file(dir: &Path, name: &str, content: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path
}

fn g3_file(dir: &Path) -> PathBuf {
    write_file(dir, "g3.txt", "0 1\n0 2\n1 2\n")
}

fn stdout_lines(output: &Output) -> Vec<String> {
    String::from_utf8(output.stdout.clone())
        .unwrap()
        .lines()
        .map(str::to_owned)
        .collect()
}

fn csv_fields(line: &str) -> Vec<String> {
    line.split(',').map(str::to_owned).collect()
}

#[test]
fn run_mode_emits_one_result_row() {
    let dir = tempfile::tempdir().unwrap();
    let graph = g3_file(dir.path());
    let output = bin()
        .args(["--graph", graph.to_str().unwrap(), "--d", "0.5"])
        .args(["--algo", "di-cyc", "--target", "0.34"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    let lines = stdout_lines(&output);
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("algo,n,l,d,target,m,"));
    let fields = csv_fields(&lines[1]);
    assert_eq!(fields[0], "di-cyc");
    assert_eq!(fields[1], "3"); // n
    assert_eq!(fields[2], "3"); // l
    assert_eq!(fields[8], "1"); // nb_iter
    assert_eq!(fields[12], "0"); // final_error
    assert_eq!(fields[14], "ok");
}

#[test]
fn relative_targets_resolve_against_the_node_count() {
    let dir = tempfile::tempdir().unwrap();
    let graph = g3_file(dir.path());
    let output = bin()
        .args(["--graph", graph.to_str().unwrap(), "--d", "0.5"])
        .args(["--algo", "di-cyc", "--target", "1/N"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    let lines = stdout_lines(&output);
    let fields = csv_fields(&lines[1]);
    assert_eq!(fields[4], "0.3333333333333333");
}

#[test]
fn stats_mode_reports_the_ratio_row() {
    let dir = tempfile::tempdir().unwrap();
    let graph = g3_file(dir.path());
    let output = bin()
        .args(["--stats", "--graph", graph.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    let lines = stdout_lines(&output);
    assert_eq!(lines[0], "n,l,l_per_n,d_per_n,e_per_n,o_per_n,max_in,max_out");
    assert_eq!(lines[1], "3,3,1,0.3333333333333333,1,0,2,2");
}

#[test]
fn stats_mode_on_the_transpose_swaps_degree_extremes() {
    let dir = tempfile::tempdir().unwrap();
    // Hub: 0 points at 1..=3; transposing swaps max_in and max_out.
    let graph = write_file(dir.path(), "hub.txt", "0 1\n0 2\n0 3\n");
    let plain = bin()
        .args(["--stats", "--graph", graph.to_str().unwrap()])
        .output()
        .unwrap();
    let swapped = bin()
        .args(["--stats", "--transpose", "--graph", graph.to_str().unwrap()])
        .output()
        .unwrap();
    let plain_fields = csv_fields(&stdout_lines(&plain)[1]);
    let swapped_fields = csv_fields(&stdout_lines(&swapped)[1]);
    assert_eq!(plain_fields[6], "1"); // max_in
    assert_eq!(plain_fields[7], "3"); // max_out
    assert_eq!(swapped_fields[6], "3");
    assert_eq!(swapped_fields[7], "1");
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let graph = g3_file(dir.path());

    // Missing required flags.
    let output = bin().args(["--graph", graph.to_str().unwrap()]).output().unwrap();
    assert_eq!(output.status.code(), Some(1));

    // Unknown algorithm.
    let output = bin()
        .args(["--graph", graph.to_str().unwrap(), "--d", "0.5"])
        .args(["--algo", "bogus", "--target", "0.1"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&output.stderr).contains("unknown algorithm"));

    // Damping outside (0, 1).
    let output = bin()
        .args(["--graph", graph.to_str().unwrap(), "--d", "1.5"])
        .args(["--algo", "pi", "--target", "0.1"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));

    // Unknown flag.
    let output = bin().args(["--frobnicate"]).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn io_errors_exit_one() {
    let output = bin()
        .args(["--graph", "/nonexistent/graph.txt", "--d", "0.5"])
        .args(["--algo", "pi", "--target", "0.1"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let bad = write_file(dir.path(), "bad.txt", "0 1\nnot numbers\n");
    let output = bin()
        .args(["--stats", "--graph", bad.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&output.stderr).contains(":2:"));
}

#[test]
fn non_convergence_exits_two_and_still_writes_the_row() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_file(dir.path(), "c2.txt", "0 1\n1 0\n");
    let output = bin()
        .args(["--graph", graph.to_str().unwrap(), "--d", "0.99999999"])
        .args(["--algo", "pi", "--target", "1e-9"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let lines = stdout_lines(&output);
    assert_eq!(lines.len(), 2);
    let fields = csv_fields(&lines[1]);
    assert_eq!(fields[14], "no-convergence");
    assert!(String::from_utf8_lossy(&output.stderr).contains("no convergence"));
}

#[test]
fn trace_files_are_monotone_in_the_corrected_error() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_file(dir.path(), "ring.txt", "0 1\n1 2\n2 3\n3 0\n0 2\n");
    let trace = dir.path().join("trace.csv");
    let output = bin()
        .args(["--graph", graph.to_str().unwrap(), "--d", "0.85"])
        .args(["--algo", "di-sop", "--target", "1e-9"])
        .args(["--trace", trace.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    let text = std::fs::read_to_string(&trace).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "cycle,entry_ops,nb_iter,corrected_error,elapsed_ms");
    let errors: Vec<f64> =
        lines.map(|l| csv_fields(l)[3].parse().unwrap()).collect();
    assert!(!errors.is_empty());
    for pair in errors.windows(2) {
        assert!(pair[1] <= pair[0]);
    }
}

#[test]
fn out_flag_redirects_the_csv() {
    let dir = tempfile::tempdir().unwrap();
    let graph = g3_file(dir.path());
    let out = dir.path().join("rows.csv");
    let output = bin()
        .args(["--graph", graph.to_str().unwrap(), "--d", "0.5"])
        .args(["--algo", "gs", "--target", "1e-9"])
        .args(["--out", out.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    assert!(output.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.ends_with('\n'));
}

#[test]
fn runs_are_reproducible_except_for_wall_clock() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_file(dir.path(), "g.txt", "0 1\n1 2\n2 0\n2 3\n3 1\n4 0\n");
    let run = || {
        let output = bin()
            .args(["--graph", graph.to_str().unwrap(), "--d", "0.85"])
            .args(["--algo", "di-op3", "--target", "1e-10", "--m", "3"])
            .output()
            .unwrap();
        assert_eq!(output.status.code(), Some(0));
        let mut fields = csv_fields(&stdout_lines(&output)[1]);
        fields.remove(11); // wall_ms
        fields
    };
    assert_eq!(run(), run());
}

#[test]
fn degree_profile_and_edge_sample_files() {
    let dir = tempfile::tempdir().unwrap();
    let graph = g3_file(dir.path());
    let profile = dir.path().join("profile.csv");
    let sample = dir.path().join("sample.csv");
    let output = bin()
        .args(["--stats", "--graph", graph.to_str().unwrap()])
        .args(["--degree-profile", profile.to_str().unwrap()])
        .args(["--edge-sample", sample.to_str().unwrap()])
        .args(["--sample-k", "2", "--seed", "7"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));

    let profile = std::fs::read_to_string(&profile).unwrap();
    assert_eq!(profile, "node,in_degree,out_degree\n0,0,2\n1,1,1\n2,2,0\n");

    let sample = std::fs::read_to_string(&sample).unwrap();
    let lines: Vec<&str> = sample.lines().collect();
    assert_eq!(lines[0], "src,dst");
    assert_eq!(lines.len(), 3);
}

#[test]
fn microbench_mode_reports_both_orientations() {
    let dir = tempfile::tempdir().unwrap();
    let graph = g3_file(dir.path());
    let output = bin()
        .args(["--microbench", "--graph", graph.to_str().unwrap(), "--repeats", "10"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    let lines = stdout_lines(&output);
    assert_eq!(lines[0], "orientation,repeats,entries,checksum,wall_ms");
    let line = csv_fields(&lines[1]);
    let column = csv_fields(&lines[2]);
    assert_eq!(line[0], "line");
    assert_eq!(column[0], "column");
    assert_eq!(line[2], "30");
    assert_eq!(column[2], "30");
}

#[test]
fn suite_mode_runs_the_cross_product() {
    let dir = tempfile::tempdir().unwrap();
    g3_file(dir.path());
    let config = write_file(
        dir.path(),
        "suite.toml",
        r#"
graph = "g3.txt"
d = 0.5
target = "1/N"
algos = ["pi", "gs", "di-cyc"]
transpose = [false, true]
m = [0, 5]
"#,
    );
    let output = bin().args(["--suite", config.to_str().unwrap()]).output().unwrap();
    assert_eq!(output.status.code(), Some(0));
    let lines = stdout_lines(&output);
    assert_eq!(lines.len(), 1 + 3 * 2 * 2);
    // Synthetic-cost rows must carry a nonzero checksum.
    for line in &lines[1..] {
        let fields = csv_fields(line);
        assert_eq!(fields[14], "ok");
        let m: u64 = fields[5].parse().unwrap();
        let checksum: f64 = fields[13].parse().unwrap();
        if m > 0 {
            assert!(checksum > 0.0, "m={m} row has zero checksum: {line}");
        } else {
            assert_eq!(checksum, 0.0);
        }
    }
}

#[test]
fn suite_mode_rejects_an_empty_algorithm_list() {
    let dir = tempfile::tempdir().unwrap();
    g3_file(dir.path());
    let config = write_file(
        dir.path(),
        "empty.toml",
        "graph = \"g3.txt\"\nd = 0.5\ntarget = \"0.1\"\nalgos = []\n",
    );
    let output = bin().args(["--suite", config.to_str().unwrap()]).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&output.stderr).contains("no algorithms"));
}

#[test]
fn suite_mode_flags_non_converged_rows_and_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    write_file(dir.path(), "c2.txt", "0 1\n1 0\n");
    let config = write_file(
        dir.path(),
        "stall.toml",
        "graph = \"c2.txt\"\nd = 0.99999999\ntarget = \"1e-9\"\nalgos = [\"pi\", \"di-cyc\"]\n",
    );
    let output = bin().args(["--suite", config.to_str().unwrap()]).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
    let lines = stdout_lines(&output);
    assert_eq!(lines.len(), 3);
    for line in &lines[1..] {
        assert!(line.ends_with("no-convergence"));
    }
}

#[test]
fn mutually_exclusive_modes_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let graph = g3_file(dir.path());
    let output = bin()
        .args(["--stats", "--microbench", "--graph", graph.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
}
