//! Behavior tests for the command-line front end, run against the real
//! binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("dynfpt_cli_{}_{}", std::process::id(), name));
    std::fs::write(&path, contents).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dynfpt"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_rows(out: &Output) -> Vec<Vec<String>> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

/// Answer-bearing columns only (micros stripped), for determinism checks.
fn answer_columns(out: &Output) -> Vec<Vec<String>> {
    stdout_rows(out)
        .into_iter()
        .map(|row| row[..6.min(row.len())].to_vec())
        .collect()
}

#[test]
fn replay_answers_simple_stream() {
    let path = write_temp("simple", "n 3\n+ 0 1\n? vc\n");
    let out = run(&["replay", path.to_str().unwrap()]);
    assert!(out.status.success());
    let rows = stdout_rows(&out);
    assert_eq!(rows.len(), 2);
    assert_eq!(
        rows[0][..4],
        ["0".to_string(), "+".into(), "0".into(), "1".into()]
    );
    assert_eq!(rows[1][4], "vc");
    assert_eq!(rows[1][5], "1");
}

#[test]
fn replay_rejects_self_loop_with_line_number() {
    let path = write_temp("selfloop", "n 3\n+ 0 0\n");
    let out = run(&["replay", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "stderr was: {err}");
    assert!(err.contains("self loop"), "stderr was: {err}");
}

#[test]
fn replay_triangle_chromatic() {
    let path = write_temp("tri", "n 3\n+ 0 1\n+ 1 2\n+ 0 2\n? chromatic\n");
    let out = run(&["replay", path.to_str().unwrap()]);
    assert!(out.status.success());
    let rows = stdout_rows(&out);
    assert_eq!(rows.last().unwrap()[5], "3");
}

#[test]
fn replay_is_deterministic() {
    let stream = "n 6\n+ 0 1\n+ 1 2\n? vc\n+ 2 3\n+ 3 4\n? cvd\n? cvd-exact\n- 1 2\n+ 4 5\n? chromatic\n+ 2 4\n? fvs\n? vc\n";
    let path = write_temp("det", stream);
    let a = run(&["replay", path.to_str().unwrap(), "--max-degree", "4"]);
    let b = run(&["replay", path.to_str().unwrap(), "--max-degree", "4"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(answer_columns(&a), answer_columns(&b));
}

#[test]
fn replay_cvd_routes_agree() {
    // Query both cluster vertex deletion structures after every update.
    let mut stream = String::from("n 7\n");
    let edges = [
        (0, 1),
        (1, 2),
        (2, 3),
        (0, 2),
        (3, 4),
        (4, 5),
        (5, 6),
        (4, 6),
        (1, 3),
        (2, 4),
    ];
    for (u, v) in edges {
        stream.push_str(&format!("+ {u} {v}\n? cvd\n? cvd-exact\n"));
    }
    let path = write_temp("routes", &stream);
    let out = run(&["replay", path.to_str().unwrap()]);
    assert!(out.status.success());
    let rows = stdout_rows(&out);
    let answers: Vec<(&str, &str)> = rows
        .iter()
        .filter(|r| r[1] == "?")
        .map(|r| (r[4].as_str(), r[5].as_str()))
        .collect();
    for pair in answers.chunks(2) {
        assert_eq!(pair[0].0, "cvd");
        assert_eq!(pair[1].0, "cvd-exact");
        assert_eq!(pair[0].1, pair[1].1, "the two cvd routes disagree");
    }
}

#[test]
fn replay_rejects_unselected_problem() {
    let path = write_temp("unsel", "n 3\n+ 0 1\n? cvd\n");
    let out = run(&["replay", path.to_str().unwrap(), "--problems", "vc"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn replay_fvs_needs_degree_bound() {
    let path = write_temp("fvsbound", "n 3\n+ 0 1\n? fvs\n");
    let out = run(&["replay", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--max-degree"));

    let out = run(&["replay", path.to_str().unwrap(), "--max-degree", "2"]);
    assert!(out.status.success());
}

#[test]
fn replay_degree_bound_diagnostic() {
    let path = write_temp("degviol", "n 4\n+ 0 1\n+ 0 2\n+ 0 3\n? fvs\n");
    let out = run(&["replay", path.to_str().unwrap(), "--max-degree", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("line 4") && err.contains("degree"),
        "stderr was: {err}"
    );
}

#[test]
fn replay_verbose_emits_witness() {
    let path = write_temp("verbose", "n 3\n+ 0 1\n+ 1 2\n+ 0 2\n? vc\n");
    let out = run(&["replay", path.to_str().unwrap(), "--verbose"]);
    assert!(out.status.success());
    let rows = stdout_rows(&out);
    let query = rows.last().unwrap();
    assert_eq!(query[5], "2");
    let witness: Vec<usize> = query[7]
        .split_whitespace()
        .map(|t| t.parse().unwrap())
        .collect();
    assert_eq!(witness.len(), 2);
    for (u, v) in [(0, 1), (1, 2), (0, 2)] {
        assert!(witness.contains(&u) || witness.contains(&v));
    }
}

#[test]
fn kernelize_cluster_graph_is_trivial() {
    let path = write_temp("kcluster", "6 4\n0 1\n1 2\n0 2\n3 4\n");
    let out = run(&["kernelize-cvd", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("forced"));
    assert_eq!(lines.next(), Some("kernel 0 0"));
    assert_eq!(lines.next(), None);
}

#[test]
fn kernelize_p3_preserves_optimum() {
    let path = write_temp("kp3", "3 2\n0 1\n1 2\n");
    let out = run(&["kernelize-cvd", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let mut lines = text.lines();
    let forced: Vec<usize> = lines
        .next()
        .unwrap()
        .split_whitespace()
        .skip(1)
        .map(|t| t.parse().unwrap())
        .collect();
    let kernel_line = lines.next().unwrap();
    assert!(kernel_line.starts_with("kernel "));
    let edges: Vec<(usize, usize)> = lines
        .map(|l| {
            let mut t = l.split_whitespace();
            (
                t.next().unwrap().parse().unwrap(),
                t.next().unwrap().parse().unwrap(),
            )
        })
        .collect();
    let g = dynfpt::graph::Graph::from_edges(3, &edges);
    let kernel_opt =
        dynfpt::solvers::cvd_exact_weighted(&dynfpt::solvers::WeightedGraph::unit(g), None)
            .unwrap()
            .len();
    assert_eq!(forced.len() + kernel_opt, 1);
}

#[test]
fn kernelize_rejects_bad_header() {
    let path = write_temp("kbad", "n 5 4\n0 1\n");
    let out = run(&["kernelize-cvd", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bench_modes_agree() {
    let stream = "n 6\n+ 0 1\n+ 1 2\n? vc\n+ 2 0\n? vc\n+ 3 4\n+ 4 5\n? vc\n- 1 2\n? vc\n";
    let path = write_temp("bench", stream);
    let dynamic = run(&[
        "bench",
        path.to_str().unwrap(),
        "--problem",
        "vc",
        "--mode",
        "dynamic",
    ]);
    let fixed = run(&[
        "bench",
        path.to_str().unwrap(),
        "--problem",
        "vc",
        "--mode",
        "static",
    ]);
    assert!(dynamic.status.success() && fixed.status.success());
    let dyn_answers: Vec<String> = stdout_rows(&dynamic)
        .into_iter()
        .filter(|r| r[1] == "?")
        .map(|r| r[5].clone())
        .collect();
    let static_answers: Vec<String> = stdout_rows(&fixed)
        .into_iter()
        .filter(|r| r[1] == "?")
        .map(|r| r[5].clone())
        .collect();
    assert_eq!(dyn_answers, static_answers);
    assert_eq!(dyn_answers, vec!["1", "2", "3", "2"]);

    // Cumulative column is monotone.
    let rows = stdout_rows(&dynamic);
    let cums: Vec<u128> = rows.iter().map(|r| r[7].parse().unwrap()).collect();
    assert!(cums.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn bench_empty_stream_has_empty_body() {
    let path = write_temp("benchempty", "n 4\n");
    let out = run(&[
        "bench",
        path.to_str().unwrap(),
        "--problem",
        "cvd",
        "--mode",
        "dynamic",
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
}

#[test]
fn bench_rejects_mismatched_query() {
    let path = write_temp("benchmis", "n 4\n+ 0 1\n? cvd\n");
    let out = run(&[
        "bench",
        path.to_str().unwrap(),
        "--problem",
        "vc",
        "--mode",
        "dynamic",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn replay_ignores_comments_and_blanks() {
    let path = write_temp("comments", "# header comment\n\nn 3\n+ 0 1\n\n# mid comment\n? vc\n");
    let out = run(&["replay", path.to_str().unwrap()]);
    assert!(out.status.success());
    let rows = stdout_rows(&out);
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1][5], "1");
}

#[test]
fn replay_rejects_out_of_range_vertex() {
    let path = write_temp("range", "n 3\n+ 0 7\n");
    let out = run(&["replay", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2") && err.contains("out of range"), "stderr was: {err}");
}

#[test]
fn replay_rejects_missing_edge_delete() {
    let path = write_temp("missing", "n 3\n+ 0 1\n- 1 2\n");
    let out = run(&["replay", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn usage_error_exits_one() {
    let out = run(&["replay"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}

/// A star-heavy stream with a query every ~sqrt(n) updates: maintaining the
/// structure must beat rebuilding with the static solver. The gap is
/// structural (microseconds against milliseconds per query), so comparing
/// totals is safe despite timer noise.
#[test]
fn bench_dynamic_beats_static_on_star_stream() {
    let n = 10_000;
    let hubs = 3;
    let mut stream = format!("n {n}\n");
    let mut present = std::collections::BTreeSet::new();
    let mut state = 88172645463325252u64;
    let mut rand = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    for i in 0..3000usize {
        let h = (rand() % hubs as u64) as usize;
        let leaf = hubs + (rand() % (n - hubs) as u64) as usize;
        let sym = if present.insert((h, leaf)) {
            '+'
        } else {
            present.remove(&(h, leaf));
            '-'
        };
        stream.push_str(&format!("{sym} {h} {leaf}\n"));
        if i % 100 == 99 {
            stream.push_str("? vc\n");
        }
    }
    let path = write_temp("benchperf", &stream);
    let dynamic = run(&[
        "bench",
        path.to_str().unwrap(),
        "--problem",
        "vc",
        "--mode",
        "dynamic",
    ]);
    let fixed = run(&[
        "bench",
        path.to_str().unwrap(),
        "--problem",
        "vc",
        "--mode",
        "static",
    ]);
    assert!(dynamic.status.success() && fixed.status.success());
    let total = |out: &Output| -> u128 { stdout_rows(out).last().unwrap()[7].parse().unwrap() };
    let (d, s) = (total(&dynamic), total(&fixed));
    assert!(
        d < s,
        "dynamic replay ({d} us) should beat static recomputation ({s} us)"
    );
    // Answers still agree.
    let dyn_answers: Vec<String> = stdout_rows(&dynamic)
        .into_iter()
        .filter(|r| r[1] == "?")
        .map(|r| r[5].clone())
        .collect();
    let static_answers: Vec<String> = stdout_rows(&fixed)
        .into_iter()
        .filter(|r| r[1] == "?")
        .map(|r| r[5].clone())
        .collect();
    assert_eq!(dyn_answers, static_answers);
}
