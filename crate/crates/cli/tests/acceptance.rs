//! Acceptance suite for the kernelization front end: 50 random graphs with
//! a small planted optimum, each must kernelize within the stated size
//! bound, preserve the optimum, and finish in under a second.

use dynfpt::graph::{Graph, Vertex};
use dynfpt::solvers::{cvd_exact_weighted, WeightedGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::process::Command;
use std::time::Instant;

/// Disjoint cliques over `n` vertices plus up to three spoiler vertices
/// wired arbitrarily: deleting the spoilers restores a cluster graph, so
/// the optimum is at most three.
fn planted_instance(rng: &mut ChaCha8Rng, n: usize) -> (usize, Vec<(Vertex, Vertex)>) {
    let spoilers = rng.gen_range(1..=3usize);
    let mut edges = BTreeSet::new();
    let mut v = spoilers;
    while v < n {
        let size = rng.gen_range(1..=6usize).min(n - v);
        for a in v..v + size {
            for b in a + 1..v + size {
                edges.insert((a, b));
            }
        }
        v += size;
    }
    for s in 0..spoilers {
        let count = rng.gen_range(2..=8usize);
        for _ in 0..count {
            let t = rng.gen_range(0..n);
            if t != s {
                edges.insert((s.min(t), s.max(t)));
            }
        }
    }
    (n, edges.into_iter().collect())
}

fn exact_cvd(g: &Graph) -> usize {
    cvd_exact_weighted(&WeightedGraph::unit(g.clone()), None)
        .unwrap()
        .len()
}

#[test]
fn criterion_9_kernelization_cli() {
    let mut rng = ChaCha8Rng::seed_from_u64(90);
    let dir = std::env::temp_dir();
    for case in 0..50 {
        let (n, edges) = planted_instance(&mut rng, 40);
        let g = Graph::from_edges(n, &edges);
        let opt = exact_cvd(&g);
        assert!(opt <= 3, "planting failed");

        let mut text = format!("{n} {}\n", edges.len());
        for (u, v) in &edges {
            text.push_str(&format!("{u} {v}\n"));
        }
        let path = dir.join(format!("dynfpt_acc9_{}_{case}.txt", std::process::id()));
        std::fs::write(&path, text).unwrap();

        let start = Instant::now();
        let out = Command::new(env!("CARGO_BIN_EXE_dynfpt"))
            .arg("kernelize-cvd")
            .arg(&path)
            .output()
            .expect("binary runs");
        let elapsed = start.elapsed();
        assert!(out.status.success(), "kernelize failed on case {case}");
        assert!(elapsed.as_secs_f64() < 1.0, "case {case} took {elapsed:?}");

        let stdout = String::from_utf8_lossy(&out.stdout);
        let mut lines = stdout.lines();
        let forced: Vec<Vertex> = lines
            .next()
            .expect("forced line")
            .split_whitespace()
            .skip(1)
            .map(|t| t.parse().unwrap())
            .collect();
        let kernel_header: Vec<usize> = lines
            .next()
            .expect("kernel line")
            .split_whitespace()
            .skip(1)
            .map(|t| t.parse().unwrap())
            .collect();
        let (vp_size, edge_count) = (kernel_header[0], kernel_header[1]);
        let kernel_edges: Vec<(Vertex, Vertex)> = lines
            .map(|l| {
                let mut t = l.split_whitespace();
                (
                    t.next().unwrap().parse().unwrap(),
                    t.next().unwrap().parse().unwrap(),
                )
            })
            .collect();
        assert_eq!(kernel_edges.len(), edge_count, "edge count header mismatch");

        // Size bound from the approximation guarantee: |X| <= 3 opt.
        let x_max = 3 * opt;
        assert!(
            vp_size <= x_max + 2 * x_max * (x_max + 1) * (x_max + 1),
            "kernel of {vp_size} vertices breaks the bound for opt {opt}"
        );

        // Optimum preservation: forced plus the kernel optimum equals the
        // input optimum (isolated kernel vertices cannot change it).
        let kernel_graph = Graph::from_edges(n, &kernel_edges);
        assert_eq!(
            forced.len() + exact_cvd(&kernel_graph),
            opt,
            "kernelization lost the optimum on case {case}"
        );
        std::fs::remove_file(&path).ok();
    }
    println!("acceptance criterion 9 (kernelization CLI bound, soundness, runtime): PASS");
}
