// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output};

use der_core::{Graph, GraphBuilder};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn der(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_der"))
        .args(args)
        .env_remove("DER_LOG")
        .output()
        .expect("binary runs")
}

pub fn der_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_der"))
        .current_dir(dir)
        .args(args)
        .env_remove("DER_LOG")
        .output()
        .expect("binary runs")
}

pub fn er_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = GraphBuilder::with_numbered_vertices(n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen::<f64>() < p {
                b.add_edge_by_index(i, j, 1.0);
            }
        }
    }
    b.build()
}

/// Positive weights, some self-loops, possibly isolated vertices.
pub fn weighted_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = GraphBuilder::with_numbered_vertices(n);
    for i in 0..n {
        if rng.gen::<f64>() < 0.05 {
            b.add_edge_by_index(i, i, rng.gen_range(0.5..3.0));
        }
        for j in i + 1..n {
            if rng.gen::<f64>() < p {
                b.add_edge_by_index(i, j, rng.gen_range(0.1..5.0));
            }
        }
    }
    b.build()
}

/// `(1/L) sum_{t=1..L} T^t` by dense matrix powers.
pub fn dense_walk(g: &Graph, walk_length: usize) -> Vec<Vec<f64>> {
    let n = g.n();
    let mut t = vec![vec![0.0; n]; n];
    for (i, row) in t.iter_mut().enumerate() {
        for &(j, w) in g.neighbors(i) {
            row[j] = w / g.degree(i);
        }
    }
    let mut power = t.clone();
    let mut sum = t.clone();
    for _ in 1..walk_length {
        let mut next = vec![vec![0.0; n]; n];
        for i in 0..n {
            for k in 0..n {
                if power[i][k] != 0.0 {
                    for j in 0..n {
                        next[i][j] += power[i][k] * t[k][j];
                    }
                }
            }
        }
        power = next;
        for i in 0..n {
            for j in 0..n {
                sum[i][j] += power[i][j];
            }
        }
    }
    for row in &mut sum {
        for x in row.iter_mut() {
            *x /= walk_length as f64;
        }
    }
    sum
}

/// Misclassification by trying every injective relabeling of the smaller
/// label set into the larger one.
pub fn brute_misclassified(a: &[usize], b: &[usize]) -> usize {
    let ka = a.iter().max().map_or(0, |m| m + 1);
    let kb = b.iter().max().map_or(0, |m| m + 1);
    let (a, b, ka, kb) = if ka <= kb { (a, b, ka, kb) } else { (b, a, kb, ka) };
    #[allow(clippy::too_many_arguments)]
    fn go(s: usize, ka: usize, kb: usize, map: &mut Vec<usize>, used: &mut Vec<bool>, a: &[usize], b: &[usize], best: &mut usize) {
        if s == ka {
            let agree = a.iter().zip(b).filter(|&(&x, &y)| map[x] == y).count();
            *best = (*best).max(agree);
            return;
        }
        for t in 0..kb {
            if !used[t] {
                used[t] = true;
                map[s] = t;
                go(s + 1, ka, kb, map, used, a, b, best);
                used[t] = false;
            }
        }
    }
    let mut best = 0;
    go(0, ka, kb, &mut vec![0; ka], &mut vec![false; kb], a, b, &mut best);
    a.len() - best
}
