// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use der_core::der::Partition;
use der_core::{Graph, GraphBuilder};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Erdős–Rényi graph on `"0".."n-1"`.
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

/// Random graph with positive weights, occasional self-loops and possibly
/// isolated vertices.
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

pub fn dense_adjacency(g: &Graph) -> Vec<Vec<f64>> {
    let n = g.n();
    let mut a = vec![vec![0.0; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        for &(j, w) in g.neighbors(i) {
            row[j] = w;
        }
    }
    a
}

fn matmul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut c = vec![vec![0.0; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] != 0.0 {
                for j in 0..n {
                    c[i][j] += a[i][k] * b[k][j];
                }
            }
        }
    }
    c
}

/// Rows `(1/L) sum_{t=1..L} T^t`, computed with dense matrix powers.
/// Rows of isolated vertices are zero.
pub fn dense_walk(g: &Graph, walk_length: usize) -> Vec<Vec<f64>> {
    let n = g.n();
    let a = dense_adjacency(g);
    let t: Vec<Vec<f64>> = a
        .iter()
        .map(|row| {
            let d: f64 = row.iter().sum();
            row.iter().map(|&x| if d > 0.0 { x / d } else { 0.0 }).collect()
        })
        .collect();
    let mut power = t.clone();
    let mut sum = vec![vec![0.0; n]; n];
    for step in 1..=walk_length {
        if step > 1 {
            power = matmul(&power, &t);
        }
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

/// `mu_S` over graph vertices from dense walk rows.
pub fn dense_cluster_measure(g: &Graph, walk: &[Vec<f64>], members: &[usize]) -> Vec<f64> {
    let d_s: f64 = members.iter().map(|&v| g.degree(v)).sum();
    let mut mu = vec![0.0; g.n()];
    for &v in members {
        for (j, x) in walk[v].iter().enumerate() {
            mu[j] += g.degree(v) * x / d_s;
        }
    }
    mu
}

/// `sum_j nu_j ln mu_j`, negative infinity on a support mismatch.
pub fn dense_score(nu: &[f64], mu: &[f64]) -> f64 {
    let mut s = 0.0;
    for (&a, &b) in nu.iter().zip(mu) {
        if a > 0.0 {
            if b <= 0.0 {
                return f64::NEG_INFINITY;
            }
            s += a * b.ln();
        }
    }
    s
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Reference assignment: dense scores, lowest index among maxima, current
/// cluster when every score is negative infinity.
pub fn dense_assign(g: &Graph, l: usize, active: &[usize], partition: &Partition) -> Vec<usize> {
    let walk = dense_walk(g, l);
    let mus: Vec<Vec<f64>> = partition
        .clusters()
        .iter()
        .map(|c| {
            let members: Vec<usize> = c.iter().map(|&p| active[p]).collect();
            if members.is_empty() {
                vec![0.0; g.n()]
            } else {
                dense_cluster_measure(g, &walk, &members)
            }
        })
        .collect();
    active
        .iter()
        .enumerate()
        .map(|(pos, &v)| {
            let mut best = partition.cluster_of(pos);
            let mut best_score = f64::NEG_INFINITY;
            for (s, mu) in mus.iter().enumerate() {
                let sc = dense_score(&walk[v], mu);
                if sc > best_score {
                    best = s;
                    best_score = sc;
                }
            }
            best
        })
        .collect()
}
