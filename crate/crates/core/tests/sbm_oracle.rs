// SPDX-License-Identifier: Apache-2.0

mod common;

use common::{dense_adjacency, dense_assign, er_graph};
use der_core::der::{random_equal_partition, Der, Partition};
use der_core::metrics::nmi;
use der_core::sbm::{
    count_two_paths, expected_two_paths, recovery_experiment, sample_sbm, sign_diagnostic, Block, InitCluster,
    SbmSpec,
};
use der_core::seed::derive_seed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn edge_counts_are_binomial_for_most_seeds() {
    let (n, p, q) = (120usize, 0.3, 0.05);
    let half = n / 2;
    let within_pairs = 2.0 * (half * (half - 1) / 2) as f64;
    let cross_pairs = (half * half) as f64;
    let ok = |count: f64, trials: f64, prob: f64| {
        (count - trials * prob).abs() <= 4.0 * (trials * prob * (1.0 - prob)).sqrt()
    };
    let mut good = 0;
    for seed in 0..100 {
        let (g, planted) = sample_sbm(&SbmSpec { n, k: 2, p, q, seed }).unwrap();
        let (mut within, mut cross) = (0.0, 0.0);
        for i in 0..n {
            for &(j, _) in g.neighbors(i).iter().filter(|&&(j, _)| j > i) {
                if planted[i] == planted[j] {
                    within += 1.0;
                } else {
                    cross += 1.0;
                }
            }
        }
        if ok(within, within_pairs, p) && ok(cross, cross_pairs, q) {
            good += 1;
        }
    }
    assert!(good >= 95, "{good} of 100 seeds within 4 sigma");
}

#[test]
fn equal_probabilities_give_uniform_density() {
    let (g, _) = sample_sbm(&SbmSpec { n: 200, k: 2, p: 0.2, q: 0.2, seed: 8 }).unwrap();
    let pairs = 200.0 * 199.0 / 2.0;
    let sd = (pairs * 0.2 * 0.8f64).sqrt();
    assert!((g.num_edges() as f64 - 0.2 * pairs).abs() <= 4.0 * sd);
}

#[test]
fn two_path_counts_match_squared_adjacency() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for case in 0..30 {
        let n = rng.gen_range(2..=50);
        let g = er_graph(n, rng.gen_range(0.05..0.5), 7000 + case);
        let a = dense_adjacency(&g);
        let targets: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
        for i in 0..n {
            let brute: f64 = targets
                .iter()
                .map(|&v| (0..n).map(|m| a[i][m] * a[m][v]).sum::<f64>())
                .sum();
            assert_eq!(count_two_paths(&g, i, &targets).unwrap(), brute as u64, "case {case}, vertex {i}");
        }
    }
}

#[test]
fn expected_difference_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..100 {
        let half = rng.gen_range(1..=500usize);
        let n = 2 * half;
        let n1 = rng.gen_range(0..=half);
        let n2 = half - n1;
        let q = rng.gen_range(0.0..1.0);
        let p = rng.gen_range(q..=1.0);
        for block in [Block::First, Block::Second] {
            let to1 = expected_two_paths(n, n1, n2, p, q, block, InitCluster::First).unwrap();
            let to2 = expected_two_paths(n, n1, n2, p, q, block, InitCluster::Second).unwrap();
            let sign = if block == Block::First { 1.0 } else { -1.0 };
            let want = sign * 0.5 * n as f64 * (n1 as f64 - n2 as f64) * (p - q) * (p - q);
            let got = to1 - to2;
            assert!((got - want).abs() <= 1e-9 * want.abs().max(to1.abs()).max(1e-300), "{got} vs {want}");
        }
    }
}

/// Exact finite-size expectation of `count_two_paths(i, s)` under the model
/// with contiguous blocks of size `n / 2`.
fn exact_two_path_expectation(n: usize, p: f64, q: f64, i: usize, s: &[usize]) -> f64 {
    let prob = |a: usize, b: usize| if (a < n / 2) == (b < n / 2) { p } else { q };
    let in_s = |v: usize| s.contains(&v);
    (0..n)
        .filter(|&m| m != i)
        .map(|m| {
            let onward: f64 = s.iter().filter(|&&v| v != i && v != m).map(|&v| prob(m, v)).sum();
            prob(i, m) * (onward + if in_s(i) { 1.0 } else { 0.0 })
        })
        .sum()
}

#[test]
fn two_path_expectation_matches_monte_carlo() {
    let (n, n1, n2, p, q) = (200usize, 55usize, 45usize, 0.3, 0.1);
    let c1: Vec<usize> = (0..n1).chain(n / 2..n / 2 + n2).collect();
    let i = n / 2 - 1;
    assert!(!c1.contains(&i));

    let draws = 500;
    let samples: Vec<f64> = (0..draws)
        .map(|d| {
            let (g, _) = sample_sbm(&SbmSpec { n, k: 2, p, q, seed: 10_000 + d }).unwrap();
            count_two_paths(&g, i, &c1).unwrap() as f64
        })
        .collect();
    let mean = samples.iter().sum::<f64>() / draws as f64;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (draws as f64 - 1.0);
    let se = (var / draws as f64).sqrt();

    let exact = exact_two_path_expectation(n, p, q, i, &c1);
    assert!((mean - exact).abs() <= 3.0 * se, "mc {mean} ± {se}, exact {exact}");

    // The closed form drops self-exclusions; the gap is O(1/N) relative.
    let closed = expected_two_paths(n, n1, n2, p, q, Block::First, InitCluster::First).unwrap();
    assert!((closed - 820.0).abs() < 1e-9);
    assert!((closed - exact).abs() / exact < 0.02, "closed {closed}, exact {exact}");
    assert!((closed - mean).abs() <= 3.0 * se, "closed {closed}, mc {mean} ± {se}");
}

#[test]
fn biased_init_is_recovered_in_one_step() {
    let spec = SbmSpec { n: 200, k: 2, p: 0.5, q: 0.05, seed: 2024 };
    let (g, planted) = sample_sbm(&spec).unwrap();
    let der = Der::new(&g, 1).unwrap();
    assert_eq!(der.n_active(), 200);
    // C1 holds 60 vertices of the first block and 40 of the second.
    let init: Vec<usize> = (0..200).map(|v| usize::from(!(v < 60 || (100..140).contains(&v)))).collect();
    let init = Partition::from_assignment(2, init).unwrap();
    let one = der.refine(init, 1).partition;
    assert!(one.same_grouping(&Partition::from_labels(&planted)));
}

#[test]
fn recovery_trial_agrees_with_dense_reference() {
    let spec = SbmSpec { n: 1000, k: 2, p: 0.3, q: 0.1, seed: 0 };
    let report = recovery_experiment(&spec, 1, 2, 77).unwrap();
    for record in &report.records {
        let (g, planted) = sample_sbm(&SbmSpec { seed: derive_seed(record.seed, 0), ..spec }).unwrap();
        let der = Der::new(&g, 1).unwrap();
        let init = random_equal_partition(der.n_active(), 2, derive_seed(record.seed, 1)).unwrap();
        let active = der.diffusion().vertices().to_vec();
        let want = dense_assign(&g, 1, &active, &init);
        let planted_active: Vec<usize> = active.iter().map(|&v| planted[v]).collect();
        assert_eq!(nmi(&want, &planted_active).unwrap(), record.nmi);
        assert_eq!(Partition::from_labels(&want).same_grouping(&Partition::from_labels(&planted_active)), record.success);
    }
}

#[test]
fn success_rate_grows_with_signal() {
    let (n, q) = (200, 0.05);
    let rate = |p: f64| recovery_experiment(&SbmSpec { n, k: 2, p, q, seed: 0 }, 1, 50, 5).unwrap().success_rate;
    let p = 0.6;
    let rates = [rate(q), rate((p + q) / 2.0), rate(p)];
    assert!(rates[1] >= rates[0] - 0.15 && rates[2] >= rates[1] - 0.15, "{rates:?}");
    assert!(rates[2] > rates[0], "{rates:?}");
}

#[test]
fn no_signal_means_chance_agreement() {
    let spec = SbmSpec { n: 300, k: 2, p: 0.2, q: 0.2, seed: 0 };
    let report = recovery_experiment(&spec, 1, 10, 6).unwrap();
    assert_eq!(report.successes, 0);
    assert!(report.mean_nmi < 0.1, "{}", report.mean_nmi);
}

#[test]
fn converged_runs_recover_dense_blocks() {
    let spec = SbmSpec { n: 400, k: 2, p: 0.3, q: 0.05, seed: 0 };
    let report = recovery_experiment(&spec, 1, 6, 9).unwrap();
    assert!(report.converged_success_rate >= 0.8, "{report:?}");
}

#[test]
fn linearized_sign_mostly_agrees_on_dense_blocks() {
    let spec = SbmSpec { n: 200, k: 2, p: 0.5, q: 0.05, seed: 12 };
    let (g, planted) = sample_sbm(&spec).unwrap();
    let init = random_equal_partition(200, 2, 13).unwrap();
    let d = sign_diagnostic(&g, &planted, init.assignment()).unwrap();
    assert_eq!(d.vertices, 200);
    assert!(d.agreement > 0.9, "{d:?}");
}
