//! Monte Carlo invariants of the model catalogue, the simulators and the
//! dependence estimates.

mod common;

use common::{catalogue, ks_two_sample, L1};
use infmem_core::bounds::p_markov_gap_bound;
use infmem_core::dependence::{compare_to_bound, default_coupling_plan, estimate_tau};
use infmem_core::model::{empirical_lipschitz_check, validate_contraction, LipschitzCheck};
use infmem_core::simulate::{run_truncated, simulate_coupled_pair, simulate_replication};
use infmem_core::{Innovation, Past, Replicator, Sequential, SimulationPlan};

/// Runs replications in reverse order, to show results do not depend on it.
struct Reversed;

impl Replicator for Reversed {
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        let mut out: Vec<T> = (0..n as u64).rev().map(f).collect();
        out.reverse();
        out
    }
}

#[test]
fn catalogue_is_contractive_and_lipschitz() {
    for m in catalogue() {
        let c = validate_contraction(&m, &L1).unwrap();
        assert!(c.pass, "{}: {c:?}", m.name());
        let l = empirical_lipschitz_check(&m, &L1, &LipschitzCheck::default()).unwrap();
        assert!(l.pass, "{}: worst ratio {}", m.name(), l.worst_ratio);
    }
}

#[test]
fn apply_is_reproducible() {
    use rand::SeedableRng;
    for m in catalogue() {
        let map = m.map();
        let draw = || {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
            let mut inn = Innovation::new(map.innovation_len());
            map.sample_innovation(&mut rng, &mut inn);
            let mut out = vec![0.0; m.state_dim()];
            map.apply(&Past::empty(m.state_dim()), &inn, &mut out);
            out
        };
        assert_eq!(draw(), draw(), "{}", m.name());
    }
}

#[test]
fn finite_memory_ignores_deep_lags() {
    use rand::SeedableRng;
    for m in catalogue() {
        let Some(order) = m.coeffs().order() else { continue };
        let map = m.map();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mut inn = Innovation::new(map.innovation_len());
        map.sample_innovation(&mut rng, &mut inn);
        let depth = order + 5;
        let mut hist: Vec<f64> = (0..depth).map(|i| (i % 4) as f64).collect();
        let mut a = vec![0.0; 1];
        map.apply(&Past::new(&hist, 1), &inn, &mut a);
        // Oldest entries are lags beyond the order.
        for v in hist.iter_mut().take(depth - order) {
            *v += 7.0;
        }
        let mut b = vec![0.0; 1];
        map.apply(&Past::new(&hist, 1), &inn, &mut b);
        assert_eq!(a, b, "{}", m.name());
    }
}

#[test]
fn replication_order_does_not_matter() {
    for m in catalogue() {
        let plan = SimulationPlan::new(8, 40, 50, 6, 21).unwrap();
        let f = |rep: u64| simulate_replication(&m, &plan, rep).unwrap().values;
        assert_eq!(Sequential.map(6, f), Reversed.map(6, f), "{}", m.name());
    }
}

#[test]
fn truncation_gap_within_lemma_bound() {
    // Matched seeds: the p and p+1 chains share every innovation.
    for m in catalogue() {
        if m.coeffs().order().is_some() {
            continue;
        }
        let mu = m.mu_1().value;
        for p in [1usize, 3, 6] {
            let reps = 2000;
            let gaps: Vec<f64> = (0..reps)
                .map(|rep| {
                    let last = |p: usize| {
                        let plan = SimulationPlan::new(p, 60, 1, 1, 5).unwrap();
                        let mut x = 0.0;
                        run_truncated(&m, &plan, rep, |_, s| x = s[0]).unwrap();
                        x
                    };
                    (last(p) - last(p + 1)).abs()
                })
                .collect();
            let mean = gaps.iter().sum::<f64>() / reps as f64;
            let sd = (gaps.iter().map(|g| (g - mean).powi(2)).sum::<f64>() / (reps - 1) as f64).sqrt();
            let bound = p_markov_gap_bound(m.coeffs(), mu, p).unwrap();
            assert!(mean <= bound + 3.0 * sd / (reps as f64).sqrt(), "{} p = {p}: {mean} > {bound}", m.name());
        }
    }
}

#[test]
fn coupled_copies_share_marginals() {
    for m in catalogue() {
        let plan = SimulationPlan::new(10, 80, 5, 1, 33).unwrap();
        let n = 2000;
        let (mut xs, mut ys) = (Vec::new(), Vec::new());
        for rep in 0..n {
            let (x, y) = simulate_coupled_pair(&m, &plan, rep).unwrap();
            xs.push(x.values[0]);
            ys.push(y.values[0]);
        }
        // 1% critical value of the two-sample statistic.
        let crit = 1.628 * (2.0 / n as f64).sqrt();
        assert!(ks_two_sample(&xs, &ys) < crit, "{}", m.name());
    }
}

#[test]
fn coupling_gap_under_bound_for_catalogue() {
    let rs: Vec<usize> = (1..=20).collect();
    for m in catalogue() {
        let plan = default_coupling_plan(&m, 20, 20_000, 17).unwrap();
        let est = estimate_tau(&m, &rs, &plan, &Sequential).unwrap();
        let cmp = compare_to_bound(&est, m.coeffs(), m.mu_1().value).unwrap();
        assert!(cmp.pass, "{}: {:?}", m.name(), cmp.rows.iter().filter(|r| !r.pass).collect::<Vec<_>>());
        if let Some(s) = cmp.log_slope {
            assert!(s <= 0.0, "{}: slope {s}", m.name());
        }
    }
}
