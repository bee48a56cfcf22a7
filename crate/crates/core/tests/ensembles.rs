use std::collections::BTreeMap;

use approx::assert_abs_diff_eq;
use gmacwt::ensembles::{
    apportion, edge_to_node, load_ensemble, load_puncturing, node_to_edge, presets, puncturing_rate,
    random_puncturing, Ensemble, PuncturingDistribution, RateSet,
};
use proptest::prelude::*;

fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn distribution() -> impl Strategy<Value = BTreeMap<usize, f64>> {
    prop::collection::btree_map(2usize..40, 0.01f64..1.0, 1..6).prop_map(|m| {
        let s: f64 = m.values().sum();
        m.into_iter().map(|(d, c)| (d, c / s)).collect()
    })
}

/// Rate from sockets: variable nodes per edge against check nodes per edge.
fn rate_by_counting(ens: &Ensemble) -> f64 {
    let vars: f64 = ens.lambda().iter().map(|(&d, &c)| c / d as f64).sum();
    let checks: f64 = ens.rho().iter().map(|(&d, &c)| c / d as f64).sum();
    (vars - checks) / vars
}

proptest! {
    #[test]
    fn perspectives_round_trip(lambda in distribution()) {
        let node = edge_to_node(&lambda);
        prop_assert!((node.values().sum::<f64>() - 1.0).abs() < 1e-12);
        let back = node_to_edge(&node);
        for (d, c) in &lambda {
            prop_assert!((back[d] - c).abs() < 1e-12);
        }
    }

    #[test]
    fn code_rate_matches_socket_count(lambda in distribution(), rho in distribution()) {
        let ens = Ensemble::new(lambda, rho).unwrap();
        prop_assert!((ens.code_rate() - rate_by_counting(&ens)).abs() < 1e-12);
    }

    #[test]
    fn code_rate_ignores_a_common_scale(lambda in distribution(), rho in distribution(), c in 0.01f64..100.0) {
        let ens = Ensemble::new(lambda.clone(), rho.clone()).unwrap();
        let scale = |m: &BTreeMap<usize, f64>| m.iter().map(|(&d, &v)| (d, v * c)).collect();
        let scaled = Ensemble::normalized(scale(&lambda), scale(&rho)).unwrap();
        prop_assert!((scaled.code_rate() - ens.code_rate()).abs() < 1e-12);
        prop_assert!(ens.code_rate() < 1.0);
    }

    #[test]
    fn uniform_puncturing_has_its_own_rate(lambda in distribution(), r in 0.0f64..0.95) {
        let ens = Ensemble::new(lambda, [(6, 1.0)].into()).unwrap();
        let pi = random_puncturing(r, &ens).unwrap();
        prop_assert!((puncturing_rate(&pi, &ens).unwrap() - r).abs() < 1e-12);
    }

    #[test]
    fn rate_set_is_consistent(r_s in 0.0f64..1.0, extra in 0.0f64..0.5, n in 100usize..50_000) {
        // Keep the mother rate above the puncturing rate.
        let r_m = (r_s / (1.0 + r_s) + extra + 0.01).min(1.0);
        let r = RateSet::derive(r_s, r_m, n).unwrap();
        prop_assert_eq!(r.n_prime, r.n + r.k);
        prop_assert!(r.k <= r.l && r.l <= r.n_prime);
        prop_assert!((r.r_p - r.r_s / (1.0 + r.r_s)).abs() < 1e-12);
        prop_assert!((r.r_d * (1.0 - r.r_p) - r.r_m).abs() < 1e-12);
        prop_assert_eq!(r.random_bits() + r.k, r.l);
        prop_assert!((r.k as f64 - n as f64 * r_s).abs() <= 0.5);
    }

    #[test]
    fn apportion_is_exhaustive_and_fair(total in 0usize..10_000, w in prop::collection::vec(0.0f64..10.0, 1..8)) {
        let c = apportion(total, &w);
        let s: f64 = w.iter().sum();
        if s > 0.0 {
            prop_assert_eq!(c.iter().sum::<usize>(), total);
            for (ci, wi) in c.iter().zip(&w) {
                prop_assert!((*ci as f64 - wi / s * total as f64).abs() < 1.0);
            }
        } else {
            prop_assert!(c.iter().all(|&x| x == 0));
        }
    }
}

#[test]
fn mother_rates_of_the_presets() {
    assert_abs_diff_eq!(presets::equal_power_mother().code_rate(), 0.3333, epsilon = 2e-3);
    assert_abs_diff_eq!(presets::unequal_power_mother_user1().code_rate(), 0.4451, epsilon = 2e-3);
    assert_abs_diff_eq!(presets::unequal_power_mother_user2().code_rate(), 0.2215, epsilon = 2e-3);
}

#[test]
fn equal_power_distribution_punctures_a_quarter() {
    let r = puncturing_rate(&presets::equal_power_puncturing(), &presets::equal_power_mother()).unwrap();
    assert_abs_diff_eq!(r, 0.25, epsilon = 3e-3);
}

#[test]
fn data_files_match_presets() {
    let close_ens = |a: &Ensemble, b: &Ensemble| {
        assert_eq!(a.lambda().keys().collect::<Vec<_>>(), b.lambda().keys().collect::<Vec<_>>());
        for (d, c) in a.lambda() {
            assert_abs_diff_eq!(*c, b.lambda()[d], epsilon = 1e-12);
        }
        assert_eq!(a.rho().len(), b.rho().len());
        for (d, c) in a.rho() {
            assert_abs_diff_eq!(*c, b.rho()[d], epsilon = 1e-12);
        }
    };
    close_ens(&load_ensemble(data("equal_mother.toml")).unwrap(), &presets::equal_power_mother());
    close_ens(&load_ensemble(data("unequal_mother_user1.toml")).unwrap(), &presets::unequal_power_mother_user1());
    close_ens(&load_ensemble(data("unequal_mother_user2.toml")).unwrap(), &presets::unequal_power_mother_user2());

    let close_pi = |a: &PuncturingDistribution, b: &PuncturingDistribution| assert!(a.max_abs_diff(b) < 1e-12);
    let (pi, note) = load_puncturing(data("equal_puncturing.toml")).unwrap();
    close_pi(&pi, &presets::equal_power_puncturing());
    assert_eq!(note.sigma_target, Some(presets::EQUAL_POWER_DESIGN_SIGMA));
    close_pi(&load_puncturing(data("unequal_puncturing_user1.toml")).unwrap().0, &presets::unequal_power_puncturing_user1());
    close_pi(&load_puncturing(data("unequal_puncturing_user2.toml")).unwrap().0, &presets::unequal_power_puncturing_user2());
}

#[test]
fn rate_tuples_of_the_scenarios() {
    // Tolerance: one unit in the last printed decimal.
    let r = RateSet::derive(0.3333, 0.3333, 10_000).unwrap();
    assert_eq!(r.n_prime, 13333);
    assert_abs_diff_eq!(r.r_p, 0.25, epsilon = 1e-4);
    assert_abs_diff_eq!(r.r_d, 0.4444, epsilon = 1e-4);
    let r = RateSet::derive(0.4451, 0.4451, 10_000).unwrap();
    assert_eq!(r.n_prime, 14451);
    assert_abs_diff_eq!(r.r_p, 0.308, epsilon = 1e-3);
    assert_abs_diff_eq!(r.r_d, 0.6432, epsilon = 1e-4);
    let r = RateSet::derive(0.2215, 0.2215, 10_000).unwrap();
    assert!(r.n_prime.abs_diff(12216) <= 1);
    assert_abs_diff_eq!(r.r_p, 0.1814, epsilon = 1e-4);
    assert_abs_diff_eq!(r.r_d, 0.2706, epsilon = 1e-4);
}
