use gmacwt::ensembles::{presets, puncturing_rate, PuncturingDistribution};
use gmacwt::exit::ExitSystem;
use gmacwt::optimizer::{alternate, optimize_pi, OptimizerConfig, Schedule};

const SIGMA: f64 = 0.9151;

#[test]
fn single_user_design_respects_every_bound_and_converges() {
    let ens = presets::equal_power_mother();
    let zero = PuncturingDistribution::zero();
    let cfg = OptimizerConfig::default();
    let design = optimize_pi(&ens, &zero, &ens, [1.0, 1.0], 1, SIGMA, &cfg).unwrap();
    assert!(design.feasible);
    for (d, v) in design.pi.iter() {
        assert!((0.0..=1.0).contains(&v), "degree {d}: {v}");
        assert!(ens.lambda().contains_key(&d), "degree {d} is not in the ensemble");
    }
    let rate = puncturing_rate(&design.pi, &ens).unwrap();
    assert!((rate - design.rate).abs() < 1e-9);
    assert!(rate <= ens.code_rate() + 1e-12);
    assert!(rate > 0.0);
    let sys = ExitSystem::new([&ens, &ens], [&design.pi, &zero], [1.0, 1.0]).unwrap();
    assert!(sys.converges(SIGMA));
}

#[test]
fn one_round_from_zero_is_a_design_against_zero() {
    let ens = presets::equal_power_mother();
    let cfg = OptimizerConfig { schedule: Schedule::Sequential, ..OptimizerConfig::default() };
    let out = alternate([&ens, &ens], [1.0, 1.0], SIGMA, 1, &cfg).unwrap();
    let alone = optimize_pi(&ens, &PuncturingDistribution::zero(), &ens, [1.0, 1.0], 1, SIGMA, &cfg).unwrap();
    assert_eq!(out.rounds, 1);
    assert!((out.history[0][0] - alone.rate).abs() < 1e-12);
}

#[test]
fn equal_users_get_equal_designs_and_falls_are_flagged() {
    let ens = presets::equal_power_mother();
    let out = alternate([&ens, &ens], [1.0, 1.0], SIGMA, 20, &OptimizerConfig::default()).unwrap();
    assert!(out.pi[0].max_abs_diff(&out.pi[1]) <= 1e-3);
    let falls = out.history.windows(2).any(|w| (0..2).any(|j| w[1][j] < w[0][j] - 1e-12));
    assert_eq!(falls, out.non_monotone);
    // The first round is designed against an unpunctured opponent, so the
    // second one has to give some of its rate back; after that the rates
    // only grow.
    assert!(out.history.windows(2).skip(1).all(|w| w[1][0] >= w[0][0] - 1e-12), "history {:?}", out.history);
    let sys = ExitSystem::new([&ens, &ens], [&out.pi[0], &out.pi[1]], [1.0, 1.0]).unwrap();
    assert!(sys.converges(SIGMA));
}
