//! Every example, run once with small parameters.

#[path = "../examples/rate_algebra.rs"]
mod rate_algebra;
#[path = "../examples/build_code.rs"]
mod build_code;
#[path = "../examples/secure_encoding.rs"]
mod secure_encoding;
#[path = "../examples/joint_decoding.rs"]
mod joint_decoding;
#[path = "../examples/exit_threshold.rs"]
mod exit_threshold;
#[path = "../examples/exit_trajectory.rs"]
mod exit_trajectory;
#[path = "../examples/design_puncturing.rs"]
mod design_puncturing;
#[path = "../examples/ber_sweep.rs"]
mod ber_sweep;
#[path = "../examples/security_gap.rs"]
mod security_gap;
#[path = "../examples/sum_rate.rs"]
mod sum_rate;

#[test]
fn rate_algebra_lists_three_users() {
    assert_eq!(rate_algebra::run().unwrap().len(), 3);
}

#[test]
fn build_code_writes_an_alist() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("code.alist");
    build_code::run(600, Some(path.to_str().unwrap())).unwrap();
    assert!(std::fs::metadata(&path).unwrap().len() > 0);
}

#[test]
fn secure_encoding_round_trips() {
    secure_encoding::run(800).unwrap();
}

#[test]
fn joint_decoding_recovers_a_clean_frame() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    assert!(joint_decoding::run(1000, 0.05, Some(trace.to_str().unwrap())).unwrap());
    assert!(std::fs::read_to_string(&trace).unwrap().starts_with("iteration,user"));
}

#[test]
fn exit_thresholds_are_ordered() {
    let t = exit_threshold::run().unwrap();
    assert_eq!(t.len(), 5);
    assert!(t[0].1 > t[1].1 && t[1].1 > t[2].1);
}

#[test]
fn exit_trajectory_converges_below_threshold() {
    assert!(exit_trajectory::run(0.7, None).unwrap());
    assert!(!exit_trajectory::run(1.1, None).unwrap());
}

#[test]
fn design_puncturing_runs_two_rounds() {
    let out = design_puncturing::run([0.9151, 0.8998], 2).unwrap();
    assert_eq!(out.len(), 2);
    assert!(out.iter().all(|o| o.rounds <= 2));
}

#[test]
fn ber_sweep_small_config() {
    let curves = ber_sweep::run(None, None).unwrap();
    assert_eq!(curves.len(), 2);
    assert!(curves.iter().all(|c| c.points[0].errors == 0));
}

#[test]
fn security_gap_puts_unpunctured_far_above_optimized() {
    let (opt, unp) = security_gap::run(1000).unwrap();
    assert!(unp > opt);
}

#[test]
fn sum_rate_bounds_dominate() {
    for r in sum_rate::run().unwrap() {
        assert!(r.gap >= -1e-12 && r.bound >= r.achieved);
    }
}
