mod common;

use std::path::Path;

use gmacwt::channel::{snr_db, Tap};
use gmacwt::harness::{
    read_curves, run_sweep, security_gap, write_curves, BerCurve, BerPoint, ExperimentConfig,
};
use proptest::prelude::*;

fn curve(tap: Tap, sigma2: &[f64], ber: &[f64]) -> BerCurve {
    let points = sigma2
        .iter()
        .zip(ber)
        .map(|(&s, &b)| BerPoint {
            sigma2: s,
            snr_db: snr_db(1.0, 1.0, s),
            ber: b,
            fer: b.min(1.0),
            trials: 100,
            errors: (b * 1e5) as u64,
            ci_halfwidth: 1e-6,
        })
        .collect();
    BerCurve { scenario: "synthetic".into(), user: 1, tap, points }
}

/// Strictly increasing noise variances with strictly increasing BERs.
fn monotone_curve() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (3usize..12).prop_flat_map(|n| {
        (
            prop::collection::vec(0.01f64..0.5, n),
            prop::collection::vec(0.01f64..1.0, n),
            0.01f64..1.0,
            1e-6f64..1e-3,
        )
            .prop_map(|(ds, db, s0, b0)| {
                let mut s = vec![s0];
                let mut b = vec![b0];
                for (x, y) in ds.iter().zip(&db).skip(1) {
                    s.push(s.last().unwrap() * (1.0 + x));
                    b.push(b.last().unwrap() + y);
                }
                let top = *b.last().unwrap();
                let b = b.iter().map(|v| v / top * 0.5).collect();
                (s, b)
            })
    })
}

proptest! {
    #[test]
    fn shifting_a_curve_shifts_the_gap_exactly((s, b) in monotone_curve(), delta in 0.0f64..20.0, q in 0.05f64..0.95) {
        let p = b[0] + q * (b[b.len() - 1] - b[0]);
        let factor = 10f64.powf(delta / 10.0);
        let shifted: Vec<f64> = s.iter().map(|v| v * factor).collect();
        let g = security_gap(&curve(Tap::Bob, &s, &b), &curve(Tap::Eve, &shifted, &b), p, p).unwrap();
        prop_assert!((g.gap_db - delta).abs() < 1e-9, "{} vs {}", g.gap_db, delta);
    }

    #[test]
    fn gap_in_variances_is_the_snr_difference((s, b) in monotone_curve(), stretch in 1.0f64..30.0, p1 in 0.1f64..3.0, p2 in 0.1f64..3.0) {
        let far: Vec<f64> = s.iter().map(|v| v * stretch).collect();
        let mid = 0.5 * (b[0] + b[b.len() - 1]);
        let g = security_gap(&curve(Tap::Bob, &s, &b), &curve(Tap::Eve, &far, &b), b[0] + 1e-9, mid).unwrap();
        let by_snr = snr_db(p1, p2, g.sigma2_b_max) - snr_db(p1, p2, g.sigma2_e_min);
        prop_assert!((g.gap_db - by_snr).abs() < 1e-9);
    }
}

fn small_config(extra: &str) -> ExperimentConfig {
    let text = format!(
        r#"
scenario = "small"
n = 800
powers = [1.5, 0.5]
secure_rates = [0.3, 0.2]
ensembles = ["preset:equal-mother", "preset:equal-mother"]
puncturing = "random"
taps = ["bob", "eve"]
min_errors = 1000000
seed = 21
graph_seed = 3
pattern_seed = 4
cache_dir = "{}"
{extra}
"#,
        common::cache_dir().display()
    );
    ExperimentConfig::parse(&text, Path::new(".")).unwrap()
}

#[test]
fn noiseless_channel_gives_no_errors() {
    let cfg = small_config("sigma2 = [0.0]\nmax_frames = 4");
    let curves = run_sweep(&cfg).unwrap();
    assert_eq!(curves.len(), 4);
    for c in &curves {
        assert_eq!(c.points.len(), 1);
        assert_eq!(c.points[0].errors, 0, "user {} {:?}", c.user, c.tap);
        assert_eq!(c.points[0].trials, 4);
    }
}

#[test]
fn worker_count_does_not_change_the_csv() {
    let mut bytes = Vec::new();
    for threads in [1, 3] {
        let mut cfg = small_config("sigma2 = [0.3, 0.6, 1.2]\nmax_frames = 10\nbatch_cap = 4");
        cfg.threads = Some(threads);
        let mut out = Vec::new();
        write_curves(&run_sweep(&cfg).unwrap(), &mut out).unwrap();
        bytes.push(out);
    }
    assert_eq!(bytes[0], bytes[1]);
    let curves = read_curves(bytes[0].as_slice()).unwrap();
    for p in curves.iter().flat_map(|c| &c.points) {
        assert!(p.ber >= 0.0 && p.ber <= 0.5 + 3.0 * p.ci_halfwidth, "BER {} at sigma2 {}", p.ber, p.sigma2);
        assert_eq!(p.trials, 10);
    }
}

#[test]
fn csv_has_the_documented_columns() {
    let c = curve(Tap::Eve, &[0.1, 0.2], &[0.01, 0.3]);
    let mut out = Vec::new();
    write_curves(&[c.clone()], &mut out).unwrap();
    let text = String::from_utf8(out.clone()).unwrap();
    assert_eq!(text.lines().next().unwrap(), "scenario,user,tap,sigma2,snr_db,ber,fer,trials,errors,ci_halfwidth");
    assert_eq!(read_curves(out.as_slice()).unwrap(), vec![c]);
}
