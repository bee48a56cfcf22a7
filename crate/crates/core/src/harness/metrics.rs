//! BER curves, their CSV form, and the figures of merit derived from them.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::channel::Tap;
use crate::error::{Error, Result};

/// Two-sided 95% normal quantile used for the Wilson interval.
pub const WILSON_Z: f64 = 1.959_963_984_540_054;

/// Half-width of the Wilson score interval for `errors` out of `n`.
pub fn wilson_halfwidth(errors: u64, n: u64, z: f64) -> f64 {
    if n == 0 {
        return 0.5;
    }
    let n = n as f64;
    let p = errors as f64 / n;
    let z2 = z * z;
    z / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt()
}

/// One noise level of a measured curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerPoint {
    pub sigma2: f64,
    pub snr_db: f64,
    /// Bit-error rate on the secret block.
    pub ber: f64,
    pub fer: f64,
    pub trials: u64,
    pub errors: u64,
    pub ci_halfwidth: f64,
}

impl BerPoint {
    pub fn from_counts(sigma2: f64, snr_db: f64, trials: u64, bits_per_frame: u64, errors: u64, frame_errors: u64) -> Self {
        let bits = trials * bits_per_frame;
        let ber = if bits == 0 { 0.0 } else { errors as f64 / bits as f64 };
        let fer = if trials == 0 { 0.0 } else { frame_errors as f64 / trials as f64 };
        BerPoint {
            sigma2,
            snr_db,
            ber,
            fer,
            trials,
            errors,
            ci_halfwidth: wilson_halfwidth(errors, bits, WILSON_Z),
        }
    }

    /// BER used on logit scales. Error-free points sit at the centre of
    /// their Wilson interval rather than at zero.
    fn floored_ber(&self) -> f64 {
        let lo = if self.ber > 0.0 { self.ber } else { self.ci_halfwidth.max(1e-15) };
        lo.min(1.0 - 1e-15)
    }
}

/// Secret-message BER of one user at one receiver over a noise grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BerCurve {
    pub scenario: String,
    /// 1-based user index.
    pub user: usize,
    pub tap: Tap,
    /// Sorted by increasing `sigma2`.
    pub points: Vec<BerPoint>,
}

#[derive(Debug, Serialize, Deserialize)]
struct Row {
    scenario: String,
    user: usize,
    tap: String,
    sigma2: f64,
    snr_db: f64,
    ber: f64,
    fer: f64,
    trials: u64,
    errors: u64,
    ci_halfwidth: f64,
}

/// Writes curves in the `scenario,user,tap,sigma2,snr_db,ber,fer,trials,errors,ci_halfwidth` schema.
pub fn write_curves(curves: &[BerCurve], w: impl Write) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for c in curves {
        for p in &c.points {
            out.serialize(Row {
                scenario: c.scenario.clone(),
                user: c.user,
                tap: c.tap.name().to_string(),
                sigma2: p.sigma2,
                snr_db: p.snr_db,
                ber: p.ber,
                fer: p.fer,
                trials: p.trials,
                errors: p.errors,
                ci_halfwidth: p.ci_halfwidth,
            })?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Reads curves back, grouping rows by `(scenario, user, tap)` in order of
/// first appearance.
pub fn read_curves(r: impl Read) -> Result<Vec<BerCurve>> {
    let mut curves: Vec<BerCurve> = Vec::new();
    for row in csv::Reader::from_reader(r).deserialize() {
        let row: Row = row?;
        let tap: Tap = row.tap.parse()?;
        let point = BerPoint {
            sigma2: row.sigma2,
            snr_db: row.snr_db,
            ber: row.ber,
            fer: row.fer,
            trials: row.trials,
            errors: row.errors,
            ci_halfwidth: row.ci_halfwidth,
        };
        match curves
            .iter_mut()
            .find(|c| c.scenario == row.scenario && c.user == row.user && c.tap == tap)
        {
            Some(c) => c.points.push(point),
            None => curves.push(BerCurve { scenario: row.scenario, user: row.user, tap, points: vec![point] }),
        }
    }
    for c in &mut curves {
        c.points.sort_by(|a, b| a.sigma2.total_cmp(&b.sigma2));
    }
    Ok(curves)
}

pub fn read_curves_file(path: impl AsRef<std::path::Path>) -> Result<Vec<BerCurve>> {
    read_curves(std::fs::File::open(path)?)
}

fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

/// Crossing of `target` between two points, linear in (ln sigma2, logit BER).
fn crossing(a: &BerPoint, b: &BerPoint, target: f64) -> f64 {
    let (ya, yb, yt) = (logit(a.floored_ber()), logit(b.floored_ber()), logit(target));
    let (xa, xb) = (a.sigma2.ln(), b.sigma2.ln());
    if (yb - ya).abs() < 1e-300 {
        return a.sigma2;
    }
    let t = ((yt - ya) / (yb - ya)).clamp(0.0, 1.0);
    (xa + t * (xb - xa)).exp()
}

fn check_curve(c: &BerCurve, side: &'static str) -> Result<()> {
    if c.points.len() < 2 {
        return Err(Error::Range { side, detail: format!("{side} curve has fewer than two points") });
    }
    if c.points.iter().any(|p| !(p.sigma2 > 0.0)) {
        return Err(Error::Range { side, detail: format!("{side} curve needs positive noise variances") });
    }
    Ok(())
}

/// Largest noise variance at which `curve` still has BER at most `p_max`.
pub fn reliability_threshold(curve: &BerCurve, p_max: f64, side: &'static str) -> Result<f64> {
    check_curve(curve, side)?;
    let pts = &curve.points;
    let Some(i) = pts.iter().rposition(|p| p.ber <= p_max) else {
        return Err(Error::Range { side, detail: format!("{side} BER never drops to {p_max:e}") });
    };
    if i + 1 == pts.len() {
        return Err(Error::Range {
            side,
            detail: format!("{side} BER stays below {p_max:e} up to sigma2 {}", pts[i].sigma2),
        });
    }
    Ok(crossing(&pts[i], &pts[i + 1], p_max))
}

/// Smallest noise variance at which `curve` has BER at least `p_min`.
pub fn confusion_threshold(curve: &BerCurve, p_min: f64, side: &'static str) -> Result<f64> {
    check_curve(curve, side)?;
    let pts = &curve.points;
    let Some(i) = pts.iter().position(|p| p.ber >= p_min) else {
        return Err(Error::Range { side, detail: format!("{side} BER never reaches {p_min}") });
    };
    if i == 0 {
        return Err(Error::Range {
            side,
            detail: format!("{side} BER is already {} at the lowest sigma2 {}", pts[0].ber, pts[0].sigma2),
        });
    }
    Ok(crossing(&pts[i - 1], &pts[i], p_min))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapReport {
    pub sigma2_b_max: f64,
    pub sigma2_e_min: f64,
    pub gap_db: f64,
}

/// Security gap `10 log10(sigma2_Emin / sigma2_Bmax)`.
pub fn security_gap(bob: &BerCurve, eve: &BerCurve, p_b_max: f64, p_e_min: f64) -> Result<GapReport> {
    let sigma2_b_max = reliability_threshold(bob, p_b_max, "bob")?;
    let sigma2_e_min = confusion_threshold(eve, p_e_min, "eve")?;
    Ok(GapReport { sigma2_b_max, sigma2_e_min, gap_db: 10.0 * (sigma2_e_min / sigma2_b_max).log10() })
}

/// Extra SNR (dB) the punctured scheme needs to reach `p_b_max` compared
/// with the baseline.
pub fn snr_loss(punctured: &BerCurve, baseline: &BerCurve, p_b_max: f64) -> Result<f64> {
    let s_p = reliability_threshold(punctured, p_b_max, "punctured")?;
    let s_b = reliability_threshold(baseline, p_b_max, "baseline")?;
    Ok(10.0 * (s_b / s_p).log10())
}

/// Achieved sum secrecy rate against a Gaussian sum-rate proxy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumRateReport {
    /// `0.5 log2(1 + P/sigma_B^2) - 0.5 log2(1 + P/sigma_E^2)`, floored at 0.
    /// A proxy upper bound, not the exact secrecy region.
    pub bound: f64,
    pub achieved: f64,
    /// `bound - achieved`.
    pub gap: f64,
}

pub const SUM_RATE_LABEL: &str = "Gaussian sum-rate proxy (upper-bound style, not the exact secrecy region)";

pub fn sum_rate_comparison(p1: f64, p2: f64, sigma2_b: f64, sigma2_e: f64, achieved: [f64; 2]) -> Result<SumRateReport> {
    if !(sigma2_b > 0.0 && sigma2_e > 0.0) {
        return Err(Error::Argument("noise variances must be positive".into()));
    }
    let p = p1 + p2;
    let c = |s2: f64| 0.5 * (1.0 + p / s2).log2();
    let bound = (c(sigma2_b) - c(sigma2_e)).max(0.0);
    let achieved = achieved[0] + achieved[1];
    Ok(SumRateReport { bound, achieved, gap: bound - achieved })
}

/// A grid point where the Eve BER ordering optimized >= random >= none fails.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderingViolation {
    pub sigma2: f64,
    pub optimized: f64,
    pub random: f64,
    pub unpunctured: f64,
}

/// Checks the Eve BER ordering on the noise levels shared by all three
/// curves. `slack` absorbs Monte Carlo noise.
pub fn ordering_violations(optimized: &BerCurve, random: &BerCurve, unpunctured: &BerCurve, slack: f64) -> Vec<OrderingViolation> {
    let find = |c: &BerCurve, s: f64| {
        c.points.iter().find(|p| (p.sigma2 - s).abs() <= 1e-12 * s.abs().max(1.0)).map(|p| p.ber)
    };
    optimized
        .points
        .iter()
        .filter_map(|p| {
            let r = find(random, p.sigma2)?;
            let u = find(unpunctured, p.sigma2)?;
            let ok = p.ber + slack >= r && r + slack >= u;
            (!ok).then_some(OrderingViolation { sigma2: p.sigma2, optimized: p.ber, random: r, unpunctured: u })
        })
        .collect()
}
