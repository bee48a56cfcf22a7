//! The J function, mutual information of a consistent Gaussian LLR.

use std::sync::OnceLock;

use super::quadrature::{softplus_expectation, Resolution};
use crate::error::{Error, Result};

/// Largest standard deviation handled; `J(SIGMA_MAX)` equals one in double
/// precision.
pub const SIGMA_MAX: f64 = 40.0;

const STEP: f64 = 0.005;

/// `1 - J(sigma)` by direct quadrature.
fn complement(sigma: f64) -> f64 {
    if sigma == 0.0 {
        return 1.0;
    }
    softplus_expectation(-0.5 * sigma * sigma, sigma * sigma, Resolution::Default) / std::f64::consts::LN_2
}

/// Step of the central difference giving the tabulated slopes.
const SLOPE_STEP: f64 = 1e-5;

/// `1 - J(sigma)` and its derivative.
fn complement_and_slope(sigma: f64) -> (f64, f64) {
    let slope = (complement(sigma + SLOPE_STEP) - complement((sigma - SLOPE_STEP).abs())) / (2.0 * SLOPE_STEP);
    (complement(sigma), slope)
}

/// `J` by quadrature, without the tabulated fit.
pub fn j_exact(sigma: f64) -> f64 {
    1.0 - complement(sigma.abs())
}

struct Table {
    /// `1 - J` at `k * STEP`.
    value: Vec<f64>,
    /// `d(1 - J)/d sigma` at `k * STEP`.
    slope: Vec<f64>,
}

fn table() -> &'static Table {
    static T: OnceLock<Table> = OnceLock::new();
    T.get_or_init(|| {
        let n = (SIGMA_MAX / STEP).round() as usize + 1;
        let (value, slope) = (0..n).map(|k| complement_and_slope(k as f64 * STEP)).unzip();
        Table { value, slope }
    })
}

#[inline]
fn hermite(t: &Table, k: usize, u: f64) -> f64 {
    let (y0, y1) = (t.value[k], t.value[k + 1]);
    let (m0, m1) = (t.slope[k] * STEP, t.slope[k + 1] * STEP);
    let u2 = u * u;
    let u3 = u2 * u;
    (2.0 * u3 - 3.0 * u2 + 1.0) * y0 + (u3 - 2.0 * u2 + u) * m0 + (-2.0 * u3 + 3.0 * u2) * y1 + (u3 - u2) * m1
}

/// `1 - J(sigma)`, accurate for values near zero.
pub fn j_complement(sigma: f64) -> f64 {
    let s = sigma.abs();
    if s >= SIGMA_MAX {
        return 0.0;
    }
    let t = table();
    let x = s / STEP;
    let k = (x as usize).min(t.value.len() - 2);
    hermite(t, k, x - k as f64).clamp(0.0, 1.0)
}

/// Mutual information between a bit and its LLR `N(sigma^2/2, sigma^2)`.
pub fn j(sigma: f64) -> f64 {
    1.0 - j_complement(sigma)
}

/// Inverse of [`j`] with the cap: returns `SIGMA_MAX` for `mi >= 1`.
pub fn j_inv_capped(mi: f64) -> f64 {
    if mi <= 0.0 {
        return 0.0;
    }
    let target = 1.0 - mi;
    if target <= 0.0 {
        return SIGMA_MAX;
    }
    let t = table();
    // value is decreasing: find k with value[k] >= target > value[k+1].
    let k = t.value.partition_point(|&v| v >= target);
    if k == 0 {
        return 0.0;
    }
    if k >= t.value.len() {
        return SIGMA_MAX;
    }
    let k = k - 1;
    let (mut lo, mut hi) = (0.0, 1.0);
    let mut u = (t.value[k] - target) / (t.value[k] - t.value[k + 1]);
    for _ in 0..60 {
        let f = hermite(t, k, u) - target;
        if f == 0.0 {
            break;
        }
        if f > 0.0 {
            lo = u;
        } else {
            hi = u;
        }
        if hi - lo < 1e-15 {
            break;
        }
        let h = 1e-7;
        let df = (hermite(t, k, u + h) - hermite(t, k, u - h)) / (2.0 * h);
        let next = u - f / df;
        u = if df < 0.0 && next >= lo && next <= hi { next } else { 0.5 * (lo + hi) };
    }
    (k as f64 + u) * STEP
}

/// Inverse of [`j`] on `[0, 1)`.
pub fn j_inv(mi: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&mi) || mi.is_nan() {
        return Err(Error::Domain(format!("J inverse needs 0 <= I < 1, got {mi}")));
    }
    Ok(j_inv_capped(mi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn endpoints() {
        assert_eq!(j(0.0), 0.0);
        assert!(j(100.0) > 0.9999);
        assert_eq!(j_inv(0.0).unwrap(), 0.0);
        assert!(j_inv(1.0).is_err());
        assert_eq!(j_inv_capped(1.0), SIGMA_MAX);
    }

    #[test]
    fn fit_matches_quadrature() {
        let mut worst: f64 = 0.0;
        for k in 0..4000 {
            let s = k as f64 * 0.00731 + 0.0013;
            worst = worst.max((j(s) - j_exact(s)).abs());
        }
        assert!(worst < 1e-9, "{worst}");
    }

    #[test]
    fn round_trip() {
        for k in 1..1000 {
            let i = k as f64 * 0.000999;
            assert_abs_diff_eq!(j(j_inv(i).unwrap()), i, epsilon = 1e-9);
        }
        assert_abs_diff_eq!(j_inv(j(2.5)).unwrap(), 2.5, epsilon = 1e-9);
    }

    #[test]
    fn strictly_increasing() {
        let mut prev = -1.0;
        for k in 0..2000 {
            let v = j(k as f64 * 0.005);
            assert!(v > prev || v == 1.0);
            prev = v;
        }
    }
}
