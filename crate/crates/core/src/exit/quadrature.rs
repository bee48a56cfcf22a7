//! Gaussian expectations: Gauss-Hermite and Gauss-Legendre rules and the
//! expectation of the softplus function under a normal law.

use std::sync::OnceLock;

#[inline]
pub(crate) fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// Nodes and weights of the `n`-point rule, nodes ascending.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussHermite {
    /// Computes the rule by Newton iteration on the orthonormal Hermite
    /// recurrence.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let pim4 = std::f64::consts::PI.powf(-0.25);
        let mut x = vec![0.0; n];
        let mut w = vec![0.0; n];
        let half = n.div_ceil(2);
        let mut z = 0.0f64;
        for i in 0..half {
            z = match i {
                0 => (2.0 * n as f64 + 1.0).sqrt() - 1.85575 * (2.0 * n as f64 + 1.0).powf(-1.0 / 6.0),
                1 => z - 1.14 * (n as f64).powf(0.426) / z,
                2 => 1.86 * z - 0.86 * x[0],
                3 => 1.91 * z - 0.91 * x[1],
                _ => 2.0 * z - x[i - 2],
            };
            let mut pp = 0.0;
            for _ in 0..100 {
                let mut p1 = pim4;
                let mut p2 = 0.0;
                for j in 0..n {
                    let p3 = p2;
                    p2 = p1;
                    p1 = z * (2.0 / (j + 1) as f64).sqrt() * p2 - (j as f64 / (j + 1) as f64).sqrt() * p3;
                }
                pp = (2.0 * n as f64).sqrt() * p2;
                let dz = p1 / pp;
                z -= dz;
                if dz.abs() <= 1e-14 * z.abs().max(1.0) {
                    break;
                }
            }
            x[i] = z;
            x[n - 1 - i] = -z;
            w[i] = 2.0 / (pp * pp);
            w[n - 1 - i] = w[i];
        }
        x.reverse();
        w.reverse();
        GaussHermite { nodes: x, weights: w }
    }

    /// `integral exp(-z^2) f(z) dz`.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&z, &w)| w * f(z)).sum()
    }

    /// `E[f(X)]` for `X ~ N(mean, var)`.
    pub fn expect(&self, mean: f64, var: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let s = (2.0 * var).sqrt();
        self.integrate(|z| f(mean + s * z)) / std::f64::consts::PI.sqrt()
    }
}

/// Default quadrature order.
pub const ORDER: usize = 128;
/// Lower order used to confirm convergence.
pub const CHECK_ORDER: usize = 96;

pub fn default_rule() -> &'static GaussHermite {
    static RULE: OnceLock<GaussHermite> = OnceLock::new();
    RULE.get_or_init(|| GaussHermite::new(ORDER))
}

pub fn check_rule() -> &'static GaussHermite {
    static RULE: OnceLock<GaussHermite> = OnceLock::new();
    RULE.get_or_init(|| GaussHermite::new(CHECK_ORDER))
}

/// Nodes and weights of the `n`-point rule on `[-1, 1]`, nodes ascending.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Computes the rule by Newton iteration on the Legendre recurrence.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut x = vec![0.0; n];
        let mut w = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (mut p1, mut p2) = (1.0, 0.0);
                for j in 0..n {
                    let p3 = p2;
                    p2 = p1;
                    p1 = ((2 * j + 1) as f64 * z * p2 - j as f64 * p3) / (j + 1) as f64;
                }
                dp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
                let dz = p1 / dp;
                z -= dz;
                if dz.abs() <= 1e-15 {
                    break;
                }
            }
            x[i] = -z;
            x[n - 1 - i] = z;
            w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
            w[n - 1 - i] = w[i];
        }
        GaussLegendre { nodes: x, weights: w }
    }
}

/// Order of the Gauss-Legendre panels.
pub const PANEL_ORDER: usize = 8;

fn panel_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(PANEL_ORDER))
}

/// Standard deviation above which [`softplus_expectation`] splits the
/// integrand instead of applying Gauss-Hermite to it directly.
pub const SPLIT_SIGMA: f64 = 1.0;
/// Length of the interval carrying the decaying part of the split.
const REMAINDER_SPAN: f64 = 40.0;

/// Node budget of a Gaussian expectation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resolution {
    /// Order-[`ORDER`] Hermite rule or unit-width panels.
    Default,
    /// Order-[`CHECK_ORDER`] Hermite rule or half-width panels.
    Check,
}

/// `E[softplus(Y)]` for `Y ~ N(mean, var)`.
///
/// For wide laws the integrand is written as `max(y, 0) + ln(1 + e^-|y|)`.
/// The first part has a closed form and the second, folded onto
/// `[0, 40]`, is integrated with composite Gauss-Legendre panels.
pub fn softplus_expectation(mean: f64, var: f64, res: Resolution) -> f64 {
    let s = var.sqrt();
    if s <= SPLIT_SIGMA {
        let rule = match res {
            Resolution::Default => default_rule(),
            Resolution::Check => check_rule(),
        };
        return rule.expect(mean, var, softplus);
    }
    let t = mean / s;
    let inv_sqrt_2pi = 0.5 * std::f64::consts::FRAC_2_SQRT_PI * std::f64::consts::FRAC_1_SQRT_2;
    let linear = 0.5 * mean * libm::erfc(-t * std::f64::consts::FRAC_1_SQRT_2) + s * inv_sqrt_2pi * (-0.5 * t * t).exp();
    let width = match res {
        Resolution::Default => 1.0,
        Resolution::Check => 0.5,
    };
    let rule = panel_rule();
    let panels = (REMAINDER_SPAN / width).round() as usize;
    let mut sum = 0.0;
    for k in 0..panels {
        let left = k as f64 * width;
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            let y = left + 0.5 * width * (1.0 + x);
            let density = (-0.5 * ((y - mean) / s).powi(2)).exp() + (-0.5 * ((y + mean) / s).powi(2)).exp();
            sum += w * (-y).exp().ln_1p() * density;
        }
    }
    linear + 0.5 * width * sum * inv_sqrt_2pi / s
}
