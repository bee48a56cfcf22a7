//! BPSK mapping and the two-user Gaussian multiple-access wiretap channel.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Which receiver observes the superposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tap {
    Bob,
    Eve,
}

impl Tap {
    pub fn name(self) -> &'static str {
        match self {
            Tap::Bob => "bob",
            Tap::Eve => "eve",
        }
    }
}

impl std::str::FromStr for Tap {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bob" => Ok(Tap::Bob),
            "eve" => Ok(Tap::Eve),
            other => Err(Error::Argument(format!("unknown tap {other:?}"))),
        }
    }
}

/// Transmit powers and the two noise variances (all linear).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub p1: f64,
    pub p2: f64,
    pub sigma2_bob: f64,
    pub sigma2_eve: f64,
}

impl ChannelParams {
    pub fn new(p1: f64, p2: f64, sigma2_bob: f64, sigma2_eve: f64) -> Result<Self> {
        if !(p1 > 0.0 && p2 > 0.0) {
            return Err(Error::Argument(format!("powers must be positive, got ({p1}, {p2})")));
        }
        if !(sigma2_bob >= 0.0 && sigma2_eve >= 0.0) {
            return Err(Error::Argument("noise variances must be non-negative".into()));
        }
        if sigma2_eve < sigma2_bob {
            log::warn!(
                "eavesdropper noise {sigma2_eve} is below the legitimate noise {sigma2_bob}; channel is not degraded"
            );
        }
        Ok(ChannelParams { p1, p2, sigma2_bob, sigma2_eve })
    }

    /// Same noise variance at both receivers; handy for single-tap sweeps.
    pub fn symmetric(p1: f64, p2: f64, sigma2: f64) -> Result<Self> {
        Self::new(p1, p2, sigma2, sigma2)
    }

    pub fn sigma2(&self, tap: Tap) -> f64 {
        match tap {
            Tap::Bob => self.sigma2_bob,
            Tap::Eve => self.sigma2_eve,
        }
    }

    /// Amplitudes `(sqrt p1, sqrt p2)`.
    pub fn amplitudes(&self) -> (f64, f64) {
        (self.p1.sqrt(), self.p2.sqrt())
    }

    /// Sum power over noise variance, in dB.
    pub fn snr_db(&self, tap: Tap) -> f64 {
        snr_db(self.p1, self.p2, self.sigma2(tap))
    }
}

/// `10 log10((p1 + p2) / sigma2)`.
pub fn snr_db(p1: f64, p2: f64, sigma2: f64) -> f64 {
    10.0 * ((p1 + p2) / sigma2).log10()
}

/// Noise variance giving `snr` dB of sum power over noise.
pub fn sigma2_from_snr_db(p1: f64, p2: f64, snr: f64) -> f64 {
    (p1 + p2) / 10f64.powf(snr / 10.0)
}

/// Maps bit 0 to +1 and bit 1 to -1.
pub fn bpsk(bits: &[u8]) -> Vec<f64> {
    bits.iter().map(|&b| if b == 0 { 1.0 } else { -1.0 }).collect()
}

/// Inverse of [`bpsk`] by sign (non-negative maps to 0).
pub fn bpsk_demap(symbols: &[f64]) -> Vec<u8> {
    symbols.iter().map(|&s| u8::from(s < 0.0)).collect()
}

/// `y_i = sqrt(p1) x1_i + sqrt(p2) x2_i + n_i` with `n_i ~ N(0, sigma^2)` of
/// the selected tap.
pub fn transmit<R: Rng + ?Sized>(
    x1: &[f64],
    x2: &[f64],
    params: &ChannelParams,
    tap: Tap,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if x1.len() != x2.len() {
        return Err(Error::Argument(format!(
            "user signals differ in length: {} vs {}",
            x1.len(),
            x2.len()
        )));
    }
    let (a, b) = params.amplitudes();
    let sd = params.sigma2(tap).sqrt();
    Ok(x1
        .iter()
        .zip(x2)
        .map(|(&u, &v)| {
            let noise: f64 = if sd > 0.0 { rng.sample::<f64, _>(StandardNormal) * sd } else { 0.0 };
            a * u + b * v + noise
        })
        .collect())
}
