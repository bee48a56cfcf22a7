//! Monte Carlo BER sweeps.
//!
//! Trial `t` at grid point `p` draws its secrets, random bits and noise from
//! streams keyed by `(seed, p, t, user, purpose)` only. Trials run in
//! batches of 1, 1, 2, 4, ... frames and the stopping rule is checked
//! between batches, so the set of trials simulated, and therefore every
//! count, is independent of the number of worker threads.

use rand::Rng;
use rayon::prelude::*;

use crate::channel::{bpsk, snr_db, transmit, ChannelParams, Tap};
use crate::decoder::JointDecoder;
use crate::error::{Error, Result};
use crate::rng::{stream, Purpose, StreamKey};

use super::codes::{build_codes, UserCode};
use super::config::ExperimentConfig;
use super::metrics::{BerCurve, BerPoint};

/// Stopping rule of one grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StopRule {
    /// Stop once every user has this many secret-bit errors.
    pub min_errors: u64,
    pub min_frames: u64,
    pub max_frames: u64,
    pub batch_cap: u64,
}

impl StopRule {
    pub fn from_config(cfg: &ExperimentConfig) -> Self {
        StopRule { min_errors: cfg.min_errors, min_frames: cfg.min_frames, max_frames: cfg.max_frames, batch_cap: cfg.batch_cap }
    }

    /// Size of the batch that follows `done` simulated frames.
    pub fn next_batch(&self, done: u64) -> u64 {
        done.max(1).min(self.batch_cap).min(self.max_frames - done)
    }

    fn satisfied(&self, done: u64, errors: [u64; 2]) -> bool {
        done >= self.max_frames || (done >= self.min_frames && errors.iter().all(|&e| e >= self.min_errors))
    }
}

/// Per-frame error counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FrameCounts {
    pub bit_errors: [u64; 2],
    pub frame_errors: [u64; 2],
    pub iterations: u64,
}

impl std::ops::AddAssign for FrameCounts {
    fn add_assign(&mut self, o: Self) {
        for j in 0..2 {
            self.bit_errors[j] += o.bit_errors[j];
            self.frame_errors[j] += o.frame_errors[j];
        }
        self.iterations += o.iterations;
    }
}

fn random_bits(len: usize, rng: &mut impl Rng) -> Vec<u8> {
    (0..len).map(|_| rng.random::<bool>() as u8).collect()
}

/// Simulates one frame at one receiver.
pub fn simulate_frame(
    codes: &[UserCode; 2],
    decoder: &mut JointDecoder,
    params: &ChannelParams,
    tap: Tap,
    seed: u64,
    point: u64,
    trial: u64,
) -> Result<FrameCounts> {
    let mut words = Vec::with_capacity(2);
    for (j, code) in codes.iter().enumerate() {
        let enc = &code.encoder;
        let mut rs = stream(seed, StreamKey::new(point, trial, j as u8, Purpose::Secret));
        let mut rm = stream(seed, StreamKey::new(point, trial, j as u8, Purpose::RandomMessage));
        let secret = random_bits(enc.secret_len(), &mut rs);
        let random = random_bits(enc.random_len(), &mut rm);
        words.push(enc.encode_with(&secret, &random)?);
    }
    let purpose = match tap {
        Tap::Bob => Purpose::BobNoise,
        Tap::Eve => Purpose::EveNoise,
    };
    let mut rn = stream(seed, StreamKey::new(point, trial, 0, purpose));
    let y = transmit(&bpsk(&words[0].transmitted), &bpsk(&words[1].transmitted), params, tap, &mut rn)?;
    let out = decoder.decode(&y, params, params.sigma2(tap))?;
    let mut counts = FrameCounts { iterations: out.iterations as u64, ..Default::default() };
    for j in 0..2 {
        let decided = codes[j].encoder.extract_secret(&out.bits[j]);
        let errs = decided.iter().zip(&words[j].secret).filter(|(a, b)| a != b).count() as u64;
        counts.bit_errors[j] = errs;
        counts.frame_errors[j] = u64::from(errs > 0);
    }
    Ok(counts)
}

/// Result of one grid point at one receiver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointResult {
    pub sigma2: f64,
    pub trials: u64,
    pub counts: FrameCounts,
}

/// Runs trials at one noise level until `rule` is met.
pub fn run_point(
    codes: &[UserCode; 2],
    decoder: &JointDecoder,
    powers: [f64; 2],
    sigma2: f64,
    tap: Tap,
    seed: u64,
    point: u64,
    rule: StopRule,
) -> Result<PointResult> {
    let params = ChannelParams::symmetric(powers[0], powers[1], sigma2)?;
    let mut total = FrameCounts::default();
    let mut done = 0u64;
    while !rule.satisfied(done, total.bit_errors) {
        let size = rule.next_batch(done);
        let batch: Vec<Result<FrameCounts>> = (done..done + size)
            .into_par_iter()
            .map_init(
                || decoder.clone(),
                |dec, t| simulate_frame(codes, dec, &params, tap, seed, point, t),
            )
            .collect();
        // Ordered reduction by trial index.
        for c in batch {
            total += c?;
        }
        done += size;
    }
    Ok(PointResult { sigma2, trials: done, counts: total })
}

/// Decoder for a pair of codes.
pub fn decoder_for(codes: &[UserCode; 2], max_iter: usize) -> Result<JointDecoder> {
    Ok(JointDecoder::new(
        [&codes[0].graph, &codes[1].graph],
        [codes[0].encoder.transmitted_positions(), codes[1].encoder.transmitted_positions()],
    )?
    .with_max_iter(max_iter))
}

/// Sweeps prebuilt codes over the configured grid.
pub fn run_sweep_with_codes(cfg: &ExperimentConfig, codes: &[UserCode; 2], rule: StopRule) -> Result<Vec<BerCurve>> {
    let grid = cfg.sigma2_grid()?;
    let taps = cfg.tap_list()?;
    let decoder = decoder_for(codes, cfg.max_iter)?;
    let mut curves = Vec::new();
    for &tap in &taps {
        let mut points: [Vec<BerPoint>; 2] = [Vec::new(), Vec::new()];
        for (i, &s2) in grid.iter().enumerate() {
            let r = run_point(codes, &decoder, cfg.powers, s2, tap, cfg.seed, i as u64, rule)?;
            log::info!(
                "{} {} sigma2={s2:.5} trials={} errors={:?} mean_iter={:.1}",
                cfg.scenario,
                tap.name(),
                r.trials,
                r.counts.bit_errors,
                r.counts.iterations as f64 / r.trials as f64
            );
            let snr = snr_db(cfg.powers[0], cfg.powers[1], s2);
            for j in 0..2 {
                points[j].push(BerPoint::from_counts(
                    s2,
                    snr,
                    r.trials,
                    codes[j].encoder.secret_len() as u64,
                    r.counts.bit_errors[j],
                    r.counts.frame_errors[j],
                ));
            }
        }
        for (j, pts) in points.into_iter().enumerate() {
            curves.push(BerCurve { scenario: cfg.scenario.clone(), user: j + 1, tap, points: pts });
        }
    }
    Ok(curves)
}

/// Builds the codes and runs the sweep described by `cfg`.
///
/// Construction errors surface before any frame is simulated. With
/// `cfg.threads` set, the sweep runs on a dedicated pool of that size.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<Vec<BerCurve>> {
    cfg.validate()?;
    let work = || -> Result<Vec<BerCurve>> {
        let codes = build_codes(cfg)?;
        run_sweep_with_codes(cfg, &codes, StopRule::from_config(cfg))
    };
    match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?
            .install(work),
        None => work(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn batches_double_up_to_the_cap() {
        let rule = StopRule { min_errors: 1, min_frames: 1, max_frames: 100, batch_cap: 16 };
        let mut done = 0;
        let mut sizes = Vec::new();
        while done < rule.max_frames {
            let b = rule.next_batch(done);
            sizes.push(b);
            done += b;
        }
        assert_eq!(&sizes[..7], &[1, 1, 2, 4, 8, 16, 16]);
        assert_eq!(done, 100);
    }
}
