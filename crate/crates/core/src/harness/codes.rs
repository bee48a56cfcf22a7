//! Building the two users' codes for an experiment.

use std::path::{Path, PathBuf};

use crate::codegraph::{construct_graph, read_alist, write_alist, TannerGraph};
use crate::ensembles::{
    ensemble_to_string, puncturing_rate, random_puncturing, Ensemble, Perspective,
    PuncturingDistribution, RateSet,
};
use crate::error::{Error, Result};
use crate::secure::SecureEncoder;

use super::config::{ExperimentConfig, PuncturingMode};

/// One user's finite-length code.
#[derive(Debug, Clone)]
pub struct UserCode {
    pub ensemble: Ensemble,
    pub rates: RateSet,
    /// Per-degree puncturing fractions; `None` for the unpunctured baseline.
    pub pi: Option<PuncturingDistribution>,
    pub graph: TannerGraph,
    pub encoder: SecureEncoder,
}

impl UserCode {
    /// Transmitted bits per frame.
    pub fn n(&self) -> usize {
        self.encoder.transmitted_len()
    }
}

/// 64-bit FNV-1a.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Cache file for the graph of `ens` with `n_vars` nodes and `seed`.
pub fn graph_cache_path(dir: &Path, ens: &Ensemble, n_vars: usize, seed: u64) -> PathBuf {
    let key = fnv1a(ensemble_to_string(ens, Perspective::Edge).as_bytes());
    dir.join(format!("peg-{key:016x}-{n_vars}-{seed}.alist"))
}

/// Constructs a graph, reusing a cached copy in `cache_dir` when present.
pub fn cached_graph(
    ens: &Ensemble,
    n_vars: usize,
    seed: u64,
    cache_dir: Option<&Path>,
) -> Result<TannerGraph> {
    let Some(dir) = cache_dir else {
        return construct_graph(ens, n_vars, seed);
    };
    let path = graph_cache_path(dir, ens, n_vars, seed);
    if path.exists() {
        match read_alist(&path) {
            Ok(g) if g.n_vars() == n_vars => return Ok(g),
            Ok(_) => log::warn!("{} has the wrong size, rebuilding", path.display()),
            Err(e) => log::warn!("ignoring unreadable cache {}: {e}", path.display()),
        }
    }
    let g = construct_graph(ens, n_vars, seed)?;
    std::fs::create_dir_all(dir)?;
    // Write then rename so that concurrent runs never read half a file.
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    write_alist(&g, &tmp)?;
    std::fs::rename(&tmp, &path)?;
    Ok(g)
}

/// Builds one user's code from explicit parameters.
pub fn build_user_code(
    ensemble: &Ensemble,
    r_s: f64,
    r_m: f64,
    n: usize,
    mode: PuncturingMode,
    pi_file: Option<&PuncturingDistribution>,
    graph_seed: u64,
    pattern_seed: u64,
    cache_dir: Option<&Path>,
) -> Result<UserCode> {
    let rates = RateSet::derive(r_s, r_m, n)?;
    match mode {
        PuncturingMode::None => {
            let graph = cached_graph(ensemble, n, graph_seed, cache_dir)?;
            let encoder = SecureEncoder::unpunctured(&graph, rates.k)?;
            Ok(UserCode { ensemble: ensemble.clone(), rates, pi: None, graph, encoder })
        }
        PuncturingMode::Optimized | PuncturingMode::Random => {
            let pi = match mode {
                PuncturingMode::Optimized => pi_file
                    .cloned()
                    .ok_or_else(|| Error::Config("optimized puncturing needs a distribution".into()))?,
                _ => random_puncturing(rates.r_p, ensemble)?,
            };
            pi.validate_for(ensemble)?;
            let realised = puncturing_rate(&pi, ensemble)?;
            if (realised - rates.r_p).abs() > 0.02 {
                log::warn!(
                    "puncturing distribution removes {realised:.4} of the nodes but the rates ask for {:.4}",
                    rates.r_p
                );
            }
            let graph = cached_graph(ensemble, rates.n_prime, graph_seed, cache_dir)?;
            let encoder = SecureEncoder::design(&graph, &pi, rates.k, pattern_seed)?;
            Ok(UserCode { ensemble: ensemble.clone(), rates, pi: Some(pi), graph, encoder })
        }
    }
}

/// Builds both users' codes described by `cfg`.
pub fn build_codes(cfg: &ExperimentConfig) -> Result<[UserCode; 2]> {
    let build = |j: usize| -> Result<UserCode> {
        let ens = cfg.ensemble(j)?;
        let r_m = cfg.mother_rates.map_or_else(|| ens.code_rate(), |r| r[j]);
        let pi = cfg.puncturing_distribution(j)?;
        build_user_code(
            &ens,
            cfg.secure_rates[j],
            r_m,
            cfg.n,
            cfg.puncturing,
            pi.as_ref(),
            cfg.graph_seed.wrapping_add(j as u64),
            cfg.pattern_seed.wrapping_add(j as u64),
            cfg.cache_dir.as_deref(),
        )
    };
    let (a, b) = rayon::join(|| build(0), || build(1));
    let codes = [a?, b?];
    if codes[0].n() != codes[1].n() {
        return Err(Error::Config(format!(
            "users transmit different frame lengths ({} and {})",
            codes[0].n(),
            codes[1].n()
        )));
    }
    Ok(codes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::presets;

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let ens = presets::equal_power_mother();
        let a = cached_graph(&ens, 300, 5, Some(dir.path())).unwrap();
        assert!(graph_cache_path(dir.path(), &ens, 300, 5).exists());
        let b = cached_graph(&ens, 300, 5, Some(dir.path())).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn fnv_reference_values() {
        assert_eq!(fnv1a(b""), 0xcbf2_9ce4_8422_2325);
        assert_eq!(fnv1a(b"a"), 0xaf63_dc4c_8601_ec8c);
    }

    #[test]
    fn modes_give_expected_lengths() {
        let ens = presets::equal_power_mother();
        let r_m = ens.code_rate();
        let none = build_user_code(&ens, 0.2, r_m, 300, PuncturingMode::None, None, 1, 1, None).unwrap();
        assert_eq!(none.graph.n_vars(), 300);
        assert_eq!(none.n(), 300);
        assert_eq!(none.encoder.secret_len(), 60);
        let rnd = build_user_code(&ens, 0.2, r_m, 300, PuncturingMode::Random, None, 1, 1, None).unwrap();
        assert_eq!(rnd.graph.n_vars(), 360);
        assert_eq!(rnd.n(), 300);
        assert_eq!(rnd.encoder.pattern().len(), 60);
    }
}
