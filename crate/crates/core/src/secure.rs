//! Secure encoding by puncturing the secret message.
//!
//! Each codeword of the mother code carries `l - k` random bits and `k`
//! secret bits; the secret bits are never transmitted. A puncturing
//! distribution decides which variable-node degrees the secret block
//! occupies.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::codegraph::{SystematicEncoder, TannerGraph};
use crate::ensembles::{apportion, PuncturingDistribution};
use crate::error::{Error, Result};
use crate::rng::seeded;

/// Number of fresh random selections tried when a pattern cannot be
/// realized as a set of message positions.
pub const PATTERN_ATTEMPTS: usize = 16;

/// Sorted set of punctured variable nodes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PuncturePattern {
    indices: Vec<usize>,
    per_degree: BTreeMap<usize, usize>,
}

impl PuncturePattern {
    /// Pattern from explicit node indices.
    pub fn from_indices(g: &TannerGraph, mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InfeasiblePattern("duplicate punctured index".into()));
        }
        if let Some(&bad) = indices.last().filter(|&&i| i >= g.n_vars()) {
            return Err(Error::InfeasiblePattern(format!("index {bad} out of range")));
        }
        let mut per_degree = BTreeMap::new();
        for &i in &indices {
            *per_degree.entry(g.var_degree(i)).or_insert(0) += 1;
        }
        Ok(PuncturePattern { indices, per_degree })
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// Punctured node count by variable degree.
    pub fn per_degree(&self) -> &BTreeMap<usize, usize> {
        &self.per_degree
    }

    pub fn contains(&self, v: usize) -> bool {
        self.indices.binary_search(&v).is_ok()
    }

    /// One index per line.
    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        for i in &self.indices {
            writeln!(w, "{i}")?;
        }
        Ok(())
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let f = std::fs::File::create(path)?;
        self.write_to(std::io::BufWriter::new(f))
    }

    pub fn read_from(g: &TannerGraph, r: impl BufRead, origin: &Path) -> Result<Self> {
        let mut idx = Vec::new();
        for (no, line) in r.lines().enumerate() {
            let line = line?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            idx.push(t.parse().map_err(|_| Error::Parse {
                path: origin.to_path_buf(),
                detail: format!("line {}: not an index: {t:?}", no + 1),
            })?);
        }
        Self::from_indices(g, idx)
    }

    pub fn load(g: &TannerGraph, path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let f = std::fs::File::open(path)?;
        Self::read_from(g, std::io::BufReader::new(f), path)
    }
}

/// Per-degree puncture quotas summing to `k`.
///
/// Weights are `pi_i * N_i` for the `N_i` degree-`i` nodes of `g`, scaled
/// to `k` by largest remainder.
pub fn pattern_quotas(
    pi: &PuncturingDistribution,
    g: &TannerGraph,
    k: usize,
) -> Result<BTreeMap<usize, usize>> {
    let hist = g.var_degree_histogram();
    for (d, p) in pi.iter() {
        if p > 0.0 && !hist.contains_key(&d) {
            return Err(Error::InfeasiblePattern(format!(
                "pi puts {p} on degree {d}, which the graph lacks"
            )));
        }
    }
    let degrees: Vec<usize> = hist.keys().copied().collect();
    let weights: Vec<f64> = degrees.iter().map(|d| pi.get(*d) * hist[d] as f64).collect();
    if k > 0 && weights.iter().sum::<f64>() <= 0.0 {
        return Err(Error::InfeasiblePattern(format!("{k} punctures requested with zero pi")));
    }
    let counts = apportion(k, &weights);
    let mut out = BTreeMap::new();
    for (d, c) in degrees.into_iter().zip(counts) {
        if c > hist[&d] {
            return Err(Error::InfeasiblePattern(format!(
                "{c} degree-{d} punctures requested but only {} such nodes exist",
                hist[&d]
            )));
        }
        if c > 0 {
            out.insert(d, c);
        }
    }
    Ok(out)
}

/// Draws a pattern of `k` nodes meeting the per-degree quotas.
pub fn select_pattern(
    pi: &PuncturingDistribution,
    g: &TannerGraph,
    k: usize,
    seed: u64,
) -> Result<PuncturePattern> {
    let quotas = pattern_quotas(pi, g, k)?;
    let mut rng = seeded(seed);
    let by_degree = g.vars_by_degree();
    let mut picked = Vec::with_capacity(k);
    for (d, &q) in &quotas {
        let mut nodes = by_degree[d].clone();
        nodes.shuffle(&mut rng);
        picked.extend_from_slice(&nodes[..q]);
    }
    PuncturePattern::from_indices(g, picked)
}

/// A stochastic encoder with a fixed secret block.
#[derive(Debug, Clone)]
pub struct SecureEncoder {
    encoder: SystematicEncoder,
    pattern: PuncturePattern,
    transmitted: Vec<usize>,
}

/// Output of [`SecureEncoder::encode`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecureCodeword {
    /// Mother codeword `x'`, indexed by variable node.
    pub full: Vec<u8>,
    /// Transmitted bits `x`, the unpunctured part of `full` in node order.
    pub transmitted: Vec<u8>,
    pub secret: Vec<u8>,
    pub random: Vec<u8>,
}

impl SecureEncoder {
    /// Secret bits occupy exactly the punctured nodes.
    pub fn punctured(g: &TannerGraph, pattern: PuncturePattern) -> Result<Self> {
        let encoder = SystematicEncoder::new(g, pattern.indices())?;
        Ok(Self::assemble(g, encoder, pattern))
    }

    /// Selects a pattern for `pi` and builds the encoder, redrawing the
    /// pattern when the chosen nodes cannot all be message positions.
    pub fn design(g: &TannerGraph, pi: &PuncturingDistribution, k: usize, seed: u64) -> Result<Self> {
        let mut last = None;
        for attempt in 0..PATTERN_ATTEMPTS as u64 {
            let pattern = select_pattern(pi, g, k, seed.wrapping_add(attempt.wrapping_mul(0x9e37_79b9)))?;
            match Self::punctured(g, pattern) {
                Ok(enc) => return Ok(enc),
                Err(e @ Error::InfeasiblePattern(_)) => {
                    log::debug!("pattern attempt {attempt} rejected: {e}");
                    last = Some(e);
                }
                Err(e) => return Err(e),
            }
        }
        Err(last.unwrap())
    }

    /// Baseline without puncturing: the last `k` message positions carry
    /// the secret and every bit is transmitted.
    pub fn unpunctured(g: &TannerGraph, k: usize) -> Result<Self> {
        let encoder = crate::codegraph::build_systematic_encoder(g)?.with_secret_count(k)?;
        Ok(Self::assemble(g, encoder, PuncturePattern::default()))
    }

    fn assemble(g: &TannerGraph, encoder: SystematicEncoder, pattern: PuncturePattern) -> Self {
        let transmitted = (0..g.n_vars()).filter(|&v| !pattern.contains(v)).collect();
        SecureEncoder { encoder, pattern, transmitted }
    }

    pub fn encoder(&self) -> &SystematicEncoder {
        &self.encoder
    }

    pub fn pattern(&self) -> &PuncturePattern {
        &self.pattern
    }

    /// Unpunctured variable nodes in transmission order.
    pub fn transmitted_positions(&self) -> &[usize] {
        &self.transmitted
    }

    pub fn secret_len(&self) -> usize {
        self.encoder.secret_len()
    }

    pub fn random_len(&self) -> usize {
        self.encoder.message_len() - self.encoder.secret_len()
    }

    pub fn transmitted_len(&self) -> usize {
        self.transmitted.len()
    }

    /// Encodes `secret` together with fresh random bits drawn from `rng`.
    pub fn encode<R: Rng + ?Sized>(&self, secret: &[u8], rng: &mut R) -> Result<SecureCodeword> {
        let random: Vec<u8> = (0..self.random_len()).map(|_| rng.random::<bool>() as u8).collect();
        self.encode_with(secret, &random)
    }

    /// Deterministic variant with caller-supplied random bits.
    pub fn encode_with(&self, secret: &[u8], random: &[u8]) -> Result<SecureCodeword> {
        if secret.len() != self.secret_len() {
            return Err(Error::Argument(format!(
                "secret has {} bits, expected {}",
                secret.len(),
                self.secret_len()
            )));
        }
        if random.len() != self.random_len() {
            return Err(Error::Argument(format!(
                "random block has {} bits, expected {}",
                random.len(),
                self.random_len()
            )));
        }
        let msg: Vec<u8> = random.iter().chain(secret).copied().collect();
        let full = self.encoder.encode(&msg)?;
        let transmitted = self.transmitted.iter().map(|&v| full[v]).collect();
        Ok(SecureCodeword { full, transmitted, secret: secret.to_vec(), random: random.to_vec() })
    }

    /// Secret block of a decided mother codeword.
    pub fn extract_secret(&self, full: &[u8]) -> Vec<u8> {
        self.encoder.extract_secret(full)
    }
}

/// Free-function form of [`SecureEncoder::encode`].
pub fn secure_encode<R: Rng + ?Sized>(secret: &[u8], enc: &SecureEncoder, rng: &mut R) -> Result<SecureCodeword> {
    enc.encode(secret, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codegraph::construct_graph;
    use crate::ensembles::{random_puncturing, Ensemble};

    fn graph() -> (Ensemble, TannerGraph) {
        let ens = Ensemble::from_pairs(&[(2, 0.3), (3, 0.4), (6, 0.3)], &[(6, 1.0)]).unwrap();
        let g = construct_graph(&ens, 400, 9).unwrap();
        (ens, g)
    }

    #[test]
    fn zero_pattern() {
        let (_, g) = graph();
        let p = select_pattern(&PuncturingDistribution::zero(), &g, 0, 1).unwrap();
        assert!(p.is_empty());
    }

    #[test]
    fn quotas_sum_to_k() {
        let (ens, g) = graph();
        let pi = random_puncturing(0.2, &ens).unwrap();
        let q = pattern_quotas(&pi, &g, 80).unwrap();
        assert_eq!(q.values().sum::<usize>(), 80);
        for (d, n) in g.var_degree_histogram() {
            assert!((q[&d] as f64 - 0.2 * n as f64).abs() <= 1.0);
        }
    }

    #[test]
    fn overfull_quota_is_infeasible() {
        let (_, g) = graph();
        let pi = PuncturingDistribution::from_pairs(&[(6, 1.0)]).unwrap();
        assert!(matches!(pattern_quotas(&pi, &g, 300), Err(Error::InfeasiblePattern(_))));
    }

    #[test]
    fn secret_is_punctured_and_recoverable() {
        let (ens, g) = graph();
        let pi = random_puncturing(0.2, &ens).unwrap();
        let enc = SecureEncoder::design(&g, &pi, 80, 5).unwrap();
        let mut rng = seeded(1);
        let secret: Vec<u8> = (0..80).map(|i| (i % 3 == 0) as u8).collect();
        let a = enc.encode(&secret, &mut rng).unwrap();
        let b = enc.encode(&secret, &mut rng).unwrap();
        assert!(g.is_codeword(&a.full) && g.is_codeword(&b.full));
        assert_eq!(a.transmitted.len(), 320);
        assert_ne!(a.transmitted, b.transmitted);
        assert_eq!(enc.extract_secret(&a.full), secret);
        for &v in enc.pattern().indices() {
            assert!(!enc.transmitted_positions().contains(&v));
        }
    }

    #[test]
    fn pattern_text_round_trip() {
        let (ens, g) = graph();
        let pi = random_puncturing(0.1, &ens).unwrap();
        let p = select_pattern(&pi, &g, 40, 2).unwrap();
        let mut buf = Vec::new();
        p.write_to(&mut buf).unwrap();
        let q = PuncturePattern::read_from(&g, &buf[..], Path::new("mem")).unwrap();
        assert_eq!(p, q);
    }
}
