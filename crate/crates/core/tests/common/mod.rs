//! Helpers shared by the integration tests and the acceptance suite.
#![allow(dead_code)]

use std::path::PathBuf;

use gmacwt::codegraph::{construct_graph, TannerGraph};
use gmacwt::ensembles::{random_puncturing, Ensemble};
use gmacwt::secure::SecureEncoder;

/// Where full-size graphs are cached between test runs.
pub fn cache_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("graph-cache")
}

/// A tiny punctured code with every codeword listed.
pub struct ToyCode {
    pub graph: TannerGraph,
    pub encoder: SecureEncoder,
    /// `(full codeword, secret)` for every message.
    pub codewords: Vec<(Vec<u8>, Vec<u8>)>,
}

fn bits(mut v: usize, len: usize) -> Vec<u8> {
    (0..len)
        .map(|_| {
            let b = (v & 1) as u8;
            v >>= 1;
            b
        })
        .collect()
}

/// (3,5)-regular code of length `n_prime` with `k` punctured secret bits.
pub fn toy_code(n_prime: usize, k: usize, seed: u64) -> ToyCode {
    toy_code_with(&Ensemble::from_pairs(&[(3, 1.0)], &[(5, 1.0)]).unwrap(), n_prime, k, seed)
}

pub fn toy_code_with(ens: &Ensemble, n_prime: usize, k: usize, seed: u64) -> ToyCode {
    let graph = construct_graph(ens, n_prime, seed).unwrap();
    let pi = random_puncturing(k as f64 / n_prime as f64, ens).unwrap();
    let encoder = SecureEncoder::design(&graph, &pi, k, seed).unwrap();
    let (r, s) = (encoder.random_len(), encoder.secret_len());
    let mut codewords = Vec::new();
    for sv in 0..1usize << s {
        for rv in 0..1usize << r {
            let secret = bits(sv, s);
            let w = encoder.encode_with(&secret, &bits(rv, r)).unwrap();
            codewords.push((w.full, secret));
        }
    }
    ToyCode { graph, encoder, codewords }
}

/// Exhaustive joint ML decision over all codeword pairs; returns the secrets.
pub fn ml_secrets(codes: [&ToyCode; 2], y: &[f64], amps: (f64, f64)) -> [Vec<u8>; 2] {
    let signal = |c: &ToyCode, amp: f64| -> Vec<Vec<f64>> {
        let tx = c.encoder.transmitted_positions();
        c.codewords
            .iter()
            .map(|(full, _)| tx.iter().map(|&v| if full[v] == 0 { amp } else { -amp }).collect())
            .collect()
    };
    let s1 = signal(codes[0], amps.0);
    let s2 = signal(codes[1], amps.1);
    let mut best = (f64::INFINITY, 0, 0);
    for (i, u) in s1.iter().enumerate() {
        for (j, v) in s2.iter().enumerate() {
            let mut d = 0.0;
            for t in 0..y.len() {
                let e = y[t] - u[t] - v[t];
                d += e * e;
            }
            if d < best.0 {
                best = (d, i, j);
            }
        }
    }
    [codes[0].codewords[best.1].1.clone(), codes[1].codewords[best.2].1.clone()]
}
