mod common;

use std::collections::HashSet;

use common::toy_code;
use gmacwt::codegraph::{build_systematic_encoder, construct_graph, TannerGraph};
use gmacwt::ensembles::presets;
use gmacwt::secure::{pattern_quotas, PuncturePattern, SecureEncoder};
use proptest::prelude::*;

/// Rank of the parity-check matrix by plain row reduction.
fn gf2_rank(g: &TannerGraph) -> usize {
    let mut rows: Vec<Vec<u8>> = (0..g.n_checks())
        .map(|c| {
            let mut r = vec![0u8; g.n_vars()];
            for &v in g.check_neighbors(c) {
                r[v as usize] ^= 1;
            }
            r
        })
        .collect();
    let mut rank = 0;
    for col in 0..g.n_vars() {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][col] == 1) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (i, r) in rows.iter_mut().enumerate() {
            if i != rank && r[col] == 1 {
                r.iter_mut().zip(&pivot).for_each(|(a, b)| *a ^= b);
            }
        }
        rank += 1;
    }
    rank
}

fn xor(a: &[u8], b: &[u8]) -> Vec<u8> {
    a.iter().zip(b).map(|(x, y)| x ^ y).collect()
}

#[test]
fn toy_encoder_is_a_bijection_onto_the_code() {
    let toy = toy_code(20, 3, 1);
    let l = toy.encoder.encoder().message_len();
    assert_eq!(l, toy.graph.n_vars() - gf2_rank(&toy.graph));
    let words: HashSet<Vec<u8>> = toy.codewords.iter().map(|(w, _)| w.clone()).collect();
    assert_eq!(words.len(), 1 << l);
    assert!(words.iter().all(|w| toy.graph.is_codeword(w)));
}

#[test]
fn secrets_index_disjoint_cosets_of_a_subcode() {
    let toy = toy_code(20, 3, 2);
    let s = toy.encoder.secret_len();
    let coset = |secret: &[u8]| -> HashSet<Vec<u8>> {
        toy.codewords.iter().filter(|(_, m)| m == secret).map(|(w, _)| w.clone()).collect()
    };
    let zero = coset(&vec![0; s]);
    // The secret-zero codewords form a linear subcode.
    for a in &zero {
        for b in &zero {
            assert!(zero.contains(&xor(a, b)));
        }
    }
    let mut union = HashSet::new();
    for sv in 0..1usize << s {
        let secret: Vec<u8> = (0..s).map(|i| ((sv >> i) & 1) as u8).collect();
        let c = coset(&secret);
        assert_eq!(c.len(), zero.len());
        let rep = c.iter().next().unwrap();
        let shifted: HashSet<Vec<u8>> = zero.iter().map(|z| xor(z, rep)).collect();
        assert_eq!(shifted, c);
        for w in &c {
            assert!(union.insert(w.clone()), "cosets overlap");
        }
    }
    assert_eq!(union.len(), toy.codewords.len());
}

#[test]
fn secret_bits_sit_on_punctured_nodes() {
    let g = construct_graph(&presets::equal_power_mother(), 800, 5).unwrap();
    let pi = presets::equal_power_puncturing();
    let enc = SecureEncoder::design(&g, &pi, 200, 3).unwrap();
    let (_, _, secret_cols) = enc.encoder().layout();
    let mut a = secret_cols.to_vec();
    a.sort_unstable();
    assert_eq!(a, enc.pattern().indices());
    assert!(enc.transmitted_positions().iter().all(|&v| !enc.pattern().contains(v)));
    assert_eq!(enc.transmitted_len() + enc.secret_len(), g.n_vars());
    assert_eq!(enc.pattern().per_degree(), &pattern_quotas(&pi, &g, 200).unwrap());
}

#[test]
fn patterns_survive_a_file_round_trip() {
    let g = construct_graph(&presets::equal_power_mother(), 400, 5).unwrap();
    let enc = SecureEncoder::design(&g, &presets::equal_power_puncturing(), 100, 3).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pattern.txt");
    enc.pattern().save(&path).unwrap();
    assert_eq!(&PuncturePattern::load(&g, &path).unwrap(), enc.pattern());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn encoding_is_linear_and_systematic(seed in 0u64..1000, bits_a in prop::collection::vec(0u8..2, 200), bits_b in prop::collection::vec(0u8..2, 200)) {
        let g = construct_graph(&presets::equal_power_mother(), 300, seed % 7).unwrap();
        let enc = build_systematic_encoder(&g).unwrap();
        let l = enc.message_len();
        let a: Vec<u8> = bits_a.iter().cycle().take(l).copied().collect();
        let b: Vec<u8> = bits_b.iter().rev().cycle().take(l).copied().collect();
        let xa = enc.encode(&a).unwrap();
        let xb = enc.encode(&b).unwrap();
        let xab = enc.encode(&xor(&a, &b)).unwrap();
        prop_assert_eq!(xab, xor(&xa, &xb));
        prop_assert!(g.is_codeword(&xa));
        let placed: Vec<u8> = enc.message_positions().map(|v| xa[v]).collect();
        prop_assert_eq!(placed, a);
    }

    #[test]
    fn distinct_messages_give_distinct_codewords(flip in 0usize..1000) {
        let g = construct_graph(&presets::equal_power_mother(), 300, 1).unwrap();
        let enc = build_systematic_encoder(&g).unwrap();
        let l = enc.message_len();
        let zero = vec![0u8; l];
        let mut m = zero.clone();
        m[flip % l] = 1;
        prop_assert_ne!(enc.encode(&m).unwrap(), enc.encode(&zero).unwrap());
    }
}
