//! Systematic encoding by Gaussian elimination over GF(2).
//!
//! The parity-check matrix is brought to reduced row-echelon form once per
//! code. Pivot columns carry parity bits; the remaining columns carry the
//! message. Columns reserved for the secret block are only used as pivots
//! as a last resort, and doing so is reported as an error.

use super::TannerGraph;
use crate::error::{Error, Result};

/// Maximum tolerated fraction of linearly dependent check rows.
pub const MAX_RANK_GAP_FRACTION: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Eq)]
struct BitRows {
    words: usize,
    data: Vec<u64>,
}

impl BitRows {
    fn new(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64);
        BitRows { words, data: vec![0; rows * words] }
    }

    fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.words..(r + 1) * self.words]
    }

    fn get(&self, r: usize, c: usize) -> bool {
        self.data[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    fn set(&mut self, r: usize, c: usize) {
        self.data[r * self.words + c / 64] |= 1 << (c % 64);
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for w in 0..self.words {
                self.data.swap(a * self.words + w, b * self.words + w);
            }
        }
    }

    /// `row[dst] ^= row[src]`.
    fn xor_into(&mut self, src: usize, dst: usize) {
        let w = self.words;
        let (s, d) = (src * w, dst * w);
        for i in 0..w {
            let v = self.data[s + i];
            self.data[d + i] ^= v;
        }
    }
}

fn pack(bits: impl Iterator<Item = u8>, len: usize) -> Vec<u64> {
    let mut out = vec![0u64; len.div_ceil(64)];
    for (i, b) in bits.enumerate() {
        if b & 1 == 1 {
            out[i / 64] |= 1 << (i % 64);
        }
    }
    out
}

/// Systematic encoder for the code defined by a Tanner graph.
///
/// Codewords are indexed by variable node. The logical layout is
/// `[p m' m]`: parity positions, then random-message positions, then the
/// `k` secret positions; [`SystematicEncoder::layout`] lists the variable
/// nodes of each block.
#[derive(Debug, Clone)]
pub struct SystematicEncoder {
    n: usize,
    parity_cols: Vec<usize>,
    random_cols: Vec<usize>,
    secret_cols: Vec<usize>,
    /// Row `r` gives parity bit `parity_cols[r]` as a mask over the message.
    generator: Vec<u64>,
    msg_words: usize,
    rank_gap: usize,
}

/// Encoder with no reserved columns; the top `k` message positions (by
/// index) can later be designated secret via [`SystematicEncoder::with_secret_count`].
pub fn build_systematic_encoder(g: &TannerGraph) -> Result<SystematicEncoder> {
    SystematicEncoder::new(g, &[])
}

impl SystematicEncoder {
    /// Builds an encoder in which `secret_cols` are message positions.
    pub fn new(g: &TannerGraph, secret_cols: &[usize]) -> Result<Self> {
        let n = g.n_vars();
        let mut reserved = vec![false; n];
        for &c in secret_cols {
            if c >= n {
                return Err(Error::Argument(format!("secret column {c} out of range")));
            }
            if std::mem::replace(&mut reserved[c], true) {
                return Err(Error::Argument(format!("secret column {c} listed twice")));
            }
        }
        // Column order: free columns ascending, then reserved ones.
        let order: Vec<usize> = (0..n)
            .filter(|&c| !reserved[c])
            .chain(secret_cols.iter().copied())
            .collect();
        let mut position = vec![0usize; n];
        for (p, &c) in order.iter().enumerate() {
            position[c] = p;
        }

        let m = g.n_checks();
        let mut h = BitRows::new(m, n);
        for c in 0..m {
            for &v in g.check_neighbors(c) {
                h.set(c, position[v as usize]);
            }
        }

        let mut pivot_of_row = Vec::with_capacity(m);
        let mut is_pivot = vec![false; n];
        let mut rank = 0;
        for col in 0..n {
            if rank == m {
                break;
            }
            let Some(p) = (rank..m).find(|&r| h.get(r, col)) else {
                continue;
            };
            h.swap_rows(rank, p);
            for r in 0..m {
                if r != rank && h.get(r, col) {
                    h.xor_into(rank, r);
                }
            }
            pivot_of_row.push(col);
            is_pivot[col] = true;
            rank += 1;
        }
        let gap = m - rank;
        if gap as f64 > MAX_RANK_GAP_FRACTION * m as f64 {
            return Err(Error::RankDeficient { gap, rows: m });
        }
        if gap > 0 {
            log::info!("removed {gap} dependent check rows of {m}");
        }
        let n_reserved = secret_cols.len();
        if let Some(p) = (n - n_reserved..n).find(|&p| is_pivot[p]) {
            return Err(Error::InfeasiblePattern(format!(
                "secret column {} is needed as a parity position",
                order[p]
            )));
        }

        // Message positions in permuted order: free non-pivots then reserved.
        let msg_positions: Vec<usize> = (0..n).filter(|&p| !is_pivot[p]).collect();
        let l = msg_positions.len();
        let msg_words = l.div_ceil(64);
        let mut generator = vec![0u64; rank * msg_words];
        for r in 0..rank {
            let row = h.row(r);
            for (j, &p) in msg_positions.iter().enumerate() {
                if row[p / 64] >> (p % 64) & 1 == 1 {
                    generator[r * msg_words + j / 64] |= 1 << (j % 64);
                }
            }
        }
        let parity_cols: Vec<usize> = pivot_of_row.iter().map(|&p| order[p]).collect();
        let random_cols: Vec<usize> = msg_positions
            .iter()
            .filter(|&&p| p < n - n_reserved)
            .map(|&p| order[p])
            .collect();
        Ok(SystematicEncoder {
            n,
            parity_cols,
            random_cols,
            secret_cols: secret_cols.to_vec(),
            generator,
            msg_words,
            rank_gap: gap,
        })
    }

    /// Redesignates the last `k` message positions (by index order) as the
    /// secret block. Only valid for encoders built without reservations.
    pub fn with_secret_count(mut self, k: usize) -> Result<Self> {
        let mut msg: Vec<usize> = self.random_cols.iter().chain(&self.secret_cols).copied().collect();
        if k > msg.len() {
            return Err(Error::Argument(format!("{k} secret bits exceed the {}-bit message", msg.len())));
        }
        let secret = msg.split_off(msg.len() - k);
        // Generator columns follow the message order, which is unchanged.
        self.random_cols = msg;
        self.secret_cols = secret;
        Ok(self)
    }

    /// Codeword length `n'`.
    pub fn codeword_len(&self) -> usize {
        self.n
    }

    /// Message length `l`.
    pub fn message_len(&self) -> usize {
        self.random_cols.len() + self.secret_cols.len()
    }

    /// Number of secret positions `k`.
    pub fn secret_len(&self) -> usize {
        self.secret_cols.len()
    }

    /// Number of dependent parity checks dropped during elimination.
    pub fn rank_gap(&self) -> usize {
        self.rank_gap
    }

    /// Variable nodes of the parity, random-message and secret blocks.
    pub fn layout(&self) -> (&[usize], &[usize], &[usize]) {
        (&self.parity_cols, &self.random_cols, &self.secret_cols)
    }

    /// Variable nodes carrying the message, in message order (`[m' m]`).
    pub fn message_positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.random_cols.iter().chain(&self.secret_cols).copied()
    }

    /// Encodes `msg = [m' m]` into a codeword indexed by variable node.
    pub fn encode(&self, msg: &[u8]) -> Result<Vec<u8>> {
        let l = self.message_len();
        if msg.len() != l {
            return Err(Error::Argument(format!(
                "message has {} bits, encoder expects {l}",
                msg.len()
            )));
        }
        let packed = pack(msg.iter().copied(), l);
        let mut x = vec![0u8; self.n];
        for (&b, pos) in msg.iter().zip(self.message_positions()) {
            x[pos] = b & 1;
        }
        for (r, &col) in self.parity_cols.iter().enumerate() {
            let row = &self.generator[r * self.msg_words..(r + 1) * self.msg_words];
            let ones: u32 = row.iter().zip(&packed).map(|(a, b)| (a & b).count_ones()).sum();
            x[col] = (ones & 1) as u8;
        }
        Ok(x)
    }

    /// Rearranges a codeword into the `[p m' m]` layout.
    pub fn to_layout(&self, x: &[u8]) -> Vec<u8> {
        self.parity_cols
            .iter()
            .chain(&self.random_cols)
            .chain(&self.secret_cols)
            .map(|&c| x[c])
            .collect()
    }

    /// Secret block of a codeword indexed by variable node.
    pub fn extract_secret(&self, x: &[u8]) -> Vec<u8> {
        self.secret_cols.iter().map(|&c| x[c]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codegraph::construct_graph;
    use crate::ensembles::Ensemble;
    use rand::Rng;

    fn toy() -> TannerGraph {
        let ens = Ensemble::from_pairs(&[(3, 1.0)], &[(6, 1.0)]).unwrap();
        construct_graph(&ens, 12, 3).unwrap()
    }

    #[test]
    fn zero_message_encodes_to_zero() {
        let g = toy();
        let enc = build_systematic_encoder(&g).unwrap();
        let x = enc.encode(&vec![0; enc.message_len()]).unwrap();
        assert!(x.iter().all(|&b| b == 0));
    }

    #[test]
    fn random_messages_satisfy_parity() {
        let ens = Ensemble::from_pairs(&[(2, 0.3), (3, 0.5), (8, 0.2)], &[(7, 1.0)]).unwrap();
        let g = construct_graph(&ens, 500, 11).unwrap();
        let enc = build_systematic_encoder(&g).unwrap();
        let mut rng = crate::rng::seeded(4);
        for _ in 0..100 {
            let msg: Vec<u8> = (0..enc.message_len()).map(|_| rng.random_range(0..2)).collect();
            let x = enc.encode(&msg).unwrap();
            assert!(g.is_codeword(&x));
            let lay = enc.to_layout(&x);
            assert_eq!(&lay[lay.len() - msg.len()..], &msg[..]);
        }
    }

    #[test]
    fn wrong_length() {
        let enc = build_systematic_encoder(&toy()).unwrap();
        assert!(matches!(enc.encode(&[0, 1]), Err(Error::Argument(_))));
    }

    #[test]
    fn reserved_columns_become_secret_positions() {
        let ens = Ensemble::from_pairs(&[(3, 1.0)], &[(6, 1.0)]).unwrap();
        let g = construct_graph(&ens, 240, 2).unwrap();
        let secret = vec![5, 17, 100, 239];
        let enc = SystematicEncoder::new(&g, &secret).unwrap();
        assert_eq!(enc.layout().2, &secret[..]);
        let mut msg = vec![0u8; enc.message_len()];
        let l = msg.len();
        msg[l - 3] = 1;
        let x = enc.encode(&msg).unwrap();
        assert!(g.is_codeword(&x));
        assert_eq!(enc.extract_secret(&x), vec![0, 1, 0, 0]);
    }
}
