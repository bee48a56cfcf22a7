//! Progressive edge growth (PEG) construction of irregular Tanner graphs.
//!
//! Variable nodes are processed from the highest degree down. Each new edge
//! goes to a check node that is unreachable from the variable node in the
//! current graph, or, when every open check node is reachable, to one at the
//! largest distance. Ties prefer the check with the most remaining capacity
//! and are then broken uniformly at random.

use rand::Rng;

use super::TannerGraph;
use crate::ensembles::{apportion, Ensemble};
use crate::error::{Error, Result};
use crate::rng::seeded;

/// Node degrees realising an ensemble at a given length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSequence {
    /// Degree of each variable node, non-decreasing.
    pub var_degrees: Vec<usize>,
    /// Target degree of each check node.
    pub check_degrees: Vec<usize>,
}

/// Rounds an ensemble to integer node counts.
///
/// Both sides are apportioned by largest remainder. The edge-count mismatch
/// is absorbed on the check side, first by moving nodes between the two most
/// numerous check degrees and then by changing single check degrees by one.
pub fn degree_sequence(ens: &Ensemble, n_vars: usize) -> Result<DegreeSequence> {
    let node = ens.node_perspective();
    let v_degs: Vec<usize> = node.keys().copied().collect();
    let v_counts = apportion(n_vars, &node.values().copied().collect::<Vec<_>>());
    let var_degrees: Vec<usize> = v_degs
        .iter()
        .zip(&v_counts)
        .flat_map(|(&d, &c)| std::iter::repeat_n(d, c))
        .collect();
    let edges: usize = var_degrees.iter().sum();

    let m = (n_vars as f64 * ens.check_ratio()).round() as usize;
    if m == 0 {
        return Err(Error::Construction("ensemble yields no check nodes".into()));
    }
    let cnode = ens.check_node_perspective();
    let c_degs: Vec<usize> = cnode.keys().copied().collect();
    let mut c_counts = apportion(m, &cnode.values().copied().collect::<Vec<_>>());
    let mut delta = edges as i64
        - c_degs.iter().zip(&c_counts).map(|(&d, &c)| (d * c) as i64).sum::<i64>();

    if c_degs.len() >= 2 {
        let mut order: Vec<usize> = (0..c_degs.len()).collect();
        order.sort_by(|&a, &b| c_counts[b].cmp(&c_counts[a]).then(a.cmp(&b)));
        let (lo, hi) = if c_degs[order[0]] < c_degs[order[1]] {
            (order[0], order[1])
        } else {
            (order[1], order[0])
        };
        let step = (c_degs[hi] - c_degs[lo]) as i64;
        let moves = delta / step;
        if moves > 0 {
            let t = (moves as usize).min(c_counts[lo]);
            c_counts[lo] -= t;
            c_counts[hi] += t;
            delta -= t as i64 * step;
        } else if moves < 0 {
            let t = ((-moves) as usize).min(c_counts[hi]);
            c_counts[hi] -= t;
            c_counts[lo] += t;
            delta += t as i64 * step;
        }
    }

    let mut check_degrees: Vec<usize> = c_degs
        .iter()
        .zip(&c_counts)
        .flat_map(|(&d, &c)| std::iter::repeat_n(d, c))
        .collect();
    if delta.unsigned_abs() as usize > m {
        return Err(Error::Construction(format!(
            "edge-count mismatch of {delta} between variable and check sides"
        )));
    }
    // Spread the residual over evenly spaced checks.
    let r = delta.unsigned_abs() as usize;
    if r > 0 {
        let stride = m / r;
        for j in 0..r {
            let c = j * stride;
            if delta > 0 {
                check_degrees[c] += 1;
            } else {
                if check_degrees[c] <= 2 {
                    return Err(Error::Construction("check degree would drop below 2".into()));
                }
                check_degrees[c] -= 1;
            }
        }
    }
    debug_assert_eq!(check_degrees.iter().sum::<usize>(), edges);
    Ok(DegreeSequence { var_degrees, check_degrees })
}

struct Peg<'a, R: Rng> {
    seq: &'a DegreeSequence,
    var_checks: Vec<Vec<u32>>,
    check_vars: Vec<Vec<u32>>,
    open_checks: usize,
    check_mark: Vec<u32>,
    var_mark: Vec<u32>,
    stamp: u32,
    rng: R,
}

impl<R: Rng> Peg<'_, R> {
    fn capacity(&self, c: usize) -> usize {
        self.seq.check_degrees[c] - self.check_vars[c].len()
    }

    fn add_edge(&mut self, v: usize, c: usize) {
        self.var_checks[v].push(c as u32);
        self.check_vars[c].push(v as u32);
        if self.capacity(c) == 0 {
            self.open_checks -= 1;
        }
    }

    /// Check nodes eligible for the next edge of `v`.
    fn candidates(&mut self, v: usize) -> Vec<u32> {
        self.stamp += 1;
        let stamp = self.stamp;
        self.var_mark[v] = stamp;
        let mut frontier = vec![v as u32];
        let mut reached_open = 0usize;
        loop {
            let mut level: Vec<u32> = Vec::new();
            for &u in &frontier {
                for &c in &self.var_checks[u as usize] {
                    let ci = c as usize;
                    if self.check_mark[ci] != stamp {
                        self.check_mark[ci] = stamp;
                        level.push(c);
                        if self.capacity(ci) > 0 {
                            reached_open += 1;
                        }
                    }
                }
            }
            if level.is_empty() {
                // Expansion stalled: every unreached open check qualifies.
                return (0..self.check_vars.len() as u32)
                    .filter(|&c| self.check_mark[c as usize] != stamp && self.capacity(c as usize) > 0)
                    .collect();
            }
            if reached_open == self.open_checks {
                return level
                    .into_iter()
                    .filter(|&c| self.capacity(c as usize) > 0)
                    .collect();
            }
            frontier.clear();
            for &c in &level {
                for &u in &self.check_vars[c as usize] {
                    if self.var_mark[u as usize] != stamp {
                        self.var_mark[u as usize] = stamp;
                        frontier.push(u);
                    }
                }
            }
        }
    }

    fn pick(&mut self, v: usize, mut cands: Vec<u32>) -> Result<usize> {
        cands.retain(|&c| !self.var_checks[v].contains(&c));
        if cands.is_empty() {
            cands = (0..self.check_vars.len() as u32)
                .filter(|&c| self.capacity(c as usize) > 0 && !self.var_checks[v].contains(&c))
                .collect();
        }
        let best = cands
            .iter()
            .map(|&c| self.capacity(c as usize))
            .max()
            .ok_or_else(|| Error::Construction(format!("no check node left for variable {v}")))?;
        let ties: Vec<u32> = cands
            .into_iter()
            .filter(|&c| self.capacity(c as usize) == best)
            .collect();
        Ok(ties[self.rng.random_range(0..ties.len())] as usize)
    }

    fn run(mut self) -> Result<TannerGraph> {
        let n = self.seq.var_degrees.len();
        // Highest degrees first, while the graph is still sparse.
        for v in (0..n).rev() {
            for _ in 0..self.seq.var_degrees[v] {
                let cands = self.candidates(v);
                let c = self.pick(v, cands)?;
                self.add_edge(v, c);
            }
        }
        if self.open_checks != 0 {
            return Err(Error::Construction(format!(
                "{} check nodes did not reach their target degree",
                self.open_checks
            )));
        }
        let m = self.check_vars.len();
        Ok(TannerGraph::from_adjacency(self.var_checks, m))
    }
}

/// Builds a Tanner graph with `n_vars` variable nodes realising `ens`.
///
/// Deterministic for a fixed `seed`. Variable nodes are indexed in order of
/// increasing degree.
pub fn construct_graph(ens: &Ensemble, n_vars: usize, seed: u64) -> Result<TannerGraph> {
    if n_vars < 2 {
        return Err(Error::Construction("need at least two variable nodes".into()));
    }
    let seq = degree_sequence(ens, n_vars)?;
    let m = seq.check_degrees.len();
    if seq.var_degrees.last().copied().unwrap_or(0) > m {
        return Err(Error::Construction(format!(
            "variable degree {} exceeds the {m} available check nodes",
            seq.var_degrees.last().unwrap()
        )));
    }
    let peg = Peg {
        seq: &seq,
        var_checks: seq.var_degrees.iter().map(|&d| Vec::with_capacity(d)).collect(),
        check_vars: seq.check_degrees.iter().map(|&d| Vec::with_capacity(d)).collect(),
        open_checks: m,
        check_mark: vec![0; m],
        var_mark: vec![0; n_vars],
        stamp: 0,
        rng: seeded(seed),
    };
    peg.run()
}
