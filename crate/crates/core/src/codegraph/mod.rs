//! Finite-length Tanner graphs and systematic encoding.

mod alist;
mod encoder;
mod peg;

pub use alist::{from_alist, read_alist, to_alist, write_alist};
pub use encoder::{build_systematic_encoder, SystematicEncoder};
pub use peg::{construct_graph, degree_sequence, DegreeSequence};

use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};

/// Bipartite graph between `n_vars` variable nodes and `n_checks` check nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TannerGraph {
    var_checks: Vec<Vec<u32>>,
    check_vars: Vec<Vec<u32>>,
}

impl TannerGraph {
    /// Builds a graph from `(variable, check)` edges, rejecting parallel edges.
    pub fn from_edges(n_vars: usize, n_checks: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut var_checks = vec![Vec::new(); n_vars];
        let mut check_vars = vec![Vec::new(); n_checks];
        for &(v, c) in edges {
            if v >= n_vars || c >= n_checks {
                return Err(Error::Construction(format!(
                    "edge ({v}, {c}) out of range for {n_vars}x{n_checks}"
                )));
            }
            var_checks[v].push(c as u32);
            check_vars[c].push(v as u32);
        }
        for (v, list) in var_checks.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Construction(format!("parallel edge at variable {v}")));
            }
        }
        for list in check_vars.iter_mut() {
            list.sort_unstable();
        }
        Ok(TannerGraph { var_checks, check_vars })
    }

    pub(crate) fn from_adjacency(var_checks: Vec<Vec<u32>>, n_checks: usize) -> Self {
        let mut check_vars = vec![Vec::new(); n_checks];
        for (v, list) in var_checks.iter().enumerate() {
            for &c in list {
                check_vars[c as usize].push(v as u32);
            }
        }
        let mut var_checks = var_checks;
        for list in var_checks.iter_mut() {
            list.sort_unstable();
        }
        TannerGraph { var_checks, check_vars }
    }

    pub fn n_vars(&self) -> usize {
        self.var_checks.len()
    }

    pub fn n_checks(&self) -> usize {
        self.check_vars.len()
    }

    pub fn n_edges(&self) -> usize {
        self.var_checks.iter().map(Vec::len).sum()
    }

    pub fn var_neighbors(&self, v: usize) -> &[u32] {
        &self.var_checks[v]
    }

    pub fn check_neighbors(&self, c: usize) -> &[u32] {
        &self.check_vars[c]
    }

    pub fn var_degree(&self, v: usize) -> usize {
        self.var_checks[v].len()
    }

    pub fn check_degree(&self, c: usize) -> usize {
        self.check_vars[c].len()
    }

    /// All edges as `(variable, check)`, variable-major.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.var_checks
            .iter()
            .enumerate()
            .flat_map(|(v, cs)| cs.iter().map(move |&c| (v, c as usize)))
            .collect()
    }

    /// Number of variable nodes per degree.
    pub fn var_degree_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for cs in &self.var_checks {
            *h.entry(cs.len()).or_insert(0) += 1;
        }
        h
    }

    /// Number of check nodes per degree.
    pub fn check_degree_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for vs in &self.check_vars {
            *h.entry(vs.len()).or_insert(0) += 1;
        }
        h
    }

    /// Variable nodes grouped by degree, each list in index order.
    pub fn vars_by_degree(&self) -> BTreeMap<usize, Vec<usize>> {
        let mut m: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (v, cs) in self.var_checks.iter().enumerate() {
            m.entry(cs.len()).or_default().push(v);
        }
        m
    }

    /// `true` iff every parity check is satisfied by `bits`.
    pub fn is_codeword(&self, bits: &[u8]) -> bool {
        self.check_vars
            .iter()
            .all(|vs| vs.iter().fold(0u8, |acc, &v| acc ^ bits[v as usize]) == 0)
    }

    /// Number of unsatisfied checks.
    pub fn syndrome_weight(&self, bits: &[u8]) -> usize {
        self.check_vars
            .iter()
            .filter(|vs| vs.iter().fold(0u8, |acc, &v| acc ^ bits[v as usize]) != 0)
            .count()
    }

    /// Length of the shortest cycle through variable node `v`, if any.
    pub fn local_girth(&self, v: usize) -> Option<usize> {
        // BFS over the bipartite graph; nodes are encoded as vars then checks.
        let nv = self.n_vars();
        let total = nv + self.n_checks();
        let mut dist = vec![usize::MAX; total];
        let mut parent = vec![usize::MAX; total];
        let mut branch = vec![usize::MAX; total];
        let mut queue = VecDeque::new();
        dist[v] = 0;
        queue.push_back(v);
        let mut best: Option<usize> = None;
        while let Some(u) = queue.pop_front() {
            if let Some(b) = best {
                if 2 * dist[u] + 1 >= b {
                    break;
                }
            }
            let neigh: Box<dyn Iterator<Item = usize>> = if u < nv {
                Box::new(self.var_checks[u].iter().map(|&c| nv + c as usize))
            } else {
                Box::new(self.check_vars[u - nv].iter().map(|&x| x as usize))
            };
            for w in neigh {
                if w == parent[u] {
                    continue;
                }
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    branch[w] = if u == v { w } else { branch[u] };
                    queue.push_back(w);
                } else if branch[w] != branch[u] || w == v {
                    let len = dist[u] + dist[w] + 1;
                    if best.is_none_or(|b| len < b) {
                        best = Some(len);
                    }
                }
            }
        }
        best
    }

    /// Minimum local girth over the given variable nodes.
    pub fn girth_over<I: IntoIterator<Item = usize>>(&self, vars: I) -> Option<usize> {
        vars.into_iter().filter_map(|v| self.local_girth(v)).min()
    }
}
