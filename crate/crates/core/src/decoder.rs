//! Joint two-user belief propagation with state nodes.
//!
//! Each user runs an ordinary sum-product decoder on its own Tanner graph.
//! The two decoders meet at the state nodes, one per channel observation,
//! which couple the `t`-th transmitted bit of both users. Punctured nodes
//! have no state node and start as erasures.
//!
//! One iteration of the parallel schedule is: state update, variable
//! update for both users, hard decision and syndrome check, check update.

use std::io::Write;

use crate::channel::ChannelParams;
use crate::codegraph::TannerGraph;
use crate::error::{Error, Result};

/// Magnitude bound applied to every message.
pub const LLR_CLIP: f64 = 30.0;

/// Default iteration cap.
pub const DEFAULT_MAX_ITER: usize = 100;

/// Noise variances below this are raised to it, so a noiseless channel
/// still yields finite messages.
pub const MIN_SIGMA2: f64 = 1e-9;

#[inline]
fn clip(x: f64) -> f64 {
    x.clamp(-LLR_CLIP, LLR_CLIP)
}

#[inline]
fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        hi
    } else {
        hi + (lo - hi).exp().ln_1p()
    }
}

/// Check-node rule for a single output edge given the other inputs.
pub fn check_rule(inputs: &[f64]) -> f64 {
    let prod: f64 = inputs.iter().map(|&l| (0.5 * l).tanh()).product();
    clip(2.0 * prod.clamp(-1.0, 1.0).atanh())
}

/// State-node message to the user with amplitude `a`, given the other
/// user's amplitude `b` and its message `l_other` towards the state node.
///
/// Infinite `l_other` is accepted and gives the interference-free limit.
pub fn state_rule(y: f64, a: f64, b: f64, sigma2: f64, l_other: f64) -> f64 {
    let s = 0.5 / sigma2;
    let pp = -(y - a - b).powi(2) * s; // (+1, +1)
    let pm = -(y - a + b).powi(2) * s; // (+1, -1)
    let mp = -(y + a - b).powi(2) * s; // (-1, +1)
    let mm = -(y + a + b).powi(2) * s; // (-1, -1)
    if l_other >= 0.0 {
        log_add_exp(pp, pm - l_other) - log_add_exp(mp, mm - l_other)
    } else {
        log_add_exp(pp + l_other, pm) - log_add_exp(mp + l_other, mm)
    }
}

/// Single-user decoder graph stored edge-wise.
#[derive(Debug, Clone)]
struct UserGraph {
    n_vars: usize,
    /// Edges of variable `v` are `var_ptr[v]..var_ptr[v + 1]`.
    var_ptr: Vec<u32>,
    /// Edge ids of check `c` are `check_edges[check_ptr[c]..check_ptr[c + 1]]`.
    check_ptr: Vec<u32>,
    check_edges: Vec<u32>,
    /// Transmitted position of each variable node, if any.
    state_of: Vec<Option<u32>>,
    /// Variable node at each transmitted position.
    tx_vars: Vec<u32>,
}

impl UserGraph {
    fn new(g: &TannerGraph, transmitted: &[usize]) -> Result<Self> {
        let n = g.n_vars();
        let mut var_ptr = Vec::with_capacity(n + 1);
        let mut edge_check = Vec::with_capacity(g.n_edges());
        var_ptr.push(0u32);
        for v in 0..n {
            edge_check.extend_from_slice(g.var_neighbors(v));
            var_ptr.push(edge_check.len() as u32);
        }
        let m = g.n_checks();
        let mut check_ptr = vec![0u32; m + 1];
        for &c in &edge_check {
            check_ptr[c as usize + 1] += 1;
        }
        for c in 0..m {
            check_ptr[c + 1] += check_ptr[c];
        }
        let mut fill = check_ptr.clone();
        let mut check_edges = vec![0u32; edge_check.len()];
        for (e, &c) in edge_check.iter().enumerate() {
            check_edges[fill[c as usize] as usize] = e as u32;
            fill[c as usize] += 1;
        }
        let mut state_of = vec![None; n];
        for (t, &v) in transmitted.iter().enumerate() {
            if v >= n || state_of[v].is_some() {
                return Err(Error::Argument(format!("bad transmitted position {v}")));
            }
            state_of[v] = Some(t as u32);
        }
        Ok(UserGraph {
            n_vars: n,
            var_ptr,
            check_ptr,
            check_edges,
            state_of,
            tx_vars: transmitted.iter().map(|&v| v as u32).collect(),
        })
    }

    fn n_edges(&self) -> usize {
        self.check_edges.len()
    }

    fn n_checks(&self) -> usize {
        self.check_ptr.len() - 1
    }
}

/// Message buffers of one user.
#[derive(Debug, Clone)]
struct UserState {
    /// tanh(L_{v->c} / 2), edge-indexed in variable order.
    v2c_tanh: Vec<f64>,
    c2v: Vec<f64>,
    s2v: Vec<f64>,
    v2s: Vec<f64>,
    total: Vec<f64>,
    bits: Vec<u8>,
    scratch: Vec<f64>,
}

impl UserState {
    fn new(g: &UserGraph) -> Self {
        UserState {
            v2c_tanh: vec![0.0; g.n_edges()],
            c2v: vec![0.0; g.n_edges()],
            s2v: vec![0.0; g.tx_vars.len()],
            v2s: vec![0.0; g.tx_vars.len()],
            total: vec![0.0; g.n_vars],
            bits: vec![0; g.n_vars],
            scratch: Vec::new(),
        }
    }

    fn reset(&mut self) {
        self.c2v.iter_mut().for_each(|x| *x = 0.0);
        self.v2s.iter_mut().for_each(|x| *x = 0.0);
    }
}

fn variable_update(g: &UserGraph, st: &mut UserState) {
    for v in 0..g.n_vars {
        let (lo, hi) = (g.var_ptr[v] as usize, g.var_ptr[v + 1] as usize);
        let sum: f64 = st.c2v[lo..hi].iter().sum();
        let channel = match g.state_of[v] {
            Some(t) => {
                st.v2s[t as usize] = clip(sum);
                st.s2v[t as usize]
            }
            None => 0.0,
        };
        let total = channel + sum;
        st.total[v] = total;
        st.bits[v] = (total < 0.0) as u8;
        for e in lo..hi {
            st.v2c_tanh[e] = (0.5 * clip(total - st.c2v[e])).tanh();
        }
    }
}

fn check_update(g: &UserGraph, st: &mut UserState) {
    for c in 0..g.n_checks() {
        let edges = &g.check_edges[g.check_ptr[c] as usize..g.check_ptr[c + 1] as usize];
        let d = edges.len();
        // Prefix products in scratch, suffix product accumulated on the fly.
        st.scratch.clear();
        let mut acc = 1.0;
        for &e in edges {
            st.scratch.push(acc);
            acc *= st.v2c_tanh[e as usize];
        }
        let mut suffix = 1.0;
        for i in (0..d).rev() {
            let e = edges[i] as usize;
            let p = (st.scratch[i] * suffix).clamp(-1.0, 1.0);
            st.c2v[e] = clip(2.0 * p.atanh());
            suffix *= st.v2c_tanh[e];
        }
    }
}

fn syndrome_ok(g: &UserGraph, st: &UserState, edge_var: &[u32]) -> bool {
    (0..g.n_checks()).all(|c| {
        let edges = &g.check_edges[g.check_ptr[c] as usize..g.check_ptr[c + 1] as usize];
        edges.iter().fold(0u8, |acc, &e| acc ^ st.bits[edge_var[e as usize] as usize]) == 0
    })
}

fn edge_vars(g: &UserGraph) -> Vec<u32> {
    let mut out = vec![0u32; g.n_edges()];
    for v in 0..g.n_vars {
        for e in g.var_ptr[v]..g.var_ptr[v + 1] {
            out[e as usize] = v as u32;
        }
    }
    out
}

/// Result of one joint decoding run.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeOutcome {
    /// Hard decisions on each user's mother codeword.
    pub bits: [Vec<u8>; 2],
    pub iterations: usize,
    /// Both users satisfy all parity checks.
    pub converged: bool,
}

/// One row of an LLR trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub iteration: usize,
    pub user: usize,
    pub mean_abs_llr: f64,
    /// Mutual information of the variable-to-check messages with the
    /// transmitted bits; NaN when the truth is unknown.
    pub mi_v2c: f64,
    pub unsatisfied: usize,
}

/// Writes trace rows as CSV.
pub fn write_trace(rows: &[TraceRow], mut w: impl Write) -> Result<()> {
    writeln!(w, "iteration,user,mean_abs_llr,mi_v2c,unsatisfied")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{:.6},{:.6},{}",
            r.iteration, r.user, r.mean_abs_llr, r.mi_v2c, r.unsatisfied
        )?;
    }
    Ok(())
}

/// Joint decoder for a fixed pair of codes and transmission orders.
///
/// Holds its message buffers, so one instance serves many frames. Clone
/// it to decode on several threads.
#[derive(Debug, Clone)]
pub struct JointDecoder {
    graphs: [UserGraph; 2],
    states: [UserState; 2],
    edge_var: [Vec<u32>; 2],
    max_iter: usize,
}

impl JointDecoder {
    /// `transmitted[j]` lists the unpunctured variable nodes of user `j`
    /// in transmission order; both lists must have equal length.
    pub fn new(graphs: [&TannerGraph; 2], transmitted: [&[usize]; 2]) -> Result<Self> {
        if transmitted[0].len() != transmitted[1].len() {
            return Err(Error::Argument(format!(
                "users transmit {} and {} bits",
                transmitted[0].len(),
                transmitted[1].len()
            )));
        }
        let g0 = UserGraph::new(graphs[0], transmitted[0])?;
        let g1 = UserGraph::new(graphs[1], transmitted[1])?;
        let states = [UserState::new(&g0), UserState::new(&g1)];
        let edge_var = [edge_vars(&g0), edge_vars(&g1)];
        Ok(JointDecoder { graphs: [g0, g1], states, edge_var, max_iter: DEFAULT_MAX_ITER })
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter.max(1);
        self
    }

    pub fn max_iter(&self) -> usize {
        self.max_iter
    }

    /// Number of channel observations per frame.
    pub fn frame_len(&self) -> usize {
        self.graphs[0].tx_vars.len()
    }

    fn state_update(&mut self, y: &[f64], a: [f64; 2], sigma2: f64) {
        let [s0, s1] = &mut self.states;
        for (t, &yt) in y.iter().enumerate() {
            let l0 = s0.v2s[t];
            let l1 = s1.v2s[t];
            s0.s2v[t] = clip(state_rule(yt, a[0], a[1], sigma2, l1));
            s1.s2v[t] = clip(state_rule(yt, a[1], a[0], sigma2, l0));
        }
    }

    fn run(
        &mut self,
        y: &[f64],
        params: &ChannelParams,
        sigma2: f64,
        mut trace: Option<(&mut Vec<TraceRow>, Option<[&[u8]; 2]>)>,
    ) -> Result<DecodeOutcome> {
        if y.len() != self.frame_len() {
            return Err(Error::Argument(format!(
                "{} observations for a frame of {}",
                y.len(),
                self.frame_len()
            )));
        }
        let (a1, a2) = params.amplitudes();
        let sigma2 = sigma2.max(MIN_SIGMA2);
        for st in &mut self.states {
            st.reset();
        }
        let mut converged = false;
        let mut iterations = 0;
        while iterations < self.max_iter {
            iterations += 1;
            self.state_update(y, [a1, a2], sigma2);
            for j in 0..2 {
                variable_update(&self.graphs[j], &mut self.states[j]);
            }
            let ok = [0, 1].map(|j| syndrome_ok(&self.graphs[j], &self.states[j], &self.edge_var[j]));
            if let Some((rows, truth)) = trace.as_mut() {
                for j in 0..2 {
                    rows.push(self.trace_row(j, iterations, truth.map(|t| t[j])));
                }
            }
            if ok[0] && ok[1] {
                converged = true;
                break;
            }
            for j in 0..2 {
                check_update(&self.graphs[j], &mut self.states[j]);
            }
        }
        Ok(DecodeOutcome {
            bits: [self.states[0].bits.clone(), self.states[1].bits.clone()],
            iterations,
            converged,
        })
    }

    fn trace_row(&self, j: usize, iteration: usize, truth: Option<&[u8]>) -> TraceRow {
        let (g, st) = (&self.graphs[j], &self.states[j]);
        let mean_abs_llr = st.total.iter().map(|x| x.abs()).sum::<f64>() / g.n_vars as f64;
        let mi_v2c = match truth {
            Some(x) => {
                let mut acc = 0.0;
                for (e, &t) in st.v2c_tanh.iter().enumerate() {
                    let l = 2.0 * t.clamp(-1.0 + 1e-16, 1.0 - 1e-16).atanh();
                    let s = if x[self.edge_var[j][e] as usize] == 0 { 1.0 } else { -1.0 };
                    acc += (-s * l).exp().ln_1p() / std::f64::consts::LN_2;
                }
                1.0 - acc / g.n_edges().max(1) as f64
            }
            None => f64::NAN,
        };
        let unsatisfied = (0..g.n_checks())
            .filter(|&c| {
                let edges = &g.check_edges[g.check_ptr[c] as usize..g.check_ptr[c + 1] as usize];
                edges.iter().fold(0u8, |acc, &e| acc ^ st.bits[self.edge_var[j][e as usize] as usize]) == 1
            })
            .count();
        TraceRow { iteration, user: j + 1, mean_abs_llr, mi_v2c, unsatisfied }
    }

    /// Decodes one frame observed with noise variance `sigma2`.
    pub fn decode(&mut self, y: &[f64], params: &ChannelParams, sigma2: f64) -> Result<DecodeOutcome> {
        self.run(y, params, sigma2, None)
    }

    /// Like [`JointDecoder::decode`], recording one trace row per user and
    /// iteration. `truth` enables the mutual-information column.
    pub fn decode_traced(
        &mut self,
        y: &[f64],
        params: &ChannelParams,
        sigma2: f64,
        truth: Option<[&[u8]; 2]>,
        rows: &mut Vec<TraceRow>,
    ) -> Result<DecodeOutcome> {
        self.run(y, params, sigma2, Some((rows, truth)))
    }

    /// Total LLRs of user `j` after the last decode.
    pub fn total_llrs(&self, j: usize) -> &[f64] {
        &self.states[j].total
    }
}

/// Secret bits of a decided codeword at the given positions.
pub fn extract_secret(bits: &[u8], secret_positions: &[usize]) -> Vec<u8> {
    secret_positions.iter().map(|&v| bits[v]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn check_rule_examples() {
        let direct = 2.0 * ((0.5f64).tanh() * (1.0f64).tanh()).atanh();
        assert_abs_diff_eq!(check_rule(&[1.0, 2.0]), direct, epsilon = 1e-12);
        assert_abs_diff_eq!(direct, 0.735_33, epsilon = 1e-5);
        assert_eq!(check_rule(&[3.0, 0.0, -2.0]), 0.0);
        assert_eq!(check_rule(&[1e9, 1e9]), LLR_CLIP);
    }

    #[test]
    fn state_rule_limits() {
        let (a, b, s2) = (1.0, 1.0, 1.0);
        let y = 2.0;
        assert_abs_diff_eq!(state_rule(y, a, b, s2, f64::INFINITY), 2.0 * a * (y - b) / s2, epsilon = 1e-12);
        assert_abs_diff_eq!(state_rule(y, a, b, s2, f64::NEG_INFINITY), 2.0 * a * (y + b) / s2, epsilon = 1e-12);
        assert_abs_diff_eq!(state_rule(0.0, 1.0, 1.0, 0.7, 0.0), 0.0, epsilon = 1e-15);
        let single = 2.0 * 0.8 * 0.3 / 0.5;
        assert_abs_diff_eq!(state_rule(0.3, 0.8, 1e-7, 0.5, 0.0), single, epsilon = 1e-6);
    }

    #[test]
    fn state_rule_is_odd_in_y_and_user_sign() {
        for &(y, l) in &[(0.4, 1.3), (-1.2, -0.5), (2.5, 7.0)] {
            let p = state_rule(y, 1.2, 0.7, 0.6, l);
            assert_abs_diff_eq!(state_rule(-y, 1.2, 0.7, 0.6, -l), -p, epsilon = 1e-12);
        }
    }
}
