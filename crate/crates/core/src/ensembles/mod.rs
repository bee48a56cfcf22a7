//! Degree-distribution algebra, rate algebra and puncturing distributions.
//!
//! Distributions are sparse `degree -> coefficient` maps. `lambda` and `rho`
//! are always stored in the edge perspective; the node-perspective forms are
//! derived on demand.

mod file;
pub mod presets;
mod rates;

pub use file::{
    load_ensemble, load_puncturing, parse_ensemble, parse_puncturing, puncturing_to_string,
    ensemble_to_string, Perspective, PuncturingAnnotation,
};
pub use rates::RateSet;

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Sparse `degree -> coefficient` map.
pub type DegreeMap = BTreeMap<usize, f64>;

/// Tolerance applied to the normalisation of every distribution.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// Renormalisation adjustments larger than this are reported with a warning.
pub const RENORMALIZE_WARN: f64 = 1e-3;

/// An LDPC ensemble given by its edge-perspective degree distributions.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    lambda: DegreeMap,
    rho: DegreeMap,
}

fn validate_distribution(name: &str, dist: &DegreeMap) -> Result<()> {
    if dist.is_empty() {
        return Err(Error::InvalidEnsemble(format!("{name} is empty")));
    }
    for (&d, &c) in dist {
        if d < 2 {
            return Err(Error::InvalidEnsemble(format!(
                "{name} has degree {d}; degrees must be at least 2"
            )));
        }
        if !(0.0..=1.0).contains(&c) || !c.is_finite() {
            return Err(Error::InvalidEnsemble(format!(
                "{name}_{d} = {c} is outside [0, 1]"
            )));
        }
    }
    let sum: f64 = dist.values().sum();
    if (sum - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::InvalidEnsemble(format!(
            "{name} coefficients sum to {sum}, expected 1"
        )));
    }
    Ok(())
}

fn renormalize(name: &str, dist: DegreeMap) -> Result<DegreeMap> {
    let dist: DegreeMap = dist.into_iter().filter(|&(_, c)| c != 0.0).collect();
    let sum: f64 = dist.values().sum();
    if !(sum > 0.0) {
        return Err(Error::InvalidEnsemble(format!("{name} has no positive mass")));
    }
    if (sum - 1.0).abs() > RENORMALIZE_WARN {
        log::warn!("{name} coefficients sum to {sum:.6}; renormalising");
    }
    Ok(dist.into_iter().map(|(d, c)| (d, c / sum)).collect())
}

/// Converts an edge-perspective distribution to the node perspective.
pub fn edge_to_node(edge: &DegreeMap) -> DegreeMap {
    let total: f64 = edge.iter().map(|(&d, &c)| c / d as f64).sum();
    edge.iter()
        .map(|(&d, &c)| (d, c / d as f64 / total))
        .collect()
}

/// Converts a node-perspective distribution to the edge perspective.
pub fn node_to_edge(node: &DegreeMap) -> DegreeMap {
    let total: f64 = node.iter().map(|(&d, &c)| c * d as f64).sum();
    node.iter()
        .map(|(&d, &c)| (d, c * d as f64 / total))
        .collect()
}

impl Ensemble {
    /// Builds an ensemble, requiring both distributions to be normalised to
    /// within [`SUM_TOLERANCE`].
    pub fn new(lambda: DegreeMap, rho: DegreeMap) -> Result<Self> {
        let lambda: DegreeMap = lambda.into_iter().filter(|&(_, c)| c != 0.0).collect();
        let rho: DegreeMap = rho.into_iter().filter(|&(_, c)| c != 0.0).collect();
        validate_distribution("lambda", &lambda)?;
        validate_distribution("rho", &rho)?;
        Ok(Ensemble { lambda, rho })
    }

    /// Builds an ensemble from rounded coefficients, rescaling each
    /// distribution to unit mass.
    pub fn normalized(lambda: DegreeMap, rho: DegreeMap) -> Result<Self> {
        let lambda = renormalize("lambda", lambda)?;
        let rho = renormalize("rho", rho)?;
        Self::new(lambda, rho)
    }

    /// Convenience constructor from `(degree, coefficient)` pairs, renormalised.
    pub fn from_pairs(lambda: &[(usize, f64)], rho: &[(usize, f64)]) -> Result<Self> {
        Self::normalized(
            lambda.iter().copied().collect(),
            rho.iter().copied().collect(),
        )
    }

    pub fn lambda(&self) -> &DegreeMap {
        &self.lambda
    }

    pub fn rho(&self) -> &DegreeMap {
        &self.rho
    }

    /// Maximum variable-node degree `D_v`.
    pub fn max_variable_degree(&self) -> usize {
        *self.lambda.keys().next_back().expect("validated non-empty")
    }

    /// Maximum check-node degree `D_c`.
    pub fn max_check_degree(&self) -> usize {
        *self.rho.keys().next_back().expect("validated non-empty")
    }

    /// Design rate `1 - (sum rho_i / i) / (sum lambda_i / i)`.
    pub fn code_rate(&self) -> f64 {
        let v: f64 = self.lambda.iter().map(|(&d, &c)| c / d as f64).sum();
        let c: f64 = self.rho.iter().map(|(&d, &c)| c / d as f64).sum();
        1.0 - c / v
    }

    /// Fraction of variable nodes of each degree (`L_i`).
    pub fn node_perspective(&self) -> DegreeMap {
        edge_to_node(&self.lambda)
    }

    /// Fraction of check nodes of each degree (`R_i`).
    pub fn check_node_perspective(&self) -> DegreeMap {
        edge_to_node(&self.rho)
    }

    /// Ratio of check nodes to variable nodes, `(sum rho_i/i)/(sum lambda_i/i)`.
    pub fn check_ratio(&self) -> f64 {
        1.0 - self.code_rate()
    }

    /// Average variable-node degree.
    pub fn mean_variable_degree(&self) -> f64 {
        1.0 / self.lambda.iter().map(|(&d, &c)| c / d as f64).sum::<f64>()
    }

    /// Compares the computed rate with a declared one and warns on mismatch.
    pub fn check_declared_rate(&self, declared: f64) -> f64 {
        let computed = self.code_rate();
        if (computed - declared).abs() > 0.01 {
            log::warn!(
                "ensemble rate {computed:.4} differs from declared rate {declared:.4}"
            );
        }
        computed
    }
}

/// Per-degree puncturing fractions `pi_i` (fraction of degree-`i` variable
/// nodes that are punctured).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PuncturingDistribution {
    pi: DegreeMap,
}

impl PuncturingDistribution {
    pub fn new(pi: DegreeMap) -> Result<Self> {
        for (&d, &p) in &pi {
            if !(0.0..=1.0).contains(&p) || !p.is_finite() {
                return Err(Error::InvalidPuncturing(format!(
                    "pi_{d} = {p} is outside [0, 1]"
                )));
            }
        }
        let pi = pi.into_iter().filter(|&(_, p)| p != 0.0).collect();
        Ok(PuncturingDistribution { pi })
    }

    pub fn from_pairs(pairs: &[(usize, f64)]) -> Result<Self> {
        Self::new(pairs.iter().copied().collect())
    }

    /// No puncturing at all.
    pub fn zero() -> Self {
        PuncturingDistribution::default()
    }

    /// `pi_i`, zero for degrees that are not listed.
    pub fn get(&self, degree: usize) -> f64 {
        self.pi.get(&degree).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.pi.iter().map(|(&d, &p)| (d, p))
    }

    pub fn as_map(&self) -> &DegreeMap {
        &self.pi
    }

    pub fn is_zero(&self) -> bool {
        self.pi.is_empty()
    }

    /// Checks that `pi` only touches degrees present in `ens`.
    pub fn validate_for(&self, ens: &Ensemble) -> Result<()> {
        for (&d, &p) in &self.pi {
            if p > 0.0 && !ens.lambda().contains_key(&d) {
                return Err(Error::InvalidPuncturing(format!(
                    "pi_{d} = {p} but the ensemble has no degree-{d} variable nodes"
                )));
            }
        }
        Ok(())
    }

    /// Largest per-degree difference to another distribution.
    pub fn max_abs_diff(&self, other: &PuncturingDistribution) -> f64 {
        self.pi
            .keys()
            .chain(other.pi.keys())
            .map(|&d| (self.get(d) - other.get(d)).abs())
            .fold(0.0, f64::max)
    }
}

/// Equal puncturing fraction `r_p` on every variable degree of `ens`.
pub fn random_puncturing(r_p: f64, ens: &Ensemble) -> Result<PuncturingDistribution> {
    if !(0.0..1.0).contains(&r_p) {
        return Err(Error::InvalidPuncturing(format!(
            "puncturing rate {r_p} is outside [0, 1)"
        )));
    }
    PuncturingDistribution::new(ens.lambda().keys().map(|&d| (d, r_p)).collect())
}

/// Puncturing rate `sum L_i pi_i`.
pub fn puncturing_rate(pi: &PuncturingDistribution, ens: &Ensemble) -> Result<f64> {
    pi.validate_for(ens)?;
    Ok(ens
        .node_perspective()
        .iter()
        .map(|(&d, &l)| l * pi.get(d))
        .sum())
}

/// Largest-remainder apportionment of `total` units over `weights`.
///
/// Ties in the remainder go to the earlier entry, so with keys sorted by
/// degree the lower degree wins.
pub fn apportion(total: usize, weights: &[f64]) -> Vec<usize> {
    let sum: f64 = weights.iter().sum();
    if weights.is_empty() || sum <= 0.0 {
        return vec![0; weights.len()];
    }
    let exact: Vec<f64> = weights
        .iter()
        .map(|w| w / sum * total as f64)
        .collect();
    let mut counts: Vec<usize> = exact.iter().map(|x| x.floor() as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = exact[a] - exact[a].floor();
        let rb = exact[b] - exact[b].floor();
        rb.partial_cmp(&ra).unwrap().then(a.cmp(&b))
    });
    for &i in order.iter().take(total.saturating_sub(assigned)) {
        counts[i] += 1;
    }
    counts
}
