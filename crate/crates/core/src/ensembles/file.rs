//! Text format for ensembles and puncturing distributions.
//!
//! ```toml
//! perspective = "edge"      # or "node"; the loader always returns edge form
//! declared_rate = 0.3333    # optional
//!
//! [lambda]
//! 2 = 0.1993
//! 3 = 0.2796
//!
//! [rho]
//! 7 = 1.0
//! ```
//!
//! Puncturing files carry a `[pi]` table and an optional `[annotation]`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{edge_to_node, node_to_edge, DegreeMap, Ensemble, PuncturingDistribution};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Perspective {
    #[default]
    Edge,
    Node,
}

#[derive(Debug, Deserialize)]
struct EnsembleFile {
    #[serde(default)]
    perspective: Perspective,
    declared_rate: Option<f64>,
    lambda: BTreeMap<String, f64>,
    rho: BTreeMap<String, f64>,
}

/// Metadata written next to an optimised puncturing distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct PuncturingAnnotation {
    pub sigma_target: Option<f64>,
    pub puncturing_rate: Option<f64>,
}

#[derive(Debug, Deserialize)]
struct PuncturingFile {
    pi: BTreeMap<String, f64>,
    #[serde(default)]
    annotation: PuncturingAnnotation,
}

fn degree_map(origin: &Path, table: BTreeMap<String, f64>) -> Result<DegreeMap> {
    table
        .into_iter()
        .map(|(k, v)| {
            k.trim()
                .parse::<usize>()
                .map(|d| (d, v))
                .map_err(|_| Error::Parse {
                    path: origin.to_path_buf(),
                    detail: format!("degree key {k:?} is not an integer"),
                })
        })
        .collect()
}

fn parse_err(origin: &Path, e: impl std::fmt::Display) -> Error {
    Error::Parse {
        path: origin.to_path_buf(),
        detail: e.to_string(),
    }
}

/// Parses ensemble text; `origin` is only used in error messages.
pub fn parse_ensemble(text: &str, origin: &Path) -> Result<Ensemble> {
    let file: EnsembleFile = toml::from_str(text).map_err(|e| parse_err(origin, e))?;
    let mut lambda = degree_map(origin, file.lambda)?;
    let mut rho = degree_map(origin, file.rho)?;
    if file.perspective == Perspective::Node {
        lambda = node_to_edge(&lambda);
        rho = node_to_edge(&rho);
    }
    let ens = Ensemble::normalized(lambda, rho)?;
    if let Some(declared) = file.declared_rate {
        ens.check_declared_rate(declared);
    }
    Ok(ens)
}

pub fn load_ensemble(path: impl AsRef<Path>) -> Result<Ensemble> {
    let path = path.as_ref();
    parse_ensemble(&std::fs::read_to_string(path)?, path)
}

/// Serialises an ensemble in the requested perspective.
pub fn ensemble_to_string(ens: &Ensemble, perspective: Perspective) -> String {
    let (lambda, rho) = match perspective {
        Perspective::Edge => (ens.lambda().clone(), ens.rho().clone()),
        Perspective::Node => (edge_to_node(ens.lambda()), edge_to_node(ens.rho())),
    };
    let name = match perspective {
        Perspective::Edge => "edge",
        Perspective::Node => "node",
    };
    let mut out = format!("perspective = \"{name}\"\ndeclared_rate = {}\n\n[lambda]\n", ens.code_rate());
    for (d, c) in lambda {
        let _ = writeln!(out, "{d} = {c}");
    }
    out.push_str("\n[rho]\n");
    for (d, c) in rho {
        let _ = writeln!(out, "{d} = {c}");
    }
    out
}

pub fn parse_puncturing(
    text: &str,
    origin: &Path,
) -> Result<(PuncturingDistribution, PuncturingAnnotation)> {
    let file: PuncturingFile = toml::from_str(text).map_err(|e| parse_err(origin, e))?;
    let pi = PuncturingDistribution::new(degree_map(origin, file.pi)?)?;
    Ok((pi, file.annotation))
}

pub fn load_puncturing(
    path: impl AsRef<Path>,
) -> Result<(PuncturingDistribution, PuncturingAnnotation)> {
    let path = path.as_ref();
    parse_puncturing(&std::fs::read_to_string(path)?, path)
}

pub fn puncturing_to_string(pi: &PuncturingDistribution, note: &PuncturingAnnotation) -> String {
    let mut out = String::from("[pi]\n");
    for (d, p) in pi.iter() {
        let _ = writeln!(out, "{d} = {p}");
    }
    if note.sigma_target.is_some() || note.puncturing_rate.is_some() {
        out.push_str("\n[annotation]\n");
        if let Some(s) = note.sigma_target {
            let _ = writeln!(out, "sigma_target = {s}");
        }
        if let Some(r) = note.puncturing_rate {
            let _ = writeln!(out, "puncturing_rate = {r}");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn node_file_loads_as_edge() {
        let text = "perspective = \"node\"\n[lambda]\n3 = 1.0\n[rho]\n6 = 1.0\n";
        let ens = parse_ensemble(text, Path::new("mem")).unwrap();
        assert_abs_diff_eq!(ens.lambda()[&3], 1.0);
        assert_abs_diff_eq!(ens.code_rate(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn round_trip_both_perspectives() {
        let ens = super::super::presets::unequal_power_mother_user1();
        for p in [Perspective::Edge, Perspective::Node] {
            let back = parse_ensemble(&ensemble_to_string(&ens, p), Path::new("mem")).unwrap();
            for (d, c) in ens.lambda() {
                assert_abs_diff_eq!(back.lambda()[d], *c, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn bad_degree_key() {
        let text = "[lambda]\nx = 1.0\n[rho]\n6 = 1.0\n";
        assert!(matches!(
            parse_ensemble(text, Path::new("mem")),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn puncturing_with_annotation() {
        let pi = PuncturingDistribution::from_pairs(&[(2, 0.283), (3, 0.2723)]).unwrap();
        let note = PuncturingAnnotation {
            sigma_target: Some(0.9151),
            puncturing_rate: Some(0.25),
        };
        let (back, n2) = parse_puncturing(&puncturing_to_string(&pi, &note), Path::new("mem")).unwrap();
        assert_eq!(back, pi);
        assert_eq!(n2, note);
    }
}
