//! Parity-check matrices in MacKay's alist text format.
//!
//! Variable nodes are the columns of `H`, check nodes its rows. Indices in the
//! file are 1-based; zero entries (used by some writers as padding) are
//! ignored on input.

use std::fmt::Write as _;
use std::path::Path;

use super::TannerGraph;
use crate::error::{Error, Result};

pub fn to_alist(g: &TannerGraph) -> String {
    let n = g.n_vars();
    let m = g.n_checks();
    let max_col = (0..n).map(|v| g.var_degree(v)).max().unwrap_or(0);
    let max_row = (0..m).map(|c| g.check_degree(c)).max().unwrap_or(0);
    let mut out = String::new();
    let _ = writeln!(out, "{n} {m}");
    let _ = writeln!(out, "{max_col} {max_row}");
    let join = |it: &mut dyn Iterator<Item = usize>| {
        it.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
    };
    let _ = writeln!(out, "{}", join(&mut (0..n).map(|v| g.var_degree(v))));
    let _ = writeln!(out, "{}", join(&mut (0..m).map(|c| g.check_degree(c))));
    for v in 0..n {
        let _ = writeln!(out, "{}", join(&mut g.var_neighbors(v).iter().map(|&c| c as usize + 1)));
    }
    for c in 0..m {
        let _ = writeln!(out, "{}", join(&mut g.check_neighbors(c).iter().map(|&v| v as usize + 1)));
    }
    out
}

pub fn from_alist(text: &str) -> Result<TannerGraph> {
    let bad = |msg: &str| Error::Parse {
        path: "alist".into(),
        detail: msg.to_string(),
    };
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let nums = |lines: &mut dyn Iterator<Item = &str>| -> Result<Vec<usize>> {
        lines
            .next()
            .ok_or_else(|| bad("unexpected end of file"))?
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| bad(&format!("bad integer {t:?}"))))
            .collect()
    };
    let header = nums(&mut lines)?;
    let [n, m] = header[..] else {
        return Err(bad("first line must be `N M`"));
    };
    nums(&mut lines)?;
    let col_w = nums(&mut lines)?;
    let row_w = nums(&mut lines)?;
    if col_w.len() != n || row_w.len() != m {
        return Err(bad("weight lines do not match the matrix size"));
    }
    let mut edges = Vec::new();
    for (v, &w) in col_w.iter().enumerate() {
        let checks: Vec<usize> = nums(&mut lines)?.into_iter().filter(|&c| c != 0).collect();
        if checks.len() != w {
            return Err(bad(&format!("column {} lists {} entries, expected {w}", v + 1, checks.len())));
        }
        for c in checks {
            if c > m {
                return Err(bad(&format!("row index {c} out of range")));
            }
            edges.push((v, c - 1));
        }
    }
    let g = TannerGraph::from_edges(n, m, &edges)?;
    // Row section is redundant; verify it when present.
    for (c, &w) in row_w.iter().enumerate() {
        let Ok(vars) = nums(&mut lines) else { break };
        let vars: Vec<u32> = vars.into_iter().filter(|&v| v != 0).map(|v| v as u32 - 1).collect();
        let mut sorted = vars.clone();
        sorted.sort_unstable();
        if sorted.len() != w || sorted != g.check_neighbors(c) {
            return Err(bad(&format!("row {} disagrees with the column section", c + 1)));
        }
    }
    Ok(g)
}

pub fn write_alist(g: &TannerGraph, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, to_alist(g))?;
    Ok(())
}

pub fn read_alist(path: impl AsRef<Path>) -> Result<TannerGraph> {
    let path = path.as_ref();
    from_alist(&std::fs::read_to_string(path)?).map_err(|e| match e {
        Error::Parse { detail, .. } => Error::Parse {
            path: path.to_path_buf(),
            detail,
        },
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let g = TannerGraph::from_edges(4, 2, &[(0, 0), (1, 0), (2, 1), (3, 1), (1, 1)]).unwrap();
        let back = from_alist(&to_alist(&g)).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn zero_padding_tolerated() {
        let text = "3 1\n1 3\n1 1 1\n3\n1\n1 0\n1\n1 2 3\n";
        let g = from_alist(text).unwrap();
        assert_eq!(g.n_edges(), 3);
    }

    #[test]
    fn inconsistent_rows_rejected() {
        let text = "2 1\n1 2\n1 1\n2\n1\n1\n1\n";
        assert!(from_alist(text).is_err());
    }
}
