//! Dense two-phase simplex for small bounded linear programs.
//!
//! Solves `max c.x` subject to `A x <= b` and `0 <= x <= u`. Upper bounds
//! are folded into the constraint rows; problems here have a handful of
//! variables and about a hundred rows.

const PIVOT_TOL: f64 = 1e-9;

/// Result of [`maximize`].
#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, objective: f64 },
    Infeasible,
    Unbounded,
}

struct Tableau {
    /// `rows x (cols + 1)`, last column is the right-hand side.
    t: Vec<Vec<f64>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.t[r][c];
        for v in self.t[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i != r {
                let f = row[c];
                if f != 0.0 {
                    for (v, &pr) in row.iter_mut().zip(&pivot_row) {
                        *v -= f * pr;
                    }
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes `obj . x` over the current tableau with Bland's rule,
    /// allowing only columns in `allowed`. Returns false when unbounded.
    fn optimize(&mut self, obj: &[f64], allowed: &dyn Fn(usize) -> bool) -> bool {
        loop {
            // Reduced costs: obj_j - sum_i obj_basis(i) * t[i][j].
            let reduced = |tab: &Tableau, j: usize| -> f64 {
                obj[j] - tab.basis.iter().enumerate().map(|(i, &b)| obj[b] * tab.t[i][j]).sum::<f64>()
            };
            let Some(enter) = (0..self.cols).find(|&j| allowed(j) && reduced(self, j) > PIVOT_TOL) else {
                return true;
            };
            let rhs = self.cols;
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.t.len() {
                let a = self.t[i][enter];
                if a > PIVOT_TOL {
                    let ratio = self.t[i][rhs] / a;
                    leave = match leave {
                        Some((r, best)) if ratio > best + 1e-12 => Some((r, best)),
                        Some((r, best)) if (ratio - best).abs() <= 1e-12 && self.basis[r] < self.basis[i] => {
                            Some((r, best))
                        }
                        _ => Some((i, ratio)),
                    };
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, enter),
                None => return false,
            }
        }
    }
}

/// Maximizes `c . x` subject to `a x <= b` and `0 <= x <= upper`.
pub fn maximize(c: &[f64], a: &[Vec<f64>], b: &[f64], upper: &[f64]) -> LpOutcome {
    let n = c.len();
    assert_eq!(a.len(), b.len());
    assert_eq!(upper.len(), n);
    let mut rows: Vec<(Vec<f64>, f64)> = a.iter().cloned().zip(b.iter().copied()).collect();
    for (j, &u) in upper.iter().enumerate() {
        if u.is_finite() {
            let mut r = vec![0.0; n];
            r[j] = 1.0;
            rows.push((r, u));
        }
    }
    let m = rows.len();
    // Columns: x (n), slacks (m), artificials (m).
    let cols = n + 2 * m;
    let mut t = vec![vec![0.0; cols + 1]; m];
    let mut basis = vec![0; m];
    let mut needs_phase1 = false;
    for (i, (r, rhs)) in rows.iter().enumerate() {
        let sign = if *rhs < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            t[i][j] = sign * r[j];
        }
        t[i][n + i] = sign;
        t[i][cols] = sign * rhs;
        if sign < 0.0 {
            t[i][n + m + i] = 1.0;
            basis[i] = n + m + i;
            needs_phase1 = true;
        } else {
            basis[i] = n + i;
        }
    }
    let mut tab = Tableau { t, basis, cols };
    if needs_phase1 {
        let mut obj = vec![0.0; cols];
        for (i, &bcol) in tab.basis.iter().enumerate() {
            if bcol >= n + m {
                obj[n + m + i] = -1.0;
            }
        }
        tab.optimize(&obj, &|_| true);
        let infeas: f64 = tab
            .basis
            .iter()
            .enumerate()
            .filter(|(_, &bc)| bc >= n + m)
            .map(|(i, _)| tab.t[i][cols])
            .sum();
        if infeas > 1e-9 {
            return LpOutcome::Infeasible;
        }
        // Drive remaining (zero-valued) artificials out of the basis.
        for i in 0..m {
            if tab.basis[i] >= n + m {
                if let Some(j) = (0..n + m).find(|&j| tab.t[i][j].abs() > PIVOT_TOL) {
                    tab.pivot(i, j);
                }
            }
        }
    }
    let mut obj = vec![0.0; cols];
    obj[..n].copy_from_slice(c);
    if !tab.optimize(&obj, &|j| j < n + m) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![0.0; n];
    for (i, &bc) in tab.basis.iter().enumerate() {
        if bc < n {
            x[bc] = tab.t[i][cols];
        }
    }
    for (xj, &u) in x.iter_mut().zip(upper) {
        *xj = xj.clamp(0.0, u);
    }
    let objective = c.iter().zip(&x).map(|(a, b)| a * b).sum();
    LpOutcome::Optimal { x, objective }
}
