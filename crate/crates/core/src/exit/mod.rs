//! EXIT analysis of punctured two-user LDPC ensembles.
//!
//! Messages are modelled as consistent Gaussian LLRs and tracked through
//! their mutual information with the transmitted bit. The state nodes are
//! modelled through the `F` functions, which map the mean of the other
//! user's state-bound message to the mean of the message a state node
//! sends back.

mod jfun;
mod quadrature;

use std::io::Write;

pub use jfun::{j, j_complement, j_exact, j_inv, j_inv_capped, SIGMA_MAX};
pub use quadrature::{softplus_expectation, GaussHermite, GaussLegendre, Resolution, CHECK_ORDER, ORDER, PANEL_ORDER, SPLIT_SIGMA};

use crate::ensembles::{Ensemble, PuncturingDistribution};
use crate::error::{Error, Result};

/// Mutual information regarded as full knowledge.
pub const SUCCESS_MI: f64 = 1.0 - 1e-4;
/// Iteration cap of the coupled recursion.
pub const MAX_ITERATIONS: usize = 5000;
/// Progress per iteration below which the recursion counts as stuck.
pub const STALL_TOLERANCE: f64 = 1e-9;
/// Tolerance of the threshold bisection.
pub const THRESHOLD_TOLERANCE: f64 = 1e-4;
/// Largest relative disagreement allowed between the two node budgets.
pub const QUADRATURE_TOLERANCE: f64 = 1e-8;

/// Default threshold search bracket in noise standard deviation.
pub const THRESHOLD_LO: f64 = 0.2;
pub const THRESHOLD_HI: f64 = 3.0;

/// Which branch of the state-node function: the other user's symbol equal
/// to (`Plus`) or opposite to (`Minus`) this user's.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

/// `F` for a user with normalized amplitude `a = sqrt(p_own / sigma^2)`
/// sharing the channel with amplitude `b = sqrt(p_other / sigma^2)`.
fn f_with(res: Resolution, mu: f64, a: f64, b: f64, branch: Branch) -> f64 {
    let m = mu + 2.0 * b * b;
    let v = 2.0 * m;
    let c = 4.0 * a * b;
    let e = |mean| softplus_expectation(mean, v, res);
    match branch {
        Branch::Plus => e(m) - e(-m - c) - mu + 2.0 * (a * a - b * b),
        Branch::Minus => e(-m) - e(m - c) + mu + 2.0 * (a - b).powi(2),
    }
}

/// Normalized amplitudes `(own, other)` of `user` (1 or 2).
pub fn normalized_amplitudes(p: [f64; 2], sigma2: f64, user: usize) -> (f64, f64) {
    let (own, other) = if user == 1 { (p[0], p[1]) } else { (p[1], p[0]) };
    ((own / sigma2).sqrt(), (other / sigma2).sqrt())
}

/// Mean of the state-to-variable LLR for `user` given the mean `mu` of
/// the other user's variable-to-state LLR.
///
/// Evaluated at two node budgets; disagreement beyond
/// [`QUADRATURE_TOLERANCE`] is an error.
pub fn f_function(mu: f64, p: [f64; 2], sigma2: f64, user: usize, branch: Branch) -> Result<f64> {
    if !(mu >= 0.0) || !mu.is_finite() {
        return Err(Error::Domain(format!("F needs a finite mean >= 0, got {mu}")));
    }
    if user != 1 && user != 2 {
        return Err(Error::Argument(format!("user must be 1 or 2, got {user}")));
    }
    let (a, b) = normalized_amplitudes(p, sigma2, user);
    let hi = f_with(Resolution::Default, mu, a, b, branch);
    let lo = f_with(Resolution::Check, mu, a, b, branch);
    if !hi.is_finite() || (hi - lo).abs() > QUADRATURE_TOLERANCE * hi.abs().max(1.0) {
        return Err(Error::Numeric(format!(
            "F quadrature unconverged at mu = {mu}: {hi} vs {lo}"
        )));
    }
    Ok(hi)
}

/// `F` exactly as the closed forms are usually printed, where the user-2
/// minus branch carries the opposite overall sign.
pub fn f_function_printed(mu: f64, p: [f64; 2], sigma2: f64, user: usize, branch: Branch) -> Result<f64> {
    let v = f_function(mu, p, sigma2, user, branch)?;
    Ok(if user == 2 && branch == Branch::Minus { -v } else { v })
}

/// Variable-side description of one user.
#[derive(Debug, Clone)]
pub struct UserModel {
    /// `(degree, lambda_i, pi_i)`.
    var: Vec<(usize, f64, f64)>,
    /// `(degree, rho_k)`.
    check: Vec<(usize, f64)>,
    /// `1/2 sum_i L_i i (1 - pi_i)`: multiplies `J^-1(I_Av)^2` to give the
    /// state-bound mean seen by the other user.
    state_weight: f64,
}

impl UserModel {
    pub fn new(ens: &Ensemble, pi: &PuncturingDistribution) -> Result<Self> {
        pi.validate_for(ens)?;
        let node = ens.node_perspective();
        let var = ens.lambda().iter().map(|(&d, &l)| (d, l, pi.get(d))).collect();
        let check = ens.rho().iter().map(|(&d, &r)| (d, r)).collect();
        let state_weight = 0.5 * node.iter().map(|(&d, &l)| l * d as f64 * (1.0 - pi.get(d))).sum::<f64>();
        Ok(UserModel { var, check, state_weight })
    }

    /// Mean argument for the other user's `F` functions.
    pub fn state_mean(&self, i_av: f64) -> f64 {
        let s = j_inv_capped(i_av);
        self.state_weight * s * s
    }

    /// Variable-node EXIT function.
    pub fn i_ev(&self, i_av: f64, i_es: f64) -> f64 {
        let sa2 = j_inv_capped(i_av).powi(2);
        let se2 = j_inv_capped(i_es).powi(2);
        self.var
            .iter()
            .map(|&(d, l, p)| {
                let prior = (d - 1) as f64 * sa2;
                l * ((1.0 - p) * j((se2 + prior).sqrt()) + p * j(prior.sqrt()))
            })
            .sum()
    }

    /// The two per-degree contributions of the variable-node EXIT
    /// function: `(unpunctured, punctured)` for each degree.
    pub fn i_ev_terms(&self, i_av: f64, i_es: f64) -> Vec<(usize, f64, f64)> {
        let sa2 = j_inv_capped(i_av).powi(2);
        let se2 = j_inv_capped(i_es).powi(2);
        self.var
            .iter()
            .map(|&(d, _, _)| {
                let prior = (d - 1) as f64 * sa2;
                (d, j((se2 + prior).sqrt()), j(prior.sqrt()))
            })
            .collect()
    }

    /// Check-node EXIT function.
    pub fn i_ec(&self, i_ac: f64) -> f64 {
        i_ec_terms(&self.check, i_ac)
    }
}

fn i_ec_terms(check: &[(usize, f64)], i_ac: f64) -> f64 {
    let s = j_inv_capped(1.0 - i_ac);
    check
        .iter()
        .map(|&(k, r)| r * j_complement(((k - 1) as f64).sqrt() * s))
        .sum()
}

/// Variable-node EXIT function of a punctured ensemble.
pub fn i_ev(i_av: f64, i_es: f64, ens: &Ensemble, pi: &PuncturingDistribution) -> Result<f64> {
    Ok(UserModel::new(ens, pi)?.i_ev(i_av, i_es))
}

/// Check-node EXIT function.
pub fn i_ec(i_ac: f64, ens: &Ensemble) -> f64 {
    let check: Vec<(usize, f64)> = ens.rho().iter().map(|(&d, &r)| (d, r)).collect();
    i_ec_terms(&check, i_ac)
}

fn i_es_from_mean(mu: f64, a: f64, b: f64) -> f64 {
    let fp = f_with(Resolution::Default, mu, a, b, Branch::Plus).max(0.0);
    let fm = f_with(Resolution::Default, mu, a, b, Branch::Minus).max(0.0);
    0.5 * j((2.0 * fp).sqrt()) + 0.5 * j((2.0 * fm).sqrt())
}

/// Mutual information of the state-to-variable messages of `user`, given
/// the a-priori information `i_av_other` of the other user.
pub fn i_es(
    i_av_other: f64,
    pi_other: &PuncturingDistribution,
    ens_other: &Ensemble,
    p: [f64; 2],
    sigma2: f64,
    user: usize,
) -> Result<f64> {
    if user != 1 && user != 2 {
        return Err(Error::Argument(format!("user must be 1 or 2, got {user}")));
    }
    let other = UserModel::new(ens_other, pi_other)?;
    let (a, b) = normalized_amplitudes(p, sigma2, user);
    Ok(i_es_from_mean(other.state_mean(i_av_other), a, b))
}

/// One user's quantities at one iteration of the coupled recursion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExitPoint {
    pub i_av: f64,
    pub i_es: f64,
    pub i_ev: f64,
    pub i_ac: f64,
    pub i_ec: f64,
}

/// How the coupled recursion ended.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub converged: bool,
    pub iterations: usize,
    /// Final variable-side extrinsic information of both users.
    pub final_i_ev: [f64; 2],
}

/// Two users sharing the channel with powers `p`.
#[derive(Debug, Clone)]
pub struct ExitSystem {
    pub users: [UserModel; 2],
    pub p: [f64; 2],
}

impl ExitSystem {
    pub fn new(
        ens: [&Ensemble; 2],
        pi: [&PuncturingDistribution; 2],
        p: [f64; 2],
    ) -> Result<Self> {
        if !(p[0] > 0.0 && p[1] > 0.0) {
            return Err(Error::Argument(format!("powers must be positive, got {p:?}")));
        }
        Ok(ExitSystem { users: [UserModel::new(ens[0], pi[0])?, UserModel::new(ens[1], pi[1])?], p })
    }

    /// State-node information of user index `j` (0 or 1) given the other
    /// user's a-priori information.
    pub fn i_es(&self, j: usize, i_av_other: f64, sigma: f64) -> f64 {
        let (a, b) = normalized_amplitudes(self.p, sigma * sigma, j + 1);
        i_es_from_mean(self.users[1 - j].state_mean(i_av_other), a, b)
    }

    /// Runs the coupled recursion, calling `visit(iteration, points)` on
    /// every iteration.
    pub fn run(&self, sigma: f64, mut visit: impl FnMut(usize, &[ExitPoint; 2])) -> ConvergenceReport {
        let mut i_av = [0.0f64; 2];
        for it in 1..=MAX_ITERATIONS {
            let i_es = [self.i_es(0, i_av[1], sigma), self.i_es(1, i_av[0], sigma)];
            let i_ev = [0, 1].map(|j| self.users[j].i_ev(i_av[j], i_es[j]));
            let i_ec = [0, 1].map(|j| self.users[j].i_ec(i_ev[j]));
            let pts = [0, 1].map(|j| ExitPoint { i_av: i_av[j], i_es: i_es[j], i_ev: i_ev[j], i_ac: i_ev[j], i_ec: i_ec[j] });
            visit(it, &pts);
            if i_ev[0] >= SUCCESS_MI && i_ev[1] >= SUCCESS_MI {
                return ConvergenceReport { converged: true, iterations: it, final_i_ev: i_ev };
            }
            let step = (i_ec[0] - i_av[0]).abs().max((i_ec[1] - i_av[1]).abs());
            if step < STALL_TOLERANCE {
                return ConvergenceReport { converged: false, iterations: it, final_i_ev: i_ev };
            }
            i_av = i_ec;
        }
        let i_es = [self.i_es(0, i_av[1], sigma), self.i_es(1, i_av[0], sigma)];
        let i_ev = [0, 1].map(|j| self.users[j].i_ev(i_av[j], i_es[j]));
        ConvergenceReport { converged: false, iterations: MAX_ITERATIONS, final_i_ev: i_ev }
    }

    pub fn converges(&self, sigma: f64) -> bool {
        self.run(sigma, |_, _| {}).converged
    }

    /// Per-iteration trajectory of both users.
    pub fn trajectory(&self, sigma: f64) -> (Vec<[ExitPoint; 2]>, ConvergenceReport) {
        let mut out = Vec::new();
        let rep = self.run(sigma, |_, p| out.push(*p));
        (out, rep)
    }

    /// Largest noise standard deviation at which the recursion succeeds,
    /// by bisection within `[lo, hi]`.
    pub fn threshold_in(&self, lo: f64, hi: f64) -> Result<f64> {
        if !(lo > 0.0 && hi > lo) {
            return Err(Error::Argument(format!("bad bracket [{lo}, {hi}]")));
        }
        if !self.converges(lo) || self.converges(hi) {
            return Err(Error::Bracket { lo, hi });
        }
        let (mut lo, mut hi) = (lo, hi);
        while hi - lo > THRESHOLD_TOLERANCE {
            let mid = 0.5 * (lo + hi);
            if self.converges(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    }

    /// [`ExitSystem::threshold_in`] over a default bracket.
    pub fn threshold(&self) -> Result<f64> {
        self.threshold_in(THRESHOLD_LO, THRESHOLD_HI)
    }
}

/// Whether the coupled recursion reaches full information at noise
/// standard deviation `sigma`.
pub fn converges(
    ens: [&Ensemble; 2],
    pi: [&PuncturingDistribution; 2],
    p: [f64; 2],
    sigma: f64,
) -> Result<bool> {
    Ok(ExitSystem::new(ens, pi, p)?.converges(sigma))
}

/// Decoding threshold in noise standard deviation.
pub fn threshold(ens: [&Ensemble; 2], pi: [&PuncturingDistribution; 2], p: [f64; 2]) -> Result<f64> {
    ExitSystem::new(ens, pi, p)?.threshold()
}

/// Writes a trajectory as CSV: `iteration,user,i_av,i_ev,i_es`.
pub fn write_trajectory(points: &[[ExitPoint; 2]], mut w: impl Write) -> Result<()> {
    writeln!(w, "iteration,user,i_av,i_ev,i_es")?;
    for (it, pair) in points.iter().enumerate() {
        for (j, p) in pair.iter().enumerate() {
            writeln!(w, "{},{},{:.10},{:.10},{:.10}", it + 1, j + 1, p.i_av, p.i_ev, p.i_es)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::presets;
    use approx::assert_abs_diff_eq;

    fn regular36() -> Ensemble {
        Ensemble::from_pairs(&[(3, 1.0)], &[(6, 1.0)]).unwrap()
    }

    #[test]
    fn i_ec_endpoints() {
        let e = regular36();
        assert_abs_diff_eq!(i_ec(1.0, &e), 1.0, epsilon = 1e-12);
        assert!(i_ec(0.0, &e) < 1e-12);
        let r7 = Ensemble::from_pairs(&[(3, 1.0)], &[(7, 1.0)]).unwrap();
        let direct = 1.0 - j(6f64.sqrt() * j_inv(0.1).unwrap());
        assert_abs_diff_eq!(i_ec(0.9, &r7), direct, epsilon = 1e-12);
    }

    #[test]
    fn i_ev_edge_cases() {
        let e = presets::equal_power_mother();
        let full = crate::ensembles::random_puncturing(0.0, &e).unwrap();
        let one = PuncturingDistribution::new(e.lambda().keys().map(|&d| (d, 1.0)).collect()).unwrap();
        assert_abs_diff_eq!(i_ev(0.0, 0.37, &e, &one).unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(i_ev(0.0, 0.37, &e, &full).unwrap(), 0.37, epsilon = 1e-9);
    }

    #[test]
    fn f_single_user_limit() {
        let v = f_function(3.0, [1.0, 1e-12], 0.5, 1, Branch::Plus).unwrap();
        assert_abs_diff_eq!(v, 2.0 / 0.5, epsilon = 1e-5);
        let v = f_function(3.0, [1.0, 1e-12], 0.5, 1, Branch::Minus).unwrap();
        assert_abs_diff_eq!(v, 2.0 / 0.5, epsilon = 1e-5);
    }

    #[test]
    fn printed_user2_minus_branch_has_flipped_sign() {
        let p = [1.0, 1.0];
        let u1 = f_function_printed(2.0, p, 0.8, 1, Branch::Minus).unwrap();
        let u2 = f_function_printed(2.0, p, 0.8, 2, Branch::Minus).unwrap();
        assert!(u1 > 0.0);
        assert_abs_diff_eq!(u2, -u1, epsilon = 1e-12);
    }

    #[test]
    fn noiseless_and_hopeless() {
        let e = presets::equal_power_mother();
        let z = PuncturingDistribution::zero();
        let sys = ExitSystem::new([&e, &e], [&z, &z], [1.0, 1.0]).unwrap();
        assert!(sys.converges(0.05));
        assert!(!sys.converges(1000.0));
    }
}
