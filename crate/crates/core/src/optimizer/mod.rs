//! Puncturing design by linear programming on EXIT constraints.
//!
//! For a fixed noise level the variable-node EXIT function is affine in the
//! per-degree puncturing fractions, so requiring an open decoding tunnel
//! on a grid of check-side inputs gives a linear program. The two users
//! are designed in turn until neither distribution changes.

mod simplex;

pub use simplex::{maximize, LpOutcome};

use crate::ensembles::{Ensemble, PuncturingDistribution};
use crate::error::{Error, Result};
use crate::exit::{ExitPoint, ExitSystem};

/// Settings of [`optimize_pi`] and [`alternate`].
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    /// Number of grid points on the check-side input.
    pub grid: usize,
    /// Smallest and largest grid value.
    pub grid_lo: f64,
    pub grid_hi: f64,
    /// Required margin of the tunnel at each grid point.
    pub epsilon: f64,
    /// Larger margins tried in turn when the design fails verification.
    /// They must stay below `1 - grid_hi`.
    pub retry_epsilons: Vec<f64>,
    /// LP re-solves with refreshed state-node information.
    pub max_refinements: usize,
    /// Stop refining when no fraction moves by more than this.
    pub refine_tolerance: f64,
    /// Alternation stops when no fraction moves by more than this.
    pub alternate_tolerance: f64,
    pub schedule: Schedule,
}

/// Order of the per-user designs within one alternation round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Schedule {
    /// User 2 is designed against the distribution user 1 just received.
    Sequential,
    /// Both users are designed against the previous round, and the next
    /// round's opponents are `old + relaxation * (new - old)`.
    Simultaneous { relaxation: f64 },
    /// `Simultaneous` with relaxation 0.5 when both users have the same
    /// ensemble and power, which keeps the pair symmetric; `Sequential`
    /// otherwise.
    Auto,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            grid: 100,
            grid_lo: 1e-3,
            grid_hi: 1.0 - 1e-3,
            epsilon: 1e-4,
            retry_epsilons: vec![2e-4, 5e-4],
            max_refinements: 20,
            refine_tolerance: 1e-6,
            alternate_tolerance: 1e-3,
            schedule: Schedule::Auto,
        }
    }
}

impl OptimizerConfig {
    pub fn grid_points(&self) -> Vec<f64> {
        let n = self.grid.max(2);
        (0..n)
            .map(|k| self.grid_lo + (self.grid_hi - self.grid_lo) * k as f64 / (n - 1) as f64)
            .collect()
    }
}

/// Result of a single-user design.
#[derive(Debug, Clone, PartialEq)]
pub struct Design {
    pub pi: PuncturingDistribution,
    /// Achieved puncturing rate `sum L_i pi_i`.
    pub rate: f64,
    /// False when the zero distribution already violates the constraints.
    pub feasible: bool,
    /// Margin used by the accepted design.
    pub epsilon: f64,
    /// Number of LP solves.
    pub lp_solves: usize,
    /// Set when no LP solution verified and the best one was scaled down
    /// by this factor until it did.
    pub scaled: Option<f64>,
}

/// Mapping from this user's check-side input to the other user's a-priori
/// information, read off a trajectory of the coupled recursion.
fn other_prior_along(traj: &[[ExitPoint; 2]], j: usize) -> impl Fn(f64) -> f64 + '_ {
    move |x: f64| {
        let o = 1 - j;
        let mut prev: Option<&[ExitPoint; 2]> = None;
        for pair in traj {
            if pair[j].i_ac >= x {
                return match prev {
                    None => pair[o].i_av,
                    Some(p) => {
                        let (x0, x1) = (p[j].i_ac, pair[j].i_ac);
                        let w = if x1 > x0 { (x - x0) / (x1 - x0) } else { 1.0 };
                        p[o].i_av + w * (pair[o].i_av - p[o].i_av)
                    }
                };
            }
            prev = Some(pair);
        }
        traj.last().map_or(0.0, |p| p[o].i_av)
    }
}

struct Problem<'a> {
    ens: &'a Ensemble,
    degrees: Vec<usize>,
    lambda: Vec<f64>,
    node: Vec<f64>,
}

impl<'a> Problem<'a> {
    fn new(ens: &'a Ensemble) -> Self {
        let node_map = ens.node_perspective();
        let degrees: Vec<usize> = ens.lambda().keys().copied().collect();
        let lambda = degrees.iter().map(|d| ens.lambda()[d]).collect();
        let node = degrees.iter().map(|d| node_map[d]).collect();
        Problem { ens, degrees, lambda, node }
    }

    fn to_pi(&self, x: &[f64]) -> Result<PuncturingDistribution> {
        PuncturingDistribution::new(
            self.degrees
                .iter()
                .zip(x)
                .filter(|(_, &v)| v > 1e-12)
                .map(|(&d, &v)| (d, v.min(1.0)))
                .collect(),
        )
    }

    fn rate(&self, x: &[f64]) -> f64 {
        self.node.iter().zip(x).map(|(l, v)| l * v).sum()
    }
}

/// Builds the LP rows for user `j` given state-node information per grid
/// point, and solves it.
fn solve_lp(
    sys: &ExitSystem,
    prob: &Problem,
    j: usize,
    grid: &[f64],
    i_es: &[f64],
    epsilon: f64,
) -> Option<Vec<f64>> {
    let model = &sys.users[j];
    let mut a = Vec::with_capacity(grid.len() + 1);
    let mut b = Vec::with_capacity(grid.len() + 1);
    for (&x, &es) in grid.iter().zip(i_es) {
        let i_av = model.i_ec(x);
        let terms = model.i_ev_terms(i_av, es);
        let mut row = Vec::with_capacity(prob.degrees.len());
        let mut rhs = -x - epsilon;
        for ((_, unp, pun), &l) in terms.iter().zip(&prob.lambda) {
            row.push(l * (unp - pun));
            rhs += l * unp;
        }
        a.push(row);
        b.push(rhs);
    }
    let r_m = prob.ens.code_rate();
    a.push(prob.node.clone());
    b.push(r_m);
    let upper = vec![1.0; prob.degrees.len()];
    match maximize(&prob.node, &a, &b, &upper) {
        LpOutcome::Optimal { x, .. } => Some(x),
        _ => None,
    }
}

fn system_for(
    j: usize,
    ens: &Ensemble,
    pi: &PuncturingDistribution,
    ens_other: &Ensemble,
    pi_other: &PuncturingDistribution,
    p: [f64; 2],
) -> Result<ExitSystem> {
    if j == 0 {
        ExitSystem::new([ens, ens_other], [pi, pi_other], p)
    } else {
        ExitSystem::new([ens_other, ens], [pi_other, pi], p)
    }
}

/// Maximizes the puncturing rate of `user` (1 or 2) subject to decoding
/// convergence at `sigma_target`, with the other user's distribution held
/// fixed.
pub fn optimize_pi(
    ens: &Ensemble,
    pi_other: &PuncturingDistribution,
    ens_other: &Ensemble,
    p: [f64; 2],
    user: usize,
    sigma_target: f64,
    cfg: &OptimizerConfig,
) -> Result<Design> {
    if user != 1 && user != 2 {
        return Err(Error::Argument(format!("user must be 1 or 2, got {user}")));
    }
    if cfg.grid < 2 {
        return Err(Error::Argument("grid needs at least two points".into()));
    }
    let j = user - 1;
    let prob = Problem::new(ens);
    let grid = cfg.grid_points();
    let zero = PuncturingDistribution::zero();
    let mut lp_solves = 0;

    let converges_with = |pi: &PuncturingDistribution| -> Result<bool> {
        Ok(system_for(j, ens, pi, ens_other, pi_other, p)?.converges(sigma_target))
    };
    let mut epsilons = vec![cfg.epsilon];
    epsilons.extend(cfg.retry_epsilons.iter().copied().filter(|&e| e > cfg.epsilon));
    let mut fallback: Option<Vec<f64>> = None;
    for &eps in &epsilons {
        let mut x = vec![0.0; prob.degrees.len()];
        let mut pi = zero.clone();
        let mut best: Option<(f64, Vec<f64>)> = None;
        for refinement in 0..cfg.max_refinements.max(1) {
            let sys = system_for(j, ens, &pi, ens_other, pi_other, p)?;
            let (traj, _) = sys.trajectory(sigma_target);
            let map = other_prior_along(&traj, j);
            let i_es: Vec<f64> = grid.iter().map(|&g| sys.i_es(j, map(g), sigma_target)).collect();
            lp_solves += 1;
            let Some(next) = solve_lp(&sys, &prob, j, &grid, &i_es, eps) else {
                if refinement == 0 && eps == cfg.epsilon {
                    log::info!("user {user}: LP infeasible at sigma {sigma_target}");
                    return Ok(Design { pi: zero, rate: 0.0, feasible: false, epsilon: eps, lp_solves, scaled: None });
                }
                break;
            };
            let moved = next.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            x = next;
            pi = prob.to_pi(&x)?;
            let rate = prob.rate(&x);
            if best.as_ref().is_none_or(|(r, _)| rate > *r) && converges_with(&pi)? {
                best = Some((rate, x.clone()));
            }
            if fallback.is_none() {
                fallback = Some(x.clone());
            }
            if moved <= cfg.refine_tolerance {
                break;
            }
        }
        if let Some((rate, x)) = best {
            return Ok(Design { pi: prob.to_pi(&x)?, rate, feasible: true, epsilon: eps, lp_solves, scaled: None });
        }
        log::info!("user {user}: no LP iterate with margin {eps} passes verification");
    }
    let x = fallback.unwrap_or_else(|| vec![0.0; prob.degrees.len()]);
    let scale = largest_verified_scale(|s| converges_with(&prob.to_pi(&scaled(&x, s))?))?;
    match scale {
        Some(s) => {
            let x = scaled(&x, s);
            Ok(Design {
                pi: prob.to_pi(&x)?,
                rate: prob.rate(&x),
                feasible: true,
                epsilon: *epsilons.last().unwrap(),
                lp_solves,
                scaled: Some(s),
            })
        }
        None => Err(Error::Numeric(format!(
            "user {user}: no verified design at sigma {sigma_target}, even without puncturing"
        ))),
    }
}

fn scaled(x: &[f64], s: f64) -> Vec<f64> {
    x.iter().map(|v| v * s).collect()
}

/// Largest `s` in `[0, 1]` (to 1e-4) with `ok(s)`, assuming `ok` is
/// monotone; `None` when even `s = 0` fails.
fn largest_verified_scale(mut ok: impl FnMut(f64) -> Result<bool>) -> Result<Option<f64>> {
    if ok(1.0)? {
        return Ok(Some(1.0));
    }
    if !ok(0.0)? {
        return Ok(None);
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > 1e-4 {
        let mid = 0.5 * (lo + hi);
        if ok(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(lo))
}

/// Result of [`alternate`].
#[derive(Debug, Clone, PartialEq)]
pub struct AlternateOutcome {
    pub pi: [PuncturingDistribution; 2],
    pub rates: [f64; 2],
    pub rounds: usize,
    /// Consecutive rounds agreed to within the tolerance.
    pub converged: bool,
    /// Some user's rate decreased between rounds.
    pub non_monotone: bool,
    /// Set when the final pair failed joint verification and both
    /// distributions were scaled down by this factor.
    pub scaled: Option<f64>,
    /// Rates after each round.
    pub history: Vec<[f64; 2]>,
}

fn mix(old: &PuncturingDistribution, new: &PuncturingDistribution, w: f64) -> Result<PuncturingDistribution> {
    let mut map = old.as_map().clone();
    for v in map.values_mut() {
        *v *= 1.0 - w;
    }
    for (d, v) in new.iter() {
        *map.entry(d).or_insert(0.0) += w * v;
    }
    map.retain(|_, v| *v > 1e-12);
    PuncturingDistribution::new(map)
}

fn scale_pi(pi: &PuncturingDistribution, s: f64) -> Result<PuncturingDistribution> {
    PuncturingDistribution::new(pi.iter().filter(|_| s > 0.0).map(|(d, v)| (d, v * s)).collect())
}

/// Designs both users in turn, starting from no puncturing, until the
/// distributions stop changing. The returned pair is verified jointly.
pub fn alternate(
    ens: [&Ensemble; 2],
    p: [f64; 2],
    sigma_target: f64,
    max_rounds: usize,
    cfg: &OptimizerConfig,
) -> Result<AlternateOutcome> {
    let schedule = match cfg.schedule {
        Schedule::Auto if ens[0] == ens[1] && p[0] == p[1] => Schedule::Simultaneous { relaxation: 0.5 },
        Schedule::Auto => Schedule::Sequential,
        s => s,
    };
    let zero = PuncturingDistribution::zero();
    // Opponent distributions the next designs are computed against.
    let mut against = [zero.clone(), zero.clone()];
    let mut pi = [zero.clone(), zero];
    let mut rates = [0.0; 2];
    let mut history = Vec::new();
    let mut non_monotone = false;
    let mut converged = false;
    let mut rounds = 0;
    while rounds < max_rounds.max(1) {
        rounds += 1;
        let prev = pi.clone();
        let prev_rates = rates;
        for j in 0..2 {
            let d = optimize_pi(ens[j], &against[1 - j], ens[1 - j], p, j + 1, sigma_target, cfg)?;
            pi[j] = d.pi;
            rates[j] = d.rate;
            if schedule == Schedule::Sequential {
                against[j] = pi[j].clone();
            }
        }
        history.push(rates);
        if rounds > 1 && (rates[0] < prev_rates[0] - 1e-9 || rates[1] < prev_rates[1] - 1e-9) {
            non_monotone = true;
        }
        let moved = match schedule {
            Schedule::Sequential => pi[0].max_abs_diff(&prev[0]).max(pi[1].max_abs_diff(&prev[1])),
            _ => pi[0].max_abs_diff(&against[0]).max(pi[1].max_abs_diff(&against[1])),
        };
        log::info!("round {rounds}: rates {:.4} {:.4}, max change {moved:.2e}", rates[0], rates[1]);
        if moved <= cfg.alternate_tolerance {
            converged = true;
            break;
        }
        if let Schedule::Simultaneous { relaxation } = schedule {
            for j in 0..2 {
                against[j] = mix(&against[j], &pi[j], relaxation)?;
            }
        }
    }
    let check = |s: f64| -> Result<bool> {
        let a = scale_pi(&pi[0], s)?;
        let b = scale_pi(&pi[1], s)?;
        Ok(ExitSystem::new(ens, [&a, &b], p)?.converges(sigma_target))
    };
    let scale = largest_verified_scale(check)?
        .ok_or_else(|| Error::Numeric(format!("no verified pair at sigma {sigma_target}")))?;
    let scaled = if scale < 1.0 {
        log::info!("final pair scaled by {scale:.4} to pass joint verification");
        for j in 0..2 {
            pi[j] = scale_pi(&pi[j], scale)?;
            rates[j] *= scale;
        }
        Some(scale)
    } else {
        None
    };
    Ok(AlternateOutcome { pi, rates, rounds, converged, non_monotone, scaled, history })
}
