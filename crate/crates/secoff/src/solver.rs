//! Lagrangian dual solver for the joint offloading, power and subcarrier
//! assignment problem.
//!
//! Dualizing each user's task-completion constraint with a multiplier
//! `lambda_k >= 0` (joules per bit) makes the inner minimization separable:
//!
//! * per user, the local bit count minimizes
//!   `alpha * zeta * C^3 * l^3 / T^2 - lambda * l` on `[0, l_max]`, solved in
//!   closed form by [`optimal_local_bits`];
//! * per subcarrier and user, the transmit power minimizes the score
//!   [`psi`], `alpha * T * p - lambda * T * B * secrecy_efficiency(p)`,
//!   solved in closed form by [`optimal_power`];
//! * each subcarrier then goes to the user with the lowest score
//!   ([`assign_subcarrier`]), which resolves the combinatorial part exactly
//!   for the given multipliers.
//!
//! The outer problem, maximizing the concave dual function over
//! `lambda >= 0`, is solved by a central-cut ellipsoid method with
//! feasibility cuts on negative components and objective cuts from
//! [`subgradient`]. Because the number of users is small the quadratic
//! per-iteration cost of the ellipsoid update is irrelevant, and unlike a
//! plain subgradient ascent it needs no step-size tuning and yields a
//! certified suboptimality width at termination.
//!
//! A dual-optimal multiplier does not by itself produce a feasible primal
//! point: the candidate allocation can under- or overshoot the task
//! constraints by the duality gap. [`recover_primal`] therefore keeps the
//! subcarrier assignment from the best multiplier and re-solves each user's
//! now-convex problem exactly, by bisection on a private multiplier, so the
//! returned allocation always satisfies the constraints when one exists for
//! that assignment.

use crate::model::{
    local_energy, max_local_bits, secrecy_rate, secrecy_spectral_efficiency,
    total_weighted_energy, Allocation, ChannelSet, SolveReport, SolveStatus, SystemConfig,
    UserProfile,
};
use std::f64::consts::LN_2;

/// Knobs for the dual solve and the primal repair pass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Ellipsoid iteration budget per restart attempt.
    pub max_iters: usize,
    /// Relative width tolerance: iteration stops once
    /// `sqrt(s' A s) <= dual_tol * max(1, |best_dual|)`.
    pub dual_tol: f64,
    /// Initial ball radius as a multiple of the norm of the starting
    /// multiplier guess.
    pub initial_radius: f64,
    /// Factor applied to the radius when a solve terminates at the ball
    /// boundary and is restarted.
    pub radius_growth: f64,
    /// Re-solve each user's subproblem exactly after the dual converges so
    /// the reported allocation is feasible. Disabling this returns the raw
    /// dual candidate, whose task constraints are only met up to the duality
    /// gap; status then reflects dual convergence alone.
    pub repair: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            max_iters: 2000,
            dual_tol: 1e-5,
            initial_radius: 10.0,
            radius_growth: 2.0,
            repair: true,
        }
    }
}

/// Ellipsoid iteration state and the best dual point seen.
#[derive(Debug, Clone, PartialEq)]
pub struct DualState {
    /// Multiplier to use for primal recovery; equals `best_lambda`.
    pub lambda: Vec<f64>,
    /// Final ellipsoid center. May have negative components; it is the
    /// search state, not the answer.
    pub ellipsoid_center: Vec<f64>,
    /// Final ellipsoid shape matrix (symmetric positive definite).
    pub ellipsoid_shape: Vec<Vec<f64>>,
    /// Largest dual value evaluated at a feasible multiplier.
    pub best_dual_j: f64,
    /// Feasible multiplier attaining `best_dual_j`.
    pub best_lambda: Vec<f64>,
    /// Iterations spent, summed over restart attempts.
    pub iterations: usize,
    /// Whether the width criterion was met on the final attempt.
    pub converged: bool,
}

/// Whether users may compute bits locally. `Disabled` forces `l = 0`
/// everywhere, which turns the solver into a pure secure-offloading planner;
/// restricted benchmark schemes use it so they share this code path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum LocalComputeMode {
    Enabled,
    Disabled,
}

const MAX_RESTARTS: usize = 12;
/// Repair bisection: accepted rate overshoot as a fraction of the task.
const REPAIR_SURPLUS_FRAC: f64 = 1e-9;
const REPAIR_MAX_BISECTIONS: usize = 200;
const BRACKET_MAX_DOUBLINGS: usize = 2000;

/// Minimizer of `alpha * zeta * C^3 * l^3 / T^2 - lambda * l` over
/// `[0, max_local_bits]`: the stationary point
/// `sqrt(lambda * T^2 / (3 * alpha * zeta * C^3))`, clamped at the CPU cap.
///
/// Larger multipliers price undelivered bits higher and pull more of the
/// task onto the local CPU.
pub fn optimal_local_bits(lambda_k: f64, user: &UserProfile, cfg: &SystemConfig) -> f64 {
    debug_assert!(lambda_k >= 0.0, "multiplier must be nonnegative");
    let c = user.cycles_per_bit;
    let t = cfg.block_time_s;
    let curvature = 3.0 * user.energy_weight * user.cap_coeff_j_per_cycle * c * c * c;
    let stationary = (lambda_k * t * t / curvature).sqrt();
    stationary.min(max_local_bits(user, cfg))
}

/// Per-subcarrier score of serving one user at power `p`: transmit energy
/// minus the multiplier-weighted secure bits it buys. Zero at `p = 0`, so
/// the minimum over `p >= 0` is never positive.
pub fn psi(
    power: f64,
    lambda_k: f64,
    h: f64,
    g: f64,
    alpha: f64,
    bandwidth_hz: f64,
    block_time_s: f64,
) -> f64 {
    debug_assert!(power >= 0.0);
    alpha * block_time_s * power
        - lambda_k
            * block_time_s
            * bandwidth_hz
            * secrecy_spectral_efficiency(power, h, g)
}

/// Power minimizing [`psi`] for one user on one subcarrier.
///
/// Cases:
/// * `h <= g`: no secrecy is possible, the link stays silent;
/// * `g = 0`: water-filling level `(lambda * B / (ln 2 * alpha) - 1/h)^+`;
/// * otherwise the stationarity condition is a quadratic in `p` whose
///   positive root is `(sqrt(D) - (h + g)) / (2 h g)` with
///   `D = (h - g)^2 + 4 * lambda * B * h * g * (h - g) / (ln 2 * alpha)`,
///   clipped at zero.
///
/// The result is independent of the block length: duration scales transmit
/// energy and delivered bits alike.
pub fn optimal_power(lambda_k: f64, h: f64, g: f64, alpha: f64, bandwidth_hz: f64) -> f64 {
    debug_assert!(lambda_k >= 0.0 && alpha > 0.0 && bandwidth_hz > 0.0);
    debug_assert!(h >= 0.0 && g >= 0.0);
    if h <= g {
        return 0.0;
    }
    let level = lambda_k * bandwidth_hz / (LN_2 * alpha);
    if g == 0.0 {
        return (level - 1.0 / h).max(0.0);
    }
    let diff = h - g;
    let disc = diff * diff + 4.0 * level * h * g * diff;
    debug_assert!(disc >= 0.0);
    ((disc.sqrt() - (h + g)) / (2.0 * h * g)).max(0.0)
}

/// Best (power, score) for user `k` on subcarrier `n` at its multiplier.
#[inline]
fn user_subcarrier_bid(
    lambda_k: f64,
    k: usize,
    n: usize,
    channels: &ChannelSet,
    users: &[UserProfile],
    cfg: &SystemConfig,
) -> (f64, f64) {
    let h = channels.ap_gain(k, n);
    let g = channels.worst_eve_gain(k, n);
    let alpha = users[k].energy_weight;
    let p = optimal_power(lambda_k, h, g, alpha, cfg.bandwidth_hz);
    let score = psi(p, lambda_k, h, g, alpha, cfg.bandwidth_hz, cfg.block_time_s);
    (p, score)
}

/// Awards subcarrier `n` to the user with the lowest score at its optimal
/// power. Ties go to the lowest user index, which keeps the assignment
/// deterministic; in particular a subcarrier nobody profits from is parked
/// on user 0 at zero power.
///
/// Returns `(winner, winner_power)`.
pub fn assign_subcarrier(
    n: usize,
    lambda: &[f64],
    channels: &ChannelSet,
    users: &[UserProfile],
    cfg: &SystemConfig,
) -> (usize, f64) {
    debug_assert_eq!(lambda.len(), users.len());
    let mut winner = 0usize;
    let mut winner_power = 0.0;
    let mut best_score = f64::INFINITY;
    for k in 0..users.len() {
        let (p, score) = user_subcarrier_bid(lambda[k], k, n, channels, users, cfg);
        if score < best_score {
            best_score = score;
            winner = k;
            winner_power = p;
        }
    }
    (winner, winner_power)
}

/// Evaluates the dual function at `lambda` and returns its value together
/// with the minimizing candidate allocation.
///
/// The value is assembled as
/// `sum_k (alpha_k * E_loc(l_k) - lambda_k * l_k) + sum_n min_k min_p psi
/// + sum_k lambda_k * L_k`, which is exact up to rounding because every
/// inner minimum is closed-form. It is therefore a valid lower bound on the
/// optimal weighted energy for any `lambda >= 0`.
pub fn dual_eval(
    lambda: &[f64],
    channels: &ChannelSet,
    users: &[UserProfile],
    cfg: &SystemConfig,
) -> (f64, Allocation) {
    dual_eval_mode(lambda, channels, users, cfg, LocalComputeMode::Enabled)
}

pub(crate) fn dual_eval_mode(
    lambda: &[f64],
    channels: &ChannelSet,
    users: &[UserProfile],
    cfg: &SystemConfig,
    mode: LocalComputeMode,
) -> (f64, Allocation) {
    let num_users = users.len();
    let n_subs = channels.num_subcarriers();
    debug_assert_eq!(lambda.len(), num_users);
    debug_assert_eq!(channels.num_users(), num_users);
    debug_assert!(lambda.iter().all(|&v| v >= 0.0));

    let mut alloc = Allocation::zeros(num_users, n_subs);
    let mut value = 0.0;
    for (k, user) in users.iter().enumerate() {
        let l = match mode {
            LocalComputeMode::Enabled => optimal_local_bits(lambda[k], user, cfg),
            LocalComputeMode::Disabled => 0.0,
        };
        alloc.local_bits[k] = l;
        value += user.energy_weight * local_energy(l, user, cfg) - lambda[k] * l;
        value += lambda[k] * user.task_bits;
    }
    for n in 0..n_subs {
        let mut best_score = f64::INFINITY;
        let mut winner = 0usize;
        let mut winner_power = 0.0;
        for k in 0..num_users {
            let (p, score) = user_subcarrier_bid(lambda[k], k, n, channels, users, cfg);
            if score < best_score {
                best_score = score;
                winner = k;
                winner_power = p;
            }
        }
        alloc.owner[n] = winner;
        alloc.power[winner][n] = winner_power;
        value += best_score;
    }
    (value, alloc)
}

/// Supergradient of the dual function at `lambda` for the minimizing
/// candidate returned by [`dual_eval`]: per user,
/// `(L_k - l_k) - T * R_k(candidate)`, the signed shortfall between demanded
/// and delivered bits.
pub fn subgradient(
    lambda: &[f64],
    candidate: &Allocation,
    channels: &ChannelSet,
    users: &[UserProfile],
    cfg: &SystemConfig,
) -> Vec<f64> {
    debug_assert_eq!(lambda.len(), users.len());
    users
        .iter()
        .enumerate()
        .map(|(k, user)| {
            let owned = candidate.owned_mask(k);
            let g = channels.worst_eve_row(k);
            let rate =
                secrecy_rate(&owned, &candidate.power[k], channels.ap_row(k), &g, cfg);
            (user.task_bits - candidate.local_bits[k]) - cfg.block_time_s * rate
        })
        .collect()
}

fn quadform(shape: &[Vec<f64>], v: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (row, &vi) in shape.iter().zip(v) {
        let mut inner = 0.0;
        for (a, &vj) in row.iter().zip(v) {
            inner += a * vj;
        }
        acc += vi * inner;
    }
    acc
}

fn identity_scaled(dim: usize, diag: f64) -> Vec<Vec<f64>> {
    let mut m = vec![vec![0.0; dim]; dim];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = diag;
    }
    m
}

/// One central-cut update retaining the half-space `cut' (z - center) <= 0`.
/// Returns false when the cut direction has degenerated numerically.
fn ellipsoid_update(center: &mut [f64], shape: &mut [Vec<f64>], cut: &[f64]) -> bool {
    let dim = center.len();
    let shape_cut: Vec<f64> = shape
        .iter()
        .map(|row| row.iter().zip(cut).map(|(a, c)| a * c).sum())
        .collect();
    let norm2: f64 = shape_cut.iter().zip(cut).map(|(q, c)| q * c).sum();
    if !(norm2 > 0.0) || !norm2.is_finite() {
        return false;
    }
    let norm = norm2.sqrt();
    let step: Vec<f64> = shape_cut.iter().map(|q| q / norm).collect();

    if dim == 1 {
        // The n = 1 ellipsoid degenerates to interval halving.
        center[0] -= 0.5 * step[0];
        shape[0][0] *= 0.25;
        return shape[0][0].is_finite() && shape[0][0] > 0.0;
    }

    let df = dim as f64;
    for (c, s) in center.iter_mut().zip(&step) {
        *c -= s / (df + 1.0);
    }
    let scale = df * df / (df * df - 1.0);
    let coeff = 2.0 / (df + 1.0);
    for i in 0..dim {
        for j in 0..dim {
            shape[i][j] = scale * (shape[i][j] - coeff * step[i] * step[j]);
        }
    }
    for i in 0..dim {
        for j in (i + 1)..dim {
            let sym = 0.5 * (shape[i][j] + shape[j][i]);
            shape[i][j] = sym;
            shape[j][i] = sym;
        }
    }
    shape.iter().enumerate().all(|(i, row)| row[i].is_finite() && row[i] > 0.0)
}

/// Maximizes the dual function over `lambda >= 0` with the ellipsoid method.
///
/// The starting center prices each user's bits as if the whole task were
/// computed locally (`alpha * zeta * C^3 * L^2 / T^2`), with a ball of
/// `initial_radius` times the norm of that guess. When a run terminates with
/// its center within 1% of the starting ball's boundary, the optimum is
/// suspected outside and the solve restarts from the final center with the
/// radius grown by `radius_growth`, a bounded number of times.
pub fn solve_dual(
    channels: &ChannelSet,
    users: &[UserProfile],
    cfg: &SystemConfig,
    opts: &SolverOptions,
) -> DualState {
    solve_dual_mode(channels, users, cfg, opts, LocalComputeMode::Enabled)
}

pub(crate) fn solve_dual_mode(
    channels: &ChannelSet,
    users: &[UserProfile],
    cfg: &SystemConfig,
    opts: &SolverOptions,
    mode: LocalComputeMode,
) -> DualState {
    let num_users = users.len();
    assert!(num_users >= 1, "need at least one user");
    assert_eq!(channels.num_users(), num_users, "channel user count mismatch");
    assert_eq!(channels.num_subcarriers(), cfg.num_subcarriers, "subcarrier count mismatch");
    assert!(opts.max_iters >= 1, "iteration budget must be positive");
    assert!(opts.dual_tol > 0.0 && opts.initial_radius > 0.0 && opts.radius_growth > 1.0);

    let t = cfg.block_time_s;
    let lambda0: Vec<f64> = users
        .iter()
        .map(|u| {
            let c = u.cycles_per_bit;
            u.energy_weight * u.cap_coeff_j_per_cycle * c * c * c * u.task_bits * u.task_bits
                / (t * t)
        })
        .collect();
    let norm0 = lambda0.iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut radius = (opts.initial_radius * norm0).max(1e-12);

    let mut center = lambda0.clone();
    let mut shape = identity_scaled(num_users, radius * radius);
    let mut best_dual = f64::NEG_INFINITY;
    let mut best_lambda = lambda0;
    let mut iterations = 0usize;
    let mut converged = false;

    for attempt in 0..=MAX_RESTARTS {
        let attempt_center = center.clone();
        shape = identity_scaled(num_users, radius * radius);
        converged = false;

        let mut attempt_iters = 0usize;
        while attempt_iters < opts.max_iters {
            attempt_iters += 1;
            iterations += 1;

            let cut: Vec<f64> = match center.iter().position(|&v| v < 0.0) {
                Some(j) => {
                    // Feasibility cut: keep z_j >= center_j.
                    let mut e = vec![0.0; num_users];
                    e[j] = -1.0;
                    e
                }
                None => {
                    let (value, candidate) = dual_eval_mode(&center, channels, users, cfg, mode);
                    if value > best_dual {
                        best_dual = value;
                        best_lambda = center.clone();
                    }
                    let s = subgradient(&center, &candidate, channels, users, cfg);
                    let width = quadform(&shape, &s).max(0.0).sqrt();
                    if width <= opts.dual_tol * best_dual.abs().max(1.0) {
                        converged = true;
                        break;
                    }
                    // Objective cut for maximization: keep s' (z - center) >= 0.
                    s.iter().map(|&v| -v).collect()
                }
            };
            if !ellipsoid_update(&mut center, &mut shape, &cut) {
                break;
            }
        }

        let drift = center
            .iter()
            .zip(&attempt_center)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        if drift >= 0.99 * radius && attempt < MAX_RESTARTS {
            // Terminated at the ball boundary: widen and go again from here.
            radius *= opts.radius_growth;
            continue;
        }
        break;
    }

    DualState {
        lambda: best_lambda.clone(),
        ellipsoid_center: center,
        ellipsoid_shape: shape,
        best_dual_j: best_dual,
        best_lambda,
        iterations,
        converged,
    }
}

struct UserRepair {
    local_bits: f64,
    power: Vec<f64>,
}

/// Exact solve of one user's convex subproblem under a fixed set of owned
/// subcarriers: bisection on the user's own multiplier until the delivered
/// bits match the task, reusing the closed-form maps for `l` and `p`.
fn repair_user(
    k: usize,
    owned: &[usize],
    lambda_hint: f64,
    channels: &ChannelSet,
    users: &[UserProfile],
    cfg: &SystemConfig,
    mode: LocalComputeMode,
) -> Option<UserRepair> {
    let user = &users[k];
    let t = cfg.block_time_s;
    let b = cfg.bandwidth_hz;
    let n_subs = channels.num_subcarriers();
    let task = user.task_bits;
    let local_cap = match mode {
        LocalComputeMode::Enabled => max_local_bits(user, cfg),
        LocalComputeMode::Disabled => 0.0,
    };

    // Saturation ceiling of the owned links in bits; the rate can approach
    // but never attain it at finite power.
    let mut rate_ceiling = 0.0f64;
    for &n in owned {
        let h = channels.ap_gain(k, n);
        let g = channels.worst_eve_gain(k, n);
        if g == 0.0 {
            if h > 0.0 {
                rate_ceiling = f64::INFINITY;
                break;
            }
        } else if h > g {
            rate_ceiling += t * b * (h / g).log2();
        }
    }
    let deliverable = task <= local_cap || task < local_cap + rate_ceiling;
    if !deliverable {
        return None;
    }
    if rate_ceiling == 0.0 {
        // No usable link: the task fits on the CPU, take it exactly.
        return Some(UserRepair { local_bits: task.min(local_cap), power: vec![0.0; n_subs] });
    }

    let evaluate = |mu: f64| -> (f64, Vec<f64>, f64) {
        // Bits past the task are pure waste; the dual map does not know that.
        let l = match mode {
            LocalComputeMode::Enabled => optimal_local_bits(mu, user, cfg).min(task),
            LocalComputeMode::Disabled => 0.0,
        };
        let mut power = vec![0.0; n_subs];
        let mut efficiency = 0.0;
        for &n in owned {
            let h = channels.ap_gain(k, n);
            let g = channels.worst_eve_gain(k, n);
            let p = optimal_power(mu, h, g, user.energy_weight, b);
            power[n] = p;
            efficiency += secrecy_spectral_efficiency(p, h, g);
        }
        let surplus = l + t * b * efficiency - task;
        (l, power, surplus)
    };

    let (l0, p0, s0) = evaluate(0.0);
    if s0 >= 0.0 {
        return Some(UserRepair { local_bits: l0, power: p0 });
    }

    let surplus_tol = REPAIR_SURPLUS_FRAC * task.max(1.0);
    let mut hi = lambda_hint.max(1e-18);
    let (mut l_hi, mut p_hi, mut s_hi) = evaluate(hi);
    let mut doublings = 0usize;
    while s_hi < 0.0 {
        doublings += 1;
        if doublings > BRACKET_MAX_DOUBLINGS {
            return None;
        }
        hi *= 2.0;
        let r = evaluate(hi);
        l_hi = r.0;
        p_hi = r.1;
        s_hi = r.2;
    }
    let mut lo = if doublings == 0 { 0.0 } else { hi * 0.5 };

    for _ in 0..REPAIR_MAX_BISECTIONS {
        if s_hi <= surplus_tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let (l_m, p_m, s_m) = evaluate(mid);
        if s_m >= 0.0 {
            hi = mid;
            l_hi = l_m;
            p_hi = p_m;
            s_hi = s_m;
        } else {
            lo = mid;
        }
    }
    // The upper end of the bracket always satisfies the constraint.
    Some(UserRepair { local_bits: l_hi, power: p_hi })
}

fn infeasible_report(state: &DualState, owner: Vec<usize>, num_users: usize) -> SolveReport {
    let n = owner.len();
    let mut alloc = Allocation::zeros(num_users, n);
    alloc.owner = owner;
    SolveReport {
        allocation: alloc,
        primal_energy_j: f64::INFINITY,
        dual_bound_j: state.best_dual_j,
        relative_gap: f64::INFINITY,
        iterations: state.iterations,
        status: SolveStatus::Infeasible,
    }
}

/// Builds the final report from a converged (or exhausted) dual state.
///
/// With repair enabled the subcarrier assignment of the best multiplier is
/// frozen and each user's subproblem is re-solved exactly, so the returned
/// allocation is feasible whenever the assignment admits any feasible point;
/// otherwise the report is `Infeasible`. The dual bound is carried over
/// unchanged, which makes `relative_gap` an honest optimality certificate.
pub fn recover_primal(
    state: &DualState,
    channels: &ChannelSet,
    users: &[UserProfile],
    cfg: &SystemConfig,
    opts: &SolverOptions,
) -> SolveReport {
    recover_primal_mode(state, channels, users, cfg, opts, LocalComputeMode::Enabled)
}

pub(crate) fn recover_primal_mode(
    state: &DualState,
    channels: &ChannelSet,
    users: &[UserProfile],
    cfg: &SystemConfig,
    opts: &SolverOptions,
    mode: LocalComputeMode,
) -> SolveReport {
    let num_users = users.len();
    let (_, candidate) = dual_eval_mode(&state.best_lambda, channels, users, cfg, mode);
    let status = if state.converged { SolveStatus::Optimal } else { SolveStatus::MaxIterations };

    if !opts.repair {
        let primal = total_weighted_energy(&candidate, users, cfg);
        let gap = if primal > 0.0 { (primal - state.best_dual_j) / primal } else { 0.0 };
        return SolveReport {
            allocation: candidate,
            primal_energy_j: primal,
            dual_bound_j: state.best_dual_j,
            relative_gap: gap,
            iterations: state.iterations,
            status,
        };
    }

    let mut owned_by: Vec<Vec<usize>> = vec![Vec::new(); num_users];
    for (n, &k) in candidate.owner.iter().enumerate() {
        owned_by[k].push(n);
    }

    let mut alloc = Allocation::zeros(num_users, candidate.owner.len());
    alloc.owner = candidate.owner.clone();
    for k in 0..num_users {
        match repair_user(k, &owned_by[k], state.best_lambda[k], channels, users, cfg, mode) {
            Some(r) => {
                alloc.local_bits[k] = r.local_bits;
                alloc.power[k] = r.power;
            }
            None => return infeasible_report(state, candidate.owner, num_users),
        }
    }

    let primal = total_weighted_energy(&alloc, users, cfg);
    let gap = if primal > 0.0 { (primal - state.best_dual_j) / primal } else { 0.0 };
    SolveReport {
        allocation: alloc,
        primal_energy_j: primal,
        dual_bound_j: state.best_dual_j,
        relative_gap: gap,
        iterations: state.iterations,
        status,
    }
}

/// Full pipeline: necessary feasibility precheck, dual solve, primal
/// recovery.
pub fn solve(
    channels: &ChannelSet,
    users: &[UserProfile],
    cfg: &SystemConfig,
    opts: &SolverOptions,
) -> SolveReport {
    solve_mode(channels, users, cfg, opts, LocalComputeMode::Enabled)
}

pub(crate) fn solve_mode(
    channels: &ChannelSet,
    users: &[UserProfile],
    cfg: &SystemConfig,
    opts: &SolverOptions,
    mode: LocalComputeMode,
) -> SolveReport {
    // A user whose task exceeds what all subcarriers plus its CPU could ever
    // deliver cannot be served under any assignment; fail fast with a
    // trivial (zero) dual bound.
    for (k, user) in users.iter().enumerate() {
        let mut bound = match mode {
            LocalComputeMode::Enabled => max_local_bits(user, cfg),
            LocalComputeMode::Disabled => 0.0,
        };
        for n in 0..channels.num_subcarriers() {
            let h = channels.ap_gain(k, n);
            let g = channels.worst_eve_gain(k, n);
            if g == 0.0 {
                if h > 0.0 {
                    bound = f64::INFINITY;
                    break;
                }
            } else if h > g {
                bound += cfg.block_time_s * cfg.bandwidth_hz * (h / g).log2();
            }
        }
        if user.task_bits > bound {
            let state = DualState {
                lambda: vec![0.0; users.len()],
                ellipsoid_center: vec![0.0; users.len()],
                ellipsoid_shape: identity_scaled(users.len(), 1.0),
                best_dual_j: 0.0,
                best_lambda: vec![0.0; users.len()],
                iterations: 0,
                converged: false,
            };
            return infeasible_report(&state, vec![0; channels.num_subcarriers()], users.len());
        }
    }

    let state = solve_dual_mode(channels, users, cfg, opts, mode);
    recover_primal_mode(&state, channels, users, cfg, opts, mode)
}
