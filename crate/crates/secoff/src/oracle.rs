//! Slow reference solvers used to certify the fast paths.
//!
//! Everything here trades speed for transparency: derivative-free searches
//! and exhaustive enumeration whose correctness is easy to audit. The test
//! suites compare the closed-form and dual results against these, so none of
//! this code shares search logic with the solver; it reuses only the
//! closed-form per-multiplier maps, which are themselves certified
//! separately against [`golden_section_psi_min`] and [`grid_psi_min`].

use crate::model::{
    local_energy, max_local_bits, secrecy_spectral_efficiency, Allocation, ChannelSet,
    SystemConfig, UserProfile,
};
use crate::solver::{optimal_local_bits, optimal_power, psi};
use thiserror::Error;

/// Tolerances for the reference solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOptions {
    /// Per-user bisection stops once the delivered-bits surplus is within
    /// this fraction of the task size.
    pub bisection_tol: f64,
    /// Grid resolution for [`grid_psi_min`]; at least 100.
    pub power_grid_points: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self { bisection_tol: 1e-9, power_grid_points: 1024 }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error(
        "exhaustive search over {num_users}^{num_subcarriers} assignments exceeds the 1e6 budget"
    )]
    SearchSpaceTooLarge { num_users: usize, num_subcarriers: usize },
}

/// One user's exact allocation for a fixed subcarrier assignment.
#[derive(Debug, Clone, PartialEq)]
pub struct PerUserSolution {
    pub local_bits: f64,
    /// Full-length power row; zero off the owned subcarriers.
    pub power: Vec<f64>,
    /// Weighted energy `alpha * (E_local + E_transmit)` in joules.
    pub energy_j: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BruteForceOutcome {
    Optimal { allocation: Allocation, energy_j: f64 },
    Infeasible,
}

const GOLDEN_TOL: f64 = 1e-8;

/// Derivative-free minimizer of the per-subcarrier score over
/// `[0, bracket_hi]` by golden-section search, to absolute accuracy
/// [`GOLDEN_TOL`] in the power. Requires `h > g` so the score is strictly
/// convex on the bracket.
pub fn golden_section_psi_min(
    lambda_k: f64,
    h: f64,
    g: f64,
    alpha: f64,
    bandwidth_hz: f64,
    block_time_s: f64,
    bracket_hi: f64,
) -> f64 {
    assert!(h > g, "score is only unimodal with a secrecy advantage");
    assert!(bracket_hi > 0.0 && bracket_hi.is_finite());
    let score = |p: f64| psi(p, lambda_k, h, g, alpha, bandwidth_hz, block_time_s);
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut a = 0.0f64;
    let mut b = bracket_hi;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = score(x1);
    let mut f2 = score(x2);
    while b - a > GOLDEN_TOL {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = score(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = score(x2);
        }
    }
    0.5 * (a + b)
}

/// Brute grid minimizer of the per-subcarrier score over `[0, bracket_hi]`.
/// Returns `(power, score)` of the best grid point.
pub fn grid_psi_min(
    lambda_k: f64,
    h: f64,
    g: f64,
    alpha: f64,
    bandwidth_hz: f64,
    block_time_s: f64,
    bracket_hi: f64,
    opts: &OracleOptions,
) -> (f64, f64) {
    assert!(opts.power_grid_points >= 100, "grid too coarse to mean anything");
    assert!(bracket_hi > 0.0 && bracket_hi.is_finite());
    let points = opts.power_grid_points;
    let mut best_p = 0.0;
    let mut best_v = f64::INFINITY;
    for i in 0..=points {
        let p = bracket_hi * i as f64 / points as f64;
        let v = psi(p, lambda_k, h, g, alpha, bandwidth_hz, block_time_s);
        if v < best_v {
            best_v = v;
            best_p = p;
        }
    }
    (best_p, best_v)
}

/// Exact minimum-energy split for user `k` when it owns exactly the
/// subcarriers in `owned`: bisection on the user's multiplier until the
/// delivered bits exceed the task by at most `bisection_tol * task`.
///
/// Returns `None` when even saturating the local CPU and every owned link
/// cannot deliver the task.
pub fn per_user_fixed_theta(
    k: usize,
    owned: &[usize],
    channels: &ChannelSet,
    users: &[UserProfile],
    cfg: &SystemConfig,
    opts: &OracleOptions,
) -> Option<PerUserSolution> {
    assert!(opts.bisection_tol > 0.0);
    let user = &users[k];
    let t = cfg.block_time_s;
    let b = cfg.bandwidth_hz;
    let n_subs = channels.num_subcarriers();
    let task = user.task_bits;
    let local_cap = max_local_bits(user, cfg);

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
    if !(task <= local_cap || task < local_cap + rate_ceiling) {
        return None;
    }

    let weighted = |l: f64, power: &[f64]| -> f64 {
        let transmit: f64 = power.iter().sum::<f64>() * t;
        user.energy_weight * (local_energy(l, user, cfg) + transmit)
    };

    if rate_ceiling == 0.0 {
        let l = task.min(local_cap);
        let power = vec![0.0; n_subs];
        let energy_j = weighted(l, &power);
        return Some(PerUserSolution { local_bits: l, power, energy_j });
    }

    let evaluate = |mu: f64| -> (f64, Vec<f64>, f64) {
        // Bits past the task are pure waste; the dual map does not know that.
        let l = optimal_local_bits(mu, user, cfg).min(user.task_bits);
        let mut power = vec![0.0; n_subs];
        let mut efficiency = 0.0;
        for &n in owned {
            let h = channels.ap_gain(k, n);
            let g = channels.worst_eve_gain(k, n);
            let p = optimal_power(mu, h, g, user.energy_weight, b);
            power[n] = p;
            efficiency += secrecy_spectral_efficiency(p, h, g);
        }
        (l, power, l + t * b * efficiency - task)
    };

    let (l0, p0, s0) = evaluate(0.0);
    if s0 >= 0.0 {
        let energy_j = weighted(l0, &p0);
        return Some(PerUserSolution { local_bits: l0, power: p0, energy_j });
    }

    let surplus_tol = opts.bisection_tol * task.max(1.0);
    let c = user.cycles_per_bit;
    let mut hi = (3.0 * user.energy_weight * user.cap_coeff_j_per_cycle * c * c * c * task * task
        / (t * t))
        .max(1e-18);
    let (mut l_hi, mut p_hi, mut s_hi) = evaluate(hi);
    let mut doublings = 0usize;
    while s_hi < 0.0 {
        doublings += 1;
        if doublings > 2000 {
            return None;
        }
        hi *= 2.0;
        let r = evaluate(hi);
        l_hi = r.0;
        p_hi = r.1;
        s_hi = r.2;
    }
    let mut lo = if doublings == 0 { 0.0 } else { hi * 0.5 };
    for _ in 0..200 {
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
    let energy_j = weighted(l_hi, &p_hi);
    Some(PerUserSolution { local_bits: l_hi, power: p_hi, energy_j })
}

/// Enumerates every subcarrier assignment, solving each user's restricted
/// problem exactly, and returns the cheapest feasible combination.
///
/// Assignments are scanned lexicographically with subcarrier 0 as the most
/// significant digit, and ties keep the first minimum found, so the result
/// is fully deterministic. Refuses instances with more than one million
/// assignments.
pub fn brute_force_solve(
    channels: &ChannelSet,
    users: &[UserProfile],
    cfg: &SystemConfig,
    opts: &OracleOptions,
) -> Result<BruteForceOutcome, OracleError> {
    let num_users = users.len();
    let n_subs = channels.num_subcarriers();
    assert!(num_users >= 1);
    assert_eq!(channels.num_users(), num_users);
    assert_eq!(cfg.num_subcarriers, n_subs);

    let too_large = OracleError::SearchSpaceTooLarge { num_users, num_subcarriers: n_subs };
    match (num_users as u128).checked_pow(n_subs as u32) {
        Some(total) if total <= 1_000_000 => {}
        _ => return Err(too_large),
    }

    let mut owner = vec![0usize; n_subs];
    let mut best_energy = f64::INFINITY;
    let mut best: Option<Allocation> = None;

    loop {
        let mut owned_by: Vec<Vec<usize>> = vec![Vec::new(); num_users];
        for (n, &k) in owner.iter().enumerate() {
            owned_by[k].push(n);
        }

        let mut total = 0.0;
        let mut parts: Vec<PerUserSolution> = Vec::with_capacity(num_users);
        let mut feasible = true;
        for k in 0..num_users {
            match per_user_fixed_theta(k, &owned_by[k], channels, users, cfg, opts) {
                Some(sol) => {
                    total += sol.energy_j;
                    parts.push(sol);
                }
                None => {
                    feasible = false;
                    break;
                }
            }
        }
        if feasible && total < best_energy {
            best_energy = total;
            let mut alloc = Allocation::zeros(num_users, n_subs);
            alloc.owner = owner.clone();
            for (k, part) in parts.into_iter().enumerate() {
                alloc.local_bits[k] = part.local_bits;
                alloc.power[k] = part.power;
            }
            best = Some(alloc);
        }

        // Odometer increment, least significant digit last.
        let mut pos = n_subs;
        loop {
            if pos == 0 {
                return Ok(match best {
                    Some(allocation) => {
                        BruteForceOutcome::Optimal { allocation, energy_j: best_energy }
                    }
                    None => BruteForceOutcome::Infeasible,
                });
            }
            pos -= 1;
            owner[pos] += 1;
            if owner[pos] < num_users {
                break;
            }
            owner[pos] = 0;
        }
    }
}
