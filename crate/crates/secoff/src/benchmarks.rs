//! Reference schemes the joint solver is measured against.
//!
//! Each scheme answers the same question, minimize total weighted energy
//! subject to the per-user task deadlines, under a different restriction:
//!
//! * [`SchemeId::Proposed`]: the unrestricted joint solver.
//! * [`SchemeId::SecureFullOffload`]: local CPUs stay idle; every bit goes
//!   over the air at the worst-case secrecy rate.
//! * [`SchemeId::LocalOnly`]: radios stay silent; every bit is computed
//!   locally, which has the closed-form cost `alpha * zeta * C^3 * L^3 / T^2`
//!   per user.
//! * [`SchemeId::NoEavesdropper`]: the joint solver on channels with the
//!   eavesdropper removed. This relaxes every rate constraint, so it lower
//!   bounds the other three; the gap to `Proposed` is the price of secrecy.

use crate::model::{
    local_energy, max_local_bits, Allocation, ChannelSet, SolveReport, SolveStatus, SystemConfig,
    UserProfile,
};
use crate::solver::{self, LocalComputeMode, SolverOptions};
use serde::{Deserialize, Serialize};

/// Tag for one of the four schemes. The `Ord` instance fixes the row order
/// of simulation outputs.
#[derive(
    Debug,
    Clone,
    Copy,
    PartialEq,
    Eq,
    PartialOrd,
    Ord,
    Hash,
    Serialize,
    Deserialize,
    clap::ValueEnum,
)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum SchemeId {
    Proposed,
    SecureFullOffload,
    LocalOnly,
    NoEavesdropper,
}

impl SchemeId {
    pub const ALL: [SchemeId; 4] = [
        SchemeId::Proposed,
        SchemeId::SecureFullOffload,
        SchemeId::LocalOnly,
        SchemeId::NoEavesdropper,
    ];

    /// Stable lowercase name, matching the serialized form.
    pub fn name(self) -> &'static str {
        match self {
            SchemeId::Proposed => "proposed",
            SchemeId::SecureFullOffload => "secure_full_offload",
            SchemeId::LocalOnly => "local_only",
            SchemeId::NoEavesdropper => "no_eavesdropper",
        }
    }
}

impl std::fmt::Display for SchemeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Joint solve with local computation disabled: the dual, assignment and
/// repair machinery runs unchanged with the local bits pinned at zero.
pub fn secure_full_offload(
    channels: &ChannelSet,
    users: &[UserProfile],
    cfg: &SystemConfig,
    opts: &SolverOptions,
) -> SolveReport {
    solver::solve_mode(channels, users, cfg, opts, LocalComputeMode::Disabled)
}

/// Closed-form cost of computing everything locally, or `None` when some
/// task exceeds what its CPU can finish within the block.
pub fn local_only(users: &[UserProfile], cfg: &SystemConfig) -> Option<f64> {
    let mut total = 0.0;
    for user in users {
        if user.task_bits > max_local_bits(user, cfg) {
            return None;
        }
        total += user.energy_weight * local_energy(user.task_bits, user, cfg);
    }
    Some(total)
}

/// Joint solve against channels with the eavesdropper silenced, turning
/// every secrecy rate into a plain rate.
pub fn no_eavesdropper(
    channels: &ChannelSet,
    users: &[UserProfile],
    cfg: &SystemConfig,
    opts: &SolverOptions,
) -> SolveReport {
    solver::solve(&channels.without_eavesdropper(), users, cfg, opts)
}

/// Runs one scheme and returns a uniform report.
///
/// `LocalOnly` has no iterative part: its report carries the closed-form
/// energy as both primal value and dual bound (the bound is exact for that
/// restriction), zero gap and zero iterations.
pub fn run_scheme(
    scheme: SchemeId,
    channels: &ChannelSet,
    users: &[UserProfile],
    cfg: &SystemConfig,
    opts: &SolverOptions,
) -> SolveReport {
    match scheme {
        SchemeId::Proposed => solver::solve(channels, users, cfg, opts),
        SchemeId::SecureFullOffload => secure_full_offload(channels, users, cfg, opts),
        SchemeId::NoEavesdropper => no_eavesdropper(channels, users, cfg, opts),
        SchemeId::LocalOnly => match local_only(users, cfg) {
            Some(energy) => SolveReport {
                allocation: Allocation::all_local(users, cfg.num_subcarriers),
                primal_energy_j: energy,
                dual_bound_j: energy,
                relative_gap: 0.0,
                iterations: 0,
                status: SolveStatus::Optimal,
            },
            None => SolveReport {
                allocation: Allocation::zeros(users.len(), cfg.num_subcarriers),
                primal_energy_j: f64::INFINITY,
                dual_bound_j: 0.0,
                relative_gap: f64::INFINITY,
                iterations: 0,
                status: SolveStatus::Infeasible,
            },
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::check_constraints;
    use approx::assert_relative_eq;

    fn cfg_with_subs(n: usize) -> SystemConfig {
        SystemConfig {
            block_time_s: 1.0,
            bandwidth_hz: 312_500.0,
            num_subcarriers: n,
            noise_psd_dbm_hz: -105.0,
            pathloss_ref_db: -30.0,
            pathloss_ref_dist_m: 1.0,
            pathloss_exponent: 3.7,
            csi_error_fraction: 0.1,
        }
    }

    fn user(task_bits: f64, weight: f64) -> UserProfile {
        UserProfile {
            task_bits,
            cycles_per_bit: 1e3,
            cap_coeff_j_per_cycle: 1e-28,
            max_cpu_hz: 1e9,
            energy_weight: weight,
            dist_ap_m: 20.0,
            dist_eve_m: 20.0,
        }
    }

    #[test]
    fn local_only_matches_the_cubic_closed_form() {
        let cfg = cfg_with_subs(4);
        let users: Vec<UserProfile> = (0..4).map(|_| user(7e5, 0.25)).collect();
        // 4 * 0.25 * 1e-28 * 1e9 * (7e5)^3 = 3.43e-2 J.
        let energy = local_only(&users, &cfg).expect("tasks fit on the CPUs");
        assert_relative_eq!(energy, 3.43e-2, max_relative = 1e-12);
    }

    #[test]
    fn local_only_rejects_tasks_beyond_the_cpu_cap() {
        let cfg = cfg_with_subs(4);
        let users = vec![user(7e5, 0.5), user(2e6, 0.5)];
        assert_eq!(local_only(&users, &cfg), None);
        let report = run_scheme(SchemeId::LocalOnly, &demo_channels(2, 4), &users, &cfg,
                                &SolverOptions::default());
        assert_eq!(report.status, SolveStatus::Infeasible);
        assert_eq!(report.primal_energy_j, f64::INFINITY);
    }

    fn demo_channels(num_users: usize, n: usize) -> ChannelSet {
        let h = (0..num_users)
            .map(|k| (0..n).map(|i| 20.0 + 3.0 * k as f64 + 2.0 * i as f64).collect())
            .collect();
        let g = (0..num_users)
            .map(|k| (0..n).map(|i| 0.1 + 0.05 * k as f64 + 0.02 * i as f64).collect())
            .collect();
        let e = vec![vec![0.02; n]; num_users];
        ChannelSet::new(h, g, e)
    }

    #[test]
    fn full_offload_never_computes_locally() {
        let cfg = cfg_with_subs(4);
        let users = vec![user(5e5, 0.5), user(3e5, 0.5)];
        let channels = demo_channels(2, 4);
        let report = secure_full_offload(&channels, &users, &cfg, &SolverOptions::default());
        assert_eq!(report.status, SolveStatus::Optimal);
        assert!(report.allocation.local_bits.iter().all(|&l| l == 0.0));
        let constraints = check_constraints(&report.allocation, &channels, &users, &cfg, 1e-6);
        assert!(constraints.satisfied(), "{constraints:?}");
    }

    #[test]
    fn schemes_order_as_relaxations_and_restrictions() {
        let cfg = cfg_with_subs(4);
        let users = vec![user(6e5, 0.5), user(4e5, 0.5)];
        let channels = demo_channels(2, 4);
        let opts = SolverOptions::default();
        let proposed = run_scheme(SchemeId::Proposed, &channels, &users, &cfg, &opts);
        let offload = run_scheme(SchemeId::SecureFullOffload, &channels, &users, &cfg, &opts);
        let local = run_scheme(SchemeId::LocalOnly, &channels, &users, &cfg, &opts);
        let relaxed = run_scheme(SchemeId::NoEavesdropper, &channels, &users, &cfg, &opts);

        let slack = 1e-9 * local.primal_energy_j.max(1.0);
        assert!(relaxed.primal_energy_j <= proposed.primal_energy_j + slack);
        assert!(proposed.primal_energy_j <= offload.primal_energy_j + slack);
        assert!(proposed.primal_energy_j <= local.primal_energy_j + slack);
    }

    #[test]
    fn no_eavesdropper_solves_on_stripped_channels() {
        let cfg = cfg_with_subs(2);
        let users = vec![user(5e5, 1.0)];
        // With the eavesdropper as strong as the access point the secure
        // schemes are stuck with the CPU, but the relaxed scheme can offload.
        let channels = ChannelSet::new(
            vec![vec![50.0, 40.0]],
            vec![vec![50.0, 40.0]],
            vec![vec![0.0, 0.0]],
        );
        let opts = SolverOptions::default();
        let relaxed = no_eavesdropper(&channels, &users, &cfg, &opts);
        let proposed = run_scheme(SchemeId::Proposed, &channels, &users, &cfg, &opts);
        assert_eq!(relaxed.status, SolveStatus::Optimal);
        assert!(relaxed.primal_energy_j < proposed.primal_energy_j);
        assert!(relaxed.allocation.power.iter().flatten().any(|&p| p > 0.0));
        assert!(proposed.allocation.power.iter().flatten().all(|&p| p == 0.0));
    }

    #[test]
    fn scheme_names_are_stable() {
        assert_eq!(SchemeId::Proposed.to_string(), "proposed");
        assert_eq!(SchemeId::SecureFullOffload.to_string(), "secure_full_offload");
        assert_eq!(SchemeId::LocalOnly.to_string(), "local_only");
        assert_eq!(SchemeId::NoEavesdropper.to_string(), "no_eavesdropper");
    }
}
