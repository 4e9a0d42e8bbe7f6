//! Problem data and physical bookkeeping.
//!
//! One instance consists of a [`SystemConfig`] (block length, subcarrier
//! grid, noise and pathloss parameters), one [`UserProfile`] per user, and a
//! [`ChannelSet`] holding noise-normalized power gains. An [`Allocation`]
//! fixes each user's local bit count, the owner of every subcarrier, and the
//! transmit powers; the functions in this module price an allocation and
//! check it against the constraints.
//!
//! Conventions:
//!
//! * Channel gains are stored already divided by the per-subcarrier noise
//!   power `N0 * B`, so `h * p` is a plain SNR and no noise term appears in
//!   any rate expression.
//! * The eavesdropper gain used everywhere is the worst case within the
//!   estimation-error ball, `g = g_bar + eps`, computed on read so the two
//!   parts can never drift apart.
//! * Bit counts are `f64`. Tasks are data-partitionable, so fractional split
//!   points are meaningful and keep every subproblem smooth.

use serde::{Deserialize, Serialize};
use std::f64::consts::LN_2;

/// Block-level system parameters shared by all users.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    /// Duration of one scheduling block in seconds. Every task must finish
    /// within this window.
    pub block_time_s: f64,
    /// Bandwidth of a single subcarrier in Hz.
    pub bandwidth_hz: f64,
    /// Number of orthogonal subcarriers. Each is owned by exactly one user.
    pub num_subcarriers: usize,
    /// Noise power spectral density in dBm per Hz.
    pub noise_psd_dbm_hz: f64,
    /// Pathloss at the reference distance, in dB (typically negative).
    pub pathloss_ref_db: f64,
    /// Reference distance for the pathloss model, in meters.
    pub pathloss_ref_dist_m: f64,
    /// Pathloss exponent applied to `distance / reference_distance`.
    pub pathloss_exponent: f64,
    /// Eavesdropper CSI error bound as a fraction of the eavesdropper
    /// pathloss. Zero means perfect knowledge of the eavesdropper channel.
    pub csi_error_fraction: f64,
}

impl SystemConfig {
    /// Noise power per subcarrier in watts, `N0 * B`.
    pub fn noise_power_w(&self) -> f64 {
        // dBm/Hz to W/Hz: 10^((x - 30) / 10).
        10f64.powf((self.noise_psd_dbm_hz - 30.0) / 10.0) * self.bandwidth_hz
    }

    /// Checks that every field is in its admissible range.
    pub fn validate(&self) -> Result<(), ValidationError> {
        let check = |ok: bool, field: &str, reason: &str| {
            if ok {
                Ok(())
            } else {
                Err(ValidationError::new(field, reason))
            }
        };
        check(
            self.block_time_s.is_finite() && self.block_time_s > 0.0,
            "block_time_s",
            "must be finite and positive",
        )?;
        check(
            self.bandwidth_hz.is_finite() && self.bandwidth_hz > 0.0,
            "bandwidth_hz",
            "must be finite and positive",
        )?;
        check(self.num_subcarriers >= 1, "num_subcarriers", "must be at least 1")?;
        check(self.noise_psd_dbm_hz.is_finite(), "noise_psd_dbm_hz", "must be finite")?;
        check(self.pathloss_ref_db.is_finite(), "pathloss_ref_db", "must be finite")?;
        check(
            self.pathloss_ref_dist_m.is_finite() && self.pathloss_ref_dist_m > 0.0,
            "pathloss_ref_dist_m",
            "must be finite and positive",
        )?;
        check(
            self.pathloss_exponent.is_finite() && self.pathloss_exponent > 0.0,
            "pathloss_exponent",
            "must be finite and positive",
        )?;
        check(
            self.csi_error_fraction.is_finite() && self.csi_error_fraction >= 0.0,
            "csi_error_fraction",
            "must be finite and nonnegative",
        )?;
        Ok(())
    }
}

/// Per-user task and hardware parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UserProfile {
    /// Task size in bits that must be processed within the block.
    pub task_bits: f64,
    /// CPU cycles required per input bit.
    pub cycles_per_bit: f64,
    /// Effective switched-capacitance coefficient of the CPU. Energy per
    /// cycle is this value times the clock frequency squared.
    pub cap_coeff_j_per_cycle: f64,
    /// Maximum sustainable CPU frequency in Hz. Caps how many bits can be
    /// computed locally within one block.
    pub max_cpu_hz: f64,
    /// Weight of this user's energy in the objective.
    pub energy_weight: f64,
    /// Distance to the access point in meters.
    pub dist_ap_m: f64,
    /// Distance to the eavesdropper in meters.
    pub dist_eve_m: f64,
}

impl UserProfile {
    /// Checks that every field is in its admissible range.
    pub fn validate(&self) -> Result<(), ValidationError> {
        let check = |ok: bool, field: &str, reason: &str| {
            if ok {
                Ok(())
            } else {
                Err(ValidationError::new(field, reason))
            }
        };
        check(
            self.task_bits.is_finite() && self.task_bits >= 0.0,
            "task_bits",
            "must be finite and nonnegative",
        )?;
        for (value, field) in [
            (self.cycles_per_bit, "cycles_per_bit"),
            (self.cap_coeff_j_per_cycle, "cap_coeff_j_per_cycle"),
            (self.max_cpu_hz, "max_cpu_hz"),
            (self.energy_weight, "energy_weight"),
            (self.dist_ap_m, "dist_ap_m"),
            (self.dist_eve_m, "dist_eve_m"),
        ] {
            check(value.is_finite() && value > 0.0, field, "must be finite and positive")?;
        }
        Ok(())
    }
}

/// A field failed validation. `field` is a dotted path into the offending
/// structure.
#[derive(Debug, Clone, thiserror::Error)]
#[error("invalid `{field}`: {reason}")]
pub struct ValidationError {
    pub field: String,
    pub reason: String,
}

impl ValidationError {
    pub fn new(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Self { field: field.into(), reason: reason.into() }
    }

    /// Returns the same error with `prefix.` prepended to the field path.
    pub fn nested(mut self, prefix: &str) -> Self {
        self.field = format!("{prefix}.{}", self.field);
        self
    }
}

/// Noise-normalized power gains for all user/subcarrier pairs.
///
/// `h` is the gain to the access point, `g_bar` the estimated gain to the
/// eavesdropper, and `eps` the per-entry estimation error bound. The
/// adversarial gain is always read through [`ChannelSet::worst_eve_gain`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelSet {
    h: Vec<Vec<f64>>,
    g_bar: Vec<Vec<f64>>,
    eps: Vec<Vec<f64>>,
}

impl ChannelSet {
    /// Builds a channel set from dense per-user rows.
    ///
    /// # Panics
    ///
    /// Panics if the three matrices are not the same nonempty `K x N` shape
    /// or if any entry is negative or non-finite. Shape mismatches are
    /// construction bugs, not recoverable input errors.
    pub fn new(h: Vec<Vec<f64>>, g_bar: Vec<Vec<f64>>, eps: Vec<Vec<f64>>) -> Self {
        assert!(!h.is_empty(), "channel set must have at least one user");
        let n = h[0].len();
        assert!(n > 0, "channel set must have at least one subcarrier");
        for (name, m) in [("h", &h), ("g_bar", &g_bar), ("eps", &eps)] {
            assert_eq!(m.len(), h.len(), "{name} user count mismatch");
            for row in m.iter() {
                assert_eq!(row.len(), n, "{name} subcarrier count mismatch");
                for &v in row {
                    assert!(v.is_finite() && v >= 0.0, "{name} entries must be finite and >= 0");
                }
            }
        }
        Self { h, g_bar, eps }
    }

    pub fn num_users(&self) -> usize {
        self.h.len()
    }

    pub fn num_subcarriers(&self) -> usize {
        self.h[0].len()
    }

    /// Gain from user `k` to the access point on subcarrier `n`.
    pub fn ap_gain(&self, k: usize, n: usize) -> f64 {
        self.h[k][n]
    }

    /// Worst-case gain from user `k` to the eavesdropper on subcarrier `n`,
    /// `g_bar + eps`.
    pub fn worst_eve_gain(&self, k: usize, n: usize) -> f64 {
        self.g_bar[k][n] + self.eps[k][n]
    }

    /// Estimated (margin-free) eavesdropper gain.
    pub fn eve_mean_gain(&self, k: usize, n: usize) -> f64 {
        self.g_bar[k][n]
    }

    pub fn ap_row(&self, k: usize) -> &[f64] {
        &self.h[k]
    }

    /// Worst-case eavesdropper row for user `k`, materialized on demand.
    pub fn worst_eve_row(&self, k: usize) -> Vec<f64> {
        self.g_bar[k].iter().zip(&self.eps[k]).map(|(&g, &e)| g + e).collect()
    }

    /// Copy with the eavesdropper removed (`g_bar = eps = 0`), used to solve
    /// the secrecy-unconstrained variant of an instance.
    pub fn without_eavesdropper(&self) -> Self {
        let zero = vec![vec![0.0; self.num_subcarriers()]; self.num_users()];
        Self { h: self.h.clone(), g_bar: zero.clone(), eps: zero }
    }
}

/// A complete assignment of the decision variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Allocation {
    /// Bits computed locally by each user.
    pub local_bits: Vec<f64>,
    /// Owning user index per subcarrier. Exclusive ownership is structural:
    /// one entry per subcarrier makes sharing unrepresentable.
    pub owner: Vec<usize>,
    /// Transmit power in watts per user and subcarrier. Positive entries are
    /// only meaningful where `owner` matches the user.
    pub power: Vec<Vec<f64>>,
}

impl Allocation {
    /// All-zero allocation with subcarriers parked on user 0.
    pub fn zeros(num_users: usize, num_subcarriers: usize) -> Self {
        Self {
            local_bits: vec![0.0; num_users],
            owner: vec![0; num_subcarriers],
            power: vec![vec![0.0; num_subcarriers]; num_users],
        }
    }

    /// Allocation in which every user computes its whole task locally and
    /// the radio stays silent.
    pub fn all_local(users: &[UserProfile], num_subcarriers: usize) -> Self {
        let mut a = Self::zeros(users.len(), num_subcarriers);
        for (k, u) in users.iter().enumerate() {
            a.local_bits[k] = u.task_bits;
        }
        a
    }

    /// Ownership mask for user `k`.
    pub fn owned_mask(&self, k: usize) -> Vec<bool> {
        self.owner.iter().map(|&o| o == k).collect()
    }
}

/// Terminal state of a solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    /// Feasible allocation returned together with a certified lower bound.
    Optimal,
    /// No feasible allocation exists for at least one user under the fixed
    /// subcarrier assignment and capacity limits.
    Infeasible,
    /// Iteration budget exhausted before the bound tolerance was met. The
    /// allocation is still feasible if repair was enabled.
    MaxIterations,
}

/// Result of one solver run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub allocation: Allocation,
    /// Weighted total energy of `allocation` in joules. Infinite when
    /// `status` is `Infeasible`.
    pub primal_energy_j: f64,
    /// Best dual lower bound on the optimal weighted energy, in joules.
    pub dual_bound_j: f64,
    /// `(primal - dual) / primal`, zero when the primal is zero.
    pub relative_gap: f64,
    /// Cutting-plane iterations spent, summed over restarts.
    pub iterations: usize,
    pub status: SolveStatus,
}

/// Energy in joules for computing `bits` locally within one block.
///
/// The CPU runs at the minimal constant frequency `cycles_per_bit * bits / T`
/// that finishes in time, and energy per cycle scales with frequency squared,
/// which gives `zeta * C^3 * bits^3 / T^2`. Cubic growth in `bits` is what
/// makes partial offloading worthwhile for large tasks.
pub fn local_energy(bits: f64, user: &UserProfile, cfg: &SystemConfig) -> f64 {
    debug_assert!(bits >= 0.0);
    let c = user.cycles_per_bit;
    user.cap_coeff_j_per_cycle * c * c * c * bits * bits * bits
        / (cfg.block_time_s * cfg.block_time_s)
}

/// Largest bit count user `k` can compute locally in one block,
/// `f_max * T / C`.
pub fn max_local_bits(user: &UserProfile, cfg: &SystemConfig) -> f64 {
    user.max_cpu_hz * cfg.block_time_s / user.cycles_per_bit
}

/// `log2(1 + x)` evaluated without cancellation for small `x`.
#[inline]
fn log2_1p(x: f64) -> f64 {
    x.ln_1p() / LN_2
}

/// Secrecy spectral efficiency of one subcarrier in bits/s/Hz:
/// `(log2(1 + h p) - log2(1 + g p))^+`.
///
/// Clipping is per subcarrier, so a link with `h <= g` contributes zero
/// rather than dragging other subcarriers down.
#[inline]
pub fn secrecy_spectral_efficiency(power: f64, h: f64, g: f64) -> f64 {
    (log2_1p(h * power) - log2_1p(g * power)).max(0.0)
}

/// Worst-case secrecy rate in bits/s for one user over the subcarriers it
/// owns. `owned`, `power`, `h` and `g_worst` are per-subcarrier rows.
pub fn secrecy_rate(
    owned: &[bool],
    power: &[f64],
    h: &[f64],
    g_worst: &[f64],
    cfg: &SystemConfig,
) -> f64 {
    debug_assert_eq!(owned.len(), power.len());
    debug_assert_eq!(owned.len(), h.len());
    debug_assert_eq!(owned.len(), g_worst.len());
    let sum: f64 = owned
        .iter()
        .zip(power)
        .zip(h.iter().zip(g_worst))
        .filter(|((&o, _), _)| o)
        .map(|((_, &p), (&h, &g))| secrecy_spectral_efficiency(p, h, g))
        .sum();
    // An empty sum is -0.0; adding +0.0 keeps silent users at plain zero.
    cfg.bandwidth_hz * sum + 0.0
}

/// Transmit energy in joules for one user: `T * sum of owned powers`.
pub fn offload_energy(owned: &[bool], power: &[f64], cfg: &SystemConfig) -> f64 {
    debug_assert_eq!(owned.len(), power.len());
    let total_power: f64 =
        owned.iter().zip(power).filter(|(&o, _)| o).map(|(_, &p)| p).sum();
    // An empty sum is -0.0; adding +0.0 keeps silent users at plain zero.
    cfg.block_time_s * total_power + 0.0
}

/// Objective value of an allocation: the energy-weight-scaled sum of local
/// and transmit energy over all users.
pub fn total_weighted_energy(
    alloc: &Allocation,
    users: &[UserProfile],
    cfg: &SystemConfig,
) -> f64 {
    users
        .iter()
        .enumerate()
        .map(|(k, u)| {
            let owned = alloc.owned_mask(k);
            u.energy_weight
                * (local_energy(alloc.local_bits[k], u, cfg)
                    + offload_energy(&owned, &alloc.power[k], cfg))
        })
        .sum()
}

/// Per-user slice of a [`ConstraintReport`].
#[derive(Debug, Clone, PartialEq)]
pub struct UserConstraints {
    /// `T * R_k - (L_k - l_k)` in bits. Nonnegative when the task deadline
    /// is met; small negatives within tolerance are accepted.
    pub rate_residual_bits: f64,
    pub rate_ok: bool,
    /// `0 <= l_k <= max_local_bits` within tolerance.
    pub local_bits_ok: bool,
}

/// Result of checking an allocation against every constraint.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintReport {
    pub per_user: Vec<UserConstraints>,
    /// No negative transmit power anywhere.
    pub power_nonnegative: bool,
    /// Positive power appears only on subcarriers the user owns, and every
    /// owner index is in range.
    pub ownership_consistent: bool,
}

impl ConstraintReport {
    pub fn satisfied(&self) -> bool {
        self.power_nonnegative
            && self.ownership_consistent
            && self.per_user.iter().all(|u| u.rate_ok && u.local_bits_ok)
    }
}

/// Checks an allocation against the task, CPU, power and ownership
/// constraints.
///
/// `tol` is relative: user `k`'s rate residual may be as low as
/// `-tol * task_bits`, and the local bit bounds are slackened by
/// `tol * max_local_bits`.
pub fn check_constraints(
    alloc: &Allocation,
    channels: &ChannelSet,
    users: &[UserProfile],
    cfg: &SystemConfig,
    tol: f64,
) -> ConstraintReport {
    let num_users = users.len();
    let n = cfg.num_subcarriers;
    assert_eq!(alloc.local_bits.len(), num_users, "local_bits length mismatch");
    assert_eq!(alloc.owner.len(), n, "owner length mismatch");
    assert_eq!(alloc.power.len(), num_users, "power row count mismatch");

    let mut ownership_consistent = alloc.owner.iter().all(|&o| o < num_users);
    let mut power_nonnegative = true;
    for (k, row) in alloc.power.iter().enumerate() {
        assert_eq!(row.len(), n, "power column count mismatch");
        for (sub, &p) in row.iter().enumerate() {
            if p < 0.0 || !p.is_finite() {
                power_nonnegative = false;
            }
            if p > 0.0 && alloc.owner[sub] != k {
                ownership_consistent = false;
            }
        }
    }

    let per_user = users
        .iter()
        .enumerate()
        .map(|(k, u)| {
            let owned = alloc.owned_mask(k);
            let g = channels.worst_eve_row(k);
            let rate = secrecy_rate(&owned, &alloc.power[k], channels.ap_row(k), &g, cfg);
            let l = alloc.local_bits[k];
            let residual = cfg.block_time_s * rate - (u.task_bits - l);
            let l_max = max_local_bits(u, cfg);
            let l_slack = tol * l_max;
            UserConstraints {
                rate_residual_bits: residual,
                rate_ok: residual >= -tol * u.task_bits,
                local_bits_ok: l >= -l_slack && l <= l_max + l_slack,
            }
        })
        .collect();

    ConstraintReport { per_user, power_nonnegative, ownership_consistent }
}

/// Upper bound in bits on what user `k` could deliver in one block if it
/// were granted every subcarrier at unlimited power, plus its local limit:
/// `max_local_bits + T * B * sum_n log2(h/g)^+`.
///
/// Subcarriers with `g = 0` and `h > 0` have no secrecy ceiling, so the
/// bound is `+inf`. A task exceeding this bound is infeasible regardless of
/// how subcarriers are shared; the bound ignores competition, so it is
/// necessary, not sufficient.
pub fn per_user_capacity_bound(
    k: usize,
    channels: &ChannelSet,
    users: &[UserProfile],
    cfg: &SystemConfig,
) -> f64 {
    let user = &users[k];
    let mut rate_sum = 0.0;
    for n in 0..channels.num_subcarriers() {
        let h = channels.ap_gain(k, n);
        let g = channels.worst_eve_gain(k, n);
        if g == 0.0 {
            if h > 0.0 {
                return f64::INFINITY;
            }
        } else if h > g {
            rate_sum += (h / g).log2();
        }
    }
    max_local_bits(user, cfg)
        + cfg.block_time_s * cfg.bandwidth_hz * rate_sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn test_cfg() -> SystemConfig {
        SystemConfig {
            block_time_s: 1.0,
            bandwidth_hz: 312_500.0,
            num_subcarriers: 2,
            noise_psd_dbm_hz: -105.0,
            pathloss_ref_db: -30.0,
            pathloss_ref_dist_m: 1.0,
            pathloss_exponent: 3.7,
            csi_error_fraction: 0.1,
        }
    }

    fn test_user(task_bits: f64) -> UserProfile {
        UserProfile {
            task_bits,
            cycles_per_bit: 1e3,
            cap_coeff_j_per_cycle: 1e-28,
            max_cpu_hz: 1e9,
            energy_weight: 0.5,
            dist_ap_m: 20.0,
            dist_eve_m: 20.0,
        }
    }

    #[test]
    fn local_energy_matches_cubic_law() {
        let cfg = test_cfg();
        let user = test_user(1e5);
        // 1e-28 * (1e3)^3 * (1e5)^3 / 1 = 1e-4 J.
        assert_relative_eq!(local_energy(1e5, &user, &cfg), 1e-4, max_relative = 1e-12);
    }

    #[test]
    fn local_energy_is_strictly_convex_in_bits() {
        let cfg = test_cfg();
        let user = test_user(1e5);
        for (a, b) in [(1e3, 9e5), (2e4, 3e4), (0.0, 1e6), (5e5, 5.1e5)] {
            let mid = local_energy(0.5 * (a + b), &user, &cfg);
            let avg = 0.5 * (local_energy(a, &user, &cfg) + local_energy(b, &user, &cfg));
            assert!(
                mid < avg,
                "midpoint energy {mid} must lie strictly below the chord {avg} for ({a}, {b})"
            );
        }
    }

    #[test]
    fn max_local_bits_scales_with_block_time() {
        let mut cfg = test_cfg();
        let user = test_user(1e5);
        assert_relative_eq!(max_local_bits(&user, &cfg), 1e6, max_relative = 1e-12);
        cfg.block_time_s = 0.5;
        assert_relative_eq!(max_local_bits(&user, &cfg), 5e5, max_relative = 1e-12);
    }

    #[test]
    fn secrecy_rate_ignores_unowned_and_clips_bad_links() {
        let cfg = test_cfg();
        // Subcarrier 0: h > g, active. Subcarrier 1: h <= g, must contribute 0.
        let owned = [true, true];
        let power = [0.4, 2.0];
        let h = [2.0, 1.0];
        let g = [0.5, 3.0];
        let expected = cfg.bandwidth_hz * ((1.0 + 2.0 * 0.4) / (1.0 + 0.5 * 0.4_f64)).log2();
        assert_relative_eq!(secrecy_rate(&owned, &power, &h, &g, &cfg), expected, max_relative = 1e-12);

        let none_owned = [false, false];
        assert_eq!(secrecy_rate(&none_owned, &power, &h, &g, &cfg), 0.0);
    }

    #[test]
    fn secrecy_rate_without_eavesdropper_is_plain_capacity() {
        let cfg = test_cfg();
        let owned = [true, true];
        let power = [0.3, 1.7];
        let h = [2.5, 0.9];
        let g = [0.0, 0.0];
        let expected =
            cfg.bandwidth_hz * ((1.0 + 2.5 * 0.3_f64).log2() + (1.0 + 0.9 * 1.7_f64).log2());
        assert_relative_eq!(secrecy_rate(&owned, &power, &h, &g, &cfg), expected, max_relative = 1e-12);
    }

    #[test]
    fn secrecy_rate_is_monotone_in_power_when_h_exceeds_g() {
        let cfg = test_cfg();
        let owned = [true];
        let h = [3.0];
        let g = [1.0];
        let mut prev = 0.0;
        for i in 1..50 {
            let p = i as f64 * 0.25;
            let r = secrecy_rate(&owned, &[p], &h, &g, &cfg);
            assert!(r >= prev, "rate must not decrease as power grows (p = {p})");
            prev = r;
        }
    }

    #[test]
    fn offload_energy_sums_owned_powers_only() {
        let cfg = test_cfg();
        let owned = [true, false];
        let power = [0.25, 7.0];
        assert_relative_eq!(offload_energy(&owned, &power, &cfg), 0.25, max_relative = 1e-12);
    }

    #[test]
    fn total_weighted_energy_recombines_parts() {
        let cfg = test_cfg();
        let users = vec![test_user(1e5), test_user(2e5)];
        let mut alloc = Allocation::zeros(2, 2);
        alloc.local_bits = vec![5e4, 1e5];
        alloc.owner = vec![0, 1];
        alloc.power[0][0] = 0.2;
        alloc.power[1][1] = 0.6;

        let by_hand: f64 = users
            .iter()
            .enumerate()
            .map(|(k, u)| {
                let owned = alloc.owned_mask(k);
                u.energy_weight
                    * (local_energy(alloc.local_bits[k], u, &cfg)
                        + offload_energy(&owned, &alloc.power[k], &cfg))
            })
            .sum();
        assert_relative_eq!(
            total_weighted_energy(&alloc, &users, &cfg),
            by_hand,
            max_relative = 1e-15
        );
    }

    #[test]
    fn check_constraints_accepts_pure_local_when_task_fits() {
        let cfg = test_cfg();
        let users = vec![test_user(1e5), test_user(0.0)];
        let channels = ChannelSet::new(
            vec![vec![1.0, 2.0], vec![0.5, 0.1]],
            vec![vec![0.2, 0.1], vec![0.4, 0.2]],
            vec![vec![0.05; 2]; 2],
        );
        let alloc = Allocation::all_local(&users, 2);
        let report = check_constraints(&alloc, &channels, &users, &cfg, 1e-6);
        assert!(report.satisfied(), "pure local computing of a feasible task must pass");
        assert_relative_eq!(report.per_user[0].rate_residual_bits, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn check_constraints_flags_rate_shortfall_and_foreign_power() {
        let cfg = test_cfg();
        let users = vec![test_user(2e6), test_user(1e5)];
        let channels = ChannelSet::new(
            vec![vec![1.0, 2.0], vec![0.5, 0.1]],
            vec![vec![0.2, 0.1], vec![0.4, 0.2]],
            vec![vec![0.0; 2]; 2],
        );
        // Computing all 2e6 bits locally leaves nothing unserved but breaks
        // the CPU cap.
        let alloc = Allocation::all_local(&users, 2);
        let report = check_constraints(&alloc, &channels, &users, &cfg, 1e-6);
        assert!(report.per_user[0].rate_ok, "l = L leaves no bits unserved");
        assert!(!report.per_user[0].local_bits_ok, "local bits exceed the CPU cap");
        assert!(report.per_user[1].rate_ok);

        // Staying within the cap with a silent radio leaves a shortfall.
        let mut short = Allocation::all_local(&users, 2);
        short.local_bits[0] = 5e5;
        let report = check_constraints(&short, &channels, &users, &cfg, 1e-6);
        assert!(!report.per_user[0].rate_ok, "1.5e6 bits are unserved with no power");
        assert!(report.per_user[0].local_bits_ok);

        // Power on a subcarrier owned by someone else must be flagged.
        let mut bad = Allocation::all_local(&users, 2);
        bad.local_bits[0] = 1e5;
        bad.owner = vec![1, 1];
        bad.power[0][0] = 0.1;
        let report = check_constraints(&bad, &channels, &users, &cfg, 1e-6);
        assert!(!report.ownership_consistent, "foreign power must break ownership consistency");

        let mut negative = Allocation::all_local(&users, 2);
        negative.local_bits[0] = 1e5;
        negative.power[0][0] = -1e-3;
        let report = check_constraints(&negative, &channels, &users, &cfg, 1e-6);
        assert!(!report.power_nonnegative);
    }

    #[test]
    fn capacity_bound_is_infinite_without_eavesdropper() {
        let cfg = test_cfg();
        let users = vec![test_user(1e5)];
        let channels = ChannelSet::new(
            vec![vec![1.0, 2.0]],
            vec![vec![0.0, 0.0]],
            vec![vec![0.0, 0.0]],
        );
        assert_eq!(per_user_capacity_bound(0, &channels, &users, &cfg), f64::INFINITY);
    }

    #[test]
    fn capacity_bound_sums_secrecy_ceilings() {
        let cfg = test_cfg();
        let users = vec![test_user(1e5)];
        // Ceilings: log2(4/1) = 2 on subcarrier 0, clipped 0 on subcarrier 1.
        let channels = ChannelSet::new(
            vec![vec![4.0, 1.0]],
            vec![vec![1.0, 2.0]],
            vec![vec![0.0, 0.0]],
        );
        let expected = 1e6 + cfg.block_time_s * cfg.bandwidth_hz * 2.0;
        assert_relative_eq!(
            per_user_capacity_bound(0, &channels, &users, &cfg),
            expected,
            max_relative = 1e-12
        );
    }

    #[test]
    fn noise_power_matches_psd_times_bandwidth() {
        let cfg = test_cfg();
        // -105 dBm/Hz = 10^(-13.5) W/Hz; times 312.5 kHz.
        assert_relative_eq!(cfg.noise_power_w(), 9.882117688026186e-9, max_relative = 1e-12);
    }

    #[test]
    fn worst_eve_gain_is_estimate_plus_error() {
        let channels = ChannelSet::new(
            vec![vec![1.0]],
            vec![vec![0.3]],
            vec![vec![0.07]],
        );
        assert_relative_eq!(channels.worst_eve_gain(0, 0), 0.37, max_relative = 1e-15);
        assert_relative_eq!(channels.worst_eve_row(0)[0], 0.37, max_relative = 1e-15);
    }

    #[test]
    fn validation_rejects_bad_fields() {
        let mut cfg = test_cfg();
        assert!(cfg.validate().is_ok());
        cfg.bandwidth_hz = 0.0;
        let err = cfg.validate().unwrap_err();
        assert_eq!(err.field, "bandwidth_hz");

        let mut user = test_user(1e5);
        assert!(user.validate().is_ok());
        user.energy_weight = -1.0;
        assert_eq!(user.validate().unwrap_err().field, "energy_weight");
        user.energy_weight = 0.25;
        user.task_bits = f64::NAN;
        assert_eq!(user.validate().unwrap_err().field, "task_bits");
    }
}
