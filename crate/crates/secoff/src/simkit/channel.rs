//! Seeded fading draws.
//!
//! Gains are Rayleigh-faded distance-scaled means, stored normalized by the
//! per-subcarrier noise power so the solver works with dimensionless SNR per
//! watt. One `ChaCha8` stream per instance, with a fixed draw order (all
//! access-point gains user by user, then all eavesdropper means), keeps every
//! run reproducible and makes draws independent of parameters that only
//! scale the means: sweeping task size or eavesdropper distance reuses the
//! same fading realization for a given seed.

use crate::model::{ChannelSet, SystemConfig, UserProfile};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Mean channel power gain at `distance_m`: the reference gain scaled by
/// `(d / d_ref)^-exponent`.
pub fn pathloss_gain(distance_m: f64, cfg: &SystemConfig) -> f64 {
    debug_assert!(distance_m > 0.0);
    let reference = 10f64.powf(cfg.pathloss_ref_db / 10.0);
    reference * (distance_m / cfg.pathloss_ref_dist_m).powf(-cfg.pathloss_exponent)
}

/// Draws one fading realization for `users` under `cfg`.
///
/// Each link draws a unit-mean exponential power coefficient via inverse
/// CDF, scaled by its pathloss and normalized by the noise power. The
/// eavesdropper uncertainty is flat per user: `csi_error_fraction` of that
/// user's mean eavesdropper gain.
pub fn generate_channels(cfg: &SystemConfig, users: &[UserProfile], seed: u64) -> ChannelSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = cfg.noise_power_w();
    let n = cfg.num_subcarriers;

    let unit_exp = |rng: &mut ChaCha8Rng| -> f64 {
        let u: f64 = rng.gen();
        -(1.0 - u).ln()
    };

    let h: Vec<Vec<f64>> = users
        .iter()
        .map(|user| {
            let mean = pathloss_gain(user.dist_ap_m, cfg) / noise;
            (0..n).map(|_| mean * unit_exp(&mut rng)).collect()
        })
        .collect();
    let g_bar: Vec<Vec<f64>> = users
        .iter()
        .map(|user| {
            let mean = pathloss_gain(user.dist_eve_m, cfg) / noise;
            (0..n).map(|_| mean * unit_exp(&mut rng)).collect()
        })
        .collect();
    let eps: Vec<Vec<f64>> = users
        .iter()
        .map(|user| {
            let bound = cfg.csi_error_fraction * pathloss_gain(user.dist_eve_m, cfg) / noise;
            vec![bound; n]
        })
        .collect();
    ChannelSet::new(h, g_bar, eps)
}

/// Decorrelates the channel stream from other per-instance draws.
const CHANNEL_SEED_SALT: u64 = 0x9E37_79B9_7F4A_7C15;

/// Small seeded instance that stresses the combinatorial side: the CPUs can
/// absorb at most 4e5 of the 8e5 to 1.1e6 task bits, so most of the load must
/// go over the air, and the nearby eavesdropper keeps per-subcarrier
/// secrecy capacity finite. Which user gets which subcarrier then matters
/// to first order. Used by the oracle cross-checks, where the exhaustive
/// search needs a small subcarrier count.
pub fn oracle_instance(
    seed: u64,
    num_users: usize,
    num_subcarriers: usize,
) -> (SystemConfig, Vec<UserProfile>, ChannelSet) {
    assert!(num_users >= 1 && num_subcarriers >= 1);
    let cfg = SystemConfig {
        block_time_s: 1.0,
        bandwidth_hz: 312_500.0,
        num_subcarriers,
        noise_psd_dbm_hz: -105.0,
        pathloss_ref_db: -30.0,
        pathloss_ref_dist_m: 1.0,
        pathloss_exponent: 3.7,
        csi_error_fraction: 0.1,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let users: Vec<UserProfile> = (0..num_users)
        .map(|_| UserProfile {
            task_bits: rng.gen_range(8e5..1.1e6),
            cycles_per_bit: 1e3,
            cap_coeff_j_per_cycle: 1e-28,
            max_cpu_hz: 4e8,
            energy_weight: 1.0 / num_users as f64,
            dist_ap_m: 10.0,
            dist_eve_m: 20.0,
        })
        .collect();
    let channels = generate_channels(&cfg, &users, seed ^ CHANNEL_SEED_SALT);
    (cfg, users, channels)
}
