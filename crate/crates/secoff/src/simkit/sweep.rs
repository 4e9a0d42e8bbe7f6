//! Runs an experiment grid and collects per-instance rows.

use crate::benchmarks::{run_scheme, SchemeId};
use crate::model::{SolveStatus, UserProfile};
use crate::simkit::channel::generate_channels;
use crate::simkit::config::{ExperimentConfig, SweepKind};
use crate::solver::SolverOptions;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// One scheme on one seeded instance. `avg_energy_j` is the weight-averaged
/// per-user energy (the weights sum to one in the stock experiments);
/// infinite when the instance is infeasible for the scheme.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub scheme: SchemeId,
    pub sweep_kind: SweepKind,
    pub sweep_value: f64,
    pub seed: u64,
    pub avg_energy_j: f64,
    pub status: SolveStatus,
}

/// All users move together along the sweep axis.
fn apply_sweep(users: &[UserProfile], kind: SweepKind, value: f64) -> Vec<UserProfile> {
    users
        .iter()
        .map(|u| {
            let mut u = u.clone();
            match kind {
                SweepKind::TaskBits => u.task_bits = value,
                SweepKind::EveDistance => u.dist_eve_m = value,
            }
            u
        })
        .collect()
}

/// Runs every (sweep value, seed, scheme) cell of the experiment.
///
/// Cells run in parallel; the returned rows are sorted by scheme, sweep
/// value and seed, so the output is independent of scheduling. Instance `i`
/// uses seed `base_seed + i`, and the fading draw depends only on the seed
/// and the user population, so along a task-size sweep all values share
/// their channels.
pub fn run_sweep(exp: &ExperimentConfig, opts: &SolverOptions) -> Vec<ResultRow> {
    let cells: Vec<(f64, u64)> = exp
        .sweep_values
        .iter()
        .flat_map(|&value| {
            (0..exp.num_seeds as u64).map(move |i| (value, exp.base_seed.wrapping_add(i)))
        })
        .collect();

    let mut rows: Vec<ResultRow> = cells
        .par_iter()
        .flat_map_iter(|&(value, seed)| {
            let users = apply_sweep(&exp.users, exp.sweep_kind, value);
            let channels = generate_channels(&exp.system, &users, seed);
            let reports: Vec<ResultRow> = exp
                .schemes
                .iter()
                .map(|&scheme| {
                    let report = run_scheme(scheme, &channels, &users, &exp.system, opts);
                    ResultRow {
                        scheme,
                        sweep_kind: exp.sweep_kind,
                        sweep_value: value,
                        seed,
                        avg_energy_j: report.primal_energy_j,
                        status: report.status,
                    }
                })
                .collect();
            reports
        })
        .collect();

    rows.sort_by(|a, b| {
        a.scheme
            .cmp(&b.scheme)
            .then(a.sweep_value.total_cmp(&b.sweep_value))
            .then(a.seed.cmp(&b.seed))
    });
    rows
}

/// Mean energy of a scheme at one sweep value, skipping infeasible rows.
/// `None` when every matching row was infeasible or none matched.
pub fn mean_energy(rows: &[ResultRow], scheme: SchemeId, sweep_value: f64) -> Option<f64> {
    let mut acc = 0.0;
    let mut count = 0usize;
    for row in rows {
        if row.scheme == scheme
            && row.sweep_value == sweep_value
            && row.status != SolveStatus::Infeasible
        {
            acc += row.avg_energy_j;
            count += 1;
        }
    }
    (count > 0).then(|| acc / count as f64)
}
