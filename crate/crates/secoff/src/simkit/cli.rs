//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a requested solve or check came back
//! infeasible or failed, 2 on invalid input (bad flags, unreadable or
//! malformed config).

use crate::benchmarks::{run_scheme, SchemeId};
use crate::model::{offload_energy, secrecy_rate, SolveReport, SolveStatus};
use crate::oracle::{brute_force_solve, BruteForceOutcome, OracleOptions};
use crate::simkit::channel::{generate_channels, oracle_instance};
use crate::simkit::config::{ConfigError, ExperimentConfig};
use crate::simkit::csvio::write_csv;
use crate::simkit::sweep::run_sweep;
use crate::solver::{optimal_power, psi, solve, SolverOptions};
use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "secoff",
    version,
    about = "Energy-optimal secure computation offloading over multicarrier uplinks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one seeded instance and print per-scheme reports.
    Solve {
        /// Experiment config JSON; the stock task-size experiment when
        /// omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Fading seed; the config's base seed when omitted.
        #[arg(long)]
        seed: Option<u64>,
        /// Comma-separated schemes; the config's list when omitted.
        #[arg(long, value_delimiter = ',')]
        scheme: Vec<SchemeId>,
    },
    /// Run the full sweep grid and write one CSV row per instance.
    Sweep {
        /// Experiment config JSON; the stock task-size experiment when
        /// omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
        /// Override the number of seeds per sweep value.
        #[arg(long)]
        seeds: Option<usize>,
        /// Override the base seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Comma-separated schemes; the config's list when omitted.
        #[arg(long, value_delimiter = ',')]
        scheme: Vec<SchemeId>,
    },
    /// Cross-check the solver against exhaustive enumeration on small
    /// seeded instances.
    OracleCheck {
        /// Number of instances.
        #[arg(long, default_value_t = 20)]
        seeds: usize,
        /// First seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a condensed correctness battery.
    Selftest,
}

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = err.print();
            return code;
        }
    };
    match cli.command {
        Command::Solve { config, seed, scheme } => cmd_solve(config, seed, scheme),
        Command::Sweep { config, out, seeds, seed, scheme } => {
            cmd_sweep(config, out, seeds, seed, scheme)
        }
        Command::OracleCheck { seeds, seed } => cmd_oracle_check(seeds, seed),
        Command::Selftest => cmd_selftest(),
    }
}

fn load_experiment(path: Option<PathBuf>) -> Result<ExperimentConfig, ConfigError> {
    match path {
        Some(p) => ExperimentConfig::load(&p),
        None => Ok(ExperimentConfig::default_task_sweep()),
    }
}

fn cmd_solve(config: Option<PathBuf>, seed: Option<u64>, scheme: Vec<SchemeId>) -> i32 {
    let exp = match load_experiment(config) {
        Ok(exp) => exp,
        Err(err) => {
            eprintln!("error: {err}");
            return 2;
        }
    };
    let seed = seed.unwrap_or(exp.base_seed);
    let schemes = if scheme.is_empty() { exp.schemes.clone() } else { scheme };
    let channels = generate_channels(&exp.system, &exp.users, seed);
    let opts = SolverOptions::default();

    println!("seed {seed}, {} users, {} subcarriers", exp.users.len(), exp.system.num_subcarriers);
    let mut exit = 0;
    for s in schemes {
        let report = run_scheme(s, &channels, &exp.users, &exp.system, &opts);
        print_report(s, &report, &exp, &channels);
        if report.status == SolveStatus::Infeasible {
            exit = 1;
        }
    }
    exit
}

fn print_report(
    scheme: SchemeId,
    report: &SolveReport,
    exp: &ExperimentConfig,
    channels: &crate::model::ChannelSet,
) {
    let status = match report.status {
        SolveStatus::Optimal => "optimal",
        SolveStatus::Infeasible => "infeasible",
        SolveStatus::MaxIterations => "max_iterations",
    };
    println!(
        "{scheme}: status={status} energy_j={:.6e} bound_j={:.6e} gap={:.2e} iters={}",
        report.primal_energy_j, report.dual_bound_j, report.relative_gap, report.iterations
    );
    if report.status == SolveStatus::Infeasible {
        return;
    }
    for k in 0..exp.users.len() {
        let owned = report.allocation.owned_mask(k);
        let g = channels.worst_eve_row(k);
        let rate =
            secrecy_rate(&owned, &report.allocation.power[k], channels.ap_row(k), &g, &exp.system);
        let tx = offload_energy(&owned, &report.allocation.power[k], &exp.system);
        println!(
            "  user {k}: local_bits={:.1} offload_bits={:.1} tx_energy_j={:.3e} subcarriers={}",
            report.allocation.local_bits[k],
            exp.system.block_time_s * rate,
            tx,
            owned.iter().filter(|&&o| o).count()
        );
    }
}

fn cmd_sweep(
    config: Option<PathBuf>,
    out: PathBuf,
    seeds: Option<usize>,
    seed: Option<u64>,
    scheme: Vec<SchemeId>,
) -> i32 {
    let mut exp = match load_experiment(config) {
        Ok(exp) => exp,
        Err(err) => {
            eprintln!("error: {err}");
            return 2;
        }
    };
    if let Some(n) = seeds {
        exp.num_seeds = n;
    }
    if let Some(s) = seed {
        exp.base_seed = s;
    }
    if !scheme.is_empty() {
        exp.schemes = scheme;
    }
    if let Err(err) = exp.validate() {
        eprintln!("error: invalid experiment after overrides: {err}");
        return 2;
    }

    let rows = run_sweep(&exp, &SolverOptions::default());
    if let Err(err) = write_csv(&out, &rows) {
        eprintln!("error: {err}");
        return 2;
    }
    println!("wrote {} rows to {}", rows.len(), out.display());
    0
}

fn cmd_oracle_check(seeds: usize, first_seed: u64) -> i32 {
    let opts = SolverOptions::default();
    let oracle_opts = OracleOptions::default();
    let mut failures = 0usize;
    for i in 0..seeds {
        let seed = first_seed.wrapping_add(i as u64);
        let (cfg, users, channels) = oracle_instance(seed, 2, 4);
        let report = solve(&channels, &users, &cfg, &opts);
        let outcome = brute_force_solve(&channels, &users, &cfg, &oracle_opts)
            .expect("2 users on 4 subcarriers is enumerable");
        match (report.status, outcome) {
            (SolveStatus::Infeasible, BruteForceOutcome::Infeasible) => {
                println!("seed {seed}: infeasible (agreed)");
            }
            (_, BruteForceOutcome::Optimal { energy_j, .. }) => {
                let tol = 1e-9 * energy_j.max(1.0);
                let sandwich = report.dual_bound_j <= energy_j + tol
                    && energy_j <= report.primal_energy_j + tol;
                let tight = report.primal_energy_j <= 1.10 * energy_j + tol;
                let ok = sandwich && tight && report.status == SolveStatus::Optimal;
                println!(
                    "seed {seed}: dual={:.6e} exhaustive={:.6e} primal={:.6e} {}",
                    report.dual_bound_j,
                    energy_j,
                    report.primal_energy_j,
                    if ok { "ok" } else { "VIOLATION" }
                );
                if !ok {
                    failures += 1;
                }
            }
            (status, BruteForceOutcome::Infeasible) => {
                println!("seed {seed}: solver says {status:?}, exhaustive says infeasible");
                failures += 1;
            }
        }
    }
    if failures == 0 {
        println!("oracle check passed on {seeds} instances");
        0
    } else {
        eprintln!("oracle check failed on {failures} of {seeds} instances");
        1
    }
}

fn cmd_selftest() -> i32 {
    let mut failures = 0usize;
    let mut check = |name: &str, ok: bool| {
        println!("[{}] {name}", if ok { "ok" } else { "FAIL" });
        if !ok {
            failures += 1;
        }
    };

    // Closed-form power against golden-section search.
    {
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        let mut ok = true;
        for _ in 0..200 {
            let lambda = 10f64.powf(rng.gen_range(-9.0..-4.0));
            let h = 10f64.powf(rng.gen_range(-2.0..2.0));
            let g = h * rng.gen_range(0.0..0.999);
            let alpha = rng.gen_range(0.1..1.0);
            let b = 312_500.0;
            let p = optimal_power(lambda, h, g, alpha, b);
            let golden = crate::oracle::golden_section_psi_min(
                lambda, h, g, alpha, b, 1.0, 4.0 * p + 1.0,
            );
            let v_closed = psi(p, lambda, h, g, alpha, b, 1.0);
            let v_golden = psi(golden, lambda, h, g, alpha, b, 1.0);
            if v_closed > v_golden + 1e-9 || (p - golden).abs() > 1e-6 * (1.0 + p) {
                ok = false;
                break;
            }
        }
        check("closed-form power matches golden-section search", ok);
    }

    // Water-filling branch with a deaf eavesdropper.
    {
        let mut rng = ChaCha8Rng::seed_from_u64(102);
        let mut ok = true;
        for _ in 0..200 {
            let lambda = 10f64.powf(rng.gen_range(-9.0..-4.0));
            let h = 10f64.powf(rng.gen_range(-3.0..1.0));
            let alpha = rng.gen_range(0.1..1.0);
            let b = 312_500.0;
            let expected = (lambda * b / (std::f64::consts::LN_2 * alpha) - 1.0 / h).max(0.0);
            let got = optimal_power(lambda, h, 0.0, alpha, b);
            if (got - expected).abs() > 1e-12 * (1.0 + expected) {
                ok = false;
                break;
            }
        }
        check("water-filling closed form with no eavesdropper", ok);
    }

    // Weak duality and feasible repair against the exhaustive oracle.
    {
        let opts = SolverOptions::default();
        let mut ok = true;
        for seed in 5000..5005u64 {
            let (cfg, users, channels) = oracle_instance(seed, 2, 4);
            let report = solve(&channels, &users, &cfg, &opts);
            let outcome =
                brute_force_solve(&channels, &users, &cfg, &OracleOptions::default()).unwrap();
            let BruteForceOutcome::Optimal { energy_j, .. } = outcome else {
                ok = false;
                break;
            };
            let tol = 1e-9 * energy_j.max(1.0);
            let feasible = crate::model::check_constraints(
                &report.allocation,
                &channels,
                &users,
                &cfg,
                1e-6,
            )
            .satisfied();
            if report.dual_bound_j > energy_j + tol
                || energy_j > report.primal_energy_j + tol
                || !feasible
            {
                ok = false;
                break;
            }
        }
        check("dual bound and repaired primal sandwich the exhaustive optimum", ok);
    }

    // Scheme dominance on stock-parameter instances.
    {
        let mut exp = ExperimentConfig::default_task_sweep();
        exp.system.num_subcarriers = 16;
        let opts = SolverOptions::default();
        let mut ok = true;
        for seed in 9000..9003u64 {
            let channels = generate_channels(&exp.system, &exp.users, seed);
            let energy = |scheme| {
                run_scheme(scheme, &channels, &exp.users, &exp.system, &opts).primal_energy_j
            };
            let proposed = energy(SchemeId::Proposed);
            let relaxed = energy(SchemeId::NoEavesdropper);
            let offload = energy(SchemeId::SecureFullOffload);
            let local = energy(SchemeId::LocalOnly);
            let slack = 1e-9 * local.max(1.0);
            if relaxed > proposed + slack || proposed > offload.min(local) + slack {
                ok = false;
                break;
            }
        }
        check("benchmark schemes order as relaxations and restrictions", ok);
    }

    // Sweep determinism, down to the serialized bytes.
    {
        let mut exp = ExperimentConfig::default_task_sweep();
        exp.system.num_subcarriers = 8;
        exp.users.truncate(2);
        for u in &mut exp.users {
            u.energy_weight = 0.5;
        }
        exp.sweep_values = vec![1e5, 3e5];
        exp.num_seeds = 3;
        let opts = SolverOptions::default();
        let to_bytes = |rows: &[crate::simkit::sweep::ResultRow]| -> Vec<u8> {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in rows {
                w.serialize(r).unwrap();
            }
            w.into_inner().unwrap()
        };
        let a = to_bytes(&run_sweep(&exp, &opts));
        let b = to_bytes(&run_sweep(&exp, &opts));
        check("repeated sweeps serialize to identical bytes", a == b);
    }

    if failures == 0 {
        println!("selftest passed");
        0
    } else {
        eprintln!("selftest failed {failures} checks");
        1
    }
}
