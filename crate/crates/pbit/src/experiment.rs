//! Experiment orchestration: sweeps x replications, replicated seeding,
//! and CSV output.
//!
//! Every chain derives its seed from the master seed through a splitmix
//! hash of (level index, replication index, role), so results are
//! reproducible end-to-end and independent of the worker count.

use std::io::Write;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::error::ExperimentError;
use crate::metrics::{self, MaeSummary};
use crate::network::{NetworkKind, NetworkSpec};
use crate::sampler::{run_chain, ChainConfig, Schedule};
use crate::variability::{ideal_ensemble, sample_ensemble};

/// Chain roles in the seed-splitting scheme.
const ROLE_IDEAL: u64 = 0;
const ROLE_VARIABILITY: u64 = 1;
const ROLE_ENSEMBLE: u64 = 2;

/// splitmix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Deterministic per-chain seed: hash(master_seed, level_index, rep, role).
pub fn split_seed(master: u64, level_index: usize, rep: usize, role: u64) -> u64 {
    let mut s = mix(master);
    s = mix(s ^ level_index as u64);
    s = mix(s ^ rep as u64);
    mix(s ^ role)
}

/// One CSV row: the aggregated error at one sweep level.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub network: String,
    pub n: usize,
    pub kind: NetworkKind,
    pub sweep: String,
    pub level: f64,
    pub schedule: String,
    pub mean_mae: f64,
    pub std_mae: f64,
    pub reps: usize,
    pub steps: u64,
}

pub const CSV_HEADER: &str = "network,n,kind,sweep,level,schedule,mean_mae,std_mae,reps,steps";

impl ResultRow {
    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.network,
            self.n,
            self.kind,
            self.sweep,
            self.level,
            self.schedule,
            self.mean_mae,
            self.std_mae,
            self.reps,
            self.steps
        )
    }
}

/// Render rows as a CSV document with the canonical header.
pub fn to_csv(rows: &[ResultRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_csv_line());
        out.push('\n');
    }
    out
}

pub fn write_csv(path: &Path, rows: &[ResultRow]) -> Result<(), ExperimentError> {
    let io_err = |e| ExperimentError::Io {
        path: path.display().to_string(),
        source: e,
    };
    let mut file = std::fs::File::create(path).map_err(io_err)?;
    file.write_all(to_csv(rows).as_bytes()).map_err(io_err)
}

/// One replication: run an ideal reference chain and a variability chain
/// and return the MAE appropriate to the network kind.
fn one_replication(
    cfg: &ExperimentConfig,
    net: &NetworkSpec,
    schedule: &Schedule,
    level_index: usize,
    level: f64,
    rep: usize,
) -> Result<f64, ExperimentError> {
    let sweep = cfg.sweep.sweep_at(level)?;
    let mut ensemble_rng = ChaCha8Rng::seed_from_u64(split_seed(
        cfg.master_seed,
        level_index,
        rep,
        ROLE_ENSEMBLE,
    ));
    let ensemble = sample_ensemble(net.n(), &sweep, &mut ensemble_rng)?;

    let ideal_seed = split_seed(cfg.master_seed, level_index, rep, ROLE_IDEAL);
    let var_seed = if cfg.paired_seeds {
        ideal_seed
    } else {
        split_seed(cfg.master_seed, level_index, rep, ROLE_VARIABILITY)
    };
    let chain = |seed: u64, ens| -> Result<_, ExperimentError> {
        let mut chain_cfg = ChainConfig::new(cfg.steps, seed);
        chain_cfg.burn_in = cfg.burn_in;
        run_chain(net, ens, &cfg.params, schedule, &chain_cfg)
            .map_err(|e| ExperimentError::Chain { level, source: e })
    };
    let ideal = ideal_ensemble(net.n());
    let ideal_acc = chain(ideal_seed, &ideal)?;
    let var_acc = chain(var_seed, &ensemble)?;

    let mae = match net.kind() {
        NetworkKind::Emoa => {
            let mut p_ideal = metrics::distribution(&ideal_acc)?;
            let mut p_var = metrics::distribution(&var_acc)?;
            if let Some(bits) = &cfg.output_bits {
                p_ideal = p_ideal.project(bits);
                p_var = p_var.project(bits);
            }
            metrics::mae_emoa(&p_ideal, &p_var, net.n())?
        }
        NetworkKind::Pga => {
            let s_ideal = metrics::correlation(&ideal_acc)?;
            let s_var = metrics::correlation(&var_acc)?;
            metrics::mae_pga(&s_ideal, &s_var)?
        }
    };
    Ok(mae)
}

/// Run the full sweep-by-replication grid defined by the config.
///
/// Replications run in parallel; results are assembled in (level, rep)
/// order so the output never depends on scheduling.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>, ExperimentError> {
    cfg.validate()?;
    let (label, net) = cfg.network.build()?;
    let schedule = cfg.schedule.to_schedule(cfg.steps);
    run_sweep(cfg, &label, &net, &schedule)
}

fn run_sweep(
    cfg: &ExperimentConfig,
    label: &str,
    net: &NetworkSpec,
    schedule: &Schedule,
) -> Result<Vec<ResultRow>, ExperimentError> {
    let tasks: Vec<(usize, f64, usize)> = cfg
        .sweep
        .levels
        .iter()
        .enumerate()
        .flat_map(|(li, &level)| (0..cfg.reps).map(move |rep| (li, level, rep)))
        .collect();
    let maes: Vec<f64> = tasks
        .par_iter()
        .map(|&(li, level, rep)| one_replication(cfg, net, schedule, li, level, rep))
        .collect::<Result<_, _>>()?;

    let mut rows = Vec::with_capacity(cfg.sweep.levels.len());
    for (li, &level) in cfg.sweep.levels.iter().enumerate() {
        let values = &maes[li * cfg.reps..(li + 1) * cfg.reps];
        let MaeSummary { mean, std, n_reps } = metrics::aggregate(values)?;
        rows.push(ResultRow {
            network: label.to_string(),
            n: net.n(),
            kind: net.kind(),
            sweep: cfg.sweep.kind.to_string(),
            level,
            schedule: schedule.label(),
            mean_mae: mean,
            std_mae: std,
            reps: n_reps,
            steps: cfg.steps,
        });
    }
    Ok(rows)
}

/// Result of [`compare_schedules`]: paired rows per level, plus a soft
/// warning when annealing unexpectedly beats fixed-kappa sampling by
/// more than twice the pooled standard error.
#[derive(Debug, Clone)]
pub struct ScheduleComparison {
    pub rows: Vec<ResultRow>,
    pub warning: Option<String>,
}

/// Run the identical sweep under fixed-kappa sampling and the linear
/// annealing schedule, pairing rows level by level.
pub fn compare_schedules(cfg: &ExperimentConfig) -> Result<ScheduleComparison, ExperimentError> {
    cfg.validate()?;
    let (label, net) = cfg.network.build()?;
    if net.kind() != NetworkKind::Emoa {
        return Err(ExperimentError::Config(
            "schedule comparison applies to EMOA networks only".into(),
        ));
    }
    let fixed = match cfg.schedule.to_schedule(cfg.steps) {
        s @ Schedule::Fixed(_) => s,
        Schedule::Annealing(_) => Schedule::Fixed(cfg.params.kappa),
    };
    let anneal = Schedule::anneal_over(cfg.steps);

    let fixed_rows = run_sweep(cfg, &label, &net, &fixed)?;
    let anneal_rows = run_sweep(cfg, &label, &net, &anneal)?;

    let k = fixed_rows.len() as f64;
    let mean_diff: f64 = fixed_rows
        .iter()
        .zip(&anneal_rows)
        .map(|(f, a)| a.mean_mae - f.mean_mae)
        .sum::<f64>()
        / k;
    let pooled_se: f64 = (fixed_rows
        .iter()
        .zip(&anneal_rows)
        .map(|(f, a)| {
            (f.std_mae.powi(2) + a.std_mae.powi(2)) / f.reps as f64
        })
        .sum::<f64>()
        / k)
        .sqrt()
        / k.sqrt();
    let warning = if mean_diff < -2.0 * pooled_se {
        Some(format!(
            "annealing MAE is lower than fixed-kappa sampling by {:.4} \
             (more than 2 pooled SE = {:.4}); expected the opposite trend",
            -mean_diff,
            2.0 * pooled_se
        ))
    } else {
        None
    };

    let mut rows = Vec::with_capacity(fixed_rows.len() * 2);
    for (f, a) in fixed_rows.into_iter().zip(anneal_rows) {
        rows.push(f);
        rows.push(a);
    }
    Ok(ScheduleComparison { rows, warning })
}
