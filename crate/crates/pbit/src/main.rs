use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use pbit::config::ExperimentConfig;
use pbit::error::ExperimentError;
use pbit::experiment::{compare_schedules, run_experiment, write_csv};
use pbit::metrics;
use pbit::network::{self, NetworkSpec};
use pbit::sampler::{run_chain, ChainConfig};
use pbit::variability::ideal_ensemble;

const EXIT_CONFIG: u8 = 1;
const EXIT_VERIFY: u8 = 2;
const EXIT_RUNTIME: u8 = 3;

#[derive(Parser)]
#[command(name = "pbit", about = "p-bit network variability simulator", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a single ideal chain from a config and print summary statistics
    Run { config: PathBuf },
    /// Run the full sweep-by-replication experiment and write CSV
    Sweep { config: PathBuf },
    /// Run the sweep under fixed-kappa sampling and annealing, paired
    CompareSchedules { config: PathBuf },
    /// Run the built-in oracles and self-tests
    Verify,
    /// Inspect the built-in networks
    Networks {
        #[command(subcommand)]
        action: NetworksAction,
    },
}

#[derive(Subcommand)]
enum NetworksAction {
    /// List the built-in network names
    List,
    /// Print a network in the pbitnet text format
    Show { name: String },
    /// Write a network to a file in the pbitnet text format
    Export { name: String, path: PathBuf },
}

const BUILTIN_NETWORKS: &[&str] = &[
    "and-gate",
    "full-adder",
    "random-50",
    "bn-8",
    "bn-20",
    "bn-50",
];

fn builtin_network(name: &str) -> Option<NetworkSpec> {
    match name {
        "and-gate" => Some(network::and_gate()),
        "full-adder" => network::full_adder().ok(),
        "random-50" => network::random_symmetric(50, 1.0, 1).ok(),
        "bn-8" => network::family_tree_bn(8, 0.5, 1).ok(),
        "bn-20" => network::family_tree_bn(20, 0.5, 1).ok(),
        "bn-50" => network::family_tree_bn(50, 0.5, 1).ok(),
        _ => None,
    }
}

fn exit_code_for(err: &ExperimentError) -> u8 {
    match err {
        ExperimentError::Config(_) | ExperimentError::Io { .. } => EXIT_CONFIG,
        _ => EXIT_RUNTIME,
    }
}

fn cmd_run(path: &PathBuf) -> Result<(), (u8, String)> {
    let cfg =
        ExperimentConfig::load(path).map_err(|e| (exit_code_for(&e), e.to_string()))?;
    let (label, net) = cfg
        .network
        .build()
        .map_err(|e| (exit_code_for(&e), e.to_string()))?;
    let schedule = cfg.schedule.to_schedule(cfg.steps);
    let mut chain_cfg = ChainConfig::new(cfg.steps, cfg.master_seed);
    chain_cfg.burn_in = cfg.burn_in;
    let acc = run_chain(
        &net,
        &ideal_ensemble(net.n()),
        &cfg.params,
        &schedule,
        &chain_cfg,
    )
    .map_err(|e| (EXIT_RUNTIME, e.to_string()))?;

    println!(
        "network {} ({} devices, {}), {} recorded sweeps, schedule {}",
        label,
        net.n(),
        net.kind(),
        acc.recorded_steps(),
        schedule.label()
    );
    println!("marginals <m_i>:");
    for i in 0..net.n() {
        println!("  device {i:>3}: {:+.4}", acc.marginal(i));
    }
    let mut top: Vec<(u64, u64)> = acc.histogram().iter().map(|(&s, &c)| (s, c)).collect();
    top.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    println!("most visited states:");
    for (state, count) in top.iter().take(10) {
        let spins: String = (0..net.n())
            .map(|i| if state >> i & 1 == 1 { '+' } else { '-' })
            .collect();
        let freq = *count as f64 / acc.recorded_steps() as f64;
        match net.energy(&network::decode_state(*state, net.n())) {
            Ok(e) => println!("  {spins}  p={freq:.4}  E={e:+.2}"),
            Err(_) => println!("  {spins}  p={freq:.4}"),
        }
    }
    if net.kind() == pbit::NetworkKind::Pga {
        let sigma = metrics::correlation(&acc).map_err(|e| (EXIT_RUNTIME, e.to_string()))?;
        println!("correlation matrix:");
        for i in 0..net.n() {
            let row: Vec<String> = (0..net.n())
                .map(|j| format!("{:+.3}", sigma.get(i, j)))
                .collect();
            println!("  {}", row.join(" "));
        }
    }
    Ok(())
}

fn cmd_sweep(path: &PathBuf) -> Result<(), (u8, String)> {
    let cfg =
        ExperimentConfig::load(path).map_err(|e| (exit_code_for(&e), e.to_string()))?;
    let rows = run_experiment(&cfg).map_err(|e| (exit_code_for(&e), e.to_string()))?;
    let out = PathBuf::from(&cfg.output);
    write_csv(&out, &rows).map_err(|e| (EXIT_RUNTIME, e.to_string()))?;
    for row in &rows {
        println!("{}", row.to_csv_line());
    }
    println!("wrote {} rows to {}", rows.len(), out.display());
    Ok(())
}

fn cmd_compare(path: &PathBuf) -> Result<(), (u8, String)> {
    let cfg =
        ExperimentConfig::load(path).map_err(|e| (exit_code_for(&e), e.to_string()))?;
    let out = compare_schedules(&cfg).map_err(|e| (exit_code_for(&e), e.to_string()))?;
    let path_out = PathBuf::from(&cfg.output);
    write_csv(&path_out, &out.rows).map_err(|e| (EXIT_RUNTIME, e.to_string()))?;
    for row in &out.rows {
        println!("{}", row.to_csv_line());
    }
    if let Some(w) = &out.warning {
        eprintln!("warning: {w}");
    }
    println!("wrote {} rows to {}", out.rows.len(), path_out.display());
    Ok(())
}

fn cmd_networks(action: &NetworksAction) -> Result<(), (u8, String)> {
    match action {
        NetworksAction::List => {
            for name in BUILTIN_NETWORKS {
                println!("{name}");
            }
            Ok(())
        }
        NetworksAction::Show { name } => {
            let net = builtin_network(name)
                .ok_or_else(|| (EXIT_CONFIG, format!("unknown network `{name}`")))?;
            print!("{}", network::save_network(&net));
            Ok(())
        }
        NetworksAction::Export { name, path } => {
            let net = builtin_network(name)
                .ok_or_else(|| (EXIT_CONFIG, format!("unknown network `{name}`")))?;
            std::fs::write(path, network::save_network(&net))
                .map_err(|e| (EXIT_RUNTIME, format!("{}: {e}", path.display())))?;
            println!("wrote {name} to {}", path.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { config } => cmd_run(config),
        Command::Sweep { config } => cmd_sweep(config),
        Command::CompareSchedules { config } => cmd_compare(config),
        Command::Verify => {
            let report = pbit::verify::verify();
            print!("{report}");
            if report.all_passed() {
                Ok(())
            } else {
                Err((EXIT_VERIFY, "verification failed".to_string()))
            }
        }
        Command::Networks { action } => cmd_networks(action),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
