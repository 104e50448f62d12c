//! Sweep horizontal-shift variability on the AND gate and print the
//! resulting accuracy degradation as CSV. This is the library-level
//! equivalent of `pbit sweep <config>`.

use pbit::config::{ExperimentConfig, NetworkSelector, ScheduleSelector, SweepGrid};
use pbit::experiment::{run_experiment, to_csv};
use pbit::variability::SweepKind;
use pbit::PBitParams;

fn main() {
    let cfg = ExperimentConfig {
        network: NetworkSelector::AndGate,
        sweep: SweepGrid {
            kind: SweepKind::HShift,
            levels: vec![0.0, 0.2, 0.4, 0.6, 0.8, 1.0],
            symmetric: false,
        },
        schedule: ScheduleSelector::Fixed { kappa: 0.8 },
        params: PBitParams::default(),
        steps: 50_000,
        reps: 20,
        master_seed: 1,
        output: String::new(),
        burn_in: 0,
        paired_seeds: false,
        output_bits: None,
    };
    let rows = run_experiment(&cfg).unwrap();
    print!("{}", to_csv(&rows));
}
