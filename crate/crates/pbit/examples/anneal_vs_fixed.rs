//! Compare fixed-kappa sampling against a linear annealing schedule on
//! the same variability sweep, with paired seeds so the two arms see
//! identical device ensembles.

use pbit::config::{ExperimentConfig, NetworkSelector, ScheduleSelector, SweepGrid};
use pbit::experiment::{compare_schedules, to_csv};
use pbit::variability::SweepKind;
use pbit::PBitParams;

fn main() {
    let cfg = ExperimentConfig {
        network: NetworkSelector::AndGate,
        sweep: SweepGrid {
            kind: SweepKind::HShift,
            levels: vec![0.0, 0.5, 1.0],
            symmetric: false,
        },
        schedule: ScheduleSelector::Fixed { kappa: 0.8 },
        params: PBitParams::default(),
        steps: 100_000,
        reps: 10,
        master_seed: 3,
        output: String::new(),
        burn_in: 0,
        paired_seeds: false,
        output_bits: None,
    };
    let out = compare_schedules(&cfg).unwrap();
    print!("{}", to_csv(&out.rows));
    match out.warning {
        Some(w) => println!("\nwarning: {w}"),
        None => println!("\nno schedule regression detected"),
    }
}
