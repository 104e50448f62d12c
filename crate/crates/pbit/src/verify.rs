//! Built-in oracle checks: brute-force ground-state verification of the
//! embedded gate networks, the stochastic sampling law, the stationary
//! Boltzmann distribution, and metric self-tests.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::device::{output_probability, sample_output, PBitParams};
use crate::metrics::{self, boltzmann_distribution, total_variation, StateDistribution};
use crate::network::{and_gate, full_adder, FULL_ADDER_IO};
use crate::sampler::{run_chain, ChainConfig, Schedule};
use crate::variability::ideal_ensemble;

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl std::fmt::Display for Report {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "[{tag}] {}: {}", c.name, c.detail)?;
        }
        Ok(())
    }
}

fn check(name: &'static str, passed: bool, detail: String) -> Check {
    Check {
        name,
        passed,
        detail,
    }
}

fn and_gate_oracle() -> Check {
    let net = and_gate();
    let ground = match net.ground_states() {
        Ok(g) => g,
        Err(e) => return check("and-gate truth table", false, e.to_string()),
    };
    let rows: BTreeSet<Vec<i8>> = ground.iter().map(|g| g.state.clone()).collect();
    let expected: BTreeSet<Vec<i8>> = [
        vec![-1, -1, -1],
        vec![-1, 1, -1],
        vec![1, -1, -1],
        vec![1, 1, 1],
    ]
    .into_iter()
    .collect();
    if rows == expected {
        check(
            "and-gate truth table",
            true,
            "4 ground states match the AND rows".into(),
        )
    } else {
        check(
            "and-gate truth table",
            false,
            format!("ground states {rows:?} differ from AND rows"),
        )
    }
}

fn full_adder_oracle() -> Check {
    let net = match full_adder() {
        Ok(n) => n,
        Err(e) => return check("full-adder truth table", false, e.to_string()),
    };
    let ground = match net.ground_states() {
        Ok(g) => g,
        Err(e) => return check("full-adder truth table", false, e.to_string()),
    };
    let mut offending = Vec::new();
    let mut inputs = BTreeSet::new();
    for g in &ground {
        let [a, b, cin, sum, cout] = FULL_ADDER_IO.map(|i| (g.state[i] + 1) as u8 / 2);
        if a + b + cin != sum + 2 * cout {
            offending.push(g.state.clone());
        }
        inputs.insert((a, b, cin));
    }
    if offending.is_empty() && inputs.len() == 8 {
        check(
            "full-adder truth table",
            true,
            format!("{} ground states cover all 8 truth-table rows", ground.len()),
        )
    } else {
        check(
            "full-adder truth table",
            false,
            format!(
                "{} invalid ground states {:?}; {} of 8 input rows covered",
                offending.len(),
                offending,
                inputs.len()
            ),
        )
    }
}

fn boltzmann_check(steps: u64) -> Check {
    let net = and_gate();
    let params = PBitParams::default();
    let kappa = 0.8;
    let acc = match run_chain(
        &net,
        &ideal_ensemble(3),
        &params,
        &Schedule::Fixed(kappa),
        &ChainConfig::new(steps, 0xB017),
    ) {
        Ok(acc) => acc,
        Err(e) => return check("boltzmann stationary law", false, e.to_string()),
    };
    let empirical = metrics::distribution(&acc).unwrap();
    let analytic = boltzmann_distribution(&net, kappa, params.beta).unwrap();
    let tv = total_variation(&empirical, &analytic);
    check(
        "boltzmann stationary law",
        tv < 0.01,
        format!("TV distance {tv:.5} over {steps} sweeps (threshold 0.01)"),
    )
}

fn sampling_law_check() -> Check {
    let params = PBitParams::default();
    let draws = 1_000_000u64;
    let bound = 4.0 / (draws as f64).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5A11);
    let mut worst: f64 = 0.0;
    for y in [-0.9, -0.5, 0.0, 0.5, 0.9] {
        let mut plus = 0u64;
        for _ in 0..draws {
            if sample_output(y, &params, &mut rng) > 0.0 {
                plus += 1;
            }
        }
        let freq = plus as f64 / draws as f64;
        let expected = output_probability(y, params.alpha);
        worst = worst.max((freq - expected).abs());
    }
    check(
        "sampling law",
        worst < bound,
        format!("worst |empirical - exact| = {worst:.5} (bound {bound:.5})"),
    )
}

fn metric_self_tests() -> Check {
    let mk = |entries: &[(u64, f64)]| StateDistribution {
        probs: entries.iter().copied().collect(),
        n: 3,
    };
    let ground = [0b000u64, 0b010, 0b001, 0b111];
    let ideal = mk(&ground.map(|s| (s, 0.25)));
    let all: Vec<(u64, f64)> = (0..8).map(|s| (s, 0.125)).collect();
    let var = mk(&all);

    let self_zero = metrics::mae_emoa(&ideal, &ideal, 3).unwrap() == 0.0;
    let hand = (metrics::mae_emoa(&ideal, &var, 3).unwrap() - 1.0 / 3.0).abs() < 1e-12;
    let agg = metrics::aggregate(&[0.0, 2.0]).unwrap();
    let agg_ok = agg.mean == 1.0 && (agg.std - std::f64::consts::SQRT_2).abs() < 1e-12;
    let ok = self_zero && hand && agg_ok;
    check(
        "metric self-tests",
        ok,
        if ok {
            "identity, hand-computed EMOA value, and aggregation all agree".into()
        } else {
            format!("self_zero={self_zero} hand={hand} agg_ok={agg_ok}")
        },
    )
}

/// Run every oracle and return the aggregate report.
pub fn verify() -> Report {
    Report {
        checks: vec![
            and_gate_oracle(),
            full_adder_oracle(),
            boltzmann_check(1_000_000),
            sampling_law_check(),
            metric_self_tests(),
        ],
    }
}
