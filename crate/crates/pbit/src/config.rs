//! Experiment configuration: a JSON file mirroring [`ExperimentConfig`].
//!
//! Defaults follow the reference protocol: alpha = 1, beta = 1,
//! kappa = 0.8, vdd = 2 V, 10^6 steps per chain, 100 replications.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::device::PBitParams;
use crate::error::ExperimentError;
use crate::network::{self, NetworkSpec};
use crate::sampler::{Schedule, Stage};
use crate::variability::{DistortionSweep, SweepKind};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NetworkSelector {
    AndGate,
    FullAdder,
    RandomSymmetric {
        n: usize,
        weight_range: f64,
        seed: u64,
    },
    FamilyTree {
        n: usize,
        coupling: f64,
        seed: u64,
    },
    File {
        path: String,
    },
}

impl NetworkSelector {
    pub fn build(&self) -> Result<(String, NetworkSpec), ExperimentError> {
        match self {
            NetworkSelector::AndGate => Ok(("and-gate".into(), network::and_gate())),
            NetworkSelector::FullAdder => Ok(("full-adder".into(), network::full_adder()?)),
            NetworkSelector::RandomSymmetric {
                n,
                weight_range,
                seed,
            } => Ok((
                format!("random-{n}"),
                network::random_symmetric(*n, *weight_range, *seed)?,
            )),
            NetworkSelector::FamilyTree { n, coupling, seed } => Ok((
                format!("bn-{n}"),
                network::family_tree_bn(*n, *coupling, *seed)?,
            )),
            NetworkSelector::File { path } => {
                let text = std::fs::read_to_string(path).map_err(|e| ExperimentError::Io {
                    path: path.clone(),
                    source: e,
                })?;
                let name = Path::new(path)
                    .file_stem()
                    .and_then(|s| s.to_str())
                    .unwrap_or("file")
                    .to_string();
                Ok((name, network::load_network(&text)?))
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleSelector {
    Fixed { kappa: f64 },
    DefaultAnneal,
    Anneal { stages: Vec<Stage> },
}

impl Default for ScheduleSelector {
    fn default() -> Self {
        ScheduleSelector::Fixed { kappa: 0.8 }
    }
}

impl ScheduleSelector {
    /// Resolve to a concrete schedule for a chain of `steps` sweeps.
    /// `default_anneal` scales its five linear stages to the chain length.
    pub fn to_schedule(&self, steps: u64) -> Schedule {
        match self {
            ScheduleSelector::Fixed { kappa } => Schedule::Fixed(*kappa),
            ScheduleSelector::DefaultAnneal => Schedule::anneal_over(steps),
            ScheduleSelector::Anneal { stages } => Schedule::Annealing(stages.clone()),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepGrid {
    pub kind: SweepKind,
    /// Maximum-level grid, ascending and non-negative.
    pub levels: Vec<f64>,
    #[serde(default)]
    pub symmetric: bool,
}

impl SweepGrid {
    pub fn sweep_at(&self, level: f64) -> Result<DistortionSweep, ExperimentError> {
        let mut sweep = DistortionSweep::new(self.kind, level)?;
        sweep.symmetric = self.symmetric;
        Ok(sweep)
    }
}

fn default_steps() -> u64 {
    1_000_000
}
fn default_reps() -> usize {
    100
}
fn default_output() -> String {
    "results.csv".into()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub network: NetworkSelector,
    pub sweep: SweepGrid,
    #[serde(default)]
    pub schedule: ScheduleSelector,
    #[serde(default)]
    pub params: PBitParams,
    #[serde(default = "default_steps")]
    pub steps: u64,
    #[serde(default = "default_reps")]
    pub reps: usize,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "default_output")]
    pub output: String,
    #[serde(default)]
    pub burn_in: u64,
    /// Give the ideal reference and the variability chain the same seed.
    /// Self-test mode: at level 0 the comparison is exactly zero.
    #[serde(default)]
    pub paired_seeds: bool,
    /// Marginalize EMOA distributions onto these devices before
    /// comparing (e.g. the I/O terminals of an embedded gate).
    #[serde(default)]
    pub output_bits: Option<Vec<usize>>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, ExperimentError> {
        let cfg: ExperimentConfig = serde_json::from_str(text)
            .map_err(|e| ExperimentError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ExperimentError> {
        let text = std::fs::read_to_string(path).map_err(|e| ExperimentError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.reps == 0 {
            return Err(ExperimentError::Config("reps must be >= 1".into()));
        }
        if self.sweep.levels.is_empty() {
            return Err(ExperimentError::Config("level grid is empty".into()));
        }
        if self
            .sweep
            .levels
            .windows(2)
            .any(|w| w[0] > w[1])
        {
            return Err(ExperimentError::Config(
                "level grid must be sorted ascending".into(),
            ));
        }
        if self.sweep.levels.iter().any(|&l| l < 0.0 || !l.is_finite()) {
            return Err(ExperimentError::Config(
                "levels must be non-negative and finite".into(),
            ));
        }
        for &level in &self.sweep.levels {
            self.sweep.sweep_at(level)?;
        }
        self.params
            .validate()
            .map_err(|e| ExperimentError::Config(e.to_string()))?;
        if self.burn_in >= self.steps {
            return Err(ExperimentError::Config(
                "burn_in must be smaller than steps".into(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_with_defaults() {
        let cfg = ExperimentConfig::from_json(
            r#"{
                "network": "and_gate",
                "sweep": { "kind": "h_shift", "levels": [0.0, 0.5, 1.0] }
            }"#,
        )
        .unwrap();
        assert_eq!(cfg.steps, 1_000_000);
        assert_eq!(cfg.reps, 100);
        assert_eq!(cfg.params.kappa, 0.8);
        assert_eq!(cfg.params.vdd, 2.0);
        assert!(matches!(cfg.schedule, ScheduleSelector::Fixed { kappa } if kappa == 0.8));
        let (name, net) = cfg.network.build().unwrap();
        assert_eq!(name, "and-gate");
        assert_eq!(net.n(), 3);
    }

    #[test]
    fn rejects_bad_grids() {
        let bad = |levels: &str| {
            let text = format!(
                r#"{{"network":"and_gate","sweep":{{"kind":"h_shift","levels":{levels}}}}}"#
            );
            ExperimentConfig::from_json(&text)
        };
        assert!(bad("[]").is_err());
        assert!(bad("[0.5, 0.2]").is_err());
        assert!(bad("[-0.1]").is_err());
        assert!(bad("[0.0, 1.0]").is_ok());
    }

    #[test]
    fn rejects_degenerate_scale_grid() {
        let cfg = ExperimentConfig::from_json(
            r#"{
                "network": "and_gate",
                "sweep": { "kind": "h_scale", "levels": [0.0, 1.0] }
            }"#,
        );
        assert!(cfg.is_err());
    }

    #[test]
    fn selector_builds_every_network() {
        for (sel, n) in [
            (NetworkSelector::AndGate, 3),
            (NetworkSelector::FullAdder, 14),
            (
                NetworkSelector::RandomSymmetric {
                    n: 50,
                    weight_range: 1.0,
                    seed: 1,
                },
                50,
            ),
            (
                NetworkSelector::FamilyTree {
                    n: 20,
                    coupling: 1.0,
                    seed: 1,
                },
                20,
            ),
        ] {
            let (_, net) = sel.build().unwrap();
            assert_eq!(net.n(), n);
        }
    }
}
