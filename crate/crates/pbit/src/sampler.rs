//! The stochastic chain engine.
//!
//! One chain sweeps the devices in `update_order`, Gibbs style: each
//! device recomputes its input from the latest outputs and resamples.
//! A finite energy barrier gates each device's update with a memoryless
//! per-step attempt probability exp(-U/k_BT). The coupling coefficient
//! kappa either stays fixed or follows an annealing schedule.
//!
//! Stationary law: with ideal devices, alpha = 1, and symmetric J, the
//! conditional P(m_i = +1 | rest) = (1 + tanh(beta*kappa*f_i))/2 with
//! f_i = h_i + sum_j J_ij m_j is exactly the Gibbs conditional of
//! pi(m) proportional to exp(-beta*kappa*E(m)), where E is
//! [`NetworkSpec::energy`]. Sequential sweeps therefore converge to that
//! Boltzmann distribution; see `metrics::boltzmann_distribution` for the
//! analytic reference.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::device::{update_probability, PBitParams};
use crate::error::SamplerError;
use crate::network::{encode_state, NetworkSpec};
use crate::variability::DeviceEnsemble;

/// One annealing stage: hold `kappa` for `steps` sweeps.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Stage {
    pub kappa: f64,
    pub steps: u64,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum Schedule {
    /// One kappa for the whole chain.
    Fixed(f64),
    /// Piecewise-constant kappa; stage step counts must sum to the chain
    /// length.
    Annealing(Vec<Stage>),
}

impl Schedule {
    /// The annealing protocol from the reference experiments: kappa swept
    /// linearly from 0.5 to 5.0 in 5 stages of 2x10^5 steps each.
    pub fn default_anneal() -> Schedule {
        Schedule::anneal_over(1_000_000)
    }

    /// Linear 5-stage anneal from kappa 0.5 to 5.0 spread over
    /// `total_steps` sweeps (remainder steps go to the last stage).
    pub fn anneal_over(total_steps: u64) -> Schedule {
        let stages = 5u64;
        let base = total_steps / stages;
        let mut out = Vec::with_capacity(stages as usize);
        for k in 0..stages {
            let kappa = 0.5 + (5.0 - 0.5) * k as f64 / (stages - 1) as f64;
            let steps = if k == stages - 1 {
                total_steps - base * (stages - 1)
            } else {
                base
            };
            out.push(Stage { kappa, steps });
        }
        Schedule::Annealing(out)
    }

    /// Resolve into explicit stages covering exactly `steps` sweeps.
    pub fn stages(&self, steps: u64) -> Result<Vec<Stage>, SamplerError> {
        match self {
            Schedule::Fixed(kappa) => {
                if !(*kappa > 0.0) {
                    return Err(SamplerError::InvalidStage {
                        stage: 0,
                        kappa: *kappa,
                        steps,
                    });
                }
                Ok(vec![Stage {
                    kappa: *kappa,
                    steps,
                }])
            }
            Schedule::Annealing(stages) => {
                let mut total = 0u64;
                for (idx, s) in stages.iter().enumerate() {
                    if !(s.kappa > 0.0) || s.steps == 0 {
                        return Err(SamplerError::InvalidStage {
                            stage: idx,
                            kappa: s.kappa,
                            steps: s.steps,
                        });
                    }
                    total += s.steps;
                }
                if total != steps {
                    return Err(SamplerError::ScheduleMismatch {
                        schedule: total,
                        steps,
                    });
                }
                Ok(stages.clone())
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            Schedule::Fixed(k) => format!("fixed({k})"),
            Schedule::Annealing(stages) => match (stages.first(), stages.last()) {
                (Some(a), Some(b)) => format!("anneal({}..{})", a.kappa, b.kappa),
                _ => "anneal()".to_string(),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ChainConfig {
    /// Number of full sweeps.
    pub steps: u64,
    pub seed: u64,
    /// Initial sweeps excluded from the accumulators.
    pub burn_in: u64,
}

impl ChainConfig {
    pub fn new(steps: u64, seed: u64) -> Self {
        ChainConfig {
            steps,
            seed,
            burn_in: 0,
        }
    }
}

/// Statistics gathered from one chain run.
///
/// States are encoded as bit patterns (bit i set means device i at the
/// positive rail); correlations and marginals are computed on the
/// dimensionless outputs m = V_out / (vdd/2).
#[derive(Debug, Clone, PartialEq)]
pub struct ChainAccumulators {
    n: usize,
    histogram: BTreeMap<u64, u64>,
    corr_sum: Vec<f64>,
    marginal_sum: Vec<f64>,
    update_counts: Vec<u64>,
    recorded_steps: u64,
}

impl ChainAccumulators {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn recorded_steps(&self) -> u64 {
        self.recorded_steps
    }

    pub fn histogram(&self) -> &BTreeMap<u64, u64> {
        &self.histogram
    }

    /// Running sum of m_i * m_j over recorded sweeps.
    pub fn corr_sum(&self, i: usize, j: usize) -> f64 {
        self.corr_sum[i * self.n + j]
    }

    pub fn marginal_sum(&self, i: usize) -> f64 {
        self.marginal_sum[i]
    }

    /// Mean output of device i in [-1, 1].
    pub fn marginal(&self, i: usize) -> f64 {
        self.marginal_sum[i] / self.recorded_steps as f64
    }

    /// Number of times device i actually fired an update (all sweeps,
    /// including burn-in).
    pub fn update_count(&self, i: usize) -> u64 {
        self.update_counts[i]
    }
}

/// Run one chain and accumulate per-sweep statistics.
///
/// Deterministic for fixed inputs and seed: the chain owns a private
/// counter-based RNG and never shares state.
pub fn run_chain(
    net: &NetworkSpec,
    ensemble: &DeviceEnsemble,
    params: &PBitParams,
    schedule: &Schedule,
    config: &ChainConfig,
) -> Result<ChainAccumulators, SamplerError> {
    let n = net.n();
    if ensemble.len() != n {
        return Err(SamplerError::EnsembleMismatch {
            got: ensemble.len(),
            n,
        });
    }
    if n > 64 {
        return Err(SamplerError::TooManyDevices(n));
    }
    if config.steps == 0 {
        return Err(SamplerError::ZeroSteps);
    }
    if config.burn_in >= config.steps {
        return Err(SamplerError::BurnInTooLong {
            burn_in: config.burn_in,
            steps: config.steps,
        });
    }
    params.validate()?;
    for p in &ensemble.profiles {
        p.validate()?;
    }
    let stages = schedule.stages(config.steps)?;

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let probs: Vec<f64> = ensemble.barriers.iter().map(update_probability).collect();
    let alpha = params.alpha;
    let beta = params.beta;

    // unconditioned fair draws: y = 0, tie at zero resolves positive
    let mut m = vec![0.0f64; n];
    for mi in m.iter_mut() {
        let u = 2.0 * rng.random::<f64>() - 1.0;
        *mi = if u >= 0.0 { 1.0 } else { -1.0 };
    }

    let mut acc = ChainAccumulators {
        n,
        histogram: BTreeMap::new(),
        corr_sum: vec![0.0; n * n],
        marginal_sum: vec![0.0; n],
        update_counts: vec![0; n],
        recorded_steps: 0,
    };

    let order = net.update_order();
    let bias = net.bias();
    let mut step = 0u64;
    for stage in &stages {
        let kappa = stage.kappa;
        for _ in 0..stage.steps {
            for &i in order {
                let p = probs[i];
                let fires = p >= 1.0 || rng.random::<f64>() < p;
                if !fires {
                    continue;
                }
                acc.update_counts[i] += 1;
                let row = net.couplings_into(i);
                let mut field = bias[i];
                for (j, &w) in row.iter().enumerate() {
                    field += w * m[j];
                }
                let v_in = kappa * field;
                let y = ensemble.profiles[i].activate(v_in, beta);
                let u = 2.0 * rng.random::<f64>() - 1.0;
                m[i] = if y + alpha * u >= 0.0 { 1.0 } else { -1.0 };
            }
            if step >= config.burn_in {
                record(&mut acc, &m);
            }
            step += 1;
        }
    }

    // mirror the upper triangle and fill the diagonal (m_i^2 = 1)
    let t = acc.recorded_steps as f64;
    for i in 0..n {
        acc.corr_sum[i * n + i] = t;
        for j in (i + 1)..n {
            acc.corr_sum[j * n + i] = acc.corr_sum[i * n + j];
        }
    }
    Ok(acc)
}

#[inline]
fn record(acc: &mut ChainAccumulators, m: &[f64]) {
    let n = acc.n;
    let state: Vec<i8> = m.iter().map(|&v| if v > 0.0 { 1 } else { -1 }).collect();
    *acc.histogram.entry(encode_state(&state)).or_insert(0) += 1;
    for i in 0..n {
        acc.marginal_sum[i] += m[i];
        let mi = m[i];
        let row = i * n;
        for j in (i + 1)..n {
            acc.corr_sum[row + j] += mi * m[j];
        }
    }
    acc.recorded_steps += 1;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::device::BarrierSpec;
    use crate::network::{and_gate, NetworkKind, NetworkSpec};
    use crate::variability::ideal_ensemble;

    fn free_net(n: usize) -> NetworkSpec {
        NetworkSpec::new(
            n,
            vec![0.0; n * n],
            vec![0.0; n],
            NetworkKind::Emoa,
            (0..n).collect(),
        )
        .unwrap()
    }

    #[test]
    fn uncoupled_devices_are_fair_coins() {
        let net = free_net(4);
        let t = 200_000u64;
        let acc = run_chain(
            &net,
            &ideal_ensemble(4),
            &PBitParams::default(),
            &Schedule::Fixed(0.8),
            &ChainConfig::new(t, 21),
        )
        .unwrap();
        let bound = 4.0 / (t as f64).sqrt();
        for i in 0..4 {
            assert!(acc.marginal(i).abs() < bound, "marginal {} = {}", i, acc.marginal(i));
        }
        assert_eq!(acc.recorded_steps(), t);
        let total: u64 = acc.histogram().values().sum();
        assert_eq!(total, t);
    }

    #[test]
    fn infinite_barrier_freezes_initial_state() {
        let net = and_gate();
        let mut ensemble = ideal_ensemble(3);
        for b in ensemble.barriers.iter_mut() {
            *b = BarrierSpec {
                u_over_kbt: f64::INFINITY,
                tau0: 1e-9,
            };
        }
        let acc = run_chain(
            &net,
            &ensemble,
            &PBitParams::default(),
            &Schedule::Fixed(0.8),
            &ChainConfig::new(10_000, 9),
        )
        .unwrap();
        assert_eq!(acc.histogram().len(), 1);
        assert_eq!(*acc.histogram().values().next().unwrap(), 10_000);
        assert!((0..3).all(|i| acc.update_count(i) == 0));
    }

    #[test]
    fn all_and_gate_states_visited() {
        let acc = run_chain(
            &and_gate(),
            &ideal_ensemble(3),
            &PBitParams::default(),
            &Schedule::Fixed(0.8),
            &ChainConfig::new(200_000, 33),
        )
        .unwrap();
        assert_eq!(acc.histogram().len(), 8);
    }

    #[test]
    fn deterministic_accumulators() {
        let cfg = ChainConfig::new(20_000, 1234);
        let run = || {
            run_chain(
                &and_gate(),
                &ideal_ensemble(3),
                &PBitParams::default(),
                &Schedule::Fixed(0.8),
                &cfg,
            )
            .unwrap()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn barrier_gating_poisson_rate() {
        let net = free_net(2);
        let mut ensemble = ideal_ensemble(2);
        let p = 0.01f64;
        ensemble.barriers[1] = BarrierSpec::new(-p.ln(), 1e-9).unwrap();
        let t = 100_000u64;
        let acc = run_chain(
            &net,
            &ensemble,
            &PBitParams::default(),
            &Schedule::Fixed(0.8),
            &ChainConfig::new(t, 77),
        )
        .unwrap();
        assert_eq!(acc.update_count(0), t);
        let expected = t as f64 * p;
        let sigma = (t as f64 * p * (1.0 - p)).sqrt();
        let got = acc.update_count(1) as f64;
        assert!((got - expected).abs() < 4.0 * sigma, "got {got}");
    }

    #[test]
    fn default_anneal_shape() {
        let s = Schedule::default_anneal();
        let stages = s.stages(1_000_000).unwrap();
        assert_eq!(stages.len(), 5);
        assert!(stages.iter().all(|st| st.steps == 200_000));
        assert_eq!(stages[0].kappa, 0.5);
        assert_eq!(stages[4].kappa, 5.0);
        let kappas: Vec<f64> = stages.iter().map(|st| st.kappa).collect();
        assert_eq!(kappas, vec![0.5, 1.625, 2.75, 3.875, 5.0]);
    }

    #[test]
    fn schedule_step_mismatch_rejected() {
        let s = Schedule::default_anneal();
        assert!(matches!(
            s.stages(999_999),
            Err(SamplerError::ScheduleMismatch { .. })
        ));
        assert!(Schedule::Fixed(0.0).stages(10).is_err());
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let err = run_chain(
            &and_gate(),
            &ideal_ensemble(5),
            &PBitParams::default(),
            &Schedule::Fixed(0.8),
            &ChainConfig::new(10, 0),
        );
        assert!(matches!(err, Err(SamplerError::EnsembleMismatch { .. })));
    }

    #[test]
    fn burn_in_excluded_from_record() {
        let mut cfg = ChainConfig::new(1000, 5);
        cfg.burn_in = 400;
        let acc = run_chain(
            &and_gate(),
            &ideal_ensemble(3),
            &PBitParams::default(),
            &Schedule::Fixed(0.8),
            &cfg,
        )
        .unwrap();
        assert_eq!(acc.recorded_steps(), 600);
    }

    #[test]
    fn corr_sum_symmetric_and_bounded() {
        let acc = run_chain(
            &and_gate(),
            &ideal_ensemble(3),
            &PBitParams::default(),
            &Schedule::Fixed(0.8),
            &ChainConfig::new(5000, 8),
        )
        .unwrap();
        let t = acc.recorded_steps() as f64;
        for i in 0..3 {
            assert_eq!(acc.corr_sum(i, i), t);
            for j in 0..3 {
                assert_eq!(acc.corr_sum(i, j), acc.corr_sum(j, i));
                assert!(acc.corr_sum(i, j).abs() <= t);
            }
        }
    }
}
