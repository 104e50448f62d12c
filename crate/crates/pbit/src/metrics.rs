//! Error metrics comparing ideal and variability-afflicted chains.
//!
//! EMOA networks are compared on their state distributions, PGA networks
//! on their pairwise correlation matrices; both comparisons reduce to a
//! normalized mean-absolute-error figure which is then aggregated over
//! replications.

use std::collections::BTreeMap;

use crate::error::MetricsError;
use crate::network::{decode_state, NetworkSpec};
use crate::sampler::ChainAccumulators;

/// Empirical probability over encoded states.
#[derive(Debug, Clone, PartialEq)]
pub struct StateDistribution {
    pub probs: BTreeMap<u64, f64>,
    pub n: usize,
}

impl StateDistribution {
    pub fn prob(&self, state: u64) -> f64 {
        self.probs.get(&state).copied().unwrap_or(0.0)
    }

    /// Marginalize onto a subset of devices, re-encoding states on the
    /// selected bits in the given order.
    pub fn project(&self, bits: &[usize]) -> StateDistribution {
        let mut probs: BTreeMap<u64, f64> = BTreeMap::new();
        for (&state, &p) in &self.probs {
            let mut code = 0u64;
            for (pos, &b) in bits.iter().enumerate() {
                code |= (state >> b & 1) << pos;
            }
            *probs.entry(code).or_insert(0.0) += p;
        }
        StateDistribution {
            probs,
            n: bits.len(),
        }
    }
}

/// Pairwise output correlations sigma_ij = <m_i m_j>, diagonal exactly 1.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    n: usize,
    sigma: Vec<f64>,
}

impl CorrelationMatrix {
    pub fn from_rows(n: usize, sigma: Vec<f64>) -> Self {
        assert_eq!(sigma.len(), n * n);
        CorrelationMatrix { n, sigma }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.sigma[i * self.n + j]
    }
}

/// Mean and sample standard deviation of a replicated measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaeSummary {
    pub mean: f64,
    pub std: f64,
    pub n_reps: usize,
}

/// Normalize the visit histogram into a probability distribution.
pub fn distribution(acc: &ChainAccumulators) -> Result<StateDistribution, MetricsError> {
    if acc.recorded_steps() == 0 {
        return Err(MetricsError::NoRecordedSteps);
    }
    let t = acc.recorded_steps() as f64;
    let probs = acc
        .histogram()
        .iter()
        .map(|(&s, &c)| (s, c as f64 / t))
        .collect();
    Ok(StateDistribution {
        probs,
        n: acc.n(),
    })
}

/// Time-averaged correlation matrix from the chain accumulators.
pub fn correlation(acc: &ChainAccumulators) -> Result<CorrelationMatrix, MetricsError> {
    if acc.recorded_steps() == 0 {
        return Err(MetricsError::NoRecordedSteps);
    }
    let n = acc.n();
    let t = acc.recorded_steps() as f64;
    let mut sigma = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            sigma[i * n + j] = acc.corr_sum(i, j) / t;
        }
    }
    Ok(CorrelationMatrix { n, sigma })
}

/// EMOA error: sum over the union support of |p_ideal - p_var|, divided
/// by `n`, the device count of the network (also when the distributions
/// were projected onto designated output bits).
pub fn mae_emoa(
    ideal: &StateDistribution,
    var: &StateDistribution,
    n: usize,
) -> Result<f64, MetricsError> {
    if ideal.n != var.n {
        return Err(MetricsError::SizeMismatch {
            a: ideal.n,
            b: var.n,
        });
    }
    let mut total = 0.0;
    for (&s, &p) in &ideal.probs {
        total += (p - var.prob(s)).abs();
    }
    for (&s, &q) in &var.probs {
        if !ideal.probs.contains_key(&s) {
            total += q;
        }
    }
    Ok(total / n as f64)
}

/// PGA error: mean absolute difference of the correlation matrices over
/// the distinct off-diagonal pairs.
pub fn mae_pga(
    ideal: &CorrelationMatrix,
    var: &CorrelationMatrix,
) -> Result<f64, MetricsError> {
    if ideal.n != var.n {
        return Err(MetricsError::DimensionMismatch {
            a: ideal.n,
            b: var.n,
        });
    }
    let n = ideal.n;
    let pairs = n * (n - 1) / 2;
    let mut total = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            total += (ideal.get(i, j) - var.get(i, j)).abs();
        }
    }
    Ok(total / pairs as f64)
}

/// Sample mean and standard deviation (n-1 denominator).
pub fn aggregate(values: &[f64]) -> Result<MaeSummary, MetricsError> {
    if values.is_empty() {
        return Err(MetricsError::Empty);
    }
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let std = if n == 1 {
        0.0
    } else {
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        var.sqrt()
    };
    Ok(MaeSummary {
        mean,
        std,
        n_reps: n,
    })
}

/// Total variation distance between two state distributions.
pub fn total_variation(a: &StateDistribution, b: &StateDistribution) -> f64 {
    let mut tv = 0.0;
    for (&s, &p) in &a.probs {
        tv += (p - b.prob(s)).abs();
    }
    for (&s, &q) in &b.probs {
        if !a.probs.contains_key(&s) {
            tv += q;
        }
    }
    tv / 2.0
}

/// Analytic stationary distribution of the ideal sampler at fixed kappa:
/// pi(s) = exp(-beta*kappa*E(s)) / Z, by brute-force enumeration.
///
/// This is the Gibbs measure whose single-site conditionals the ideal
/// p-bit reproduces (see the derivation in the `sampler` module docs).
/// Only meaningful for symmetric networks; the enumeration limits it to
/// small n.
pub fn boltzmann_distribution(
    net: &NetworkSpec,
    kappa: f64,
    beta: f64,
) -> Result<StateDistribution, crate::error::NetworkError> {
    let n = net.n();
    assert!(n <= 24, "analytic enumeration limited to n <= 24");
    let mut weights = Vec::with_capacity(1 << n);
    let mut z = 0.0;
    for code in 0u64..(1u64 << n) {
        let e = net.energy(&decode_state(code, n))?;
        let w = (-beta * kappa * e).exp();
        z += w;
        weights.push((code, w));
    }
    let probs = weights.into_iter().map(|(c, w)| (c, w / z)).collect();
    Ok(StateDistribution { probs, n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::and_gate;
    use proptest::prelude::*;

    fn dist(n: usize, entries: &[(u64, f64)]) -> StateDistribution {
        StateDistribution {
            probs: entries.iter().copied().collect(),
            n,
        }
    }

    #[test]
    fn distribution_normalizes() {
        let acc = crate::sampler::run_chain(
            &and_gate(),
            &crate::variability::ideal_ensemble(3),
            &crate::device::PBitParams::default(),
            &crate::sampler::Schedule::Fixed(0.8),
            &crate::sampler::ChainConfig::new(10_000, 1),
        )
        .unwrap();
        let d = distribution(&acc).unwrap();
        let sum: f64 = d.probs.values().sum();
        assert!((sum - 1.0).abs() < 1e-12);
        assert!(d.probs.values().all(|&p| p >= 0.0));
    }

    #[test]
    fn mae_emoa_hand_example() {
        // ideal uniform over the 4 AND ground states, variability uniform
        // over all 8 states of a 3-device network
        let ground = [0b000u64, 0b010, 0b001, 0b111];
        let ideal = dist(3, &ground.map(|s| (s, 0.25)));
        let all: Vec<(u64, f64)> = (0..8).map(|s| (s, 0.125)).collect();
        let var = dist(3, &all);
        let mae = mae_emoa(&ideal, &var, 3).unwrap();
        assert!((mae - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn mae_emoa_trivial_cases() {
        let a = dist(2, &[(0, 0.5), (3, 0.5)]);
        assert_eq!(mae_emoa(&a, &a, 2).unwrap(), 0.0);
        let b = dist(2, &[(1, 0.5), (2, 0.5)]);
        // disjoint supports: total absolute difference 2
        assert!((mae_emoa(&a, &b, 2).unwrap() - 1.0).abs() < 1e-12);
        assert!(mae_emoa(&a, &dist(3, &[(0, 1.0)]), 2).is_err());
    }

    #[test]
    fn mae_pga_cases() {
        let ones = CorrelationMatrix::from_rows(3, vec![1.0; 9]);
        assert_eq!(mae_pga(&ones, &ones).unwrap(), 0.0);
        let mut anti = vec![-1.0; 9];
        for i in 0..3 {
            anti[i * 3 + i] = 1.0;
        }
        let anti = CorrelationMatrix::from_rows(3, anti);
        assert!((mae_pga(&ones, &anti).unwrap() - 2.0).abs() < 1e-12);

        let a = CorrelationMatrix::from_rows(2, vec![1.0, 0.5, 0.5, 1.0]);
        let b = CorrelationMatrix::from_rows(2, vec![1.0, 0.2, 0.2, 1.0]);
        assert!((mae_pga(&a, &b).unwrap() - 0.3).abs() < 1e-12);
        assert!(mae_pga(&a, &ones).is_err());
    }

    #[test]
    fn aggregate_cases() {
        let s = aggregate(&[1.5, 1.5, 1.5]).unwrap();
        assert_eq!(s.mean, 1.5);
        assert_eq!(s.std, 0.0);
        let s = aggregate(&[0.0, 2.0]).unwrap();
        assert_eq!(s.mean, 1.0);
        assert!((s.std - std::f64::consts::SQRT_2).abs() < 1e-12);
        assert_eq!(s.n_reps, 2);
        assert!(aggregate(&[]).is_err());
    }

    #[test]
    fn boltzmann_and_gate_prefers_ground_states() {
        let d = boltzmann_distribution(&and_gate(), 0.8, 1.0).unwrap();
        let sum: f64 = d.probs.values().sum();
        assert!((sum - 1.0).abs() < 1e-12);
        // the four ground states share the highest probability
        let ground = [0b000u64, 0b010, 0b001, 0b111];
        let pg = d.prob(ground[0]);
        for s in ground {
            assert!((d.prob(s) - pg).abs() < 1e-12);
        }
        for s in 0..8u64 {
            if !ground.contains(&s) {
                assert!(d.prob(s) < pg);
            }
        }
    }

    #[test]
    fn projection_marginalizes() {
        let d = dist(3, &[(0b000, 0.25), (0b001, 0.25), (0b110, 0.5)]);
        let p = d.project(&[0]);
        assert!((p.prob(0) - 0.75).abs() < 1e-12);
        assert!((p.prob(1) - 0.25).abs() < 1e-12);
    }

    fn arb_dist(n_states: u64) -> impl Strategy<Value = StateDistribution> {
        proptest::collection::vec(0.0f64..1.0, n_states as usize).prop_map(move |raw| {
            let total: f64 = raw.iter().sum::<f64>().max(1e-9);
            StateDistribution {
                probs: raw
                    .into_iter()
                    .enumerate()
                    .map(|(s, w)| (s as u64, w / total))
                    .collect(),
                n: 3,
            }
        })
    }

    proptest! {
        #[test]
        fn mae_emoa_is_a_metric(a in arb_dist(8), b in arb_dist(8), c in arb_dist(8)) {
            let ab = mae_emoa(&a, &b, 3).unwrap();
            let ba = mae_emoa(&b, &a, 3).unwrap();
            let ac = mae_emoa(&a, &c, 3).unwrap();
            let cb = mae_emoa(&c, &b, 3).unwrap();
            prop_assert!(ab >= 0.0);
            prop_assert!((ab - ba).abs() < 1e-12);
            prop_assert!(ab <= ac + cb + 1e-12);
            prop_assert!(ab <= 2.0 / 3.0 + 1e-12);
            let aa = mae_emoa(&a, &a, 3).unwrap();
            prop_assert!(aa == 0.0);
        }

        #[test]
        fn mae_pga_is_a_metric(
            xs in proptest::collection::vec(-1.0f64..1.0, 3),
            ys in proptest::collection::vec(-1.0f64..1.0, 3),
            zs in proptest::collection::vec(-1.0f64..1.0, 3),
        ) {
            let mk = |v: &[f64]| {
                let mut m = vec![1.0, v[0], v[1], v[0], 1.0, v[2], v[1], v[2], 1.0];
                m[0] = 1.0;
                CorrelationMatrix::from_rows(3, m)
            };
            let (a, b, c) = (mk(&xs), mk(&ys), mk(&zs));
            let ab = mae_pga(&a, &b).unwrap();
            prop_assert!(ab >= 0.0 && ab <= 2.0);
            prop_assert!((ab - mae_pga(&b, &a).unwrap()).abs() < 1e-12);
            prop_assert!(ab <= mae_pga(&a, &c).unwrap() + mae_pga(&c, &b).unwrap() + 1e-12);
            prop_assert!(mae_pga(&a, &a).unwrap() == 0.0);
        }
    }
}
