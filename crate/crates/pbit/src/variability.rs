//! Per-device non-ideality ensembles.
//!
//! A sweep names one distortion kind and a maximum level; sampling an
//! ensemble draws one level per device uniformly on [0, max_level] and
//! applies it to exactly one field of that device's profile (or to its
//! energy barrier). Only one kind of distortion varies at a time.

use rand::Rng;

use crate::device::{BarrierSpec, DistortionProfile};
use crate::error::VariabilityError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepKind {
    /// Input offset, volts.
    HShift,
    /// Activation offset, dimensionless.
    VShift,
    /// Gain reduction, dimensionless fraction.
    HScale,
    /// Amplitude reduction, dimensionless fraction.
    VScale,
    /// Energy barrier, units of k_BT.
    Barrier,
}

impl std::fmt::Display for SweepKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SweepKind::HShift => "h_shift",
            SweepKind::VShift => "v_shift",
            SweepKind::HScale => "h_scale",
            SweepKind::VScale => "v_scale",
            SweepKind::Barrier => "barrier",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DistortionSweep {
    pub kind: SweepKind,
    pub max_level: f64,
    /// Draw levels from [-max_level, +max_level] instead of [0, max_level].
    /// Off by default; the one-sided draw is the primary protocol.
    #[serde(default)]
    pub symmetric: bool,
}

impl DistortionSweep {
    pub fn new(kind: SweepKind, max_level: f64) -> Result<Self, VariabilityError> {
        let sweep = DistortionSweep {
            kind,
            max_level,
            symmetric: false,
        };
        sweep.validate()?;
        Ok(sweep)
    }

    pub fn validate(&self) -> Result<(), VariabilityError> {
        if !(self.max_level >= 0.0) || !self.max_level.is_finite() {
            return Err(VariabilityError::InvalidLevel(self.max_level));
        }
        match self.kind {
            SweepKind::HScale if self.max_level >= 1.0 => Err(VariabilityError::DegenerateScale {
                kind: "h_scale",
                level: self.max_level,
            }),
            SweepKind::VScale if self.max_level >= 1.0 => Err(VariabilityError::DegenerateScale {
                kind: "v_scale",
                level: self.max_level,
            }),
            _ => Ok(()),
        }
    }
}

/// The drawn non-idealities for every device in a network.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviceEnsemble {
    pub profiles: Vec<DistortionProfile>,
    pub barriers: Vec<BarrierSpec>,
}

impl DeviceEnsemble {
    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }

    pub fn is_ideal(&self) -> bool {
        self.profiles.iter().all(|p| p.is_identity())
            && self.barriers.iter().all(|b| b.u_over_kbt == 0.0)
    }
}

/// Identity profiles and zero barriers: the variability-free reference.
pub fn ideal_ensemble(n: usize) -> DeviceEnsemble {
    DeviceEnsemble {
        profiles: vec![DistortionProfile::IDENTITY; n],
        barriers: vec![BarrierSpec::IDEAL; n],
    }
}

/// Draw one ensemble: per device, one uniform level on [0, max_level]
/// (or [-max, +max] for a symmetric sweep) applied to the single field
/// selected by the sweep kind.
pub fn sample_ensemble<R: Rng + ?Sized>(
    n: usize,
    sweep: &DistortionSweep,
    rng: &mut R,
) -> Result<DeviceEnsemble, VariabilityError> {
    sweep.validate()?;
    let mut ensemble = ideal_ensemble(n);
    for i in 0..n {
        let level = if sweep.max_level == 0.0 {
            0.0
        } else if sweep.symmetric {
            rng.random_range(-sweep.max_level..=sweep.max_level)
        } else {
            rng.random_range(0.0..=sweep.max_level)
        };
        match sweep.kind {
            SweepKind::HShift => ensemble.profiles[i].h_shift = level,
            SweepKind::VShift => ensemble.profiles[i].v_shift = level,
            SweepKind::HScale => ensemble.profiles[i].h_scale = 1.0 - level,
            SweepKind::VScale => ensemble.profiles[i].v_scale = 1.0 - level,
            SweepKind::Barrier => ensemble.barriers[i].u_over_kbt = level.max(0.0),
        }
    }
    Ok(ensemble)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ideal_is_identity() {
        let e = ideal_ensemble(5);
        assert_eq!(e.len(), 5);
        assert!(e.is_ideal());
        assert!(e.profiles.iter().all(|p| p.is_identity()));
        assert!(ideal_ensemble(0).is_empty());
    }

    #[test]
    fn zero_level_equals_ideal() {
        let sweep = DistortionSweep::new(SweepKind::HShift, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let e = sample_ensemble(6, &sweep, &mut rng).unwrap();
        assert_eq!(e, ideal_ensemble(6));
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let sweep = DistortionSweep::new(SweepKind::VShift, 0.5).unwrap();
        let a = sample_ensemble(10, &sweep, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let b = sample_ensemble(10, &sweep, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn one_at_a_time() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for kind in [
            SweepKind::HShift,
            SweepKind::VShift,
            SweepKind::HScale,
            SweepKind::VScale,
            SweepKind::Barrier,
        ] {
            let max = if matches!(kind, SweepKind::HScale | SweepKind::VScale) {
                0.5
            } else {
                1.0
            };
            let sweep = DistortionSweep::new(kind, max).unwrap();
            let e = sample_ensemble(20, &sweep, &mut rng).unwrap();
            for (p, b) in e.profiles.iter().zip(&e.barriers) {
                let mut deviations = 0;
                if p.h_shift != 0.0 {
                    deviations += 1;
                }
                if p.v_shift != 0.0 {
                    deviations += 1;
                }
                if p.h_scale != 1.0 {
                    deviations += 1;
                }
                if p.v_scale != 1.0 {
                    deviations += 1;
                }
                if b.u_over_kbt != 0.0 {
                    deviations += 1;
                }
                assert!(deviations <= 1);
            }
        }
    }

    #[test]
    fn h_shift_uniform_statistics() {
        let sweep = DistortionSweep::new(SweepKind::HShift, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 10_000;
        let e = sample_ensemble(n, &sweep, &mut rng).unwrap();
        let mut mean = 0.0;
        for p in &e.profiles {
            assert!((0.0..=1.0).contains(&p.h_shift));
            mean += p.h_shift;
        }
        mean /= n as f64;
        // uniform(0,1): sd of the mean = 1/sqrt(12 n)
        let sigma = 1.0 / (12.0_f64 * n as f64).sqrt();
        assert!((mean - 0.5).abs() < 3.0 * sigma, "mean={mean}");
    }

    #[test]
    fn degenerate_scale_rejected() {
        assert!(DistortionSweep::new(SweepKind::HScale, 1.0).is_err());
        assert!(DistortionSweep::new(SweepKind::VScale, 1.2).is_err());
        assert!(DistortionSweep::new(SweepKind::HScale, 0.99).is_ok());
        assert!(DistortionSweep::new(SweepKind::HShift, -0.1).is_err());
    }

    #[test]
    fn higher_level_stochastically_dominates() {
        let n = 20_000;
        let draw = |max: f64| {
            let sweep = DistortionSweep::new(SweepKind::HShift, max).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            let e = sample_ensemble(n, &sweep, &mut rng).unwrap();
            let mut levels: Vec<f64> = e.profiles.iter().map(|p| p.h_shift).collect();
            levels.sort_by(f64::total_cmp);
            levels
        };
        let low = draw(0.4);
        let high = draw(0.8);
        // empirical CDF of the higher sweep lies at or below the lower one
        for (a, b) in low.iter().zip(&high) {
            assert!(b >= a);
        }
    }
}
