//! Compact model of a single p-bit device.
//!
//! A p-bit is a binary stochastic neuron: its output swings between
//! `-vdd/2` and `+vdd/2` with a tanh-shaped bias controlled by the input
//! voltage. Device non-idealities are expressed as distortions of the
//! tanh characteristic and as a finite energy barrier that slows state
//! updates following the Arrhenius relation.

use rand::Rng;

use crate::error::DeviceError;

/// Permeability of free space, H/m.
pub const MU_0: f64 = 1.256_637_061_27e-6;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;

/// Electrical parameters shared by all devices in a network.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PBitParams {
    /// Relative noise amplitude in the stochastic threshold.
    pub alpha: f64,
    /// Transfer gain of the tanh characteristic (1/V on a voltage input).
    pub beta: f64,
    /// Coupling coefficient, acts as a pseudo-inverse temperature.
    pub kappa: f64,
    /// Supply swing in volts; outputs are `±vdd/2`.
    pub vdd: f64,
}

impl Default for PBitParams {
    fn default() -> Self {
        PBitParams {
            alpha: 1.0,
            beta: 1.0,
            kappa: 0.8,
            vdd: 2.0,
        }
    }
}

impl PBitParams {
    pub fn validate(&self) -> Result<(), DeviceError> {
        for (name, v) in [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("kappa", self.kappa),
            ("vdd", self.vdd),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(DeviceError::InvalidParam {
                    name,
                    value: v,
                });
            }
        }
        Ok(())
    }

    /// Half the supply swing; the magnitude of either output level.
    pub fn half_swing(&self) -> f64 {
        self.vdd / 2.0
    }
}

/// Per-device deformation of the ideal tanh characteristic.
///
/// The identity profile `(0, 0, 1, 1)` reproduces the ideal device exactly.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DistortionProfile {
    /// Input offset in volts.
    pub h_shift: f64,
    /// Output (activation) offset, dimensionless.
    pub v_shift: f64,
    /// Multiplier on the transfer gain.
    pub h_scale: f64,
    /// Multiplier on the activation amplitude.
    pub v_scale: f64,
}

impl DistortionProfile {
    pub const IDENTITY: DistortionProfile = DistortionProfile {
        h_shift: 0.0,
        v_shift: 0.0,
        h_scale: 1.0,
        v_scale: 1.0,
    };

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    pub fn validate(&self) -> Result<(), DeviceError> {
        if !(self.h_scale > 0.0) || !(self.v_scale > 0.0) {
            return Err(DeviceError::InvalidProfile {
                h_scale: self.h_scale,
                v_scale: self.v_scale,
            });
        }
        Ok(())
    }

    /// Distorted activation, unchecked. Hot path for the chain sampler.
    #[inline]
    pub fn activate(&self, v_in: f64, beta: f64) -> f64 {
        self.v_scale * (self.h_scale * beta * (v_in - self.h_shift)).tanh() + self.v_shift
    }
}

impl Default for DistortionProfile {
    fn default() -> Self {
        Self::IDENTITY
    }
}

/// Energy barrier of one magnet, in thermal units, plus its attempt time.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct BarrierSpec {
    /// Barrier height U/k_BT, dimensionless, `>= 0`. Zero means an ideal
    /// device that updates every step.
    pub u_over_kbt: f64,
    /// Attempt-time prefactor in seconds.
    pub tau0: f64,
}

impl BarrierSpec {
    /// Zero barrier, 1 ns attempt time.
    pub const IDEAL: BarrierSpec = BarrierSpec {
        u_over_kbt: 0.0,
        tau0: 1e-9,
    };

    pub fn new(u_over_kbt: f64, tau0: f64) -> Result<Self, DeviceError> {
        if !(u_over_kbt >= 0.0) {
            return Err(DeviceError::InvalidBarrier { value: u_over_kbt });
        }
        if !(tau0 > 0.0) || !tau0.is_finite() {
            return Err(DeviceError::InvalidParam {
                name: "tau0",
                value: tau0,
            });
        }
        Ok(BarrierSpec { u_over_kbt, tau0 })
    }
}

impl Default for BarrierSpec {
    fn default() -> Self {
        Self::IDEAL
    }
}

/// Expected state retention time, with a saturation flag when the
/// Arrhenius exponential exceeds the representable range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RetentionTime {
    pub seconds: f64,
    pub saturated: bool,
}

/// Distorted activation y = v_scale * tanh(h_scale * beta * (v_in - h_shift)) + v_shift.
pub fn activation(
    v_in: f64,
    params: &PBitParams,
    profile: &DistortionProfile,
) -> Result<f64, DeviceError> {
    if !v_in.is_finite() {
        return Err(DeviceError::NonFiniteInput { value: v_in });
    }
    Ok(profile.activate(v_in, params.beta))
}

/// One stochastic output draw: sgn(y + alpha * u) * vdd/2 with u uniform
/// on (-1, +1). A tie at exactly zero resolves to the positive rail.
#[inline]
pub fn sample_output<R: Rng + ?Sized>(y: f64, params: &PBitParams, rng: &mut R) -> f64 {
    let u = 2.0 * rng.random::<f64>() - 1.0;
    if y + params.alpha * u >= 0.0 {
        params.half_swing()
    } else {
        -params.half_swing()
    }
}

/// Exact law of `sample_output`: probability of the positive rail.
pub fn output_probability(y: f64, alpha: f64) -> f64 {
    ((1.0 + y / alpha) / 2.0).clamp(0.0, 1.0)
}

/// Arrhenius retention time tau = tau0 * exp(U/k_BT).
pub fn retention_time(barrier: &BarrierSpec) -> RetentionTime {
    let tau = barrier.tau0 * barrier.u_over_kbt.exp();
    RetentionTime {
        seconds: tau,
        saturated: !tau.is_finite(),
    }
}

/// Per-step Bernoulli attempt probability p = exp(-U/k_BT).
///
/// Discretizes the Arrhenius escape rate as a memoryless process: an
/// ideal zero-barrier device updates every step, a high-barrier device
/// updates rarely.
#[inline]
pub fn update_probability(barrier: &BarrierSpec) -> f64 {
    (-barrier.u_over_kbt).exp()
}

/// Barrier height in thermal units from material parameters:
/// U/k_BT = mu0 * Ms * Hk * volume / (2 * kB * T).
pub fn barrier_from_material(
    ms: f64,
    hk: f64,
    volume: f64,
    temperature: f64,
) -> Result<f64, DeviceError> {
    for (name, v) in [
        ("ms", ms),
        ("hk", hk),
        ("volume", volume),
        ("temperature", temperature),
    ] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(DeviceError::InvalidParam { name, value: v });
        }
    }
    Ok(MU_0 * ms * hk * volume / (2.0 * K_B * temperature))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn activation_odd_at_origin() {
        let p = PBitParams::default();
        let y = activation(0.0, &p, &DistortionProfile::IDENTITY).unwrap();
        assert_eq!(y, 0.0);
    }

    #[test]
    fn activation_shift_cancels_input() {
        let p = PBitParams::default();
        let d = DistortionProfile {
            h_shift: 0.5,
            ..DistortionProfile::IDENTITY
        };
        let y = activation(0.5, &p, &d).unwrap();
        assert_eq!(y, 0.0);
    }

    #[test]
    fn activation_saturates() {
        let p = PBitParams::default();
        let y = activation(10.0, &p, &DistortionProfile::IDENTITY).unwrap();
        assert!((y - 1.0).abs() < 1e-8);
    }

    #[test]
    fn activation_rejects_non_finite() {
        let p = PBitParams::default();
        assert!(activation(f64::NAN, &p, &DistortionProfile::IDENTITY).is_err());
        assert!(activation(f64::INFINITY, &p, &DistortionProfile::IDENTITY).is_err());
    }

    #[test]
    fn activation_symmetry_identity_profile() {
        let p = PBitParams::default();
        for v in [-3.0, -0.7, 0.1, 2.4] {
            let plus = activation(v, &p, &DistortionProfile::IDENTITY).unwrap();
            let minus = activation(-v, &p, &DistortionProfile::IDENTITY).unwrap();
            assert!((plus + minus).abs() < 1e-15);
        }
    }

    #[test]
    fn h_shift_equals_shifted_ideal() {
        let p = PBitParams::default();
        let delta = 0.3;
        let d = DistortionProfile {
            h_shift: delta,
            ..DistortionProfile::IDENTITY
        };
        for v in [-2.0, -0.1, 0.5, 1.9] {
            let shifted = activation(v, &p, &d).unwrap();
            let ideal = activation(v - delta, &p, &DistortionProfile::IDENTITY).unwrap();
            assert_eq!(shifted, ideal);
        }
    }

    #[test]
    fn sampling_law_symmetric() {
        assert_eq!(output_probability(0.0, 1.0), 0.5);
        assert_eq!(output_probability(1.0, 1.0), 1.0);
        assert_eq!(output_probability(2.5, 1.0), 1.0);
        assert_eq!(output_probability(0.5, 1.0), 0.75);
    }

    #[test]
    fn saturated_y_is_deterministic() {
        let p = PBitParams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            assert_eq!(sample_output(1.0, &p, &mut rng), p.half_swing());
            assert_eq!(sample_output(-1.0 - 1e-12, &p, &mut rng), -p.half_swing());
        }
    }

    #[test]
    fn empirical_sampling_law() {
        let p = PBitParams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let draws = 1_000_000u64;
        let mut plus = 0u64;
        for _ in 0..draws {
            if sample_output(0.5, &p, &mut rng) > 0.0 {
                plus += 1;
            }
        }
        let freq = plus as f64 / draws as f64;
        // 3 sigma binomial around 0.75
        let sigma = (0.75 * 0.25 / draws as f64).sqrt();
        assert!((freq - 0.75).abs() < 3.0 * sigma, "freq={freq}");
    }

    #[test]
    fn retention_trivial_and_arrhenius() {
        let b = BarrierSpec::new(0.0, 1e-9).unwrap();
        assert_eq!(retention_time(&b).seconds, 1e-9);

        let b = BarrierSpec::new(10.0, 1e-9).unwrap();
        let t = retention_time(&b);
        assert!((t.seconds - 22.026e-6).abs() / 22.026e-6 < 1e-4);
        assert!(!t.saturated);

        let b = BarrierSpec::new(40.0, 0.1e-9).unwrap();
        let t = retention_time(&b);
        // months-to-years scale
        assert!((t.seconds - 2.35e7).abs() / 2.35e7 < 1e-2);
    }

    #[test]
    fn retention_ratio_is_exp() {
        for u in [1.0, 17.0, 350.0, 700.0] {
            let r = retention_time(&BarrierSpec::new(u, 1e-9).unwrap()).seconds
                / retention_time(&BarrierSpec::new(0.0, 1e-9).unwrap()).seconds;
            assert!((r / u.exp() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn retention_saturates_on_overflow() {
        let t = retention_time(&BarrierSpec::new(800.0, 1.0).unwrap());
        assert!(t.saturated);
        assert!(t.seconds.is_infinite());
    }

    #[test]
    fn update_probability_values() {
        assert_eq!(update_probability(&BarrierSpec::IDEAL), 1.0);
        let half = BarrierSpec::new(std::f64::consts::LN_2, 1e-9).unwrap();
        assert!((update_probability(&half) - 0.5).abs() < 1e-15);
        let b = BarrierSpec::new(10.0, 1e-9).unwrap();
        assert!((update_probability(&b) - 4.539_99e-5).abs() < 1e-9);
    }

    #[test]
    fn barrier_from_material_linear() {
        let base = barrier_from_material(8e5, 8e4, 1e-24, 300.0).unwrap();
        let doubled = barrier_from_material(1.6e6, 8e4, 1e-24, 300.0).unwrap();
        assert!((doubled / base - 2.0).abs() < 1e-12);
        let small = barrier_from_material(8e5, 8e4, 1e-30, 300.0).unwrap();
        assert!(small < 1e-5 * base);
    }

    #[test]
    fn barrier_from_material_hand_value() {
        // Ms=8e5 A/m, Hk=8e4 A/m, disc 25 nm radius x 1 nm thick, 300 K
        let vol = std::f64::consts::PI * (25e-9f64).powi(2) * 1e-9;
        let u = barrier_from_material(8e5, 8e4, vol, 300.0).unwrap();
        assert!((u - 19.06).abs() < 0.05, "u={u}");
    }

    #[test]
    fn barrier_from_material_rejects_nonpositive() {
        assert!(barrier_from_material(0.0, 8e4, 1e-24, 300.0).is_err());
        assert!(barrier_from_material(8e5, 8e4, 1e-24, -1.0).is_err());
    }
}
