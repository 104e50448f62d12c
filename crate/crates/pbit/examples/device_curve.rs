//! Single-device transfer characteristic: empirical switching frequency
//! against the analytic sigmoid, for an ideal device and a distorted one.
//! Also prints the barrier height and retention time for a typical
//! low-barrier magnet.

use pbit::device::{
    activation, barrier_from_material, output_probability, retention_time, sample_output,
    BarrierSpec, DistortionProfile, PBitParams,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let params = PBitParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let distorted = DistortionProfile {
        h_shift: 0.3,
        v_scale: 0.8,
        ..DistortionProfile::IDENTITY
    };

    let draws = 200_000;
    println!("{:>6} {:>10} {:>10} {:>10}", "v_in", "P(+) ideal", "empirical", "distorted");
    for step in -8..=8i32 {
        let v_in = step as f64 * 0.25;
        let y = activation(v_in, &params, &DistortionProfile::IDENTITY).unwrap();
        let p_ideal = output_probability(y, params.alpha);
        let mut plus = 0u64;
        for _ in 0..draws {
            if sample_output(y, &params, &mut rng) > 0.0 {
                plus += 1;
            }
        }
        let y_d = activation(v_in, &params, &distorted).unwrap();
        let p_dist = output_probability(y_d, params.alpha);
        println!(
            "{v_in:>+6.2} {p_ideal:>10.4} {:>10.4} {p_dist:>10.4}",
            plus as f64 / draws as f64
        );
    }

    // CoFeB-like free layer: 50 nm diameter, 1 nm thick disc at 300 K
    let volume = std::f64::consts::PI * 25e-9_f64.powi(2) * 1e-9;
    let u = barrier_from_material(8e5, 8e4, volume, 300.0).unwrap();
    let tau = retention_time(&BarrierSpec::new(u, 1e-9).unwrap());
    println!("\nbarrier U = {u:.2} kT, retention time = {:.3e} s", tau.seconds);
}
