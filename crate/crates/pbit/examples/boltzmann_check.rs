//! Sample the AND-gate network with ideal devices and compare the
//! empirical state distribution against the analytic Boltzmann
//! distribution it should converge to.

use pbit::metrics::{self, boltzmann_distribution, total_variation};
use pbit::network;
use pbit::sampler::{run_chain, ChainConfig, Schedule};
use pbit::variability::ideal_ensemble;

fn main() {
    let net = network::and_gate();
    let params = pbit::PBitParams::default();
    let kappa = 0.8;

    let acc = run_chain(
        &net,
        &ideal_ensemble(net.n()),
        &params,
        &Schedule::Fixed(kappa),
        &ChainConfig::new(500_000, 42),
    )
    .unwrap();
    let empirical = metrics::distribution(&acc).unwrap();
    let analytic = boltzmann_distribution(&net, kappa, params.beta).unwrap();

    println!("{:>5} {:>8} {:>10} {:>10}", "state", "energy", "analytic", "sampled");
    for state in 0..1u64 << net.n() {
        let spins = network::decode_state(state, net.n());
        let label: String = spins.iter().map(|&s| if s > 0 { '+' } else { '-' }).collect();
        println!(
            "{label:>5} {:>+8.2} {:>10.4} {:>10.4}",
            net.energy(&spins).unwrap(),
            analytic.prob(state),
            empirical.prob(state)
        );
    }
    println!(
        "\ntotal variation distance: {:.5}",
        total_variation(&empirical, &analytic)
    );
}
