//! Sample the 8-node family-tree Bayesian network and print its
//! marginals and pairwise correlation matrix — the quantities a
//! probabilistic-inference workload reads out.

use pbit::metrics;
use pbit::network::family_tree_bn;
use pbit::sampler::{run_chain, ChainConfig, Schedule};
use pbit::variability::ideal_ensemble;

fn main() {
    let net = family_tree_bn(8, 0.5, 1).unwrap();
    let acc = run_chain(
        &net,
        &ideal_ensemble(net.n()),
        &pbit::PBitParams::default(),
        &Schedule::Fixed(0.8),
        &ChainConfig::new(300_000, 11),
    )
    .unwrap();

    println!("couplings (parent -> child):");
    for i in 0..net.n() {
        for j in 0..i {
            let w = net.coupling(i, j);
            if w != 0.0 {
                println!("  {j} -> {i}: {w:+.2}");
            }
        }
    }

    println!("\nmarginals <m_i>:");
    for i in 0..net.n() {
        println!("  node {i}: {:+.4}", acc.marginal(i));
    }

    let sigma = metrics::correlation(&acc).unwrap();
    println!("\ncorrelation matrix sigma_ij:");
    for i in 0..net.n() {
        let row: Vec<String> = (0..net.n())
            .map(|j| format!("{:+.3}", sigma.get(i, j)))
            .collect();
        println!("  {}", row.join(" "));
    }
}
