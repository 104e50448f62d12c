//! Build the 14-spin full adder, verify its ground states encode the
//! full-adder truth table, and round-trip it through the pbitnet text
//! format.

use pbit::network::{full_adder, load_network, save_network, FULL_ADDER_IO};

fn main() {
    let net = full_adder().unwrap();
    let ground = net.ground_states().unwrap();
    println!(
        "full adder: {} spins, {} ground states at E = {:.1}",
        net.n(),
        ground.len(),
        ground[0].energy
    );
    println!("{:>3} {:>3} {:>3} | {:>3} {:>4}", "a", "b", "cin", "sum", "cout");
    let mut rows: Vec<[u8; 5]> = ground
        .iter()
        .map(|g| FULL_ADDER_IO.map(|i| (g.state[i] + 1) as u8 / 2))
        .collect();
    rows.sort();
    for [a, b, cin, sum, cout] in rows {
        println!("{a:>3} {b:>3} {cin:>3} | {sum:>3} {cout:>4}");
    }

    let text = save_network(&net);
    let reloaded = load_network(&text).unwrap();
    assert_eq!(net, reloaded);
    println!("\npbitnet round trip ok ({} bytes):", text.len());
    for line in text.lines().take(3) {
        println!("  {line}");
    }
    println!("  ...");
}
