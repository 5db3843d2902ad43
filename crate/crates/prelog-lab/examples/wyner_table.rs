//! Tabulate the chain family: p*, the LP upper bound, and the closed form
//! K - floor(K/(J+2)) over a small parameter grid.
//!
//! Run with `cargo run --release --example wyner_table`. The grid shows the
//! closed form holding everywhere at alpha = 1/2 and breaking at alpha = 1,
//! where some sizes are singular and others fall short of the formula.

use prelog_lab::cancel::pstar;
use prelog_lab::linalg::{rat, rat_int};
use prelog_lab::network::gen_wyner;
use prelog_lab::upper::prelog_upper_bound;

fn main() {
    for alpha in [rat(1, 2), rat_int(1)] {
        println!("alpha = {alpha}");
        println!(
            "  {:>3} {:>3} {:>8} {:>4} {:>6}  note",
            "K", "J", "formula", "p*", "LP"
        );
        for k in 1..=9usize {
            for j in 0..=3usize {
                let net = gen_wyner(k, &alpha, j).expect("parameters in range");
                let formula = k - k / (j + 2);
                if !net.validate().is_empty() {
                    println!(
                        "  {k:>3} {j:>3} {formula:>8} {:>4} {:>6}  singular channel",
                        "-", "-"
                    );
                    continue;
                }
                let p = pstar(&net).pstar;
                let ub = prelog_upper_bound(&net).expect("LP solves").value;
                let note = if p == formula {
                    ""
                } else {
                    "below the formula"
                };
                println!(
                    "  {k:>3} {j:>3} {formula:>8} {p:>4} {:>6}  {note}",
                    ub.to_string()
                );
            }
        }
    }
}
