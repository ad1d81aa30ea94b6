//! The integral identities that turn the representation into the majorant,
//! over a small grid in several dimensions.

use std::f64::consts::PI;

use sharpgrad::identities::{lemma3_sides, lemma4_sides, lemma5_value};

fn main() -> sharpgrad::Result<()> {
    let tol = 1e-12;
    println!("{:>2} {:>4} {:>6} {:>10} {:>10} {:>10}", "n", "rho", "alpha", "zeroth", "second", "signed");
    for n in [3, 4, 5, 6] {
        for rho in [0.3, 0.9] {
            for alpha in [0.0, PI / 3.0, PI / 2.0] {
                let a = lemma3_sides(n, rho, alpha, tol)?;
                let b = lemma4_sides(n, rho, alpha, tol)?;
                let c = lemma5_value(n, rho, alpha, tol)?;
                println!("{n:>2} {rho:>4} {alpha:>6.3} {:>10.1e} {:>10.1e} {:>10.1e}", a.abs_gap, b.abs_gap, c.abs_gap);
            }
        }
    }
    Ok(())
}
