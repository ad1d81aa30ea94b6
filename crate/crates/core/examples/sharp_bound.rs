//! The three-dimensional sharp constant `C(x)` as a function of `|x|`, next to
//! the maximization over directions it comes from.

use sharpgrad::constants::{center_constant, gradient_constant, radial_constant_closed3};

fn main() -> sharpgrad::Result<()> {
    println!("C(0) = {}", center_constant(3)?);
    println!("{:>5} {:>20} {:>20} {:>10}", "rho", "closed form", "sup over alpha", "argmax");
    for rho in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let closed = radial_constant_closed3(rho)?;
        let g = gradient_constant(3, rho, 1e-11)?;
        println!("{rho:>5} {closed:>20.15} {:>20.15} {:>10.2e}", g.estimate.value, g.argmax_alpha);
    }
    Ok(())
}
