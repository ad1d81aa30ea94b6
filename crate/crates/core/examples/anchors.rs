//! Fixed points of the theory: the center constant, the half-space constant
//! and the boundary growth `(1 - rho) C(rho e1)`.

use sharpgrad::constants::{center_constant, gradient_constant, halfspace_constant};

fn main() -> sharpgrad::Result<()> {
    for n in 3..=7 {
        let c0 = center_constant(n)?;
        let half = halfspace_constant(n)?;
        let near = gradient_constant(n, 0.999, 1e-10)?.estimate.value;
        println!("n={n}: C(0)={c0:.12} half-space={half:.12} (1-rho)C at rho=0.999: {:.6}", 0.001 * near);
    }
    Ok(())
}
