//! The extremal boundary data `sign <grad P, l>` evaluated back at the point:
//! its derivative reproduces the sharp constant.

use sharpgrad::constants::radial_constant_closed3;
use sharpgrad::oracle::extremal_derivative;
use sharpgrad::ProblemPoint;

fn main() -> sharpgrad::Result<()> {
    for rho in [0.2, 0.5, 0.8] {
        let pt = ProblemPoint::new(3, rho, 0.0)?;
        let closed = radial_constant_closed3(rho)?;
        for h in [1e-2, 1e-3] {
            let d = extremal_derivative(&pt, h, 6)?;
            println!("rho={rho} h={h:e}: derivative {:.10} closed {closed:.10} noise={}", d.value, d.noise_warning);
        }
    }
    Ok(())
}
