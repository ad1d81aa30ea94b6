//! One directional constant, three ways: the hypergeometric representation,
//! the direct Poisson-kernel sphere integral and its Möbius reduction.

use sharpgrad::constants::directional_constant;
use sharpgrad::oracle::{constant_oracle_direct, constant_oracle_moebius};
use sharpgrad::ProblemPoint;

fn main() -> sharpgrad::Result<()> {
    for (n, rho, alpha) in [(3, 0.5, 0.7), (4, 0.6, std::f64::consts::FRAC_PI_4), (5, 0.4, 1.0), (6, 0.9, 0.3)] {
        let pt = ProblemPoint::new(n, rho, alpha)?;
        let rep = directional_constant(&pt, 1e-12)?;
        let direct = constant_oracle_direct(&pt, 4)?;
        let moeb = constant_oracle_moebius(&pt, 4)?;
        println!(
            "n={n} rho={rho} alpha={alpha:.4}: {:.13}  direct {:+.1e}  moebius {:+.1e}",
            rep.value,
            direct.value - rep.value,
            moeb.value - rep.value
        );
    }
    Ok(())
}
