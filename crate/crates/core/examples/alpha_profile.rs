//! `C(rho e1, l_alpha)` across directions in several dimensions; CSV on stdout.

use sharpgrad::constants::directional_constant;
use sharpgrad::verify::angle_grid;
use sharpgrad::ProblemPoint;

fn main() -> sharpgrad::Result<()> {
    let rho = 0.7;
    println!("alpha,n3,n4,n5,n8");
    for alpha in angle_grid(17) {
        let row: Vec<String> = [3, 4, 5, 8]
            .iter()
            .map(|&n| Ok(format!("{:.12}", directional_constant(&ProblemPoint::new(n, rho, alpha)?, 1e-11)?.value)))
            .collect::<sharpgrad::Result<_>>()?;
        println!("{alpha:.6},{}", row.join(","));
    }
    Ok(())
}
