//! Sphere averages by nested Gauss-Legendre panels, against known moments.

use sharpgrad::quadrature::sphere_integral;

fn main() -> sharpgrad::Result<()> {
    for n in [2, 3, 4, 5] {
        let nf = n as f64;
        // E[x1^2] = 1/n, E[x1^4] = 3/(n(n+2))
        let m2 = sphere_integral(|x| x[0] * x[0], n, 6)?;
        let m4 = sphere_integral(|x| x[0].powi(4), n, 6)?;
        println!(
            "n={n}: <x1^2> err {:.1e}  <x1^4> err {:.1e}  ({} nodes)",
            m2.value - 1.0 / nf,
            m4.value - 3.0 / (nf * (nf + 2.0)),
            m4.evaluations
        );
    }
    let cap = sphere_integral(|x| if x[0] > 0.5 { 1.0 } else { 0.0 }, 3, 32)?;
    println!("cap x1 > 1/2 on S^2: {:.6} (exact 0.25, estimate {:.1e})", cap.value, cap.error_estimate);
    Ok(())
}
