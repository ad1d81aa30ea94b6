//! Negativity of the power-series coefficients `a_k`: the polynomial
//! machinery in `k` and the coefficients themselves.

use sharpgrad::majorant3::{coefficient_a, lemma6_verify, MajorantSeries};

fn main() -> sharpgrad::Result<()> {
    let reports = lemma6_verify(0.5, 200)?;
    let worst_d = reports.iter().map(|r| r.d).fold(f64::NEG_INFINITY, f64::max);
    println!("k = 2..=200: all passed = {}, max discriminant = {worst_d:.3e}", reports.iter().all(|r| r.passed));
    for r in reports.iter().take(4) {
        println!("  k={} P={:.0} Q={:.0} R={:.0} l_k={:.3e} d_k={:.3e}", r.k, r.p, r.q, r.r, r.l_k, r.d_k);
    }
    for rho in [0.1, 0.5, 0.9, 0.99] {
        let a: Vec<String> =
            (1..=5).map(|k| coefficient_a(k, rho).map(|c| format!("{:+.3e}", c.value))).collect::<Result<_, _>>()?;
        let series = MajorantSeries::new(rho)?;
        println!(
            "rho={rho}: a_1..a_5 = [{}], {} terms to reach the tail bound",
            a.join(", "),
            series.coefficients.len()
        );
    }
    Ok(())
}
