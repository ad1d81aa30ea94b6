//! The logarithmic-case `2F1` near `z = 1`: the connection formula against the
//! plain Gauss series, and the `-ln(1 - z)` blowup, whose ratio tends to
//! `1 / (Gamma(1/4) Gamma(3/4)) = 0.2250790790...`.

use sharpgrad::specfun::{hyp2f1_connection, hyp2f1_logcase, hyp2f1_series, Hyp2F1Args};

fn main() -> sharpgrad::Result<()> {
    for n in [3, 4, 5, 8] {
        let args = Hyp2F1Args::for_dimension(n, 0.5)?;
        let series = hyp2f1_series(args.a, args.b, args.c, args.z)?;
        let conn = hyp2f1_connection(&args)?;
        println!("n={n} 2F1(..; 0.5): series {series:.15} connection {conn:.15}");
    }
    println!("\n{:>12} {:>22} {:>26}", "1 - z", "2F1(1/4, 3/4; 1; z)", "f / (6 ln 2 - ln(1 - z))");
    for k in 1..=12 {
        let w = 10f64.powi(-k);
        let f = hyp2f1_logcase(&Hyp2F1Args::new(0.25, 0.75, 1.0, 1.0 - w)?)?;
        println!("{w:>12.0e} {f:>22.15} {:>26.15}", f / (6.0 * std::f64::consts::LN_2 - w.ln()));
    }
    Ok(())
}
