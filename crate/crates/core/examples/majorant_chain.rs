//! Every link of the three-dimensional inequality chain at a handful of radii.

use sharpgrad::majorant3::conjecture_chain;
use sharpgrad::verify::angle_grid;

fn main() -> sharpgrad::Result<()> {
    let grid = angle_grid(33);
    for rho in [0.05, 0.25, 0.5, 0.75, 0.95] {
        let report = conjecture_chain(rho, &grid)?;
        let tightest = report
            .links
            .iter()
            .filter(|l| l.link.contains("<="))
            .min_by(|a, b| a.slack.total_cmp(&b.slack))
            .expect("inequalities present");
        println!(
            "rho={rho:<5} links={:<4} passed={:<5} tightest {} at alpha={:.3} (slack {:.2e})",
            report.links.len(),
            report.passed,
            tightest.link,
            tightest.alpha,
            tightest.slack
        );
    }
    Ok(())
}
