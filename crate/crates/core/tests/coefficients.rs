//! Power-series coefficients of the majorant in `t = cos^2(alpha)`, extracted
//! numerically from the closed form by a discrete Cauchy integral on `|t| = r`
//! and compared to the factorial formulas.

use std::f64::consts::PI;

use num_complex::Complex64;
use sharpgrad::majorant3::{coefficient_a, majorant, series_constant, MajorantSeries};

/// Closed majorant `S + S1/3 + 3 S2/4` at complex `c = cos(alpha)`.
fn closed_m(rho: f64, c: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let q = 1.0 + rho * rho;
    let rc = c * rho;
    let minus = (one * q - rc * 2.0).sqrt();
    let plus = (one * q + rc * 2.0).sqrt();
    let rc2 = rc * rc;
    (one * q - rc2 * (2.0 / 3.0)).powf(1.5) * 2.0 / (rc2 * 3.0) + 7.0 / 6.0 - rho * rho / 10.0
        + rc2 * (2.0 / 15.0)
        + (one / 6.0 - one * (7.0 * q) / (rc2 * 30.0)) * (minus + plus)
        + (rc / 12.0 - one * (10.0 * rho * rho + 1.0) / (rc * 60.0) + one * (q * q) / (rc2 * rc * 10.0))
            * (minus - plus)
}

/// `m_k = (1 / N) sum_j M(r e^{i theta_j}) e^{-i k theta_j} / r^k`.
fn extract(rho: f64, radius: f64, nodes: usize, kmax: usize) -> Vec<f64> {
    let samples: Vec<Complex64> = (0..nodes)
        .map(|j| {
            let t = Complex64::from_polar(radius, 2.0 * PI * j as f64 / nodes as f64);
            closed_m(rho, t.sqrt())
        })
        .collect();
    (0..=kmax)
        .map(|k| {
            let sum: Complex64 = samples
                .iter()
                .enumerate()
                .map(|(j, m)| m * Complex64::from_polar(1.0, -2.0 * PI * (k * j) as f64 / nodes as f64))
                .sum();
            sum.re / nodes as f64 / radius.powi(k as i32)
        })
        .collect()
}

#[test]
fn closed_form_matches_library_on_the_real_axis() {
    for (rho, alpha) in [(0.3, 0.2), (0.5, 0.9), (0.8, 1.1)] {
        let c: f64 = f64::cos(alpha);
        let m = closed_m(rho, Complex64::new(c, 0.0));
        assert!(m.im.abs() < 1e-15);
        assert!((m.re - majorant(rho, alpha).unwrap().m).abs() < 1e-12, "{rho} {alpha}");
    }
}

#[test]
fn extracted_coefficients_match_formulas() {
    for rho in [0.3, 0.5, 0.7, 0.9] {
        let m = extract(rho, 0.5, 64, 8);
        assert!((m[0] - series_constant(rho)).abs() < 1e-12, "rho={rho}: {} vs {}", m[0], series_constant(rho));
        for (k, mk) in m.iter().enumerate().skip(1) {
            let a = coefficient_a(k, rho).unwrap().value;
            assert!((mk - a).abs() <= 1e-7 * a.abs() + 1e-13, "rho={rho} k={k}: {mk} vs {a}");
        }
    }
}

#[test]
fn reference_coefficients_at_half() {
    let want = [
        (1, 0.016_140_455_106_335_0),
        (2, -0.001_475_252_749_599_86),
        (3, -0.000_292_002_872_083_973),
        (5, -2.418_146_230_399_76e-5),
    ];
    let m = extract(0.5, 0.5, 64, 5);
    for (k, v) in want {
        assert!((coefficient_a(k, 0.5).unwrap().value - v).abs() <= 1e-14 * v.abs().max(1e-3));
        assert!((m[k] - v).abs() <= 1e-9 * v.abs());
    }
}

#[test]
fn truncated_series_reproduces_the_closed_form() {
    let series = MajorantSeries::new(0.6).unwrap();
    let circle = extract(0.6, 0.5, 64, 40);
    for t in [0.1, 0.45] {
        let from_dft: f64 = circle.iter().enumerate().map(|(k, m)| m * f64::powi(t, k as i32)).sum();
        assert!((from_dft - series.eval(t)).abs() < 1e-9, "t={t}");
    }
}
