//! Sharp constants `C(rho e1, l_alpha)`, their supremum over directions, and
//! the closed-form anchors.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::quadrature::{integrate_adaptive_with, polar_normalization, Tolerance, MAX_DEPTH};
use crate::specfun::{ball_hyp, ln_gamma_unchecked};
use crate::{Error, Result};

/// Dimension, radius and direction angle of one evaluation point. The point is
/// `rho e1` and the direction `e1 cos(alpha) + e2 sin(alpha)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProblemPoint {
    pub n: usize,
    pub rho: f64,
    pub alpha: f64,
}

impl ProblemPoint {
    pub fn new(n: usize, rho: f64, alpha: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::domain(format!("dimension must be at least 3, got {n}")));
        }
        if !(0.0..1.0).contains(&rho) {
            return Err(Error::domain(format!("rho must lie in [0, 1), got {rho}")));
        }
        // tolerate a truncated decimal pi/2 from the command line
        if !(0.0..=FRAC_PI_2 + 1e-12).contains(&alpha) {
            return Err(Error::domain(format!("alpha must lie in [0, pi/2], got {alpha}")));
        }
        Ok(Self { n, rho, alpha: alpha.min(FRAC_PI_2) })
    }

    /// The shifted center `(n - 2) rho / n`.
    pub fn alpha_rho(&self) -> f64 {
        (self.n as f64 - 2.0) * self.rho / self.n as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Representation,
    OracleDirect,
    OracleMoebius,
    Closed3,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Representation, Method::OracleDirect, Method::OracleMoebius, Method::Closed3];

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Representation => "representation",
            Method::OracleDirect => "oracle-direct",
            Method::OracleMoebius => "oracle-moebius",
            Method::Closed3 => "closed3",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL.into_iter().find(|m| m.as_str() == s).ok_or_else(|| Error::domain(format!("unknown method `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstantEstimate {
    pub value: f64,
    pub method: Method,
    pub error_bound: f64,
    pub converged: bool,
}

/// Surface area `omega = 2 pi^{n/2} / Gamma(n/2)` of `S^{n-1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereGeometry {
    pub n: usize,
    pub omega: f64,
}

impl SphereGeometry {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("sphere dimension must be positive"));
        }
        let h = n as f64 / 2.0;
        let omega = (2f64.ln() + h * PI.ln() - ln_gamma_unchecked(h)).exp();
        Ok(Self { n, omega })
    }
}

/// `n / (1 - rho^2) * Gamma(n/2) / (sqrt(pi) Gamma((n-1)/2))`.
pub fn representation_prefactor(n: usize, rho: f64) -> f64 {
    n as f64 / (1.0 - rho * rho) * polar_normalization(n)
}

/// Hypergeometric argument `4 rho^2 sin^2(alpha) sin^2(theta) / d^2` together
/// with `d = 1 + rho^2 - 2 rho cos(theta) cos(alpha)`.
pub(crate) fn reduced_argument(rho: f64, cos_a: f64, sin_a: f64, theta: f64) -> (f64, f64) {
    let d = 1.0 + rho * rho - 2.0 * rho * theta.cos() * cos_a;
    let s = rho * sin_a * theta.sin() / d;
    (4.0 * s * s, d)
}

/// The one-dimensional integral of the representation, in `theta = acos x`,
/// before the prefactor.
pub fn representation_integral(pt: &ProblemPoint, tol: f64) -> Result<crate::QuadratureResult> {
    let (sin_a, cos_a) = pt.alpha.sin_cos();
    let kink = pt.alpha_rho() * cos_a;
    let n = pt.n;
    let rho = pt.rho;
    let f = move |theta: f64| {
        let (z, d) = reduced_argument(rho, cos_a, sin_a, theta);
        (kink - theta.cos()).abs() * theta.sin().powi(n as i32 - 2) * d.powf(1.0 - n as f64 / 2.0) * ball_hyp(n, z)
    };
    integrate_adaptive_with(f, 0.0, PI, Tolerance::relative(tol), &[kink.acos()], MAX_DEPTH)
}

/// `C(rho e1, l_alpha)` from the hypergeometric representation.
pub fn directional_constant(pt: &ProblemPoint, tol: f64) -> Result<ConstantEstimate> {
    if !(tol >= 1e-12) {
        return Err(Error::domain(format!("tolerance must be at least 1e-12, got {tol}")));
    }
    let r = representation_integral(pt, tol)?;
    let pre = representation_prefactor(pt.n, pt.rho);
    Ok(ConstantEstimate {
        value: pre * r.value,
        method: Method::Representation,
        error_bound: pre * r.error_estimate,
        converged: r.converged,
    })
}

/// Number of uniform grid points in the direction search.
pub const ALPHA_GRID: usize = 65;

/// Final bracket width of the golden-section refinement.
pub const GOLDEN_WIDTH: f64 = 1e-6;

/// Grid values within this relative distance of the best are reported as
/// competing maxima.
pub const LOCAL_MAX_RTOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GradientConstant {
    pub estimate: ConstantEstimate,
    pub argmax_alpha: f64,
    /// Grid angles at local maxima whose value is within [`LOCAL_MAX_RTOL`] of the best.
    pub local_maxima: Vec<f64>,
}

fn better(candidate: (f64, f64), best: (f64, f64)) -> bool {
    // (alpha, value); ties within 1e-12 go to the smaller angle
    let scale = best.1.abs().max(1e-300);
    if (candidate.1 - best.1) > 1e-12 * scale {
        true
    } else if (best.1 - candidate.1) > 1e-12 * scale {
        false
    } else {
        candidate.0 < best.0
    }
}

/// `C(rho e1) = sup_alpha C(rho e1, l_alpha)`: uniform grid, then golden
/// section around the best cell.
pub fn gradient_constant(n: usize, rho: f64, tol: f64) -> Result<GradientConstant> {
    ProblemPoint::new(n, rho, 0.0)?;
    let step = FRAC_PI_2 / (ALPHA_GRID - 1) as f64;
    let evaluate = |alpha: f64| directional_constant(&ProblemPoint::new(n, rho, alpha)?, tol);
    let grid: Vec<ConstantEstimate> =
        (0..ALPHA_GRID).into_par_iter().map(|i| evaluate(i as f64 * step)).collect::<Result<_>>()?;

    let mut best_i = 0;
    for i in 1..ALPHA_GRID {
        if better((i as f64 * step, grid[i].value), (best_i as f64 * step, grid[best_i].value)) {
            best_i = i;
        }
    }
    let top = grid[best_i].value;
    let local_maxima = (0..ALPHA_GRID)
        .filter(|&i| {
            let v = grid[i].value;
            let left = i == 0 || grid[i - 1].value <= v;
            let right = i + 1 == ALPHA_GRID || grid[i + 1].value <= v;
            left && right && (top - v) <= LOCAL_MAX_RTOL * top.abs()
        })
        .map(|i| i as f64 * step)
        .collect();

    let mut best = (best_i as f64 * step, grid[best_i]);
    let mut lo = best_i.saturating_sub(1) as f64 * step;
    let mut hi = ((best_i + 1).min(ALPHA_GRID - 1) as f64 * step).min(FRAC_PI_2);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = evaluate(x1)?;
    let mut f2 = evaluate(x2)?;
    let mut converged = grid.iter().all(|e| e.converged);
    while hi - lo > GOLDEN_WIDTH {
        if f1.value >= f2.value {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = evaluate(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = evaluate(x2)?;
        }
        converged &= f1.converged && f2.converged;
    }
    for cand in [(x1, f1), (x2, f2)] {
        if better((cand.0, cand.1.value), (best.0, best.1.value)) {
            best = cand;
        }
    }
    let mut estimate = best.1;
    estimate.converged = converged;
    Ok(GradientConstant { estimate, argmax_alpha: best.0, local_maxima })
}

/// Below this radius [`radial_constant_closed3`] switches to its Taylor series.
pub const CLOSED3_SERIES_RHO: f64 = 1e-4;

/// The three-dimensional sharp constant
/// `((1 + rho^2/3)^{3/2} / (1 - rho^2) - 1) / rho^2`.
pub fn radial_constant_closed3(rho: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::domain(format!("rho must lie in [0, 1), got {rho}")));
    }
    let s = rho * rho;
    if rho < CLOSED3_SERIES_RHO {
        return Ok(1.5 + s * (37.0 / 24.0 + s * (665.0 / 432.0 + s * 5321.0 / 3456.0)));
    }
    // expm1 form keeps the leading cancellation exact
    Ok((1.5 * (s / 3.0).ln_1p() - (-s).ln_1p()).exp_m1() / s)
}

/// `C(0) = 2 n omega_{n-1} / ((n - 1) omega_n)`.
pub fn center_constant(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain(format!("dimension must be at least 2, got {n}")));
    }
    let lower = SphereGeometry::new(n - 1)?.omega;
    let upper = SphereGeometry::new(n)?.omega;
    Ok(2.0 * n as f64 * lower / ((n as f64 - 1.0) * upper))
}

/// Coefficient of `1 / x_n` in the sharp gradient bound in the half-space.
pub fn halfspace_constant(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain(format!("dimension must be at least 2, got {n}")));
    }
    let nf = n as f64;
    let ln = (4.0 / PI.sqrt()).ln() + 0.5 * (nf - 1.0) * (nf - 1.0).ln() - 0.5 * nf * nf.ln()
        + ln_gamma_unchecked(nf / 2.0)
        - ln_gamma_unchecked((nf - 1.0) / 2.0);
    Ok(ln.exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    const CLOSED3_HALF: f64 = 2.013_701_776_235_494_6;

    fn pt(n: usize, rho: f64, alpha: f64) -> ProblemPoint {
        ProblemPoint::new(n, rho, alpha).unwrap()
    }

    #[test]
    fn problem_point_validation() {
        assert!(ProblemPoint::new(2, 0.5, 0.0).is_err());
        assert!(ProblemPoint::new(3, 1.0, 0.0).is_err());
        assert!(ProblemPoint::new(3, -0.1, 0.0).is_err());
        assert!(ProblemPoint::new(3, 0.5, 1.6).is_err());
        assert!(ProblemPoint::new(3, 0.5, f64::NAN).is_err());
        let p = pt(5, 0.5, FRAC_PI_2);
        assert!((p.alpha_rho() - 0.3).abs() < 1e-15);
    }

    #[test]
    fn method_tags_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.to_string().parse::<Method>().unwrap(), m);
        }
        assert!("simpson".parse::<Method>().is_err());
    }

    #[test]
    fn sphere_areas() {
        assert!((SphereGeometry::new(2).unwrap().omega - 2.0 * PI).abs() < 1e-12);
        assert!((SphereGeometry::new(3).unwrap().omega - 4.0 * PI).abs() < 1e-12);
        assert!((SphereGeometry::new(4).unwrap().omega - 2.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn closed3_values() {
        assert!((radial_constant_closed3(0.5).unwrap() - CLOSED3_HALF).abs() < 1e-14);
        assert!((radial_constant_closed3(0.5).unwrap() - 4.0 * ((13f64 / 12.0).powf(1.5) / 0.75 - 1.0)).abs() < 1e-13);
        assert_eq!(radial_constant_closed3(0.0).unwrap(), 1.5);
        assert!(radial_constant_closed3(1.0).is_err());
        // both sides of the series switch agree
        let below = radial_constant_closed3(CLOSED3_SERIES_RHO * (1.0 - 1e-9)).unwrap();
        let above = radial_constant_closed3(CLOSED3_SERIES_RHO).unwrap();
        assert!((below - above).abs() < 1e-14);
        let r: f64 = 0.999_999;
        assert!(((1.0 - r * r) * radial_constant_closed3(r).unwrap() - 8.0 / (3.0 * 3f64.sqrt())).abs() < 1e-5);
    }

    #[test]
    fn closed3_matches_naive_formula() {
        for &r in &[0.01f64, 0.1, 0.3, 0.7, 0.9] {
            let s = r * r;
            let naive = ((1.0 + s / 3.0).powf(1.5) / (1.0 - s) - 1.0) / s;
            assert!((radial_constant_closed3(r).unwrap() - naive).abs() < 1e-11 * naive);
        }
    }

    #[test]
    fn anchors() {
        assert!((center_constant(3).unwrap() - 1.5).abs() < 1e-14);
        assert!((center_constant(4).unwrap() - 16.0 / (3.0 * PI)).abs() < 1e-14);
        assert!((center_constant(2).unwrap() - 4.0 / PI).abs() < 1e-14);
        assert!((halfspace_constant(2).unwrap() - 2.0 / PI).abs() < 1e-14);
        assert!((halfspace_constant(3).unwrap() - 4.0 / (3.0 * 3f64.sqrt())).abs() < 1e-14);
        assert!((halfspace_constant(4).unwrap() - 3.0 * 3f64.sqrt() / (2.0 * PI)).abs() < 1e-14);
    }

    #[test]
    fn representation_examples() {
        let c = directional_constant(&pt(3, 1e-12, 0.7), 1e-10).unwrap();
        assert!((c.value - 1.5).abs() < 1e-9);
        let c = directional_constant(&pt(3, 0.5, 0.0), 1e-11).unwrap();
        assert!((c.value - CLOSED3_HALF).abs() < 1e-9, "{}", c.value);
        assert!(c.converged && c.error_bound < 1e-9);
        let side = directional_constant(&pt(3, 0.5, FRAC_PI_2), 1e-11).unwrap();
        assert!(side.value < c.value);
    }

    #[test]
    fn representation_reference_values() {
        // high-precision reference quadrature of the same representation
        for (n, rho, alpha, want) in [
            (4, 0.6, PI / 4.0, 2.543_737_325_785_6),
            (5, 0.4, PI / 3.0, 2.156_598_671_174_5),
            (3, 0.5, 0.7, 1.982_662_815_63),
        ] {
            let c = directional_constant(&pt(n, rho, alpha), 1e-12).unwrap();
            assert!((c.value - want).abs() < 1e-10 * want, "{n} {rho} {alpha}: {}", c.value);
        }
    }

    #[test]
    fn continuity_at_center() {
        for n in 3..=5 {
            let c0 = center_constant(n).unwrap();
            for &a in &[0.0, 0.8, FRAC_PI_2] {
                let c = directional_constant(&pt(n, 1e-10, a), 1e-11).unwrap();
                assert!((c.value - c0).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn supremum_in_three_dimensions() {
        let g = gradient_constant(3, 0.5, 1e-11).unwrap();
        assert!(g.argmax_alpha < 1e-4);
        assert!((g.estimate.value - CLOSED3_HALF).abs() < 1e-9);
        assert_eq!(g.local_maxima, vec![0.0]);
        let flat = gradient_constant(3, 1e-12, 1e-10).unwrap();
        assert!((flat.estimate.value - 1.5).abs() < 1e-9);
    }
}
