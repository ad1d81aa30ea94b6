//! The hypergeometric integral identities behind the majorant, and the
//! split `S`, `S1`, `S2` of the representation integral for general `n`.
//!
//! Every integral over `x in [-1, 1]` is taken in `theta = acos x`, which turns
//! the weight `(1 - x^2)^{(n-3)/2} dx` into `sin^{n-2}(theta) d theta`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::constants::{reduced_argument, ProblemPoint};
use crate::quadrature::{integrate_adaptive_with, QuadratureResult, Tolerance, MAX_DEPTH};
use crate::specfun::{ball_hyp, ball_hyp_minus_one};
use crate::Result;

/// Absolute gap allowed between the two sides of an identity.
pub const IDENTITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityReport {
    pub lhs: f64,
    pub rhs: f64,
    pub abs_gap: f64,
    pub tolerance: f64,
    /// Sum of the quadrature error estimates of both sides.
    pub quadrature_error: f64,
    pub passed: bool,
}

impl IdentityReport {
    fn new(lhs: &QuadratureResult, rhs: f64, rhs_error: f64) -> Self {
        let abs_gap = (lhs.value - rhs).abs();
        let quadrature_error = lhs.error_estimate + rhs_error;
        Self {
            lhs: lhs.value,
            rhs,
            abs_gap,
            tolerance: IDENTITY_TOL,
            quadrature_error,
            passed: abs_gap <= IDENTITY_TOL + quadrature_error,
        }
    }
}

fn theta_integral<F: Fn(f64) -> f64>(f: F, tol: f64, breaks: &[f64]) -> Result<QuadratureResult> {
    integrate_adaptive_with(f, 0.0, PI, Tolerance::absolute(tol), breaks, MAX_DEPTH)
}

/// `int w(x) (1 - 2 rho x + rho^2)^{1-n/2} dx` with the Gegenbauer weight times `extra(theta)`.
fn radial_moment<E: Fn(f64) -> f64>(n: usize, rho: f64, tol: f64, extra: E) -> Result<QuadratureResult> {
    let expo = 1.0 - n as f64 / 2.0;
    theta_integral(
        |t| extra(t) * t.sin().powi(n as i32 - 2) * (1.0 + rho * rho - 2.0 * rho * t.cos()).powf(expo),
        tol,
        &[],
    )
}

/// `int w(x) D^{1-n/2} g(x) F(.) dx` along the tilted direction, where `F`
/// is the ball hypergeometric factor (or `F - 1` when `minus_one`).
fn tilted_moment<G: Fn(f64) -> f64>(
    pt: &ProblemPoint,
    tol: f64,
    minus_one: bool,
    breaks: &[f64],
    g: G,
) -> Result<QuadratureResult> {
    let (sin_a, cos_a) = pt.alpha.sin_cos();
    let n = pt.n;
    let expo = 1.0 - n as f64 / 2.0;
    theta_integral(
        |t| {
            let (z, d) = reduced_argument(pt.rho, cos_a, sin_a, t);
            let hyp = if minus_one { ball_hyp_minus_one(n, z) } else { ball_hyp(n, z) };
            g(t.cos()) * t.sin().powi(n as i32 - 2) * d.powf(expo) * hyp
        },
        tol,
        breaks,
    )
}

/// `int w D^{1-n/2} F dx = int w (1 - 2 rho x + rho^2)^{1-n/2} dx`.
pub fn lemma3_sides(n: usize, rho: f64, alpha: f64, tol: f64) -> Result<IdentityReport> {
    let pt = ProblemPoint::new(n, rho, alpha)?;
    let lhs = tilted_moment(&pt, tol, false, &[], |_| 1.0)?;
    let rhs = radial_moment(n, rho, tol, |_| 1.0)?;
    Ok(IdentityReport::new(&lhs, rhs.value, rhs.error_estimate))
}

/// The two `alpha`-free integrals on the right of the second-moment identity:
/// `int x^2 w (1 - 2 rho x + rho^2)^{1-n/2} dx` and
/// `int (1 - x^2) w (1 - 2 rho x + rho^2)^{1-n/2} dx`.
pub fn lemma4_components(n: usize, rho: f64, tol: f64) -> Result<(QuadratureResult, QuadratureResult)> {
    ProblemPoint::new(n, rho, 0.0)?;
    let x2 = radial_moment(n, rho, tol, |t| t.cos() * t.cos())?;
    let y2 = radial_moment(n, rho, tol, |t| t.sin() * t.sin())?;
    Ok((x2, y2))
}

/// `int x^2 w D^{1-n/2} F dx = sin^2(a)/(n-1) int (1 - x^2) w (..) dx + cos^2(a) int x^2 w (..) dx`.
pub fn lemma4_sides(n: usize, rho: f64, alpha: f64, tol: f64) -> Result<IdentityReport> {
    let pt = ProblemPoint::new(n, rho, alpha)?;
    let lhs = tilted_moment(&pt, tol, false, &[], |x| x * x)?;
    let (x2, y2) = lemma4_components(n, rho, tol)?;
    let (s, c) = alpha.sin_cos();
    let rhs = s * s / (n as f64 - 1.0) * y2.value + c * c * x2.value;
    Ok(IdentityReport::new(&lhs, rhs, y2.error_estimate + x2.error_estimate))
}

/// Signed integral `int (alpha_rho cos a - x) w D^{1-n/2} F dx`, which vanishes.
pub fn lemma5_value(n: usize, rho: f64, alpha: f64, tol: f64) -> Result<IdentityReport> {
    let pt = ProblemPoint::new(n, rho, alpha)?;
    let kink = pt.alpha_rho() * alpha.cos();
    let lhs = tilted_moment(&pt, tol, false, &[kink.acos()], |x| kink - x)?;
    Ok(IdentityReport::new(&lhs, 0.0, 0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SIntegrals {
    pub s: f64,
    pub s1: f64,
    pub s2: f64,
    pub error_estimate: f64,
}

/// `S = int |k - x| w D^{1-n/2} dx`, `S1 = int w D^{1-n/2} (F - 1) dx` and
/// `S2 = int (k - x)^2 w D^{1-n/2} (F - 1) dx` with `k = alpha_rho cos(alpha)`.
pub fn s_integrals(n: usize, rho: f64, alpha: f64, tol: f64) -> Result<SIntegrals> {
    let pt = ProblemPoint::new(n, rho, alpha)?;
    let kink = pt.alpha_rho() * alpha.cos();
    let brk = [kink.acos()];
    let expo = 1.0 - n as f64 / 2.0;
    let cos_a = alpha.cos();
    let s = theta_integral(
        |t| {
            (kink - t.cos()).abs()
                * t.sin().powi(n as i32 - 2)
                * (1.0 + rho * rho - 2.0 * rho * t.cos() * cos_a).powf(expo)
        },
        tol,
        &brk,
    )?;
    let s1 = tilted_moment(&pt, tol, true, &[], |_| 1.0)?;
    let s2 = tilted_moment(&pt, tol, true, &brk, |x| (kink - x) * (kink - x))?;
    Ok(SIntegrals {
        s: s.value,
        s1: s1.value,
        s2: s2.value,
        error_estimate: s.error_estimate + s1.error_estimate + s2.error_estimate,
    })
}
