//! Brute-force evaluations straight from sphere integrals of the Poisson
//! kernel, used to cross-check the reduced one-dimensional formulas.

use std::cell::Cell;
use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::constants::{ConstantEstimate, Method, ProblemPoint};
use crate::quadrature::{
    integrate_adaptive_with, planar_sphere_integral, polar_normalization, sphere_integral, KinkLine, Tolerance,
    MAX_DEPTH,
};
use crate::specfun::{ball_hyp, beta, ln_gamma_unchecked};
use crate::{Error, Result};

/// Refinement used when callers have no preference.
pub const DEFAULT_REFINEMENT: usize = 3;

/// Relative tolerance of the adaptive sphere integrals at a refinement level:
/// `10^-(6 + refinement)`, floored at `1e-13`.
pub fn refinement_tolerance(refinement: usize) -> Result<f64> {
    if refinement == 0 {
        return Err(Error::domain("refinement must be at least 1"));
    }
    Ok(10f64.powi(-(6 + refinement.min(7) as i32)))
}

/// A point `x` of the open ball and a boundary point `zeta`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelPoint {
    pub x: Vec<f64>,
    pub zeta: Vec<f64>,
}

impl KernelPoint {
    pub fn new(x: Vec<f64>, zeta: Vec<f64>) -> Result<Self> {
        if x.len() != zeta.len() || x.len() < 2 {
            return Err(Error::domain("x and zeta must share a dimension of at least 2"));
        }
        let nx: f64 = x.iter().map(|v| v * v).sum();
        let nz: f64 = zeta.iter().map(|v| v * v).sum();
        if !(nx < 1.0) {
            return Err(Error::domain("x must lie in the open unit ball"));
        }
        if (nz.sqrt() - 1.0).abs() > 1e-14 {
            return Err(Error::domain("zeta must lie on the unit sphere"));
        }
        Ok(Self { x, zeta })
    }

    fn parts(&self) -> (f64, f64) {
        let x2: f64 = self.x.iter().map(|v| v * v).sum();
        let d2: f64 = self.x.iter().zip(&self.zeta).map(|(a, b)| (a - b) * (a - b)).sum();
        (x2, d2)
    }

    /// `P(x, zeta) = (1 - |x|^2) / |x - zeta|^n`.
    pub fn poisson_kernel(&self) -> f64 {
        let (x2, d2) = self.parts();
        (1.0 - x2) * d2.powf(-(self.x.len() as f64) / 2.0)
    }

    /// `grad_x P = -2x |x - zeta|^{-n} - n (1 - |x|^2)(x - zeta) |x - zeta|^{-n-2}`.
    pub fn poisson_gradient(&self) -> Vec<f64> {
        let n = self.x.len() as f64;
        let (x2, d2) = self.parts();
        let a = -2.0 * d2.powf(-n / 2.0);
        let b = -n * (1.0 - x2) * d2.powf(-n / 2.0 - 1.0);
        self.x.iter().zip(&self.zeta).map(|(xi, zi)| a * xi + b * (xi - zi)).collect()
    }
}

/// `<grad_x P(rho e1, zeta), l_alpha>` as a function of `(zeta1, zeta2)`.
fn directional_gradient(n: f64, rho: f64, cos_a: f64, sin_a: f64, z1: f64, z2: f64) -> f64 {
    let d = 1.0 + rho * rho - 2.0 * rho * z1;
    let inner = -2.0 * rho * cos_a * d - n * (1.0 - rho * rho) * ((rho - z1) * cos_a - z2 * sin_a);
    inner * d.powf(-n / 2.0 - 1.0)
}

/// Zero set of [`directional_gradient`], a line in the `(zeta1, zeta2)` plane.
fn gradient_kink(n: f64, rho: f64, cos_a: f64, sin_a: f64) -> KinkLine {
    let w = n * (1.0 - rho * rho);
    KinkLine { a: cos_a * (4.0 * rho * rho + w), b: w * sin_a, c: rho * cos_a * (2.0 * (1.0 + rho * rho) + w) }
}

/// `int |<grad_x P(rho e1, zeta), l_alpha>| d sigma(zeta)`.
pub fn constant_oracle_direct(pt: &ProblemPoint, refinement: usize) -> Result<ConstantEstimate> {
    let tol = refinement_tolerance(refinement)?;
    let (sin_a, cos_a) = pt.alpha.sin_cos();
    let (n, rho) = (pt.n as f64, pt.rho);
    let kink = gradient_kink(n, rho, cos_a, sin_a);
    let r = planar_sphere_integral(
        |z1, z2| directional_gradient(n, rho, cos_a, sin_a, z1, z2).abs(),
        pt.n,
        Tolerance::relative(tol),
        &[kink],
    )?;
    Ok(ConstantEstimate {
        value: r.value,
        method: Method::OracleDirect,
        error_bound: r.error_estimate,
        converged: r.converged,
    })
}

/// `n / (1 - rho^2) int |<eta - alpha_rho e1, l_alpha>| |eta - rho e1|^{2-n} d sigma(eta)`.
pub fn constant_oracle_moebius(pt: &ProblemPoint, refinement: usize) -> Result<ConstantEstimate> {
    let tol = refinement_tolerance(refinement)?;
    let (sin_a, cos_a) = pt.alpha.sin_cos();
    let (n, rho) = (pt.n as f64, pt.rho);
    let shift = pt.alpha_rho();
    let kink = KinkLine { a: cos_a, b: sin_a, c: shift * cos_a };
    let r = planar_sphere_integral(
        |e1, e2| {
            let d = 1.0 + rho * rho - 2.0 * rho * e1;
            ((e1 - shift) * cos_a + e2 * sin_a).abs() * d.powf(1.0 - n / 2.0)
        },
        pt.n,
        Tolerance::relative(tol),
        &[kink],
    )?;
    let pre = n / (1.0 - rho * rho);
    Ok(ConstantEstimate {
        value: pre * r.value,
        method: Method::OracleMoebius,
        error_bound: pre * r.error_estimate,
        converged: r.converged,
    })
}

/// Test functions for the projection formula. Each depends on the first
/// coordinate and the squared norm of the projected point only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TestFn {
    One,
    X1Squared,
    AbsX1,
    RadialBump,
}

impl TestFn {
    pub const ALL: [TestFn; 4] = [TestFn::One, TestFn::X1Squared, TestFn::AbsX1, TestFn::RadialBump];

    pub fn name(&self) -> &'static str {
        match self {
            TestFn::One => "one",
            TestFn::X1Squared => "x1_squared",
            TestFn::AbsX1 => "abs_x1",
            TestFn::RadialBump => "radial_bump",
        }
    }

    fn eval(&self, x1: f64, norm2: f64) -> f64 {
        match self {
            TestFn::One => 1.0,
            TestFn::X1Squared => x1 * x1,
            TestFn::AbsX1 => x1.abs(),
            TestFn::RadialBump => (-4.0 * norm2).exp(),
        }
    }
}

/// Sphere grid used for the left side of the projection formula.
const PROJECTION_REFINEMENT: usize = 6;

/// Both sides of the projection formula
/// `int_{S^{n-1}} f(P xi) d sigma = Gamma(n/2) / (Gamma(k/2 + 1) Gamma((n-k)/2))
/// int_{B^k} (1 - |x|^2)^{(n-k-2)/2} f(x) dv_k(x)` for `P` the projection onto the
/// first `k` coordinates and `v_k` the normalized volume measure.
pub fn verify_projection_lemma(test_fn: TestFn, n: usize, k: usize) -> Result<(f64, f64)> {
    if n < 2 || k == 0 || k >= n {
        return Err(Error::domain(format!("need 1 <= k < n, got n = {n}, k = {k}")));
    }
    let lhs = sphere_integral(
        |xi: &[f64]| test_fn.eval(xi[0], xi[..k].iter().map(|v| v * v).sum()),
        n,
        PROJECTION_REFINEMENT,
    )?
    .value;

    let (nf, kf) = (n as f64, k as f64);
    let c =
        (ln_gamma_unchecked(nf / 2.0) - ln_gamma_unchecked(kf / 2.0 + 1.0) - ln_gamma_unchecked((nf - kf) / 2.0)).exp();
    let tol = Tolerance { abs: 1e-15, rel: 1e-14 };
    let ball = if k == 1 {
        // x = sin(psi) absorbs the (1 - x^2)^{(n-3)/2} endpoint behaviour
        integrate_adaptive_with(
            |psi: f64| {
                let x = psi.sin();
                psi.cos().powi(n as i32 - 2) * test_fn.eval(x, x * x)
            },
            -FRAC_PI_2,
            FRAC_PI_2,
            tol,
            &[0.0],
            MAX_DEPTH,
        )?
        .value
            / 2.0
    } else {
        // polar radius r = sin(psi); the angular average only needs the first coordinate
        let ck = polar_normalization(k);
        let failure: Cell<Option<Error>> = Cell::new(None);
        let v = integrate_adaptive_with(
            |psi: f64| {
                let r = psi.sin();
                let inner = integrate_adaptive_with(
                    |t: f64| t.sin().powi(k as i32 - 2) * test_fn.eval(r * t.cos(), r * r),
                    0.0,
                    PI,
                    tol,
                    &[FRAC_PI_2],
                    MAX_DEPTH,
                );
                match inner {
                    Ok(i) => r.powi(k as i32 - 1) * psi.cos().powi(n as i32 - k as i32 - 1) * ck * i.value,
                    Err(e) => {
                        failure.set(Some(e));
                        f64::NAN
                    }
                }
            },
            0.0,
            FRAC_PI_2,
            tol,
            &[],
            MAX_DEPTH,
        );
        if let Some(e) = failure.take() {
            return Err(e);
        }
        // normalized volume: omega_k / |B^k| = k
        kf * v?.value
    };
    Ok((lhs, c * ball))
}

/// Both sides of the inner-integral identity
/// `int (1 - x^2 - y^2)^{(n-4)/2} (1 - 2 rho x cos a - 2 rho y sin a + rho^2)^{1-n/2} dy
/// = B(1/2, n/2 - 1) (1 - x^2)^{(n-3)/2} D^{1-n/2} 2F1(..; 4 rho^2 sin^2 a (1 - x^2) / D^2)`.
pub fn verify_inner_integral(n: usize, rho: f64, alpha: f64, x: f64) -> Result<(f64, f64)> {
    ProblemPoint::new(n, rho, alpha)?;
    if !(x > -1.0 && x < 1.0) {
        return Err(Error::domain(format!("x must lie in (-1, 1), got {x}")));
    }
    let nf = n as f64;
    let (sin_a, cos_a) = alpha.sin_cos();
    let w = 1.0 - x * x;
    let base = 1.0 - 2.0 * rho * x * cos_a + rho * rho;
    let lhs = integrate_adaptive_with(
        |t: f64| {
            let y = w.sqrt() * t.sin();
            t.cos().powi(n as i32 - 3) * (base - 2.0 * rho * y * sin_a).powf(1.0 - nf / 2.0)
        },
        -FRAC_PI_2,
        FRAC_PI_2,
        Tolerance { abs: 1e-16, rel: 1e-14 },
        &[],
        MAX_DEPTH,
    )?;
    let lhs = w.powf((nf - 3.0) / 2.0) * lhs.value;
    let z = 4.0 * rho * rho * sin_a * sin_a * w / (base * base);
    let rhs = beta(0.5, nf / 2.0 - 1.0)? * w.powf((nf - 3.0) / 2.0) * base.powf(1.0 - nf / 2.0) * ball_hyp(n, z);
    Ok((lhs, rhs))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtremalDerivative {
    /// Central difference `(u(x + h l) - u(x - h l)) / (2h)`.
    pub value: f64,
    pub u_plus: f64,
    pub u_minus: f64,
    /// Combined quadrature error of the two Poisson integrals.
    pub quadrature_error: f64,
    /// Set when the quadrature error exceeds `h^2`.
    pub noise_warning: bool,
    pub converged: bool,
}

/// Directional derivative at `rho e1` of the Poisson extension of
/// `sign <grad_x P(rho e1, .), l_alpha>`, by central differences.
pub fn extremal_derivative(pt: &ProblemPoint, h: f64, refinement: usize) -> Result<ExtremalDerivative> {
    if !(1e-6..=1e-2).contains(&h) {
        return Err(Error::domain(format!("step must lie in [1e-6, 1e-2], got {h}")));
    }
    if pt.rho + h >= 1.0 {
        return Err(Error::domain("rho + h must stay inside the ball"));
    }
    let tol = refinement_tolerance(refinement)?;
    let (sin_a, cos_a) = pt.alpha.sin_cos();
    let (n, rho) = (pt.n as f64, pt.rho);
    let kink = gradient_kink(n, rho, cos_a, sin_a);
    let poisson_at = |sign: f64| -> Result<(f64, f64, bool)> {
        let (x1, x2) = (rho + sign * h * cos_a, sign * h * sin_a);
        let x2n = x1 * x1 + x2 * x2;
        let r = planar_sphere_integral(
            |z1, z2| {
                let data = directional_gradient(n, rho, cos_a, sin_a, z1, z2).signum();
                let d = x2n + 1.0 - 2.0 * (x1 * z1 + x2 * z2);
                data * (1.0 - x2n) * d.powf(-n / 2.0)
            },
            pt.n,
            Tolerance { abs: tol * h, rel: 0.0 },
            &[kink],
        )?;
        Ok((r.value, r.error_estimate, r.converged))
    };
    let (u_plus, e_plus, c_plus) = poisson_at(1.0)?;
    let (u_minus, e_minus, c_minus) = poisson_at(-1.0)?;
    let quadrature_error = e_plus + e_minus;
    Ok(ExtremalDerivative {
        value: (u_plus - u_minus) / (2.0 * h),
        u_plus,
        u_minus,
        quadrature_error,
        noise_warning: quadrature_error > h * h,
        converged: c_plus && c_minus,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{directional_constant, radial_constant_closed3};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pt(n: usize, rho: f64, alpha: f64) -> ProblemPoint {
        ProblemPoint::new(n, rho, alpha).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let n = rng.gen_range(2..=6);
            let mut zeta: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let norm = zeta.iter().map(|v| v * v).sum::<f64>().sqrt();
            zeta.iter_mut().for_each(|v| *v /= norm);
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.4..0.4)).collect();
            let kp = KernelPoint::new(x.clone(), zeta.clone()).unwrap();
            let grad = kp.poisson_gradient();
            for i in 0..n {
                let h = 1e-6;
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[i] += h;
                xm[i] -= h;
                let fp = KernelPoint::new(xp, zeta.clone()).unwrap().poisson_kernel();
                let fm = KernelPoint::new(xm, zeta.clone()).unwrap().poisson_kernel();
                let fd = (fp - fm) / (2.0 * h);
                assert!((fd - grad[i]).abs() <= 1e-7 * grad[i].abs().max(1.0), "{fd} vs {}", grad[i]);
            }
        }
    }

    #[test]
    fn kernel_point_validation() {
        assert!(KernelPoint::new(vec![0.0, 0.0], vec![1.0, 0.0]).is_ok());
        assert!(KernelPoint::new(vec![1.0, 0.0], vec![1.0, 0.0]).is_err());
        assert!(KernelPoint::new(vec![0.0, 0.0], vec![1.0, 0.1]).is_err());
    }

    #[test]
    fn center_values() {
        for a in [0.0, 1.0] {
            let d = constant_oracle_direct(&pt(3, 0.0, a), 3).unwrap();
            let m = constant_oracle_moebius(&pt(3, 0.0, a), 3).unwrap();
            assert!((d.value - 1.5).abs() < 1e-9 && (m.value - 1.5).abs() < 1e-9);
        }
    }

    #[test]
    fn oracles_match_closed_form() {
        let want = radial_constant_closed3(0.5).unwrap();
        let d = constant_oracle_direct(&pt(3, 0.5, 0.0), 3).unwrap();
        let m = constant_oracle_moebius(&pt(3, 0.5, 0.0), 3).unwrap();
        assert!((d.value - want).abs() < 2e-6 && rel(m.value, d.value) < 1e-6);
        assert!(d.converged && m.converged);
    }

    #[test]
    fn oracles_match_representation() {
        for (n, rho, alpha) in [(5, 0.4, PI / 3.0), (4, 0.7, FRAC_PI_2), (6, 0.9, PI / 6.0)] {
            let p = pt(n, rho, alpha);
            let r = directional_constant(&p, 1e-11).unwrap().value;
            assert!(rel(constant_oracle_direct(&p, 3).unwrap().value, r) < 1e-7, "{n} {rho} {alpha}");
            assert!(rel(constant_oracle_moebius(&p, 3).unwrap().value, r) < 1e-7, "{n} {rho} {alpha}");
        }
    }

    #[test]
    fn projection_examples() {
        let (l, r) = verify_projection_lemma(TestFn::One, 4, 2).unwrap();
        assert!((l - 1.0).abs() < 1e-12 && (r - 1.0).abs() < 1e-12);
        let (l, r) = verify_projection_lemma(TestFn::X1Squared, 5, 1).unwrap();
        assert!((l - 0.2).abs() < 1e-12 && (r - 0.2).abs() < 1e-12);
        let (l, r) = verify_projection_lemma(TestFn::AbsX1, 3, 1).unwrap();
        assert!((l - 0.5).abs() < 1e-12 && (r - 0.5).abs() < 1e-12);
        let (l, r) = verify_projection_lemma(TestFn::RadialBump, 5, 3).unwrap();
        assert!((l - r).abs() < 1e-10);
        assert!(verify_projection_lemma(TestFn::One, 3, 3).is_err());
    }

    #[test]
    fn inner_integral_examples() {
        let (l, r) = verify_inner_integral(3, 0.7, 1.0, 0.3).unwrap();
        assert!((l - r).abs() <= 1e-10 * r.abs());
        let (l, r) = verify_inner_integral(5, 0.6, 0.0, -0.4).unwrap();
        let direct = beta(0.5, 1.5).unwrap() * 0.84f64.powf(1.0) * (1.0 + 0.36 + 0.48f64).powf(-1.5);
        assert!(rel(l, direct) < 1e-12 && rel(r, direct) < 1e-12);
        let (l, r) = verify_inner_integral(4, 0.0, 0.5, 0.5).unwrap();
        let base = beta(0.5, 1.0).unwrap() * 0.75f64.sqrt();
        assert!(rel(l, base) < 1e-12 && rel(r, base) < 1e-12);
    }

    #[test]
    fn extremal_witness() {
        let want = radial_constant_closed3(0.5).unwrap();
        let e = extremal_derivative(&pt(3, 0.5, 0.0), 1e-3, 3).unwrap();
        assert!(rel(e.value, want) < 1e-3, "{}", e.value);
        assert!(e.u_plus.abs() <= 1.0 && e.u_minus.abs() <= 1.0);
        let c = extremal_derivative(&pt(3, 0.0, 0.4), 1e-3, 3).unwrap();
        assert!((c.value - 1.5).abs() < 1e-5);
        assert!(extremal_derivative(&pt(3, 0.5, 0.0), 0.1, 3).is_err());
    }
}
