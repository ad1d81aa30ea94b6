//! The three-dimensional majorant: closed forms of `S`, `S1`, `S2`, the
//! AM-GM majorant `M = S + S1/3 + 3 S2/4`, its power series `T(t)` in
//! `t = cos^2(alpha)`, coefficient negativity and the boundary derivative.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::constants::{directional_constant, radial_constant_closed3, ProblemPoint};
use crate::identities::s_integrals;
use crate::specfun::{ln_double_factorial, ln_gamma_unchecked};
use crate::{Error, Result};

/// Below this value of `cos^2(alpha)` the closed forms cancel badly and the
/// quadrature and series paths take over.
pub const EPS_C: f64 = 0.05;

/// Below this radius the closed forms are replaced by the same fallbacks.
pub const CLOSED_MIN_RHO: f64 = 0.02;

/// Quadrature tolerance of the fallback path.
const FALLBACK_TOL: f64 = 1e-13;

/// Upper limit on the number of series terms.
pub const SERIES_CAP: usize = 4_000_000;

fn check_rho(rho: f64) -> Result<()> {
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::domain(format!("rho must lie in [0, 1), got {rho}")));
    }
    Ok(())
}

fn use_closed(rho: f64, alpha: f64) -> bool {
    let c = alpha.cos();
    rho >= CLOSED_MIN_RHO && c * c >= EPS_C
}

fn roots(rho: f64, c: f64) -> (f64, f64) {
    let q = 1.0 + rho * rho;
    ((q + 2.0 * rho * c).sqrt(), (q - 2.0 * rho * c).sqrt())
}

fn fallback(rho: f64, alpha: f64) -> Result<(f64, f64, f64)> {
    let s = s_integrals(3, rho, alpha.min(FRAC_PI_2), FALLBACK_TOL)?;
    Ok((s.s, s.s1, s.s2))
}

/// `S(alpha) = int |rho cos(a)/3 - x| (1 + rho^2 - 2 rho x cos a)^{-1/2} dx`.
pub fn closed_s(rho: f64, alpha: f64) -> Result<f64> {
    check_rho(rho)?;
    if rho == 0.0 {
        return Ok(1.0);
    }
    if !use_closed(rho, alpha) {
        return Ok(fallback(rho, alpha)?.0);
    }
    let c = alpha.cos();
    let (p, m) = roots(rho, c);
    let (r2, c2) = (rho * rho, c * c);
    let q = 1.0 + r2;
    Ok((2.0 * (q - 2.0 / 3.0 * r2 * c2).powf(1.5) - (q - r2 * c2 + rho * c) * m - (q - r2 * c2 - rho * c) * p)
        / (3.0 * r2 * c2))
}

/// `S1(alpha) = 2 - (sqrt(1 + rho^2 + 2 rho c) - sqrt(1 + rho^2 - 2 rho c)) / (rho c)`.
pub fn closed_s1(rho: f64, alpha: f64) -> Result<f64> {
    check_rho(rho)?;
    if rho == 0.0 {
        return Ok(0.0);
    }
    if !use_closed(rho, alpha) {
        return Ok(fallback(rho, alpha)?.1);
    }
    let (p, m) = roots(rho, alpha.cos());
    // (p - m) / (rho c) = 4 / (p + m)
    Ok(2.0 - 4.0 / (p + m))
}

/// Closed form of `S2(alpha)`.
pub fn closed_s2(rho: f64, alpha: f64) -> Result<f64> {
    check_rho(rho)?;
    if rho == 0.0 {
        return Ok(0.0);
    }
    if !use_closed(rho, alpha) {
        return Ok(fallback(rho, alpha)?.2);
    }
    let (s, c) = alpha.sin_cos();
    let (p, m) = roots(rho, c);
    let (r2, rc) = (rho * rho, rho * c);
    let q = 1.0 + r2;
    Ok((2.0 / 3.0 + 2.0 / 45.0 * r2) * c * c
        + (2.0 / 3.0 - 2.0 / 15.0 * r2) * s * s
        + (rc / 9.0 - (10.0 * r2 + 1.0) / (45.0 * rc) + 2.0 * q * q / (15.0 * rc * rc * rc)) * (m - p)
        + (2.0 * q / (15.0 * rc * rc) - 2.0 / 9.0) * (p + m))
}

/// Closed form of `S + S1/3 + 3 S2/4`, valid for `cos(alpha) > 0`.
fn closed_majorant(rho: f64, c: f64) -> f64 {
    let (p, m) = roots(rho, c);
    let (r2, rc) = (rho * rho, rho * c);
    let q = 1.0 + r2;
    2.0 * (q - 2.0 / 3.0 * rc * rc).powf(1.5) / (3.0 * rc * rc) + 7.0 / 6.0 - r2 / 10.0
        + 2.0 * rc * rc / 15.0
        + (1.0 / 6.0 - 7.0 * q / (30.0 * rc * rc)) * (m + p)
        + (rc / 12.0 - (10.0 * r2 + 1.0) / (60.0 * rc) + q * q / (10.0 * rc * rc * rc)) * (m - p)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MajorantBreakdown {
    pub s: f64,
    pub s1: f64,
    pub s2: f64,
    pub m: f64,
    pub t: f64,
}

/// `S`, `S1`, `S2` and `M = S + S1/3 + 3 S2/4` at `(rho, alpha)`.
pub fn majorant(rho: f64, alpha: f64) -> Result<MajorantBreakdown> {
    check_rho(rho)?;
    let c = alpha.cos();
    let t = (c * c).min(1.0);
    if rho == 0.0 {
        return Ok(MajorantBreakdown { s: 1.0, s1: 0.0, s2: 0.0, m: 1.0, t });
    }
    if use_closed(rho, alpha) {
        return Ok(MajorantBreakdown {
            s: closed_s(rho, alpha)?,
            s1: closed_s1(rho, alpha)?,
            s2: closed_s2(rho, alpha)?,
            m: closed_majorant(rho, c),
            t,
        });
    }
    let (s, s1, s2) = fallback(rho, alpha)?;
    let m = MajorantSeries::new(rho)?.eval(t);
    Ok(MajorantBreakdown { s, s1, s2, m, t })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesCoefficient {
    pub k: usize,
    pub value: f64,
    pub ln_abs: f64,
    pub sign: i8,
}

impl SeriesCoefficient {
    fn from_value(k: usize, value: f64) -> Self {
        Self { k, value, ln_abs: value.abs().ln(), sign: sign_of(value) }
    }

    /// `c + s e^{b}` for `c = e^{a} > 0` in log space.
    fn from_log_parts(k: usize, ln_first: f64, ln_second: f64, second_sign: f64) -> Self {
        let top = ln_first.max(ln_second);
        let mix = (ln_first - top).exp() + second_sign * (ln_second - top).exp();
        let ln_abs = top + mix.abs().ln();
        let sign = sign_of(mix);
        Self { k, value: f64::from(sign) * ln_abs.exp(), ln_abs, sign }
    }
}

fn sign_of(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// `P(k)`, `Q(k)`, `R(k)` of the coefficient formula.
///
/// Each is an integer polynomial over 3; the numerators are exact in `f64` for
/// integer `k` up to a few thousand, so integer arguments give exact values.
pub fn pqr(k: f64) -> (f64, f64, f64) {
    let p = (((8.0 * k + 24.0) * k + 22.0) * k + 6.0) * k / 3.0;
    let q = ((((32.0 * k + 24.0) * k - 68.0) * k - 24.0) * k + 36.0) / 3.0;
    let r = ((((-32.0 * k + 48.0) * k - 70.0) * k + 51.0) * k - 9.0) / 3.0;
    (p, q, r)
}

fn a1(rho: f64) -> f64 {
    let q = 1.0 + rho * rho;
    rho * rho * (2.0 / 15.0 - 1.0 / (18.0 * q.sqrt()) - 1.0 / (30.0 * q.powf(2.5)))
}

/// Coefficient `a_k(rho)` of `cos^{2k}(alpha)` in the majorant, from the
/// factorial form (`k >= 2`) or the special first-order formula.
pub fn coefficient_a(k: usize, rho: f64) -> Result<SeriesCoefficient> {
    check_rho(rho)?;
    if k == 0 {
        return Err(Error::domain("coefficients start at k = 1"));
    }
    if rho == 0.0 {
        return Ok(SeriesCoefficient { k, value: 0.0, ln_abs: f64::NEG_INFINITY, sign: 0 });
    }
    if k == 1 {
        return Ok(SeriesCoefficient::from_value(1, a1(rho)));
    }
    let kf = k as f64;
    let q = 1.0 + rho * rho;
    let ln_first =
        2f64.ln() + 0.5 * q.ln() + ln_double_factorial(2 * k as i64 - 3)? - 3f64.ln() - ln_gamma_unchecked(kf + 2.0)
            + kf * (rho * rho / (3.0 * q)).ln();
    let (p, qq, r) = pqr(kf);
    let poly = -q * q * p + q * qq + r;
    let ln_second = ln_double_factorial(4 * k as i64 - 5)? - ln_gamma_unchecked(2.0 * kf + 4.0) - 0.5 * q.ln()
        + 2.0 * kf * (rho / q).ln()
        + poly.abs().ln();
    Ok(SeriesCoefficient::from_log_parts(k, ln_first, ln_second, poly.signum()))
}

/// Constant term `7/6 - rho^2/10 - 1/(6 sqrt(1 + rho^2))` of `T`.
pub fn series_constant(rho: f64) -> f64 {
    7.0 / 6.0 - rho * rho / 10.0 - 1.0 / (6.0 * (1.0 + rho * rho).sqrt())
}

/// Coefficients of `T(t) = T0 + sum a_k t^k` generated until the tail of
/// `sum k |a_k|` is below `1e-15`, the decay being geometric with ratio
/// approaching `4 rho^2 / (1 + rho^2)^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct MajorantSeries {
    pub rho: f64,
    pub constant: f64,
    /// `coefficients[k - 1] = a_k`.
    pub coefficients: Vec<f64>,
    /// Bound on the neglected part of `sum |a_k|`.
    pub tail_bound: f64,
    pub converged: bool,
}

/// Limiting ratio `|a_{k+1} / a_k|`.
pub fn coefficient_ratio_limit(rho: f64) -> f64 {
    let q = 1.0 + rho * rho;
    4.0 * rho * rho / (q * q)
}

impl MajorantSeries {
    pub fn new(rho: f64) -> Result<Self> {
        Self::with_cap(rho, SERIES_CAP)
    }

    pub fn with_cap(rho: f64, cap: usize) -> Result<Self> {
        check_rho(rho)?;
        let constant = series_constant(rho);
        if rho == 0.0 {
            return Ok(Self { rho, constant, coefficients: vec![], tail_bound: 0.0, converged: true });
        }
        let limit = coefficient_ratio_limit(rho);
        let q = 1.0 + rho * rho;
        let mut coefficients = vec![a1(rho)];
        // running logs of the two factorial parts, advanced by exact ratios
        let a2 = coefficient_a(2, rho)?;
        let mut ln_first =
            2f64.ln() + 0.5 * q.ln() - 3f64.ln() - ln_gamma_unchecked(4.0) + 2.0 * (rho * rho / (3.0 * q)).ln();
        let mut ln_second = -ln_gamma_unchecked(8.0) - 0.5 * q.ln() + 3f64.ln() + 4.0 * (rho / q).ln();
        let step_first = (rho * rho / (3.0 * q)).ln();
        let step_second = 2.0 * (rho / q).ln();
        let tail_bound;
        let mut converged = false;
        let mut k = 2usize;
        loop {
            let kf = k as f64;
            let (p, qq, r) = pqr(kf);
            let poly = -q * q * p + q * qq + r;
            let c = SeriesCoefficient::from_log_parts(k, ln_first, ln_second + poly.abs().ln(), poly.signum());
            coefficients.push(if k == 2 { a2.value } else { c.value });
            let prev = coefficients[k - 2].abs();
            let cur = coefficients[k - 1].abs();
            let ratio = if prev > 0.0 { (cur / prev).max(limit) } else { limit };
            if ratio < 1.0 {
                // tail of sum j |a_j| beyond k, dominated by a geometric series
                let tail = cur * (kf * ratio / (1.0 - ratio) + ratio / (1.0 - ratio).powi(2));
                if tail <= 1e-15 {
                    tail_bound = cur * ratio / (1.0 - ratio);
                    converged = true;
                    break;
                }
            }
            if k >= cap {
                tail_bound = cur * ratio / (1.0 - ratio).max(f64::MIN_POSITIVE);
                break;
            }
            ln_first += ((2.0 * kf - 1.0) / (kf + 2.0)).ln() + step_first;
            ln_second +=
                ((4.0 * kf - 3.0) * (4.0 * kf - 1.0) / ((2.0 * kf + 4.0) * (2.0 * kf + 5.0))).ln() + step_second;
            k += 1;
        }
        Ok(Self { rho, constant, coefficients, tail_bound, converged })
    }

    /// `T(t)`.
    pub fn eval(&self, t: f64) -> f64 {
        let mut pow = 1.0;
        let mut acc = self.constant;
        for a in &self.coefficients {
            pow *= t;
            acc += a * pow;
        }
        acc
    }

    /// `T'(t) = sum k a_k t^{k-1}`.
    pub fn derivative(&self, t: f64) -> f64 {
        let mut pow = 1.0;
        let mut acc = 0.0;
        for (i, a) in self.coefficients.iter().enumerate() {
            acc += (i + 1) as f64 * a * pow;
            pow *= t;
        }
        acc
    }

    /// `T''(t) = sum k (k - 1) a_k t^{k-2}`.
    pub fn second_derivative(&self, t: f64) -> f64 {
        let mut pow = 1.0;
        let mut acc = 0.0;
        for (i, a) in self.coefficients.iter().enumerate().skip(1) {
            let k = (i + 1) as f64;
            acc += k * (k - 1.0) * a * pow;
            pow *= t;
        }
        acc
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesSum {
    pub value: f64,
    pub terms: usize,
    pub converged: bool,
}

/// `T(t)` summed term by term. Stops once three consecutive terms are below
/// `tol |partial|` and the geometric tail estimate is as well; gives up at
/// [`SERIES_CAP`] terms with `converged = false`.
pub fn majorant_series_t(t: f64, rho: f64, tol: f64) -> Result<SeriesSum> {
    check_rho(rho)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::domain(format!("t must lie in [0, 1], got {t}")));
    }
    let series = MajorantSeries::new(rho)?;
    let limit = coefficient_ratio_limit(rho) * t;
    let mut acc = series.constant;
    let mut pow = 1.0;
    let mut small = 0;
    let mut prev_term = f64::NAN;
    for (i, a) in series.coefficients.iter().enumerate() {
        pow *= t;
        let term = a * pow;
        acc += term;
        let ratio = if prev_term.abs() > 0.0 { (term / prev_term).abs().max(limit) } else { limit };
        prev_term = term;
        let tail = if ratio < 1.0 { term.abs() * ratio / (1.0 - ratio) } else { f64::INFINITY };
        if term.abs() < tol * acc.abs() && tail < tol * acc.abs() {
            small += 1;
            if small == 3 {
                return Ok(SeriesSum { value: acc, terms: i + 1, converged: true });
            }
        } else {
            small = 0;
        }
    }
    Ok(SeriesSum { value: acc, terms: series.coefficients.len(), converged: series.converged })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lemma6Report {
    pub k: usize,
    pub p: f64,
    pub q: f64,
    pub r: f64,
    /// `k^2 Q^2 + 4 (k^2 - 1) P R`.
    pub d: f64,
    /// The same discriminant from its expanded octic.
    pub d_octic: f64,
    /// `-4P + 2Q + R`, which equals `-98k^2 - 7k + 21`.
    pub combination: f64,
    /// Minimum over `y in [1, 2]` of `(k-1) P y^2 - k Q y - (k+1) R`.
    pub phi_quad_min: f64,
    pub l_k: f64,
    pub d_k: f64,
    /// `l_{k+1} / l_k` computed from the definition.
    pub l_ratio: f64,
    /// `l_{k+1} / l_k` from the closed recurrence.
    pub l_ratio_formula: f64,
    pub a_k: f64,
    pub a_k_negative: bool,
    pub passed: bool,
}

/// Expanded discriminant octic.
pub fn discriminant_octic(k: f64) -> f64 {
    let c = [24.0, 96.0, -432.0, -3488.0 / 9.0, 952.0, 5824.0 / 9.0, -544.0, -3200.0 / 9.0];
    c.iter().rev().fold(0.0, |acc, ci| acc * k + ci) * k
}

/// `ln l_k` with `l_k = (4k-5)!! (k+1)! / ((2k-3)!! (2k+3)!) (3/2)^{k+1}`, as a
/// sum of logs of the surviving factors: the odd numbers `2k-1 ..= 4k-5`
/// over `k+2 ..= 2k+3`.
pub fn ln_l(k: usize) -> f64 {
    let num: f64 = (2 * k - 1..=4 * k - 5).step_by(2).map(|j| (j as f64).ln()).sum();
    let den: f64 = (k + 2..=2 * k + 3).map(|j| (j as f64).ln()).sum();
    num - den + (k as f64 + 1.0) * 1.5f64.ln()
}

pub fn d_sequence(k: usize) -> f64 {
    let kf = k as f64;
    2.0 / (98.0 * kf * kf + 7.0 * kf - 21.0)
}

fn quad_min(k: f64, p: f64, q: f64, r: f64) -> f64 {
    let g = |y: f64| (k - 1.0) * p * y * y - k * q * y - (k + 1.0) * r;
    let mut m = g(1.0).min(g(2.0));
    let vertex = k * q / (2.0 * (k - 1.0) * p);
    if (1.0..=2.0).contains(&vertex) {
        m = m.min(g(vertex));
    }
    m
}

/// Per-`k` checks of the coefficient-negativity argument at radius `rho`.
pub fn lemma6_verify(rho: f64, kmax: usize) -> Result<Vec<Lemma6Report>> {
    check_rho(rho)?;
    if kmax < 2 {
        return Err(Error::domain("kmax must be at least 2"));
    }
    let mut out = Vec::with_capacity(kmax - 1);
    for k in 2..=kmax {
        let kf = k as f64;
        let (p, q, r) = pqr(kf);
        let d = kf * kf * q * q + 4.0 * (kf * kf - 1.0) * p * r;
        let d_octic = discriminant_octic(kf);
        let combination = -4.0 * p + 2.0 * q + r;
        let phi_quad_min = quad_min(kf, p, q, r);
        let l_k = ln_l(k).exp();
        let d_k = d_sequence(k);
        let l_ratio = (ln_l(k + 1) - ln_l(k)).exp();
        let l_ratio_formula = 3.0 * (4.0 * kf - 1.0) * (4.0 * kf - 3.0) * (kf + 2.0)
            / (2.0 * (2.0 * kf + 5.0) * (2.0 * kf + 4.0) * (2.0 * kf - 1.0));
        let a = coefficient_a(k, rho)?;
        let a_k_negative = a.sign < 0;
        let passed = d < 0.0
            && d_octic < 0.0
            && (d - d_octic).abs() <= 1e-9 * d.abs()
            && (combination - (-98.0 * kf * kf - 7.0 * kf + 21.0)).abs() <= 1e-9 * combination.abs()
            && phi_quad_min > 0.0
            && l_k > d_k
            && (l_ratio - l_ratio_formula).abs() <= 1e-12 * l_ratio_formula
            && a_k_negative;
        out.push(Lemma6Report {
            k,
            p,
            q,
            r,
            d,
            d_octic,
            combination,
            phi_quad_min,
            l_k,
            d_k,
            l_ratio,
            l_ratio_formula,
            a_k: a.value,
            a_k_negative,
            passed,
        });
    }
    Ok(out)
}

/// `-40 (1 + 4 rho^2/3) sqrt(1 + rho^2/3) + 11 rho^4 + 60 rho^2 + 40`, in a
/// rationalized form free of cancellation.
pub fn lemma7_bracket(rho: f64) -> f64 {
    let s = rho * rho;
    let a = 11.0 * s * s + 60.0 * s + 40.0;
    let b = 40.0 * (1.0 + 4.0 * s / 3.0) * (1.0 + s / 3.0).sqrt();
    s * s * (121.0 * s * s + 10040.0 / 27.0 * s + 640.0 / 3.0) / (a + b)
}

/// Double-double value `hi + lo`.
#[derive(Clone, Copy)]
struct Dd(f64, f64);

impl Dd {
    fn add(self, o: Dd) -> Dd {
        let s = self.0 + o.0;
        let bb = s - self.0;
        let err = (self.0 - (s - bb)) + (o.0 - bb);
        Dd::norm(s, err + self.1 + o.1)
    }

    fn mul(self, o: Dd) -> Dd {
        let p = self.0 * o.0;
        let err = self.0.mul_add(o.0, -p);
        Dd::norm(p, err + self.0 * o.1 + self.1 * o.0)
    }

    fn scale(self, k: f64) -> Dd {
        self.mul(Dd(k, 0.0))
    }

    fn norm(hi: f64, lo: f64) -> Dd {
        let s = hi + lo;
        Dd(s, lo - (s - hi))
    }
}

/// Both sides of `(11r^4 + 60r^2 + 40)^2 - 1600 (1 + 4r^2/3)^2 (1 + r^2/3)
/// = 121 r^8 + 10040/27 r^6 + 640/3 r^4`.
///
/// The left side cancels to `O(r^4)`, so it is formed in double-double with
/// integer coefficients (both sides times 27).
pub fn octic_identity(rho: f64) -> (f64, f64) {
    let s = Dd(rho, 0.0).mul(Dd(rho, 0.0));
    let one = |k: f64| Dd(k, 0.0);
    let a = s.mul(s).scale(11.0).add(s.scale(60.0)).add(one(40.0));
    let u = s.scale(4.0).add(one(3.0));
    let w = s.add(one(3.0));
    let lhs = a.mul(a).scale(27.0).add(u.mul(u).mul(w).scale(-1600.0));
    let rhs = s.mul(s).mul(s.mul(s).scale(3267.0).add(s.scale(10040.0)).add(one(5760.0)));
    ((lhs.0 + lhs.1) / 27.0, (rhs.0 + rhs.1) / 27.0)
}

/// Below this radius [`t_prime_at_one`] uses its Taylor series.
pub const T_PRIME_SERIES_RHO: f64 = 1e-3;

/// Left derivative `T'(1) = bracket / (60 rho^2)`.
pub fn t_prime_at_one(rho: f64) -> Result<f64> {
    check_rho(rho)?;
    let s = rho * rho;
    if rho < T_PRIME_SERIES_RHO {
        return Ok(s * (2.0 / 45.0 + s * (7.0 / 648.0 + s * (-1.0 / 576.0 + s * 11.0 / 31104.0))));
    }
    Ok(lemma7_bracket(rho) / (60.0 * s))
}

/// `sum_k k a_k`, the term-by-term derivative of `T` at `t = 1`.
pub fn t_prime_series(rho: f64) -> Result<f64> {
    Ok(MajorantSeries::new(rho)?.derivative(1.0))
}

/// Slack allowed on every link of the chain.
pub const CHAIN_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainLink {
    pub alpha: f64,
    pub link: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`, or `-|rhs - lhs|` for equalities.
    pub slack: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainReport {
    pub rho: f64,
    pub links: Vec<ChainLink>,
    pub passed: bool,
}

impl ChainReport {
    pub fn failures(&self) -> impl Iterator<Item = &ChainLink> {
        self.links.iter().filter(|l| !l.passed)
    }
}

fn inequality(alpha: f64, link: &'static str, lhs: f64, rhs: f64) -> ChainLink {
    let slack = rhs - lhs;
    ChainLink { alpha, link, lhs, rhs, slack, passed: slack >= -CHAIN_SLACK }
}

fn equality(alpha: f64, link: &'static str, lhs: f64, rhs: f64) -> ChainLink {
    let slack = -(rhs - lhs).abs();
    ChainLink { alpha, link, lhs, rhs, slack, passed: slack >= -CHAIN_SLACK }
}

/// Points in `[0, 1]` where `T'` and `T''` are sampled.
const T_SAMPLES: usize = 41;

/// The inequality chain
/// `(2(1 - rho^2)/3) C <= S + sqrt(S1 S2) <= M = T(cos^2 a) <= T(1)` at every
/// grid angle, the identity `3 T(1) / (2(1 - rho^2)) = C(rho e1)` and sampled
/// `T'' <= 0`, `T' >= 0`.
pub fn conjecture_chain(rho: f64, alpha_grid: &[f64]) -> Result<ChainReport> {
    check_rho(rho)?;
    let series = MajorantSeries::new(rho)?;
    let t_one = closed_s(rho, 0.0)?;
    let scale = 2.0 * (1.0 - rho * rho) / 3.0;
    let mut links = Vec::new();
    for &alpha in alpha_grid {
        let pt = ProblemPoint::new(3, rho, alpha)?;
        let c = directional_constant(&pt, 1e-12)?.value;
        let b = majorant(rho, alpha)?;
        let cs = b.s.max(0.0) + (b.s1.max(0.0) * b.s2.max(0.0)).sqrt();
        links.push(inequality(alpha, "scaled_constant<=cauchy_schwarz", scale * c, cs));
        links.push(inequality(alpha, "cauchy_schwarz<=majorant", cs, b.m));
        links.push(equality(alpha, "majorant=series", b.m, series.eval(b.t)));
        links.push(inequality(alpha, "majorant<=t_one", b.m, t_one));
        if alpha == 0.0 {
            links.push(equality(alpha, "scaled_constant=s_at_zero", scale * c, b.s));
            links.push(equality(alpha, "s1_at_zero", b.s1, 0.0));
            links.push(equality(alpha, "s2_at_zero", b.s2, 0.0));
        }
    }
    links.push(equality(0.0, "t_one=series_t_one", t_one, series.eval(1.0)));
    links.push(equality(0.0, "scaled_t_one=closed3", t_one / scale, radial_constant_closed3(rho)?));
    for i in 0..T_SAMPLES {
        let t = i as f64 / (T_SAMPLES - 1) as f64;
        links.push(inequality(t, "second_derivative<=0", series.second_derivative(t), 0.0));
        links.push(inequality(t, "derivative>=0", 0.0, series.derivative(t)));
    }
    let passed = series.converged && links.iter().all(|l| l.passed);
    Ok(ChainReport { rho, links, passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn closed_forms_reference_point() {
        assert!((closed_s(0.5, 0.9).unwrap() - 0.926_397_616_180_332).abs() < 1e-13);
        assert!((closed_s1(0.5, 0.9).unwrap() - 0.148_815_370_830_231).abs() < 1e-13);
        assert!((closed_s2(0.5, 0.9).unwrap() - 0.030_120_480_454_570_4).abs() < 1e-13);
        assert!((majorant(0.5, 0.9).unwrap().m - 0.998_593_100_131_337).abs() < 1e-13);
    }

    #[test]
    fn closed_forms_at_zero_angle() {
        for &rho in &[0.1f64, 0.5, 0.9] {
            let want = (2.0 * (1.0 + rho * rho / 3.0).powf(1.5) - 2.0 * (1.0 - rho * rho)) / (3.0 * rho * rho);
            assert!((closed_s(rho, 0.0).unwrap() - want).abs() < 1e-13);
            assert!(closed_s1(rho, 0.0).unwrap().abs() < 1e-14);
            assert!(closed_s2(rho, 0.0).unwrap().abs() < 1e-12);
        }
        assert_eq!(closed_s(0.0, 1.0).unwrap(), 1.0);
    }

    #[test]
    fn closed_forms_match_quadrature() {
        for &(rho, alpha) in &[(0.7, 1.2), (0.5, 0.9), (0.3, 0.2), (0.95, 1.0)] {
            let q = s_integrals(3, rho, alpha, 1e-13).unwrap();
            assert!((closed_s(rho, alpha).unwrap() - q.s).abs() < 1e-8);
            assert!((closed_s1(rho, alpha).unwrap() - q.s1).abs() < 1e-8);
            assert!((closed_s2(rho, alpha).unwrap() - q.s2).abs() < 1e-8);
        }
        // near-orthogonal limit of S1
        let rho: f64 = 0.6;
        let want = 2.0 - 2.0 / (1.0 + rho * rho).sqrt();
        assert!((closed_s1(rho, FRAC_PI_2).unwrap() - want).abs() < 1e-10);
    }

    #[test]
    fn coefficient_values() {
        let want = [
            (1, 0.016_140_455_106_335_0),
            (2, -0.001_475_252_749_599_86),
            (3, -0.000_292_002_872_083_973),
            (5, -2.418_146_230_399_76e-5),
        ];
        for (k, v) in want {
            assert!(rel(coefficient_a(k, 0.5).unwrap().value, v) < 1e-12, "k={k}");
        }
        let r = 1e-4;
        assert!(rel(coefficient_a(1, r).unwrap().value / (r * r), 2.0 / 45.0) < 1e-6);
        let c = coefficient_a(150, 0.05).unwrap();
        assert!(c.sign < 0 && c.ln_abs.is_finite());
    }

    #[test]
    fn series_coefficients_match_direct_formula() {
        for &rho in &[0.05, 0.5, 0.95] {
            let s = MajorantSeries::new(rho).unwrap();
            for k in [2usize, 3, 10, 57, 200].into_iter().filter(|&k| k <= s.coefficients.len()) {
                let direct = coefficient_a(k, rho).unwrap().value;
                assert!(rel(s.coefficients[k - 1], direct) < 1e-11, "rho={rho} k={k}");
            }
        }
    }

    #[test]
    fn series_length_grows_with_rho() {
        let short = MajorantSeries::new(0.05).unwrap();
        let long = MajorantSeries::new(0.95).unwrap();
        assert!(short.coefficients.len() < 20 && long.coefficients.len() > 1000);
        assert!(long.converged && long.tail_bound < 1e-15);
    }

    #[test]
    fn series_matches_closed_majorant() {
        let rho = 0.6;
        let series = MajorantSeries::new(rho).unwrap();
        assert!(series.converged);
        assert!((series.eval(0.0) - series_constant(rho)).abs() < 1e-16);
        for &t in &[0.2f64, 0.5, 0.8] {
            let m = majorant(rho, t.sqrt().acos()).unwrap().m;
            assert!((series.eval(t) - m).abs() < 1e-9);
            let s = majorant_series_t(t, rho, 1e-15).unwrap();
            assert!(s.converged && (s.value - m).abs() < 1e-9);
        }
        assert!((series.eval(1.0) - closed_s(rho, 0.0).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn overlap_band() {
        for &rho in &[0.05, 0.3, 0.6, 0.95] {
            let series = MajorantSeries::new(rho).unwrap();
            for &t in &[0.04f64, 0.05, 0.06] {
                let closed = closed_majorant(rho, t.sqrt());
                assert!((closed - series.eval(t)).abs() < 1e-9, "rho={rho} t={t}");
            }
        }
    }

    #[test]
    fn lemma6_small_cases() {
        let reports = lemma6_verify(0.5, 10).unwrap();
        assert!(reports.iter().all(|r| r.passed));
        let r2 = &reports[0];
        assert!((r2.l_k - 0.012_053_571_428_571_4).abs() < 1e-15);
        assert!((r2.d_k - 2.0 / 385.0).abs() < 1e-16);
        assert!(lemma6_verify(0.5, 1).is_err());
    }

    #[test]
    fn lemma7_values() {
        assert!((t_prime_at_one(0.5).unwrap() - 0.011_760_445_393_541_8).abs() < 1e-15);
        let naive = |r: f64| {
            let s = r * r;
            (-40.0 * (1.0 + 4.0 * s / 3.0) * (1.0 + s / 3.0).sqrt() + 11.0 * s * s + 60.0 * s + 40.0) / (60.0 * s)
        };
        for &r in &[0.05, 0.3, 0.9] {
            assert!(rel(t_prime_at_one(r).unwrap(), naive(r)) < 1e-9);
        }
        let below = t_prime_at_one(T_PRIME_SERIES_RHO * (1.0 - 1e-9)).unwrap();
        let above = t_prime_at_one(T_PRIME_SERIES_RHO).unwrap();
        assert!(rel(below, above) < 1e-8);
        for &r in &[0.01, 0.1, 0.5, 0.9, 0.99] {
            assert!((t_prime_series(r).unwrap() - t_prime_at_one(r).unwrap()).abs() < 1e-8, "rho={r}");
        }
    }

    #[test]
    fn chain_at_half() {
        let grid: Vec<f64> = (0..9).map(|i| i as f64 * PI / 16.0).collect();
        let report = conjecture_chain(0.5, &grid).unwrap();
        assert!(report.passed, "{:?}", report.failures().collect::<Vec<_>>());
    }

    #[test]
    fn octic_identity_survives_cancellation() {
        for j in 1..=99 {
            let (lhs, rhs) = octic_identity(0.01 * j as f64);
            assert!((lhs / rhs - 1.0).abs() <= 1e-13, "{j}");
        }
        let (lhs, rhs) = octic_identity(1e-3);
        assert!((lhs / rhs - 1.0).abs() <= 1e-12);
    }
}
