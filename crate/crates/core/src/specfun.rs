//! Scalar special functions: log-gamma, digamma, Beta, Pochhammer, double
//! factorial and the Gauss hypergeometric function in the logarithmic case
//! `c = a + b`.
//!
//! Everything is plain `f64`. The hypergeometric evaluator switches from the
//! Gauss series to the `1 - z` connection formula at [`Z_CROSSOVER`]; with
//! `c = a + b` the point `z = 1` is a logarithmic singularity, so the
//! connection formula carries `ln(1 - z)` and digamma terms.

use std::f64::consts::PI;

use crate::{Error, Result};

/// Argument above which [`hyp2f1_logcase`] uses the connection formula.
pub const Z_CROSSOVER: f64 = 0.75;

/// Maximum number of terms summed by any hypergeometric series.
pub const SERIES_TERM_CAP: usize = 100_000;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// zeta(k) for k = 2..=30.
const ZETA: [f64; 29] = [
    1.644_934_066_848_226_4,
    1.202_056_903_159_594_3,
    1.082_323_233_711_138_2,
    1.036_927_755_143_369_9,
    1.017_343_061_984_449_1,
    1.008_349_277_381_922_8,
    1.004_077_356_197_944_3,
    1.002_008_392_826_082_2,
    1.000_994_575_127_818_1,
    1.000_494_188_604_119_5,
    1.000_246_086_553_308_0,
    1.000_122_713_347_578_5,
    1.000_061_248_135_058_7,
    1.000_030_588_236_307_0,
    1.000_015_282_259_408_7,
    1.000_007_637_197_637_9,
    1.000_003_817_293_265_0,
    1.000_001_908_212_716_6,
    1.000_000_953_962_033_9,
    1.000_000_476_932_986_8,
    1.000_000_238_450_502_7,
    1.000_000_119_219_926_0,
    1.000_000_059_608_189_1,
    1.000_000_029_803_503_5,
    1.000_000_014_901_554_8,
    1.000_000_007_450_711_8,
    1.000_000_003_725_334_0,
    1.000_000_001_862_659_7,
    1.000_000_000_931_327_4,
];

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} requires a positive finite argument, got {x}")))
    }
}

/// ln Gamma(1 + eps) for |eps| <= 0.2 by the zeta series.
fn ln_gamma_1p(eps: f64) -> f64 {
    let mut sum = -EULER_GAMMA * eps;
    let mut pow = -eps;
    for (i, z) in ZETA.iter().enumerate() {
        let k = (i + 2) as f64;
        pow *= -eps;
        sum += z * pow / k;
    }
    sum
}

fn ln_gamma_lanczos(x: f64) -> f64 {
    let x = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Natural logarithm of the gamma function for `x > 0`.
///
/// The neighbourhoods of the zeros at 1 and 2 use the zeta series so the
/// result keeps full relative accuracy there.
pub fn log_gamma(x: f64) -> Result<f64> {
    check_positive("log_gamma", x)?;
    Ok(ln_gamma_unchecked(x))
}

pub(crate) fn ln_gamma_unchecked(x: f64) -> f64 {
    if (x - 1.0).abs() <= 0.2 {
        ln_gamma_1p(x - 1.0)
    } else if (x - 2.0).abs() <= 0.2 {
        let eps = x - 2.0;
        ln_gamma_1p(eps) + eps.ln_1p()
    } else if x < 0.5 {
        (PI / (PI * x).sin()).ln() - ln_gamma_unchecked(1.0 - x)
    } else {
        ln_gamma_lanczos(x)
    }
}

/// Digamma function psi(x) = d/dx ln Gamma(x) for `x > 0`.
pub fn digamma(x: f64) -> Result<f64> {
    check_positive("digamma", x)?;
    Ok(digamma_unchecked(x))
}

fn digamma_unchecked(mut x: f64) -> f64 {
    // B_{2k} / (2k) for k = 1..7
    const ASYMP: [f64; 7] =
        [1.0 / 12.0, -1.0 / 120.0, 1.0 / 252.0, -1.0 / 240.0, 1.0 / 132.0, -691.0 / 32_760.0, 1.0 / 12.0];
    let mut acc = 0.0;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    let mut pow = inv2;
    let mut tail = 0.0;
    for c in ASYMP {
        tail += c * pow;
        pow *= inv2;
    }
    acc + x.ln() - 0.5 / x - tail
}

/// Rising factorial `(a)_k = a (a+1) ... (a+k-1)`, with `(a)_0 = 1`.
pub fn pochhammer(a: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (a + i as f64))
}

/// ln(m!!) for `m >= -1`, using the gamma-function form of the double factorial.
pub fn ln_double_factorial(m: i64) -> Result<f64> {
    if m < -1 {
        return Err(Error::domain(format!("double factorial undefined for {m}")));
    }
    if m <= 0 {
        return Ok(0.0);
    }
    let ln2 = std::f64::consts::LN_2;
    Ok(if m % 2 == 1 {
        // (2j-1)!! = 2^j Gamma(j + 1/2) / sqrt(pi)
        let j = ((m + 1) / 2) as f64;
        j * ln2 + ln_gamma_unchecked(j + 0.5) - 0.5 * PI.ln()
    } else {
        let j = (m / 2) as f64;
        j * ln2 + ln_gamma_unchecked(j + 1.0)
    })
}

/// Double factorial `m!!` with `(-1)!! = 0!! = 1`.
pub fn double_factorial(m: i64) -> Result<f64> {
    if m < -1 {
        return Err(Error::domain(format!("double factorial undefined for {m}")));
    }
    if m > 150 {
        return Ok(ln_double_factorial(m)?.exp());
    }
    let mut acc = 1.0;
    let mut j = m;
    while j > 1 {
        acc *= j as f64;
        j -= 2;
    }
    Ok(acc)
}

/// Euler Beta function `B(p, q) = Gamma(p) Gamma(q) / Gamma(p + q)`.
pub fn beta(p: f64, q: f64) -> Result<f64> {
    check_positive("beta", p)?;
    check_positive("beta", q)?;
    Ok((ln_gamma_unchecked(p) + ln_gamma_unchecked(q) - ln_gamma_unchecked(p + q)).exp())
}

/// Arguments of `2F1(a, b; c; z)` restricted to the logarithmic case `c = a + b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyp2F1Args {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub z: f64,
}

impl Hyp2F1Args {
    pub fn new(a: f64, b: f64, c: f64, z: f64) -> Result<Self> {
        check_positive("hypergeometric parameter a", a)?;
        check_positive("hypergeometric parameter b", b)?;
        if (c - (a + b)).abs() > 4.0 * f64::EPSILON * c.abs().max(1.0) {
            return Err(Error::domain(format!("logarithmic case needs c = a + b, got a={a} b={b} c={c}")));
        }
        if !(0.0..1.0).contains(&z) {
            return Err(Error::domain(format!("hypergeometric argument must satisfy 0 <= z < 1, got {z}")));
        }
        Ok(Self { a, b, c, z })
    }

    /// Parameters `((n-2)/4, n/4; (n-1)/2)` of the ball kernel in dimension `n >= 3`.
    pub fn for_dimension(n: usize, z: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::domain(format!("dimension must be at least 3, got {n}")));
        }
        let nf = n as f64;
        Self::new((nf - 2.0) / 4.0, nf / 4.0, (nf - 1.0) / 2.0, z)
    }
}

/// Sums `first + t_1 + t_2 + ...` for a term sequence defined by `next`,
/// stopping once three consecutive terms fall below `1e-16` of the partial sum.
fn sum_series<F>(context: &'static str, first: f64, mut term: f64, mut next: F) -> Result<f64>
where
    F: FnMut(usize, f64) -> f64,
{
    let mut sum = first;
    let mut small = 0;
    for k in 0..SERIES_TERM_CAP {
        sum += term;
        if term.abs() <= 1e-16 * sum.abs() {
            small += 1;
            if small == 3 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
        term = next(k, term);
    }
    Err(Error::NotConverged { context, partial: sum })
}

/// Direct Gauss series `sum_k (a)_k (b)_k / ((c)_k k!) z^k` for general
/// parameters and `|z| < 1`.
pub fn hyp2f1_series(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if !(z.abs() < 1.0) {
        return Err(Error::domain(format!("Gauss series needs |z| < 1, got {z}")));
    }
    if c <= 0.0 && c.fract() == 0.0 {
        return Err(Error::domain(format!("c must not be a non-positive integer, got {c}")));
    }
    let t1 = a * b / c * z;
    sum_series("hypergeometric Gauss series", 1.0, t1, |k, t| {
        let k = (k + 1) as f64;
        t * (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z
    })
}

fn series_minus_one(args: &Hyp2F1Args) -> Result<f64> {
    let Hyp2F1Args { a, b, c, z } = *args;
    let t1 = a * b / c * z;
    sum_series("hypergeometric Gauss series", 0.0, t1, |k, t| {
        let k = (k + 1) as f64;
        t * (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z
    })
}

/// Logarithmic connection formula around `z = 1` for `c = a + b`:
///
/// `F = Gamma(c)/(Gamma(a)Gamma(b)) sum_n (a)_n (b)_n/(n!)^2
///      [2 psi(n+1) - psi(a+n) - psi(b+n) - ln(1-z)] (1-z)^n`.
///
/// Valid on `0 < z < 1`; converges geometrically in `1 - z`.
pub fn hyp2f1_connection(args: &Hyp2F1Args) -> Result<f64> {
    let Hyp2F1Args { a, b, c, z } = *args;
    if !(z > 0.0) {
        return Err(Error::domain(format!("connection formula needs 0 < z < 1, got {z}")));
    }
    let w = 1.0 - z;
    let ln_w = w.ln();
    let prefactor = (ln_gamma_unchecked(c) - ln_gamma_unchecked(a) - ln_gamma_unchecked(b)).exp();

    let mut coef = 1.0;
    let mut psi_one = -EULER_GAMMA;
    let mut psi_a = digamma_unchecked(a);
    let mut psi_b = digamma_unchecked(b);
    let mut sum = 0.0;
    let mut small = 0;
    for n in 0..SERIES_TERM_CAP {
        let term = coef * (2.0 * psi_one - psi_a - psi_b - ln_w);
        sum += term;
        if term.abs() <= 1e-16 * sum.abs() {
            small += 1;
            if small == 3 {
                return Ok(prefactor * sum);
            }
        } else {
            small = 0;
        }
        let nf = n as f64;
        coef *= (a + nf) * (b + nf) / ((nf + 1.0) * (nf + 1.0)) * w;
        psi_one += 1.0 / (nf + 1.0);
        psi_a += 1.0 / (a + nf);
        psi_b += 1.0 / (b + nf);
    }
    Err(Error::NotConverged { context: "hypergeometric connection formula", partial: prefactor * sum })
}

/// `2F1(a, b; a + b; z)` for `0 <= z < 1`.
pub fn hyp2f1_logcase(args: &Hyp2F1Args) -> Result<f64> {
    if args.z <= Z_CROSSOVER {
        Ok(1.0 + series_minus_one(args)?)
    } else {
        hyp2f1_connection(args)
    }
}

/// `2F1(a, b; a + b; z) - 1`, summed from the first series term so small
/// arguments keep their relative accuracy.
pub fn hyp2f1_logcase_minus_one(args: &Hyp2F1Args) -> Result<f64> {
    if args.z <= Z_CROSSOVER {
        series_minus_one(args)
    } else {
        Ok(hyp2f1_connection(args)? - 1.0)
    }
}

/// Kernel factor `2F1((n-2)/4, n/4; (n-1)/2; z)` used inside quadrature
/// integrands. Returns NaN on failure so the enclosing integral reports it.
pub(crate) fn ball_hyp(n: usize, z: f64) -> f64 {
    Hyp2F1Args::for_dimension(n, z.clamp(0.0, 1.0 - f64::EPSILON))
        .and_then(|args| hyp2f1_logcase(&args))
        .unwrap_or(f64::NAN)
}

/// Same as [`ball_hyp`] minus one.
pub(crate) fn ball_hyp_minus_one(n: usize, z: f64) -> f64 {
    Hyp2F1Args::for_dimension(n, z.clamp(0.0, 1.0 - f64::EPSILON))
        .and_then(|args| hyp2f1_logcase_minus_one(&args))
        .unwrap_or(f64::NAN)
}
