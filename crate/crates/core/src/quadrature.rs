//! Deterministic quadrature: Gauss-Legendre rules, adaptive bisection with
//! caller-supplied breakpoints, and integration over the unit sphere with
//! respect to the normalized surface measure.

use std::cell::Cell;
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::specfun::ln_gamma_unchecked;
use crate::{Error, Result};

/// Maximum bisection depth of a single panel.
pub const MAX_DEPTH: u32 = 30;

/// Hard cap on the number of live panels of one adaptive integral.
pub const MAX_PANELS: usize = 50_000;

/// Relative doubling gap under which [`sphere_integral`] reports convergence.
pub const SPHERE_REL_TOL: f64 = 1e-8;

/// Refinement level of [`sphere_integral`] that gives 128 polar by 256
/// azimuthal nodes per level.
pub const DEFAULT_SPHERE_REFINEMENT: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub order: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    /// Applies the rule on `[a, b]`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        half * self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(mid + half * x)).sum::<f64>()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Absolute and relative stopping tolerance. The adaptive driver stops once
/// the summed panel error is below `max(abs, rel * sum |panel value|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub fn absolute(abs: f64) -> Self {
        Self { abs, rel: 0.0 }
    }

    pub fn relative(rel: f64) -> Self {
        Self { abs: 0.0, rel }
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre_rule(order: usize) -> Result<QuadratureRule> {
    if !(1..=512).contains(&order) {
        return Err(Error::domain(format!("Gauss-Legendre order must be in 1..=512, got {order}")));
    }
    let m = order;
    let mf = m as f64;
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (mf + 0.5)).cos();
        let mut dp = 0.0;
        for iter in 0..100 {
            let (p, d) = legendre_with_derivative(m, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 || iter == 99 {
                dp = legendre_with_derivative(m, x).1;
                break;
            }
        }
        if m % 2 == 1 && i == m / 2 {
            x = 0.0;
            dp = legendre_with_derivative(m, 0.0).1;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[m - 1 - i] = x;
        nodes[i] = -x;
        weights[m - 1 - i] = w;
        weights[i] = w;
    }
    Ok(QuadratureRule { order, nodes, weights })
}

fn legendre_with_derivative(m: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if m == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=m {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = m as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn cached_rule(order: usize) -> &'static QuadratureRule {
    static G16: OnceLock<QuadratureRule> = OnceLock::new();
    static G32: OnceLock<QuadratureRule> = OnceLock::new();
    let cell = match order {
        16 => &G16,
        32 => &G32,
        _ => unreachable!("only the adaptive pair is cached"),
    };
    cell.get_or_init(|| gauss_legendre_rule(order).expect("valid order"))
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    abs_value: f64,
    depth: u32,
}

#[derive(Debug, PartialEq)]
struct HeapEntry {
    error: f64,
    seq: usize,
    index: usize,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error).then_with(|| other.seq.cmp(&self.seq))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn eval_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, depth: u32) -> Result<Panel> {
    let hi = cached_rule(32);
    let lo = cached_rule(16);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut value = 0.0;
    let mut abs_value = 0.0;
    for (x, w) in hi.nodes.iter().zip(&hi.weights) {
        let fx = f(mid + half * x);
        value += w * fx;
        abs_value += w * fx.abs();
    }
    let coarse: f64 = lo.nodes.iter().zip(&lo.weights).map(|(x, w)| w * f(mid + half * x)).sum();
    value *= half;
    abs_value *= half;
    let error = (value - half * coarse).abs();
    if !value.is_finite() || !error.is_finite() {
        return Err(Error::domain(format!("integrand is not finite on [{a}, {b}]")));
    }
    Ok(Panel { a, b, value, error, abs_value, depth })
}

const PANEL_EVALS: usize = 48;

/// Adaptive Gauss-Legendre integration of `f` over `[a, b]` to absolute
/// tolerance `tol`.
///
/// The interval is first split at every breakpoint inside `(a, b)`; the panel
/// with the largest `|G32 - G16|` is then bisected until the summed estimate
/// meets `tol` or every panel reaches depth [`MAX_DEPTH`].
///
/// Interior kinks must be passed as breakpoints: on a panel straddling one the
/// two Gauss rules can agree by accident and the panel is accepted early.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
    breakpoints: &[f64],
) -> Result<QuadratureResult> {
    integrate_adaptive_with(f, a, b, Tolerance::absolute(tol), breakpoints, MAX_DEPTH)
}

/// [`integrate_adaptive`] with an explicit mixed tolerance and depth limit.
/// Breakpoints outside the open interval are ignored.
pub fn integrate_adaptive_with<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: Tolerance,
    breakpoints: &[f64],
    max_depth: u32,
) -> Result<QuadratureResult> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain(format!("integration interval [{a}, {b}] is empty or not finite")));
    }
    let mut cuts: Vec<f64> = breakpoints.iter().copied().filter(|&x| x > a && x < b).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut edges = Vec::with_capacity(cuts.len() + 2);
    edges.push(a);
    edges.extend(cuts);
    edges.push(b);

    let mut panels = Vec::with_capacity(64);
    let mut heap = BinaryHeap::new();
    let mut seq = 0;
    for w in edges.windows(2) {
        let p = eval_panel(&f, w[0], w[1], 0)?;
        heap.push(HeapEntry { error: p.error, seq, index: panels.len() });
        seq += 1;
        panels.push(p);
    }
    let mut evaluations = panels.len() * PANEL_EVALS;

    let threshold = |panels: &[Panel]| {
        let abs_sum: f64 = panels.iter().map(|p| p.abs_value).sum();
        let err: f64 = panels.iter().map(|p| p.error).sum();
        let target = tol.abs.max(tol.rel * abs_sum);
        let floor = 50.0 * f64::EPSILON * abs_sum;
        (err, target, floor)
    };

    let mut running_err: f64 = panels.iter().map(|p| p.error).sum();
    let mut running_abs: f64 = panels.iter().map(|p| p.abs_value).sum();
    loop {
        if heap.is_empty() || panels.len() >= MAX_PANELS {
            break;
        }
        let bound = tol.abs.max(tol.rel * running_abs).max(50.0 * f64::EPSILON * running_abs);
        if running_err <= 1.01 * bound {
            // running sums drift; confirm with an exact pass before stopping
            let (err, target, floor) = threshold(&panels);
            running_err = err;
            if err <= target || err <= floor {
                break;
            }
        }
        let entry = heap.pop().expect("heap checked non-empty");
        let p = panels[entry.index];
        if p.depth >= max_depth {
            continue;
        }
        let mid = 0.5 * (p.a + p.b);
        if !(mid > p.a && mid < p.b) {
            continue;
        }
        let left = eval_panel(&f, p.a, mid, p.depth + 1)?;
        let right = eval_panel(&f, mid, p.b, p.depth + 1)?;
        evaluations += 2 * PANEL_EVALS;
        running_err += left.error + right.error - p.error;
        running_abs += left.abs_value + right.abs_value - p.abs_value;
        panels[entry.index] = left;
        heap.push(HeapEntry { error: left.error, seq, index: entry.index });
        seq += 1;
        heap.push(HeapEntry { error: right.error, seq, index: panels.len() });
        seq += 1;
        panels.push(right);
    }

    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value: f64 = panels.iter().map(|p| p.value).sum();
    let (error_estimate, target, _) = threshold(&panels);
    Ok(QuadratureResult { value, error_estimate, evaluations, converged: error_estimate <= target })
}

/// Normalization constant of `sin^{m-2}(theta) d theta` on `S^{m-1}`:
/// `Gamma(m/2) / (sqrt(pi) Gamma((m-1)/2))`.
pub fn polar_normalization(m: usize) -> f64 {
    let mf = m as f64;
    (ln_gamma_unchecked(mf / 2.0) - 0.5 * PI.ln() - ln_gamma_unchecked((mf - 1.0) / 2.0)).exp()
}

struct SphereGrid {
    /// `(theta, weight)` with `sin^{m-2}` and normalization folded in, one list per level
    /// from `S^{n-1}` down to `S^2`.
    polar: Vec<Vec<(f64, f64)>>,
    azimuth: usize,
}

impl SphereGrid {
    fn new(n: usize, refinement: usize) -> Result<Self> {
        let half = gauss_legendre_rule(4 * refinement)?;
        let mut polar = Vec::new();
        for m in (3..=n).rev() {
            let c = polar_normalization(m);
            let mut level = Vec::with_capacity(2 * half.order);
            for (lo, hi) in [(0.0, 0.5 * PI), (0.5 * PI, PI)] {
                let mid = 0.5 * (lo + hi);
                let h = 0.5 * (hi - lo);
                for (x, w) in half.nodes.iter().zip(&half.weights) {
                    let theta: f64 = mid + h * x;
                    level.push((theta, c * h * w * theta.sin().powi(m as i32 - 2)));
                }
            }
            polar.push(level);
        }
        Ok(Self { polar, azimuth: 16 * refinement })
    }

    fn integrate<G: Fn(&[f64]) -> f64>(&self, g: &G, n: usize) -> (f64, usize) {
        let mut point = vec![0.0; n];
        let mut count = 0;
        let value = self.level(g, 0, 1.0, &mut point, &mut count);
        (value, count)
    }

    fn level<G: Fn(&[f64]) -> f64>(
        &self,
        g: &G,
        depth: usize,
        scale: f64,
        point: &mut [f64],
        count: &mut usize,
    ) -> f64 {
        if depth == self.polar.len() {
            let n = point.len();
            let inv = 1.0 / self.azimuth as f64;
            let mut acc = 0.0;
            for j in 0..self.azimuth {
                let phi = 2.0 * PI * j as f64 * inv;
                point[n - 2] = scale * phi.cos();
                point[n - 1] = scale * phi.sin();
                acc += g(point);
            }
            *count += self.azimuth;
            return acc * inv;
        }
        let mut acc = 0.0;
        for &(theta, w) in &self.polar[depth] {
            point[depth] = scale * theta.cos();
            acc += w * self.level(g, depth + 1, scale * theta.sin(), point, count);
        }
        acc
    }
}

/// Integral of `g` over `S^{n-1}` against the normalized surface measure.
///
/// Uses the recursive decomposition `xi = (cos theta, sin theta * omega)`: each
/// polar level is a pair of Gauss-Legendre panels (one per hemisphere) with
/// `4 * refinement` nodes each, the base circle a `16 * refinement` point
/// trapezoid. The error estimate is the gap to the same rule at half the
/// refinement.
pub fn sphere_integral<G: Fn(&[f64]) -> f64>(g: G, n: usize, refinement: usize) -> Result<QuadratureResult> {
    if n < 2 {
        return Err(Error::domain(format!("sphere dimension must be at least 2, got {n}")));
    }
    if refinement < 2 {
        return Err(Error::domain("sphere refinement must be at least 2"));
    }
    let fine = SphereGrid::new(n, refinement)?;
    let coarse = SphereGrid::new(n, refinement / 2)?;
    let (value, e1) = fine.integrate(&g, n);
    let (rough, e2) = coarse.integrate(&g, n);
    let error_estimate = (value - rough).abs();
    Ok(QuadratureResult {
        value,
        error_estimate,
        evaluations: e1 + e2,
        converged: value.is_finite() && error_estimate <= SPHERE_REL_TOL * value.abs().max(1.0),
    })
}

/// A straight line `a xi1 + b xi2 = c` in the coordinate plane of the first two
/// sphere coordinates, across which the integrand has a kink or jump.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinkLine {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl KinkLine {
    fn vertical(&self) -> bool {
        self.b.abs() <= 1e-300_f64.max(1e-15 * self.a.abs())
    }

    /// Polar angles `theta1` where the line meets the unit circle (or, for a
    /// vertical line, where `xi1` equals its abscissa).
    fn outer_breaks(&self, out: &mut Vec<f64>) {
        let mut push = |xi: f64| {
            if xi > -1.0 && xi < 1.0 {
                out.push(xi.acos());
            }
        };
        if self.vertical() {
            if self.a != 0.0 {
                push(self.c / self.a);
            }
            return;
        }
        let r2 = self.a * self.a + self.b * self.b;
        let slack = r2 - self.c * self.c;
        if slack <= 0.0 {
            return;
        }
        let root = self.b.abs() * slack.sqrt();
        push((self.a * self.c + root) / r2);
        push((self.a * self.c - root) / r2);
    }

    fn inner_break(&self, theta1: f64) -> Option<f64> {
        if self.vertical() {
            return None;
        }
        let s = theta1.sin();
        if s <= 0.0 {
            return None;
        }
        let u = (self.c - self.a * theta1.cos()) / (self.b * s);
        (u > -1.0 && u < 1.0).then(|| u.acos())
    }
}

/// Integral over `S^{n-1}` (`n >= 3`, normalized measure) of a function of the
/// first two coordinates only, `g(xi1, xi2)`.
///
/// Reduces exactly to `c_n c_{n-1} int sin^{n-2} t1 int sin^{n-3} t2
/// g(cos t1, sin t1 cos t2) dt2 dt1` and integrates both levels adaptively,
/// splitting at every crossing of the supplied kink lines.
pub fn planar_sphere_integral<G: Fn(f64, f64) -> f64>(
    g: G,
    n: usize,
    tol: Tolerance,
    kinks: &[KinkLine],
) -> Result<QuadratureResult> {
    if n < 3 {
        return Err(Error::domain(format!("planar sphere integral needs n >= 3, got {n}")));
    }
    let c_outer = polar_normalization(n);
    let c_inner = polar_normalization(n - 1);
    let mut outer_breaks = vec![0.5 * PI];
    for k in kinks {
        k.outer_breaks(&mut outer_breaks);
    }
    let inner_evals = Cell::new(0usize);
    let inner_err = Cell::new(0.0f64);
    let inner_ok = Cell::new(true);
    let failure: Cell<Option<Error>> = Cell::new(None);

    let outer = |t1: f64| -> f64 {
        let (s1, x1) = (t1.sin(), t1.cos());
        let breaks: Vec<f64> = kinks.iter().filter_map(|k| k.inner_break(t1)).collect();
        let inner = integrate_adaptive_with(
            |t2: f64| g(x1, s1 * t2.cos()) * t2.sin().powi(n as i32 - 3),
            0.0,
            PI,
            tol,
            &breaks,
            MAX_DEPTH,
        );
        match inner {
            Ok(r) => {
                inner_evals.set(inner_evals.get() + r.evaluations);
                inner_err.set(inner_err.get().max(r.error_estimate));
                if !r.converged {
                    inner_ok.set(false);
                }
                c_outer * c_inner * s1.powi(n as i32 - 2) * r.value
            }
            Err(e) => {
                failure.set(Some(e));
                f64::NAN
            }
        }
    };
    let result = integrate_adaptive_with(outer, 0.0, PI, tol, &outer_breaks, MAX_DEPTH);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let r = result?;
    Ok(QuadratureResult {
        value: r.value,
        error_estimate: r.error_estimate + c_inner * PI * inner_err.get(),
        evaluations: inner_evals.get(),
        converged: r.converged && inner_ok.get(),
    })
}
