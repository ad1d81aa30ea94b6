//! End-to-end acceptance checks, one PASS/FAIL line per criterion.
//! Runs with its own harness so the lines are always printed.

use std::f64::consts::{FRAC_PI_2, LN_2, PI};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use sharpgrad::constants::{
    center_constant, directional_constant, gradient_constant, halfspace_constant, radial_constant_closed3,
};
use sharpgrad::identities::lemma4_components;
use sharpgrad::majorant3::{
    coefficient_a, conjecture_chain, lemma6_verify, octic_identity, t_prime_at_one, t_prime_series,
};
use sharpgrad::oracle::{
    constant_oracle_direct, constant_oracle_moebius, extremal_derivative, verify_inner_integral, DEFAULT_REFINEMENT,
};
use sharpgrad::specfun::{hyp2f1_connection, hyp2f1_logcase, hyp2f1_series, log_gamma, Hyp2F1Args};
use sharpgrad::verify::{
    angle_grid, radius_grid_coarse, run_suite, Suite, VerifyOptions, GRID_ANGLES, GRID_DIMENSIONS, GRID_RADII,
};
use sharpgrad::ProblemPoint;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn sharp_bound() -> Check {
    let mut worst = 0f64;
    for rho in GRID_RADII {
        let g = gradient_constant(3, rho, 1e-11).map_err(e)?;
        let closed = radial_constant_closed3(rho).map_err(e)?;
        let r = rel(g.estimate.value, closed);
        worst = worst.max(r);
        ensure(r <= 1e-6, || format!("rho={rho}: {} vs {closed}", g.estimate.value))?;
        ensure(g.argmax_alpha <= 1e-4, || format!("rho={rho}: argmax {}", g.argmax_alpha))?;
    }
    Ok(format!("max rel gap {worst:.1e}"))
}

fn criterion_grid() -> Vec<(usize, f64, f64)> {
    let mut v = Vec::new();
    for n in GRID_DIMENSIONS {
        for rho in GRID_RADII {
            for alpha in GRID_ANGLES {
                v.push((n, rho, alpha));
            }
        }
    }
    v
}

fn oracle_equivalence() -> Check {
    let gaps: Vec<Result<f64, String>> = criterion_grid()
        .par_iter()
        .map(|&(n, rho, alpha)| {
            let pt = ProblemPoint::new(n, rho, alpha).map_err(e)?;
            let a = directional_constant(&pt, 1e-12).map_err(e)?.value;
            let b = constant_oracle_direct(&pt, DEFAULT_REFINEMENT).map_err(e)?.value;
            let c = constant_oracle_moebius(&pt, DEFAULT_REFINEMENT).map_err(e)?.value;
            let g = rel(a, b).max(rel(a, c)).max(rel(b, c));
            ensure(g <= 1e-6, || format!("n={n} rho={rho} alpha={alpha}: {a} {b} {c}"))?;
            Ok(g)
        })
        .collect();
    let mut worst = 0f64;
    for g in gaps {
        worst = worst.max(g?);
    }
    Ok(format!("80 points, max pairwise rel gap {worst:.1e}"))
}

fn identity_suites() -> Check {
    let opts = VerifyOptions::default();
    let mut count = 0;
    for suite in [Suite::Lemma1, Suite::Lemma3, Suite::Lemma4, Suite::Lemma5] {
        for c in run_suite(suite, &opts).map_err(e)? {
            ensure(c.passed && c.gap <= 1e-8, || format!("{} {}: gap {:e}", c.suite, c.case, c.gap))?;
            count += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..12 {
        let n = rng.gen_range(3..=6);
        let rho = rng.gen_range(0.0..0.95);
        let alpha = rng.gen_range(0.0..FRAC_PI_2);
        let x = rng.gen_range(-0.99..0.99);
        let (lhs, rhs) = verify_inner_integral(n, rho, alpha, x).map_err(e)?;
        ensure((lhs - rhs).abs() <= 1e-8, || format!("inner n={n} rho={rho} alpha={alpha} x={x}: {lhs} vs {rhs}"))?;
        count += 1;
    }
    Ok(format!("{count} cases"))
}

fn elementary_integrals() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0f64;
    for _ in 0..10 {
        let rho: f64 = rng.gen_range(0.0..0.99);
        let (x2, y2) = lemma4_components(3, rho, 1e-13).map_err(e)?;
        let gx = (x2.value - (4.0 * rho * rho / 15.0 + 2.0 / 3.0)).abs();
        let gy = (y2.value - (4.0 / 3.0 - 4.0 * rho * rho / 15.0)).abs();
        worst = worst.max(gx).max(gy);
        ensure(gx <= 1e-10 && gy <= 1e-10, || format!("rho={rho}: gaps {gx:e} {gy:e}"))?;
    }
    Ok(format!("max gap {worst:.1e}"))
}

fn majorant_chain() -> Check {
    let grid = angle_grid(33);
    let reports: Vec<_> = radius_grid_coarse().par_iter().map(|&rho| conjecture_chain(rho, &grid)).collect();
    let mut links = 0;
    for rep in reports {
        let rep = rep.map_err(e)?;
        for l in &rep.links {
            links += 1;
            ensure(l.slack >= -1e-9, || {
                format!("rho={} alpha={} {}: {} vs {}", rep.rho, l.alpha, l.link, l.lhs, l.rhs)
            })?;
            if l.link == "s1_at_zero" || l.link == "s2_at_zero" {
                ensure(l.lhs.abs() <= 1e-10, || format!("rho={} {} = {:e}", rep.rho, l.link, l.lhs))?;
            }
        }
        ensure(rep.links.iter().any(|l| l.link == "scaled_constant=s_at_zero"), || "missing alpha = 0 link".into())?;
    }
    Ok(format!("{links} links"))
}

fn lemma6() -> Check {
    let mut checked = 0;
    for rho in radius_grid_coarse() {
        for k in 2..=200 {
            let a = coefficient_a(k, rho).map_err(e)?;
            ensure(a.sign < 0, || format!("a_{k}({rho}) = {:e}", a.value))?;
            checked += 1;
        }
    }
    let reports = lemma6_verify(0.5, 200).map_err(e)?;
    for r in &reports {
        let kf = r.k as f64;
        ensure(rel(r.d, r.d_octic) <= 1e-9, || format!("k={}: discriminant {} vs {}", r.k, r.d, r.d_octic))?;
        if r.k <= 10 {
            ensure(r.combination == -98.0 * kf * kf - 7.0 * kf + 21.0, || {
                format!("k={}: combination {}", r.k, r.combination)
            })?;
        }
        ensure(rel(r.l_ratio, r.l_ratio_formula) <= 1e-12, || {
            format!("k={}: ratio {} vs {}", r.k, r.l_ratio, r.l_ratio_formula)
        })?;
    }
    let two = &reports[0];
    ensure(two.k == 2 && two.l_k > two.d_k, || "l_2 <= d_2".into())?;
    ensure((two.l_k - 0.0120536).abs() <= 5e-8, || format!("l_2 = {}", two.l_k))?;
    ensure(rel(two.d_k, 2.0 / 385.0) <= 1e-15, || format!("d_2 = {}", two.d_k))?;
    Ok(format!("{checked} coefficients negative, l_2 = {:.7}", two.l_k))
}

fn lemma7() -> Check {
    let mut worst_series = 0f64;
    let mut worst_octic = 0f64;
    for j in 1..=99 {
        let rho = 0.01 * j as f64;
        let t = t_prime_at_one(rho).map_err(e)?;
        ensure(t >= 0.0, || format!("rho={rho}: T'(1) = {t}"))?;
        let (lhs, rhs) = octic_identity(rho);
        worst_octic = worst_octic.max(rel(lhs, rhs));
        ensure(rel(lhs, rhs) <= 1e-10, || format!("rho={rho}: octic {lhs} vs {rhs}"))?;
        let s = t_prime_series(rho).map_err(e)?;
        worst_series = worst_series.max((s - t).abs());
        ensure((s - t).abs() <= 1e-8, || format!("rho={rho}: series {s} vs {t}"))?;
    }
    Ok(format!("octic rel {worst_octic:.1e}, series gap {worst_series:.1e}"))
}

fn sharpness_witness() -> Check {
    let pt = ProblemPoint::new(3, 0.5, 0.0).map_err(e)?;
    let d = extremal_derivative(&pt, 1e-3, 2 * DEFAULT_REFINEMENT).map_err(e)?;
    let c = radial_constant_closed3(0.5).map_err(e)?;
    ensure(d.value >= 0.999 * c && d.value <= c + 1e-3, || format!("derivative {} vs {c}", d.value))?;
    Ok(format!("derivative {:.9} vs {c:.9}", d.value))
}

fn anchors() -> Check {
    let c3 = center_constant(3).map_err(e)?;
    let c4 = center_constant(4).map_err(e)?;
    let h3 = halfspace_constant(3).map_err(e)?;
    ensure((c3 - 1.5).abs() <= 1e-14, || format!("C(0) n=3: {c3}"))?;
    ensure(rel(c4, 16.0 / (3.0 * PI)) <= 1e-14, || format!("C(0) n=4: {c4}"))?;
    ensure(rel(h3, 4.0 / (3.0 * 3f64.sqrt())) <= 1e-14, || format!("half-space n=3: {h3}"))?;
    for (n, c0) in [(3, c3), (4, c4)] {
        for alpha in [0.0, 0.7, FRAC_PI_2] {
            let v = directional_constant(&ProblemPoint::new(n, 1e-8, alpha).map_err(e)?, 1e-12).map_err(e)?.value;
            ensure((v - c0).abs() <= 1e-6, || format!("n={n} alpha={alpha}: {v} vs {c0}"))?;
        }
    }
    Ok("center and half-space constants".into())
}

fn hypergeometric() -> Check {
    let mut worst = 0f64;
    for n in 3..=8 {
        for i in 0..=30 {
            let z = 0.6 + 0.3 * i as f64 / 30.0;
            let args = Hyp2F1Args::for_dimension(n, z).map_err(e)?;
            let s = hyp2f1_series(args.a, args.b, args.c, z).map_err(e)?;
            let c = hyp2f1_connection(&args).map_err(e)?;
            worst = worst.max(rel(s, c));
            ensure(rel(s, c) <= 1e-10, || format!("n={n} z={z}: {s} vs {c}"))?;
        }
    }
    let lead = (log_gamma(1.0).map_err(e)? - log_gamma(0.25).map_err(e)? - log_gamma(0.75).map_err(e)?).exp();
    let mut prev = f64::INFINITY;
    for k in 2..=10 {
        let w = 10f64.powi(-k);
        let f = hyp2f1_logcase(&Hyp2F1Args::new(0.25, 0.75, 1.0, 1.0 - w).map_err(e)?).map_err(e)?;
        let gap = (f / -w.ln() - lead).abs();
        ensure(gap < prev, || format!("ratio gap not shrinking at 1 - z = {w:e}"))?;
        prev = gap;
        let corrected = f / (6.0 * LN_2 - w.ln());
        ensure(k < 6 || rel(corrected, lead) <= 1e-6, || format!("1 - z = {w:e}: {corrected} vs {lead}"))?;
    }
    Ok(format!("series vs connection {worst:.1e}, blowup constant {lead:.15}"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("sharp bound in R^3", sharp_bound),
        ("representation vs oracles", oracle_equivalence),
        ("identity suites", identity_suites),
        ("elementary integrals", elementary_integrals),
        ("majorant chain", majorant_chain),
        ("coefficient negativity", lemma6),
        ("boundary derivative", lemma7),
        ("sharpness witness", sharpness_witness),
        ("anchor constants", anchors),
        ("hypergeometric evaluator", hypergeometric),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = check();
        let secs = start.elapsed().as_secs_f64();
        match out {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail}; {secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({why}; {secs:.2}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
