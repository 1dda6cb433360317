//! Acceptance suite: one line per criterion, non-zero exit status if any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ellip_core::bergman::{self, EllipsoidParams};
use ellip_core::extremal::{bracket, Bracket, BracketBudget, TangentData};
use ellip_core::metric::MetricAtPoint;
use ellip_core::oracle::{fd_log_hessian, FdConfig, ScalarField};
use ellip_core::yin::{self, center_hsc, d_threshold, tangent_directions, x_grid, CenterCurvatureInput, YinParams};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const P_GRID: [f64; 7] = [0.6, 0.75, 1.0, 1.5, 2.0, 3.0, 5.0];

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into() }
    }
}

type Check = fn() -> Outcome;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn params(p: f64) -> EllipsoidParams {
    EllipsoidParams::new(p).unwrap()
}

fn rel_matrix(a: &MetricAtPoint, b: &MetricAtPoint) -> f64 {
    a.sub(b).max_abs() / a.max_abs().max(b.max_abs())
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn within(start: Instant, limit: Duration) -> (bool, String) {
    let el = start.elapsed();
    (el <= limit, format!("{:.2}s of {}s", el.as_secs_f64(), limit.as_secs()))
}

fn kernel_ball_degeneration() -> Outcome {
    let start = Instant::now();
    let ball = params(1.0);
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        for j in 0..10 {
            let z = Complex64::from_polar(0.7 * i as f64 / 10.0, 0.4 * j as f64);
            let w = Complex64::from_polar(0.7 * j as f64 / 10.0, -0.9 * i as f64);
            let k = bergman::kernel_value(&ball, z, w).unwrap();
            let exact = 2.0 / (PI * PI) * (1.0 - z.norm_sqr() - w.norm_sqr()).powi(-3);
            worst = worst.max(rel(k, exact));
        }
    }
    let (fast, time) = within(start, Duration::from_secs(1));
    Outcome::new(worst <= 1e-12 && fast, format!("max rel err {worst:.2e} on 10x10 grid, {time}"))
}

fn three_path_agreement() -> Outcome {
    let start = Instant::now();
    let cfg = FdConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0002);
    let mut exact_worst: f64 = 0.0;
    let mut fd_worst: f64 = 0.0;
    for p in P_GRID {
        let pts: Vec<_> = (0..200).map(|_| bergman::sample_interior(p, &mut rng)).collect();
        let field = ScalarField::bergman_kernel(p);
        let errs: Vec<(f64, f64)> = pts
            .par_iter()
            .map(|&(z, w)| {
                let s = bergman::metric_symbolic(&params(p), z, w).unwrap();
                let cf = bergman::metric_closed_form(&params(p), z, w).unwrap();
                let fd = fd_log_hessian(&field, z, w, &cfg).unwrap();
                (rel_matrix(&s, &cf), rel_matrix(&s, &fd).max(rel_matrix(&cf, &fd)))
            })
            .collect();
        for (e, f) in errs {
            exact_worst = exact_worst.max(e);
            fd_worst = fd_worst.max(f);
        }
    }
    let (fast, time) = within(start, Duration::from_secs(30));
    Outcome::new(
        exact_worst <= 1e-10 && fd_worst <= 1e-6 && fast,
        format!("symbolic/closed {exact_worst:.2e}, oracle {fd_worst:.2e} over 1400 points, {time}"),
    )
}

fn ricci_slice() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut off: f64 = 0.0;
    for p in P_GRID {
        for t in [0.0, 0.3, -0.3, 0.7, -0.7, 0.95, -0.95] {
            let r = bergman::ricci(&params(p), c(t, 0.0), c(0.0, 0.0)).unwrap();
            let (r11, r22) = bergman::ricci_slice_closed(p, t);
            worst = worst.max(rel(r.g[0][0].re, r11)).max(rel(r.g[1][1].re, r22));
            off = off.max(r.g[0][1].norm()).max(r.g[1][0].norm());
        }
    }
    Outcome::new(worst <= 1e-8 && off <= 1e-9, format!("diagonal rel err {worst:.2e}, |Ric12| {off:.2e}"))
}

fn ratio_discriminator() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut ok = true;
    let mut gaps = Vec::new();
    for p in P_GRID {
        let expected = -(2.0 * p.powi(3) + 10.0 * p * p + 10.0 * p + 5.0) / ((p + 2.0).powi(2) * (2.0 * p + 1.0));
        let (a, b) = bergman::ricci_ratios(&params(p), 0.4).unwrap();
        worst = worst.max((a + 1.0).abs()).max((b - expected).abs());
        let gap = (a - b).abs();
        ok &= if p == 1.0 { gap <= 1e-9 } else { gap > 1e-3 };
        gaps.push(format!("{p}:{gap:.1e}"));
    }
    Outcome::new(worst <= 1e-9 && ok, format!("ratio err {worst:.2e}; gaps {}", gaps.join(" ")))
}

fn hsc_slice() -> Outcome {
    let e1 = [c(1.0, 0.0), c(0.0, 0.0)];
    let e2 = [c(0.0, 0.0), c(1.0, 0.0)];
    let mut worst: f64 = 0.0;
    let mut ok = true;
    let mut at2 = (0.0, 0.0);
    for p in P_GRID {
        let (h1, h2) = bergman::hsc_slice_closed(p);
        let a = bergman::hsc(&params(p), c(0.3, 0.0), c(0.0, 0.0), e1).unwrap();
        let b = bergman::hsc(&params(p), c(0.3, 0.0), c(0.0, 0.0), e2).unwrap();
        worst = worst.max(rel(a, h1)).max(rel(b, h2));
        let gap = (a - b).abs();
        ok &= if p == 1.0 { gap <= 1e-8 } else { gap > 1e-3 };
        if p == 2.0 {
            at2 = (a, b);
        }
    }
    let exact2 = (at2.0 + 0.8).abs() <= 1e-8 && (at2.1 + 0.8125).abs() <= 1e-8;
    Outcome::new(
        worst <= 1e-8 && ok && exact2,
        format!("rel err {worst:.2e}; p=2 gives ({:.10}, {:.10})", at2.0, at2.1),
    )
}

fn star_coefficient_suite() -> Outcome {
    let start = Instant::now();
    let grid = x_grid(1000);
    let dirs = tangent_directions();
    let mut coeff_max = f64::NEG_INFINITY;
    let mut hsc_slack = f64::INFINITY;
    let mut d_dep: f64 = 0.0;
    for (m, n) in [(1, 1), (2, 1), (1, 2)] {
        for p in [0.75, 1.0, 2.0, 3.0] {
            for a in [1.0, 2.0] {
                let yp = YinParams::new(m, n, p, a).unwrap();
                let d = d_threshold(&yp);
                let rep = yin::verify_nonpositivity(&yp, d, &grid).unwrap();
                coeff_max = rep.maxima.iter().copied().fold(coeff_max, f64::max);
                for &x in &grid {
                    for &(dz, dw) in &dirs {
                        let h = center_hsc(&yp, &CenterCurvatureInput { x, dz, dw, d }).unwrap();
                        hsc_slack = hsc_slack.min(h + d);
                        let h2 = center_hsc(&yp, &CenterCurvatureInput { x, dz, dw, d: 2.0 * d + 1.0 }).unwrap();
                        d_dep = d_dep.max((h - h2).abs() / h.abs().max(1.0));
                    }
                }
            }
        }
    }
    let (fast, time) = within(start, Duration::from_secs(60));
    Outcome::new(
        coeff_max <= 1e-12 && hsc_slack >= -1e-9 && d_dep <= 1e-9 && fast,
        format!("max coefficient {coeff_max:.2e}, min(h + D) {hsc_slack:.2e}, D-dependence {d_dep:.2e}, {time}"),
    )
}

fn yin_comparison() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0007);
    let mut ok = true;
    let mut parts = Vec::new();
    for p in [0.75, 2.0, 3.0] {
        let pts: Vec<_> = (0..50).map(|_| bergman::sample_interior(p, &mut rng)).collect();
        for a in [1.0, 2.0] {
            let rep = yin::compare_with_bergman(&YinParams::planar(p, a).unwrap(), &pts).unwrap();
            ok &= rep.pass;
            let mark = if rep.pass { "" } else { " FAIL" };
            parts.push(format!("p={p},a={a}: {:.3e}{mark}", rep.min_eigenvalue));
        }
    }
    let pts: Vec<_> = (0..50).map(|_| bergman::sample_interior(1.0, &mut rng)).collect();
    let ball = yin::YinMetric::new(YinParams::planar(1.0, 1.0).unwrap()).unwrap();
    let bp = EllipsoidParams::new(1.0).unwrap();
    // entry-wise, relative to the metric scale
    let zero = pts
        .iter()
        .map(|&(z, w)| {
            let g = bergman::metric_symbolic(&bp, z, w).unwrap();
            ball.metric(z, w).unwrap().sub(&g).max_abs() / g.max_abs()
        })
        .fold(0.0, f64::max);
    ok &= zero <= 1e-12;
    parts.push(format!("p=1,a=1: |Y-g|/|g| {zero:.1e}"));
    Outcome::new(ok, format!("min eig(Y - g^B): {}", parts.join("; ")))
}

fn bracket_soundness() -> Outcome {
    let budget = BracketBudget::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0008);
    let mut corpus = Vec::new();
    for p in P_GRID {
        for _ in 0..4 {
            let (z, w) = bergman::sample_interior(p, &mut rng);
            let v = [c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)), c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))];
            corpus.push((p, TangentData::new(p, z, w, v).unwrap()));
        }
    }
    let unsound = corpus
        .par_iter()
        .filter(|(p, t)| !bracket(t, &params(*p), &budget).unwrap().is_sound())
        .count();
    let mut origin_err: f64 = 0.0;
    let mut ratio_err: f64 = 0.0;
    for p in P_GRID {
        let expected = [((2.0 * p + 1.0) / p).sqrt(), (2.0 * (p + 2.0) / (p + 1.0)).sqrt()];
        for (k, v) in [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]].into_iter().enumerate() {
            let t = TangentData::new(p, c(0.0, 0.0), c(0.0, 0.0), v).unwrap();
            let b = bracket(&t, &params(p), &budget).unwrap();
            origin_err = origin_err.max((b.lower - 1.0).abs()).max((b.upper - 1.0).abs());
            ratio_err = ratio_err.max((b.bergman_norm / b.upper - expected[k]).abs());
        }
    }
    Outcome::new(
        unsound == 0 && origin_err <= 1e-9 && ratio_err <= 1e-6,
        format!(
            "{unsound} unsound of {} random brackets; origin |bracket - 1| {origin_err:.1e}, ratio err {ratio_err:.1e}",
            corpus.len()
        ),
    )
}

fn equivalence_sweep() -> Outcome {
    let start = Instant::now();
    let budget = BracketBudget::default();
    let p = 2.0;
    let mut ts: Vec<f64> = (0..20).map(|i| 0.95 * i as f64 / 20.0).collect();
    // last decade of boundary distance 1 − t ∈ [0.005, 0.05], geometric
    let decade: Vec<f64> = (0..=10).map(|i| 1.0 - 0.05 * 10f64.powf(-(i as f64) / 10.0)).collect();
    ts.extend(&decade);
    let dirs = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)], [c(0.6, 0.0), c(0.0, 0.8)]];
    let rows: Vec<(usize, f64, Bracket)> = ts
        .par_iter()
        .flat_map(|&t| {
            dirs.par_iter().enumerate().map(move |(k, v)| {
                let td = TangentData::new(p, c(t, 0.0), c(0.0, 0.0), *v).unwrap();
                (k, t, bracket(&td, &params(p), &budget).unwrap())
            })
        })
        .collect();
    let mut c0: f64 = 1.0;
    for (_, _, b) in &rows {
        for r in [b.bergman_norm / b.upper, b.lower / b.bergman_norm] {
            c0 = c0.max(r).max(1.0 / r);
        }
    }
    // power-law trend of each ratio against boundary distance over the last decade
    let mut slope_max: f64 = 0.0;
    for k in 0..dirs.len() {
        for pick in [0, 1] {
            let pts: Vec<(f64, f64)> = rows
                .iter()
                .filter(|(kk, t, _)| *kk == k && *t >= decade[0])
                .map(|(_, t, b)| {
                    let r = if pick == 0 { b.bergman_norm / b.upper } else { b.lower / b.bergman_norm };
                    ((1.0 - t).ln(), r.ln())
                })
                .collect();
            let n = pts.len() as f64;
            let (mx, my) = (pts.iter().map(|q| q.0).sum::<f64>() / n, pts.iter().map(|q| q.1).sum::<f64>() / n);
            let sxy: f64 = pts.iter().map(|q| (q.0 - mx) * (q.1 - my)).sum();
            let sxx: f64 = pts.iter().map(|q| (q.0 - mx).powi(2)).sum();
            slope_max = slope_max.max((sxy / sxx).abs());
        }
    }
    let (fast, time) = within(start, Duration::from_secs(300));
    Outcome::new(
        c0 <= 10.0 && slope_max <= 0.05 && fast,
        format!("C0 = {c0:.4} over {} brackets, last-decade log-log slope {slope_max:.1e}, {time}", rows.len()),
    )
}

fn ball_chain() -> Outcome {
    let budget = BracketBudget::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0010);
    let corpus: Vec<TangentData> = (0..20)
        .map(|_| {
            let (z, w) = bergman::sample_interior(1.0, &mut rng);
            let v = [c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)), c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))];
            TangentData::new(1.0, z, w, v).unwrap()
        })
        .collect();
    let yin_ball = YinParams::planar(1.0, 1.0).unwrap();
    let stats: Vec<(f64, f64, f64)> = corpus
        .par_iter()
        .map(|t| {
            let b = bracket(t, &params(1.0), &budget).unwrap();
            let y = yin::yin_metric(&yin_ball, t.z, t.w).unwrap().norm_sq(t.v).sqrt();
            (b.upper / b.lower, b.bergman_norm / b.midpoint() / 3f64.sqrt(), y / b.bergman_norm)
        })
        .collect();
    let spread = stats.iter().map(|s| s.0).fold(0.0, f64::max);
    let dev = stats.iter().map(|s| (s.1 - 1.0).abs()).fold(0.0, f64::max);
    let yin_dev = stats.iter().map(|s| (s.2 - 1.0).abs()).fold(0.0, f64::max);
    Outcome::new(
        spread <= 1.02 && dev <= 0.02 && yin_dev <= 1e-9,
        format!("max upper/lower {spread:.5}, max |sqrt(g)/(sqrt(3) chi) - 1| {dev:.2e}, |sqrt(Y)/sqrt(g) - 1| {yin_dev:.1e}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 10] = [
        ("kernel ball degeneration", kernel_ball_degeneration),
        ("three-path metric agreement", three_path_agreement),
        ("Ricci tensor on the slice", ricci_slice),
        ("Ricci ratio discriminator", ratio_discriminator),
        ("holomorphic sectional curvature on the slice", hsc_slice),
        ("star-coefficient sign suite", star_coefficient_suite),
        ("Yin metric dominates the Bergman metric", yin_comparison),
        ("bracket soundness and origin exactness", bracket_soundness),
        ("uniform equivalence sweep", equivalence_sweep),
        ("ball metric chain", ball_chain),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let out = check();
        let tag = if out.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {tag}  {name}: {}", i + 1, out.detail);
        if !out.pass {
            failed.push(i + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 10 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}
