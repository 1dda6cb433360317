//! Row-oriented commands: `eval`, `sweep` and `compare`.

use anyhow::{bail, Result};
use ellip_core::bergman::{self, EllipsoidParams};
use ellip_core::extremal::{bracket, BracketBudget, TangentData};
use ellip_core::metric::MetricAtPoint;
use ellip_core::yin::{YinMetric, YinParams};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::parse::PathSpec;
use crate::report::{Cell, Report};

/// Column groups of a point row.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Groups {
    pub metric: bool,
    pub ricci: bool,
    pub ratios: bool,
    pub hsc: bool,
    pub bracket: bool,
    pub yin: bool,
}

/// Shared evaluation context.
pub struct Ctx {
    pub p: f64,
    pub a: f64,
    pub tol: f64,
    pub params: EllipsoidParams,
    yin: Option<YinMetric>,
}

impl Ctx {
    pub fn new(p: f64, a: f64, tol: f64) -> Result<Self> {
        let params = EllipsoidParams::new(p)?;
        let yin = if p > 0.5 { Some(YinMetric::new(YinParams::planar(p, a)?)?) } else { None };
        Ok(Ctx { p, a, tol, params, yin })
    }

    /// Yin metric, available for `p > 1/2`.
    pub fn yin(&self) -> Result<&YinMetric> {
        match &self.yin {
            Some(y) => Ok(y),
            None => bail!("the Yin metric requires p > 1/2, got p = {}", self.p),
        }
    }

    pub fn sample_points(&self, count: usize, seed: u64) -> Vec<(Complex64, Complex64)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count).map(|_| bergman::sample_interior(self.p, &mut rng)).collect()
    }
}

const E1: [Complex64; 2] = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
const E2: [Complex64; 2] = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];

/// Entry-wise gap `max|a − b| / max(1, max|b|)`.
pub fn relative_gap(a: &MetricAtPoint, b: &MetricAtPoint) -> f64 {
    a.sub(b).max_abs() / b.max_abs().max(1.0)
}

fn metric_cells(g: &MetricAtPoint) -> [f64; 4] {
    [g.g[0][0].re, g.g[0][1].re, g.g[0][1].im, g.g[1][1].re]
}

pub fn columns(groups: Groups) -> Vec<String> {
    let mut cols: Vec<&str> = vec!["index", "z_re", "z_im", "w_re", "w_im"];
    if groups.metric {
        cols.extend(["metric.g11", "metric.g12_re", "metric.g12_im", "metric.g22", "metric.det"]);
    }
    if groups.ricci {
        cols.extend(["ricci.r11", "ricci.r12_re", "ricci.r12_im", "ricci.r22"]);
    }
    if groups.ricci || groups.ratios {
        cols.extend(["ricci.ratio11", "ricci.ratio22"]);
    }
    if groups.hsc {
        cols.extend(["hsc.z", "hsc.w", "hsc.v"]);
    }
    if groups.bracket {
        cols.extend([
            "bracket.lower",
            "bracket.upper",
            "bracket.bergman_norm",
            "bracket.ratio",
            "bracket.lower_chart",
            "bracket.upper_chart",
        ]);
    }
    if groups.yin {
        cols.extend(["yin.y11", "yin.y12_re", "yin.y12_im", "yin.y22", "yin.min_eig_diff"]);
    }
    cols.extend(["check.metric_gap", "check.pass"]);
    cols.into_iter().map(String::from).collect()
}

pub fn record_provenance(report: &mut Report) {
    for col in report.columns.clone() {
        let source = match col.split('.').next() {
            Some("metric" | "ricci" | "hsc" | "yin") => "symbolic",
            Some("bracket") if col == "bracket.bergman_norm" => "symbolic",
            Some("bracket") => "certified",
            Some("check") => "closed-form",
            _ => continue,
        };
        report.provenance(&col, source);
    }
}

/// One row; the second value names the failed check, if any.
pub fn point_row(
    ctx: &Ctx,
    index: usize,
    z: Complex64,
    w: Complex64,
    dir: [Complex64; 2],
    groups: Groups,
) -> Result<(Vec<Cell>, Option<String>)> {
    let g = bergman::metric_symbolic(&ctx.params, z, w)?;
    let closed = bergman::metric_closed_form(&ctx.params, z, w)?;
    let gap = relative_gap(&g, &closed);
    let mut failure = (gap > ctx.tol || !g.is_positive_definite())
        .then(|| format!("row {index}: closed-form and symbolic metrics differ by {gap:e} (tol {:e})", ctx.tol));

    let mut row: Vec<Cell> = vec![Cell::Int(index as u64), z.re.into(), z.im.into(), w.re.into(), w.im.into()];
    if groups.metric {
        row.extend(metric_cells(&g).map(Cell::Num));
        row.push(g.det().re.into());
    }
    if groups.ricci || groups.ratios {
        let ric = bergman::ricci(&ctx.params, z, w)?;
        if groups.ricci {
            row.extend(metric_cells(&ric).map(Cell::Num));
        }
        row.push((ric.g[0][0].re / g.g[0][0].re).into());
        row.push((ric.g[1][1].re / g.g[1][1].re).into());
    }
    if groups.hsc {
        for xi in [E1, E2, dir] {
            row.push(bergman::hsc(&ctx.params, z, w, xi)?.into());
        }
    }
    if groups.bracket {
        let t = TangentData::new(ctx.p, z, w, dir)?;
        let b = bracket(&t, &ctx.params, &BracketBudget::default())?;
        row.extend([b.lower, b.upper, b.bergman_norm, b.bergman_norm / b.midpoint()].map(Cell::Num));
        row.push(b.lower_chart.as_str().into());
        row.push(b.upper_chart.as_str().into());
        if failure.is_none() && !b.is_sound() {
            failure = Some(format!("row {index}: bracket lower {} exceeds upper {}", b.lower, b.upper));
        }
    }
    if groups.yin {
        let y = ctx.yin()?.metric(z, w)?;
        row.extend(metric_cells(&y).map(Cell::Num));
        row.push(y.sub(&g).min_eigenvalue().into());
    }
    row.push(gap.into());
    row.push(failure.is_none().into());
    Ok((row, failure))
}

fn fill(report: &mut Report, rows: Vec<(Vec<Cell>, Option<String>)>) {
    for (row, failure) in rows {
        report.push_row(row);
        if let Some(f) = failure {
            report.fail(f);
        }
    }
}

fn base_report(command: &str, ctx: &Ctx) -> Report {
    let mut r = Report::new(command);
    r.param("p", ctx.p);
    r.param("a", ctx.a);
    r.param("tol", ctx.tol);
    r
}

pub fn eval(ctx: &Ctx, point: [Complex64; 2], dir: [Complex64; 2]) -> Result<Report> {
    let convex = ctx.p > 0.5;
    let groups = Groups { metric: true, ricci: true, ratios: true, hsc: true, bracket: convex, yin: convex };
    let mut report = base_report("eval", ctx);
    report.set_columns(columns(groups));
    record_provenance(&mut report);
    let row = point_row(ctx, 0, point[0], point[1], dir, groups)?;
    fill(&mut report, vec![row]);
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Emit {
    Ratios,
    Metric,
    All,
}

pub fn sweep(ctx: &Ctx, path: &PathSpec, count: usize, emit: Emit, dir: Option<[Complex64; 2]>) -> Result<Report> {
    if count == 0 {
        bail!("--count must be positive");
    }
    let convex = ctx.p > 0.5;
    let groups = match emit {
        Emit::Ratios => Groups { ratios: true, ..Groups::default() },
        Emit::Metric => Groups { metric: true, ..Groups::default() },
        Emit::All => Groups {
            metric: true,
            ricci: true,
            ratios: true,
            hsc: true,
            bracket: convex && dir.is_some(),
            yin: convex,
        },
    };
    let pts = path.points(count);
    for &(_, z, w) in &pts {
        ctx.params.point(z, w)?;
    }
    let dir = dir.unwrap_or(E1);
    let rows = pts
        .par_iter()
        .enumerate()
        .map(|(i, &(_, z, w))| point_row(ctx, i, z, w, dir, groups))
        .collect::<Result<Vec<_>>>()?;
    let mut report = base_report("sweep", ctx);
    report.param("count", Cell::Int(count as u64));
    report.set_columns(columns(groups));
    record_provenance(&mut report);
    fill(&mut report, rows);
    Ok(report)
}

/// Yin versus Bergman at seeded random points; asserts `Y − g^B ≥ −tol`.
pub fn compare(ctx: &Ctx, count: usize, seed: u64) -> Result<Report> {
    ctx.yin()?;
    let groups = Groups { metric: true, yin: true, ..Groups::default() };
    let pts = ctx.sample_points(count, seed);
    let rows = pts
        .par_iter()
        .enumerate()
        .map(|(i, &(z, w))| {
            let (mut row, mut failure) = point_row(ctx, i, z, w, E1, groups)?;
            let min_eig = match row[row.len() - 3] {
                Cell::Num(v) => v,
                _ => unreachable!("yin.min_eig_diff is numeric"),
            };
            if failure.is_none() && min_eig < -ctx.tol {
                failure = Some(format!("row {i}: smallest eigenvalue of Y − g^B is {min_eig:e} (tol {:e})", ctx.tol));
            }
            let last = row.len() - 1;
            row[last] = failure.is_none().into();
            Ok((row, failure))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = base_report("compare", ctx);
    report.param("count", Cell::Int(count as u64));
    report.param("seed", Cell::Int(seed));
    report.set_columns(columns(groups));
    record_provenance(&mut report);
    fill(&mut report, rows);
    Ok(report)
}
