//! Verification suites: each emits one record per assertion.

use anyhow::{bail, Result};
use ellip_core::bergman::{self, hsc_slice_closed, ratio_pair_closed, ricci_slice_closed};
use ellip_core::extremal::{bracket, BracketBudget, TangentData};
use ellip_core::metric::MetricAtPoint;
use ellip_core::oracle::{fd_log_hessian, FdConfig, ScalarField};
use ellip_core::yin::{self, CenterCurvatureInput, YinMetric, YinParams};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::commands::{relative_gap, Ctx};
use crate::report::{Cell, Report};

/// Finite-difference records are held to this multiple of `--tol`.
pub const ORACLE_TOL_FACTOR: f64 = 1e3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Kernel,
    Prop42,
    Prop43,
    Prop44,
    Prop45,
    Einstein,
    Prop31,
    YinCompare,
    Bracket,
}

impl Suite {
    pub fn name(&self) -> &'static str {
        match self {
            Suite::Kernel => "kernel",
            Suite::Prop42 => "prop42",
            Suite::Prop43 => "prop43",
            Suite::Prop44 => "prop44",
            Suite::Prop45 => "prop45",
            Suite::Einstein => "einstein",
            Suite::Prop31 => "prop31",
            Suite::YinCompare => "yin-compare",
            Suite::Bracket => "bracket",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Le,
    Ge,
}

impl Relation {
    fn as_str(&self) -> &'static str {
        match self {
            Relation::Eq => "==",
            Relation::Le => "<=",
            Relation::Ge => ">=",
        }
    }

    /// Relative error for `==` (scaled by `max(1, |expected|)`), violation otherwise.
    fn error(&self, value: f64, expected: f64) -> f64 {
        let e = match self {
            Relation::Eq => (value - expected).abs() / expected.abs().max(1.0),
            Relation::Le => (value - expected).max(0.0),
            Relation::Ge => (expected - value).max(0.0),
        };
        if value.is_nan() {
            f64::INFINITY
        } else {
            e
        }
    }
}

pub const RECORD_COLUMNS: [&str; 10] =
    ["suite", "record", "value", "expected", "relation", "error", "tolerance", "pass", "source", "reference"];

/// One assertion.
#[derive(Clone, Debug)]
pub struct Record {
    pub name: String,
    pub value: f64,
    pub expected: f64,
    pub relation: Relation,
    pub tolerance: f64,
    /// Formula path of `value`.
    pub source: &'static str,
    /// Formula path of `expected`.
    pub reference: &'static str,
}

impl Record {
    fn new(name: impl Into<String>, value: f64, relation: Relation, expected: f64, tolerance: f64) -> Self {
        Record { name: name.into(), value, expected, relation, tolerance, source: "symbolic", reference: "closed-form" }
    }

    fn paths(mut self, source: &'static str, reference: &'static str) -> Self {
        self.source = source;
        self.reference = reference;
        self
    }
}

pub fn records_report(command: &str, ctx: &Ctx, suite: &str, records: Vec<Record>) -> Report {
    let mut report = Report::new(command);
    report.param("p", ctx.p);
    report.param("a", ctx.a);
    report.param("tol", ctx.tol);
    report.param("suite", suite);
    report.set_columns(RECORD_COLUMNS.iter().map(|s| s.to_string()).collect());
    for r in records {
        let error = r.relation.error(r.value, r.expected);
        let pass = error <= r.tolerance;
        let key = format!("{suite}/{}", r.name);
        if !pass {
            report.fail(format!(
                "{key}: value {:?} expected {} {:?} (error {error:e}, tolerance {:e})",
                r.value,
                r.relation.as_str(),
                r.expected,
                r.tolerance
            ));
        }
        report.provenance(&key, r.source);
        report.push_row(vec![
            suite.into(),
            Cell::Text(r.name),
            r.value.into(),
            r.expected.into(),
            r.relation.as_str().into(),
            error.into(),
            r.tolerance.into(),
            pass.into(),
            r.source.into(),
            r.reference.into(),
        ]);
    }
    report
}

pub struct SuiteOptions {
    pub count: usize,
    pub seed: u64,
}

pub fn run(ctx: &Ctx, suite: Suite, opts: &SuiteOptions) -> Result<Report> {
    let records = match suite {
        Suite::Kernel => kernel(ctx, opts)?,
        Suite::Prop42 => prop42(ctx, opts)?,
        Suite::Prop43 => prop43(ctx)?,
        Suite::Prop44 => prop44(ctx)?,
        Suite::Prop45 => prop45(ctx)?,
        Suite::Einstein => einstein(ctx, opts)?,
        Suite::Prop31 => prop31(ctx, 1, 1, None, 1000)?,
        Suite::YinCompare => yin_compare(ctx, opts)?,
        Suite::Bracket => bracket_suite(ctx, opts)?,
    };
    let mut report = records_report("verify", ctx, suite.name(), records);
    report.param("count", Cell::Int(opts.count as u64));
    report.param("seed", Cell::Int(opts.seed));
    Ok(report)
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

const SLICE: [f64; 7] = [0.0, 0.3, -0.3, 0.7, -0.7, 0.95, -0.95];

fn kernel(ctx: &Ctx, opts: &SuiteOptions) -> Result<Vec<Record>> {
    let p = ctx.p;
    let mut out = vec![Record::new(
        "origin",
        bergman::kernel_value(&ctx.params, c(0.0, 0.0), c(0.0, 0.0))?,
        Relation::Eq,
        (p + 1.0) / (p * std::f64::consts::PI.powi(2)),
        ctx.tol,
    )];
    let direct = ScalarField::bergman_kernel(p);
    for (i, (z, w)) in ctx.sample_points(opts.count, opts.seed).into_iter().enumerate() {
        let k = bergman::kernel_value(&ctx.params, z, w)?;
        out.push(Record::new(format!("pt{i}.kernel"), k, Relation::Eq, direct.value(z, w), ctx.tol));
        if p == 1.0 {
            let ball = 2.0 / std::f64::consts::PI.powi(2) / (1.0 - z.norm_sqr() - w.norm_sqr()).powi(3);
            out.push(Record::new(format!("pt{i}.ball"), k, Relation::Eq, ball, ctx.tol));
        }
    }
    Ok(out)
}

fn prop42(ctx: &Ctx, opts: &SuiteOptions) -> Result<Vec<Record>> {
    let field = ScalarField::bergman_kernel(ctx.p);
    let cfg = FdConfig::default();
    let pts = ctx.sample_points(opts.count, opts.seed);
    let per_point = pts
        .par_iter()
        .enumerate()
        .map(|(i, &(z, w))| {
            let sym = bergman::metric_symbolic(&ctx.params, z, w)?;
            let closed = bergman::metric_closed_form(&ctx.params, z, w)?;
            let fd = fd_log_hessian(&field, z, w, &cfg)?;
            Ok(vec![
                Record::new(format!("pt{i}.symbolic_vs_closed"), relative_gap(&sym, &closed), Relation::Le, 0.0, ctx.tol),
                Record::new(
                    format!("pt{i}.oracle_vs_closed"),
                    relative_gap(&fd, &closed),
                    Relation::Le,
                    0.0,
                    ctx.tol * ORACLE_TOL_FACTOR,
                )
                .paths("oracle", "closed-form"),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_point.concat())
}

fn prop43(ctx: &Ctx) -> Result<Vec<Record>> {
    let mut out = Vec::new();
    for t in SLICE {
        let ric = bergman::ricci(&ctx.params, c(t, 0.0), c(0.0, 0.0))?;
        let (r11, r22) = ricci_slice_closed(ctx.p, t);
        out.push(Record::new(format!("t={t}.ric11"), ric.g[0][0].re, Relation::Eq, r11, ctx.tol));
        out.push(Record::new(format!("t={t}.ric22"), ric.g[1][1].re, Relation::Eq, r22, ctx.tol));
        out.push(Record::new(format!("t={t}.ric12"), ric.g[0][1].norm(), Relation::Le, 0.0, ctx.tol));
    }
    Ok(out)
}

/// Separation required of the two ratios away from the ball.
const DISCRIMINATOR_GAP: f64 = 1e-3;

fn prop44(ctx: &Ctx) -> Result<Vec<Record>> {
    let (e1, e2) = ratio_pair_closed(ctx.p);
    let mut out = Vec::new();
    for t in SLICE {
        let (r1, r2) = bergman::ricci_ratios(&ctx.params, t)?;
        out.push(Record::new(format!("t={t}.ratio11"), r1, Relation::Eq, e1, ctx.tol));
        out.push(Record::new(format!("t={t}.ratio22"), r2, Relation::Eq, e2, ctx.tol));
    }
    let (r1, r2) = bergman::ricci_ratios(&ctx.params, 0.0)?;
    out.push(if ctx.p == 1.0 {
        Record::new("ratio_gap", (r1 - r2).abs(), Relation::Le, 0.0, ctx.tol)
    } else {
        Record::new("ratio_gap", (r1 - r2).abs(), Relation::Ge, DISCRIMINATOR_GAP, 0.0)
    });
    Ok(out)
}

fn prop45(ctx: &Ctx) -> Result<Vec<Record>> {
    let (hz, hw) = hsc_slice_closed(ctx.p);
    let mut out = Vec::new();
    for t in [0.0, 0.3, 0.7] {
        let (z, w) = (c(t, 0.0), c(0.0, 0.0));
        let sz = bergman::hsc(&ctx.params, z, w, [c(1.0, 0.0), c(0.0, 0.0)])?;
        let sw = bergman::hsc(&ctx.params, z, w, [c(0.0, 0.0), c(1.0, 0.0)])?;
        out.push(Record::new(format!("t={t}.h_z"), sz, Relation::Eq, hz, ctx.tol));
        out.push(Record::new(format!("t={t}.h_w"), sw, Relation::Eq, hw, ctx.tol));
    }
    out.push(if ctx.p == 1.0 {
        Record::new("hsc_gap", (hz - hw).abs(), Relation::Le, 0.0, ctx.tol).paths("closed-form", "closed-form")
    } else {
        Record::new("hsc_gap", (hz - hw).abs(), Relation::Ge, DISCRIMINATOR_GAP, 0.0).paths("closed-form", "closed-form")
    });
    Ok(out)
}

fn einstein(ctx: &Ctx, opts: &SuiteOptions) -> Result<Vec<Record>> {
    let pts = ctx.sample_points(opts.count, opts.seed);
    pts.par_iter()
        .enumerate()
        .map(|(i, &(z, w))| {
            let g = bergman::metric_symbolic(&ctx.params, z, w)?;
            let ric = bergman::ricci(&ctx.params, z, w)?;
            let neg = MetricAtPoint::new(g.g.map(|row| row.map(|x| -x)));
            let defect = relative_gap(&ric, &neg);
            Ok(Record::new(format!("pt{i}.ric_plus_g"), defect, Relation::Le, 0.0, ctx.tol).paths("symbolic", "symbolic"))
        })
        .collect()
}

/// Star-coefficient signs, the curvature floor `−D` and its `D`-independence.
pub fn prop31(ctx: &Ctx, m: u32, n: u32, d: Option<f64>, grid: usize) -> Result<Vec<Record>> {
    if grid == 0 {
        bail!("--grid must be positive");
    }
    let params = YinParams::new(m, n, ctx.p, ctx.a)?;
    let d = d.unwrap_or_else(|| yin::d_threshold(&params));
    let xs = yin::x_grid(grid);
    let report = yin::verify_nonpositivity(&params, d, &xs)?;
    let mut out: Vec<Record> = yin::StarCoefficients::NAMES
        .iter()
        .zip(report.maxima)
        .map(|(name, max)| Record::new(format!("{name}.max"), max, Relation::Le, 0.0, ctx.tol).paths("closed-form", "closed-form"))
        .collect();

    let dirs = yin::tangent_directions();
    let hsc_at = |x: f64, dz: Complex64, dw: Complex64, d: f64| {
        yin::center_hsc(&params, &CenterCurvatureInput { x, dz, dw, d })
    };
    let minima = xs
        .par_iter()
        .map(|&x| {
            let mut min = f64::INFINITY;
            let mut drift: f64 = 0.0;
            for &(dz, dw) in &dirs {
                let h = hsc_at(x, dz, dw, d)?;
                min = min.min(h);
                drift = drift.max((hsc_at(x, dz, dw, d + 1.0)? - h).abs());
            }
            Ok((min, drift))
        })
        .collect::<ellip_core::Result<Vec<_>>>()?;
    let min = minima.iter().map(|m| m.0).fold(f64::INFINITY, f64::min);
    let drift = minima.iter().map(|m| m.1).fold(0.0, f64::max);
    out.push(Record::new("center_hsc.min", min, Relation::Ge, -d, ctx.tol).paths("closed-form", "closed-form"));
    out.push(Record::new("center_hsc.d_drift", drift, Relation::Le, 0.0, ctx.tol).paths("closed-form", "closed-form"));

    if m == 1 && n == 1 {
        let metric = YinMetric::new(params)?;
        for x in [0.25f64, 0.5] {
            let w = c(x.sqrt(), 0.0);
            let worst = dirs
                .iter()
                .map(|&(dz, dw)| {
                    let sym = metric.hsc(c(0.0, 0.0), w, [dz, dw])?;
                    Ok((sym - hsc_at(x, dz, dw, d)?).abs())
                })
                .collect::<ellip_core::Result<Vec<f64>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            out.push(Record::new(format!("X={x}.symbolic_vs_closed"), worst, Relation::Le, 0.0, ctx.tol));
        }
    }
    Ok(out)
}

fn yin_compare(ctx: &Ctx, opts: &SuiteOptions) -> Result<Vec<Record>> {
    ctx.yin()?;
    let params = YinParams::planar(ctx.p, ctx.a)?;
    let report = yin::compare_with_bergman(&params, &ctx.sample_points(opts.count, opts.seed))?;
    let ball = ctx.p == 1.0 && ctx.a == 1.0;
    let mut out = Vec::new();
    for (i, row) in report.rows.iter().enumerate() {
        out.push(Record::new(format!("pt{i}.min_eig"), row.eigenvalues[0], Relation::Ge, 0.0, ctx.tol).paths("symbolic", "symbolic"));
        if ball {
            let max = row.eigenvalues[0].abs().max(row.eigenvalues[1].abs());
            out.push(Record::new(format!("pt{i}.ball_gap"), max, Relation::Le, 0.0, ctx.tol).paths("symbolic", "symbolic"));
        }
    }
    Ok(out)
}

fn bracket_suite(ctx: &Ctx, opts: &SuiteOptions) -> Result<Vec<Record>> {
    ctx.yin()?;
    let p = ctx.p;
    let budget = BracketBudget::default();
    let expected = [((2.0 * p + 1.0) / p).sqrt(), (2.0 * (p + 2.0) / (p + 1.0)).sqrt()];
    let mut out = Vec::new();
    for (k, v) in [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]].into_iter().enumerate() {
        let t = TangentData::new(p, c(0.0, 0.0), c(0.0, 0.0), v)?;
        let b = bracket(&t, &ctx.params, &budget)?;
        let e = k + 1;
        out.push(Record::new(format!("origin.e{e}.lower"), b.lower, Relation::Eq, 1.0, ctx.tol).paths("certified", "closed-form"));
        out.push(Record::new(format!("origin.e{e}.upper"), b.upper, Relation::Eq, 1.0, ctx.tol).paths("certified", "closed-form"));
        out.push(
            Record::new(format!("origin.e{e}.ratio"), b.bergman_norm / b.midpoint(), Relation::Eq, expected[k], ctx.tol)
                .paths("certified", "closed-form"),
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let data: Vec<TangentData> = (0..opts.count)
        .map(|_| {
            let (z, w) = bergman::sample_interior(p, &mut rng);
            let v = [c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)), c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))];
            TangentData::new(p, z, w, v)
        })
        .collect::<ellip_core::Result<_>>()?;
    let per_point = data
        .par_iter()
        .enumerate()
        .map(|(i, t)| {
            let b = bracket(t, &ctx.params, &budget)?;
            Ok(vec![
                Record::new(format!("pt{i}.lower_le_upper"), b.lower - b.upper, Relation::Le, 0.0, ctx.tol)
                    .paths("certified", "certified"),
                Record::new(format!("pt{i}.lower_le_bergman"), b.lower - b.bergman_norm, Relation::Le, 0.0, ctx.tol)
                    .paths("certified", "symbolic"),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    out.extend(per_point.concat());
    Ok(out)
}
