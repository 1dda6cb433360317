//! Yin's invariant Kähler metric on `E(m,n,p)` and its curvature at `z = 0`.
//!
//! The potential is `(1 − X)^{−λ}(1 − |z|²)^{−N}` with `X = |w|²(1 − |z|²)^{−1/p}`,
//! `N₁ = (n+1)p + m`, `N = N₁/p` and `λ = aN₁`. For `m = n = 1` this is the
//! single term `ψ^{−λ} φ^{(λ−N₁)/p}`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::bergman::{self, EllipsoidParams};
use crate::error::{Error, Result};
use crate::kahler::KahlerGeometry;
use crate::metric::MetricAtPoint;
use crate::term_algebra::{Coefficient, EvalPoint, Exponent, Monomial, NumericSum, TermSum};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct YinParams {
    pub m: u32,
    pub n: u32,
    pub p: f64,
    pub a: f64,
}

impl YinParams {
    pub fn new(m: u32, n: u32, p: f64, a: f64) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::Parameter(format!("dimensions must be positive, got m={m}, n={n}")));
        }
        if !(p.is_finite() && p > 0.5) {
            return Err(Error::Parameter(format!("Yin metric requires p > 1/2, got {p}")));
        }
        if !(a.is_finite() && a >= 1.0) {
            return Err(Error::Parameter(format!("Yin parameter a must be at least 1, got {a}")));
        }
        Ok(YinParams { m, n, p, a })
    }

    /// `m = n = 1`.
    pub fn planar(p: f64, a: f64) -> Result<Self> {
        Self::new(1, 1, p, a)
    }

    /// `N₁ = (n+1)p + m`.
    pub fn n1(&self) -> f64 {
        (self.n as f64 + 1.0) * self.p + self.m as f64
    }

    /// `N = N₁/p`.
    pub fn big_n(&self) -> f64 {
        self.n1() / self.p
    }

    /// `λ = aN₁`.
    pub fn lambda(&self) -> f64 {
        self.a * self.n1()
    }

    fn require_planar(&self) -> Result<()> {
        Self::new(self.m, self.n, self.p, self.a)?;
        if self.m != 1 || self.n != 1 {
            return Err(Error::Parameter(format!(
                "metric evaluation is available for m = n = 1 only, got m={}, n={}",
                self.m, self.n
            )));
        }
        Ok(())
    }
}

/// Single numeric-mode term `ψ^{−λ} φ^{(λ−N₁)/p}`; integral exponents are stored exactly.
pub fn build_potential(params: &YinParams) -> Result<NumericSum> {
    params.require_planar()?;
    let p = params.p;
    let lambda = params.lambda();
    let phi = Exponent::numeric((lambda - params.n1()) / p).specialize(p);
    let psi = Exponent::numeric(-lambda).specialize(p);
    Ok(TermSum::monomial(Coefficient::from_int(1), Monomial::phi_psi(phi, psi)))
}

/// Yin metric `Y_{ij̄} = ∂_i∂_{j̄} log K` with its curvature pipeline.
pub struct YinMetric {
    pub params: YinParams,
    geometry: KahlerGeometry<f64>,
}

impl YinMetric {
    pub fn new(params: YinParams) -> Result<Self> {
        let geometry = KahlerGeometry::new(build_potential(&params)?)?;
        Ok(YinMetric { params, geometry })
    }

    pub fn geometry(&self) -> &KahlerGeometry<f64> {
        &self.geometry
    }

    fn point(&self, z: Complex64, w: Complex64) -> Result<EvalPoint> {
        EllipsoidParams::new(self.params.p)?.point(z, w)
    }

    pub fn metric(&self, z: Complex64, w: Complex64) -> Result<MetricAtPoint> {
        self.geometry.metric_at(&self.point(z, w)?)
    }

    /// Holomorphic sectional curvature `R(ξ,ξ̄,ξ,ξ̄)/Y(ξ,ξ̄)²`.
    pub fn hsc(&self, z: Complex64, w: Complex64, xi: [Complex64; 2]) -> Result<f64> {
        self.geometry.hsc_at(&self.point(z, w)?, xi)
    }
}

pub fn yin_metric(params: &YinParams, z: Complex64, w: Complex64) -> Result<MetricAtPoint> {
    YinMetric::new(*params)?.metric(z, w)
}

/// The six coefficients of the curvature decomposition at `z = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StarCoefficients {
    pub x: f64,
    pub d: f64,
    pub p1: f64,
    pub p12: f64,
    pub p2: f64,
    pub q1: f64,
    pub q2: f64,
    pub r: f64,
}

impl StarCoefficients {
    pub const NAMES: [&'static str; 6] = ["P1", "P12", "P2", "Q1", "Q2", "R"];

    pub fn values(&self) -> [f64; 6] {
        [self.p1, self.p12, self.p2, self.q1, self.q2, self.r]
    }
}

fn check_x(x: f64) -> Result<()> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::Domain(format!("X must lie in [0, 1), got {x}")));
    }
    Ok(())
}

/// `f_{Q₁}(y) = (2 − DaN₁)y − DN₁(1 − a)`.
pub fn f_q1(params: &YinParams, d: f64, y: f64) -> f64 {
    let n1 = params.n1();
    (2.0 - d * params.lambda()) * y - d * n1 * (1.0 - params.a)
}

/// `f_{Q₂}(y) = (2a − Da²N₁)y² + (4(1−a) − 2DaN₁(1−a))y − D(1−a)²N₁`.
pub fn f_q2(params: &YinParams, d: f64, y: f64) -> f64 {
    let (a, n1) = (params.a, params.n1());
    let lam = params.lambda();
    a * (2.0 - d * lam) * y * y + (4.0 * (1.0 - a) - 2.0 * d * lam * (1.0 - a)) * y
        - d * (1.0 - a) * (1.0 - a) * n1
}

/// Vertex `(y₀, f_{Q₂}(y₀)) = (−(1−a)/a, −2(a−1)²/a)`, independent of `D`.
pub fn f_q2_vertex(params: &YinParams) -> (f64, f64) {
    let a = params.a;
    (-(1.0 - a) / a, -2.0 * (a - 1.0) * (a - 1.0) / a)
}

/// `f_R(y) = (2 − DaN₁)y² + 2(p − 1 + DN₁(a−1))y + (1 − 1/a)(−2p − D(a−1)N₁)`.
pub fn f_r(params: &YinParams, d: f64, y: f64) -> f64 {
    let (a, p, n1) = (params.a, params.p, params.n1());
    (2.0 - d * params.lambda()) * y * y
        + 2.0 * (p - 1.0 + d * n1 * (a - 1.0)) * y
        + (1.0 - 1.0 / a) * (-2.0 * p - d * (a - 1.0) * n1)
}

pub fn star_coefficients(params: &YinParams, x: f64, d: f64) -> Result<StarCoefficients> {
    check_x(x)?;
    if d.is_nan() || d <= 0.0 {
        return Err(Error::Parameter(format!("D must be positive, got {d}")));
    }
    let (a, p, n1) = (params.a, params.p, params.n1());
    let lam = params.lambda();
    let y = 1.0 / (1.0 - x);
    let u = 2.0 - d * lam;
    let w1 = lam * y;
    let p1 = lam * y.powi(4) * u;
    let p12 = 2.0 * lam * y.powi(3) * u;
    let p2 = lam * y * y * u;
    let q1 = 2.0 / p * lam * y * f_q1(params, d, y);
    let q2 = 2.0 / p / (x * w1 + n1) * y * y * a * n1 * n1 * f_q2(params, d, y);
    let r = n1 * a / (p * p) * f_r(params, d, y);
    Ok(StarCoefficients { x, d, p1, p12, p2, q1, q2, r })
}

/// `max{2/(aN₁), 2/N₁, (p+1)/N₁, 2p/N₁}`, nudged up by at most a few ulps so
/// that `2 − D·aN₁ ≤ 0` holds in floating point.
pub fn d_threshold(params: &YinParams) -> f64 {
    let n1 = params.n1();
    let lam = params.lambda();
    let mut d = [2.0 / lam, 2.0 / n1, (params.p + 1.0) / n1, 2.0 * params.p / n1]
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max);
    while 2.0 - d * lam > 0.0 {
        d = d.next_up();
    }
    d
}

/// Curvature input at `z = 0`; `|w|² = X`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CenterCurvatureInput {
    pub x: f64,
    pub dz: Complex64,
    pub dw: Complex64,
    pub d: f64,
}

/// `ω = −D − ω₁ / den²` at `z = 0`.
pub fn center_hsc(params: &YinParams, input: &CenterCurvatureInput) -> Result<f64> {
    if input.dz.norm() == 0.0 && input.dw.norm() == 0.0 {
        return Err(Error::ZeroVector);
    }
    let s = star_coefficients(params, input.x, input.d)?;
    let (p, n1) = (params.p, params.n1());
    let lam = params.lambda();
    let y = 1.0 / (1.0 - input.x);
    let (w1, w2) = (lam * y, lam * y * y);
    let dz2 = input.dz.norm_sqr();
    let dw2 = input.dw.norm_sqr();
    let wdw2 = input.x * dw2;
    let omega1 = s.p1 * wdw2 * wdw2
        + s.p12 * wdw2 * dw2
        + s.p2 * dw2 * dw2
        + s.q1 * dz2 * dw2
        + s.q2 * wdw2 * dz2
        + s.r * dz2 * dz2;
    let den = (input.x * w1 + n1) / p * dz2 + w1 * dw2 + w2 * wdw2;
    Ok(-input.d - omega1 / (den * den))
}

/// Uniform grid `{0, 1/n, …, (n−1)/n}` in `X`.
pub fn x_grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| i as f64 / n as f64).collect()
}

/// Eight unit tangent directions `(cos θ, sin θ)` at `θ = kπ/8`, plus a complex phase on `dw`.
pub fn tangent_directions() -> Vec<(Complex64, Complex64)> {
    (0..8)
        .map(|k| {
            let t = k as f64 * std::f64::consts::PI / 8.0;
            (Complex64::new(t.cos(), 0.0), Complex64::from_polar(t.sin(), 0.3 * k as f64))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct NonpositivityReport {
    pub d: f64,
    /// Maximum of each star coefficient over the grid, in [`StarCoefficients::NAMES`] order.
    pub maxima: [f64; 6],
    /// Grid point attaining each maximum.
    pub argmax: [f64; 6],
    pub tolerance: f64,
    pub pass: bool,
}

impl NonpositivityReport {
    pub fn failing(&self) -> Vec<&'static str> {
        StarCoefficients::NAMES
            .iter()
            .zip(self.maxima)
            .filter(|(_, m)| *m > self.tolerance)
            .map(|(n, _)| *n)
            .collect()
    }
}

/// Maximum of every star coefficient over `grid`; passes iff all are `≤ 1e-12`.
pub fn verify_nonpositivity(params: &YinParams, d: f64, grid: &[f64]) -> Result<NonpositivityReport> {
    let coeffs: Vec<StarCoefficients> =
        grid.par_iter().map(|&x| star_coefficients(params, x, d)).collect::<Result<_>>()?;
    let mut maxima = [f64::NEG_INFINITY; 6];
    let mut argmax = [0.0; 6];
    for s in &coeffs {
        for (k, v) in s.values().into_iter().enumerate() {
            if v > maxima[k] {
                maxima[k] = v;
                argmax[k] = s.x;
            }
        }
    }
    let tolerance = 1e-12;
    let pass = maxima.iter().all(|m| *m <= tolerance);
    Ok(NonpositivityReport { d, maxima, argmax, tolerance, pass })
}

/// One point of the Yin/Bergman comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonRow {
    pub z: Complex64,
    pub w: Complex64,
    /// Eigenvalues of `Y − g^B`, ascending.
    pub eigenvalues: [f64; 2],
    /// `(√g^B(v,v̄), √Y(v,v̄))` for each sampled direction.
    pub chain: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonReport {
    pub rows: Vec<ComparisonRow>,
    pub min_eigenvalue: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl ComparisonReport {
    /// First row whose smallest eigenvalue is below `−tolerance`.
    pub fn first_failure(&self) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| r.eigenvalues[0] < -self.tolerance)
    }
}

/// Directions used for the scalar chain `√g^B(v) ≤ √Y(v)`.
pub fn chain_directions() -> [[Complex64; 2]; 4] {
    let c = Complex64::new;
    [
        [c(1.0, 0.0), c(0.0, 0.0)],
        [c(0.0, 0.0), c(1.0, 0.0)],
        [c(0.6, 0.0), c(0.0, 0.8)],
        [c(-0.5, 0.5), c(0.5, 0.5)],
    ]
}

/// Eigenvalues of `Y − g^B` at each point; passes iff all are `≥ −1e-9`.
pub fn compare_with_bergman(params: &YinParams, pts: &[(Complex64, Complex64)]) -> Result<ComparisonReport> {
    let yin = YinMetric::new(*params)?;
    let bp = EllipsoidParams::new(params.p)?;
    let rows: Vec<ComparisonRow> = pts
        .par_iter()
        .map(|&(z, w)| {
            let y = yin.metric(z, w)?;
            let g = bergman::metric_symbolic(&bp, z, w)?;
            let chain = chain_directions().iter().map(|v| (g.norm_sq(*v).sqrt(), y.norm_sq(*v).sqrt())).collect();
            Ok(ComparisonRow { z, w, eigenvalues: y.sub(&g).eigenvalues(), chain })
        })
        .collect::<Result<_>>()?;
    let min_eigenvalue = rows.iter().map(|r| r.eigenvalues[0]).fold(f64::INFINITY, f64::min);
    let tolerance = 1e-9;
    Ok(ComparisonReport { rows, min_eigenvalue, tolerance, pass: min_eigenvalue >= -tolerance })
}
