//! Finite-difference Wirtinger derivatives, independent of the term algebra.
//!
//! Real central differences in `(Re z, Im z, Re w, Im w)` combined through
//! `∂/∂z = (∂/∂x − i ∂/∂y)/2`, followed by Richardson extrapolation in `h²`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::metric::MetricAtPoint;
use crate::term_algebra::{defining_function, Wirtinger};

type Eval = dyn Fn(Complex64, Complex64) -> f64 + Send + Sync;
type Valid = dyn Fn(Complex64, Complex64) -> bool + Send + Sync;

/// A real-valued field on an open set of `C²` with its validity predicate.
#[derive(Clone)]
pub struct ScalarField {
    eval: Arc<Eval>,
    valid: Arc<Valid>,
}

impl ScalarField {
    pub fn new(
        eval: impl Fn(Complex64, Complex64) -> f64 + Send + Sync + 'static,
        valid: impl Fn(Complex64, Complex64) -> bool + Send + Sync + 'static,
    ) -> Self {
        ScalarField { eval: Arc::new(eval), valid: Arc::new(valid) }
    }

    /// A field defined on the whole of `C²`.
    pub fn entire(eval: impl Fn(Complex64, Complex64) -> f64 + Send + Sync + 'static) -> Self {
        Self::new(eval, |_, _| true)
    }

    /// A field on `E(1,1,p)`.
    pub fn on_ellipsoid(p: f64, eval: impl Fn(Complex64, Complex64) -> f64 + Send + Sync + 'static) -> Self {
        Self::new(eval, move |z, w| defining_function(p, z, w) > 0.0)
    }

    /// The Bergman kernel evaluated directly from its two-term closed form.
    pub fn bergman_kernel(p: f64) -> Self {
        let c1 = (p - 1.0) / (p * PI * PI);
        let c2 = 2.0 / (p * PI * PI);
        Self::on_ellipsoid(p, move |z, w| {
            let phi = 1.0 - z.norm_sqr();
            let psi = phi.powf(1.0 / p) - w.norm_sqr();
            c1 * phi.powf(-2.0 + 1.0 / p) * psi.powi(-2) + c2 * phi.powf(-2.0 + 2.0 / p) * psi.powi(-3)
        })
    }

    /// Yin potential `(1 − X)^{−λ}(1 − |z|²)^{−N₁/p}` with `X = |w|²(1 − |z|²)^{−1/p}`.
    pub fn yin_potential(p: f64, n1: f64, lambda: f64) -> Self {
        Self::on_ellipsoid(p, move |z, w| {
            let phi = 1.0 - z.norm_sqr();
            let x = w.norm_sqr() * phi.powf(-1.0 / p);
            (1.0 - x).powf(-lambda) * phi.powf(-n1 / p)
        })
    }

    pub fn value(&self, z: Complex64, w: Complex64) -> f64 {
        (self.eval)(z, w)
    }

    pub fn is_valid(&self, z: Complex64, w: Complex64) -> bool {
        (self.valid)(z, w)
    }

    /// `log f`.
    pub fn ln(&self) -> Self {
        let eval = self.eval.clone();
        ScalarField { eval: Arc::new(move |z, w| eval(z, w).ln()), valid: self.valid.clone() }
    }
}

/// Finite-difference settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FdConfig {
    /// Base step.
    pub h: f64,
    /// Number of step halvings combined by Richardson extrapolation.
    pub levels: usize,
    /// Required clearance around the stencil, as a multiple of the step.
    pub margin_factor: f64,
    /// Relative error estimate above which the result is flagged.
    pub warn_rel: f64,
    /// Smallest step the boundary shrinking may reach.
    pub min_h: f64,
}

impl Default for FdConfig {
    fn default() -> Self {
        FdConfig { h: 1e-3, levels: 3, margin_factor: 10.0, warn_rel: 1e-4, min_h: 1e-8 }
    }
}

/// Extrapolated value with its error history.
#[derive(Clone, Debug, PartialEq)]
pub struct FdEstimate {
    pub value: Complex64,
    /// Difference between the last two diagonal Richardson entries.
    pub error: f64,
    /// `|T[j][j] − T[j−1][j−1]|` for `j = 1 … levels−1`.
    pub level_errors: Vec<f64>,
    /// Base step actually used.
    pub h: f64,
    pub ill_conditioned: bool,
}

/// `∂ = Σ_k c_k ∂/∂u_k` over the real coordinates `u = (x₁, y₁, x₂, y₂)`.
fn real_combination(dir: Wirtinger) -> [(usize, Complex64); 2] {
    let half = Complex64::new(0.5, 0.0);
    let ihalf = Complex64::new(0.0, 0.5);
    match dir {
        Wirtinger::Z => [(0, half), (1, -ihalf)],
        Wirtinger::ZBar => [(0, half), (1, ihalf)],
        Wirtinger::W => [(2, half), (3, -ihalf)],
        Wirtinger::WBar => [(2, half), (3, ihalf)],
    }
}

fn shifted(z: Complex64, w: Complex64, offsets: &[(usize, f64)]) -> (Complex64, Complex64) {
    let mut u = [z.re, z.im, w.re, w.im];
    for &(k, d) in offsets {
        u[k] += d;
    }
    (Complex64::new(u[0], u[1]), Complex64::new(u[2], u[3]))
}

/// Stencil offsets in units of the step for a derivative multi-index.
fn stencil_units(dirs: &[Wirtinger]) -> Vec<Vec<(usize, f64)>> {
    let mut out = vec![vec![]];
    let mut coords: Vec<usize> = dirs.iter().flat_map(|d| real_combination(*d).map(|(k, _)| k)).collect();
    coords.sort_unstable();
    coords.dedup();
    for &a in &coords {
        for s in [-1.0, 1.0] {
            out.push(vec![(a, s)]);
            for &b in &coords {
                if b > a {
                    for t in [-1.0, 1.0] {
                        out.push(vec![(a, s), (b, t)]);
                    }
                }
            }
        }
    }
    out
}

/// Central-difference estimate of the requested derivative at a fixed step.
fn central(field: &ScalarField, z: Complex64, w: Complex64, dirs: &[Wirtinger], h: f64) -> Complex64 {
    let f = |offsets: &[(usize, f64)]| {
        let (zz, ww) = shifted(z, w, offsets);
        field.value(zz, ww)
    };
    match dirs {
        [] => Complex64::new(f(&[]), 0.0),
        [d] => real_combination(*d)
            .iter()
            .map(|&(k, c)| c * ((f(&[(k, h)]) - f(&[(k, -h)])) / (2.0 * h)))
            .sum(),
        [d1, d2] => {
            let f0 = f(&[]);
            let mut s = Complex64::new(0.0, 0.0);
            for &(k, ck) in &real_combination(*d1) {
                for &(l, cl) in &real_combination(*d2) {
                    let second = if k == l {
                        (f(&[(k, h)]) - 2.0 * f0 + f(&[(k, -h)])) / (h * h)
                    } else {
                        (f(&[(k, h), (l, h)]) - f(&[(k, h), (l, -h)]) - f(&[(k, -h), (l, h)])
                            + f(&[(k, -h), (l, -h)]))
                            / (4.0 * h * h)
                    };
                    s += ck * cl * second;
                }
            }
            s
        }
        _ => unreachable!("order checked by caller"),
    }
}

/// Largest step `≤ cfg.h` whose stencil, inflated by the margin, stays valid.
fn fitted_step(field: &ScalarField, z: Complex64, w: Complex64, dirs: &[Wirtinger], cfg: &FdConfig) -> Result<f64> {
    let units = stencil_units(dirs);
    let mut h = cfg.h;
    while h >= cfg.min_h {
        let reach = h * (1.0 + cfg.margin_factor);
        let fits = units.iter().all(|offs| {
            let scaled: Vec<(usize, f64)> = offs.iter().map(|&(k, s)| (k, s * reach)).collect();
            let (zz, ww) = shifted(z, w, &scaled);
            field.is_valid(zz, ww)
        }) && field.is_valid(z, w);
        if fits {
            return Ok(h);
        }
        h *= 0.5;
    }
    Err(Error::Margin(format!("no step down to {:e} fits at ({z}, {w})", cfg.min_h)))
}

/// Wirtinger derivative of order ≤ 2 by Richardson-extrapolated central differences.
pub fn fd_wirtinger(
    field: &ScalarField,
    z: Complex64,
    w: Complex64,
    dirs: &[Wirtinger],
    cfg: &FdConfig,
) -> Result<FdEstimate> {
    if dirs.len() > 2 {
        return Err(Error::Parameter("finite differences support derivative order at most 2".into()));
    }
    if cfg.levels == 0 || cfg.h.is_nan() || cfg.h <= 0.0 {
        return Err(Error::Parameter("FD config needs h > 0 and at least one level".into()));
    }
    let h = fitted_step(field, z, w, dirs, cfg)?;
    let n = cfg.levels;
    let mut table: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for i in 0..n {
        let hi = h / f64::powi(2.0, i as i32);
        let mut row = vec![central(field, z, w, dirs, hi)];
        for j in 1..=i {
            let factor = f64::powi(4.0, j as i32) - 1.0;
            let prev = row[j - 1];
            row.push(prev + (prev - table[i - 1][j - 1]) / factor);
        }
        table.push(row);
    }
    let diag: Vec<Complex64> = (0..n).map(|i| table[i][i]).collect();
    let level_errors: Vec<f64> = diag.windows(2).map(|p| (p[1] - p[0]).norm()).collect();
    let value = diag[n - 1];
    let error = level_errors.last().copied().unwrap_or(0.0);
    let ill_conditioned = error > cfg.warn_rel * value.norm().max(f64::MIN_POSITIVE);
    if ill_conditioned && !dirs.is_empty() {
        log::warn!("finite-difference estimate at ({z}, {w}) has relative error {:e}", error / value.norm());
    }
    Ok(FdEstimate { value, error, level_errors, h, ill_conditioned })
}

/// Matrix `∂_i ∂_{j̄} log f`.
pub fn fd_log_hessian(field: &ScalarField, z: Complex64, w: Complex64, cfg: &FdConfig) -> Result<MetricAtPoint> {
    let lf = field.ln();
    let mut g = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (i, row) in g.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = fd_wirtinger(&lf, z, w, &[Wirtinger::holo(i), Wirtinger::anti(j)], cfg)?.value;
        }
    }
    Ok(MetricAtPoint::new(g))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn mixed_derivative_of_modulus_squared() {
        let f = ScalarField::entire(|z, _| z.norm_sqr());
        let cfg = FdConfig::default();
        let e = fd_wirtinger(&f, c(0.3, -0.2), c(0.0, 0.0), &[Wirtinger::Z, Wirtinger::ZBar], &cfg).unwrap();
        assert!((e.value - c(1.0, 0.0)).norm() < 1e-9);
        let d = fd_wirtinger(&f, c(0.3, -0.2), c(0.0, 0.0), &[Wirtinger::Z], &cfg).unwrap();
        assert!((d.value - c(0.3, 0.2)).norm() < 1e-10);
    }

    #[test]
    fn ball_log_hessian_at_origin() {
        let f = ScalarField::bergman_kernel(1.0);
        let g = fd_log_hessian(&f, c(0.0, 0.0), c(0.0, 0.0), &FdConfig::default()).unwrap();
        assert!(g.sub(&MetricAtPoint::diagonal(3.0, 3.0)).max_abs() < 1e-7);
    }

    #[test]
    fn step_shrinks_near_boundary_and_fails_outside() {
        let f = ScalarField::bergman_kernel(2.0);
        let cfg = FdConfig::default();
        let e = fd_wirtinger(&f, c(0.999, 0.0), c(0.0, 0.0), &[Wirtinger::Z], &cfg).unwrap();
        assert!(e.h < cfg.h);
        assert!(matches!(
            fd_wirtinger(&f, c(1.2, 0.0), c(0.0, 0.0), &[Wirtinger::Z], &cfg),
            Err(Error::Margin(_))
        ));
    }
}
