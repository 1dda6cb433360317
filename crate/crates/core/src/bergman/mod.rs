//! Bergman kernel of `E(1,1,p)` and the geometry of its Bergman metric.
//!
//! The kernel is held as one exact sum with `p` kept symbolic, so the
//! symbolic pipeline is derived once and shared by every exponent.

mod automorphism;
mod closed_form;

use std::sync::LazyLock;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::kahler::{CurvatureComponents, KahlerGeometry};
use crate::metric::MetricAtPoint;
use crate::term_algebra::{Coefficient, EvalPoint, ExactSum, Exponent, Monomial, Rational, TermSum};

pub use automorphism::{automorphism, automorphism_differential, Automorphism};
pub use closed_form::{
    hsc_slice_closed, metric_closed_form, ratio_pair_closed, ricci_slice_closed, slice_metric_closed,
    ClosedFormFactors,
};

/// Points with `φψ` below this are rejected.
pub const BOUNDARY_REJECT: f64 = 1e-12;
/// Points with `φψ` below this are accepted with a conditioning warning.
pub const BOUNDARY_WARN: f64 = 1e-8;

/// Exponent `p` of `E(1,1,p) = {|z|² + |w|^{2p} < 1}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EllipsoidParams {
    pub p: f64,
}

impl EllipsoidParams {
    pub fn new(p: f64) -> Result<Self> {
        if !(p.is_finite() && p > 0.0) {
            return Err(Error::Parameter(format!("exponent p must be positive, got {p}")));
        }
        Ok(EllipsoidParams { p })
    }

    /// Same as [`new`](Self::new) but also requires the convex regime `p > 1/2`.
    pub fn convex(p: f64) -> Result<Self> {
        let params = Self::new(p)?;
        if p <= 0.5 {
            return Err(Error::Parameter(format!("convexity requires p > 1/2, got {p}")));
        }
        Ok(params)
    }

    /// Diagonal point `(z, w)`, checked to be interior.
    pub fn point(&self, z: Complex64, w: Complex64) -> Result<EvalPoint> {
        let pt = EvalPoint::new(self.p, z, w);
        check_interior(&pt)?;
        Ok(pt)
    }
}

/// Interior test with the boundary policy: reject `φψ < 1e-12`, warn below `1e-8`.
pub fn check_interior(pt: &EvalPoint) -> Result<()> {
    if !pt.is_interior() {
        return Err(Error::Domain(format!(
            "({}, {}) is not an interior point of E(1,1,{})",
            pt.z, pt.w, pt.p
        )));
    }
    let phi = pt.phi().re;
    let psi = phi.powf(1.0 / pt.p) - pt.w.norm_sqr();
    let prod = phi * psi;
    if prod.is_nan() || prod < BOUNDARY_REJECT {
        return Err(Error::Domain(format!("phi*psi = {prod:e} is below {BOUNDARY_REJECT:e}")));
    }
    if prod < BOUNDARY_WARN {
        log::warn!("ill-conditioned evaluation: phi*psi = {prod:e} at ({}, {})", pt.z, pt.w);
    }
    Ok(())
}

fn q(n: i128) -> Rational {
    Rational::from_integer(n)
}

/// `K = c₁ φ^{-2+1/p} ψ^{-2} + c₂ φ^{-2+2/p} ψ^{-3}` with `c₁ = (p−1)/(pπ²)`, `c₂ = 2/(pπ²)`.
fn symbolic_kernel() -> ExactSum {
    let c1 = &Coefficient::monomial(q(1), 0, -2) - &Coefficient::monomial(q(1), -1, -2);
    let c2 = Coefficient::monomial(q(2), -1, -2);
    let t1 = TermSum::monomial(c1, Monomial::phi_psi(Exponent::new(-2, 1), Exponent::integer(-2)));
    let t2 = TermSum::monomial(c2, Monomial::phi_psi(Exponent::new(-2, 2), Exponent::integer(-3)));
    &t1 + &t2
}

static KERNEL: LazyLock<ExactSum> = LazyLock::new(symbolic_kernel);

static GEOMETRY: LazyLock<KahlerGeometry<Rational>> =
    LazyLock::new(|| KahlerGeometry::new(symbolic_kernel()).expect("kernel exponents are exact"));

/// Exact kernel with `p` symbolic; the parameters only validate `p`.
pub fn build_kernel(params: &EllipsoidParams) -> ExactSum {
    let _ = params;
    KERNEL.clone()
}

/// Kernel collapsed to numbers at the given `p`; terms with vanishing
/// coefficient disappear (the `c₁` term at `p = 1`).
pub fn kernel_numeric(params: &EllipsoidParams) -> TermSum<f64> {
    KERNEL.specialize(params.p)
}

/// The shared symbolic pipeline.
pub fn geometry() -> &'static KahlerGeometry<Rational> {
    &GEOMETRY
}

pub fn kernel_value(params: &EllipsoidParams, z: Complex64, w: Complex64) -> Result<f64> {
    let pt = params.point(z, w)?;
    Ok(KERNEL.evaluate(&pt)?.re)
}

/// `g_{ij̄} = K^{-2}(K ∂_i∂_{j̄}K − ∂_iK ∂_{j̄}K)` by symbolic differentiation.
pub fn metric_symbolic(params: &EllipsoidParams, z: Complex64, w: Complex64) -> Result<MetricAtPoint> {
    geometry().metric_at(&params.point(z, w)?)
}

/// Ricci tensor from the determinant of the symbolic metric.
pub fn ricci(params: &EllipsoidParams, z: Complex64, w: Complex64) -> Result<MetricAtPoint> {
    geometry().ricci_at(&params.point(z, w)?)
}

/// `(Ric₁₁̄/g₁₁̄, Ric₂₂̄/g₂₂̄)` on the slice `z = t`, `w = 0`, via the symbolic pipeline.
pub fn ricci_ratios(params: &EllipsoidParams, t: f64) -> Result<(f64, f64)> {
    let z = Complex64::new(t, 0.0);
    let w = Complex64::new(0.0, 0.0);
    let g = metric_symbolic(params, z, w)?;
    let r = ricci(params, z, w)?;
    Ok((r.g[0][0].re / g.g[0][0].re, r.g[1][1].re / g.g[1][1].re))
}

pub fn curvature_tensor(params: &EllipsoidParams, z: Complex64, w: Complex64) -> Result<CurvatureComponents> {
    geometry().curvature_at(&params.point(z, w)?)
}

/// Random interior point: `|z| ≤ 0.95` uniform in area, `|w|^{2p}` uniform in
/// `[0, 0.9(1 − |z|²)]`, independent uniform phases.
pub fn sample_interior<G: Rng + ?Sized>(p: f64, rng: &mut G) -> (Complex64, Complex64) {
    let r = 0.95 * rng.gen::<f64>().sqrt();
    let z = Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU));
    let room = 0.9 * (1.0 - r * r) * rng.gen::<f64>();
    let w = Complex64::from_polar(room.powf(0.5 / p), rng.gen_range(0.0..std::f64::consts::TAU));
    (z, w)
}

/// Holomorphic sectional curvature `R(ξ,ξ̄,ξ,ξ̄)/g(ξ,ξ̄)²`.
pub fn hsc(params: &EllipsoidParams, z: Complex64, w: Complex64, xi: [Complex64; 2]) -> Result<f64> {
    geometry().hsc_at(&params.point(z, w)?, xi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn kernel_constants_and_origin_value() {
        let p2 = EllipsoidParams::new(2.0).unwrap();
        let k0 = kernel_value(&p2, c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!((k0 - 1.5 / (PI * PI)).abs() < 1e-15);
        let numeric = kernel_numeric(&p2);
        let coeffs: Vec<f64> = numeric.terms().iter().map(|t| t.coeff.eval(2.0)).collect();
        assert!((coeffs[0] - 0.5 / (PI * PI)).abs() < 1e-16);
        assert!((coeffs[1] - 1.0 / (PI * PI)).abs() < 1e-16);
    }

    #[test]
    fn ball_degeneration_is_single_term() {
        let p1 = EllipsoidParams::new(1.0).unwrap();
        let k = kernel_numeric(&p1);
        assert_eq!(k.len(), 1);
        assert_eq!(format!("{k}"), format!("({}) * z^0 zb^0 w^0 wb^0 * phi^(0+0/p) * psi^(-3+0/p)", 2.0 / (PI * PI)));
    }

    #[test]
    fn origin_metric_values() {
        let p2 = EllipsoidParams::new(2.0).unwrap();
        let g = metric_symbolic(&p2, c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!((g.g[0][0].re - 2.5).abs() < 1e-13);
        assert!((g.g[1][1].re - 8.0 / 3.0).abs() < 1e-13);
        assert!(g.g[0][1].norm() < 1e-15);
        let ric = ricci(&p2, c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!((ric.g[0][0].re + 2.5).abs() < 1e-12);
        assert!((ric.g[1][1].re + 2.7).abs() < 1e-12);
    }

    #[test]
    fn rejects_exterior_points() {
        let p2 = EllipsoidParams::new(2.0).unwrap();
        assert!(matches!(metric_symbolic(&p2, c(0.9, 0.0), c(0.7, 0.0)), Err(Error::Domain(_))));
        assert!(EllipsoidParams::new(-1.0).is_err());
        assert!(EllipsoidParams::convex(0.5).is_err());
    }

    #[test]
    fn slice_pipeline_matches_closed_forms() {
        for p in [0.75, 1.0, 2.0, 3.0] {
            let params = EllipsoidParams::new(p).unwrap();
            for t in [0.0, 0.3, -0.7, 0.95] {
                let z = c(t, 0.0);
                let w = c(0.0, 0.0);
                let ric = ricci(&params, z, w).unwrap();
                let (r11, r22) = ricci_slice_closed(p, t);
                assert!((ric.g[0][0].re / r11 - 1.0).abs() < 1e-8, "p={p} t={t} {:?} {r11}", ric.g[0][0]);
                assert!((ric.g[1][1].re / r22 - 1.0).abs() < 1e-8, "p={p} t={t} {:?} {r22}", ric.g[1][1]);
                assert!(ric.g[0][1].norm() < 1e-9);
                let (hz, hw) = hsc_slice_closed(p);
                let h1 = hsc(&params, z, w, [c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
                let h2 = hsc(&params, z, w, [c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
                assert!((h1 - hz).abs() < 1e-8, "p={p} t={t} {h1} {hz}");
                assert!((h2 - hw).abs() < 1e-8, "p={p} t={t} {h2} {hw}");
            }
        }
    }

    #[test]
    fn symbolic_metric_matches_closed_form_off_slice() {
        for p in [0.6, 1.0, 2.0, 5.0] {
            let params = EllipsoidParams::new(p).unwrap();
            let (z, w) = (c(0.3, 0.1), c(0.4, -0.2));
            let a = metric_symbolic(&params, z, w).unwrap();
            let b = metric_closed_form(&params, z, w).unwrap();
            assert!(a.sub(&b).max_abs() / b.max_abs() < 1e-10, "p={p} {a:?} {b:?}");
        }
    }
}
