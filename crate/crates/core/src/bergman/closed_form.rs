//! Printed closed forms for the metric and for the slice `z = t`, `w = 0`.

use num_complex::Complex64;

use super::{check_interior, EllipsoidParams};
use crate::error::Result;
use crate::metric::MetricAtPoint;
use crate::term_algebra::EvalPoint;

/// The factors `a₁ … a₇` with `g₁₁̄ = a₁a₂a₃`, `g₁₂̄ = a₂a₄a₅`, `g₂₁̄ = a₂a₄a₆`, `g₂₂̄ = a₂a₄a₇`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClosedFormFactors {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
    pub a5: Complex64,
    pub a6: Complex64,
    pub a7: f64,
}

impl ClosedFormFactors {
    pub fn at(params: &EllipsoidParams, z: Complex64, w: Complex64) -> Result<Self> {
        let pt = EvalPoint::new(params.p, z, w);
        check_interior(&pt)?;
        let p = params.p;
        let zz = z.norm_sqr();
        let ww = w.norm_sqr();
        let phi = 1.0 - zz;
        let f = phi.powf(1.0 / p);
        let psi = f - ww;

        let a1 = 2.0 * p.powi(4) * psi.powi(4)
            + 5.0 * p.powi(3) * psi.powi(3) * (f + ww)
            + 2.0 * p * p * psi * psi * (ww * (zz + 5.0) * f + 2.0 * f * f + 2.0 * ww * ww)
            + 4.0 * zz * ww * f * (ww * f + f * f + ww * ww)
            + p * (f * f - ww * ww) * (2.0 * ww * (3.0 * zz + 2.0) * f + f * f + ww * ww);
        let s = p * psi + f + ww;
        let a2 = 1.0 / (psi * psi * s * s);
        let a3 = 1.0 / (p * p * phi * phi);
        let a4 = p * p * psi * psi + 3.0 * p * (f * f - ww * ww) + 2.0 * (ww * f + f * f + ww * ww);
        let scale = 2.0 / p * phi.powf(-1.0 + 1.0 / p);
        let a5 = z.conj() * w * scale;
        let a6 = w.conj() * z * scale;
        let a7 = 2.0 * f;
        Ok(ClosedFormFactors { a1, a2, a3, a4, a5, a6, a7 })
    }

    pub fn metric(&self) -> MetricAtPoint {
        let c = |x: f64| Complex64::new(x, 0.0);
        let k = self.a2 * self.a4;
        MetricAtPoint::new([[c(self.a1 * self.a2 * self.a3), self.a5 * k], [self.a6 * k, c(k * self.a7)]])
    }
}

pub fn metric_closed_form(params: &EllipsoidParams, z: Complex64, w: Complex64) -> Result<MetricAtPoint> {
    Ok(ClosedFormFactors::at(params, z, w)?.metric())
}

/// `(g₁₁̄, g₂₂̄) = ((2p+1)/(p(1−t²)²), 2(p+2)/((p+1)(1−t²)^{1/p}))` on `z = t`, `w = 0`.
pub fn slice_metric_closed(p: f64, t: f64) -> (f64, f64) {
    let s = 1.0 - t * t;
    ((2.0 * p + 1.0) / (p * s * s), 2.0 * (p + 2.0) / ((p + 1.0) * s.powf(1.0 / p)))
}

/// `(Ric₁₁̄, Ric₂₂̄)` on the slice.
pub fn ricci_slice_closed(p: f64, t: f64) -> (f64, f64) {
    let s = 1.0 - t * t;
    let num = 2.0 * p.powi(3) + 10.0 * p * p + 10.0 * p + 5.0;
    (
        -(2.0 * p + 1.0) / (p * s * s),
        -2.0 * num / ((p + 1.0) * (p + 2.0) * (2.0 * p + 1.0) * s.powf(1.0 / p)),
    )
}

/// `(−1, −(2p³+10p²+10p+5)/((p+2)²(2p+1)))`.
pub fn ratio_pair_closed(p: f64) -> (f64, f64) {
    let num = 2.0 * p.powi(3) + 10.0 * p * p + 10.0 * p + 5.0;
    (-1.0, -num / ((p + 2.0) * (p + 2.0) * (2.0 * p + 1.0)))
}

/// `(h(∂z), h(∂w)) = (−2p/(1+2p), −(1+4p+p²)/(2+p)²)` on the slice.
pub fn hsc_slice_closed(p: f64) -> (f64, f64) {
    (-2.0 * p / (1.0 + 2.0 * p), -(1.0 + 4.0 * p + p * p) / ((2.0 + p) * (2.0 + p)))
}
