//! Kähler geometry generated by a positive potential `F`: metric `∂∂̄ log F`,
//! Ricci form from the determinant, and the full curvature tensor.
//!
//! Every quantity is a [`QuotientExpr`] obtained by symbolic differentiation;
//! only the final contractions happen numerically at a point.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::metric::{Matrix2, MetricAtPoint};
use crate::term_algebra::{EvalPoint, QuotientExpr, Scalar, TermSum, Wirtinger};

type Q<R> = QuotientExpr<R>;

/// Components `R[a][b][c][d] = R_{a b̄ c d̄}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvatureComponents {
    pub r: [[[[Complex64; 2]; 2]; 2]; 2],
}

impl CurvatureComponents {
    /// `R(ξ, ξ̄, ξ, ξ̄) = Σ R_{a b̄ c d̄} ξ_a ξ̄_b ξ_c ξ̄_d`.
    pub fn contract(&self, xi: [Complex64; 2]) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    for d in 0..2 {
                        s += self.r[a][b][c][d] * xi[a] * xi[b].conj() * xi[c] * xi[d].conj();
                    }
                }
            }
        }
        s
    }

    /// Largest violation of `R_{ab̄cd̄} = R_{cb̄ad̄} = R_{ad̄cb̄}` and `R_{ab̄cd̄} = conj(R_{bādc̄})`.
    #[allow(clippy::needless_range_loop)]
    pub fn symmetry_defect(&self) -> f64 {
        let r = &self.r;
        let mut worst: f64 = 0.0;
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    for d in 0..2 {
                        let x = r[a][b][c][d];
                        worst = worst
                            .max((x - r[c][b][a][d]).norm())
                            .max((x - r[a][d][c][b]).norm())
                            .max((x - r[b][a][d][c].conj()).norm());
                    }
                }
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.r.iter().flatten().flatten().flatten().map(|x| x.norm()).fold(0.0, f64::max)
    }
}

struct DetDerivatives<R: Scalar> {
    holo: [Q<R>; 2],
    anti: [Q<R>; 2],
    mixed: [[Q<R>; 2]; 2],
}

struct MetricDerivatives<R: Scalar> {
    /// `holo[a][b][c] = ∂_c g_{a b̄}`
    holo: [[[Q<R>; 2]; 2]; 2],
    /// `anti[a][b][d] = ∂_{d̄} g_{a b̄}`
    anti: [[[Q<R>; 2]; 2]; 2],
    /// `mixed[a][b][c][d] = ∂_c ∂_{d̄} g_{a b̄}`
    mixed: [[[[Q<R>; 2]; 2]; 2]; 2],
}

fn map2<U>(f: impl Fn(usize, usize) -> Result<U>) -> Result<[[U; 2]; 2]> {
    Ok([[f(0, 0)?, f(0, 1)?], [f(1, 0)?, f(1, 1)?]])
}

fn map1<U>(f: impl Fn(usize) -> Result<U>) -> Result<[U; 2]> {
    Ok([f(0)?, f(1)?])
}

/// Kähler metric `g_{i j̄} = ∂_i ∂_{j̄} log F` of a potential `F`.
pub struct KahlerGeometry<R: Scalar> {
    potential: TermSum<R>,
    metric: [[Q<R>; 2]; 2],
    det: Q<R>,
    det_derivs: OnceLock<Result<DetDerivatives<R>>>,
    metric_derivs: OnceLock<Result<MetricDerivatives<R>>>,
}

impl<R: Scalar> KahlerGeometry<R> {
    /// Builds `g_{i j̄} = (F F_{i j̄} − F_i F_{j̄}) / F²` and `det g = D / F⁴`.
    pub fn new(potential: TermSum<R>) -> Result<Self> {
        if potential.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let d_holo = map1(|i| potential.derive(Wirtinger::holo(i)))?;
        let d_anti = map1(|j| potential.derive(Wirtinger::anti(j)))?;
        let nums = map2(|i, j| {
            let fij = d_holo[i].derive(Wirtinger::anti(j))?;
            Ok(&(&potential * &fij) - &(&d_holo[i] * &d_anti[j]))
        })?;
        let det_num = &(&nums[0][0] * &nums[1][1]) - &(&nums[0][1] * &nums[1][0]);
        let metric = map2(|i, j| Q::with_power(nums[i][j].clone(), potential.clone(), 2))?;
        let det = Q::with_power(det_num, potential.clone(), 4)?;
        Ok(KahlerGeometry {
            potential,
            metric,
            det,
            det_derivs: OnceLock::new(),
            metric_derivs: OnceLock::new(),
        })
    }

    pub fn potential(&self) -> &TermSum<R> {
        &self.potential
    }

    /// Symbolic `g_{i j̄}`.
    pub fn metric_expr(&self, i: usize, j: usize) -> &Q<R> {
        &self.metric[i][j]
    }

    /// Symbolic `det g`.
    pub fn det_expr(&self) -> &Q<R> {
        &self.det
    }

    fn det_derivs(&self) -> Result<&DetDerivatives<R>> {
        self.det_derivs
            .get_or_init(|| {
                let holo = map1(|i| self.det.derive(Wirtinger::holo(i)))?;
                let anti = map1(|j| self.det.derive(Wirtinger::anti(j)))?;
                let mixed = map2(|i, j| holo[i].derive(Wirtinger::anti(j)))?;
                Ok(DetDerivatives { holo, anti, mixed })
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    fn metric_derivs(&self) -> Result<&MetricDerivatives<R>> {
        self.metric_derivs
            .get_or_init(|| {
                let holo = map2(|a, b| map1(|c| self.metric[a][b].derive(Wirtinger::holo(c))))?;
                let anti = map2(|a, b| map1(|d| self.metric[a][b].derive(Wirtinger::anti(d))))?;
                let mixed = map2(|a, b| {
                    map2(|c, d| holo[a][b][c].derive(Wirtinger::anti(d)))
                })?;
                Ok(MetricDerivatives { holo, anti, mixed })
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Forces construction of every lazily derived expression.
    pub fn prepare(&self) -> Result<()> {
        self.det_derivs()?;
        self.metric_derivs()?;
        Ok(())
    }

    pub fn potential_at(&self, pt: &EvalPoint) -> Result<f64> {
        Ok(self.potential.evaluate(pt)?.re)
    }

    pub fn metric_at(&self, pt: &EvalPoint) -> Result<MetricAtPoint> {
        Ok(MetricAtPoint::new(eval2(&self.metric, pt)?))
    }

    pub fn det_at(&self, pt: &EvalPoint) -> Result<f64> {
        Ok(self.det.evaluate(pt)?.re)
    }

    /// `Ric_{i j̄} = (∂_i det · ∂_{j̄} det − det · ∂_i ∂_{j̄} det) / det²`.
    pub fn ricci_at(&self, pt: &EvalPoint) -> Result<MetricAtPoint> {
        let dd = self.det_derivs()?;
        let d = self.det.evaluate(pt)?;
        let hi = [dd.holo[0].evaluate(pt)? / d, dd.holo[1].evaluate(pt)? / d];
        let aj = [dd.anti[0].evaluate(pt)? / d, dd.anti[1].evaluate(pt)? / d];
        let mut out = eval2(&dd.mixed, pt)?;
        for (i, row) in out.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = hi[i] * aj[j] - *x / d;
            }
        }
        Ok(MetricAtPoint::new(out))
    }

    /// `R_{a b̄ c d̄} = −∂_c ∂_{d̄} g_{a b̄} + Σ g^{q p̄} ∂_c g_{a p̄} ∂_{d̄} g_{q b̄}`.
    pub fn curvature_at(&self, pt: &EvalPoint) -> Result<CurvatureComponents> {
        let md = self.metric_derivs()?;
        let g = self.metric_at(pt)?;
        let inv = g.inverse().ok_or_else(|| Error::Domain("metric is singular".into()))?;
        let zero = Complex64::new(0.0, 0.0);
        let mut holo = [[[zero; 2]; 2]; 2];
        let mut anti = [[[zero; 2]; 2]; 2];
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    holo[a][b][c] = md.holo[a][b][c].evaluate(pt)?;
                    anti[a][b][c] = md.anti[a][b][c].evaluate(pt)?;
                }
            }
        }
        let mut r = [[[[zero; 2]; 2]; 2]; 2];
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    for d in 0..2 {
                        let mut s = -md.mixed[a][b][c][d].evaluate(pt)?;
                        for p in 0..2 {
                            for q in 0..2 {
                                // g^{q p̄} is the (p, q) entry of the matrix inverse
                                s += inv[p][q] * holo[a][p][c] * anti[q][b][d];
                            }
                        }
                        r[a][b][c][d] = s;
                    }
                }
            }
        }
        Ok(CurvatureComponents { r })
    }

    /// Holomorphic sectional curvature `R(ξ, ξ̄, ξ, ξ̄) / g(ξ, ξ̄)²`.
    pub fn hsc_at(&self, pt: &EvalPoint, xi: [Complex64; 2]) -> Result<f64> {
        if xi[0].norm() == 0.0 && xi[1].norm() == 0.0 {
            return Err(Error::ZeroVector);
        }
        let g = self.metric_at(pt)?;
        let r = self.curvature_at(pt)?;
        let n = g.norm_sq(xi);
        Ok(r.contract(xi).re / (n * n))
    }
}

fn eval2<R: Scalar>(q: &[[Q<R>; 2]; 2], pt: &EvalPoint) -> Result<Matrix2> {
    Ok([
        [q[0][0].evaluate(pt)?, q[0][1].evaluate(pt)?],
        [q[1][0].evaluate(pt)?, q[1][1].evaluate(pt)?],
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term_algebra::{Coefficient, Rational};

    /// Ball potential (1 − |z|² − |w|²)^{-3} at p = 1.
    fn ball() -> KahlerGeometry<Rational> {
        let inv = TermSum::monomial(
            Coefficient::from_int(1),
            crate::term_algebra::Monomial::phi_psi(
                crate::term_algebra::Exponent::ZERO,
                crate::term_algebra::Exponent::integer(-3),
            ),
        );
        KahlerGeometry::new(inv).unwrap()
    }

    #[test]
    fn ball_metric_ricci_and_curvature() {
        let geo = ball();
        let pt = EvalPoint::new(1.0, Complex64::new(0.3, 0.2), Complex64::new(-0.1, 0.4));
        let g = geo.metric_at(&pt).unwrap();
        let ric = geo.ricci_at(&pt).unwrap();
        // the ball metric is Kähler–Einstein with Ric = −g
        assert!(ric.g.iter().flatten().zip(g.g.iter().flatten()).all(|(r, g)| (r + g).norm() < 1e-9));
        let h1 = geo.hsc_at(&pt, [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]).unwrap();
        let h2 = geo.hsc_at(&pt, [Complex64::new(0.3, -0.7), Complex64::new(1.1, 0.2)]).unwrap();
        assert!((h1 + 2.0 / 3.0).abs() < 1e-9);
        assert!((h2 + 2.0 / 3.0).abs() < 1e-9);
        assert!(geo.curvature_at(&pt).unwrap().symmetry_defect() < 1e-8);
    }
}
