use std::fmt;

use num_complex::Complex64;

use super::coefficient::{Coefficient, Scalar};
use super::point::EvalPoint;
use super::sum::TermSum;
use super::Wirtinger;
use crate::error::{Error, Result};

/// `num / den^power` with a non-zero denominator.
///
/// Keeping the power separate means a derivative multiplies the denominator by
/// one more factor instead of squaring it.
#[derive(Clone, Debug, PartialEq)]
pub struct QuotientExpr<R: Scalar> {
    pub num: TermSum<R>,
    pub den: TermSum<R>,
    pub power: u32,
}

impl<R: Scalar> QuotientExpr<R> {
    pub fn new(num: TermSum<R>, den: TermSum<R>) -> Result<Self> {
        Self::with_power(num, den, 1)
    }

    pub fn with_power(num: TermSum<R>, den: TermSum<R>, power: u32) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(QuotientExpr { num, den, power })
    }

    /// The sum itself over the constant denominator 1.
    pub fn from_sum(num: TermSum<R>) -> Self {
        QuotientExpr { num, den: TermSum::one(), power: 0 }
    }

    /// `(num' den − k num den') / den^{k+1}`.
    pub fn derive(&self, dir: Wirtinger) -> Result<Self> {
        if self.power == 0 {
            return Ok(QuotientExpr { num: self.num.derive(dir)?, den: self.den.clone(), power: 0 });
        }
        let dn = self.num.derive(dir)?;
        let dd = self.den.derive(dir)?;
        let k = Coefficient::from_int(self.power as i64);
        let num = &(&dn * &self.den) - &(&self.num * &dd).scale(&k);
        Ok(QuotientExpr { num, den: self.den.clone(), power: self.power + 1 })
    }

    /// Value at a point, evaluated with separate log-magnitude shifts for the
    /// numerator and denominator so that neither overflows.
    pub fn evaluate(&self, pt: &EvalPoint) -> Result<Complex64> {
        let sn = self.num.max_log_scale(pt);
        let n = self.num.evaluate_scaled(pt, sn)?;
        if self.power == 0 {
            return Ok(n * sn.exp());
        }
        let sd = self.den.max_log_scale(pt);
        let d = self.den.evaluate_scaled(pt, sd)?;
        if d == Complex64::new(0.0, 0.0) {
            return Err(Error::Domain("denominator vanishes".into()));
        }
        let k = self.power as i32;
        Ok(n / d.powi(k) * (sn - k as f64 * sd).exp())
    }

    pub fn specialize(&self, p: f64) -> QuotientExpr<f64> {
        QuotientExpr { num: self.num.specialize(p), den: self.den.specialize(p), power: self.power }
    }
}

/// Quotient-rule derivative of `num / den`.
pub fn quotient_derive<R: Scalar>(num: &TermSum<R>, den: &TermSum<R>, dir: Wirtinger) -> Result<QuotientExpr<R>> {
    QuotientExpr::new(num.clone(), den.clone())?.derive(dir)
}

impl<R: Scalar> fmt::Display for QuotientExpr<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] / [{}]^{}", self.num, self.den, self.power)
    }
}
