//! Coefficient ring of the term algebra.
//!
//! A coefficient is a Laurent polynomial in the two symbols `p` and `π`, with
//! scalars drawn from either the rationals (exact mode) or `f64` (numeric mode).
//! Every kernel coefficient is a rational multiple of `π^-2` with a Laurent
//! polynomial in `p` in front, so both symbols stay exact until evaluation.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

/// Exact scalar type.
pub type Rational = Ratio<i128>;

/// Scalar field underlying a coefficient: rationals or reals.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    /// True for the exact (rational) mode.
    const EXACT: bool;

    fn zero() -> Self;
    fn from_int(v: i64) -> Self;
    /// Embeds a real number; `None` in exact mode.
    fn from_real(v: f64) -> Option<Self>;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn to_f64(&self) -> f64;
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }
    fn from_int(v: i64) -> Self {
        Ratio::from_integer(v as i128)
    }
    fn from_real(_: f64) -> Option<Self> {
        None
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn to_f64(&self) -> f64 {
        let n = self.numer().to_f64().unwrap_or(f64::NAN);
        let d = self.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn from_int(v: i64) -> Self {
        v as f64
    }
    fn from_real(v: f64) -> Option<Self> {
        Some(v)
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

/// Key of a coefficient monomial: `(power of p, power of π)`.
pub type CoeffKey = (i32, i32);

/// Laurent polynomial in `p` and `π` over a [`Scalar`] field.
///
/// Zero entries are never stored.
#[derive(Clone, PartialEq, Debug)]
pub struct Coefficient<R: Scalar> {
    terms: BTreeMap<CoeffKey, R>,
}

impl<R: Scalar> Coefficient<R> {
    pub fn zero() -> Self {
        Coefficient { terms: BTreeMap::new() }
    }

    pub fn constant(r: R) -> Self {
        Self::monomial(r, 0, 0)
    }

    pub fn from_int(v: i64) -> Self {
        Self::constant(R::from_int(v))
    }

    /// `r · p^p_pow · π^pi_pow`.
    pub fn monomial(r: R, p_pow: i32, pi_pow: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert((p_pow, pi_pow), r);
        }
        Coefficient { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CoeffKey, &R)> {
        self.terms.iter()
    }

    /// The scalar in front of `p^p_pow π^pi_pow`, if present.
    pub fn get(&self, p_pow: i32, pi_pow: i32) -> Option<&R> {
        self.terms.get(&(p_pow, pi_pow))
    }

    fn accumulate(&mut self, key: CoeffKey, r: R) {
        if r.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(existing) => {
                let sum = existing.add(&r);
                if sum.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(key, r);
            }
        }
    }

    pub fn scale(&self, r: &R) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        let terms = self.terms.iter().map(|(k, v)| (*k, v.mul(r))).collect();
        Coefficient { terms }
    }

    /// Multiplies by `p^p_pow π^pi_pow`.
    pub fn shift(&self, p_pow: i32, pi_pow: i32) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|((a, b), v)| ((a + p_pow, b + pi_pow), v.clone()))
            .collect();
        Coefficient { terms }
    }

    /// Value at a numeric `p`.
    pub fn eval(&self, p: f64) -> f64 {
        self.terms
            .iter()
            .map(|((pp, pip), r)| r.to_f64() * p.powi(*pp) * PI.powi(*pip))
            .sum()
    }

    /// Collapses the polynomial to a real constant at the given `p`.
    pub fn to_numeric(&self, p: f64) -> Coefficient<f64> {
        Coefficient::constant(self.eval(p))
    }
}

impl<R: Scalar> Add<&Coefficient<R>> for &Coefficient<R> {
    type Output = Coefficient<R>;
    fn add(self, rhs: &Coefficient<R>) -> Coefficient<R> {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.accumulate(*k, v.clone());
        }
        out
    }
}

impl<R: Scalar> Sub<&Coefficient<R>> for &Coefficient<R> {
    type Output = Coefficient<R>;
    fn sub(self, rhs: &Coefficient<R>) -> Coefficient<R> {
        self + &(-rhs)
    }
}

impl<R: Scalar> Neg for &Coefficient<R> {
    type Output = Coefficient<R>;
    fn neg(self) -> Coefficient<R> {
        let terms = self.terms.iter().map(|(k, v)| (*k, v.neg())).collect();
        Coefficient { terms }
    }
}

impl<R: Scalar> Mul<&Coefficient<R>> for &Coefficient<R> {
    type Output = Coefficient<R>;
    fn mul(self, rhs: &Coefficient<R>) -> Coefficient<R> {
        let mut out = Coefficient::zero();
        for ((a1, b1), v1) in &self.terms {
            for ((a2, b2), v2) in &rhs.terms {
                out.accumulate((a1 + a2, b1 + b2), v1.mul(v2));
            }
        }
        out
    }
}

impl<R: Scalar> fmt::Display for Coefficient<R> {
    /// `(r*p^a*pi^b + ...)`; factors with exponent 0 are omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "(0)");
        }
        write!(f, "(")?;
        for (n, ((pp, pip), r)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{r}")?;
            if *pp != 0 {
                write!(f, "*p^{pp}")?;
            }
            if *pip != 0 {
                write!(f, "*pi^{pip}")?;
            }
        }
        write!(f, ")")
    }
}
