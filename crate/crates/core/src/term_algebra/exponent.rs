use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use super::coefficient::{Coefficient, Scalar};
use crate::error::{Error, Result};

/// Real power of φ or ψ: `int_part + invp_part / p + numeric_part`.
///
/// `numeric_part` is zero in exact mode and only carries the free real offset
/// of the Yin potential.
#[derive(Clone, Copy, Debug)]
pub struct Exponent {
    pub int_part: i32,
    pub invp_part: i32,
    pub numeric_part: f64,
}

impl Exponent {
    pub const ZERO: Exponent = Exponent { int_part: 0, invp_part: 0, numeric_part: 0.0 };

    pub fn new(int_part: i32, invp_part: i32) -> Self {
        Exponent { int_part, invp_part, numeric_part: 0.0 }
    }

    pub fn integer(n: i32) -> Self {
        Self::new(n, 0)
    }

    pub fn numeric(value: f64) -> Self {
        Exponent { int_part: 0, invp_part: 0, numeric_part: value }
    }

    pub fn is_exact(&self) -> bool {
        self.numeric_part == 0.0
    }

    pub fn is_zero(&self) -> bool {
        self.int_part == 0 && self.invp_part == 0 && self.numeric_part == 0.0
    }

    pub fn value(&self, p: f64) -> f64 {
        self.int_part as f64 + self.invp_part as f64 / p + self.numeric_part
    }

    /// True when the exponent is an integer at this `p` (so negative bases are allowed).
    pub fn is_integral(&self, p: f64) -> bool {
        if self.invp_part == 0 && self.numeric_part == 0.0 {
            return true;
        }
        let v = self.value(p);
        (v - v.round()).abs() <= 1e-12 * v.abs().max(1.0)
    }

    /// The exponent as a coefficient, i.e. the factor produced by the power rule.
    pub fn to_coefficient<R: Scalar>(&self) -> Result<Coefficient<R>> {
        let mut c = &Coefficient::<R>::from_int(self.int_part as i64)
            + &Coefficient::monomial(R::from_int(self.invp_part as i64), -1, 0);
        if self.numeric_part != 0.0 {
            let r = R::from_real(self.numeric_part).ok_or_else(|| {
                Error::ModeMismatch(format!(
                    "exponent carries a real offset {} in an exact-mode sum",
                    self.numeric_part
                ))
            })?;
            c = &c + &Coefficient::constant(r);
        }
        Ok(c)
    }

    /// Folds the `1/p` part into the real offset for a fixed `p`; integral
    /// values collapse to a pure integer exponent.
    pub fn specialize(&self, p: f64) -> Exponent {
        let v = self.invp_part as f64 / p + self.numeric_part;
        if (v - v.round()).abs() <= 1e-12 * v.abs().max(1.0) {
            return Exponent::integer(self.int_part + v.round() as i32);
        }
        Exponent { int_part: self.int_part, invp_part: 0, numeric_part: v }
    }
}

impl Add for Exponent {
    type Output = Exponent;
    fn add(self, rhs: Exponent) -> Exponent {
        Exponent {
            int_part: self.int_part + rhs.int_part,
            invp_part: self.invp_part + rhs.invp_part,
            numeric_part: self.numeric_part + rhs.numeric_part,
        }
    }
}

impl Sub for Exponent {
    type Output = Exponent;
    fn sub(self, rhs: Exponent) -> Exponent {
        self + (-rhs)
    }
}

impl Neg for Exponent {
    type Output = Exponent;
    fn neg(self) -> Exponent {
        Exponent {
            int_part: -self.int_part,
            invp_part: -self.invp_part,
            numeric_part: -self.numeric_part,
        }
    }
}

impl PartialEq for Exponent {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Exponent {}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.int_part
            .cmp(&other.int_part)
            .then(self.invp_part.cmp(&other.invp_part))
            .then(self.numeric_part.total_cmp(&other.numeric_part))
    }
}

impl fmt::Display for Exponent {
    /// `(a+b/p)`, with `+r` appended when a real offset is present.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}{:+}/p", self.int_part, self.invp_part)?;
        if self.numeric_part != 0.0 {
            write!(f, "{:+}", self.numeric_part)?;
        }
        write!(f, ")")
    }
}
