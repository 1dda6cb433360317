//! Symbolic term algebra over `z, z̄, w, w̄, φ, ψ` with `φ = 1 − z z̄` and
//! `ψ = φ^{1/p} − w w̄`.
//!
//! Sums are kept normalized (sorted, like terms merged, zero terms dropped),
//! so structural equality is semantic equality for sums built from the
//! generators.

mod coefficient;
mod exponent;
mod point;
mod quotient;
mod sum;

pub use coefficient::{CoeffKey, Coefficient, Rational, Scalar};
pub use exponent::Exponent;
pub use point::{defining_function, EvalPoint};
pub use quotient::{quotient_derive, QuotientExpr};
pub use sum::{normalize, ExactSum, Monomial, NumericSum, Term, TermSum};

/// Wirtinger derivative direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Wirtinger {
    Z,
    ZBar,
    W,
    WBar,
}

impl Wirtinger {
    /// Holomorphic direction of coordinate `i` (0 → z, 1 → w).
    pub fn holo(i: usize) -> Self {
        if i == 0 {
            Wirtinger::Z
        } else {
            Wirtinger::W
        }
    }

    /// Antiholomorphic direction of coordinate `i`.
    pub fn anti(i: usize) -> Self {
        if i == 0 {
            Wirtinger::ZBar
        } else {
            Wirtinger::WBar
        }
    }

    pub fn conjugate(self) -> Self {
        match self {
            Wirtinger::Z => Wirtinger::ZBar,
            Wirtinger::ZBar => Wirtinger::Z,
            Wirtinger::W => Wirtinger::WBar,
            Wirtinger::WBar => Wirtinger::W,
        }
    }
}
