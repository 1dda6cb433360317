use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::coefficient::{Coefficient, Scalar};
use super::exponent::Exponent;
use super::point::EvalPoint;
use super::Wirtinger;
use crate::error::{Error, Result};

/// `z^i z̄^j w^k w̄^l φ^α ψ^β`; ordered lexicographically on `(i, j, k, l, α, β)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Monomial {
    pub z: u32,
    pub zbar: u32,
    pub w: u32,
    pub wbar: u32,
    pub phi: Exponent,
    pub psi: Exponent,
}

impl Monomial {
    pub const ONE: Monomial = Monomial {
        z: 0,
        zbar: 0,
        w: 0,
        wbar: 0,
        phi: Exponent::ZERO,
        psi: Exponent::ZERO,
    };

    pub fn phi_psi(phi: Exponent, psi: Exponent) -> Self {
        Monomial { phi, psi, ..Self::ONE }
    }

    pub fn times(&self, other: &Monomial) -> Monomial {
        Monomial {
            z: self.z + other.z,
            zbar: self.zbar + other.zbar,
            w: self.w + other.w,
            wbar: self.wbar + other.wbar,
            phi: self.phi + other.phi,
            psi: self.psi + other.psi,
        }
    }

    /// z ↔ z̄ and w ↔ w̄.
    pub fn conjugate(&self) -> Monomial {
        Monomial { z: self.zbar, zbar: self.z, w: self.wbar, wbar: self.w, ..*self }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Term<R: Scalar> {
    pub coeff: Coefficient<R>,
    pub mono: Monomial,
}

/// Normalized sum of terms: sorted by monomial, like terms merged, no zero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct TermSum<R: Scalar> {
    terms: Vec<Term<R>>,
}

/// Exact-mode sum (rational Laurent coefficients).
pub type ExactSum = TermSum<super::Rational>;
/// Numeric-mode sum (real coefficients, real exponent offsets allowed).
pub type NumericSum = TermSum<f64>;

struct Accumulator<R: Scalar> {
    map: BTreeMap<Monomial, Coefficient<R>>,
}

impl<R: Scalar> Accumulator<R> {
    fn new() -> Self {
        Accumulator { map: BTreeMap::new() }
    }

    fn push(&mut self, coeff: Coefficient<R>, mono: Monomial) {
        if coeff.is_zero() {
            return;
        }
        match self.map.get_mut(&mono) {
            Some(c) => *c = &*c + &coeff,
            None => {
                self.map.insert(mono, coeff);
            }
        }
    }

    fn finish(self) -> TermSum<R> {
        let terms = self
            .map
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(mono, coeff)| Term { coeff, mono })
            .collect();
        TermSum { terms }
    }
}

/// Sorts, merges like terms and drops zeros. Idempotent and order-independent.
pub fn normalize<R: Scalar>(terms: impl IntoIterator<Item = Term<R>>) -> TermSum<R> {
    let mut acc = Accumulator::new();
    for t in terms {
        acc.push(t.coeff, t.mono);
    }
    acc.finish()
}

impl<R: Scalar> TermSum<R> {
    pub fn zero() -> Self {
        TermSum { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Coefficient::from_int(1))
    }

    pub fn constant(c: Coefficient<R>) -> Self {
        Self::monomial(c, Monomial::ONE)
    }

    pub fn monomial(coeff: Coefficient<R>, mono: Monomial) -> Self {
        normalize([Term { coeff, mono }])
    }

    fn generator(mono: Monomial) -> Self {
        Self::monomial(Coefficient::from_int(1), mono)
    }

    pub fn z() -> Self {
        Self::generator(Monomial { z: 1, ..Monomial::ONE })
    }
    pub fn zbar() -> Self {
        Self::generator(Monomial { zbar: 1, ..Monomial::ONE })
    }
    pub fn w() -> Self {
        Self::generator(Monomial { w: 1, ..Monomial::ONE })
    }
    pub fn wbar() -> Self {
        Self::generator(Monomial { wbar: 1, ..Monomial::ONE })
    }
    /// φ = 1 − z z̄.
    pub fn phi() -> Self {
        Self::generator(Monomial::phi_psi(Exponent::integer(1), Exponent::ZERO))
    }
    /// ψ = φ^{1/p} − w w̄.
    pub fn psi() -> Self {
        Self::generator(Monomial::phi_psi(Exponent::ZERO, Exponent::integer(1)))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = Term<R>>) -> Self {
        normalize(terms)
    }

    pub fn terms(&self) -> &[Term<R>] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn scale(&self, c: &Coefficient<R>) -> Self {
        normalize(self.terms.iter().map(|t| Term { coeff: &t.coeff * c, mono: t.mono }))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Exchanges holomorphic and antiholomorphic variables.
    pub fn conjugate(&self) -> Self {
        normalize(self.terms.iter().map(|t| Term { coeff: t.coeff.clone(), mono: t.mono.conjugate() }))
    }

    /// Wirtinger derivative, built from the rules
    /// ∂φ/∂z = −z̄, ∂φ/∂z̄ = −z, ∂ψ/∂z = −(1/p) z̄ φ^{1/p−1}, ∂ψ/∂z̄ = −(1/p) z φ^{1/p−1},
    /// ∂ψ/∂w = −w̄, ∂ψ/∂w̄ = −w, ∂φ/∂w = ∂φ/∂w̄ = 0.
    pub fn derive(&self, dir: Wirtinger) -> Result<Self> {
        let mut acc = Accumulator::new();
        let minus_one = Coefficient::<R>::from_int(-1);
        for t in &self.terms {
            let m = t.mono;
            // power of the variable being differentiated
            let own = match dir {
                Wirtinger::Z => m.z,
                Wirtinger::ZBar => m.zbar,
                Wirtinger::W => m.w,
                Wirtinger::WBar => m.wbar,
            };
            if own > 0 {
                let mut m2 = m;
                match dir {
                    Wirtinger::Z => m2.z -= 1,
                    Wirtinger::ZBar => m2.zbar -= 1,
                    Wirtinger::W => m2.w -= 1,
                    Wirtinger::WBar => m2.wbar -= 1,
                }
                acc.push(t.coeff.scale(&R::from_int(own as i64)), m2);
            }
            // the partner variable picked up by the chain rule
            let bump = |mut m2: Monomial| {
                match dir {
                    Wirtinger::Z => m2.zbar += 1,
                    Wirtinger::ZBar => m2.z += 1,
                    Wirtinger::W => m2.wbar += 1,
                    Wirtinger::WBar => m2.w += 1,
                }
                m2
            };
            let in_z = matches!(dir, Wirtinger::Z | Wirtinger::ZBar);
            if in_z && !m.phi.is_zero() {
                let alpha = m.phi.to_coefficient::<R>()?;
                let coeff = &(&t.coeff * &alpha) * &minus_one;
                let m2 = Monomial { phi: m.phi - Exponent::integer(1), ..m };
                acc.push(coeff, bump(m2));
            }
            if !m.psi.is_zero() {
                let beta = m.psi.to_coefficient::<R>()?;
                let mut coeff = &(&t.coeff * &beta) * &minus_one;
                let mut m2 = Monomial { psi: m.psi - Exponent::integer(1), ..m };
                if in_z {
                    coeff = coeff.shift(-1, 0);
                    m2.phi = m2.phi + Exponent::new(-1, 1);
                }
                acc.push(coeff, bump(m2));
            }
        }
        Ok(acc.finish())
    }

    /// Applies a sequence of Wirtinger derivatives left to right.
    pub fn derive_seq(&self, dirs: &[Wirtinger]) -> Result<Self> {
        let mut out = self.clone();
        for d in dirs {
            out = out.derive(*d)?;
        }
        Ok(out)
    }

    /// Numeric value; real powers of φ and ψ use positive-real exponentiation.
    pub fn evaluate(&self, pt: &EvalPoint) -> Result<Complex64> {
        self.evaluate_scaled(pt, 0.0)
    }

    /// Value multiplied by `exp(-log_shift)`; keeps large negative powers near the
    /// boundary inside the floating-point range.
    pub fn evaluate_scaled(&self, pt: &EvalPoint, log_shift: f64) -> Result<Complex64> {
        let ctx = Bases::new(pt);
        let mut total = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            total += ctx.term_value(&t.coeff, &t.mono, log_shift)?;
        }
        Ok(total)
    }

    /// Largest `α ln φ + β ln ψ` over the terms (zero when undefined).
    pub fn max_log_scale(&self, pt: &EvalPoint) -> f64 {
        let ctx = Bases::new(pt);
        let (Some(lp), Some(ls)) = (ctx.ln_phi, ctx.ln_psi) else {
            return 0.0;
        };
        self.terms
            .iter()
            .map(|t| t.mono.phi.value(pt.p) * lp + t.mono.psi.value(pt.p) * ls)
            .fold(f64::NEG_INFINITY, f64::max)
            .max(f64::MIN)
    }

    /// Collapses `p` to a number: coefficients become real constants and the
    /// `1/p` parts of exponents become real offsets.
    pub fn specialize(&self, p: f64) -> NumericSum {
        normalize(self.terms.iter().map(|t| Term {
            coeff: t.coeff.to_numeric(p),
            mono: Monomial { phi: t.mono.phi.specialize(p), psi: t.mono.psi.specialize(p), ..t.mono },
        }))
    }
}

/// φ and ψ at a point together with their logarithms when they are positive reals.
struct Bases {
    p: f64,
    z: Complex64,
    zbar: Complex64,
    w: Complex64,
    wbar: Complex64,
    phi: Complex64,
    psi: Complex64,
    ln_phi: Option<f64>,
    ln_psi: Option<f64>,
}

fn positive_real_log(c: Complex64) -> Option<f64> {
    if c.re > 0.0 && c.im.abs() <= 1e-14 * c.re {
        Some(c.re.ln())
    } else {
        None
    }
}

impl Bases {
    fn new(pt: &EvalPoint) -> Self {
        let phi = pt.phi();
        let ln_phi = positive_real_log(phi);
        // ψ through the positive-real root when φ > 0 keeps it exactly real on the diagonal
        let phi_root = match ln_phi {
            Some(l) => Complex64::new((l / pt.p).exp(), 0.0),
            None => phi.powf(1.0 / pt.p),
        };
        let psi = phi_root - pt.w * pt.wbar;
        Bases {
            p: pt.p,
            z: pt.z,
            zbar: pt.zbar,
            w: pt.w,
            wbar: pt.wbar,
            phi,
            psi,
            ln_phi,
            ln_psi: positive_real_log(psi),
        }
    }

    fn power(&self, base: Complex64, ln: Option<f64>, e: &Exponent, name: &str) -> Result<(f64, Complex64)> {
        if e.is_zero() {
            return Ok((0.0, Complex64::new(1.0, 0.0)));
        }
        if let Some(l) = ln {
            return Ok((e.value(self.p) * l, Complex64::new(1.0, 0.0)));
        }
        if e.is_integral(self.p) {
            return Ok((0.0, base.powi(e.value(self.p).round() as i32)));
        }
        Err(Error::Domain(format!(
            "{name} = {base} is not a positive real; cannot raise it to the power {e}"
        )))
    }

    fn term_value<R: Scalar>(&self, coeff: &Coefficient<R>, m: &Monomial, log_shift: f64) -> Result<Complex64> {
        let (lphi, fphi) = self.power(self.phi, self.ln_phi, &m.phi, "phi")?;
        let (lpsi, fpsi) = self.power(self.psi, self.ln_psi, &m.psi, "psi")?;
        let scale = (lphi + lpsi - log_shift).exp();
        let mut v = Complex64::new(coeff.eval(self.p) * scale, 0.0) * fphi * fpsi;
        if m.z > 0 {
            v *= self.z.powu(m.z);
        }
        if m.zbar > 0 {
            v *= self.zbar.powu(m.zbar);
        }
        if m.w > 0 {
            v *= self.w.powu(m.w);
        }
        if m.wbar > 0 {
            v *= self.wbar.powu(m.wbar);
        }
        Ok(v)
    }
}

impl<R: Scalar> Add<&TermSum<R>> for &TermSum<R> {
    type Output = TermSum<R>;
    fn add(self, rhs: &TermSum<R>) -> TermSum<R> {
        normalize(self.terms.iter().chain(rhs.terms.iter()).cloned())
    }
}

impl<R: Scalar> Sub<&TermSum<R>> for &TermSum<R> {
    type Output = TermSum<R>;
    fn sub(self, rhs: &TermSum<R>) -> TermSum<R> {
        self + &(-rhs)
    }
}

impl<R: Scalar> Neg for &TermSum<R> {
    type Output = TermSum<R>;
    fn neg(self) -> TermSum<R> {
        TermSum { terms: self.terms.iter().map(|t| Term { coeff: -&t.coeff, mono: t.mono }).collect() }
    }
}

impl<R: Scalar> Mul<&TermSum<R>> for &TermSum<R> {
    type Output = TermSum<R>;
    fn mul(self, rhs: &TermSum<R>) -> TermSum<R> {
        let mut acc = Accumulator::new();
        for a in &self.terms {
            for b in &rhs.terms {
                acc.push(&a.coeff * &b.coeff, a.mono.times(&b.mono));
            }
        }
        acc.finish()
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl<R: Scalar> $tr for TermSum<R> {
            type Output = TermSum<R>;
            fn $m(self, rhs: TermSum<R>) -> TermSum<R> {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl<R: Scalar> Neg for TermSum<R> {
    type Output = TermSum<R>;
    fn neg(self) -> TermSum<R> {
        -&self
    }
}

impl<R: Scalar> fmt::Display for Term<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.mono;
        write!(
            f,
            "{} * z^{} zb^{} w^{} wb^{} * phi^{} * psi^{}",
            self.coeff, m.z, m.zbar, m.w, m.wbar, m.phi, m.psi
        )
    }
}

impl<R: Scalar> fmt::Display for TermSum<R> {
    /// Deterministic debug form, one `c * z^i zb^j w^k wb^l * phi^(..) * psi^(..)`
    /// per term joined by ` + `.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, t) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}
