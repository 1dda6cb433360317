use num_complex::Complex64;

use crate::error::{Error, Result};

/// `φ_a(z, w) = ((a − z)/(1 − āz), w (1 − |a|²)^{1/(2p)} / (1 − āz)^{1/p})`.
///
/// The root `(1 − āz)^{1/p}` is the principal branch; `Re(1 − āz) > 0` on the disk.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Automorphism {
    pub a: Complex64,
    pub p: f64,
}

impl Automorphism {
    pub fn new(a: Complex64, p: f64) -> Result<Self> {
        if a.norm() >= 1.0 {
            return Err(Error::Parameter(format!("automorphism centre must satisfy |a| < 1, got {a}")));
        }
        Ok(Automorphism { a, p })
    }

    fn s(&self) -> f64 {
        (1.0 - self.a.norm_sqr()).powf(0.5 / self.p)
    }

    pub fn apply(&self, z: Complex64, w: Complex64) -> (Complex64, Complex64) {
        let one = Complex64::new(1.0, 0.0);
        let den = one - self.a.conj() * z;
        ((self.a - z) / den, w * self.s() / den.powf(1.0 / self.p))
    }

    /// Jacobian `J[i][j] = ∂φ_i/∂x_j` with `x = (z, w)`.
    pub fn jacobian(&self, z: Complex64, w: Complex64) -> [[Complex64; 2]; 2] {
        let one = Complex64::new(1.0, 0.0);
        let ab = self.a.conj();
        let den = one - ab * z;
        let root = den.powf(-1.0 / self.p);
        let s = self.s();
        [
            [Complex64::new(self.a.norm_sqr() - 1.0, 0.0) / (den * den), Complex64::new(0.0, 0.0)],
            [w * s * ab / self.p * root / den, root * s],
        ]
    }

    /// Push-forward of a tangent vector.
    pub fn push(&self, z: Complex64, w: Complex64, v: [Complex64; 2]) -> [Complex64; 2] {
        let j = self.jacobian(z, w);
        [j[0][0] * v[0] + j[0][1] * v[1], j[1][0] * v[0] + j[1][1] * v[1]]
    }
}

pub fn automorphism(a: Complex64, p: f64, z: Complex64, w: Complex64) -> Result<(Complex64, Complex64)> {
    Ok(Automorphism::new(a, p)?.apply(z, w))
}

pub fn automorphism_differential(
    a: Complex64,
    p: f64,
    z: Complex64,
    w: Complex64,
    v: [Complex64; 2],
) -> Result<[Complex64; 2]> {
    Ok(Automorphism::new(a, p)?.push(z, w, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term_algebra::defining_function;

    #[test]
    fn centres_and_preserves_domain() {
        let a = Complex64::new(0.4, -0.2);
        let f = Automorphism::new(a, 2.0).unwrap();
        let (z0, w0) = f.apply(a, Complex64::new(0.0, 0.0));
        assert!(z0.norm() < 1e-15 && w0.norm() == 0.0);
        let (z, w) = (Complex64::new(-0.3, 0.5), Complex64::new(0.5, 0.2));
        let (z1, w1) = f.apply(z, w);
        // 1 − |φ₁|² = (1−|a|²)(1−|z|²)/|1−āz|² and |φ₂|^{2p} scales by the same factor
        let k = (1.0 - a.norm_sqr()) / (Complex64::new(1.0, 0.0) - a.conj() * z).norm_sqr();
        let lhs = defining_function(2.0, z1, w1);
        assert!((lhs - k * defining_function(2.0, z, w)).abs() < 1e-14);
        let (zm, wm) = automorphism(Complex64::new(0.0, 0.0), 2.0, z, w).unwrap();
        assert_eq!((zm, wm), (-z, w));
    }
}
