use num_complex::Complex64;

/// A point at which sums are evaluated.
///
/// `zbar` and `wbar` are independent slots so that holomorphic and
/// antiholomorphic arguments can be varied separately; on the diagonal they are
/// the conjugates of `z` and `w`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalPoint {
    pub p: f64,
    pub z: Complex64,
    pub zbar: Complex64,
    pub w: Complex64,
    pub wbar: Complex64,
}

impl EvalPoint {
    /// Diagonal point `(z, w)` of `E(1,1,p)`.
    pub fn new(p: f64, z: Complex64, w: Complex64) -> Self {
        EvalPoint { p, z, zbar: z.conj(), w, wbar: w.conj() }
    }

    pub fn with_conjugates(p: f64, z: Complex64, zbar: Complex64, w: Complex64, wbar: Complex64) -> Self {
        EvalPoint { p, z, zbar, w, wbar }
    }

    pub fn real(p: f64, z: f64, w: f64) -> Self {
        Self::new(p, Complex64::new(z, 0.0), Complex64::new(w, 0.0))
    }

    pub fn is_diagonal(&self) -> bool {
        self.zbar == self.z.conj() && self.wbar == self.w.conj()
    }

    /// `1 - |z|^2 - |w|^{2p}`, positive exactly on the interior.
    pub fn defining_value(&self) -> f64 {
        defining_function(self.p, self.z, self.w)
    }

    pub fn is_interior(&self) -> bool {
        self.is_diagonal() && self.defining_value() > 0.0
    }

    /// φ = 1 − z z̄.
    pub fn phi(&self) -> Complex64 {
        Complex64::new(1.0, 0.0) - self.z * self.zbar
    }

    /// ψ = φ^{1/p} − w w̄, principal branch.
    pub fn psi(&self) -> Complex64 {
        self.phi().powf(1.0 / self.p) - self.w * self.wbar
    }
}

/// `1 - |z|^2 - |w|^{2p}`.
pub fn defining_function(p: f64, z: Complex64, w: Complex64) -> f64 {
    1.0 - z.norm_sqr() - w.norm_sqr().powf(p)
}
