use num_complex::Complex64;

/// 2×2 Hermitian matrix `g[i][j] = g_{i j̄}` at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricAtPoint {
    pub g: [[Complex64; 2]; 2],
}

pub type Matrix2 = [[Complex64; 2]; 2];

impl MetricAtPoint {
    pub fn new(g: Matrix2) -> Self {
        MetricAtPoint { g }
    }

    pub fn diagonal(a: f64, b: f64) -> Self {
        let z = Complex64::new(0.0, 0.0);
        MetricAtPoint { g: [[Complex64::new(a, 0.0), z], [z, Complex64::new(b, 0.0)]] }
    }

    pub fn det(&self) -> Complex64 {
        det2(&self.g)
    }

    /// Inverse via the adjugate; `None` when singular.
    pub fn inverse(&self) -> Option<Matrix2> {
        inverse2(&self.g)
    }

    /// `g(v, v̄) = Σ g_{i j̄} v_i conj(v_j)`.
    pub fn norm_sq(&self, v: [Complex64; 2]) -> f64 {
        let mut s = Complex64::new(0.0, 0.0);
        for i in 0..2 {
            for j in 0..2 {
                s += self.g[i][j] * v[i] * v[j].conj();
            }
        }
        s.re
    }

    /// Largest deviation from `g = g^*`.
    pub fn hermitian_defect(&self) -> f64 {
        let g = &self.g;
        let d01 = (g[0][1] - g[1][0].conj()).norm();
        d01.max(g[0][0].im.abs()).max(g[1][1].im.abs())
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let a = self.g[0][0].re;
        let d = self.g[1][1].re;
        let b = 0.5 * (self.g[0][1] + self.g[1][0].conj());
        let m = 0.5 * (a + d);
        let r = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
        [m - r, m + r]
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    pub fn is_positive_definite(&self) -> bool {
        self.min_eigenvalue() > 0.0
    }

    pub fn sub(&self, other: &MetricAtPoint) -> MetricAtPoint {
        let mut g = self.g;
        for (i, row) in g.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x -= other.g[i][j];
            }
        }
        MetricAtPoint { g }
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.g.iter().flatten().map(|x| x.norm()).fold(0.0, f64::max)
    }
}

pub fn det2(g: &Matrix2) -> Complex64 {
    g[0][0] * g[1][1] - g[0][1] * g[1][0]
}

pub fn inverse2(g: &Matrix2) -> Option<Matrix2> {
    let d = det2(g);
    if d.norm() == 0.0 || !d.is_finite() {
        return None;
    }
    Some([[g[1][1] / d, -g[0][1] / d], [-g[1][0] / d, g[0][0] / d]])
}

pub fn matmul2(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    let z = Complex64::new(0.0, 0.0);
    let mut out = [[z; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn inverse_and_eigenvalues() {
        let m = MetricAtPoint::new([[c(2.0, 0.0), c(0.5, 0.5)], [c(0.5, -0.5), c(1.0, 0.0)]]);
        let inv = m.inverse().unwrap();
        let id = matmul2(&m.g, &inv);
        assert!((id[0][0] - c(1.0, 0.0)).norm() < 1e-14);
        assert!(id[0][1].norm() < 1e-14);
        let [l0, l1] = m.eigenvalues();
        assert!((l0 * l1 - m.det().re).abs() < 1e-14);
        assert!((l0 + l1 - 3.0).abs() < 1e-14);
        assert_eq!(m.hermitian_defect(), 0.0);
        assert!((m.norm_sq([c(0.0, 1.0), c(0.0, 0.0)]) - 2.0).abs() < 1e-15);
    }
}
