//! Length of piecewise-linear curves under a Finsler integrand `F(x, v)`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            // three-term recurrence for P_n and its derivative
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let pk = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = pk;
            }
            if n == 1 {
                p0 = 1.0;
                p1 = x;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Length with the difference to the once-refined partition as error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LengthEstimate {
    pub value: f64,
    pub error: f64,
}

type Point = (Complex64, Complex64);

fn composite(
    integrand: &dyn Fn(Complex64, Complex64, [Complex64; 2]) -> Result<f64>,
    pts: &[Point],
    nodes: &[f64],
    weights: &[f64],
    split: usize,
) -> Result<f64> {
    let mut total = 0.0;
    for seg in pts.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        let v = [b.0 - a.0, b.1 - a.1];
        if v[0].norm() == 0.0 && v[1].norm() == 0.0 {
            continue;
        }
        for part in 0..split {
            let t0 = part as f64 / split as f64;
            let h = 1.0 / split as f64;
            for (x, w) in nodes.iter().zip(weights) {
                let t = t0 + 0.5 * h * (x + 1.0);
                let z = a.0 + v[0] * t;
                let ww = a.1 + v[1] * t;
                total += 0.5 * h * w * integrand(z, ww, v)?;
            }
        }
    }
    Ok(total)
}

/// `∫₀¹ F(σ(t), σ′(t)) dt` for the polyline through `pts`, by composite Gauss–Legendre.
pub fn curve_length(
    integrand: &dyn Fn(Complex64, Complex64, [Complex64; 2]) -> Result<f64>,
    pts: &[Point],
    order: usize,
) -> Result<LengthEstimate> {
    if order == 0 {
        return Err(Error::Parameter("quadrature order must be positive".into()));
    }
    if pts.len() < 2 {
        return Ok(LengthEstimate { value: 0.0, error: 0.0 });
    }
    let (nodes, weights) = gauss_legendre(order);
    let coarse = composite(integrand, pts, &nodes, &weights, 1)?;
    let fine = composite(integrand, pts, &nodes, &weights, 2)?;
    Ok(LengthEstimate { value: fine, error: (fine - coarse).abs() })
}
