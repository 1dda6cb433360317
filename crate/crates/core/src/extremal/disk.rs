//! Analytic disks `f(λ) = b + α(λv + Σ_{k≥2} c_k λ^k)` and their certified radii.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::TangentData;

/// Boundary samples used for certification.
pub const CERT_SAMPLES: usize = 2048;
/// Boundary samples used while searching.
const SEARCH_SAMPLES: usize = 256;
/// Required clearance below the level set `|z|² + |w|^{2p} = 1`.
pub const SAFETY_MARGIN: f64 = 1e-12;
/// Absolute width at which the certified bisection stops.
pub const BISECTION_TOL: f64 = 1e-10;

/// Shape of a disk candidate: `s(λ) = λv + Σ_{k=2}^{d} c_k λ^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiskShape {
    pub v: [Complex64; 2],
    /// `c₂ … c_d`.
    pub coeffs: Vec<[Complex64; 2]>,
}

impl DiskShape {
    pub fn affine(v: [Complex64; 2]) -> Self {
        DiskShape { v, coeffs: Vec::new() }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() + 1
    }

    /// Taylor coefficients of `f` for the scale `α`, per coordinate, index = power of `λ`.
    fn taylor(&self, base: [Complex64; 2], alpha: f64) -> [Vec<Complex64>; 2] {
        let mut out = [vec![base[0], alpha * self.v[0]], vec![base[1], alpha * self.v[1]]];
        for c in &self.coeffs {
            out[0].push(alpha * c[0]);
            out[1].push(alpha * c[1]);
        }
        out
    }

    fn from_params(v: [Complex64; 2], x: &[f64]) -> Self {
        let coeffs = x
            .chunks(4)
            .map(|c| [Complex64::new(c[0], c[1]), Complex64::new(c[2], c[3])])
            .collect();
        DiskShape { v, coeffs }
    }
}

/// Shape values `s(λ_j)` on `N` equispaced boundary points.
struct SampledShape {
    s: Vec<[Complex64; 2]>,
}

impl SampledShape {
    fn new(shape: &DiskShape, n: usize) -> Self {
        let s = (0..n)
            .map(|j| {
                let lam = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64);
                let mut pw = lam;
                let mut acc = [shape.v[0] * lam, shape.v[1] * lam];
                for c in &shape.coeffs {
                    pw *= lam;
                    acc[0] += c[0] * pw;
                    acc[1] += c[1] * pw;
                }
                acc
            })
            .collect();
        SampledShape { s }
    }

    /// `max_j |b₁ + αs₁|² + |b₂ + αs₂|^{2p}`.
    fn max_level(&self, base: [Complex64; 2], alpha: f64, p: f64) -> f64 {
        self.s
            .iter()
            .map(|s| {
                let f1 = base[0] + alpha * s[0];
                let f2 = base[1] + alpha * s[1];
                f1.norm_sqr() + pow_p(f2.norm_sqr(), p)
            })
            .fold(0.0, f64::max)
    }

    fn min_abs_second(&self, base: Complex64, alpha: f64) -> f64 {
        self.s.iter().map(|s| (base + alpha * s[1]).norm()).fold(f64::INFINITY, f64::min)
    }
}

/// `x^p` for `x ≥ 0` with the common integer cases done exactly.
fn pow_p(x: f64, p: f64) -> f64 {
    if p == 1.0 {
        x
    } else if p == 2.0 {
        x * x
    } else if x == 0.0 {
        0.0
    } else {
        x.powf(p)
    }
}

/// `Σ_{j,k} |a_j||a_k||j − k|`, a bound on `|d/dθ |Σ a_k e^{ikθ}|²|`.
fn modulus_sq_lipschitz(a: &[Complex64]) -> f64 {
    let m: Vec<f64> = a.iter().map(|x| x.norm()).collect();
    let mut s = 0.0;
    for j in 0..m.len() {
        for k in (j + 1)..m.len() {
            s += 2.0 * m[j] * m[k] * (k - j) as f64;
        }
    }
    s
}

/// Bound on `|d/dθ (|f₁|² + |f₂|^{2p})|` on the unit circle.
fn lipschitz_bound(t: &[Vec<Complex64>; 2], p: f64, sampled: &SampledShape, base2: Complex64, alpha: f64, n: usize) -> f64 {
    let l1 = modulus_sq_lipschitz(&t[0]);
    let b = &t[1];
    let m: f64 = b.iter().map(|x| x.norm()).sum();
    if m == 0.0 {
        return l1;
    }
    let d2: f64 = b.iter().enumerate().map(|(k, x)| k as f64 * x.norm()).sum();
    if d2 == 0.0 {
        return l1;
    }
    let b1 = modulus_sq_lipschitz(b);
    // lower bound on |f₂| over the whole circle
    let gmin = sampled.min_abs_second(base2, alpha) - d2 * PI / n as f64;
    let via_square = if p >= 1.0 {
        p * m.powf(2.0 * p - 2.0) * b1
    } else if b1 == 0.0 {
        0.0
    } else if gmin > 0.0 {
        p * gmin.powf(2.0 * p - 2.0) * b1
    } else {
        f64::INFINITY
    };
    let via_modulus = if p >= 0.5 {
        2.0 * p * m.powf(2.0 * p - 1.0) * d2
    } else if gmin > 0.0 {
        2.0 * p * gmin.powf(2.0 * p - 1.0) * d2
    } else {
        f64::INFINITY
    };
    let l2 = via_square.min(via_modulus);
    l1 + l2
}

fn cert_samples(p: f64) -> usize {
    if p < 1.0 {
        2 * CERT_SAMPLES
    } else {
        CERT_SAMPLES
    }
}

/// Containment test with Lipschitz margin on a fixed sampling.
fn certified_with(sampled: &SampledShape, shape: &DiskShape, base: [Complex64; 2], alpha: f64, p: f64) -> bool {
    let n = sampled.s.len();
    let top = sampled.max_level(base, alpha, p);
    if top >= 1.0 {
        return false;
    }
    let t = shape.taylor(base, alpha);
    let l = lipschitz_bound(&t, p, sampled, base[1], alpha, n);
    top + l * PI / n as f64 <= 1.0 - SAFETY_MARGIN
}

/// True when the closed disk of scale `α` is certified to lie in `E(1,1,p)`.
pub fn certify(shape: &DiskShape, base: [Complex64; 2], alpha: f64, p: f64) -> bool {
    let sampled = SampledShape::new(shape, cert_samples(p));
    certified_with(&sampled, shape, base, alpha, p)
}

/// Largest `α` passing `accept`, by doubling then bisection; returns the accepted end.
fn bisect_alpha(accept: impl Fn(f64) -> bool, tol: f64) -> f64 {
    if !accept(0.0) {
        return 0.0;
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while accept(hi) {
        lo = hi;
        hi *= 2.0;
        if hi > 1e8 {
            return lo;
        }
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if accept(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Certified radius `α*` of a shape: bisection to `1e-10` on the certificate.
pub fn certified_alpha(shape: &DiskShape, base: [Complex64; 2], p: f64) -> f64 {
    let sampled = SampledShape::new(shape, cert_samples(p));
    bisect_alpha(|a| certified_with(&sampled, shape, base, a, p), BISECTION_TOL)
}

/// Uncertified radius on a coarse subsample; an upper estimate of [`certified_alpha`].
fn search_alpha(sampled: &SampledShape, base: [Complex64; 2], p: f64) -> f64 {
    let accept = |a: f64| sampled.max_level(base, a, p) < 1.0;
    let lo = bisect_alpha(accept, 1e-9);
    lo + 1e-9
}

/// Kobayashi upper bound `1/α*` from the straight disk `b + αλv`.
pub fn affine_disk_radius(t: &TangentData, p: f64) -> f64 {
    let alpha = certified_alpha(&DiskShape::affine(t.v), t.base(), p);
    1.0 / alpha
}

/// Outcome of a disk search at one degree.
#[derive(Clone, Debug, PartialEq)]
pub struct DiskSearch {
    pub degree: usize,
    pub best: DiskShape,
    pub alpha: f64,
    pub evaluations: usize,
}

/// Deterministic local search over shapes of a fixed degree.
///
/// The trajectory does not depend on `budget`, so the result is monotone in it.
fn search_degree(t: &TangentData, p: f64, degree: usize, budget: usize) -> DiskSearch {
    let base = t.base();
    let affine = DiskShape::affine(t.v);
    let affine_alpha = certified_alpha(&affine, base, p);
    if degree <= 1 || budget == 0 {
        return DiskSearch { degree: 1, best: affine, alpha: affine_alpha, evaluations: 0 };
    }
    let dim = 4 * (degree - 1);
    let mut evals = 0usize;
    let mut improving: Vec<(f64, Vec<f64>)> = Vec::new();
    let mut best_x = vec![0.0; dim];
    let mut best_val = f64::NEG_INFINITY;

    let evaluate = |x: &[f64], evals: &mut usize| -> f64 {
        *evals += 1;
        let shape = DiskShape::from_params(t.v, x);
        search_alpha(&SampledShape::new(&shape, SEARCH_SAMPLES), base, p)
    };

    // geometric seeds c_k = (−β)^{k−1} v, the Taylor pattern of Möbius disks
    let mut seeds: Vec<Vec<f64>> = Vec::new();
    for phase_src in [base[0], base[1]] {
        let phase = if phase_src.norm() > 0.0 { (phase_src / phase_src.norm()).conj() } else { Complex64::new(1.0, 0.0) };
        for r in 0..10 {
            let beta = phase * (r as f64 / 10.0);
            let mut x = Vec::with_capacity(dim);
            let mut pw = -beta;
            for _ in 2..=degree {
                let c = [pw * t.v[0], pw * t.v[1]];
                x.extend_from_slice(&[c[0].re, c[0].im, c[1].re, c[1].im]);
                pw *= -beta;
            }
            seeds.push(x);
        }
    }
    for x in seeds {
        if evals >= budget {
            break;
        }
        let v = evaluate(&x, &mut evals);
        if v > best_val + 1e-12 {
            best_val = v;
            best_x = x;
            improving.push((v, best_x.clone()));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_d15c + degree as u64);
    let mut step = 0.05;
    'outer: while evals < budget {
        let mut improved = false;
        for i in 0..dim {
            for sgn in [1.0, -1.0] {
                if evals >= budget {
                    break 'outer;
                }
                let mut x = best_x.clone();
                x[i] += sgn * step;
                let v = evaluate(&x, &mut evals);
                if v > best_val + 1e-12 {
                    best_val = v;
                    best_x = x;
                    improving.push((v, best_x.clone()));
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            step *= 0.5;
            if step < 1e-4 {
                // restart around the incumbent
                step = 0.05;
                let x: Vec<f64> = best_x.iter().map(|xi| xi + rng.gen_range(-0.05..0.05)).collect();
                if evals >= budget {
                    break;
                }
                let v = evaluate(&x, &mut evals);
                if v > best_val + 1e-12 {
                    best_val = v;
                    best_x = x;
                    improving.push((v, best_x.clone()));
                }
            }
        }
    }

    // certify improving candidates best-first; the search value bounds the certified one
    improving.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut best = (affine_alpha, DiskShape::affine(t.v));
    for (v, x) in improving {
        if v <= best.0 {
            break;
        }
        let shape = DiskShape::from_params(t.v, &x);
        let a = certified_alpha(&shape, base, p);
        if a > best.0 {
            best = (a, shape);
        }
    }
    DiskSearch { degree, best: best.1, alpha: best.0, evaluations: evals }
}

/// Best certified Kobayashi upper bound `1/α*` over disks of degree at most `degree`.
///
/// Non-increasing in both `degree` and `budget` (evaluations per degree).
pub fn kobayashi_upper(t: &TangentData, p: f64, degree: usize, budget: usize) -> f64 {
    kobayashi_search(t, p, degree, budget).alpha.recip()
}

/// The winning disk of [`kobayashi_upper`].
pub fn kobayashi_search(t: &TangentData, p: f64, degree: usize, budget: usize) -> DiskSearch {
    let mut best = search_degree(t, p, 1, budget);
    for d in 2..=degree.max(1) {
        let s = search_degree(t, p, d, budget);
        if s.alpha > best.alpha {
            best = s;
        }
    }
    best
}

/// Largest sampled value of `|f₁|² + |f₂|^{2p}` on a circle of `n` points.
pub fn boundary_level(shape: &DiskShape, base: [Complex64; 2], alpha: f64, p: f64, n: usize) -> f64 {
    SampledShape::new(shape, n).max_level(base, alpha, p)
}
