//! Möbius-composed linear functionals `m_c ∘ L`, `L = s(u₁z + u₂w)`, mapping `E(1,1,p)` into the disk.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::TangentData;

/// Certified upper bound on `h(u) = sup_E |u₁z + u₂w|`.
///
/// `h(u) = max_{r∈[0,1]} |u₁|r + |u₂|(1 − r²)^{1/(2p)}`; for `p ≥ 1/2` the
/// objective is concave and the tangent line at the located maximizer bounds
/// it from above on all of `[0, 1]`.
pub fn support_function(u: [Complex64; 2], p: f64) -> f64 {
    let a = u[0].norm();
    let b = u[1].norm();
    if b == 0.0 {
        return a;
    }
    let q = 1.0 / (2.0 * p);
    let h = |r: f64| a * r + b * (1.0 - r * r).max(0.0).powf(q);
    let up = 1.0 + 1e-14;
    if q <= 1.0 {
        let dh = |r: f64| a - b * 2.0 * q * r * (1.0 - r * r).powf(q - 1.0);
        // h′ is decreasing; bisect its sign change
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if dh(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let r = 0.5 * (lo + hi);
        let slope = dh(r);
        let tangent = h(r) + (slope * (1.0 - r)).max(-slope * r);
        return tangent.max(h(0.0)).max(h(1.0)) * up;
    }
    // non-concave case: dense grid plus a Lipschitz allowance
    let n = 100_000;
    let lip = a + b * 2.0 * q;
    let best = (0..=n).map(|i| h(i as f64 / n as f64)).fold(0.0, f64::max);
    (best + lip / (2.0 * n as f64)) * up
}

/// A candidate `m_c ∘ L`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FunctionalCandidate {
    pub u: [Complex64; 2],
    pub s: f64,
    pub c: Complex64,
    pub value: f64,
}

/// `u = (cos t, e^{iφ} sin t)`.
fn direction(t: f64, phi: f64) -> [Complex64; 2] {
    [Complex64::new(t.cos(), 0.0), Complex64::from_polar(t.sin(), phi)]
}

/// `|d(m_c ∘ L)(b) v| = s|u·v| / (1 − |c|²)` with `c = s u·b`.
pub fn functional_value(t: &TangentData, p: f64, u: [Complex64; 2]) -> FunctionalCandidate {
    let s = 1.0 / support_function(u, p);
    let c = s * (u[0] * t.z + u[1] * t.w);
    let uv = s * (u[0] * t.v[0] + u[1] * t.v[1]);
    let value = uv.norm() / (1.0 - c.norm_sqr());
    FunctionalCandidate { u, s, c, value }
}

/// Largest `|L|` over `n × n` boundary points `(r e^{iα}, (1 − r²)^{1/(2p)} e^{iβ})`.
pub fn boundary_check(u: [Complex64; 2], s: f64, p: f64, n: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..=n {
        let r = i as f64 / n as f64;
        let rw = (1.0 - r * r).max(0.0).powf(1.0 / (2.0 * p));
        for j in 0..n {
            let beta = 2.0 * PI * j as f64 / n as f64;
            let z = Complex64::new(r, 0.0);
            let w = Complex64::from_polar(rw, beta);
            worst = worst.max((s * (u[0] * z + u[1] * w)).norm());
        }
    }
    worst
}

/// Best certified Carathéodory lower bound over Möbius-composed linear functionals.
///
/// `budget` is split between a `(t, φ)` grid and coordinate refinement.
pub fn caratheodory_search(t: &TangentData, p: f64, budget: usize) -> FunctionalCandidate {
    let mut best = functional_value(t, p, [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
    let consider = |cand: FunctionalCandidate, best: &mut FunctionalCandidate| {
        if cand.value > best.value {
            *best = cand;
        }
    };
    consider(functional_value(t, p, [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]), &mut best);
    let vn = (t.v[0].norm_sqr() + t.v[1].norm_sqr()).sqrt();
    if vn > 0.0 {
        consider(functional_value(t, p, [t.v[0].conj() / vn, t.v[1].conj() / vn]), &mut best);
    }
    let grid_budget = budget / 2;
    let side = ((grid_budget as f64).sqrt() as usize).max(2);
    let mut best_tp = (0.0, 0.0);
    for i in 0..=side {
        let tt = 0.5 * PI * i as f64 / side as f64;
        for j in 0..side {
            let ph = 2.0 * PI * j as f64 / side as f64;
            let cand = functional_value(t, p, direction(tt, ph));
            if cand.value > best.value {
                best = cand;
                best_tp = (tt, ph);
            }
        }
    }
    let mut step = (0.5 * PI / side as f64, 2.0 * PI / side as f64);
    let mut used = (side + 1) * side;
    while used < budget.max(used + 1) && step.0 > 1e-12 {
        let mut improved = false;
        for (dt, dp) in [(step.0, 0.0), (-step.0, 0.0), (0.0, step.1), (0.0, -step.1)] {
            let tt = (best_tp.0 + dt).clamp(0.0, 0.5 * PI);
            let ph = best_tp.1 + dp;
            let cand = functional_value(t, p, direction(tt, ph));
            used += 1;
            if cand.value > best.value {
                best = cand;
                best_tp = (tt, ph);
                improved = true;
            }
        }
        if !improved {
            step = (step.0 * 0.5, step.1 * 0.5);
        }
        if used >= budget {
            break;
        }
    }
    best
}

pub fn caratheodory_lower(t: &TangentData, p: f64, budget: usize) -> f64 {
    caratheodory_search(t, p, budget).value
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn support_function_is_sound_on_boundary_samples() {
        for p in [0.6, 1.0, 2.0, 3.0] {
            for (t, ph) in [(0.3, 0.0), (0.9, 1.0), (1.2, 2.5)] {
                let u = direction(t, ph);
                let s = 1.0 / support_function(u, p);
                let worst = boundary_check(u, s, p, 400);
                assert!(worst <= 1.0, "p={p}: {worst}");
                assert!(worst > 1.0 - 1e-4, "p={p}: support bound is loose, {worst}");
            }
        }
    }

    #[test]
    fn ball_support_is_euclidean() {
        let u = [Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)];
        let h = support_function(u, 1.0);
        assert!((h - 1.0).abs() < 1e-12, "{h}");
    }
}
