//! Certified Kobayashi upper and Carathéodory lower bounds on `E(1,1,p)`.
//!
//! Upper bounds come from analytic disks whose containment is certified on a
//! boundary sample with a Lipschitz margin; lower bounds come from linear
//! functionals scaled by an exact support function and composed with a
//! Möbius map. Both families are searched deterministically.

mod disk;
mod functional;
mod length;

use num_complex::Complex64;

use crate::bergman::{self, Automorphism, EllipsoidParams};
use crate::error::{Error, Result};
use crate::term_algebra::defining_function;

pub use disk::{
    affine_disk_radius, boundary_level, certified_alpha, certify, kobayashi_search, kobayashi_upper, DiskSearch,
    DiskShape, BISECTION_TOL, CERT_SAMPLES, SAFETY_MARGIN,
};
pub use functional::{
    boundary_check, caratheodory_lower, caratheodory_search, functional_value, support_function,
    FunctionalCandidate,
};
pub use length::{curve_length, gauss_legendre, LengthEstimate};

/// Base point and non-zero tangent vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TangentData {
    pub z: Complex64,
    pub w: Complex64,
    pub v: [Complex64; 2],
}

impl TangentData {
    pub fn new(p: f64, z: Complex64, w: Complex64, v: [Complex64; 2]) -> Result<Self> {
        if defining_function(p, z, w).partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::Domain(format!("({z}, {w}) is not an interior point of E(1,1,{p})")));
        }
        if v[0].norm() == 0.0 && v[1].norm() == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(TangentData { z, w, v })
    }

    pub fn base(&self) -> [Complex64; 2] {
        [self.z, self.w]
    }

    /// Image under an automorphism together with the pushed-forward vector.
    fn transport(&self, f: &Automorphism) -> TangentData {
        let (z, w) = f.apply(self.z, self.w);
        TangentData { z, w, v: f.push(self.z, self.w, self.v) }
    }

    /// Exchange of the two coordinates (an automorphism of the ball only).
    fn swapped(&self) -> TangentData {
        TangentData { z: self.w, w: self.z, v: [self.v[1], self.v[0]] }
    }
}

/// Search effort of [`bracket`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BracketBudget {
    /// Highest disk degree.
    pub degree: usize,
    /// Candidate evaluations per disk degree.
    pub disk: usize,
    /// Functional evaluations.
    pub functional: usize,
}

impl Default for BracketBudget {
    fn default() -> Self {
        BracketBudget { degree: 6, disk: 200, functional: 600 }
    }
}

/// Which chart produced a bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chart {
    /// The given point and vector.
    Original,
    /// The point moved towards the origin by an automorphism.
    Transported,
}

impl Chart {
    pub fn as_str(&self) -> &'static str {
        match self {
            Chart::Original => "original",
            Chart::Transported => "transported",
        }
    }
}

/// Certified `lower ≤ γ = χ ≤ upper`.
#[derive(Clone, Debug, PartialEq)]
pub struct Bracket {
    pub lower: f64,
    pub upper: f64,
    /// `√(g^B(v, v̄))`.
    pub bergman_norm: f64,
    pub lower_chart: Chart,
    pub upper_chart: Chart,
    pub disk_degree: usize,
    pub functional: FunctionalCandidate,
}

impl Bracket {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    /// `lower ≤ upper + 1e-9`.
    pub fn is_sound(&self) -> bool {
        self.lower <= self.upper + 1e-9
    }

    /// `lower ≤ √g^B + 1e-9`.
    pub fn chain_holds(&self) -> bool {
        self.lower <= self.bergman_norm + 1e-9
    }
}

/// Transported datum: the `z`-coordinate is centred, and for `p = 1` the
/// remaining coordinate is centred too after a unitary swap.
fn transported(t: &TangentData, p: f64) -> Result<Option<TangentData>> {
    let mut cur = *t;
    let mut moved = false;
    if cur.z.norm() > 0.0 {
        cur = cur.transport(&Automorphism::new(cur.z, p)?);
        moved = true;
    }
    if p == 1.0 && cur.w.norm() > 0.0 {
        let s = cur.swapped();
        cur = s.transport(&Automorphism::new(s.z, p)?);
        moved = true;
    }
    Ok(moved.then_some(cur))
}

/// Bracket from both charts; each bound is certified in its own chart and
/// both metrics are biholomorphic invariants.
pub fn bracket(t: &TangentData, params: &EllipsoidParams, budget: &BracketBudget) -> Result<Bracket> {
    let p = params.p;
    if p <= 0.5 {
        return Err(Error::Parameter(format!("brackets require p > 1/2, got {p}")));
    }
    let g = bergman::metric_symbolic(params, t.z, t.w)?;
    let bergman_norm = g.norm_sq(t.v).sqrt();

    let mut functional = caratheodory_search(t, p, budget.functional);
    let mut lower_chart = Chart::Original;
    let mut disk = kobayashi_search(t, p, budget.degree, budget.disk);
    let mut upper_chart = Chart::Original;
    if let Some(tt) = transported(t, p)? {
        let f2 = caratheodory_search(&tt, p, budget.functional);
        if f2.value > functional.value {
            functional = f2;
            lower_chart = Chart::Transported;
        }
        let d2 = kobayashi_search(&tt, p, budget.degree, budget.disk);
        if d2.alpha > disk.alpha {
            disk = d2;
            upper_chart = Chart::Transported;
        }
    }
    Ok(Bracket {
        lower: functional.value,
        upper: 1.0 / disk.alpha,
        bergman_norm,
        lower_chart,
        upper_chart,
        disk_degree: disk.degree,
        functional,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn origin_coordinate_directions_are_exact() {
        for p in [0.75, 2.0] {
            for v in [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]] {
                let t = TangentData::new(p, c(0.0, 0.0), c(0.0, 0.0), v).unwrap();
                assert!((affine_disk_radius(&t, p) - 1.0).abs() < 1e-9);
                assert!((caratheodory_lower(&t, p, 50) - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn diagonal_affine_radius_at_p2() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let t = TangentData::new(2.0, c(0.0, 0.0), c(0.0, 0.0), [c(s, 0.0), c(s, 0.0)]).unwrap();
        let alpha = (-1.0 + 5f64.sqrt()).sqrt();
        let up = affine_disk_radius(&t, 2.0);
        assert!(up >= 1.0 / alpha - 1e-12);
        assert!((up - 1.0 / alpha).abs() < 1e-6, "{up} vs {}", 1.0 / alpha);
    }

    #[test]
    fn ball_radial_bounds() {
        let t = TangentData::new(1.0, c(0.5, 0.0), c(0.0, 0.0), [c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let exact = 4.0 / 3.0;
        let low = caratheodory_lower(&t, 1.0, 200);
        assert!(low >= exact - 2e-3 && low <= exact + 1e-12);
        let up = kobayashi_upper(&t, 1.0, 8, 200);
        assert!(up >= exact - 1e-9);
        assert!(up <= exact * 1.02, "{up}");
    }
}
