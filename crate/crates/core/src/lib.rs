//! Bergman-kernel geometry of the complex ellipsoid `{|z|² + |w|^{2p} < 1}`.
//!
//! * [`term_algebra`]: exact symbolic sums in `z, z̄, w, w̄, φ, ψ` with Wirtinger derivatives.
//! * [`bergman`]: kernel, metric, Ricci and holomorphic sectional curvature.
//! * [`yin`]: the Yin complete Kähler metric and its curvature at the centre.
//! * [`oracle`]: finite-difference cross-checks.
//! * [`extremal`]: Kobayashi and Carathéodory bounds.

pub mod bergman;
pub mod error;
pub mod extremal;
pub mod kahler;
pub mod metric;
pub mod oracle;
pub mod term_algebra;
pub mod yin;

pub use error::{Error, Result};
