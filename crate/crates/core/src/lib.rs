//! Geometric cone-manifold structures on p/q Dehn surgeries of the
//! left-handed trefoil knot.
//!
//! The crate is organised bottom-up:
//!
//! - [`algebra`]: the quadric group `X(S,S)`, its left-right isometries,
//!   the Seifert projection and the induced homographies.
//! - [`surface2d`]: `(O,0|2,3,r)` cone surfaces, the curvature parameter
//!   `S(alpha)` and the `(2,3,r)` triangle.
//! - [`holonomy`]: the lifted trefoil-group generators `a`, `b`, the Nil
//!   family `a_t`, `b_t`, the words `c`, `d`, `d^2` and fundamental-domain
//!   levels.
//! - [`metric`]: the left-invariant metric in Seifert coordinates and the
//!   finite-difference isometry certificate.
//! - [`surgery`]: the surgery-to-geometry pipeline, Seifert symbols,
//!   volumes and the region plots.

// `!(x > 0.0)` style guards are deliberate: NaN must fall into the error arm.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod error;
pub mod format;
pub mod holonomy;
pub mod metric;
pub mod surface2d;
pub mod surgery;

pub use algebra::{Complex2x2, DiskPoint, Homography, LRIsometry, QuadricPoint, Real4x4, TAU_ALG};
pub use error::{GeomError, Result};
pub use holonomy::{DomainLevels, Holonomy, HolonomyPair, NilHolonomyPair, RelatorReport, Words};
pub use metric::{MetricSample, PullbackReport};
pub use surface2d::{BaseGeometry, ConeSurfaceSig, TriangleRegime, TriangleSolution};
pub use surgery::{ConeOrder, GeomStructure, GeometryClass, SeifertData, SurgerySpec};
