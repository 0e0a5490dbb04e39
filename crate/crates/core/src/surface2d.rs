//! Two-dimensional cone surfaces and the `(2,3,r)` triangle.
//!
//! The base orbifold of every structure in this crate is `(O,0|2,3,r)`, the
//! sphere with cone points of orders 2, 3 and `r`. Its geometric model is
//! the isosceles triangle with base vertices at `-1` and `+1` of the disk
//! `D_S` (angle `alpha = pi/r` each) and apex angle `2pi/3`.
//!
//! Lengths are in curvature `-1`/`+1` units. The Euclidean triangle has no
//! intrinsic scale and is reported for base length 2.

use std::f64::consts::{FRAC_PI_3, FRAC_PI_6, PI};

use serde::Serialize;

use crate::error::{GeomError, Result};

const FIVE_PI_6: f64 = 5.0 * FRAC_PI_6;

/// `|1 - 2 sin(alpha)|` below this counts as the Euclidean triangle.
pub const EUCLIDEAN_TOL: f64 = 1e-12;

/// Signature `(O|N, g | r_1, ..., r_k)` of a cone surface.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConeSurfaceSig {
    pub orientable: bool,
    pub genus: u32,
    /// Cone orders; `f64::INFINITY` marks a cusp.
    pub valuations: Vec<f64>,
}

impl ConeSurfaceSig {
    pub fn new(orientable: bool, genus: u32, valuations: Vec<f64>) -> Result<Self> {
        for &v in &valuations {
            if v.is_nan() || v <= 0.0 || v == 1.0 {
                return Err(GeomError::OutOfRange {
                    what: "cone valuation",
                    value: v,
                    expected: "positive, different from 1",
                });
            }
        }
        Ok(Self {
            orientable,
            genus,
            valuations,
        })
    }

    /// The sphere with cone points of orders 2, 3 and `r`.
    pub fn triangle(r: f64) -> Result<Self> {
        Self::new(true, 0, vec![2.0, 3.0, r])
    }

    /// All cone orders are integers (or cusps): the surface is an orbifold.
    pub fn is_orbifold(&self) -> bool {
        self.valuations
            .iter()
            .all(|&v| v.is_infinite() || v.fract() == 0.0)
    }

    fn surface_euler(&self) -> f64 {
        let g = self.genus as f64;
        if self.orientable {
            2.0 - 2.0 * g
        } else {
            2.0 - g
        }
    }
}

/// Cone Euler characteristic `chi(Sigma) + sum(1/r_i - 1)`.
pub fn chi_cone(sig: &ConeSurfaceSig) -> f64 {
    sig.surface_euler() + sig.valuations.iter().map(|&r| 1.0 / r - 1.0).sum::<f64>()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BaseGeometry {
    Hyperbolic,
    Euclidean,
    Spherical,
}

/// Model geometry of `(O,0|2,3,r)` for `r > 6/5`; `r = inf` is hyperbolic.
pub fn base_geometry(r: f64) -> Result<BaseGeometry> {
    if r.is_nan() || r <= 1.2 {
        return Err(GeomError::OutOfRange {
            what: "cone order r",
            value: r,
            expected: "r > 6/5",
        });
    }
    let sign = 1.0 / 6.0 - 1.0 / r;
    Ok(if sign.abs() <= crate::TAU_ALG {
        BaseGeometry::Euclidean
    } else if sign < 0.0 {
        BaseGeometry::Spherical
    } else {
        BaseGeometry::Hyperbolic
    })
}

/// Curvature parameter `S = (1 - 2 sin a)/(1 + 2 sin a)` of the model disk.
pub fn s_of_alpha(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let s = alpha.sin();
    Ok((1.0 - 2.0 * s) / (1.0 + 2.0 * s))
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_nan() || !(0.0..FIVE_PI_6).contains(&alpha) {
        return Err(GeomError::OutOfRange {
            what: "alpha",
            value: alpha,
            expected: "0 <= alpha < 5pi/6",
        });
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TriangleRegime {
    Hyperbolic,
    Euclidean,
    Spherical,
    /// `alpha = 0`: the base vertices are ideal.
    Cusp,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TriangleSolution {
    pub alpha: f64,
    pub s: f64,
    /// Half the base, from the midpoint `0` to the vertex `1`.
    pub mu: f64,
    /// Altitude from the apex to the base midpoint.
    pub apex_height: f64,
    /// The two equal sides, from a base vertex to the apex.
    pub slant: f64,
    pub area: f64,
    pub regime: TriangleRegime,
}

/// Solves the triangle with angles `(alpha, alpha, 2pi/3)`.
///
/// Splitting along the altitude gives two right triangles with angles
/// `alpha` and `pi/3`; the half base satisfies `cosh mu = 1/(2 sin a)`
/// (hyperbolic) or `cos mu = 1/(2 sin a)` (spherical).
pub fn solve_triangle(alpha: f64) -> Result<TriangleSolution> {
    check_alpha(alpha)?;
    let s = s_of_alpha(alpha)?;
    let sin_a = alpha.sin();
    let cot_a = alpha.cos() / sin_a;
    let sqrt3 = 3.0_f64.sqrt();

    if alpha == 0.0 {
        return Ok(TriangleSolution {
            alpha,
            s,
            mu: f64::INFINITY,
            apex_height: (2.0 / sqrt3).acosh(),
            slant: f64::INFINITY,
            area: FRAC_PI_3,
            regime: TriangleRegime::Cusp,
        });
    }
    let deficit = 1.0 - 2.0 * sin_a;
    if deficit.abs() <= EUCLIDEAN_TOL {
        return Ok(TriangleSolution {
            alpha,
            s,
            mu: 1.0,
            apex_height: 1.0 / sqrt3,
            slant: 2.0 / sqrt3,
            area: 1.0 / sqrt3,
            regime: TriangleRegime::Euclidean,
        });
    }
    let half_base = 1.0 / (2.0 * sin_a);
    let height = 2.0 * alpha.cos() / sqrt3;
    let hyp = cot_a / sqrt3;
    if deficit > 0.0 {
        Ok(TriangleSolution {
            alpha,
            s,
            mu: half_base.acosh(),
            apex_height: height.acosh(),
            slant: hyp.acosh(),
            area: FRAC_PI_3 - 2.0 * alpha,
            regime: TriangleRegime::Hyperbolic,
        })
    } else {
        Ok(TriangleSolution {
            alpha,
            s,
            mu: half_base.acos(),
            apex_height: height.acos(),
            slant: hyp.acos(),
            area: 2.0 * alpha - FRAC_PI_3,
            regime: TriangleRegime::Spherical,
        })
    }
}

/// Half base of the triangle computed from `S`: the distance from `0` to `1`
/// in the model disk is `arccosh((1+S)/(1-S))` for `S > 0` and
/// `arccos((1+S)/(1-S))` for `S < 0`. Vanishes in the Euclidean limit.
pub fn alpha_to_model_distance(alpha: f64) -> Result<f64> {
    let s = s_of_alpha(alpha)?;
    if alpha == 0.0 {
        return Ok(f64::INFINITY);
    }
    let ratio = (1.0 + s) / (1.0 - s);
    Ok(if (1.0 - 2.0 * alpha.sin()).abs() <= EUCLIDEAN_TOL {
        0.0
    } else if s > 0.0 {
        ratio.acosh()
    } else {
        ratio.min(1.0).acos()
    })
}

/// Cone order `r = pi/alpha` of the vertex at `+-1`.
pub fn order_of_alpha(alpha: f64) -> f64 {
    if alpha == 0.0 {
        f64::INFINITY
    } else {
        PI / alpha
    }
}
