use thiserror::Error;

use crate::surgery::GeometryClass;

pub type Result<T> = std::result::Result<T, GeomError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("curvature parameter S must be non-zero")]
    ZeroCurvature,
    #[error("curvature parameters differ: {0} vs {1}")]
    CurvatureMismatch(f64, f64),
    #[error("{what} = {value} is out of range ({expected})")]
    OutOfRange {
        what: &'static str,
        value: f64,
        expected: &'static str,
    },
    #[error("degenerate configuration: {0}")]
    Degenerate(&'static str),
    #[error(
        "alpha = {alpha} is in the Nil regime (S = 0); use the Nil generators with a parameter t"
    )]
    NilRegime { alpha: f64 },
    #[error("construction routes disagree for {what}: residual {residual:e}")]
    RouteMismatch { what: &'static str, residual: f64 },
    #[error("point ({mu}, {nu}) is outside the coordinate domain for S = {s}")]
    OutOfDomain { mu: f64, nu: f64, s: f64 },
    #[error("fundamental domain height 6*theta - pi vanishes; slope undefined")]
    DegenerateHeight,
    #[error("invalid surgery data: {0}")]
    InvalidSurgery(String),
    #[error("cone order {0} has no integral Seifert symbol")]
    NotRepresentable(String),
    #[error("{0} is not defined for p = 0")]
    NotApplicable(&'static str),
    #[error("volume is undefined for geometry class {0}")]
    VolumeUndefined(GeometryClass),
    #[error("right factor is not diagonal with unit-modulus entries")]
    NotDiagonalUnit,
}
