//! From surgery data `(p, q, r)` to a geometric structure.
//!
//! `(T_{p/q}, r)` is `p/q` Dehn surgery on the left-handed trefoil with a
//! cone angle `2 pi / r` along the core. Everything is driven by
//! `k = |p + 6q|`: with `alpha = pi / (r k)` the structure is spherical for
//! `6/5 < rk < 6`, Nil at `rk = 6` and `SL(2,R)~` beyond.

pub mod plot;
pub mod summary;

use std::cmp::Ordering;
use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::algebra::TAU_ALG;
use crate::error::{GeomError, Result};
use crate::format::{g17, serialize_g17, serialize_g17_opt};
use crate::holonomy::{generators_ab, nil_generators, Holonomy};
use crate::surface2d::{s_of_alpha, solve_triangle};

/// The cone-angle divisor `r`: cone angle `2 pi / r`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ConeOrder {
    Rational(Ratio<i64>),
    Real(f64),
    /// Cone angle zero: the complete structure on the knot complement.
    Infinite,
}

impl ConeOrder {
    pub fn integer(n: i64) -> Self {
        ConeOrder::Rational(Ratio::from_integer(n))
    }

    pub fn value(&self) -> f64 {
        match self {
            ConeOrder::Rational(r) => *r.numer() as f64 / *r.denom() as f64,
            ConeOrder::Real(x) => *x,
            ConeOrder::Infinite => f64::INFINITY,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ConeOrder::Infinite)
    }

    /// `Some(n)` when `r` is a whole number.
    pub fn as_integer(&self) -> Option<i64> {
        match self {
            ConeOrder::Rational(r) if r.is_integer() => Some(r.to_integer()),
            ConeOrder::Real(x) if x.fract() == 0.0 && x.abs() < 9e15 => Some(*x as i64),
            _ => None,
        }
    }

    /// Compares `r * k` with `target`, exactly for rational `r` and within
    /// `TAU_ALG` (relative) otherwise.
    pub fn compare_scaled(&self, k: i64, target: Ratio<i64>) -> Ordering {
        match self {
            ConeOrder::Infinite => Ordering::Greater,
            ConeOrder::Rational(r) => (*r * k).cmp(&target),
            ConeOrder::Real(x) => {
                let lhs = x * k as f64;
                let rhs = *target.numer() as f64 / *target.denom() as f64;
                if (lhs - rhs).abs() <= TAU_ALG * rhs.abs().max(1.0) {
                    Ordering::Equal
                } else {
                    lhs.partial_cmp(&rhs).unwrap_or(Ordering::Equal)
                }
            }
        }
    }
}

impl fmt::Display for ConeOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConeOrder::Rational(r) if r.is_integer() => write!(f, "{}", r.numer()),
            ConeOrder::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            ConeOrder::Real(x) => f.write_str(&g17(*x)),
            ConeOrder::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for ConeOrder {
    type Err = GeomError;

    /// Accepts `inf`, integers, `a/b` and decimals.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || GeomError::InvalidSurgery(format!("cannot read cone order {s:?}"));
        let r = match s.to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => return Ok(ConeOrder::Infinite),
            t if t.contains('/') => {
                let (a, b) = t.split_once('/').ok_or_else(bad)?;
                let (a, b): (i64, i64) = (
                    a.trim().parse().map_err(|_| bad())?,
                    b.trim().parse().map_err(|_| bad())?,
                );
                if b == 0 {
                    return Err(bad());
                }
                ConeOrder::Rational(Ratio::new(a, b))
            }
            t => match t.parse::<i64>() {
                Ok(n) => ConeOrder::integer(n),
                Err(_) => {
                    let x: f64 = t.parse().map_err(|_| bad())?;
                    if !x.is_finite() {
                        return Err(bad());
                    }
                    ConeOrder::Real(x)
                }
            },
        };
        if !(r.value() > 0.0) {
            return Err(GeomError::InvalidSurgery(format!(
                "cone order must be positive, got {s}"
            )));
        }
        Ok(r)
    }
}

impl Serialize for ConeOrder {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

/// Surgery coefficient `p/q` and cone order `r`, in canonical form:
/// `gcd(p, q) = 1`, `q >= 0`, `1/0` for the meridian slope, `p + 6q != 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurgerySpec {
    p: i64,
    q: i64,
    r: ConeOrder,
}

impl SurgerySpec {
    pub fn new(p: i64, q: i64, r: ConeOrder) -> Result<Self> {
        if p == 0 && q == 0 {
            return Err(GeomError::InvalidSurgery("(p, q) = (0, 0)".into()));
        }
        if p.gcd(&q) != 1 {
            return Err(GeomError::InvalidSurgery(format!("gcd({p}, {q}) != 1")));
        }
        let (p, q) = if q < 0 || (q == 0 && p < 0) {
            (-p, -q)
        } else {
            (p, q)
        };
        if p + 6 * q == 0 {
            return Err(GeomError::InvalidSurgery(format!(
                "p + 6q = 0 for {p}/{q}: the exceptional fibre degenerates"
            )));
        }
        if let ConeOrder::Rational(x) = r {
            if *x.numer() <= 0 {
                return Err(GeomError::InvalidSurgery(
                    "cone order must be positive".into(),
                ));
            }
        }
        if let ConeOrder::Real(x) = r {
            if !(x > 0.0) || !x.is_finite() {
                return Err(GeomError::InvalidSurgery(
                    "cone order must be positive".into(),
                ));
            }
        }
        Ok(Self { p, q, r })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn r(&self) -> ConeOrder {
        self.r
    }

    /// `p + 6q`; never zero.
    pub fn p6q(&self) -> i64 {
        self.p + 6 * self.q
    }

    /// `k = |p + 6q|`.
    pub fn k(&self) -> i64 {
        self.p6q().abs()
    }
}

impl fmt::Display for SurgerySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(T_{}/{}, {})", self.p, self.q, self.r)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeometryClass {
    Spherical,
    Nil,
    SL2Rtilde,
    Euclidean3,
    H2xR,
    S2xR,
    NoneKnown,
}

impl GeometryClass {
    pub fn name(&self) -> &'static str {
        match self {
            GeometryClass::Spherical => "spherical",
            GeometryClass::Nil => "nil",
            GeometryClass::SL2Rtilde => "sl2r",
            GeometryClass::Euclidean3 => "euclidean",
            GeometryClass::H2xR => "h2xr",
            GeometryClass::S2xR => "s2xr",
            GeometryClass::NoneKnown => "unknown",
        }
    }
}

impl fmt::Display for GeometryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for GeometryClass {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(self.name())
    }
}

/// `(alpha, theta)` with `alpha = pi/(r |p+6q|)` and
/// `theta = alpha + (q/p)(6 alpha - pi)`.
pub fn surgery_params(spec: &SurgerySpec) -> Result<(f64, f64)> {
    if spec.p == 0 {
        return Err(GeomError::NotApplicable(
            "the (alpha, theta) parametrisation",
        ));
    }
    let alpha = match spec.r {
        ConeOrder::Infinite => 0.0,
        r => PI / (r.value() * spec.k() as f64),
    };
    let theta = alpha + (spec.q as f64 / spec.p as f64) * (6.0 * alpha - PI);
    Ok((alpha, theta))
}

/// Geometry of `(T_{p/q}, r)`; `p = 0` is handed to [`zero_surgery_classify`].
pub fn classify(spec: &SurgerySpec) -> GeometryClass {
    if spec.p == 0 {
        return zero_surgery_classify(spec.r);
    }
    let k = spec.k();
    match spec.r.compare_scaled(k, Ratio::from_integer(6)) {
        Ordering::Equal => GeometryClass::Nil,
        Ordering::Greater => GeometryClass::SL2Rtilde,
        Ordering::Less => match spec.r.compare_scaled(k, Ratio::new(6, 5)) {
            Ordering::Greater => GeometryClass::Spherical,
            _ => GeometryClass::NoneKnown,
        },
    }
}

/// `(T_0, r)`: Euclidean at `r = 1`, `H^2 x R` for `r > 1`, `S^2 x R` for
/// `1/5 < r < 1`, unknown below.
pub fn zero_surgery_classify(r: ConeOrder) -> GeometryClass {
    match r.compare_scaled(1, Ratio::from_integer(1)) {
        Ordering::Equal => GeometryClass::Euclidean3,
        Ordering::Greater => GeometryClass::H2xR,
        Ordering::Less => match r.compare_scaled(1, Ratio::new(1, 5)) {
            Ordering::Greater => GeometryClass::S2xR,
            _ => GeometryClass::NoneKnown,
        },
    }
}

/// The Seifert symbol `(Oo0|-1; (2,1), (3,1), (m/g, n/g))` of `S(m, n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeifertData {
    pub b: i64,
    pub pairs: Vec<(i64, i64)>,
    pub m: i64,
    pub n: i64,
    pub gcd: i64,
    pub exceptional: (i64, i64),
}

impl SeifertData {
    /// `S(m, n)` for `m, n` not both zero, normalised to `m >= 0`.
    pub fn from_mn(m: i64, n: i64) -> Result<Self> {
        if m == 0 && n == 0 {
            return Err(GeomError::InvalidSurgery("S(0, 0)".into()));
        }
        let (m, n) = if m < 0 || (m == 0 && n < 0) {
            (-m, -n)
        } else {
            (m, n)
        };
        let g = m.gcd(&n);
        Ok(Self {
            b: -1,
            pairs: vec![(2, 1), (3, 1), (m / g, n / g)],
            m,
            n,
            gcd: g,
            exceptional: (m / g, n / g),
        })
    }

    /// Cone angle `2 pi / gcd(m, n)` along the exceptional fibre.
    pub fn cone_angle(&self) -> f64 {
        TAU / self.gcd as f64
    }

    pub fn symbol(&self) -> String {
        let pairs: Vec<String> = self
            .pairs
            .iter()
            .map(|(a, b)| format!("({a},{b})"))
            .collect();
        format!("(Oo0|{};{})", self.b, pairs.join(","))
    }

    /// Reads `(T_{(m-6n)/n}, gcd(m, n))` back off the symbol.
    pub fn to_surgery(&self) -> Result<SurgerySpec> {
        let (a, b) = self.exceptional;
        SurgerySpec::new(a - 6 * b, b, ConeOrder::integer(self.gcd))
    }
}

/// `S(r(p + 6q), rq)`. Only whole-number `r` gives an integral symbol.
pub fn seifert_of(spec: &SurgerySpec) -> Result<SeifertData> {
    let r = spec
        .r
        .as_integer()
        .ok_or_else(|| GeomError::NotRepresentable(spec.r.to_string()))?;
    SeifertData::from_mn(r * spec.p6q(), r * spec.q)
}

pub fn from_seifert(m: i64, n: i64) -> Result<SurgerySpec> {
    SeifertData::from_mn(m, n)?.to_surgery()
}

/// `beta = 2 pi / r`; zero at `r = inf`.
pub fn cone_angle(spec: &SurgerySpec) -> f64 {
    match spec.r {
        ConeOrder::Infinite => 0.0,
        r => TAU / r.value(),
    }
}

/// Residual of `beta = 2 alpha |p + 6q|`.
pub fn cone_angle_residual(spec: &SurgerySpec) -> Result<f64> {
    let (alpha, _) = surgery_params(spec)?;
    Ok((cone_angle(spec) - 2.0 * alpha * spec.k() as f64).abs())
}

/// Residual of `(6 theta - pi)/(theta - alpha) = 6 + p/q`, or of
/// `theta = alpha` for the meridian slope.
pub fn coefficient_residual(spec: &SurgerySpec) -> Result<f64> {
    let (alpha, theta) = surgery_params(spec)?;
    if spec.q == 0 {
        return Ok((theta - alpha).abs());
    }
    let lhs = (6.0 * theta - PI) / (theta - alpha);
    let rhs = 6.0 + spec.p as f64 / spec.q as f64;
    Ok((lhs - rhs).abs() / rhs.abs().max(1.0))
}

/// Length of the singular geodesic.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SingularLength {
    /// `6 pi / (p r |p+6q|) - pi / p`.
    #[serde(serialize_with = "serialize_g17")]
    pub signed: f64,
    #[serde(serialize_with = "serialize_g17")]
    pub magnitude: f64,
}

pub fn singular_length(spec: &SurgerySpec) -> Result<SingularLength> {
    if spec.p == 0 {
        return Err(GeomError::NotApplicable("the singular length"));
    }
    let p = spec.p as f64;
    let core = match spec.r {
        ConeOrder::Infinite => 0.0,
        r => 6.0 * PI / (p * r.value() * spec.k() as f64),
    };
    let signed = core - PI / p;
    Ok(SingularLength {
        signed,
        magnitude: signed.abs(),
    })
}

fn volume_class_check(spec: &SurgerySpec) -> Result<GeometryClass> {
    if spec.p == 0 {
        return Err(GeomError::NotApplicable("the volume formula"));
    }
    match classify(spec) {
        c @ (GeometryClass::Spherical | GeometryClass::Nil | GeometryClass::SL2Rtilde) => Ok(c),
        c => Err(GeomError::VolumeUndefined(c)),
    }
}

/// Volume in the normalised metric (`|S| = 1`):
/// `pi^2 (rk - 6)^2 / (12 |p| r^2 k)`, and `pi^2 k / (12 |p|)` at `r = inf`.
pub fn volume(spec: &SurgerySpec) -> Result<f64> {
    if volume_class_check(spec)? == GeometryClass::Nil {
        return Ok(0.0);
    }
    let (k, p) = (spec.k() as f64, spec.p.abs() as f64);
    let pi2 = PI * PI;
    Ok(match spec.r {
        ConeOrder::Infinite => pi2 * k / (12.0 * p),
        ConeOrder::Rational(r) => {
            // Exact up to the final division.
            let rk6 = r * spec.k() - 6;
            let num = rk6 * rk6;
            let den = r * r * (12 * spec.k() * spec.p.abs());
            let ratio = num / den;
            pi2 * (*ratio.numer() as f64 / *ratio.denom() as f64)
        }
        ConeOrder::Real(r) => pi2 * (r * k - 6.0).powi(2) / (12.0 * p * r * r * k),
    })
}

/// The same volume assembled from the fundamental domain: fibre height
/// `|6 theta - pi|` times a quarter of the base triangle's area.
pub fn volume_by_quadrature(spec: &SurgerySpec) -> Result<f64> {
    if volume_class_check(spec)? == GeometryClass::Nil {
        return Ok(0.0);
    }
    let (alpha, theta) = surgery_params(spec)?;
    let area = solve_triangle(alpha)?.area;
    Ok((6.0 * theta - PI).abs() * area / 4.0)
}

/// `(l_i, l_s) = (6/(p+6q), 6/(5(p+6q)))`, the `r` values on the lines
/// `x + 6y = 6` and `x + 6y = 6/5`.
pub fn sphericity_limits(p: i64, q: i64) -> Result<(f64, f64)> {
    let k = p + 6 * q;
    if k == 0 {
        return Err(GeomError::Degenerate("p + 6q = 0"));
    }
    Ok((6.0 / k as f64, 6.0 / (5.0 * k as f64)))
}

/// Everything known about `(T_{p/q}, r)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeomStructure {
    pub p: i64,
    pub q: i64,
    pub r: ConeOrder,
    pub class: GeometryClass,
    #[serde(serialize_with = "serialize_g17_opt")]
    pub alpha: Option<f64>,
    #[serde(serialize_with = "serialize_g17_opt")]
    pub theta: Option<f64>,
    /// Curvature parameter `S(alpha)`; `0` for Nil.
    #[serde(rename = "S", serialize_with = "serialize_g17_opt")]
    pub s: Option<f64>,
    #[serde(serialize_with = "serialize_g17")]
    pub cone_angle: f64,
    pub length: Option<SingularLength>,
    #[serde(serialize_with = "serialize_g17_opt")]
    pub volume: Option<f64>,
    pub seifert: Option<SeifertData>,
}

pub fn analyze(spec: &SurgerySpec) -> Result<GeomStructure> {
    let class = classify(spec);
    let seifert = seifert_of(spec).ok();
    let cone = cone_angle(spec);
    if spec.p == 0 {
        return Ok(GeomStructure {
            p: spec.p,
            q: spec.q,
            r: spec.r,
            class,
            alpha: None,
            theta: None,
            s: None,
            cone_angle: cone,
            length: None,
            volume: None,
            seifert,
        });
    }
    let (alpha, theta) = surgery_params(spec)?;
    let s = match class {
        GeometryClass::Nil => Some(0.0),
        GeometryClass::Spherical | GeometryClass::SL2Rtilde => Some(s_of_alpha(alpha)?),
        _ => None,
    };
    let volume = match volume(spec) {
        Ok(v) => Some(v),
        Err(GeomError::VolumeUndefined(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(GeomStructure {
        p: spec.p,
        q: spec.q,
        r: spec.r,
        class,
        alpha: Some(alpha),
        theta: Some(theta),
        s,
        cone_angle: cone,
        length: Some(singular_length(spec)?),
        volume,
        seifert,
    })
}

/// The holonomy generators of the structure: `a(alpha, theta), b(alpha, theta)`
/// in the curved cases and `a_{q/p}, b_{q/p}` at the Nil threshold.
pub fn holonomy_of(spec: &SurgerySpec) -> Result<Holonomy> {
    match classify(spec) {
        GeometryClass::Nil => Ok(Holonomy::Nil(nil_generators(spec.q as f64 / spec.p as f64))),
        GeometryClass::Spherical | GeometryClass::SL2Rtilde => {
            let (alpha, theta) = surgery_params(spec)?;
            Ok(Holonomy::Curved(generators_ab(alpha, theta)?))
        }
        _ => Err(GeomError::NotApplicable(
            "a holonomy outside the spherical, Nil and SL(2,R)~ ranges",
        )),
    }
}
