//! Lifted holonomy of the trefoil knot group in `Isom(X(S,S))`.
//!
//! The generators are the rotations of angle `2 alpha` about `+1` and `-1`
//! of the base, lifted with fibre rotation `theta`:
//! `a = t_1 R(alpha, theta) t_1^-1`, `b = t_-1 R(alpha, theta) t_-1^-1`.
//! Both are built twice, by conjugation and from the closed-form blocks,
//! and the two constructions are compared before a pair is handed out.
//! At `alpha = pi/6` the curvature vanishes and the Nil family `a_t, b_t`
//! takes over.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_6, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{
    lr_compose, project_p, sqrt_s, Complex2x2, DiskPoint, LRIsometry, QuadricPoint, Real4x4, I,
    ONE, TAU_ALG,
};
use crate::error::{GeomError, Result};
use crate::format::{json_number, serialize_g17, serialize_g17_slice};
use crate::surface2d::s_of_alpha;

/// Generators are refused when `|1 - 2 sin(alpha)|` falls below this.
pub const NIL_BAND: f64 = 1e-6;

/// Agreement required between the construction routes.
pub const ROUTE_TOL: f64 = 1e-9;

const FIVE_PI_6: f64 = 5.0 * FRAC_PI_6;

/// `R(alpha, theta) = (diag(e^{i a}, e^{-i a}), diag(e^{-i th}, e^{i th}))`.
pub fn rotation_r(alpha: f64, theta: f64, s: f64) -> Result<LRIsometry> {
    LRIsometry::new(
        Complex2x2::diag(
            Complex64::from_polar(1.0, alpha),
            Complex64::from_polar(1.0, -alpha),
        ),
        Complex2x2::fibre_rotation(theta),
        s,
    )
}

/// The translations `t_1`, `t_-1` taking the identity over `+1` and `-1`.
pub fn translations_t(s: f64) -> Result<(LRIsometry, LRIsometry)> {
    crate::algebra::check_curvature(s)?;
    if (1.0 - s).abs() < f64::EPSILON {
        return Err(GeomError::Degenerate("t_1 and t_-1 are undefined at S = 1"));
    }
    let k = Complex64::new((1.0 - s).abs().sqrt().recip(), 0.0);
    let r = sqrt_s(s);
    let plus = Complex2x2::new(ONE, r, r, ONE).scale(k);
    let minus = Complex2x2::new(ONE, -r, -r, ONE).scale(k);
    Ok((
        LRIsometry::new(plus, Complex2x2::IDENTITY, s)?,
        LRIsometry::new(minus, Complex2x2::IDENTITY, s)?,
    ))
}

/// `t R(alpha, theta) t^-1` as a map (inverse first), for any `S != 0, 1`.
/// `sign = +1` rotates about `+1`, `sign = -1` about `-1`.
pub fn conjugated_rotation(alpha: f64, theta: f64, s: f64, sign: f64) -> Result<LRIsometry> {
    let (t_plus, t_minus) = translations_t(s)?;
    let t = if sign > 0.0 { t_plus } else { t_minus };
    let r = rotation_r(alpha, theta, s)?;
    t.inverse().then(&r)?.then(&t)
}

/// Closed left factors `M`, `N` and the shared right factor `R`.
pub fn closed_lr_factors(alpha: f64, theta: f64) -> (Complex2x2, Complex2x2, Complex2x2) {
    let c = Complex64::new(2.0 * alpha.cos(), 0.0);
    let root = Complex64::new(2.0 * (2.0 * alpha).cos() - 1.0, 0.0).sqrt();
    let half = Complex64::new(0.5, 0.0);
    let m = Complex2x2::new(c + I, -I * root, I * root, c - I).scale(half);
    let n = Complex2x2::new(c + I, I * root, -I * root, c - I).scale(half);
    (m, n, Complex2x2::fibre_rotation(theta))
}

/// Closed-form `lm(a)` and `lm(b)` from the blocks `A11, A12, A21, A22`.
pub fn closed_linear_generators(alpha: f64, theta: f64) -> (Real4x4, Real4x4) {
    let (sa, ca) = alpha.sin_cos();
    let (st, ct) = theta.sin_cos();
    let (lo, hi) = (1.0 - 2.0 * sa, 1.0 + 2.0 * sa);
    let a11 = [
        [2.0 * ca * ct - st, -2.0 * ca * st - ct],
        [2.0 * ca * st + ct, 2.0 * ca * ct - st],
    ];
    let a12 = [[lo * ct, hi * st], [lo * st, -hi * ct]];
    let a21 = [[hi * ct, -hi * st], [-lo * st, -lo * ct]];
    let a22 = [
        [2.0 * ca * ct + st, hi * (2.0 * ca * st - ct) / lo],
        [lo * (-2.0 * ca * st + ct) / hi, 2.0 * ca * ct + st],
    ];
    let assemble = |sign: f64| {
        let mut m = [[0.0; 4]; 4];
        for r in 0..2 {
            for c in 0..2 {
                m[r][c] = 0.5 * a11[r][c];
                m[r][c + 2] = 0.5 * sign * a12[r][c];
                m[r + 2][c] = 0.5 * sign * a21[r][c];
                m[r + 2][c + 2] = 0.5 * a22[r][c];
            }
        }
        Real4x4(m)
    };
    (assemble(1.0), assemble(-1.0))
}

/// Generators `a(alpha, theta)`, `b(alpha, theta)` with `S = S(alpha)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HolonomyPair {
    pub alpha: f64,
    pub theta: f64,
    pub s: f64,
    pub a: LRIsometry,
    pub a_lm: Real4x4,
    pub b: LRIsometry,
    pub b_lm: Real4x4,
    /// Largest disagreement seen between the construction routes.
    pub route_residual: f64,
}

/// Builds `a` and `b`, cross-checking the conjugation route, the closed
/// left-right factors and the closed 4x4 blocks. The closed blocks are the
/// returned linear forms.
///
/// `alpha = 0` (a cusp, `S = 1`) is accepted; there the translations do
/// not exist and only the two closed routes are compared.
pub fn generators_ab(alpha: f64, theta: f64) -> Result<HolonomyPair> {
    if alpha.is_nan() || !(0.0..FIVE_PI_6).contains(&alpha) {
        return Err(GeomError::OutOfRange {
            what: "alpha",
            value: alpha,
            expected: "0 <= alpha < 5pi/6",
        });
    }
    if !theta.is_finite() {
        return Err(GeomError::OutOfRange {
            what: "theta",
            value: theta,
            expected: "finite",
        });
    }
    if (1.0 - 2.0 * alpha.sin()).abs() < NIL_BAND {
        return Err(GeomError::NilRegime { alpha });
    }
    let s = s_of_alpha(alpha)?;
    let (m, n, r) = closed_lr_factors(alpha, theta);
    let a = LRIsometry::new(m, r, s)?;
    let b = LRIsometry::new(n, r, s)?;
    let (a_lm, b_lm) = closed_linear_generators(alpha, theta);

    let mut residual = a
        .to_linear()
        .max_abs_diff(&a_lm)
        .max(b.to_linear().max_abs_diff(&b_lm));
    if alpha > 0.0 {
        let a_conj = conjugated_rotation(alpha, theta, s, 1.0)?;
        let b_conj = conjugated_rotation(alpha, theta, s, -1.0)?;
        residual = residual
            .max(a_conj.max_abs_diff(&a))
            .max(b_conj.max_abs_diff(&b))
            .max(a_conj.to_linear().max_abs_diff(&a_lm))
            .max(b_conj.to_linear().max_abs_diff(&b_lm));
    }
    if !(residual <= ROUTE_TOL) {
        return Err(GeomError::RouteMismatch {
            what: "a(alpha, theta), b(alpha, theta)",
            residual,
        });
    }
    Ok(HolonomyPair {
        alpha,
        theta,
        s,
        a,
        a_lm,
        b,
        b_lm,
        route_residual: residual,
    })
}

/// The Nil limits `a_t`, `b_t` along `theta = alpha + t(6 alpha - pi)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NilHolonomyPair {
    pub t: f64,
    pub a_t: Real4x4,
    pub b_t: Real4x4,
}

pub fn nil_generators(t: f64) -> NilHolonomyPair {
    let h = 3.0_f64.sqrt() / 2.0;
    let shear = -h * (8.0 * t + 1.0);
    let a_t = Real4x4([
        [0.5, -h, 0.0, 0.5],
        [h, 0.5, 0.0, -h],
        [h, -0.5, 1.0, shear],
        [0.0, 0.0, 0.0, 1.0],
    ]);
    let b_t = Real4x4([
        [0.5, -h, 0.0, -0.5],
        [h, 0.5, 0.0, h],
        [-h, 0.5, 1.0, shear],
        [0.0, 0.0, 0.0, 1.0],
    ]);
    NilHolonomyPair { t, a_t, b_t }
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum Holonomy {
    Curved(HolonomyPair),
    Nil(NilHolonomyPair),
}

impl Holonomy {
    pub fn a_lm(&self) -> Real4x4 {
        match self {
            Holonomy::Curved(p) => p.a_lm,
            Holonomy::Nil(p) => p.a_t,
        }
    }

    pub fn b_lm(&self) -> Real4x4 {
        match self {
            Holonomy::Curved(p) => p.b_lm,
            Holonomy::Nil(p) => p.b_t,
        }
    }
}

/// `c = b a`, `d = b a b` and `d^2`, as maps (rightmost factor acts first).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Words {
    pub c_lm: Real4x4,
    pub d_lm: Real4x4,
    pub d2_lm: Real4x4,
    /// Left-right forms; absent for the Nil family.
    pub c_lr: Option<LRIsometry>,
    pub d_lr: Option<LRIsometry>,
    pub d2_lr: Option<LRIsometry>,
}

pub fn words_cd(h: &Holonomy) -> Words {
    let (a, b) = (h.a_lm(), h.b_lm());
    let c_lm = b * a;
    let d_lm = b * a * b;
    let d2_lm = d_lm * d_lm;
    let (c_lr, d_lr, d2_lr) = match h {
        Holonomy::Curved(p) => {
            let c = lr_compose(&p.a, &p.b).expect("same curvature");
            let d = lr_compose(&lr_compose(&p.b, &p.a).expect("same curvature"), &p.b)
                .expect("same curvature");
            let d2 = lr_compose(&d, &d).expect("same curvature");
            (Some(c), Some(d), Some(d2))
        }
        Holonomy::Nil(_) => (None, None, None),
    };
    Words {
        c_lm,
        d_lm,
        d2_lm,
        c_lr,
        d_lr,
        d2_lr,
    }
}

/// Rewrites a pure fibre translation `(+-I, diag(e^{-i phi}, e^{i phi}))`
/// with identity left factor and returns `phi` in `(-pi, pi]`, or `None`
/// when the left factor is not `+-I`.
pub fn fibre_translation_amount(g: &LRIsometry, tol: f64) -> Option<f64> {
    let right = if g.left.max_abs_diff(&Complex2x2::IDENTITY) <= tol {
        g.right
    } else if g.left.max_abs_diff(&-Complex2x2::IDENTITY) <= tol {
        -g.right
    } else {
        return None;
    };
    Some(right.0[1][1].arg())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RelatorReport {
    /// `max |aba - bab|` over the left-right factors.
    #[serde(serialize_with = "crate::format::serialize_g17_opt")]
    pub lr_residual: Option<f64>,
    /// `max |aba - bab|` over the 4x4 forms.
    #[serde(serialize_with = "serialize_g17")]
    pub linear_residual: f64,
}

impl RelatorReport {
    pub fn max_residual(&self) -> f64 {
        self.linear_residual.max(self.lr_residual.unwrap_or(0.0))
    }
}

pub fn relator_residual_linear(a: &Real4x4, b: &Real4x4) -> f64 {
    (*a * *b * *a).max_abs_diff(&(*b * *a * *b))
}

pub fn relator_residual_lr(a: &LRIsometry, b: &LRIsometry) -> Result<f64> {
    let aba = lr_compose(&lr_compose(a, b)?, a)?;
    let bab = lr_compose(&lr_compose(b, a)?, b)?;
    Ok(aba.max_abs_diff(&bab))
}

/// Residual of the trefoil relator `aba = bab` in every available form.
pub fn relator_check(h: &Holonomy) -> RelatorReport {
    let linear_residual = relator_residual_linear(&h.a_lm(), &h.b_lm());
    let lr_residual = match h {
        Holonomy::Curved(p) => Some(relator_residual_lr(&p.a, &p.b).expect("same curvature")),
        Holonomy::Nil(_) => None,
    };
    RelatorReport {
        lr_residual,
        linear_residual,
    }
}

/// Levels of the fundamental domain `D(alpha, theta)` over the base triangle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DomainLevels {
    /// Fibre level of `d(A)` over `B`: `3 theta - pi/2`.
    #[serde(serialize_with = "serialize_g17")]
    pub level_da: f64,
    /// Fibre level of `c(U)` over `A`: `alpha + 5 theta - pi`.
    #[serde(serialize_with = "serialize_g17")]
    pub level_cu: f64,
    /// Translation length of `d^2`: `6 theta - pi`.
    #[serde(serialize_with = "serialize_g17")]
    pub height: f64,
    /// Slope of the boundary foliation, `level_cu / height`.
    #[serde(serialize_with = "serialize_g17")]
    pub slope: f64,
}

pub fn domain_levels(alpha: f64, theta: f64) -> Result<DomainLevels> {
    let level_da = 3.0 * theta - FRAC_PI_2;
    let level_cu = alpha + 5.0 * theta - PI;
    let height = 6.0 * theta - PI;
    if height.abs() <= TAU_ALG {
        return Err(GeomError::DegenerateHeight);
    }
    Ok(DomainLevels {
        level_da,
        level_cu,
        height,
        slope: level_cu / height,
    })
}

/// Fibre levels read off the matrices, unwrapped continuously in `theta`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasuredLevels {
    pub level_da: f64,
    pub level_cu: f64,
    pub height: f64,
    /// Base point of `d(A)`; should be `B = -1`.
    pub base_da: DiskPoint,
    /// Base point of `(c d)(A)`; should be `A = +1`.
    pub base_cda: DiskPoint,
}

fn wrap_pi(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(std::f64::consts::TAU) - PI;
    if y <= -PI {
        y + std::f64::consts::TAU
    } else {
        y
    }
}

struct RawLevels {
    phases: [f64; 3],
    base_da: DiskPoint,
    base_cda: DiskPoint,
}

fn raw_levels(alpha: f64, theta: f64) -> Result<RawLevels> {
    let pair = generators_ab(alpha, theta)?;
    let words = words_cd(&Holonomy::Curved(pair));
    let (d, c, d2) = (
        words.d_lr.expect("curved pair"),
        words.c_lr.expect("curved pair"),
        words.d2_lr.expect("curved pair"),
    );
    let s = pair.s;
    let k = (1.0 - s).sqrt().recip();
    let a_point = QuadricPoint::new(k, 0.0, 0.0, k, s)?;
    let u = d.act(&a_point);
    let cu = c.act(&u);
    let shift = fibre_translation_amount(&d2, 1e-9)
        .ok_or(GeomError::Degenerate("d^2 is not a pure fibre translation"))?;
    Ok(RawLevels {
        phases: [u.fibre_phase(), cu.fibre_phase(), shift],
        base_da: project_p(&u),
        base_cda: project_p(&cu),
    })
}

/// Applies `d` and `c d` to the lift `A` of `+1` and `d^2` to the identity,
/// reading fibre phases. Phases are anchored at `theta = 0` in `[-pi, pi)`
/// and followed continuously to the requested `theta`.
pub fn measured_levels(alpha: f64, theta: f64) -> Result<MeasuredLevels> {
    if alpha <= 0.0 {
        return Err(GeomError::Degenerate(
            "the lift of +1 does not exist at S = 1",
        ));
    }
    let anchor = |x: f64| {
        if x >= PI - 1e-12 {
            x - std::f64::consts::TAU
        } else {
            x
        }
    };
    let start = raw_levels(alpha, 0.0)?;
    let mut acc = start.phases.map(anchor);
    let mut prev = start.phases;
    let steps = ((theta.abs() / 0.05).ceil() as usize).max(1);
    let mut last = start;
    for k in 1..=steps {
        let th = theta * k as f64 / steps as f64;
        let cur = raw_levels(alpha, th)?;
        for i in 0..3 {
            acc[i] += wrap_pi(cur.phases[i] - prev[i]);
        }
        prev = cur.phases;
        last = cur;
    }
    Ok(MeasuredLevels {
        level_da: acc[0],
        level_cu: acc[1],
        height: acc[2],
        base_da: last.base_da,
        base_cda: last.base_cda,
    })
}

fn lr_json(g: &LRIsometry) -> serde_json::Value {
    let pairs = |m: &Complex2x2| {
        serde_json::Value::Array(
            m.to_pairs()
                .iter()
                .map(|p| serde_json::Value::Array(vec![json_number(p[0]), json_number(p[1])]))
                .collect(),
        )
    };
    serde_json::Value::Array(vec![pairs(&g.left), pairs(&g.right)])
}

#[derive(Serialize)]
struct LrView {
    left: serde_json::Value,
    right: serde_json::Value,
}

impl LrView {
    fn new(g: &LRIsometry) -> Self {
        let serde_json::Value::Array(mut parts) = lr_json(g) else {
            unreachable!()
        };
        let right = parts.pop().expect("two factors");
        let left = parts.pop().expect("two factors");
        Self { left, right }
    }
}

#[derive(Serialize)]
struct PairView {
    #[serde(serialize_with = "serialize_g17")]
    alpha: f64,
    #[serde(serialize_with = "serialize_g17")]
    theta: f64,
    #[serde(rename = "S", serialize_with = "serialize_g17")]
    s: f64,
    a_lr: LrView,
    #[serde(serialize_with = "serialize_g17_slice")]
    a_lm: [f64; 16],
    b_lr: LrView,
    #[serde(serialize_with = "serialize_g17_slice")]
    b_lm: [f64; 16],
}

impl Serialize for HolonomyPair {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        PairView {
            alpha: self.alpha,
            theta: self.theta,
            s: self.s,
            a_lr: LrView::new(&self.a),
            a_lm: self.a_lm.to_row_major(),
            b_lr: LrView::new(&self.b),
            b_lm: self.b_lm.to_row_major(),
        }
        .serialize(ser)
    }
}

#[derive(Serialize)]
struct NilView {
    #[serde(serialize_with = "serialize_g17")]
    t: f64,
    #[serde(serialize_with = "serialize_g17_slice")]
    a_t: [f64; 16],
    #[serde(serialize_with = "serialize_g17_slice")]
    b_t: [f64; 16],
}

impl Serialize for NilHolonomyPair {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        NilView {
            t: self.t,
            a_t: self.a_t.to_row_major(),
            b_t: self.b_t.to_row_major(),
        }
        .serialize(ser)
    }
}
