//! The quadric group `X(S,S)` and its left-right isometries.
//!
//! A point `(x, y, z, t)` with `t^2 + S^2 z^2 - S(x^2 + y^2) = 1` is carried
//! by the unimodular complex matrix
//!
//! ```text
//! [ t - iSz      sqrt(S)(x + iy) ]
//! [ sqrt(S)(x - iy)    t + iSz   ]
//! ```
//!
//! and the group law is the matrix product. An isometry in left-right form
//! `(q, q')` sends `X` to `q X q'`, where `q'` is diagonal with unit-modulus
//! entries (a rotation along the Seifert fibres). For `S < 0` the square root
//! is `i sqrt(|S|)`.

use std::fmt;
use std::ops::{Mul, Neg};

use num_complex::Complex64;
use rand::Rng;

use crate::error::{GeomError, Result};

/// Tolerance for closed-form identities evaluated in double precision.
pub const TAU_ALG: f64 = 1e-9;

pub(crate) const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
pub(crate) const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
pub(crate) const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Principal square root of the curvature parameter.
pub fn sqrt_s(s: f64) -> Complex64 {
    if s >= 0.0 {
        Complex64::new(s.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-s).sqrt())
    }
}

pub(crate) fn check_curvature(s: f64) -> Result<()> {
    if s == 0.0 || !s.is_finite() {
        Err(GeomError::ZeroCurvature)
    } else {
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Complex2x2(pub [[Complex64; 2]; 2]);

impl Complex2x2 {
    pub const IDENTITY: Self = Self([[ONE, ZERO], [ZERO, ONE]]);

    pub fn new(a11: Complex64, a12: Complex64, a21: Complex64, a22: Complex64) -> Self {
        Self([[a11, a12], [a21, a22]])
    }

    pub fn diag(d1: Complex64, d2: Complex64) -> Self {
        Self([[d1, ZERO], [ZERO, d2]])
    }

    /// `diag(e^{-i phi}, e^{i phi})`, the fibre rotation by `phi`.
    pub fn fibre_rotation(phi: f64) -> Self {
        Self::diag(
            Complex64::from_polar(1.0, -phi),
            Complex64::from_polar(1.0, phi),
        )
    }

    pub fn det(&self) -> Complex64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn scale(&self, k: Complex64) -> Self {
        let m = &self.0;
        Self([[m[0][0] * k, m[0][1] * k], [m[1][0] * k, m[1][1] * k]])
    }

    /// Inverse through the adjugate; `None` when the determinant vanishes.
    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det.norm() < f64::EPSILON {
            return None;
        }
        let m = &self.0;
        Some(Self([[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]]).scale(det.inv()))
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::IDENTITY, |acc, _| acc * *self)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0_f64;
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((self.0[r][c] - other.0[r][c]).norm());
            }
        }
        worst
    }

    /// True when off-diagonal entries vanish and the diagonal has modulus one.
    pub fn is_diagonal_unit(&self, tol: f64) -> bool {
        let m = &self.0;
        m[0][1].norm() <= tol
            && m[1][0].norm() <= tol
            && (m[0][0].norm() - 1.0).abs() <= tol
            && (m[1][1].norm() - 1.0).abs() <= tol
            && (m[0][0] * m[1][1] - ONE).norm() <= tol
    }

    /// Entries in row-major order as `[re, im]` pairs.
    pub fn to_pairs(&self) -> [[f64; 2]; 4] {
        let m = &self.0;
        [m[0][0], m[0][1], m[1][0], m[1][1]].map(|z| [z.re, z.im])
    }
}

impl Mul for Complex2x2 {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[ZERO; 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, entry) in row.iter_mut().enumerate() {
                *entry = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        Self(out)
    }
}

impl Neg for Complex2x2 {
    type Output = Self;

    fn neg(self) -> Self {
        self.scale(-ONE)
    }
}

/// A real 4x4 matrix acting on column vectors `(x, y, z, t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Real4x4(pub [[f64; 4]; 4]);

impl Real4x4 {
    pub const IDENTITY: Self = Self([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ]);

    pub fn from_row_major(v: [f64; 16]) -> Self {
        let mut m = [[0.0; 4]; 4];
        for (k, x) in v.into_iter().enumerate() {
            m[k / 4][k % 4] = x;
        }
        Self(m)
    }

    pub fn to_row_major(&self) -> [f64; 16] {
        let mut v = [0.0; 16];
        for (k, x) in v.iter_mut().enumerate() {
            *x = self.0[k / 4][k % 4];
        }
        v
    }

    pub fn from_columns(cols: [[f64; 4]; 4]) -> Self {
        let mut m = [[0.0; 4]; 4];
        for (c, col) in cols.iter().enumerate() {
            for (r, x) in col.iter().enumerate() {
                m[r][c] = *x;
            }
        }
        Self(m)
    }

    pub fn apply(&self, v: [f64; 4]) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (r, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|c| self.0[r][c] * v[c]).sum();
        }
        out
    }

    pub fn scale(&self, k: f64) -> Self {
        Self(self.0.map(|row| row.map(|x| x * k)))
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::IDENTITY, |acc, _| acc * *self)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0_f64;
        for r in 0..4 {
            for c in 0..4 {
                worst = worst.max((self.0[r][c] - other.0[r][c]).abs());
            }
        }
        worst
    }
}

impl Mul for Real4x4 {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let mut out = [[0.0; 4]; 4];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, entry) in row.iter_mut().enumerate() {
                *entry = (0..4).map(|k| self.0[r][k] * rhs.0[k][c]).sum();
            }
        }
        Self(out)
    }
}

impl fmt::Display for Real4x4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.0 {
            writeln!(
                f,
                "[{:>12.6} {:>12.6} {:>12.6} {:>12.6}]",
                row[0], row[1], row[2], row[3]
            )?;
        }
        Ok(())
    }
}

// The coordinate <-> matrix dictionary is R-linear, so it is also used for
// vectors off the quadric when building 4x4 forms.
fn coords_to_matrix(v: [f64; 4], s: f64) -> Complex2x2 {
    let [x, y, z, t] = v;
    let r = sqrt_s(s);
    Complex2x2::new(
        Complex64::new(t, -s * z),
        r * Complex64::new(x, y),
        r * Complex64::new(x, -y),
        Complex64::new(t, s * z),
    )
}

fn matrix_to_coords(m: &Complex2x2, s: f64) -> [f64; 4] {
    let t = 0.5 * (m.0[0][0].re + m.0[1][1].re);
    let z = 0.5 * (m.0[1][1].im - m.0[0][0].im) / s;
    let w = m.0[0][1] / sqrt_s(s);
    [w.re, w.im, z, t]
}

/// A point of `X(S,S)` in the coordinates `(x, y, z, t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadricPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub t: f64,
    pub s: f64,
}

impl QuadricPoint {
    pub fn new(x: f64, y: f64, z: f64, t: f64, s: f64) -> Result<Self> {
        check_curvature(s)?;
        Ok(Self { x, y, z, t, s })
    }

    pub fn identity(s: f64) -> Result<Self> {
        Self::new(0.0, 0.0, 0.0, 1.0, s)
    }

    pub fn from_coords(v: [f64; 4], s: f64) -> Result<Self> {
        Self::new(v[0], v[1], v[2], v[3], s)
    }

    pub fn coords(&self) -> [f64; 4] {
        [self.x, self.y, self.z, self.t]
    }

    /// `t^2 + S^2 z^2 - S(x^2 + y^2) - 1`.
    pub fn residual(&self) -> f64 {
        let s = self.s;
        self.t * self.t + s * s * self.z * self.z - s * (self.x * self.x + self.y * self.y) - 1.0
    }

    pub fn to_matrix(&self) -> Complex2x2 {
        coords_to_matrix(self.coords(), self.s)
    }

    pub fn from_matrix(m: &Complex2x2, s: f64) -> Result<Self> {
        check_curvature(s)?;
        Self::from_coords(matrix_to_coords(m, s), s)
    }

    /// The lift of `w` with real positive diagonal, fibre phase 0.
    pub fn section(w: Complex64, s: f64) -> Result<Self> {
        check_curvature(s)?;
        let denom = 1.0 - s * w.norm_sqr();
        if denom <= 0.0 || !denom.is_finite() {
            return Err(GeomError::OutOfDomain {
                mu: w.re,
                nu: w.im,
                s,
            });
        }
        let k = denom.sqrt().recip();
        Self::new(w.re * k, w.im * k, 0.0, k, s)
    }

    /// Right product with `diag(e^{-i phi}, e^{i phi})`.
    pub fn fibre_rotate(&self, phi: f64) -> Self {
        let m = self.to_matrix() * Complex2x2::fibre_rotation(phi);
        Self::from_matrix(&m, self.s).expect("curvature already validated")
    }

    /// Position along the Seifert fibre: `arg(t + iSz)` in `(-pi, pi]`.
    pub fn fibre_phase(&self) -> f64 {
        Complex64::new(self.t, self.s * self.z).arg()
    }
}

pub fn quadric_check(p: &QuadricPoint) -> bool {
    quadric_check_tol(p, TAU_ALG)
}

pub fn quadric_check_tol(p: &QuadricPoint, tol: f64) -> bool {
    p.s != 0.0 && p.residual().abs() <= tol
}

/// A point of the base `D_S`; for `S < 0` the base is the whole Riemann
/// sphere and `Infinity` is a genuine point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DiskPoint {
    Finite(Complex64),
    Infinity,
}

impl DiskPoint {
    pub fn finite(&self) -> Option<Complex64> {
        match self {
            DiskPoint::Finite(w) => Some(*w),
            DiskPoint::Infinity => None,
        }
    }

    /// Membership in `D_S`: `|w|^2 < 1/S` when `S > 0`, everything when `S < 0`.
    pub fn in_base(&self, s: f64) -> bool {
        match self {
            DiskPoint::Finite(w) => s < 0.0 || s * w.norm_sqr() < 1.0,
            DiskPoint::Infinity => s < 0.0,
        }
    }

    /// Chordal-style distance used by equivariance checks; `Infinity` only
    /// matches itself or very large finite points.
    pub fn distance(&self, other: &Self) -> f64 {
        match (self, other) {
            (DiskPoint::Finite(a), DiskPoint::Finite(b)) => (a - b).norm(),
            (DiskPoint::Infinity, DiskPoint::Infinity) => 0.0,
            (DiskPoint::Finite(w), DiskPoint::Infinity)
            | (DiskPoint::Infinity, DiskPoint::Finite(w)) => 1.0 / w.norm(),
        }
    }
}

impl DiskPoint {
    /// Chordal distance after rescaling by `sqrt|S|`; bounded by 2 and
    /// well behaved near `Infinity`.
    pub fn chordal(&self, other: &Self, s: f64) -> f64 {
        let k = s.abs().sqrt();
        let lift = |p: &Self| p.finite().map(|w| w * k);
        match (lift(self), lift(other)) {
            (Some(a), Some(b)) => {
                2.0 * (a - b).norm() / ((1.0 + a.norm_sqr()) * (1.0 + b.norm_sqr())).sqrt()
            }
            (None, None) => 0.0,
            (Some(w), None) | (None, Some(w)) => 2.0 / (1.0 + w.norm_sqr()).sqrt(),
        }
    }
}

/// Seifert projection `(x, y, z, t) -> (x + iy)/(t + iSz)`.
pub fn project_p(pt: &QuadricPoint) -> DiskPoint {
    let den = Complex64::new(pt.t, pt.s * pt.z);
    if den.norm() <= f64::EPSILON * (1.0 + pt.x.hypot(pt.y)) {
        return DiskPoint::Infinity;
    }
    DiskPoint::Finite(Complex64::new(pt.x, pt.y) / den)
}

/// A Moebius map `w -> (a w + b)/(c w + d)` of the base.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Homography {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl Homography {
    pub fn apply(&self, w: DiskPoint) -> DiskPoint {
        match w {
            DiskPoint::Finite(w) => {
                let num = self.a * w + self.b;
                let den = self.c * w + self.d;
                if den.norm() <= f64::EPSILON * num.norm() {
                    DiskPoint::Infinity
                } else {
                    DiskPoint::Finite(num / den)
                }
            }
            DiskPoint::Infinity => {
                if self.c.norm() <= f64::EPSILON * self.a.norm() {
                    DiskPoint::Infinity
                } else {
                    DiskPoint::Finite(self.a / self.c)
                }
            }
        }
    }

    /// Complex derivative at a finite point, `(ad - bc)/(cw + d)^2`.
    pub fn derivative(&self, w: Complex64) -> Complex64 {
        let den = self.c * w + self.d;
        (self.a * self.d - self.b * self.c) / (den * den)
    }
}

/// An isometry `X -> left * X * right` of `X(S,S)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LRIsometry {
    pub left: Complex2x2,
    pub right: Complex2x2,
    pub s: f64,
}

impl LRIsometry {
    pub fn new(left: Complex2x2, right: Complex2x2, s: f64) -> Result<Self> {
        check_curvature(s)?;
        if !right.is_diagonal_unit(1e-9) {
            return Err(GeomError::NotDiagonalUnit);
        }
        Ok(Self { left, right, s })
    }

    pub fn identity(s: f64) -> Result<Self> {
        Self::new(Complex2x2::IDENTITY, Complex2x2::IDENTITY, s)
    }

    /// Left translation `l_q`.
    pub fn left_translation(q: &QuadricPoint) -> Result<Self> {
        Self::new(q.to_matrix(), Complex2x2::IDENTITY, q.s)
    }

    /// Right translation by the diagonal element `diag(e^{-i phi}, e^{i phi})`.
    pub fn fibre_translation(phi: f64, s: f64) -> Result<Self> {
        Self::new(Complex2x2::IDENTITY, Complex2x2::fibre_rotation(phi), s)
    }

    /// `self` followed by `next`: `(q2 q1, q1' q2')`.
    pub fn then(&self, next: &Self) -> Result<Self> {
        lr_compose(self, next)
    }

    pub fn inverse(&self) -> Self {
        let left = self.left.inverse().expect("X(S,S) elements are unimodular");
        let right = self.right.inverse().expect("unit diagonal is invertible");
        Self {
            left,
            right,
            s: self.s,
        }
    }

    pub fn act(&self, pt: &QuadricPoint) -> QuadricPoint {
        let m = self.left * pt.to_matrix() * self.right;
        QuadricPoint::from_matrix(&m, pt.s).expect("curvature already validated")
    }

    pub fn to_linear(&self) -> Real4x4 {
        lr_to_linear(self)
    }

    pub fn homography(&self) -> Homography {
        homography_of(self)
    }

    /// The `phi` with `right = diag(e^{-i phi}, e^{i phi})`, in `(-pi, pi]`.
    pub fn right_phase(&self) -> f64 {
        self.right.0[1][1].arg()
    }

    /// Largest entrywise distance between both factors.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.left
            .max_abs_diff(&other.left)
            .max(self.right.max_abs_diff(&other.right))
    }
}

/// Composition rule `(q1, q1')(q2, q2') = (q2 q1, q1' q2')`: `g1` acts first.
pub fn lr_compose(g1: &LRIsometry, g2: &LRIsometry) -> Result<LRIsometry> {
    if g1.s != g2.s {
        return Err(GeomError::CurvatureMismatch(g1.s, g2.s));
    }
    Ok(LRIsometry {
        left: g2.left * g1.left,
        right: g1.right * g2.right,
        s: g1.s,
    })
}

/// The 4x4 matrix of the linear map on `R^4` that restricts to `g` on the
/// quadric.
pub fn lr_to_linear(g: &LRIsometry) -> Real4x4 {
    let mut cols = [[0.0; 4]; 4];
    for (k, col) in cols.iter_mut().enumerate() {
        let mut e = [0.0; 4];
        e[k] = 1.0;
        let image = g.left * coords_to_matrix(e, g.s) * g.right;
        *col = matrix_to_coords(&image, g.s);
    }
    Real4x4::from_columns(cols)
}

/// `lm(q)`: the linear form of left multiplication by `q`.
pub fn left_linear(q: &QuadricPoint) -> Result<Real4x4> {
    Ok(LRIsometry::left_translation(q)?.to_linear())
}

/// `rm(q')` for the diagonal element with fibre phase `phi`.
pub fn right_linear(phi: f64, s: f64) -> Result<Real4x4> {
    Ok(LRIsometry::fibre_translation(phi, s)?.to_linear())
}

/// The homography of `D_S` covered by `g`. Only the left factor matters;
/// the right factor moves points along fibres.
pub fn homography_of(g: &LRIsometry) -> Homography {
    let [a, b, c, d] = matrix_to_coords(&g.left, g.s);
    let s = g.s;
    Homography {
        a: Complex64::new(d, -s * c),
        b: Complex64::new(a, b),
        c: Complex64::new(s * a, -s * b),
        d: Complex64::new(d, s * c),
    }
}

/// A point of `X(S,S)` with base point uniform in the disk of `radius`
/// (clipped to the chart for `S > 0`) and uniform fibre phase.
pub fn sample_point<R: Rng + ?Sized>(rng: &mut R, s: f64, radius: f64) -> Result<QuadricPoint> {
    check_curvature(s)?;
    let rho = radius * rng.random::<f64>().sqrt();
    let ang = rng.random::<f64>() * std::f64::consts::TAU;
    let phase = rng.random::<f64>() * std::f64::consts::TAU - std::f64::consts::PI;
    let base = QuadricPoint::section(Complex64::from_polar(rho, ang), s)?;
    Ok(base.fibre_rotate(phase))
}

/// A uniformly random element of `X(S,S)` near the identity, returned as a
/// left-right isometry with a random fibre rotation on the right.
pub fn sample_isometry<R: Rng + ?Sized>(rng: &mut R, s: f64) -> Result<LRIsometry> {
    let radius = if s > 0.0 {
        0.8 / s.sqrt()
    } else {
        2.0 / (-s).sqrt()
    };
    let q = sample_point(rng, s, radius)?;
    let phi = rng.random::<f64>() * std::f64::consts::TAU - std::f64::consts::PI;
    LRIsometry::new(q.to_matrix(), Complex2x2::fibre_rotation(phi), s)
}

impl From<[f64; 2]> for DiskPoint {
    fn from(v: [f64; 2]) -> Self {
        DiskPoint::Finite(Complex64::new(v[0], v[1]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn rotation(alpha: f64, theta: f64, s: f64) -> LRIsometry {
        LRIsometry::new(
            Complex2x2::diag(
                Complex64::from_polar(1.0, alpha),
                Complex64::from_polar(1.0, -alpha),
            ),
            Complex2x2::fibre_rotation(theta),
            s,
        )
        .unwrap()
    }

    fn translation(s: f64) -> LRIsometry {
        let k = (1.0 - s).abs().sqrt().recip();
        let r = sqrt_s(s);
        let left = Complex2x2::new(ONE, r, r, ONE).scale(Complex64::new(k, 0.0));
        LRIsometry::new(left, Complex2x2::IDENTITY, s).unwrap()
    }

    #[test]
    fn quadric_check_examples() {
        assert!(quadric_check(
            &QuadricPoint::new(0.0, 0.0, 0.0, 1.0, -1.0).unwrap()
        ));
        assert!(quadric_check(
            &QuadricPoint::new(FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2, -1.0).unwrap()
        ));
        assert!(!quadric_check(
            &QuadricPoint::new(1.0, 0.0, 0.0, 1.0, -1.0).unwrap()
        ));
    }

    #[test]
    fn zero_curvature_rejected() {
        assert_eq!(QuadricPoint::identity(0.0), Err(GeomError::ZeroCurvature));
        assert_eq!(LRIsometry::identity(0.0), Err(GeomError::ZeroCurvature));
    }

    #[test]
    fn matrix_is_unimodular_on_quadric() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for &s in &[-1.0, -0.25, 0.5, 1.0] {
            let p = sample_point(&mut rng, s, 0.7 / s.abs().sqrt()).unwrap();
            assert!((p.to_matrix().det() - ONE).norm() < 1e-12);
            let back = QuadricPoint::from_matrix(&p.to_matrix(), s).unwrap();
            assert!((back.x - p.x).abs() + (back.t - p.t).abs() + (back.z - p.z).abs() < 1e-12);
        }
    }

    #[test]
    fn compose_identity_and_order() {
        let s = -0.3;
        let id = LRIsometry::identity(s).unwrap();
        let g = rotation(0.4, 1.1, s);
        assert_eq!(lr_compose(&id, &g).unwrap(), g);
        let t = translation(s);
        // g1 acts first: the left factors multiply in reverse order.
        let gt = lr_compose(&g, &t).unwrap();
        assert!(gt.left.max_abs_diff(&(t.left * g.left)) < 1e-15);
        assert!(gt.right.max_abs_diff(&(g.right * t.right)) < 1e-15);
        let back = lr_compose(&g, &g.inverse()).unwrap();
        assert!(back.max_abs_diff(&id) < 1e-12);
    }

    #[test]
    fn compose_rejects_mixed_curvature() {
        let a = LRIsometry::identity(0.5).unwrap();
        let b = LRIsometry::identity(-0.5).unwrap();
        assert!(matches!(
            lr_compose(&a, &b),
            Err(GeomError::CurvatureMismatch(..))
        ));
    }

    #[test]
    fn rotation_linear_form_is_block_diagonal() {
        let (a, th, s) = (0.7, -0.4, -0.2);
        let m = rotation(a, th, s).to_linear();
        let expected = Real4x4([
            [(a + th).cos(), -(a + th).sin(), 0.0, 0.0],
            [(a + th).sin(), (a + th).cos(), 0.0, 0.0],
            [0.0, 0.0, (a - th).cos(), -(a - th).sin() / s],
            [0.0, 0.0, s * (a - th).sin(), (a - th).cos()],
        ]);
        assert!(m.max_abs_diff(&expected) < 1e-14);
        assert!(
            rotation(0.0, 0.0, s)
                .to_linear()
                .max_abs_diff(&Real4x4::IDENTITY)
                < 1e-15
        );
    }

    #[test]
    fn translation_linear_form() {
        for &s in &[-1.0, -0.3, 0.4] {
            let m = translation(s).to_linear();
            let k = (1.0 - s).abs().sqrt().recip();
            let expected = Real4x4([
                [1.0, 0.0, 0.0, 1.0],
                [0.0, 1.0, s, 0.0],
                [0.0, 1.0, 1.0, 0.0],
                [s, 0.0, 0.0, 1.0],
            ])
            .scale(k);
            assert!(m.max_abs_diff(&expected) < 1e-14, "S = {s}");
        }
    }

    #[test]
    fn projection_examples() {
        for &s in &[-1.0, -0.2, 0.6] {
            assert_eq!(
                project_p(&QuadricPoint::identity(s).unwrap()),
                DiskPoint::Finite(ZERO)
            );
            let k = (1.0 - s).abs().sqrt().recip();
            for sign in [1.0, -1.0] {
                let p = QuadricPoint::new(sign * k, 0.0, 0.0, k, s).unwrap();
                assert!(quadric_check(&p));
                let w = project_p(&p).finite().unwrap();
                assert!((w - Complex64::new(sign, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn projection_of_the_great_circle_is_infinity() {
        // (x, y, 0, 0) with -S(x^2 + y^2) = 1 lies over the point at infinity.
        let p = QuadricPoint::new(1.0, 0.0, 0.0, 0.0, -1.0).unwrap();
        assert!(quadric_check(&p));
        assert_eq!(project_p(&p), DiskPoint::Infinity);
    }

    #[test]
    fn homography_examples() {
        let s = 0.3;
        let w = DiskPoint::Finite(Complex64::new(0.2, -0.5));
        let id = LRIsometry::identity(s).unwrap();
        assert!(id.homography().apply(w).distance(&w) < 1e-15);
        let a = 0.45;
        let rot = rotation(a, 0.9, s).homography().apply(w).finite().unwrap();
        assert!((rot - Complex64::from_polar(1.0, 2.0 * a) * w.finite().unwrap()).norm() < 1e-14);
        let z = w.finite().unwrap();
        let moved = translation(s).homography().apply(w).finite().unwrap();
        assert!((moved - (z + 1.0) / (s * z + 1.0)).norm() < 1e-14);
    }

    #[test]
    fn homography_handles_infinity() {
        let s = -1.0;
        let t = translation(s).homography();
        // w -> (w + 1)/(-w + 1): 1 goes to infinity, infinity to -1.
        assert_eq!(t.apply(DiskPoint::Finite(ONE)), DiskPoint::Infinity);
        let inf = t.apply(DiskPoint::Infinity).finite().unwrap();
        assert!((inf + ONE).norm() < 1e-15);
    }

    #[test]
    fn fibre_phase_tracks_right_rotation() {
        let s = 0.5;
        let p = QuadricPoint::section(Complex64::new(0.3, 0.4), s).unwrap();
        assert!(p.fibre_phase().abs() < 1e-15);
        let q = p.fibre_rotate(1.2);
        assert!((q.fibre_phase() - 1.2).abs() < 1e-14);
        assert!(project_p(&q).distance(&project_p(&p)) < 1e-15);
        assert!(matches!(
            QuadricPoint::section(Complex64::new(2.0, 0.0), s),
            Err(GeomError::OutOfDomain { .. })
        ));
    }

    #[test]
    fn non_diagonal_right_factor_rejected() {
        let r = Complex2x2::new(ONE, ONE, ZERO, ONE);
        assert_eq!(
            LRIsometry::new(Complex2x2::IDENTITY, r, 1.0),
            Err(GeomError::NotDiagonalUnit)
        );
        let scaled = Complex2x2::diag(Complex64::new(2.0, 0.0), Complex64::new(0.5, 0.0));
        assert!(LRIsometry::new(Complex2x2::IDENTITY, scaled, 1.0).is_err());
    }
}
