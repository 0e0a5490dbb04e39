//! The left-invariant metric of `X(S,S)` in Seifert coordinates
//! `(mu, nu, zeta)`, where `mu + i nu` is the base point and `zeta` the
//! fibre phase.
//!
//! The chart is `(mu, nu, zeta) -> section(mu + i nu) diag(e^{-i zeta}, e^{i zeta})`.
//! Its inverse is the Seifert projection together with `arg(t + iSz)`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{check_curvature, project_p, DiskPoint, QuadricPoint, Real4x4};
use crate::error::{GeomError, Result};
use crate::format::serialize_g17;

/// Central-difference step for Jacobians.
pub const H_FD: f64 = 1e-6;
/// Acceptance threshold for finite-difference residuals.
pub const TAU_FD: f64 = 1e-5;

/// Images farther than `IMAGE_RADIUS / sqrt|S|` from the origin are skipped
/// (`S < 0`); the metric grows like `|w|^-4` there and differences lose
/// all precision.
const IMAGE_RADIUS: f64 = 5.0;
/// Images with `1 - S|w|^2` below this are skipped (`S > 0`).
const CHART_MARGIN: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MetricSample {
    #[serde(serialize_with = "serialize_g17")]
    pub mu: f64,
    #[serde(serialize_with = "serialize_g17")]
    pub nu: f64,
    #[serde(serialize_with = "serialize_g17")]
    pub zeta: f64,
    #[serde(rename = "S", serialize_with = "serialize_g17")]
    pub s: f64,
    pub matrix: [[f64; 3]; 3],
}

impl MetricSample {
    pub fn det(&self) -> f64 {
        det3(&self.matrix)
    }
}

pub(crate) fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn chart_denominator(mu: f64, nu: f64, s: f64) -> Result<f64> {
    check_curvature(s)?;
    let d = 1.0 - s * (mu * mu + nu * nu);
    if !(d > 0.0) || !d.is_finite() {
        return Err(GeomError::OutOfDomain { mu, nu, s });
    }
    Ok(d)
}

/// `Q(mu, nu)` for `X(S,S)`. The fibre coordinate plays no part: the
/// metric is fibred.
pub fn metric_q(mu: f64, nu: f64, s: f64) -> Result<MetricSample> {
    let d = chart_denominator(mu, nu, s)?;
    let d2 = d * d;
    let (q13, q23) = (nu / (s * d), -mu / (s * d));
    let matrix = [
        [(nu * nu + 1.0) / d2, -mu * nu / d2, q13],
        [-mu * nu / d2, (mu * mu + 1.0) / d2, q23],
        [q13, q23, 1.0 / (s * s)],
    ];
    Ok(MetricSample {
        mu,
        nu,
        zeta: 0.0,
        s,
        matrix,
    })
}

/// As [`metric_q`], recording the fibre coordinate without using it.
pub fn metric_q_at(mu: f64, nu: f64, zeta: f64, s: f64) -> Result<MetricSample> {
    Ok(MetricSample {
        zeta,
        ..metric_q(mu, nu, s)?
    })
}

/// `Q_1` (`sign = 1`) or `Q_-1` (`sign = -1`), the metric with `|S| = 1`.
pub fn metric_q_normalized(mu: f64, nu: f64, sign: i32) -> Result<MetricSample> {
    match sign {
        1 => metric_q(mu, nu, 1.0),
        -1 => metric_q(mu, nu, -1.0),
        _ => Err(GeomError::OutOfRange {
            what: "sign",
            value: sign as f64,
            expected: "+1 or -1",
        }),
    }
}

/// `1 / (1 - sign (mu^2 + nu^2))^4`.
pub fn normalized_det(mu: f64, nu: f64, sign: i32) -> f64 {
    (1.0 - sign as f64 * (mu * mu + nu * nu)).powi(-4)
}

/// Lifts the base point to the upper hyperboloid sheet
/// `-x1^2 - x2^2 + x3^2 = 1/S` (`S > 0`) or the upper hemisphere of radius
/// `1/sqrt|S|` (`S < 0`). The inverse is the Klein-Beltrami chart.
pub fn klein_projection(mu: f64, nu: f64, s: f64) -> Result<[f64; 3]> {
    let d = chart_denominator(mu, nu, s)?;
    let k = d.sqrt();
    Ok([mu / k, nu / k, 1.0 / (s.abs() * d).sqrt()])
}

/// Residual of the ambient constraint at a projected point.
pub fn klein_constraint_residual(x: [f64; 3], s: f64) -> f64 {
    if s > 0.0 {
        -x[0] * x[0] - x[1] * x[1] + x[2] * x[2] - 1.0 / s
    } else {
        x[0] * x[0] + x[1] * x[1] + x[2] * x[2] - 1.0 / s.abs()
    }
}

/// The ambient metric (Minkowski for `S > 0`, Euclidean for `S < 0`)
/// pulled back through [`klein_projection`], in closed form:
/// `[[1 - S nu^2, S mu nu], [S mu nu, 1 - S mu^2]] / (1 - S(mu^2 + nu^2))^2`.
pub fn klein_pullback(mu: f64, nu: f64, s: f64) -> Result<[[f64; 2]; 2]> {
    let d = chart_denominator(mu, nu, s)?;
    let d2 = d * d;
    Ok([
        [(1.0 - s * nu * nu) / d2, s * mu * nu / d2],
        [s * mu * nu / d2, (1.0 - s * mu * mu) / d2],
    ])
}

/// Finite-difference pullback of the ambient metric, for checking
/// [`klein_pullback`].
pub fn klein_pullback_fd(mu: f64, nu: f64, s: f64, h: f64) -> Result<[[f64; 2]; 2]> {
    let mut cols = [[0.0; 3]; 2];
    for (k, col) in cols.iter_mut().enumerate() {
        let (dm, dn) = if k == 0 { (h, 0.0) } else { (0.0, h) };
        let plus = klein_projection(mu + dm, nu + dn, s)?;
        let minus = klein_projection(mu - dm, nu - dn, s)?;
        for i in 0..3 {
            col[i] = (plus[i] - minus[i]) / (2.0 * h);
        }
    }
    let g = if s > 0.0 {
        [1.0, 1.0, -1.0]
    } else {
        [1.0, 1.0, 1.0]
    };
    let mut out = [[0.0; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            out[a][b] = (0..3).map(|i| g[i] * cols[a][i] * cols[b][i]).sum();
        }
    }
    Ok(out)
}

/// The point of `X(S,S)` with Seifert coordinates `(mu, nu, zeta)`.
pub fn seifert_chart(mu: f64, nu: f64, zeta: f64, s: f64) -> Result<QuadricPoint> {
    Ok(QuadricPoint::section(Complex64::new(mu, nu), s)?.fibre_rotate(zeta))
}

/// Seifert coordinates of a point; `None` over the point at infinity.
pub fn seifert_coords(pt: &QuadricPoint) -> Option<[f64; 3]> {
    match project_p(pt) {
        DiskPoint::Finite(w) if w.re.is_finite() && w.im.is_finite() => {
            Some([w.re, w.im, pt.fibre_phase()])
        }
        _ => None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PullbackReport {
    #[serde(serialize_with = "serialize_g17")]
    pub max_residual: f64,
    /// Samples actually evaluated.
    pub sample_count: usize,
    #[serde(serialize_with = "serialize_g17")]
    pub fd_step: f64,
    /// Samples whose image left the usable part of the chart.
    pub skipped: usize,
}

impl PullbackReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.sample_count > 0 && self.max_residual <= tol
    }
}

fn wrap_angle(x: f64) -> f64 {
    (x + PI).rem_euclid(TAU) - PI
}

fn image_usable(c: &[f64; 3], s: f64) -> bool {
    let r2 = c[0] * c[0] + c[1] * c[1];
    if s > 0.0 {
        1.0 - s * r2 > CHART_MARGIN
    } else {
        r2 * s.abs() < IMAGE_RADIUS * IMAGE_RADIUS
    }
}

/// Coordinate expression of `g` near `x`: lift, act linearly, read back.
fn map_coords(g: &Real4x4, x: [f64; 3], s: f64) -> Option<[f64; 3]> {
    let pt = seifert_chart(x[0], x[1], x[2], s).ok()?;
    let image = QuadricPoint::from_coords(g.apply(pt.coords()), s).ok()?;
    seifert_coords(&image).filter(|c| image_usable(c, s))
}

/// Residual of `J^T Q(g x) J = Q(x)` at one point, relative to `max(1, |Q(x)|)`.
/// `None` when the image or a stencil point leaves the chart.
pub fn pullback_residual_at(g: &Real4x4, x: [f64; 3], s: f64, h: f64) -> Option<f64> {
    let gx = map_coords(g, x, s)?;
    let mut jac = [[0.0; 3]; 3];
    for k in 0..3 {
        let mut xp = x;
        let mut xm = x;
        xp[k] += h;
        xm[k] -= h;
        let (fp, fm) = (map_coords(g, xp, s)?, map_coords(g, xm, s)?);
        for i in 0..3 {
            let diff = if i == 2 {
                wrap_angle(fp[i] - fm[i])
            } else {
                fp[i] - fm[i]
            };
            jac[i][k] = diff / (2.0 * h);
        }
    }
    let q_src = metric_q(x[0], x[1], s).ok()?.matrix;
    let q_img = metric_q(gx[0], gx[1], s).ok()?.matrix;
    let scale = q_src.iter().flatten().fold(1.0_f64, |m, v| m.max(v.abs()));
    let mut worst = 0.0_f64;
    for a in 0..3 {
        for b in 0..3 {
            let mut pulled = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    pulled += jac[i][a] * q_img[i][j] * jac[j][b];
                }
            }
            worst = worst.max((pulled - q_src[a][b]).abs());
        }
    }
    Some(worst / scale)
}

/// Certifies that the linear map `g` is an isometry of `X(S,S)`: at
/// `n_samples` random points with base in the disk of radius `0.8/sqrt|S|`
/// the metric pulled back by the finite-difference Jacobian of `g` must
/// reproduce `Q`.
pub fn isometry_pullback_test(
    g: &Real4x4,
    s: f64,
    n_samples: usize,
    seed: u64,
) -> Result<PullbackReport> {
    check_curvature(s)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let radius = 0.8 / s.abs().sqrt();
    let mut max_residual = 0.0_f64;
    let (mut sample_count, mut skipped) = (0, 0);
    for _ in 0..n_samples {
        let rho = radius * rng.random::<f64>().sqrt();
        let ang = rng.random::<f64>() * TAU;
        let zeta = rng.random::<f64>() * TAU;
        let x = [rho * ang.cos(), rho * ang.sin(), zeta];
        match pullback_residual_at(g, x, s, H_FD) {
            Some(r) => {
                max_residual = max_residual.max(r);
                sample_count += 1;
            }
            None => skipped += 1,
        }
    }
    Ok(PullbackReport {
        max_residual,
        sample_count,
        fd_step: H_FD,
        skipped,
    })
}
