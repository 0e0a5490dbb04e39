use std::f64::consts::{FRAC_PI_2, FRAC_PI_6, PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use trefoil_core::algebra::{
    homography_of, lr_compose, project_p, sample_isometry, sample_point, LRIsometry, Real4x4,
};
use trefoil_core::format::serialize_g17;
use trefoil_core::holonomy::{
    closed_linear_generators, conjugated_rotation, domain_levels, fibre_translation_amount,
    generators_ab, measured_levels, nil_generators, relator_check, rotation_r, translations_t,
    words_cd, Holonomy,
};
use trefoil_core::metric::{
    isometry_pullback_test, klein_constraint_residual, klein_projection, klein_pullback,
    klein_pullback_fd, metric_q, metric_q_normalized, normalized_det, H_FD, TAU_FD,
};
use trefoil_core::surface2d::s_of_alpha;
use trefoil_core::surgery::summary::summary_checks;
use trefoil_core::surgery::{
    classify, coefficient_residual, seifert_of, volume, volume_by_quadrature, ConeOrder,
    GeometryClass, SurgerySpec,
};
use trefoil_core::{Complex2x2, GeomError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Algebra,
    Metric,
    Holonomy,
    Surgery,
    All,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(serialize_with = "serialize_g17")]
    pub residual: f64,
    #[serde(serialize_with = "serialize_g17")]
    pub tolerance: f64,
    /// Inputs of the worst case, when it failed or is informative.
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

/// Running maximum of a residual with the inputs that produced it.
struct Worst {
    residual: f64,
    detail: String,
    count: usize,
}

impl Worst {
    fn new() -> Self {
        Self {
            residual: 0.0,
            detail: String::new(),
            count: 0,
        }
    }

    fn see(&mut self, residual: f64, detail: impl FnOnce() -> String) {
        self.count += 1;
        // NaN must register as a failure.
        if residual.is_nan() || residual > self.residual {
            self.residual = if residual.is_nan() {
                f64::INFINITY
            } else {
                residual
            };
            self.detail = detail();
        }
    }

    fn check(self, name: &str, tolerance: f64) -> Check {
        let passed = self.count > 0 && self.residual <= tolerance;
        let detail = if self.count == 0 {
            "no cases evaluated".to_string()
        } else {
            self.detail
        };
        Check {
            name: name.to_string(),
            passed,
            residual: self.residual,
            tolerance,
            detail,
        }
    }
}

fn boolean(name: &str, ok: bool, detail: String) -> Check {
    Check {
        name: name.to_string(),
        passed: ok,
        residual: if ok { 0.0 } else { 1.0 },
        tolerance: 0.0,
        detail,
    }
}

/// The `n x n` `(alpha, theta)` grid over `(0, 5pi/6) x (0, 2pi)`, minus the Nil band.
pub fn grid(n: usize) -> Vec<(f64, f64)> {
    let amax = 5.0 * FRAC_PI_6;
    let mut out = Vec::new();
    for i in 0..n {
        let alpha = amax * (i as f64 + 0.5) / n as f64;
        if (1.0 - 2.0 * alpha.sin()).abs() < 1e-3 {
            continue;
        }
        for j in 0..n {
            out.push((alpha, TAU * (j as f64 + 0.5) / n as f64));
        }
    }
    out
}

pub fn run(suite: Suite, seed: u64, tol: f64) -> Report {
    let checks = match suite {
        Suite::Algebra => algebra(seed, tol),
        Suite::Metric => metric(seed),
        Suite::Holonomy => holonomy(tol),
        Suite::Surgery => surgery(seed),
        Suite::All => {
            let mut all = algebra(seed, tol);
            all.extend(metric(seed));
            all.extend(holonomy(tol));
            all.extend(surgery(seed));
            all
        }
    };
    let name = format!("{suite:?}").to_lowercase();
    Report {
        suite: name,
        seed,
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

fn random_word(rng: &mut ChaCha8Rng, gens: &[LRIsometry], max_len: usize) -> Vec<usize> {
    let len = rng.random_range(1..=max_len);
    (0..len).map(|_| rng.random_range(0..gens.len())).collect()
}

fn algebra(seed: u64, tol: f64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut quadric = Worst::new();
    let mut linear = Worst::new();
    let mut equivariance = Worst::new();
    let mut diagonal = Worst::new();
    for &alpha in &[0.3, FRAC_PI_2, 1.2, 2.0] {
        let theta = rng.random::<f64>() * TAU;
        let pair = generators_ab(alpha, theta).expect("alpha away from the Nil band");
        let s = pair.s;
        let gens = [pair.a, pair.b, pair.a.inverse(), pair.b.inverse()];
        for _ in 0..250 {
            let word = random_word(&mut rng, &gens, 6);
            let mut g = LRIsometry::identity(s).expect("S != 0");
            let mut lm = Real4x4::IDENTITY;
            for &i in &word {
                g = lr_compose(&g, &gens[i]).expect("same S");
                lm = gens[i].to_linear() * lm;
            }
            linear.see(g.to_linear().max_abs_diff(&lm), || {
                format!("S={s}, word {word:?}")
            });
            diagonal.see(
                if g.right.is_diagonal_unit(tol) {
                    0.0
                } else {
                    1.0
                },
                || format!("word {word:?}"),
            );
            let radius = if s > 0.0 {
                0.9 / s.sqrt()
            } else {
                3.0 / (-s).sqrt()
            };
            let x = sample_point(&mut rng, s, radius).expect("inside the chart");
            let gx = g.act(&x);
            quadric.see(gx.residual().abs(), || format!("S={s}, word {word:?}"));
            let lhs = project_p(&gx);
            let rhs = homography_of(&g).apply(project_p(&x));
            equivariance.see(lhs.chordal(&rhs, s), || {
                format!("S={s}, word {word:?}, x={x:?}")
            });
        }
        // Random left-right isometries as well as group words.
        for _ in 0..250 {
            let g = sample_isometry(&mut rng, s).expect("S != 0");
            let x = sample_point(&mut rng, s, 0.5 / s.abs().sqrt()).expect("inside the chart");
            quadric.see(g.act(&x).residual().abs(), || format!("S={s}, random g"));
        }
    }
    vec![
        quadric.check("algebra/quadric-preservation", tol),
        linear.check("algebra/composition-vs-linear", tol),
        equivariance.check("algebra/projection-equivariance", tol),
        diagonal.check("algebra/right-factor-diagonal", 0.0),
    ]
}

/// Leading principal minors of a symmetric 3x3 matrix.
fn leading_minors(m: &[[f64; 3]; 3]) -> [f64; 3] {
    let d1 = m[0][0];
    let d2 = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let d3 = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    [d1, d2, d3]
}

/// The isometries certified at curvature `s`, by name.
pub fn certification_cases(s: f64, seed: u64) -> Vec<(String, Result<Real4x4, GeomError>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let q = sample_point(&mut rng, s, 0.5 / s.abs().sqrt()).expect("inside the chart");
    let phi = rng.random::<f64>() * TAU;
    let (alpha, theta) = (0.35 + rng.random::<f64>(), rng.random::<f64>() * TAU);
    let mut out = vec![
        (
            "l_q".to_string(),
            LRIsometry::left_translation(&q).map(|g| g.to_linear()),
        ),
        (
            "r_q'".to_string(),
            LRIsometry::fibre_translation(phi, s).map(|g| g.to_linear()),
        ),
        (
            "R".to_string(),
            rotation_r(alpha, theta, s).map(|g| g.to_linear()),
        ),
    ];
    let ts = translations_t(s);
    out.push(("t_1".to_string(), ts.clone().map(|t| t.0.to_linear())));
    out.push(("t_-1".to_string(), ts.map(|t| t.1.to_linear())));
    // a and b at the alpha with S(alpha) = s when there is one, otherwise
    // by conjugation at the given S.
    // S(alpha) = s solves sin(alpha) = (1 - s)/(2(1 + s)), reachable for -1/3 <= s <= 1.
    let own_alpha = (-1.0 / 3.0..=1.0)
        .contains(&s)
        .then(|| ((1.0 - s) / (2.0 * (1.0 + s))).min(1.0).asin());
    match own_alpha {
        Some(a) => {
            let pair = generators_ab(a, theta);
            out.push(("a".to_string(), pair.clone().map(|p| p.a_lm)));
            out.push(("b".to_string(), pair.map(|p| p.b_lm)));
        }
        None => {
            out.push((
                "a".to_string(),
                conjugated_rotation(alpha, theta, s, 1.0).map(|g| g.to_linear()),
            ));
            out.push((
                "b".to_string(),
                conjugated_rotation(alpha, theta, s, -1.0).map(|g| g.to_linear()),
            ));
        }
    }
    out
}

pub const CERTIFIED_CURVATURES: [f64; 4] = [-1.0, -1.0 / 3.0, 0.5, 1.0];

fn metric(seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut definite = Worst::new();
    let mut dets = Worst::new();
    let mut klein = Worst::new();
    let mut pullback_closed = Worst::new();
    let mut unit_sphere = Worst::new();
    for &s in &CERTIFIED_CURVATURES {
        let radius = if s > 0.0 {
            0.999 / s.sqrt()
        } else {
            3.0 / s.abs().sqrt()
        };
        for _ in 0..1000 {
            let rho = radius * rng.random::<f64>().sqrt();
            let ang = rng.random::<f64>() * TAU;
            let (mu, nu) = (rho * ang.cos(), rho * ang.sin());
            let q = metric_q(mu, nu, s).expect("inside the chart").matrix;
            let minors = leading_minors(&q);
            let worst_minor = minors.iter().fold(f64::INFINITY, |m, &v| m.min(v));
            definite.see(if worst_minor > 0.0 { 0.0 } else { 1.0 }, || {
                format!("S={s} ({mu},{nu})")
            });
            let x = klein_projection(mu, nu, s).expect("inside the chart");
            klein.see(
                klein_constraint_residual(x, s).abs() / (1.0 + x[2] * x[2]),
                || format!("S={s} ({mu},{nu})"),
            );
            let (m2, n2) = (0.9 * mu, 0.9 * nu);
            let fd = klein_pullback_fd(m2, n2, s, H_FD).expect("inside the chart");
            let closed = klein_pullback(m2, n2, s).expect("inside the chart");
            let scale = closed.iter().flatten().fold(1.0_f64, |m, v| m.max(v.abs()));
            let r = (0..4)
                .map(|i| (fd[i / 2][i % 2] - closed[i / 2][i % 2]).abs())
                .fold(0.0, f64::max);
            pullback_closed.see(r / scale, || format!("S={s} ({m2},{n2})"));
            if s == -1.0 {
                let qq = metric_q(m2, n2, s).expect("inside the chart").matrix;
                let r = (0..4)
                    .map(|i| (fd[i / 2][i % 2] - qq[i / 2][i % 2]).abs())
                    .fold(0.0, f64::max);
                unit_sphere.see(r / scale, || format!("({m2},{n2})"));
            }
        }
        let sign = if s > 0.0 { 1 } else { -1 };
        for _ in 0..200 {
            let rho = 0.99 * rng.random::<f64>().sqrt();
            let ang = rng.random::<f64>() * TAU;
            let (mu, nu) = (rho * ang.cos(), rho * ang.sin());
            let q = metric_q_normalized(mu, nu, sign).expect("inside the chart");
            let closed = normalized_det(mu, nu, sign);
            dets.see(
                ((leading_minors(&q.matrix)[2] - closed) / closed).abs(),
                || format!("sign {sign} ({mu},{nu})"),
            );
        }
    }
    let mut checks = vec![
        definite.check("metric/positive-definite", 0.0),
        dets.check("metric/normalized-determinants", 1e-12),
        klein.check("metric/klein-constraint", 1e-12),
        pullback_closed.check("metric/klein-pullback-closed-form", TAU_FD),
        unit_sphere.check("metric/klein-pullback-equals-base-block-at-S=-1", TAU_FD),
    ];
    for &s in &CERTIFIED_CURVATURES {
        for (name, g) in certification_cases(s, seed) {
            let label = format!("metric/pullback/{name}/S={}", trefoil_core::format::g17(s));
            match g {
                Ok(g) => {
                    let rep = isometry_pullback_test(&g, s, 240, seed).expect("S != 0");
                    let passed = rep.sample_count >= 200 && rep.max_residual <= TAU_FD;
                    checks.push(Check {
                        name: label,
                        passed,
                        residual: rep.max_residual,
                        tolerance: TAU_FD,
                        detail: format!("{} samples, {} skipped", rep.sample_count, rep.skipped),
                    });
                }
                Err(GeomError::Degenerate(why)) => {
                    checks.push(Check {
                        name: label,
                        passed: true,
                        residual: 0.0,
                        tolerance: TAU_FD,
                        detail: format!("not applicable: {why}"),
                    });
                }
                Err(e) => checks.push(boolean(&label, false, e.to_string())),
            }
        }
    }
    checks
}

fn holonomy(tol: f64) -> Vec<Check> {
    let mut relator_lr = Worst::new();
    let mut relator_lm = Worst::new();
    let mut routes = Worst::new();
    let mut torsion = Worst::new();
    let mut d_left = Worst::new();
    let mut d2_shift = Worst::new();
    let mut projection = Worst::new();
    let minus_i = -Complex2x2::IDENTITY;
    let d_expected = Complex2x2::diag(
        num_complex::Complex64::new(0.0, 1.0),
        num_complex::Complex64::new(0.0, -1.0),
    );
    for (alpha, theta) in grid(50) {
        let pair = match generators_ab(alpha, theta) {
            Ok(p) => p,
            Err(e) => {
                routes.see(f64::INFINITY, || format!("({alpha},{theta}): {e}"));
                continue;
            }
        };
        let at = || format!("(alpha, theta) = ({alpha}, {theta})");
        routes.see(pair.route_residual, at);
        let rep = relator_check(&Holonomy::Curved(pair));
        relator_lr.see(rep.lr_residual.unwrap_or(f64::INFINITY), at);
        relator_lm.see(rep.linear_residual, at);
        let (m, n) = (pair.a.left, pair.b.left);
        torsion.see(
            (n * m)
                .pow(3)
                .max_abs_diff(&minus_i)
                .max((m * n * m).pow(2).max_abs_diff(&minus_i)),
            at,
        );
        let w = words_cd(&Holonomy::Curved(pair));
        let d = w.d_lr.expect("curved pair");
        d_left.see(d.left.max_abs_diff(&d_expected), at);
        let shift =
            fibre_translation_amount(&w.d2_lr.expect("curved pair"), 1e-9).unwrap_or(f64::NAN);
        let target = 6.0 * theta - PI;
        let wrapped = (shift - target + PI).rem_euclid(TAU) - PI;
        d2_shift.see(wrapped.abs(), at);
        for (g, c) in [(pair.a, 1.0), (pair.b, -1.0)] {
            let h = homography_of(&g);
            let centre = num_complex::Complex64::new(c, 0.0);
            let fixed = h
                .apply(trefoil_core::DiskPoint::Finite(centre))
                .finite()
                .map_or(f64::INFINITY, |z| (z - centre).norm());
            let modulus = (h.derivative(centre).norm() - 1.0).abs();
            projection.see(fixed.max(modulus), at);
        }
    }
    let mut nil = Worst::new();
    for t in [-1.0, 0.0, 0.37, 5.0] {
        let pair = nil_generators(t);
        let rep = relator_check(&Holonomy::Nil(pair));
        let aba = pair.a_t * pair.b_t * pair.a_t;
        let mut expected = Real4x4::IDENTITY;
        expected.0[0][0] = -1.0;
        expected.0[1][1] = -1.0;
        expected.0[2][3] = -2.0 * 3.0_f64.sqrt() * (6.0 * t + 1.0);
        nil.see(rep.linear_residual.max(aba.max_abs_diff(&expected)), || {
            format!("t={t}")
        });
    }
    let mut limit = Worst::new();
    for t in [-1.0, 0.0, 0.37, 5.0] {
        let target = nil_generators(t);
        for eps in [1e-4, -1e-4] {
            let alpha = FRAC_PI_6 + eps;
            let (a, b) = closed_linear_generators(alpha, alpha + t * (6.0 * alpha - PI));
            limit.see(
                a.max_abs_diff(&target.a_t).max(b.max_abs_diff(&target.b_t)),
                || format!("t={t}, eps={eps}"),
            );
        }
    }
    let mut levels = Worst::new();
    for (alpha, theta) in grid(12) {
        let closed = domain_levels(alpha, theta);
        let measured = measured_levels(alpha, theta);
        match (closed, measured) {
            (Ok(c), Ok(m)) => levels.see(
                (c.level_da - m.level_da)
                    .abs()
                    .max((c.level_cu - m.level_cu).abs())
                    .max((c.height - m.height).abs()),
                || format!("({alpha},{theta})"),
            ),
            (Err(GeomError::DegenerateHeight), _) => {}
            (c, m) => levels.see(f64::INFINITY, || format!("({alpha},{theta}): {c:?} {m:?}")),
        }
    }
    vec![
        relator_lr.check("holonomy/relator-lr", tol),
        relator_lm.check("holonomy/relator-4x4", tol),
        routes.check("holonomy/two-route-consistency", tol),
        torsion.check("holonomy/torsion", tol),
        d_left.check("holonomy/d-left-part", tol),
        d2_shift.check("holonomy/d2-translation", tol),
        projection.check("holonomy/rotations-about-plus-minus-one", tol),
        nil.check("holonomy/nil-relator", tol),
        limit.check("holonomy/nil-limit", 5e-3),
        levels.check("holonomy/domain-levels", tol),
    ]
}

/// The seven volumes reproduced exactly, as `(p, q, r, V)`.
pub fn reference_volumes() -> Vec<(i64, i64, ConeOrder, f64)> {
    let pi2 = PI * PI;
    vec![
        (-1, 1, ConeOrder::integer(1), 2.0 * pi2 / 120.0),
        (1, 0, ConeOrder::integer(5), 2.0 * pi2 / 600.0),
        (1, 0, ConeOrder::integer(2), 2.0 * pi2 / 6.0),
        (1, 0, ConeOrder::integer(3), 2.0 * pi2 / 24.0),
        (1, 0, ConeOrder::integer(4), 2.0 * pi2 / 96.0),
        (1, 0, ConeOrder::Infinite, pi2 / 12.0),
        (1, 0, ConeOrder::integer(6), 0.0),
    ]
}

fn surgery(seed: u64) -> Vec<Check> {
    let mut checks = Vec::new();
    for (p, q, r, v) in reference_volumes() {
        let spec = SurgerySpec::new(p, q, r).expect("valid example");
        let got = volume(&spec).unwrap_or(f64::NAN);
        let err = if v == 0.0 {
            got.abs()
        } else {
            ((got - v) / v).abs()
        };
        let mut w = Worst::new();
        w.see(err, || format!("V = {got}, expected {v}"));
        checks.push(w.check(&format!("surgery/volume {spec}"), 1e-12));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut quad = Worst::new();
    let mut coeff = Worst::new();
    while quad.count < 500 {
        let p = rng.random_range(-20..=20_i64);
        let q = rng.random_range(0..=20_i64);
        let r = ConeOrder::Real(0.2 + 12.0 * rng.random::<f64>());
        let Ok(spec) = SurgerySpec::new(p, q, r) else {
            continue;
        };
        if p == 0
            || !matches!(
                classify(&spec),
                GeometryClass::Spherical | GeometryClass::SL2Rtilde
            )
        {
            continue;
        }
        let closed = volume(&spec).unwrap_or(f64::NAN);
        let parts = volume_by_quadrature(&spec).unwrap_or(f64::NAN);
        quad.see((closed - parts).abs() / closed.max(1e-300).max(1.0), || {
            spec.to_string()
        });
        coeff.see(coefficient_residual(&spec).unwrap_or(f64::INFINITY), || {
            spec.to_string()
        });
    }
    checks.push(quad.check("surgery/volume-by-quadrature", 1e-12));
    checks.push(coeff.check("surgery/coefficient-consistency", 1e-9));

    let mut table = Worst::new();
    let mut round_trip = Worst::new();
    for p in -20..=20_i64 {
        for q in 0..=20_i64 {
            for r in 1..=12_i64 {
                let Ok(spec) = SurgerySpec::new(p, q, ConeOrder::integer(r)) else {
                    continue;
                };
                let data = seifert_of(&spec).expect("integer r");
                round_trip.see(
                    if data.to_surgery().ok() == Some(spec) {
                        0.0
                    } else {
                        1.0
                    },
                    || spec.to_string(),
                );
                if p == 0 {
                    continue;
                }
                let k = (p + 6 * q).abs();
                let expected = if r * k == 6 {
                    GeometryClass::Nil
                } else if r * k > 6 {
                    GeometryClass::SL2Rtilde
                } else if 5 * r * k > 6 {
                    GeometryClass::Spherical
                } else {
                    GeometryClass::NoneKnown
                };
                table.see(
                    if classify(&spec) == expected {
                        0.0
                    } else {
                        1.0
                    },
                    || spec.to_string(),
                );
            }
        }
    }
    checks.push(table.check("surgery/classification-table", 0.0));
    checks.push(round_trip.check("surgery/seifert-round-trip", 0.0));
    let summary = summary_checks();
    checks.push(boolean(
        "surgery/summary-claims",
        summary.passes(),
        format!("{summary:?}"),
    ));
    let alpha_check = s_of_alpha(FRAC_PI_2)
        .map(|s| (s + 1.0 / 3.0).abs())
        .unwrap_or(f64::INFINITY);
    let mut w = Worst::new();
    w.see(alpha_check, || "S(pi/2)".to_string());
    checks.push(w.check("surgery/curvature-at-pi/2", 1e-15));
    checks
}
