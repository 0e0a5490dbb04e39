//! Fixed workloads shared by the benchmarks.

use trefoil_core::holonomy::{generators_ab, relator_check, Holonomy};
use trefoil_core::surgery::{analyze, ConeOrder, SurgerySpec};

/// `n x n` grid over `(0, 5pi/6) x (0, 2pi)`, skipping the Nil band.
pub fn alpha_theta_grid(n: usize) -> Vec<(f64, f64)> {
    let amax = 5.0 * std::f64::consts::PI / 6.0;
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        let alpha = amax * (i as f64 + 0.5) / n as f64;
        if (1.0 - 2.0 * alpha.sin()).abs() < 1e-3 {
            continue;
        }
        for j in 0..n {
            out.push((alpha, std::f64::consts::TAU * (j as f64 + 0.5) / n as f64));
        }
    }
    out
}

/// Largest relator residual over the grid.
pub fn relator_sweep(grid: &[(f64, f64)]) -> f64 {
    grid.iter()
        .map(|&(a, t)| {
            let pair = generators_ab(a, t).expect("grid avoids the Nil band");
            relator_check(&Holonomy::Curved(pair)).max_residual()
        })
        .fold(0.0, f64::max)
}

/// Valid specs with `|p| <= pmax`, `0 <= q <= qmax`, `1 <= r <= rmax`.
pub fn surgery_table(pmax: i64, qmax: i64, rmax: i64) -> Vec<SurgerySpec> {
    let mut out = Vec::new();
    for p in -pmax..=pmax {
        for q in 0..=qmax {
            for r in 1..=rmax {
                if let Ok(s) = SurgerySpec::new(p, q, ConeOrder::integer(r)) {
                    out.push(s);
                }
            }
        }
    }
    out
}

pub fn analyze_all(specs: &[SurgerySpec]) -> usize {
    specs.iter().filter(|s| analyze(s).is_ok()).count()
}
