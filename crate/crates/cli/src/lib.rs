//! Verification suites and report rendering behind `trefoil-geom`.
//!
//! Each suite is a list of named checks with a residual and a tolerance.
//! Suites are deterministic for a given seed.

pub mod verify;

use trefoil_core::format::{g17, pi_multiple};

/// Tolerance override read from the environment.
pub const TOL_ENV: &str = "TREFOIL_GEOM_TOL";

/// `tau_alg`, from `TREFOIL_GEOM_TOL` when set to a positive number.
pub fn algebraic_tolerance() -> Result<f64, String> {
    match std::env::var(TOL_ENV) {
        Err(_) => Ok(trefoil_core::TAU_ALG),
        Ok(v) => match v.trim().parse::<f64>() {
            Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
            _ => Err(format!("{TOL_ENV}={v:?} is not a positive number")),
        },
    }
}

/// `0.62831853071795862 (pi/5)`, or just the number.
pub fn angle_text(x: f64) -> String {
    match pi_multiple(x) {
        Some(m) => format!("{} ({m})", g17(x)),
        None => g17(x),
    }
}
