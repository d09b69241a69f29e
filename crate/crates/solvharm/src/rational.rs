//! Recovery of exact rationals from floating-point block data.
//!
//! Spectral and `J`-operator block data are extracted numerically, but the
//! exact-series operations need rational parameters. `snap` reconstructs the
//! nearest small-denominator rational by continued fractions and accepts it
//! only when it reproduces the float within `tol`.

use crate::series::poly::{rat_to_f64, Rat};
use num_bigint::BigInt;
use num_rational::BigRational;

/// Largest denominator considered by `snap`.
pub const SNAP_DENOM_LIMIT: i64 = 1_000_000;

/// Default acceptance tolerance for snapped values.
pub const SNAP_TOL: f64 = 1e-9;

/// Returns the continued-fraction convergent of `x` with denominator at most
/// `SNAP_DENOM_LIMIT`, provided it matches `x` within `tol` (absolute for
/// |x| <= 1, relative otherwise). `None` when no such rational exists.
pub fn snap(x: f64, tol: f64) -> Option<Rat> {
    if !x.is_finite() {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (1i64, 0i64, x.floor() as i64, 1i64);
    let mut frac = x - x.floor();
    for _ in 0..64 {
        let cand = p1 as f64 / q1 as f64;
        let scale = x.abs().max(1.0);
        if (cand - x).abs() <= tol * scale {
            return Some(BigRational::new(BigInt::from(p1), BigInt::from(q1)));
        }
        if frac.abs() < f64::EPSILON {
            break;
        }
        let inv = 1.0 / frac;
        let a = inv.floor();
        frac = inv - a;
        let a = a as i64;
        let p2 = a.checked_mul(p1)?.checked_add(p0)?;
        let q2 = a.checked_mul(q1)?.checked_add(q0)?;
        if q2 > SNAP_DENOM_LIMIT {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    let cand = rat_to_f64(&BigRational::new(BigInt::from(p1), BigInt::from(q1)));
    let scale = x.abs().max(1.0);
    if (cand - x).abs() <= tol * scale {
        Some(BigRational::new(BigInt::from(p1), BigInt::from(q1)))
    } else {
        None
    }
}
