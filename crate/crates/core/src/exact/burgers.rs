//! Exact inviscid Burgers solution for the fixed initial profile
//! `u(0, x) = -sin(pi x)` on `[-1, 1]` with periodic boundaries.
//!
//! Characteristics give `u(x, t) = -sin(pi x0)` where `x0` solves
//! `x = x0 - sin(pi x0) t`. Compression forms a stationary shock at `x = 0`
//! from `t = 1/pi` on; by odd symmetry it never moves.

use crate::error::{CoreError, Result};
use std::f64::consts::PI;

/// The fixed Burgers initial condition `-sin(pi x)` on `[-1, 1]`.
#[derive(Debug, Clone, Copy, Default)]
pub struct BurgersIC;

impl BurgersIC {
    pub const X_MIN: f64 = -1.0;
    pub const X_MAX: f64 = 1.0;

    pub fn initial(&self, x: f64) -> f64 {
        -(PI * x).sin()
    }
}

fn characteristic_gap(x0: f64, x: f64, t: f64) -> f64 {
    x0 - (PI * x0).sin() * t - x
}

/// Root of `x0 - sin(pi x0) t = x` on `[lo, hi]` where the map is monotone
/// increasing. Newton iteration safeguarded by the bisection bracket.
fn solve_foot(x: f64, t: f64, mut lo: f64, mut hi: f64) -> f64 {
    debug_assert!(characteristic_gap(lo, x, t) <= 0.0 && characteristic_gap(hi, x, t) >= 0.0);
    let mut x0 = 0.5 * (lo + hi);
    for _ in 0..200 {
        let g = characteristic_gap(x0, x, t);
        if g.abs() < 1e-15 {
            return x0;
        }
        if g > 0.0 {
            hi = x0;
        } else {
            lo = x0;
        }
        if hi - lo < 1e-16 * (1.0 + x0.abs()) {
            return x0;
        }
        let dg = 1.0 - PI * (PI * x0).cos() * t;
        let newton = x0 - g / dg;
        x0 = if dg.abs() > 1e-12 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    x0
}

/// Exact sample of the entropy solution at `(x, t)`, `0 <= t <= 1`.
///
/// `x` is interpreted on the periodic domain `[-1, 1]`.
pub fn burgers_exact_sample(x: f64, t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(CoreError::usage(format!("time {t} outside [0, 1]")));
    }
    // Map into [-1, 1].
    let x = {
        let y = (x + 1.0).rem_euclid(2.0) - 1.0;
        if y == -1.0 {
            1.0
        } else {
            y
        }
    };
    if t == 0.0 {
        return Ok(-(PI * x).sin());
    }
    // Odd symmetry: solve on x >= 0 only. The shock (t >= 1/pi) sits at 0.
    let (sign, xq) = if x < 0.0 { (-1.0, -x) } else { (1.0, x) };
    if xq == 0.0 {
        return Ok(0.0);
    }
    let lo = if t < 1.0 / PI {
        // Monotone on the whole domain; the foot lies right of some point
        // with negative gap. x0 = xq works: gap = -sin(pi xq) t <= 0.
        -1.0
    } else {
        // Past shock formation the map is monotone on [x0c, 1] where
        // x0c = arccos(1/(pi t))/pi is the minimum of the characteristic map.
        (1.0 / (PI * t)).min(1.0).acos() / PI
    };
    // The upper bracket sits past x0 = 1 so feet at the domain edge (where
    // the gap at exactly 1.0 is a rounding-level negative number) stay
    // strictly bracketed; the map remains monotone there.
    let x0 = solve_foot(xq, t, lo, 1.5);
    Ok(sign * -(PI * x0).sin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn initial_profile_is_reproduced() {
        for i in 0..=20 {
            let x = -1.0 + 0.1 * i as f64;
            assert_abs_diff_eq!(
                burgers_exact_sample(x, 0.0).unwrap(),
                -(PI * x).sin(),
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn domain_endpoints_are_fixed_points() {
        for t in [0.0, 0.2, 0.5, 0.9] {
            assert_abs_diff_eq!(burgers_exact_sample(1.0, t).unwrap(), 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(burgers_exact_sample(-1.0, t).unwrap(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn antisymmetric_at_late_time() {
        for k in 1..100 {
            let x = k as f64 / 100.0;
            let a = burgers_exact_sample(x, 0.75).unwrap();
            let b = burgers_exact_sample(-x, 0.75).unwrap();
            assert_abs_diff_eq!(a, -b, epsilon = 1e-10);
        }
    }

    #[test]
    fn characteristic_equation_is_satisfied() {
        // At a pre-shock time, u(x, t) must satisfy u = -sin(pi (x - u t)).
        let t = 0.25;
        for k in 0..50 {
            let x = -0.98 + k as f64 * 0.04;
            let u = burgers_exact_sample(x, t).unwrap();
            assert_abs_diff_eq!(u, -(PI * (x - u * t)).sin(), epsilon = 1e-11);
        }
    }

    #[test]
    fn shock_jump_brackets_zero() {
        // Just after shock formation, values straddle the stationary shock.
        let t = 0.5;
        let eps = 1e-6;
        let right = burgers_exact_sample(eps, t).unwrap();
        let left = burgers_exact_sample(-eps, t).unwrap();
        assert!(right < -0.1, "right of shock should be negative, got {right}");
        assert!(left > 0.1, "left of shock should be positive, got {left}");
        assert_abs_diff_eq!(burgers_exact_sample(0.0, t).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn time_outside_range_is_rejected() {
        assert!(burgers_exact_sample(0.3, -0.1).is_err());
        assert!(burgers_exact_sample(0.3, 1.5).is_err());
    }
}
