//! Exact solution of the 1D Euler Riemann problem.
//!
//! Star-region pressure is found by Newton iteration on the standard
//! pressure function with a two-rarefaction initial guess and a bracket
//! guard; the similarity solution is then sampled at xi = (x - x_split)/t.

use crate::error::{CoreError, Result};
use crate::schemes::{sound_speed, ConsState, GasModel, PrimState};

/// Riemann initial data: two constant states split at `x_split`.
#[derive(Debug, Clone, Copy)]
pub struct RiemannIC {
    pub left: PrimState,
    pub right: PrimState,
    pub x_split: f64,
    pub x_min: f64,
    pub x_max: f64,
}

impl RiemannIC {
    pub fn new(left: PrimState, right: PrimState, x_split: f64, x_min: f64, x_max: f64) -> Result<Self> {
        left.validate()?;
        right.validate()?;
        if !(x_min < x_split && x_split < x_max) {
            return Err(CoreError::usage(format!(
                "split {x_split} outside domain [{x_min}, {x_max}]"
            )));
        }
        Ok(RiemannIC { left, right, x_split, x_min, x_max })
    }

    /// Sod shock tube on [0, 1]: (1, 0, 1) | (0.125, 0, 0.1).
    pub fn sod() -> Self {
        RiemannIC {
            left: PrimState { rho: 1.0, v: 0.0, p: 1.0 },
            right: PrimState { rho: 0.125, v: 0.0, p: 0.1 },
            x_split: 0.5,
            x_min: 0.0,
            x_max: 1.0,
        }
    }

    /// Lax problem on [0, 1], stated in conserved variables
    /// (0.445, 0.311, 8.928) | (0.5, 0, 1.4275).
    pub fn lax(gas: &GasModel) -> Self {
        let left = ConsState { rho: 0.445, mom: 0.311, energy: 8.928 }
            .to_prim(gas)
            .expect("Lax left state is valid");
        let right = ConsState { rho: 0.5, mom: 0.0, energy: 1.4275 }
            .to_prim(gas)
            .expect("Lax right state is valid");
        RiemannIC { left, right, x_split: 0.5, x_min: 0.0, x_max: 1.0 }
    }

    /// The initial field sampled on grid points: left state for x <= x_split.
    pub fn initial_state(&self, x: f64) -> PrimState {
        if x <= self.x_split {
            self.left
        } else {
            self.right
        }
    }
}

/// Left or right nonlinear wave of the solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WaveSide {
    Shock { speed: f64 },
    Rarefaction { head: f64, tail: f64 },
}

/// The solved wave structure of a Riemann problem.
#[derive(Debug, Clone)]
pub struct EulerWaves {
    pub ic: RiemannIC,
    pub gas: GasModel,
    pub p_star: f64,
    pub v_star: f64,
    pub rho_star_left: f64,
    pub rho_star_right: f64,
    pub left_wave: WaveSide,
    pub right_wave: WaveSide,
}

/// Pressure function of one side and its derivative with respect to p.
fn pressure_fn(p: f64, s: &PrimState, c: f64, gamma: f64) -> (f64, f64) {
    if p > s.p {
        // Shock branch.
        let a = 2.0 / ((gamma + 1.0) * s.rho);
        let b = (gamma - 1.0) / (gamma + 1.0) * s.p;
        let root = (a / (p + b)).sqrt();
        let f = (p - s.p) * root;
        let df = root * (1.0 - (p - s.p) / (2.0 * (b + p)));
        (f, df)
    } else {
        // Rarefaction branch.
        let expo = (gamma - 1.0) / (2.0 * gamma);
        let f = 2.0 * c / (gamma - 1.0) * ((p / s.p).powf(expo) - 1.0);
        let df = (p / s.p).powf(-(gamma + 1.0) / (2.0 * gamma)) / (s.rho * c);
        (f, df)
    }
}

impl EulerWaves {
    pub fn solve(ic: &RiemannIC, gas: &GasModel) -> Result<Self> {
        let g = gas.gamma();
        let (l, r) = (ic.left, ic.right);
        let cl = sound_speed(&l, gas);
        let cr = sound_speed(&r, gas);

        // Positivity (no-vacuum) condition.
        if 2.0 * (cl + cr) / (g - 1.0) <= r.v - l.v {
            return Err(CoreError::domain(format!(
                "vacuum forms: 2(c_l + c_r)/(gamma-1) = {:.4} <= dv = {:.4}",
                2.0 * (cl + cr) / (g - 1.0),
                r.v - l.v
            )));
        }

        // Two-rarefaction initial guess, clamped into the bracket.
        let z = (g - 1.0) / (2.0 * g);
        let p_min = 1e-12;
        let p_max = 10.0 * l.p.max(r.p);
        let tr = ((cl + cr - 0.5 * (g - 1.0) * (r.v - l.v)) / (cl / l.p.powf(z) + cr / r.p.powf(z)))
            .powf(1.0 / z);
        let mut p = tr.clamp(p_min, p_max);

        let mut converged = false;
        for _ in 0..100 {
            let (fl, dfl) = pressure_fn(p, &l, cl, g);
            let (fr, dfr) = pressure_fn(p, &r, cr, g);
            let gval = fl + fr + (r.v - l.v);
            let step = gval / (dfl + dfr);
            let mut p_new = p - step;
            if !(p_new.is_finite()) || p_new <= p_min || p_new >= p_max {
                p_new = 0.5 * (p + if step > 0.0 { p_min } else { p_max });
            }
            let rel = (p_new - p).abs() / p_new.max(p_min);
            p = p_new;
            if rel < 1e-14 {
                converged = true;
                break;
            }
        }
        if !converged {
            // One more residual check before giving up: the clamp loop can
            // oscillate on pathological data.
            let (fl, _) = pressure_fn(p, &l, cl, g);
            let (fr, _) = pressure_fn(p, &r, cr, g);
            if (fl + fr + (r.v - l.v)).abs() > 1e-9 * (1.0 + p) {
                return Err(CoreError::numerical(format!(
                    "star pressure iteration did not converge in 100 steps (bracket [{p_min:.3e}, {p_max:.3e}], p = {p:.6e})"
                )));
            }
        }

        let p_star = p;
        let (fl, _) = pressure_fn(p_star, &l, cl, g);
        let (fr, _) = pressure_fn(p_star, &r, cr, g);
        let v_star = 0.5 * (l.v + r.v) + 0.5 * (fr - fl);

        let mu2 = (g - 1.0) / (g + 1.0);
        let (rho_star_left, left_wave) = if p_star > l.p {
            let rho = l.rho * ((p_star / l.p + mu2) / (mu2 * p_star / l.p + 1.0));
            let speed = l.v - cl * ((g + 1.0) / (2.0 * g) * p_star / l.p + (g - 1.0) / (2.0 * g)).sqrt();
            (rho, WaveSide::Shock { speed })
        } else {
            let rho = l.rho * (p_star / l.p).powf(1.0 / g);
            let c_star = cl * (p_star / l.p).powf((g - 1.0) / (2.0 * g));
            (rho, WaveSide::Rarefaction { head: l.v - cl, tail: v_star - c_star })
        };
        let (rho_star_right, right_wave) = if p_star > r.p {
            let rho = r.rho * ((p_star / r.p + mu2) / (mu2 * p_star / r.p + 1.0));
            let speed = r.v + cr * ((g + 1.0) / (2.0 * g) * p_star / r.p + (g - 1.0) / (2.0 * g)).sqrt();
            (rho, WaveSide::Shock { speed })
        } else {
            let rho = r.rho * (p_star / r.p).powf(1.0 / g);
            let c_star = cr * (p_star / r.p).powf((g - 1.0) / (2.0 * g));
            (rho, WaveSide::Rarefaction { head: r.v + cr, tail: v_star + c_star })
        };

        Ok(EulerWaves {
            ic: *ic,
            gas: *gas,
            p_star,
            v_star,
            rho_star_left,
            rho_star_right,
            left_wave,
            right_wave,
        })
    }

    /// Samples the similarity solution at position `x` and time `t >= 0`.
    pub fn sample(&self, x: f64, t: f64) -> Result<PrimState> {
        if t < 0.0 {
            return Err(CoreError::usage(format!("negative time {t}")));
        }
        if t == 0.0 {
            return Ok(self.ic.initial_state(x));
        }
        Ok(self.sample_xi((x - self.ic.x_split) / t))
    }

    /// Samples at similarity coordinate xi = (x - x_split) / t.
    pub fn sample_xi(&self, xi: f64) -> PrimState {
        let g = self.gas.gamma();
        let (l, r) = (self.ic.left, self.ic.right);
        if xi < self.v_star {
            let cl = sound_speed(&l, &self.gas);
            match self.left_wave {
                WaveSide::Shock { speed } => {
                    if xi < speed {
                        l
                    } else {
                        PrimState { rho: self.rho_star_left, v: self.v_star, p: self.p_star }
                    }
                }
                WaveSide::Rarefaction { head, tail } => {
                    if xi < head {
                        l
                    } else if xi > tail {
                        PrimState { rho: self.rho_star_left, v: self.v_star, p: self.p_star }
                    } else {
                        let v = 2.0 / (g + 1.0) * (cl + 0.5 * (g - 1.0) * l.v + xi);
                        let c = cl - 0.5 * (g - 1.0) * (v - l.v);
                        PrimState {
                            rho: l.rho * (c / cl).powf(2.0 / (g - 1.0)),
                            v,
                            p: l.p * (c / cl).powf(2.0 * g / (g - 1.0)),
                        }
                    }
                }
            }
        } else {
            let cr = sound_speed(&r, &self.gas);
            match self.right_wave {
                WaveSide::Shock { speed } => {
                    if xi > speed {
                        r
                    } else {
                        PrimState { rho: self.rho_star_right, v: self.v_star, p: self.p_star }
                    }
                }
                WaveSide::Rarefaction { head, tail } => {
                    if xi > head {
                        r
                    } else if xi < tail {
                        PrimState { rho: self.rho_star_right, v: self.v_star, p: self.p_star }
                    } else {
                        let v = 2.0 / (g + 1.0) * (-cr + 0.5 * (g - 1.0) * r.v + xi);
                        let c = cr + 0.5 * (g - 1.0) * (v - r.v);
                        PrimState {
                            rho: r.rho * (c / cr).powf(2.0 / (g - 1.0)),
                            v,
                            p: r.p * (c / cr).powf(2.0 * g / (g - 1.0)),
                        }
                    }
                }
            }
        }
    }
}

/// One-call sampler: solves the wave structure and evaluates at `(x, t)`.
pub fn euler_riemann_sample(ic: &RiemannIC, x: f64, t: f64, gas: &GasModel) -> Result<PrimState> {
    EulerWaves::solve(ic, gas)?.sample(x, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::{ConservationLaw, EulerLaw};
    use approx::assert_relative_eq;

    fn gas() -> GasModel {
        GasModel::default()
    }

    #[test]
    fn initial_time_returns_initial_data() {
        let ic = RiemannIC::sod();
        let s = euler_riemann_sample(&ic, 0.2, 0.0, &gas()).unwrap();
        assert_eq!(s, ic.left);
        let s = euler_riemann_sample(&ic, 0.7, 0.0, &gas()).unwrap();
        assert_eq!(s, ic.right);
    }

    #[test]
    fn sod_star_state_values() {
        // Classic values for the Sod tube, self-consistent to the Newton
        // tolerance: p* ~ 0.30313, v* ~ 0.92745.
        let w = EulerWaves::solve(&RiemannIC::sod(), &gas()).unwrap();
        assert_relative_eq!(w.p_star, 0.30313, max_relative = 1e-4);
        assert_relative_eq!(w.v_star, 0.92745, max_relative = 1e-4);
        // Pressure-function residual at the reported root.
        let g = 1.4;
        let cl = sound_speed(&w.ic.left, &gas());
        let cr = sound_speed(&w.ic.right, &gas());
        let (fl, _) = super::pressure_fn(w.p_star, &w.ic.left, cl, g);
        let (fr, _) = super::pressure_fn(w.p_star, &w.ic.right, cr, g);
        assert!((fl + fr + (w.ic.right.v - w.ic.left.v)).abs() < 1e-12);
    }

    #[test]
    fn sod_wave_ordering_and_structure() {
        let w = EulerWaves::solve(&RiemannIC::sod(), &gas()).unwrap();
        match (w.left_wave, w.right_wave) {
            (WaveSide::Rarefaction { head, tail }, WaveSide::Shock { speed }) => {
                assert!(head < tail && tail < w.v_star && w.v_star < speed);
            }
            other => panic!("unexpected wave structure {other:?}"),
        }
        assert!(w.rho_star_left > w.rho_star_right);
    }

    #[test]
    fn mirrored_problem_mirrors_the_solution() {
        let ic = RiemannIC::lax(&gas());
        let mirrored = RiemannIC::new(
            PrimState { rho: ic.right.rho, v: -ic.right.v, p: ic.right.p },
            PrimState { rho: ic.left.rho, v: -ic.left.v, p: ic.left.p },
            ic.x_split,
            ic.x_min,
            ic.x_max,
        )
        .unwrap();
        let w = EulerWaves::solve(&ic, &gas()).unwrap();
        let wm = EulerWaves::solve(&mirrored, &gas()).unwrap();
        let t = 0.13;
        for i in 0..41 {
            let x = i as f64 / 40.0;
            let a = w.sample(x, t).unwrap();
            let b = wm.sample(2.0 * ic.x_split - x, t).unwrap();
            assert_relative_eq!(a.rho, b.rho, max_relative = 1e-10);
            assert_relative_eq!(a.v, -b.v, epsilon = 1e-10, max_relative = 1e-10);
            assert_relative_eq!(a.p, b.p, max_relative = 1e-10);
        }
    }

    #[test]
    fn rankine_hugoniot_across_the_reported_shock() {
        for ic in [RiemannIC::sod(), RiemannIC::lax(&gas())] {
            let w = EulerWaves::solve(&ic, &gas()).unwrap();
            let WaveSide::Shock { speed } = w.right_wave else {
                panic!("expected right shock");
            };
            let law = EulerLaw::new(gas());
            let u_star = PrimState { rho: w.rho_star_right, v: w.v_star, p: w.p_star }
                .to_cons(&gas());
            let u_r = ic.right.to_cons(&gas());
            let flux_jump = law.flux(u_r) - law.flux(u_star);
            let state_jump = (u_r - u_star) * speed;
            assert!((flux_jump.rho - state_jump.rho).abs() < 1e-9);
            assert!((flux_jump.mom - state_jump.mom).abs() < 1e-9);
            assert!((flux_jump.energy - state_jump.energy).abs() < 1e-9);
        }
    }

    #[test]
    fn riemann_invariants_constant_through_left_fan() {
        let w = EulerWaves::solve(&RiemannIC::sod(), &gas()).unwrap();
        let WaveSide::Rarefaction { head, tail } = w.left_wave else {
            panic!("expected left rarefaction");
        };
        let g = 1.4;
        let l = w.ic.left;
        let cl = sound_speed(&l, &gas());
        let inv_ref = l.v + 2.0 * cl / (g - 1.0);
        let entropy_ref = l.p / l.rho.powf(g);
        for k in 1..50 {
            let xi = head + (tail - head) * k as f64 / 50.0;
            let s = w.sample_xi(xi);
            let c = sound_speed(&s, &gas());
            let inv = s.v + 2.0 * c / (g - 1.0);
            assert!((inv - inv_ref).abs() < 1e-9 * (1.0 + inv_ref.abs()));
            assert!((s.p / s.rho.powf(g) - entropy_ref).abs() < 1e-9);
        }
    }

    #[test]
    fn vacuum_condition_is_a_domain_error() {
        let ic = RiemannIC::new(
            PrimState { rho: 1.0, v: -10.0, p: 1.0 },
            PrimState { rho: 1.0, v: 10.0, p: 1.0 },
            0.5,
            0.0,
            1.0,
        )
        .unwrap();
        assert!(matches!(
            EulerWaves::solve(&ic, &gas()).unwrap_err(),
            CoreError::Domain(_)
        ));
    }
}
