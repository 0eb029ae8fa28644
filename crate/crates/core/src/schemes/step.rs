//! Single-step updates and residual forms of the first-order schemes.
//!
//! All steppers operate on conserved-variable fields and are generic over
//! the law. `alpha` means the Rusanov dissipation speed for `rusanov_step`
//! and the artificial diffusion coefficient (of size O(dx)) for the
//! leapfrog-based schemes.

use super::law::{ConservationLaw, StateVector};
use crate::error::{CoreError, Result};

/// Boundary handling for ghost values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// Copy-extrapolation ghost cells (free outflow).
    Outflow,
    /// Wrap-around.
    Periodic,
}

#[inline]
fn at<S: StateVector>(u: &[S], i: isize, bc: Boundary) -> S {
    let n = u.len() as isize;
    let j = match bc {
        Boundary::Outflow => i.clamp(0, n - 1),
        Boundary::Periodic => i.rem_euclid(n),
    };
    u[j as usize]
}

fn check_cfl(dx: f64, dt: f64, alpha: f64) -> Result<()> {
    let ratio = dt * alpha / dx;
    if ratio > 1.0 + 1e-12 {
        return Err(CoreError::config(format!(
            "CFL violation: dt*alpha/dx = {ratio:.4} > 1 (dt={dt:.3e}, alpha={alpha:.4}, dx={dx:.3e})"
        )));
    }
    Ok(())
}

/// Rusanov numerical flux at an interface between `ul` and `ur`.
#[inline]
pub(crate) fn rusanov_flux<L: ConservationLaw>(law: &L, ul: L::State, ur: L::State, alpha: f64) -> L::State {
    (law.flux(ul) + law.flux(ur)) * 0.5 + (ul - ur) * (0.5 * alpha)
}

/// One conservative Rusanov step.
///
/// `alpha` is the dissipation speed; the step refuses to run when
/// `dt * alpha / dx > 1`.
pub fn rusanov_step<L: ConservationLaw>(
    law: &L,
    level_n: &[L::State],
    dx: f64,
    dt: f64,
    alpha: f64,
    bc: Boundary,
) -> Result<Vec<L::State>> {
    if level_n.is_empty() {
        return Err(CoreError::usage("rusanov_step on an empty field"));
    }
    check_cfl(dx, dt, alpha)?;
    let n = level_n.len() as isize;
    let lam = dt / dx;
    let mut out = Vec::with_capacity(level_n.len());
    for i in 0..n {
        let um = at(level_n, i - 1, bc);
        let u = at(level_n, i, bc);
        let up = at(level_n, i + 1, bc);
        let f_r = rusanov_flux(law, u, up, alpha);
        let f_l = rusanov_flux(law, um, u, alpha);
        out.push(u - (f_r - f_l) * lam);
    }
    Ok(out)
}

/// Residual of the three-level leapfrog scheme with central artificial
/// diffusion evaluated at level `n`:
///
/// `(U^{n+1}_i - U^{n-1}_i)/(2dt) + (f^n_{i+1} - f^n_{i-1})/(2dx)
///  - alpha (U^n_{i+1} - 2 U^n_i + U^n_{i-1})/dx^2`
///
/// This scheme is residual-only: it is unstable when time-stepped, but its
/// left-hand side is a perfectly good loss term. Returns one residual per
/// interior cell (`i = 1 .. len-2`).
pub fn leapfrog_diffusion_residual<L: ConservationLaw>(
    law: &L,
    level_nm1: &[L::State],
    level_n: &[L::State],
    level_np1: &[L::State],
    dx: f64,
    dt: f64,
    alpha: f64,
) -> Result<Vec<L::State>> {
    let len = level_n.len();
    if level_nm1.len() != len || level_np1.len() != len {
        return Err(CoreError::usage(format!(
            "mismatched field lengths: {} / {} / {}",
            level_nm1.len(),
            len,
            level_np1.len()
        )));
    }
    if len < 3 {
        return Err(CoreError::usage("need at least 3 cells for a leapfrog residual"));
    }
    let mut out = Vec::with_capacity(len - 2);
    for i in 1..len - 1 {
        let time = (level_np1[i] - level_nm1[i]) * (1.0 / (2.0 * dt));
        let adv = (law.flux(level_n[i + 1]) - law.flux(level_n[i - 1])) * (1.0 / (2.0 * dx));
        let diff = (level_n[i + 1] - level_n[i] * 2.0 + level_n[i - 1]) * (alpha / (dx * dx));
        out.push(time + adv - diff);
    }
    Ok(out)
}

/// One step of the stabilized leapfrog scheme: diffusion is evaluated at
/// level `n-1`, which makes explicit time stepping possible.
pub fn leapfrog_stabilized_step<L: ConservationLaw>(
    law: &L,
    level_nm1: &[L::State],
    level_n: &[L::State],
    dx: f64,
    dt: f64,
    alpha: f64,
    bc: Boundary,
) -> Result<Vec<L::State>> {
    let len = level_n.len();
    if level_nm1.len() != len {
        return Err(CoreError::usage(format!(
            "mismatched field lengths: {} vs {}",
            level_nm1.len(),
            len
        )));
    }
    // Diffusion part of the two-level amplification: |1 - 8 (alpha dt / dx^2)| <= 1.
    if 2.0 * alpha * dt / (dx * dx) > 0.5 + 1e-12 {
        return Err(CoreError::config(format!(
            "diffusion stability violated: alpha*dt/dx^2 = {:.4} > 0.25",
            alpha * dt / (dx * dx)
        )));
    }
    let n = len as isize;
    let mut out = Vec::with_capacity(len);
    for i in 0..n {
        let adv = (law.flux(at(level_n, i + 1, bc)) - law.flux(at(level_n, i - 1, bc)))
            * (dt / dx);
        let um = at(level_nm1, i - 1, bc);
        let u0 = at(level_nm1, i, bc);
        let up = at(level_nm1, i + 1, bc);
        let diff = (up - u0 * 2.0 + um) * (2.0 * dt * alpha / (dx * dx));
        out.push(at(level_nm1, i, bc) - adv + diff);
    }
    Ok(out)
}

/// One step of the leapfrog/diffusion splitting scheme: a leapfrog advection
/// step to an intermediate field, then `substeps` forward-Euler diffusion
/// sub-steps of size `dt / substeps` each.
pub fn leapfrog_splitting_step<L: ConservationLaw>(
    law: &L,
    level_nm1: &[L::State],
    level_n: &[L::State],
    dx: f64,
    dt: f64,
    alpha: f64,
    substeps: usize,
    bc: Boundary,
) -> Result<Vec<L::State>> {
    let len = level_n.len();
    if level_nm1.len() != len {
        return Err(CoreError::usage(format!(
            "mismatched field lengths: {} vs {}",
            level_nm1.len(),
            len
        )));
    }
    if substeps == 0 {
        return Err(CoreError::usage("substeps must be >= 1"));
    }
    let dt_sub = dt / substeps as f64;
    if alpha * dt_sub / (dx * dx) > 0.5 + 1e-12 {
        return Err(CoreError::config(format!(
            "diffusion sub-step unstable: alpha*dt_sub/dx^2 = {:.4} > 0.5 (substeps={substeps})",
            alpha * dt_sub / (dx * dx)
        )));
    }
    let n = len as isize;
    let mut mid = Vec::with_capacity(len);
    for i in 0..n {
        let adv = (law.flux(at(level_n, i + 1, bc)) - law.flux(at(level_n, i - 1, bc)))
            * (dt / dx);
        mid.push(at(level_nm1, i, bc) - adv);
    }
    let mut cur = mid;
    for _ in 0..substeps {
        let mut next = Vec::with_capacity(len);
        for i in 0..n {
            let um = at(&cur, i - 1, bc);
            let u0 = at(&cur, i, bc);
            let up = at(&cur, i + 1, bc);
            next.push(u0 + (up - u0 * 2.0 + um) * (dt_sub * alpha / (dx * dx)));
        }
        cur = next;
    }
    Ok(cur)
}
