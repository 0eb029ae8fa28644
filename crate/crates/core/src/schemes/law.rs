//! Conservation-law abstraction shared by the schemes and residual code.
//!
//! A law's state is its conserved vector: `f64` for scalar laws, [`ConsState`]
//! for the Euler system. Schemes are written once against this trait.

use super::state::{ConsState, GasModel, PrimState};
use std::ops::{Add, Mul, Sub};

/// Minimal vector arithmetic a conserved state must support.
pub trait StateVector:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn zeros() -> Self;
    fn abs_max(&self) -> f64;
    fn is_finite(&self) -> bool;
}

impl StateVector for f64 {
    fn zeros() -> f64 {
        0.0
    }
    fn abs_max(&self) -> f64 {
        self.abs()
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

impl StateVector for ConsState {
    fn zeros() -> ConsState {
        ConsState { rho: 0.0, mom: 0.0, energy: 0.0 }
    }
    fn abs_max(&self) -> f64 {
        self.rho.abs().max(self.mom.abs()).max(self.energy.abs())
    }
    fn is_finite(&self) -> bool {
        self.rho.is_finite() && self.mom.is_finite() && self.energy.is_finite()
    }
}

/// A 1D conservation law `dU/dt + df(U)/dx = 0`.
pub trait ConservationLaw {
    type State: StateVector;

    fn flux(&self, u: Self::State) -> Self::State;

    /// Largest characteristic speed of a single state (`|v| + c` for Euler,
    /// `|u|` for Burgers).
    fn char_speed(&self, u: Self::State) -> f64;

    fn max_char_speed(&self, field: &[Self::State]) -> f64 {
        field
            .iter()
            .map(|u| self.char_speed(*u))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Burgers' equation, `f(u) = u^2 / 2`.
#[derive(Debug, Clone, Copy, Default)]
pub struct BurgersLaw;

impl ConservationLaw for BurgersLaw {
    type State = f64;

    fn flux(&self, u: f64) -> f64 {
        0.5 * u * u
    }

    fn char_speed(&self, u: f64) -> f64 {
        u.abs()
    }
}

/// The 1D Euler system for an ideal gas.
#[derive(Debug, Clone, Copy, Default)]
pub struct EulerLaw {
    pub gas: GasModel,
}

impl EulerLaw {
    pub fn new(gas: GasModel) -> Self {
        EulerLaw { gas }
    }
}

impl ConservationLaw for EulerLaw {
    type State = ConsState;

    fn flux(&self, u: ConsState) -> ConsState {
        let g = self.gas.gamma();
        let v = u.mom / u.rho;
        let p = (g - 1.0) * (u.energy - 0.5 * u.mom * v);
        ConsState {
            rho: u.mom,
            mom: u.mom * v + p,
            energy: v * (u.energy + p),
        }
    }

    fn char_speed(&self, u: ConsState) -> f64 {
        let g = self.gas.gamma();
        let v = u.mom / u.rho;
        let p = (g - 1.0) * (u.energy - 0.5 * u.mom * v);
        v.abs() + (g * p / u.rho).sqrt()
    }
}

impl EulerLaw {
    /// Jacobian of the conserved vector with respect to the primitive
    /// variables, row-major over (rho, mom, energy) x (rho, v, p).
    pub fn cons_prim_jacobian(&self, s: &PrimState) -> [[f64; 3]; 3] {
        let g = self.gas.gamma();
        [
            [1.0, 0.0, 0.0],
            [s.v, s.rho, 0.0],
            [0.5 * s.v * s.v, s.rho * s.v, 1.0 / (g - 1.0)],
        ]
    }

    /// Jacobian of the flux with respect to the primitive variables,
    /// row-major over (mass flux, momentum flux, energy flux) x (rho, v, p).
    pub fn flux_prim_jacobian(&self, s: &PrimState) -> [[f64; 3]; 3] {
        let g = self.gas.gamma();
        let gm = g / (g - 1.0);
        [
            [s.v, s.rho, 0.0],
            [s.v * s.v, 2.0 * s.rho * s.v, 1.0],
            [
                0.5 * s.v * s.v * s.v,
                gm * s.p + 1.5 * s.rho * s.v * s.v,
                gm * s.v,
            ],
        ]
    }
}
