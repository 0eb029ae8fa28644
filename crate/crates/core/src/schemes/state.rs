//! Euler state vectors in primitive and conserved variables.

use crate::error::{CoreError, Result};
use std::ops::{Add, Mul, Sub};

/// Ideal-gas model; `gamma` is the ratio of specific heats (1.4 for air).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasModel {
    gamma: f64,
}

impl GasModel {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 1.0) {
            return Err(CoreError::domain(format!("gamma must be > 1, got {gamma}")));
        }
        Ok(GasModel { gamma })
    }

    #[inline]
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

impl Default for GasModel {
    fn default() -> Self {
        GasModel { gamma: 1.4 }
    }
}

/// Primitive variables: density, velocity, pressure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimState {
    pub rho: f64,
    pub v: f64,
    pub p: f64,
}

/// Conserved variables: density, momentum density, total energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConsState {
    pub rho: f64,
    pub mom: f64,
    pub energy: f64,
}

impl PrimState {
    /// Validating constructor; density and pressure must be positive.
    pub fn new(rho: f64, v: f64, p: f64) -> Result<Self> {
        let s = PrimState { rho, v, p };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0) || !self.rho.is_finite() {
            return Err(CoreError::domain(format!(
                "non-positive or non-finite density {}",
                self.rho
            )));
        }
        if !(self.p > 0.0) || !self.p.is_finite() {
            return Err(CoreError::domain(format!(
                "non-positive or non-finite pressure {}",
                self.p
            )));
        }
        if !self.v.is_finite() {
            return Err(CoreError::domain(format!("non-finite velocity {}", self.v)));
        }
        Ok(())
    }

    pub fn to_cons(&self, gas: &GasModel) -> ConsState {
        ConsState {
            rho: self.rho,
            mom: self.rho * self.v,
            energy: self.p / (gas.gamma() - 1.0) + 0.5 * self.rho * self.v * self.v,
        }
    }
}

impl ConsState {
    pub fn new(rho: f64, mom: f64, energy: f64, gas: &GasModel) -> Result<Self> {
        let s = ConsState { rho, mom, energy };
        s.validate(gas)?;
        Ok(s)
    }

    pub fn validate(&self, gas: &GasModel) -> Result<()> {
        if !(self.rho > 0.0) || !self.rho.is_finite() {
            return Err(CoreError::domain(format!(
                "non-positive or non-finite density {}",
                self.rho
            )));
        }
        if !self.mom.is_finite() || !self.energy.is_finite() {
            return Err(CoreError::domain("non-finite momentum or energy".to_string()));
        }
        let internal = self.energy - 0.5 * self.mom * self.mom / self.rho;
        if !(internal > 0.0) {
            return Err(CoreError::domain(format!(
                "non-positive internal energy {internal} (gamma {})",
                gas.gamma()
            )));
        }
        Ok(())
    }

    /// Converts to primitive variables, checking positivity of the result.
    pub fn to_prim(&self, gas: &GasModel) -> Result<PrimState> {
        let v = self.mom / self.rho;
        let p = (gas.gamma() - 1.0) * (self.energy - 0.5 * self.mom * v);
        PrimState { rho: self.rho, v, p }.validate()?;
        Ok(PrimState { rho: self.rho, v, p })
    }

    /// Primitive conversion without the positivity check, for diagnostics.
    pub fn to_prim_unchecked(&self, gas: &GasModel) -> PrimState {
        let v = self.mom / self.rho;
        let p = (gas.gamma() - 1.0) * (self.energy - 0.5 * self.mom * v);
        PrimState { rho: self.rho, v, p }
    }
}

impl Add for ConsState {
    type Output = ConsState;
    fn add(self, o: ConsState) -> ConsState {
        ConsState {
            rho: self.rho + o.rho,
            mom: self.mom + o.mom,
            energy: self.energy + o.energy,
        }
    }
}

impl Sub for ConsState {
    type Output = ConsState;
    fn sub(self, o: ConsState) -> ConsState {
        ConsState {
            rho: self.rho - o.rho,
            mom: self.mom - o.mom,
            energy: self.energy - o.energy,
        }
    }
}

impl Mul<f64> for ConsState {
    type Output = ConsState;
    fn mul(self, k: f64) -> ConsState {
        ConsState {
            rho: self.rho * k,
            mom: self.mom * k,
            energy: self.energy * k,
        }
    }
}

/// Speed of sound `sqrt(gamma p / rho)`.
#[inline]
pub fn sound_speed(s: &PrimState, gas: &GasModel) -> f64 {
    (gas.gamma() * s.p / s.rho).sqrt()
}

/// Largest characteristic speed `max_i(|v_i| + c_i)` over a field.
pub fn max_char_speed(field: &[PrimState], gas: &GasModel) -> Result<f64> {
    if field.is_empty() {
        return Err(CoreError::usage("max_char_speed over an empty field"));
    }
    Ok(field
        .iter()
        .map(|s| s.v.abs() + sound_speed(s, gas))
        .fold(f64::NEG_INFINITY, f64::max))
}
