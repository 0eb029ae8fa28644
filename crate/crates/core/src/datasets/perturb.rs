//! Multiplicative perturbation families of Riemann initial data.

use crate::error::Result;
use crate::exact::RiemannIC;
use crate::schemes::PrimState;

/// Training perturbations: +-2%, 4%, 6%, 8%, 10%.
pub const TRAIN_EPSILONS: [f64; 10] =
    [0.02, -0.02, 0.04, -0.04, 0.06, -0.06, 0.08, -0.08, 0.10, -0.10];

/// Held-out evaluation cases: the original data, +-3%, +-5%, and the
/// tables' +-7% rows.
pub const EVAL_EPSILONS: [f64; 7] = [0.0, 0.03, -0.03, 0.05, -0.05, 0.07, -0.07];

/// A base Riemann problem and the list of relative perturbations applied
/// to it during data generation.
#[derive(Debug, Clone)]
pub struct PerturbationFamily {
    pub base: RiemannIC,
    pub epsilons: Vec<f64>,
}

impl PerturbationFamily {
    pub fn training(base: RiemannIC) -> Self {
        PerturbationFamily { base, epsilons: TRAIN_EPSILONS.to_vec() }
    }

    pub fn members(&self) -> Result<Vec<(f64, RiemannIC)>> {
        self.epsilons
            .iter()
            .map(|&e| Ok((e, perturb_ic(&self.base, e)?)))
            .collect()
    }
}

/// Scales every primitive constant of both sides by `(1 + eps)`; the split
/// position and domain stay put. Zero velocity is a fixed point of the
/// scaling.
pub fn perturb_ic(ic: &RiemannIC, eps: f64) -> Result<RiemannIC> {
    let scale = 1.0 + eps;
    let stretch = |s: &PrimState| PrimState::new(s.rho * scale, s.v * scale, s.p * scale);
    RiemannIC::new(stretch(&ic.left)?, stretch(&ic.right)?, ic.x_split, ic.x_min, ic.x_max)
}
