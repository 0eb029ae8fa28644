//! Exact reference solutions: the Euler Riemann problem solved by pressure
//! iteration, and the inviscid Burgers problem solved along characteristics.

mod burgers;
mod riemann;

pub use burgers::{burgers_exact_sample, BurgersIC};
pub use riemann::{euler_riemann_sample, EulerWaves, RiemannIC, WaveSide};

use crate::error::Result;
use crate::schemes::{FieldKind, GasModel, Grid1D, PrimState, SpaceTimeSolution};

/// Samples the exact solution at every grid point of `grid` at time `t`.
pub fn reference_field(ic: &RiemannIC, grid: &Grid1D, t: f64, gas: &GasModel) -> Result<Vec<PrimState>> {
    let waves = EulerWaves::solve(ic, gas)?;
    (0..grid.n_cells())
        .map(|i| waves.sample(grid.point(i), t))
        .collect()
}

/// Scalar counterpart of [`reference_field`] for the Burgers problem.
pub fn reference_field_scalar(ic: &BurgersIC, grid: &Grid1D, t: f64) -> Result<Vec<f64>> {
    (0..grid.n_cells())
        .map(|i| {
            let _ = ic;
            burgers_exact_sample(grid.point(i), t)
        })
        .collect()
}

/// Wraps a reference field in the common space-time container so it shares
/// the columnar text format. For `t > 0` the result has two levels (initial
/// data and the field at `t`, with `dt = t`); for `t = 0` just the initial
/// level.
pub fn reference_solution(
    ic: &RiemannIC,
    grid: &Grid1D,
    t: f64,
    gas: &GasModel,
) -> Result<SpaceTimeSolution> {
    let mut sol = SpaceTimeSolution::new(*grid, if t > 0.0 { t } else { 1.0 }, FieldKind::Euler);
    sol.push_prim_level(&reference_field(ic, grid, 0.0, gas)?);
    if t > 0.0 {
        sol.push_prim_level(&reference_field(ic, grid, t, gas)?);
    }
    Ok(sol)
}
