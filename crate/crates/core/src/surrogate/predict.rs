//! Prediction: run the low-cost scheme(s) for an initial condition,
//! assemble the per-point inputs at the final level, evaluate the network.

use super::train::SurrogateConfig;
use crate::datasets::{assemble_2cgnn, assemble_2dcnn, InputFormat};
use crate::error::{CoreError, Result};
use crate::exact::RiemannIC;
use crate::schemes::{
    run_scheme, run_scheme_fixed, run_two_coefficient, GasModel, Problem, SpaceTimeSolution,
};
use crate::smallnet::Mlp;
use ndarray::Array2;

/// A predicted final-time field plus the ingredients that produced it.
#[derive(Debug, Clone)]
pub struct CasePrediction {
    /// Predicted primitive values per cell (boundary cells copied from the
    /// primary input solution).
    pub field: Array2<f64>,
    /// Achieved final time of the underlying runs.
    pub t_final: f64,
    /// The primary low-cost input solution on the prediction grid.
    pub input_solution: SpaceTimeSolution,
    /// The secondary input solution (fine grid or large-diffusion run).
    pub secondary_solution: SpaceTimeSolution,
}

/// Runs the configured scheme(s) for `ic` and predicts the final-time field
/// on the prediction grid (the coarse grid for two-grid inputs, the single
/// grid for two-diffusion inputs).
pub fn predict_case(
    net: &Mlp,
    ic: &RiemannIC,
    cfg: &SurrogateConfig,
    gas: &GasModel,
) -> Result<CasePrediction> {
    let problem = Problem::Riemann(*ic);
    let grid = problem.grid(cfg.cells)?;
    let vars = 3usize;
    if net.input_dim() != cfg.input_width(vars) {
        return Err(CoreError::usage(format!(
            "network input width {} does not match format {} ({} per variable)",
            net.input_dim(),
            cfg.format.name(),
            cfg.format.per_var()
        )));
    }

    let (primary, secondary) = if cfg.format == InputFormat::TwoDiffusion8 {
        run_two_coefficient(
            &problem,
            &grid,
            cfg.diffusion_factor,
            cfg.t_target,
            cfg.cfl,
            &cfg.policy,
            gas,
        )?
    } else {
        let coarse =
            run_scheme(&problem, &grid, cfg.scheme, cfg.t_target, cfg.cfl, &cfg.policy, gas)?;
        let fine = run_scheme_fixed(
            &problem,
            &grid.refined(),
            cfg.scheme,
            coarse.dt() / 2.0,
            2 * coarse.n_steps(),
            &cfg.policy,
            gas,
        )?;
        (coarse, fine)
    };

    let n_last = primary.n_steps();
    if n_last == 0 {
        return Err(CoreError::usage("runs too short to assemble any stencil"));
    }
    let n = cfg.cells;
    let mut inputs = Array2::zeros((n - 2, cfg.input_width(vars)));
    for i in 1..=n - 2 {
        let input = if cfg.format == InputFormat::TwoDiffusion8 {
            assemble_2dcnn(&primary, &secondary, i, n_last)?
        } else {
            assemble_2cgnn(&primary, &secondary, i, n_last, cfg.format)?
        };
        for (c, v) in input.iter().enumerate() {
            inputs[[i - 1, c]] = *v;
        }
    }
    let out = net.forward(inputs.view())?;

    let mut field = Array2::zeros((n, vars));
    for i in 0..n {
        if i == 0 || i == n - 1 {
            let s = primary.prim(n_last, i);
            field[[i, 0]] = s.rho;
            field[[i, 1]] = s.v;
            field[[i, 2]] = s.p;
        } else {
            for k in 0..vars {
                field[[i, k]] = out[[i - 1, k]];
            }
        }
    }
    Ok(CasePrediction {
        field,
        t_final: primary.t_final(),
        input_solution: primary,
        secondary_solution: secondary,
    })
}
