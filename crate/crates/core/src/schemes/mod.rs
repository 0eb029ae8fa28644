//! First-order numerical schemes for 1D Burgers and Euler: flux functions,
//! state conversions, CFL logic, boundary handling, and full space-time runs.

mod grid;
mod law;
mod run;
mod state;
mod step;

pub use grid::{FieldKind, Grid1D, SpaceTimeSolution};
pub use law::{BurgersLaw, ConservationLaw, EulerLaw, StateVector};
pub use run::{
    initial_max_speed, run_scheme, run_scheme_fixed, run_two_coefficient, stable_dt, AlphaPolicy,
    Problem, SchemeKind,
};
pub use state::{max_char_speed, sound_speed, ConsState, GasModel, PrimState};
pub use step::{
    leapfrog_diffusion_residual, leapfrog_splitting_step, leapfrog_stabilized_step, rusanov_step,
    Boundary,
};
