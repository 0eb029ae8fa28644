//! Training and evaluation of the stencil-input surrogate networks.

mod eval;
mod predict;
mod train;

pub use eval::{evaluate_suite, shock_transition_width, CaseResult, EvalReport};
pub use predict::{predict_case, CasePrediction};
pub use train::{train_surrogate, train_surrogate_resume, SurrogateConfig};
