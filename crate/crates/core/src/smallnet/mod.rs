//! Dense feedforward networks sized for this crate's experiments
//! (up to 10 hidden layers x 300 neurons), with reverse-mode parameter
//! gradients, Adam and L-BFGS optimizers, and checkpoint persistence.
//!
//! All arithmetic is f64. Batch work is chunked across threads with a fixed
//! reduction order, so results are bit-reproducible for a fixed seed
//! regardless of thread count.

mod checkpoint;
mod mlp;
mod optim;

pub use mlp::{BatchLoss, Mlp, MseLoss};
pub use optim::{
    minimize, two_loop_direction, Adam, AdamParams, LbfgsParams, MinimizeReport, OptKind,
    OptState, StopReason,
};
