//! Network training against first-order scheme residuals on a space-time
//! lattice, plus physics data terms (initial, boundary, optional interior
//! data), in place of autodiff PDE residuals.

mod loss;
mod select;
mod train;

pub use loss::{
    data_loss, residual_loss, LossParts, LossWeights, NpinnLoss, PhysicsDataset, PhysicsPoint,
    PointSource, ResidualGrid, ResidualScheme,
};
pub use select::select_additional_data;
pub use train::{predict_field, train_npinn, train_npinn_resume, NpinnConfig, NpinnReport};
