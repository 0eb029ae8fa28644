//! Training data for the stencil-input surrogates: perturbation families,
//! domain-of-dependence stencil assembly on nested or twin runs, and
//! dataset persistence.

mod builder;
mod io;
mod perturb;
mod stencil;

pub use builder::{build_2cgnn_set, build_2dcnn_set, BuildConfig, TimeSelection};
pub use perturb::{perturb_ic, PerturbationFamily, EVAL_EPSILONS, TRAIN_EPSILONS};
pub use stencil::{assemble_2cgnn, assemble_2dcnn, InputFormat, StencilSample};

use crate::schemes::FieldKind;

/// Where a dataset came from; stored in the file header and carried along
/// so evaluation can regenerate matching inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    /// Scheme name, e.g. "rusanov"; the splitting scheme for two-coefficient
    /// data.
    pub scheme: String,
    pub coarse_cells: usize,
    pub dt: f64,
    pub t_target: f64,
    /// Large diffusion coefficient factor for two-coefficient data; 0 for
    /// two-grid data.
    pub diffusion_factor: f64,
    pub epsilons: Vec<f64>,
    pub seed: u64,
}

/// A homogeneous set of stencil samples.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub format: InputFormat,
    pub kind: FieldKind,
    pub samples: Vec<StencilSample>,
    pub provenance: Provenance,
}

impl Dataset {
    pub fn input_width(&self) -> usize {
        self.format.per_var() * self.kind.width()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    /// Inputs and targets as matrices (rows are samples).
    pub fn matrices(&self) -> (ndarray::Array2<f64>, ndarray::Array2<f64>) {
        let n = self.samples.len();
        let iw = self.input_width();
        let tw = self.kind.width();
        let mut x = ndarray::Array2::zeros((n, iw));
        let mut t = ndarray::Array2::zeros((n, tw));
        for (r, s) in self.samples.iter().enumerate() {
            for (c, v) in s.input.iter().enumerate() {
                x[[r, c]] = *v;
            }
            for (c, v) in s.target.iter().enumerate() {
                t[[r, c]] = *v;
            }
        }
        (x, t)
    }
}
