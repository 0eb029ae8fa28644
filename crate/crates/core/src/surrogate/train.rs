//! Surrogate training: the loss is the plain sum of squared output errors
//! over every training record, minimized by mini-batch Adam warm-up
//! followed by full-batch L-BFGS.

use crate::datasets::{Dataset, InputFormat};
use crate::derive_seed;
use crate::error::{CoreError, Result};
use crate::schemes::{AlphaPolicy, SchemeKind};
use crate::smallnet::{minimize, Adam, AdamParams, Mlp, MinimizeReport, MseLoss, OptState};
use ndarray::s;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Architecture, optimizer budget, and the input-generation recipe a
/// trained surrogate needs at prediction time.
#[derive(Debug, Clone)]
pub struct SurrogateConfig {
    pub format: InputFormat,
    pub hidden_layers: usize,
    pub hidden_width: usize,
    pub adam_steps: usize,
    pub adam_batch: usize,
    pub lbfgs_iters: usize,
    pub seed: u64,
    pub scheme: SchemeKind,
    pub cells: usize,
    pub t_target: f64,
    pub cfl: f64,
    pub policy: AlphaPolicy,
    /// 0 for two-grid inputs; the large-coefficient factor for
    /// two-diffusion inputs.
    pub diffusion_factor: f64,
}

impl SurrogateConfig {
    /// Two-grid surrogate with the reference architecture (8 x 300).
    pub fn two_grid(format: InputFormat, scheme: SchemeKind) -> Self {
        SurrogateConfig {
            format,
            hidden_layers: 8,
            hidden_width: 300,
            adam_steps: 2000,
            adam_batch: 1024,
            lbfgs_iters: 1000,
            seed: 0,
            scheme,
            cells: 50,
            t_target: 0.16,
            cfl: 0.9,
            policy: AlphaPolicy::default(),
            diffusion_factor: 0.0,
        }
    }

    /// Two-diffusion surrogate on a single 100-cell grid.
    pub fn two_diffusion(c: f64) -> Self {
        SurrogateConfig {
            format: InputFormat::TwoDiffusion8,
            scheme: SchemeKind::LeapfrogSplitting,
            cells: 100,
            diffusion_factor: c,
            ..SurrogateConfig::two_grid(InputFormat::TwoDiffusion8, SchemeKind::LeapfrogSplitting)
        }
    }

    pub fn input_width(&self, vars: usize) -> usize {
        self.format.per_var() * vars
    }

    pub fn dims(&self, vars: usize) -> Vec<usize> {
        let mut dims = vec![self.input_width(vars)];
        dims.extend(std::iter::repeat(self.hidden_width).take(self.hidden_layers));
        dims.push(vars);
        dims
    }
}

/// Trains a surrogate on a dataset. The dataset format must match the
/// configuration; width mismatches are rejected before any work happens.
pub fn train_surrogate(ds: &Dataset, cfg: &SurrogateConfig) -> Result<(Mlp, MinimizeReport)> {
    let net = Mlp::init(&cfg.dims(ds.kind.width()), derive_seed(cfg.seed, "surrogate-init"))?;
    train_surrogate_resume(ds, cfg, net)
}

/// As [`train_surrogate`] but continuing from an existing network, e.g. a
/// loaded checkpoint.
pub fn train_surrogate_resume(
    ds: &Dataset,
    cfg: &SurrogateConfig,
    mut net: Mlp,
) -> Result<(Mlp, MinimizeReport)> {
    if ds.format != cfg.format {
        return Err(CoreError::usage(format!(
            "dataset format {} does not match configured {}",
            ds.format.name(),
            cfg.format.name()
        )));
    }
    if ds.is_empty() {
        return Err(CoreError::usage("cannot train on an empty dataset"));
    }
    let vars = ds.kind.width();
    if net.input_dim() != cfg.input_width(vars) || net.output_dim() != vars {
        return Err(CoreError::usage(format!(
            "network shape {:?} does not fit format {} with {} variables",
            net.dims(),
            cfg.format.name(),
            vars
        )));
    }
    let (x, t) = ds.matrices();

    // Mini-batch Adam warm-up over deterministic shuffles.
    if cfg.adam_steps > 0 {
        let n = x.nrows();
        let batch = cfg.adam_batch.min(n).max(1);
        let mut order: Vec<usize> = (0..n).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, "surrogate-warmup"));
        let mut adam = Adam::new(net.n_params(), AdamParams::default());
        let mut params = net.params();
        let mut cursor = n; // force an initial shuffle
        for _ in 0..cfg.adam_steps {
            if cursor + batch > n {
                order.shuffle(&mut rng);
                cursor = 0;
            }
            let idx = &order[cursor..cursor + batch];
            cursor += batch;
            let mut xb = ndarray::Array2::zeros((batch, x.ncols()));
            let mut tb = ndarray::Array2::zeros((batch, vars));
            for (r, &k) in idx.iter().enumerate() {
                xb.slice_mut(s![r, ..]).assign(&x.slice(s![k, ..]));
                tb.slice_mut(s![r, ..]).assign(&t.slice(s![k, ..]));
            }
            net.set_params(&params)?;
            let (_, grad) =
                net.value_and_grad(xb.view(), &MseLoss { targets: tb, mean: true })?;
            adam.step(&mut params, &grad);
        }
        net.set_params(&params)?;
    }

    // Full-batch L-BFGS on the sum-of-squares loss.
    let loss = MseLoss { targets: t, mean: false };
    let mut opt = OptState::lbfgs(cfg.lbfgs_iters);
    let report = minimize(&mut net, x.view(), &loss, &mut opt)?;
    Ok((net, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets::{Dataset, Provenance, StencilSample};
    use crate::schemes::FieldKind;

    fn tiny_dataset(n: usize) -> Dataset {
        let samples = (0..n)
            .map(|k| {
                let base = k as f64 / n.max(1) as f64;
                StencilSample {
                    input: (0..8).map(|j| base + 0.01 * j as f64).collect(),
                    target: vec![(base * 6.0).sin()],
                    eps: 0.0,
                    i: 1 + k % 3,
                    n: 1,
                }
            })
            .collect();
        Dataset {
            format: InputFormat::Standard8,
            kind: FieldKind::Scalar,
            samples,
            provenance: Provenance {
                scheme: "rusanov".into(),
                coarse_cells: 50,
                dt: 0.01,
                t_target: 0.16,
                diffusion_factor: 0.0,
                epsilons: vec![],
                seed: 0,
            },
        }
    }

    #[test]
    fn single_sample_is_interpolated_to_machine_precision() {
        let ds = tiny_dataset(1);
        let mut cfg = SurrogateConfig::two_grid(InputFormat::Standard8, SchemeKind::Rusanov);
        cfg.hidden_layers = 2;
        cfg.hidden_width = 8;
        cfg.adam_steps = 0;
        cfg.lbfgs_iters = 200;
        let (_, report) = train_surrogate(&ds, &cfg).unwrap();
        assert!(report.best_loss < 1e-10, "loss {:.3e}", report.best_loss);
    }

    #[test]
    fn format_mismatch_is_rejected_before_training() {
        let ds = tiny_dataset(4);
        let cfg = SurrogateConfig::two_grid(InputFormat::Variant10, SchemeKind::Rusanov);
        assert!(train_surrogate(&ds, &cfg).is_err());
    }

    #[test]
    fn training_is_deterministic_in_the_seed() {
        let ds = tiny_dataset(32);
        let mut cfg = SurrogateConfig::two_grid(InputFormat::Standard8, SchemeKind::Rusanov);
        cfg.hidden_layers = 2;
        cfg.hidden_width = 12;
        cfg.adam_steps = 50;
        cfg.adam_batch = 8;
        cfg.lbfgs_iters = 30;
        let (a, _) = train_surrogate(&ds, &cfg).unwrap();
        let (b, _) = train_surrogate(&ds, &cfg).unwrap();
        assert_eq!(a.params(), b.params());
    }
}
