//! The network: tanh hidden layers, linear output, explicit backprop.

use crate::error::{CoreError, Result};
use ndarray::{s, Array1, Array2, ArrayView2, Axis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Rows per work chunk for batched forward/backward. Large enough to keep
/// the matrix kernels efficient, small enough to bound per-thread memory.
const CHUNK: usize = 1024;

/// Dense feedforward network. `dims = [d_in, h_1, .., h_L, d_out]`;
/// hidden activations are tanh, the output layer is linear.
#[derive(Debug, Clone)]
pub struct Mlp {
    dims: Vec<usize>,
    /// Per layer, shape (in, out).
    weights: Vec<Array2<f64>>,
    biases: Vec<Array1<f64>>,
}

impl Mlp {
    /// Xavier/Glorot-uniform weights, zero biases, deterministic in `seed`.
    pub fn init(dims: &[usize], seed: u64) -> Result<Self> {
        if dims.len() < 2 {
            return Err(CoreError::usage("need at least input and output dims"));
        }
        if dims.iter().any(|&d| d == 0) {
            return Err(CoreError::usage(format!("zero-size layer in {dims:?}")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut weights = Vec::with_capacity(dims.len() - 1);
        let mut biases = Vec::with_capacity(dims.len() - 1);
        for w in dims.windows(2) {
            let (fan_in, fan_out) = (w[0], w[1]);
            let bound = (6.0 / (fan_in + fan_out) as f64).sqrt();
            let weight =
                Array2::from_shape_fn((fan_in, fan_out), |_| rng.gen_range(-bound..=bound));
            weights.push(weight);
            biases.push(Array1::zeros(fan_out));
        }
        Ok(Mlp { dims: dims.to_vec(), weights, biases })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn input_dim(&self) -> usize {
        self.dims[0]
    }

    pub fn output_dim(&self) -> usize {
        *self.dims.last().unwrap()
    }

    pub fn n_layers(&self) -> usize {
        self.weights.len()
    }

    pub fn n_params(&self) -> usize {
        self.dims.windows(2).map(|w| w[0] * w[1] + w[1]).sum()
    }

    /// Flattened parameters: per layer, the weight matrix row-major, then
    /// the bias vector.
    pub fn params(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n_params());
        for (w, b) in self.weights.iter().zip(&self.biases) {
            out.extend(w.iter());
            out.extend(b.iter());
        }
        out
    }

    pub fn set_params(&mut self, flat: &[f64]) -> Result<()> {
        if flat.len() != self.n_params() {
            return Err(CoreError::usage(format!(
                "parameter vector has {} entries, network needs {}",
                flat.len(),
                self.n_params()
            )));
        }
        let mut pos = 0;
        for (w, b) in self.weights.iter_mut().zip(&mut self.biases) {
            for v in w.iter_mut() {
                *v = flat[pos];
                pos += 1;
            }
            for v in b.iter_mut() {
                *v = flat[pos];
                pos += 1;
            }
        }
        Ok(())
    }

    pub(crate) fn raw_parts(&self) -> (&[usize], &[Array2<f64>], &[Array1<f64>]) {
        (&self.dims, &self.weights, &self.biases)
    }

    pub(crate) fn from_raw(dims: Vec<usize>, weights: Vec<Array2<f64>>, biases: Vec<Array1<f64>>) -> Self {
        Mlp { dims, weights, biases }
    }

    fn forward_chunk(&self, x: ArrayView2<'_, f64>) -> Array2<f64> {
        let last = self.n_layers() - 1;
        let mut a = x.to_owned();
        for (l, (w, b)) in self.weights.iter().zip(&self.biases).enumerate() {
            let mut z = a.dot(w);
            z += b;
            if l < last {
                z.mapv_inplace(f64::tanh);
            }
            a = z;
        }
        a
    }

    /// Forward pass over a whole batch (rows are samples).
    pub fn forward(&self, x: ArrayView2<'_, f64>) -> Result<Array2<f64>> {
        if x.ncols() != self.input_dim() {
            return Err(CoreError::usage(format!(
                "input width {} does not match dims[0] = {}",
                x.ncols(),
                self.input_dim()
            )));
        }
        let n = x.nrows();
        let mut out = Array2::zeros((n, self.output_dim()));
        let chunks: Vec<Array2<f64>> = (0..n)
            .step_by(CHUNK)
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|start| {
                let stop = (start + CHUNK).min(n);
                self.forward_chunk(x.slice(s![start..stop, ..]))
            })
            .collect();
        for (k, chunk) in chunks.into_iter().enumerate() {
            let start = k * CHUNK;
            out.slice_mut(s![start..start + chunk.nrows(), ..]).assign(&chunk);
        }
        Ok(out)
    }

    /// Backprop of `d_out` (dLoss/dOutputs) through the network for one
    /// chunk; returns the flat parameter gradient contribution.
    fn backward_chunk(&self, x: ArrayView2<'_, f64>, d_out: ArrayView2<'_, f64>) -> Vec<f64> {
        let last = self.n_layers() - 1;
        // Re-run the forward pass caching activations; trading the extra
        // pass for not holding whole-batch activations.
        let mut acts: Vec<Array2<f64>> = Vec::with_capacity(self.n_layers());
        {
            let mut a = x.to_owned();
            for (l, (w, b)) in self.weights.iter().zip(&self.biases).enumerate() {
                let mut z = a.dot(w);
                z += b;
                if l < last {
                    z.mapv_inplace(f64::tanh);
                }
                acts.push(z.clone());
                a = z;
            }
        }
        let mut grads_w: Vec<Array2<f64>> = Vec::with_capacity(self.n_layers());
        let mut grads_b: Vec<Array1<f64>> = Vec::with_capacity(self.n_layers());
        let mut delta = d_out.to_owned();
        for l in (0..self.n_layers()).rev() {
            // delta is dLoss/dz_l here (output layer linear; hidden tanh
            // already folded in by the time we reach layer l).
            let a_prev = if l == 0 { x.view() } else { acts[l - 1].view() };
            grads_w.push(a_prev.t().dot(&delta));
            grads_b.push(delta.sum_axis(Axis(0)));
            if l > 0 {
                let mut d_prev = delta.dot(&self.weights[l].t());
                // tanh'(z) = 1 - a^2 on the stored activation.
                d_prev.zip_mut_with(&acts[l - 1], |d, a| *d *= 1.0 - a * a);
                delta = d_prev;
            }
        }
        grads_w.reverse();
        grads_b.reverse();
        let mut flat = Vec::with_capacity(self.n_params());
        for (w, b) in grads_w.iter().zip(&grads_b) {
            flat.extend(w.iter());
            flat.extend(b.iter());
        }
        flat
    }

    /// Loss value and flat parameter gradient for a batch under `loss`.
    ///
    /// The loss may couple rows arbitrarily (scheme residuals do): the full
    /// output matrix is produced first, the loss maps it to a scalar plus
    /// dLoss/dOutputs, and that is pulled back through the network. Chunk
    /// gradients are reduced in index order, keeping the result independent
    /// of thread scheduling.
    pub fn value_and_grad(&self, x: ArrayView2<'_, f64>, loss: &dyn BatchLoss) -> Result<(f64, Vec<f64>)> {
        let outputs = self.forward(x)?;
        let (value, d_out) = loss.eval(&outputs);
        if !value.is_finite() {
            return Err(CoreError::numerical(format!("non-finite loss {value}")));
        }
        let n = x.nrows();
        let parts: Vec<Vec<f64>> = (0..n)
            .step_by(CHUNK)
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|start| {
                let stop = (start + CHUNK).min(n);
                self.backward_chunk(x.slice(s![start..stop, ..]), d_out.slice(s![start..stop, ..]))
            })
            .collect();
        let mut grad = vec![0.0; self.n_params()];
        for part in parts {
            for (g, p) in grad.iter_mut().zip(part) {
                *g += p;
            }
        }
        Ok((value, grad))
    }
}

/// A batch loss: scalar value plus its gradient with respect to the network
/// outputs. Implementations may couple output rows (stencil residuals do).
pub trait BatchLoss: Sync {
    fn eval(&self, outputs: &Array2<f64>) -> (f64, Array2<f64>);
}

/// Plain sum-of-squares against fixed targets:
/// `sum_k ||out_k - target_k||^2`, optionally divided by the row count.
pub struct MseLoss {
    pub targets: Array2<f64>,
    pub mean: bool,
}

impl BatchLoss for MseLoss {
    fn eval(&self, outputs: &Array2<f64>) -> (f64, Array2<f64>) {
        let diff = outputs - &self.targets;
        let scale = if self.mean { 1.0 / self.targets.nrows() as f64 } else { 1.0 };
        let value = scale * diff.iter().map(|d| d * d).sum::<f64>();
        (value, diff * (2.0 * scale))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use ndarray::array;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn parameter_counts_match_architecture_arithmetic() {
        // 10 hidden layers of 40 on 2 -> 1.
        let mut dims = vec![2];
        dims.extend(std::iter::repeat(40).take(10));
        dims.push(1);
        let net = Mlp::init(&dims, 0).unwrap();
        assert_eq!(net.n_params(), 14_921);
        assert_eq!(net.params().len(), 14_921);

        // 8 hidden layers of 300 on 24 -> 3:
        // 25*300 + 7*301*300 + 301*3 = 640,503.
        let mut dims = vec![24];
        dims.extend(std::iter::repeat(300).take(8));
        dims.push(3);
        let net = Mlp::init(&dims, 0).unwrap();
        assert_eq!(net.n_params(), 640_503);
    }

    #[test]
    fn same_seed_is_bit_identical() {
        let a = Mlp::init(&[3, 16, 16, 2], 1234).unwrap();
        let b = Mlp::init(&[3, 16, 16, 2], 1234).unwrap();
        assert_eq!(a.params(), b.params());
        let c = Mlp::init(&[3, 16, 16, 2], 1235).unwrap();
        assert_ne!(a.params(), c.params());
    }

    #[test]
    fn zero_parameters_give_zero_output() {
        let mut net = Mlp::init(&[4, 8, 8, 2], 7).unwrap();
        net.set_params(&vec![0.0; net.n_params()]).unwrap();
        let x = Array2::from_shape_fn((5, 4), |(i, j)| (i + j) as f64);
        let y = net.forward(x.view()).unwrap();
        assert!(y.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn identity_linear_layer_passes_input_through() {
        let mut net = Mlp::init(&[3, 3], 0).unwrap();
        let mut params = vec![0.0; net.n_params()];
        // Weight (3,3) row-major identity, then zero bias.
        for i in 0..3 {
            params[i * 3 + i] = 1.0;
        }
        net.set_params(&params).unwrap();
        let x = array![[1.0, -2.0, 0.5], [0.0, 3.0, 4.0]];
        let y = net.forward(x.view()).unwrap();
        assert_eq!(y, x);
    }

    #[test]
    fn batch_forward_equals_concatenated_single_rows() {
        let net = Mlp::init(&[5, 33, 33, 2], 42).unwrap();
        let x = Array2::from_shape_fn((9, 5), |(i, j)| ((i * 5 + j) as f64).sin());
        let batch = net.forward(x.view()).unwrap();
        for i in 0..9 {
            let row = x.slice(s![i..i + 1, ..]);
            let single = net.forward(row).unwrap();
            assert_eq!(single.row(0), batch.row(i), "row {i} differs");
        }
    }

    #[test]
    fn input_width_mismatch_is_rejected() {
        let net = Mlp::init(&[4, 8, 1], 0).unwrap();
        let x = Array2::zeros((3, 5));
        assert!(net.forward(x.view()).is_err());
    }

    #[test]
    fn gradient_matches_closed_form_on_linear_net() {
        // Single linear layer, L = sum (x w + b - y)^2: dL/dw = 2 x^T (x w + b - y).
        let mut net = Mlp::init(&[2, 1], 3).unwrap();
        net.set_params(&[0.5, -0.25, 0.1]).unwrap();
        let x = array![[1.0, 2.0], [3.0, -1.0], [0.5, 0.0]];
        let targets = array![[0.3], [-0.2], [0.7]];
        let loss = MseLoss { targets: targets.clone(), mean: false };
        let (value, grad) = net.value_and_grad(x.view(), &loss).unwrap();
        let pred = x.dot(&array![[0.5], [-0.25]]) + 0.1;
        let resid = &pred - &targets;
        let expect_val: f64 = resid.iter().map(|r| r * r).sum();
        assert_relative_eq!(value, expect_val, max_relative = 1e-12);
        let expect_w = x.t().dot(&resid) * 2.0;
        assert_relative_eq!(grad[0], expect_w[[0, 0]], max_relative = 1e-12);
        assert_relative_eq!(grad[1], expect_w[[1, 0]], max_relative = 1e-12);
        assert_relative_eq!(grad[2], 2.0 * resid.sum(), max_relative = 1e-12);
    }

    #[test]
    fn gradient_matches_central_differences() {
        let net = Mlp::init(&[3, 20, 20, 2], 11).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x = Array2::from_shape_fn((40, 3), |_| rng.gen_range(-1.0..1.0));
        let targets = Array2::from_shape_fn((40, 2), |_| rng.gen_range(-1.0..1.0));
        let loss = MseLoss { targets, mean: true };
        let (_, grad) = net.value_and_grad(x.view(), &loss).unwrap();
        let base = net.params();
        let h = 1e-5;
        for _ in 0..50 {
            let k = rng.gen_range(0..base.len());
            let mut plus = base.clone();
            let mut minus = base.clone();
            plus[k] += h;
            minus[k] -= h;
            let mut np = net.clone();
            np.set_params(&plus).unwrap();
            let mut nm = net.clone();
            nm.set_params(&minus).unwrap();
            let fp = loss_value(&np, &x, &loss);
            let fm = loss_value(&nm, &x, &loss);
            let fd = (fp - fm) / (2.0 * h);
            let denom = fd.abs().max(grad[k].abs()).max(1e-8);
            assert!(
                (grad[k] - fd).abs() / denom < 1e-5,
                "param {k}: backprop {} vs fd {}",
                grad[k],
                fd
            );
        }
    }

    fn loss_value(net: &Mlp, x: &Array2<f64>, loss: &MseLoss) -> f64 {
        let out = net.forward(x.view()).unwrap();
        loss.eval(&out).0
    }

    #[test]
    fn dead_input_column_has_zero_gradient() {
        // Zero out column 1 of the inputs; every first-layer weight fed by it
        // must receive exactly zero gradient.
        let net = Mlp::init(&[2, 6, 1], 9).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut x = Array2::from_shape_fn((10, 2), |_| rng.gen_range(-1.0..1.0));
        x.column_mut(1).fill(0.0);
        let targets = Array2::from_shape_fn((10, 1), |_| rng.gen_range(-1.0..1.0));
        let (_, grad) = net
            .value_and_grad(x.view(), &MseLoss { targets, mean: false })
            .unwrap();
        // Row-major (2,6) weight: row 1 holds the weights from input 1.
        for j in 0..6 {
            assert_eq!(grad[6 + j], 0.0);
        }
    }

    #[test]
    fn duplicated_batch_keeps_mean_loss() {
        let net = Mlp::init(&[2, 8, 1], 21).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let x = Array2::from_shape_fn((6, 2), |_| rng.gen_range(-1.0..1.0));
        let t = Array2::from_shape_fn((6, 1), |_| rng.gen_range(-1.0..1.0));
        let mut x2 = Array2::zeros((12, 2));
        x2.slice_mut(s![..6, ..]).assign(&x);
        x2.slice_mut(s![6.., ..]).assign(&x);
        let mut t2 = Array2::zeros((12, 1));
        t2.slice_mut(s![..6, ..]).assign(&t);
        t2.slice_mut(s![6.., ..]).assign(&t);
        let (a, _) = net.value_and_grad(x.view(), &MseLoss { targets: t, mean: true }).unwrap();
        let (b, _) = net.value_and_grad(x2.view(), &MseLoss { targets: t2, mean: true }).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-12);
    }
}
