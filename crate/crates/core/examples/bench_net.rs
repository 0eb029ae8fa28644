use ndarray::Array2;
use shocknet_core::smallnet::{Mlp, MseLoss};
use std::time::Instant;

fn main() {
    for (dims, n) in [
        (vec![24, 300, 300, 300, 300, 300, 300, 300, 300, 3], 16800usize),
        (vec![24, 96, 96, 96, 96, 3], 34080),
        (vec![2, 180, 180, 180, 180, 180, 180, 3], 14688),
        (vec![2, 40, 40, 40, 40, 40, 40, 40, 40, 40, 40, 1], 72960),
    ] {
        let net = Mlp::init(&dims, 0).unwrap();
        let x = Array2::from_shape_fn((n, dims[0]), |(i, j)| ((i * 7 + j) as f64 * 0.001).sin());
        let t = Array2::from_shape_fn((n, *dims.last().unwrap()), |(i, _)| (i as f64 * 0.01).cos());
        let loss = MseLoss { targets: t, mean: false };
        let t0 = Instant::now();
        let mut iters = 0;
        while t0.elapsed().as_secs_f64() < 3.0 {
            let _ = net.value_and_grad(x.view(), &loss).unwrap();
            iters += 1;
        }
        let per = t0.elapsed().as_secs_f64() / iters as f64;
        println!("{dims:?} n={n}: {:.3} s/eval ({} evals)", per, iters);
    }
}
