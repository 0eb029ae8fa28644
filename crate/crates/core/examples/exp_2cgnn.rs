use shocknet_core::datasets::{build_2cgnn_set, BuildConfig, InputFormat, PerturbationFamily, TimeSelection, EVAL_EPSILONS};
use shocknet_core::exact::RiemannIC;
use shocknet_core::schemes::{GasModel, SchemeKind};
use shocknet_core::surrogate::{evaluate_suite, train_surrogate, SurrogateConfig};
use std::time::Instant;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let layers: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(6);
    let width: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(128);
    let adam: usize = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(3000);
    let lbfgs: usize = args.get(4).and_then(|s| s.parse().ok()).unwrap_or(1500);
    let problem = args.get(5).map(|s| s.as_str()).unwrap_or("lax");
    let stride: usize = args.get(6).and_then(|s| s.parse().ok()).unwrap_or(1);

    let gas = GasModel::default();
    let base = if problem == "lax" { RiemannIC::lax(&gas) } else { RiemannIC::sod() };
    let family = PerturbationFamily::training(base);

    let t0 = Instant::now();
    let mut bcfg = BuildConfig::new(InputFormat::Standard8, SchemeKind::Rusanov, 50);
    bcfg.time_selection = if stride == 1 { TimeSelection::All } else { TimeSelection::Stride(stride) };
    let ds = build_2cgnn_set(&family, &bcfg, &gas).unwrap();
    println!("dataset: {} samples in {:.1}s", ds.len(), t0.elapsed().as_secs_f64());

    let mut cfg = SurrogateConfig::two_grid(InputFormat::Standard8, SchemeKind::Rusanov);
    cfg.hidden_layers = layers;
    cfg.hidden_width = width;
    cfg.adam_steps = adam;
    cfg.lbfgs_iters = lbfgs;
    let t0 = Instant::now();
    let (net, report) = train_surrogate(&ds, &cfg).unwrap();
    let train_time = t0.elapsed().as_secs_f64();
    let per_sample = report.best_loss / (ds.len() as f64 * 3.0);
    println!(
        "trained {layers}x{width}: loss {:.4e} (per-component mse {:.3e}, rms {:.3e}) in {:.0}s, {} iters, stop {:?}",
        report.best_loss, per_sample, per_sample.sqrt(), train_time, report.iters, report.stop
    );

    let eval = evaluate_suite(&net, &cfg, &base, &EVAL_EPSILONS, &gas).unwrap();
    println!("{}", eval.table_string());
}
