//! Command implementations over the core crate.

use crate::config::*;
use anyhow::{bail, Context, Result};
use shocknet_core::datasets::{
    build_2cgnn_set, build_2dcnn_set, BuildConfig, Dataset, InputFormat, PerturbationFamily,
    TimeSelection,
};
use shocknet_core::exact::{reference_solution, EulerWaves};
use shocknet_core::npinn::{train_npinn, train_npinn_resume, NpinnConfig};
use shocknet_core::schemes::{run_scheme, GasModel, Problem};
use shocknet_core::smallnet::Mlp;
use shocknet_core::surrogate::{
    evaluate_suite, predict_case, train_surrogate, train_surrogate_resume, SurrogateConfig,
};
use shocknet_core::{derive_seed, CoreError};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

fn out_path(out_dir: &str, name: &str) -> Result<PathBuf> {
    fs::create_dir_all(out_dir)
        .with_context(|| format!("cannot create output directory '{out_dir}'"))?;
    Ok(Path::new(out_dir).join(name))
}

fn check_input_path(path: &str) -> Result<()> {
    if !Path::new(path).is_file() {
        bail!(config_error(format!("input file '{path}' does not exist")));
    }
    Ok(())
}

/// Wraps a message so main() can map it to the config-error exit code.
pub fn config_error(msg: impl Into<String>) -> CoreError {
    CoreError::Config(msg.into())
}

pub fn cmd_simulate(cfg: &SimulateConfig, seed: u64, out_dir: &str) -> Result<()> {
    let _ = seed;
    let gas = GasModel::default();
    let problem = parse_problem(&cfg.problem, &gas)?;
    let grid = problem.grid(cfg.n_cells)?;
    let sol = if cfg.scheme == "exact" {
        match &problem {
            Problem::Riemann(ic) => reference_solution(ic, &grid, cfg.t_target, &gas)?,
            Problem::Burgers(_) => bail!(config_error(
                "exact Burgers export is not a space-time run; use a scheme instead"
            )),
        }
    } else {
        let scheme = parse_scheme(&cfg.scheme)?;
        run_scheme(&problem, &grid, scheme, cfg.t_target, cfg.cfl, &policy(cfg.speed_margin), &gas)?
    };
    let name = cfg.out_file.clone().unwrap_or_else(|| {
        format!("{}_{}_{}.sol.txt", cfg.problem, cfg.scheme, cfg.n_cells)
    });
    let path = out_path(out_dir, &name)?;
    let mut file = fs::File::create(&path)?;
    sol.write_text(&mut file)?;
    println!(
        "wrote {} ({} levels x {} cells, dt {:.6e}, t_final {:.6})",
        path.display(),
        sol.n_levels(),
        sol.grid().n_cells(),
        sol.dt(),
        sol.t_final()
    );
    Ok(())
}

pub fn cmd_gendata(cfg: &GendataConfig, seed: u64, out_dir: &str) -> Result<()> {
    let gas = GasModel::default();
    let base = parse_riemann(&cfg.problem, &gas)?;
    let format = parse_format(&cfg.format)?;
    let epsilons = cfg.epsilons.clone().unwrap_or_else(default_train_epsilons);
    let family = PerturbationFamily { base, epsilons };
    let time_selection = if cfg.time_stride <= 1 {
        TimeSelection::All
    } else {
        TimeSelection::Stride(cfg.time_stride)
    };
    let mut bcfg = BuildConfig::new(format, parse_scheme(&cfg.scheme)?, cfg.cells);
    bcfg.t_target = cfg.t_target;
    bcfg.cfl = cfg.cfl;
    bcfg.policy = policy(cfg.speed_margin);
    bcfg.time_selection = time_selection;
    bcfg.seed = derive_seed(seed, "gendata");

    let ds = if format == InputFormat::TwoDiffusion8 {
        let c = cfg.diffusion_factor.ok_or_else(|| {
            config_error("two-diffusion data needs 'diffusion_factor'")
        })?;
        build_2dcnn_set(&family, c, cfg.cells, &bcfg, &gas)?
    } else {
        build_2cgnn_set(&family, &bcfg, &gas)?
    };
    let name = cfg
        .out_file
        .clone()
        .unwrap_or_else(|| format!("{}_{}_{}.ds.txt", cfg.problem, cfg.format, cfg.cells));
    let path = out_path(out_dir, &name)?;
    let mut file = fs::File::create(&path)?;
    ds.write_text(&mut file)?;
    println!("wrote {} ({} samples)", path.display(), ds.len());
    Ok(())
}

fn load_dataset(path: &str) -> Result<Dataset> {
    check_input_path(path)?;
    let file = fs::File::open(path)?;
    Ok(Dataset::read_text(std::io::BufReader::new(file))?)
}

fn load_checkpoint(path: &str) -> Result<Mlp> {
    check_input_path(path)?;
    Ok(Mlp::load_checkpoint(&fs::read(path)?)?)
}

fn write_history(path: &Path, history: &[f64]) -> Result<()> {
    let mut file = fs::File::create(path)?;
    writeln!(file, "iter,loss")?;
    for (i, l) in history.iter().enumerate() {
        writeln!(file, "{},{:.16e}", i + 1, l)?;
    }
    Ok(())
}

pub fn cmd_train(cfg: &TrainConfig, seed: u64, out_dir: &str) -> Result<()> {
    let gas = GasModel::default();
    match cfg.target.as_str() {
        "surrogate" => {
            let ds_path = cfg
                .dataset
                .as_ref()
                .ok_or_else(|| config_error("surrogate training needs 'dataset'"))?;
            let ds = load_dataset(ds_path)?;
            let scheme = parse_scheme(&ds.provenance.scheme)?;
            let mut scfg = if ds.format == InputFormat::TwoDiffusion8 {
                SurrogateConfig::two_diffusion(ds.provenance.diffusion_factor)
            } else {
                SurrogateConfig::two_grid(ds.format, scheme)
            };
            scfg.cells = ds.provenance.coarse_cells;
            scfg.t_target = ds.provenance.t_target;
            scfg.seed = seed;
            if let Some(v) = cfg.hidden_layers {
                scfg.hidden_layers = v;
            }
            if let Some(v) = cfg.hidden_width {
                scfg.hidden_width = v;
            }
            if let Some(v) = cfg.adam_steps {
                scfg.adam_steps = v;
            }
            if let Some(v) = cfg.adam_batch {
                scfg.adam_batch = v;
            }
            if let Some(v) = cfg.lbfgs_iters {
                scfg.lbfgs_iters = v;
            }
            let (net, report) = match &cfg.resume {
                Some(path) => train_surrogate_resume(&ds, &scfg, load_checkpoint(path)?)?,
                None => train_surrogate(&ds, &scfg)?,
            };
            let ckpt_name = cfg.checkpoint.clone().unwrap_or_else(|| "surrogate.ckpt".into());
            let path = out_path(out_dir, &ckpt_name)?;
            fs::write(&path, net.save_checkpoint())?;
            write_history(&out_path(out_dir, &format!("{ckpt_name}.loss.csv"))?, &report.history)?;
            println!(
                "trained surrogate: best loss {:.6e} after {} iters ({:?}); checkpoint {}",
                report.best_loss,
                report.iters,
                report.stop,
                path.display()
            );
            Ok(())
        }
        "npinn" => {
            let problem = cfg
                .problem
                .as_ref()
                .ok_or_else(|| config_error("npinn training needs 'problem'"))?;
            let scheme =
                parse_residual_scheme(cfg.scheme.as_deref().unwrap_or("rusanov"))?;
            let mut ncfg = match problem.as_str() {
                "burgers" => NpinnConfig::burgers(),
                "lax" => NpinnConfig::lax(scheme, &gas),
                "sod" => NpinnConfig::sod(scheme),
                other => bail!(config_error(format!("unknown npinn problem '{other}'"))),
            };
            ncfg.scheme = scheme;
            ncfg.seed = seed;
            if let Some(v) = cfg.n_cells {
                ncfg.n_cells = v;
            }
            if let Some(v) = cfg.t_target {
                ncfg.t_target = v;
            }
            if let Some(v) = cfg.hidden_layers {
                ncfg.hidden_layers = v;
            }
            if let Some(v) = cfg.hidden_width {
                ncfg.hidden_width = v;
            }
            if let Some(v) = cfg.adam_steps {
                ncfg.adam_steps = v;
            }
            if let Some(v) = cfg.lbfgs_iters {
                ncfg.lbfgs_iters = v;
            }
            if let Some(count) = cfg.additional_count {
                if count > 0 {
                    ncfg = ncfg.with_additional_data(count);
                }
            }
            if let Some(w) = cfg.weights {
                ncfg.weights = shocknet_core::npinn::LossWeights {
                    ic: w[0],
                    bc: w[1],
                    res: w[2],
                    data: w[3],
                };
            }
            let (net, report) = match &cfg.resume {
                Some(path) => train_npinn_resume(&ncfg, &gas, load_checkpoint(path)?)?,
                None => train_npinn(&ncfg, &gas)?,
            };
            let ckpt_name = cfg.checkpoint.clone().unwrap_or_else(|| "npinn.ckpt".into());
            let path = out_path(out_dir, &ckpt_name)?;
            fs::write(&path, net.save_checkpoint())?;
            write_history(
                &out_path(out_dir, &format!("{ckpt_name}.loss.csv"))?,
                &report.minimize.history,
            )?;
            for (t, per_var, combined) in &report.eval {
                println!(
                    "t = {t:.6}: rel l2 per variable {:?}, combined {combined:.4e}",
                    per_var.iter().map(|v| format!("{v:.4e}")).collect::<Vec<_>>()
                );
            }
            println!(
                "trained npinn: best loss {:.6e} after {} iters; checkpoint {}",
                report.minimize.best_loss,
                report.minimize.iters,
                path.display()
            );
            Ok(())
        }
        other => bail!(config_error(format!("unknown train target '{other}'"))),
    }
}

fn surrogate_eval_config(
    format: InputFormat,
    scheme_name: &str,
    cells: usize,
    t_target: f64,
    cfl: f64,
    speed_margin: f64,
    diffusion_factor: Option<f64>,
) -> Result<SurrogateConfig> {
    let mut scfg = if format == InputFormat::TwoDiffusion8 {
        let c = diffusion_factor
            .ok_or_else(|| config_error("two-diffusion evaluation needs 'diffusion_factor'"))?;
        SurrogateConfig::two_diffusion(c)
    } else {
        SurrogateConfig::two_grid(format, parse_scheme(scheme_name)?)
    };
    scfg.cells = cells;
    scfg.t_target = t_target;
    scfg.cfl = cfl;
    scfg.policy = policy(speed_margin);
    Ok(scfg)
}

pub fn cmd_evaluate(cfg: &EvaluateConfig, _seed: u64, out_dir: &str) -> Result<()> {
    let gas = GasModel::default();
    let net = load_checkpoint(&cfg.checkpoint)?;
    let base = parse_riemann(&cfg.problem, &gas)?;
    let format = parse_format(&cfg.format)?;
    let scfg = surrogate_eval_config(
        format,
        &cfg.scheme,
        cfg.cells,
        cfg.t_target,
        cfg.cfl,
        cfg.speed_margin,
        cfg.diffusion_factor,
    )?;
    let cases = cfg.epsilons.clone().unwrap_or_else(default_eval_epsilons);
    let report = evaluate_suite(&net, &scfg, &base, &cases, &gas)?;
    let name = cfg
        .out_csv
        .clone()
        .unwrap_or_else(|| format!("{}_{}_eval.csv", cfg.problem, cfg.format));
    let path = out_path(out_dir, &name)?;
    let mut file = fs::File::create(&path)?;
    report.write_csv(&mut file)?;
    print!("{}", report.table_string());
    println!("wrote {}", path.display());
    Ok(())
}

pub fn cmd_export_plot(cfg: &ExportPlotConfig, _seed: u64, out_dir: &str) -> Result<()> {
    let gas = GasModel::default();
    let net = load_checkpoint(&cfg.checkpoint)?;
    let base = parse_riemann(&cfg.problem, &gas)?;
    let format = parse_format(&cfg.format)?;
    let scfg = surrogate_eval_config(
        format,
        &cfg.scheme,
        cfg.cells,
        cfg.t_target,
        cfg.cfl,
        cfg.speed_margin,
        cfg.diffusion_factor,
    )?;
    let ic = shocknet_core::datasets::perturb_ic(&base, cfg.eps)?;
    let pred = predict_case(&net, &ic, &scfg, &gas)?;
    let waves = EulerWaves::solve(&ic, &gas)?;
    let problem = Problem::Riemann(ic);
    let grid = problem.grid(cfg.cells)?;

    let name = cfg
        .out_csv
        .clone()
        .unwrap_or_else(|| format!("{}_{}_plot.csv", cfg.problem, cfg.format));
    let path = out_path(out_dir, &name)?;
    let mut file = fs::File::create(&path)?;
    writeln!(file, "x,value,series,variable,case")?;
    let case = if cfg.eps == 0.0 {
        "original".to_string()
    } else {
        format!("{:+.0}%", cfg.eps * 100.0)
    };
    let vars = ["rho", "v", "p"];
    let last = pred.input_solution.n_levels() - 1;
    for (k, var) in vars.iter().enumerate() {
        for i in 0..cfg.cells {
            let x = grid.point(i);
            writeln!(file, "{x:.8},{:.8e},prediction,{var},{case}", pred.field[[i, k]])?;
        }
        for i in 0..cfg.cells {
            let x = grid.point(i);
            let s = pred.input_solution.prim(last, i);
            let v = [s.rho, s.v, s.p][k];
            writeln!(file, "{x:.8},{v:.8e},input,{var},{case}")?;
        }
        for i in 0..cfg.cells {
            let x = grid.point(i);
            let s = waves.sample(x, pred.t_final)?;
            let v = [s.rho, s.v, s.p][k];
            writeln!(file, "{x:.8},{v:.8e},exact,{var},{case}")?;
        }
    }
    println!(
        "wrote {} ({} rows: 3 series x {} cells x 3 variables)",
        path.display(),
        3 * 3 * cfg.cells,
        cfg.cells
    );
    Ok(())
}
