//! Configuration file schema. Unknown keys are rejected so typos fail fast.

use serde::Deserialize;
use shocknet_core::datasets::{InputFormat, EVAL_EPSILONS, TRAIN_EPSILONS};
use shocknet_core::exact::{BurgersIC, RiemannIC};
use shocknet_core::npinn::ResidualScheme;
use shocknet_core::schemes::{AlphaPolicy, GasModel, Problem, SchemeKind};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_out_dir")]
    pub out_dir: String,
    pub simulate: Option<SimulateConfig>,
    pub gendata: Option<GendataConfig>,
    pub train: Option<TrainConfig>,
    pub evaluate: Option<EvaluateConfig>,
    #[serde(rename = "export-plot")]
    pub export_plot: Option<ExportPlotConfig>,
}

fn default_seed() -> u64 {
    0
}
fn default_out_dir() -> String {
    "out".to_string()
}
fn default_t_target() -> f64 {
    0.16
}
fn default_cfl() -> f64 {
    0.9
}
fn default_speed_margin() -> f64 {
    2.0
}
fn default_cells() -> usize {
    50
}
fn default_stride() -> usize {
    1
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    pub problem: String,
    /// A scheme name or "exact" for the reference oracle.
    pub scheme: String,
    #[serde(default = "default_cells")]
    pub n_cells: usize,
    #[serde(default = "default_t_target")]
    pub t_target: f64,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    #[serde(default = "default_speed_margin")]
    pub speed_margin: f64,
    pub out_file: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GendataConfig {
    pub problem: String,
    pub format: String,
    #[serde(default = "default_scheme_name")]
    pub scheme: String,
    #[serde(default = "default_cells")]
    pub cells: usize,
    #[serde(default = "default_t_target")]
    pub t_target: f64,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    #[serde(default = "default_speed_margin")]
    pub speed_margin: f64,
    /// Defaults to the training family (+-2/4/6/8/10%).
    pub epsilons: Option<Vec<f64>>,
    #[serde(default = "default_stride")]
    pub time_stride: usize,
    /// Required for two-diffusion data.
    pub diffusion_factor: Option<f64>,
    pub out_file: Option<String>,
}

fn default_scheme_name() -> String {
    "rusanov".to_string()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainConfig {
    /// "surrogate" or "npinn".
    pub target: String,
    // Surrogate:
    pub dataset: Option<String>,
    pub hidden_layers: Option<usize>,
    pub hidden_width: Option<usize>,
    #[serde(default)]
    pub adam_steps: Option<usize>,
    #[serde(default)]
    pub adam_batch: Option<usize>,
    #[serde(default)]
    pub lbfgs_iters: Option<usize>,
    // N-PINN:
    pub problem: Option<String>,
    pub scheme: Option<String>,
    pub n_cells: Option<usize>,
    pub t_target: Option<f64>,
    /// (ic, bc, residual, data) weights.
    pub weights: Option<[f64; 4]>,
    pub additional_count: Option<usize>,
    // Common:
    pub checkpoint: Option<String>,
    pub resume: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvaluateConfig {
    pub checkpoint: String,
    pub problem: String,
    pub format: String,
    #[serde(default = "default_scheme_name")]
    pub scheme: String,
    #[serde(default = "default_cells")]
    pub cells: usize,
    #[serde(default = "default_t_target")]
    pub t_target: f64,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    #[serde(default = "default_speed_margin")]
    pub speed_margin: f64,
    pub diffusion_factor: Option<f64>,
    /// Defaults to {0, +-3%, +-5%, +-7%}.
    pub epsilons: Option<Vec<f64>>,
    pub out_csv: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExportPlotConfig {
    pub checkpoint: String,
    pub problem: String,
    pub format: String,
    #[serde(default = "default_scheme_name")]
    pub scheme: String,
    #[serde(default = "default_cells")]
    pub cells: usize,
    #[serde(default = "default_t_target")]
    pub t_target: f64,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    #[serde(default = "default_speed_margin")]
    pub speed_margin: f64,
    pub diffusion_factor: Option<f64>,
    #[serde(default)]
    pub eps: f64,
    pub out_csv: Option<String>,
}

pub fn parse_problem(name: &str, gas: &GasModel) -> anyhow::Result<Problem> {
    match name {
        "sod" => Ok(Problem::Riemann(RiemannIC::sod())),
        "lax" => Ok(Problem::Riemann(RiemannIC::lax(gas))),
        "burgers" => Ok(Problem::Burgers(BurgersIC)),
        other => anyhow::bail!("unknown problem '{other}' (expected sod, lax, or burgers)"),
    }
}

pub fn parse_riemann(name: &str, gas: &GasModel) -> anyhow::Result<RiemannIC> {
    match parse_problem(name, gas)? {
        Problem::Riemann(ic) => Ok(ic),
        Problem::Burgers(_) => anyhow::bail!("'{name}' is not a Riemann problem"),
    }
}

pub fn parse_scheme(name: &str) -> anyhow::Result<SchemeKind> {
    Ok(SchemeKind::parse(name)?)
}

pub fn parse_format(name: &str) -> anyhow::Result<InputFormat> {
    Ok(InputFormat::parse(name)?)
}

pub fn parse_residual_scheme(name: &str) -> anyhow::Result<ResidualScheme> {
    Ok(ResidualScheme::parse(name)?)
}

pub fn policy(speed_margin: f64) -> AlphaPolicy {
    AlphaPolicy { speed_margin, frozen_flux: false }
}

pub fn default_train_epsilons() -> Vec<f64> {
    TRAIN_EPSILONS.to_vec()
}

pub fn default_eval_epsilons() -> Vec<f64> {
    EVAL_EPSILONS.to_vec()
}
