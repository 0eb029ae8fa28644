//! Table evaluation against the exact reference, and the shock-sharpness
//! measure.

use super::predict::predict_case;
use super::train::SurrogateConfig;
use crate::datasets::perturb_ic;
use crate::error::Result;
use crate::exact::{EulerWaves, RiemannIC};
use crate::schemes::{GasModel, Problem};
use crate::smallnet::Mlp;
use std::io::Write;

/// One evaluated case.
#[derive(Debug, Clone)]
pub struct CaseResult {
    pub eps: f64,
    /// Relative l2 over the concatenated (rho, v, p) interior values.
    pub rel_l2_combined: f64,
    /// Per-variable relative l2 (rho, v, p).
    pub rel_l2: [f64; 3],
    pub t_final: f64,
}

/// Per-case errors of one trained surrogate.
#[derive(Debug, Clone)]
pub struct EvalReport {
    pub scheme: String,
    pub format: String,
    pub cells: usize,
    pub cases: Vec<CaseResult>,
}

impl EvalReport {
    pub fn write_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "case,eps,rel_l2_combined,rel_l2_rho,rel_l2_v,rel_l2_p,t_final")?;
        for c in &self.cases {
            writeln!(
                out,
                "{},{:.6},{:.6e},{:.6e},{:.6e},{:.6e},{:.6}",
                case_name(c.eps),
                c.eps,
                c.rel_l2_combined,
                c.rel_l2[0],
                c.rel_l2[1],
                c.rel_l2[2],
                c.t_final
            )?;
        }
        Ok(())
    }

    /// Human-readable table mirroring the result tables' layout.
    pub fn table_string(&self) -> String {
        let mut s = format!(
            "Relative l2 errors ({} inputs, {} scheme, {} cells)\n",
            self.format, self.scheme, self.cells
        );
        s.push_str("  Initial Value   Relative l2 Error\n");
        for c in &self.cases {
            s.push_str(&format!("  {:<14}  {:.2e}\n", case_name(c.eps), c.rel_l2_combined));
        }
        s
    }
}

fn case_name(eps: f64) -> String {
    if eps == 0.0 {
        "Original".to_string()
    } else {
        format!("{:+.0}%", eps * 100.0)
    }
}

/// Evaluates a trained surrogate over perturbation cases of a base problem.
///
/// Errors are relative l2 norms over the interior cells (one boundary cell
/// excluded per side) at the achieved final time, against the exact
/// solution sampled at exactly that time.
pub fn evaluate_suite(
    net: &Mlp,
    cfg: &SurrogateConfig,
    base: &RiemannIC,
    cases: &[f64],
    gas: &GasModel,
) -> Result<EvalReport> {
    let mut results = Vec::with_capacity(cases.len());
    for &eps in cases {
        let ic = perturb_ic(base, eps)?;
        let pred = predict_case(net, &ic, cfg, gas)?;
        let problem = Problem::Riemann(ic);
        let grid = problem.grid(cfg.cells)?;
        let waves = EulerWaves::solve(&ic, gas)?;
        let n = cfg.cells;
        let mut num = [0.0_f64; 3];
        let mut den = [0.0_f64; 3];
        for i in 1..n - 1 {
            let exact = waves.sample(grid.point(i), pred.t_final)?;
            let ex = [exact.rho, exact.v, exact.p];
            for k in 0..3 {
                let d = pred.field[[i, k]] - ex[k];
                num[k] += d * d;
                den[k] += ex[k] * ex[k];
            }
        }
        let combined = ((num[0] + num[1] + num[2]) / (den[0] + den[1] + den[2])).sqrt();
        let per = [
            (num[0] / den[0]).sqrt(),
            (num[1] / den[1]).sqrt(),
            (num[2] / den[2]).sqrt(),
        ];
        results.push(CaseResult {
            eps,
            rel_l2_combined: combined,
            rel_l2: per,
            t_final: pred.t_final,
        });
    }
    Ok(EvalReport {
        scheme: cfg.scheme.name().to_string(),
        format: cfg.format.name().to_string(),
        cells: cfg.cells,
        cases: results,
    })
}

/// Number of cells strictly inside the density jump across a shock.
///
/// `plateau_left`/`plateau_right` are the exact values on either side of
/// the shock at `shock_x`; cells within `window` cells of the shock whose
/// density lies strictly between the plateaus (with a 5% margin off each
/// end of the jump) count toward the transition width.
pub fn shock_transition_width(
    xs: &[f64],
    density: &[f64],
    shock_x: f64,
    plateau_left: f64,
    plateau_right: f64,
    window: usize,
) -> usize {
    let lo = plateau_left.min(plateau_right);
    let hi = plateau_left.max(plateau_right);
    let jump = hi - lo;
    let (band_lo, band_hi) = (lo + 0.05 * jump, hi - 0.05 * jump);
    let dx = if xs.len() > 1 { xs[1] - xs[0] } else { 1.0 };
    xs.iter()
        .zip(density)
        .filter(|(x, d)| {
            (**x - shock_x).abs() <= window as f64 * dx && **d > band_lo && **d < band_hi
        })
        .count()
}
