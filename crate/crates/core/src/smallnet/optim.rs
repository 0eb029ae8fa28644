//! Optimizers over flat parameter vectors: Adam and L-BFGS with a strong
//! Wolfe line search.

use super::mlp::{BatchLoss, Mlp};
use crate::error::{CoreError, Result};
use ndarray::ArrayView2;
use std::collections::VecDeque;

#[derive(Debug, Clone, Copy)]
pub struct AdamParams {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl Default for AdamParams {
    fn default() -> Self {
        AdamParams { lr: 1e-3, beta1: 0.9, beta2: 0.999, eps: 1e-8 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LbfgsParams {
    pub memory: usize,
    /// Armijo constant of the strong Wolfe conditions.
    pub c1: f64,
    /// Curvature constant.
    pub c2: f64,
    pub max_line_search: usize,
    pub tolerance_change: f64,
}

impl Default for LbfgsParams {
    fn default() -> Self {
        LbfgsParams { memory: 20, c1: 1e-4, c2: 0.9, max_line_search: 25, tolerance_change: 1e-9 }
    }
}

#[derive(Debug, Clone, Copy)]
pub enum OptKind {
    Adam(AdamParams),
    Lbfgs(LbfgsParams),
}

/// Optimizer configuration plus its running iteration counter.
#[derive(Debug, Clone)]
pub struct OptState {
    pub kind: OptKind,
    pub max_iters: usize,
    pub grad_tol: f64,
    pub seed: u64,
    pub iter: usize,
}

impl OptState {
    pub fn adam(max_iters: usize) -> Self {
        OptState { kind: OptKind::Adam(AdamParams::default()), max_iters, grad_tol: 1e-8, seed: 0, iter: 0 }
    }

    pub fn lbfgs(max_iters: usize) -> Self {
        OptState { kind: OptKind::Lbfgs(LbfgsParams::default()), max_iters, grad_tol: 1e-8, seed: 0, iter: 0 }
    }
}

impl Default for OptState {
    fn default() -> Self {
        OptState::lbfgs(50_000)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    MaxIters,
    GradientTolerance,
    LineSearchFailure,
    Diverged,
}

#[derive(Debug, Clone)]
pub struct MinimizeReport {
    /// Best-so-far loss per completed iteration (monotone non-increasing).
    pub history: Vec<f64>,
    pub best_loss: f64,
    pub stop: StopReason,
    pub iters: usize,
}

/// Standalone Adam stepper, usable for mini-batch loops.
#[derive(Debug, Clone)]
pub struct Adam {
    params: AdamParams,
    m: Vec<f64>,
    v: Vec<f64>,
    t: usize,
}

impl Adam {
    pub fn new(dim: usize, params: AdamParams) -> Self {
        Adam { params, m: vec![0.0; dim], v: vec![0.0; dim], t: 0 }
    }

    pub fn step(&mut self, x: &mut [f64], grad: &[f64]) {
        debug_assert_eq!(x.len(), grad.len());
        self.t += 1;
        let AdamParams { lr, beta1, beta2, eps } = self.params;
        let bc1 = 1.0 - beta1.powi(self.t as i32);
        let bc2 = 1.0 - beta2.powi(self.t as i32);
        for i in 0..x.len() {
            self.m[i] = beta1 * self.m[i] + (1.0 - beta1) * grad[i];
            self.v[i] = beta2 * self.v[i] + (1.0 - beta2) * grad[i] * grad[i];
            let mhat = self.m[i] / bc1;
            let vhat = self.v[i] / bc2;
            x[i] -= lr * mhat / (vhat.sqrt() + eps);
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// L-BFGS two-loop recursion: returns `H g` for the limited-memory inverse
/// Hessian approximation built from `(s, y, rho)` triples (oldest first)
/// with initial scaling `gamma I`.
pub fn two_loop_direction(history: &[(Vec<f64>, Vec<f64>, f64)], grad: &[f64], gamma: f64) -> Vec<f64> {
    let mut q = grad.to_vec();
    let mut alphas = vec![0.0; history.len()];
    for (k, (s, y, rho)) in history.iter().enumerate().rev() {
        let a = rho * dot(s, &q);
        alphas[k] = a;
        for (qi, yi) in q.iter_mut().zip(y) {
            *qi -= a * yi;
        }
    }
    for qi in q.iter_mut() {
        *qi *= gamma;
    }
    for (k, (s, y, rho)) in history.iter().enumerate() {
        let b = rho * dot(y, &q);
        let a = alphas[k];
        for (qi, si) in q.iter_mut().zip(s) {
            *qi += (a - b) * si;
        }
    }
    q
}

/// Minimum of the cubic through `(x1, f1, g1)` and `(x2, f2, g2)`,
/// clamped to `bounds`.
fn cubic_interpolate(x1: f64, f1: f64, g1: f64, x2: f64, f2: f64, g2: f64, bounds: Option<(f64, f64)>) -> f64 {
    let (lo, hi) = match bounds {
        Some(b) => b,
        None => {
            if x1 < x2 {
                (x1, x2)
            } else {
                (x2, x1)
            }
        }
    };
    let d1 = g1 + g2 - 3.0 * (f1 - f2) / (x1 - x2);
    let d2_sq = d1 * d1 - g1 * g2;
    if d2_sq >= 0.0 {
        let d2 = d2_sq.sqrt();
        let min_pos = if x1 <= x2 {
            x2 - (x2 - x1) * ((g2 + d2 - d1) / (g2 - g1 + 2.0 * d2))
        } else {
            x1 - (x1 - x2) * ((g1 + d2 - d1) / (g1 - g2 + 2.0 * d2))
        };
        min_pos.clamp(lo, hi)
    } else {
        0.5 * (lo + hi)
    }
}

struct WolfeResult {
    f: f64,
    g: Vec<f64>,
    t: f64,
    success: bool,
}

/// Strong Wolfe line search with cubic interpolation (bracket + zoom).
fn strong_wolfe(
    obj: &mut dyn FnMut(&[f64]) -> Result<(f64, Vec<f64>)>,
    x0: &[f64],
    mut t: f64,
    d: &[f64],
    f0: f64,
    g0: &[f64],
    p: &LbfgsParams,
) -> Result<WolfeResult> {
    let gtd0 = dot(g0, d);
    let d_norm_inf = d.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    let eval = |obj: &mut dyn FnMut(&[f64]) -> Result<(f64, Vec<f64>)>, t: f64| -> Result<(f64, Vec<f64>, f64)> {
        let x: Vec<f64> = x0.iter().zip(d).map(|(xi, di)| xi + t * di).collect();
        let (f, g) = obj(&x)?;
        let gtd = dot(&g, d);
        Ok((f, g, gtd))
    };

    let (mut f_new, mut g_new, mut gtd_new) = eval(obj, t)?;
    let mut ls_iter = 1usize;

    // Bracketing phase.
    let (mut t_prev, mut f_prev, mut g_prev, mut gtd_prev) = (0.0, f0, g0.to_vec(), gtd0);
    let mut bracket: [f64; 2];
    let mut bracket_f: [f64; 2];
    let mut bracket_g: [Vec<f64>; 2];
    let mut bracket_gtd: [f64; 2];
    let mut done = false;
    loop {
        if ls_iter > p.max_line_search {
            bracket = [0.0, t];
            bracket_f = [f0, f_new];
            bracket_g = [g0.to_vec(), g_new.clone()];
            bracket_gtd = [gtd0, gtd_new];
            break;
        }
        if f_new > f0 + p.c1 * t * gtd0 || (ls_iter > 1 && f_new >= f_prev) {
            bracket = [t_prev, t];
            bracket_f = [f_prev, f_new];
            bracket_g = [g_prev, g_new.clone()];
            bracket_gtd = [gtd_prev, gtd_new];
            break;
        }
        if gtd_new.abs() <= -p.c2 * gtd0 {
            bracket = [t, t];
            bracket_f = [f_new, f_new];
            bracket_g = [g_new.clone(), g_new.clone()];
            bracket_gtd = [gtd_new, gtd_new];
            done = true;
            break;
        }
        if gtd_new >= 0.0 {
            bracket = [t_prev, t];
            bracket_f = [f_prev, f_new];
            bracket_g = [g_prev, g_new.clone()];
            bracket_gtd = [gtd_prev, gtd_new];
            break;
        }
        let min_step = t + 0.01 * (t - t_prev);
        let max_step = t * 10.0;
        let tmp = t;
        t = cubic_interpolate(t_prev, f_prev, gtd_prev, t, f_new, gtd_new, Some((min_step, max_step)));
        t_prev = tmp;
        f_prev = f_new;
        g_prev = g_new.clone();
        gtd_prev = gtd_new;
        let r = eval(obj, t)?;
        f_new = r.0;
        g_new = r.1;
        gtd_new = r.2;
        ls_iter += 1;
    }

    // Zoom phase.
    let (mut low, mut high) = if bracket_f[0] <= bracket_f[1] { (0, 1) } else { (1, 0) };
    let mut insufficient_progress = false;
    while !done && ls_iter <= p.max_line_search {
        if (bracket[1] - bracket[0]).abs() * d_norm_inf < p.tolerance_change {
            break;
        }
        t = cubic_interpolate(
            bracket[0], bracket_f[0], bracket_gtd[0],
            bracket[1], bracket_f[1], bracket_gtd[1],
            None,
        );
        let width = bracket[0].max(bracket[1]) - bracket[0].min(bracket[1]);
        let eps = 0.1 * width;
        if bracket[0].max(bracket[1]) - t < eps || t - bracket[0].min(bracket[1]) < eps {
            if insufficient_progress || t >= bracket[0].max(bracket[1]) || t <= bracket[0].min(bracket[1]) {
                t = if (t - bracket[0].max(bracket[1])).abs() < (t - bracket[0].min(bracket[1])).abs() {
                    bracket[0].max(bracket[1]) - eps
                } else {
                    bracket[0].min(bracket[1]) + eps
                };
                insufficient_progress = false;
            } else {
                insufficient_progress = true;
            }
        } else {
            insufficient_progress = false;
        }

        let r = eval(obj, t)?;
        f_new = r.0;
        g_new = r.1;
        gtd_new = r.2;
        ls_iter += 1;

        if f_new > f0 + p.c1 * t * gtd0 || f_new >= bracket_f[low] {
            bracket[high] = t;
            bracket_f[high] = f_new;
            bracket_g[high] = g_new.clone();
            bracket_gtd[high] = gtd_new;
            (low, high) = if bracket_f[0] <= bracket_f[1] { (0, 1) } else { (1, 0) };
        } else {
            if gtd_new.abs() <= -p.c2 * gtd0 {
                done = true;
            } else if gtd_new * (bracket[high] - bracket[low]) >= 0.0 {
                bracket[high] = bracket[low];
                bracket_f[high] = bracket_f[low];
                bracket_g[high] = bracket_g[low].clone();
                bracket_gtd[high] = bracket_gtd[low];
            }
            bracket[low] = t;
            bracket_f[low] = f_new;
            bracket_g[low] = g_new.clone();
            bracket_gtd[low] = gtd_new;
        }
    }

    let t_final = bracket[low];
    let f_final = bracket_f[low];
    let g_final = std::mem::take(&mut bracket_g[low]);
    // Sufficient decrease at the accepted point decides success.
    let success = f_final <= f0 + p.c1 * t_final * dot(g0, d) && t_final > 0.0;
    Ok(WolfeResult { f: f_final, g: g_final, t: t_final, success })
}

/// Minimizes an arbitrary objective over a flat parameter vector.
///
/// The best parameters seen are restored into `params` on return, the loss
/// history records the best-so-far value per iteration, and divergence
/// (non-finite loss) aborts back to the last good point.
pub fn minimize_flat(
    params: &mut Vec<f64>,
    objective: &mut dyn FnMut(&[f64]) -> Result<(f64, Vec<f64>)>,
    opt: &mut OptState,
) -> Result<MinimizeReport> {
    let (mut f, mut g) = objective(params)?;
    if !f.is_finite() {
        return Err(CoreError::numerical("objective non-finite at the starting point"));
    }
    let mut best_f = f;
    let mut best_x = params.clone();
    let mut history = Vec::new();
    let mut stop = StopReason::MaxIters;

    if norm2(&g) < opt.grad_tol {
        return Ok(MinimizeReport { history, best_loss: best_f, stop: StopReason::GradientTolerance, iters: 0 });
    }

    match opt.kind {
        OptKind::Adam(ap) => {
            let mut adam = Adam::new(params.len(), ap);
            while opt.iter < opt.max_iters {
                adam.step(params, &g);
                let r = objective(params);
                let bad = match &r {
                    Ok((fv, _)) => !fv.is_finite(),
                    Err(_) => true,
                };
                if bad {
                    stop = StopReason::Diverged;
                    break;
                }
                let (fv, gv) = r.unwrap();
                f = fv;
                g = gv;
                opt.iter += 1;
                if f < best_f {
                    best_f = f;
                    best_x.copy_from_slice(params);
                }
                history.push(best_f);
                if norm2(&g) < opt.grad_tol {
                    stop = StopReason::GradientTolerance;
                    break;
                }
            }
        }
        OptKind::Lbfgs(lp) => {
            let mut mem: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::new();
            let mut gamma = 1.0;
            while opt.iter < opt.max_iters {
                let hist: Vec<(Vec<f64>, Vec<f64>, f64)> = mem.iter().cloned().collect();
                let mut d = two_loop_direction(&hist, &g, gamma);
                for di in d.iter_mut() {
                    *di = -*di;
                }
                let gtd = dot(&g, &d);
                if gtd >= 0.0 {
                    // Not a descent direction; reset to steepest descent.
                    mem.clear();
                    d = g.iter().map(|v| -v).collect();
                }
                let t0 = if mem.is_empty() {
                    (1.0_f64).min(1.0 / g.iter().map(|v| v.abs()).sum::<f64>().max(1e-16))
                } else {
                    1.0
                };
                let w = strong_wolfe(objective, params, t0, &d, f, &g, &lp)?;
                if !w.f.is_finite() {
                    stop = StopReason::Diverged;
                    break;
                }
                if !w.success || w.t <= 0.0 {
                    stop = StopReason::LineSearchFailure;
                    break;
                }
                let s: Vec<f64> = d.iter().map(|di| w.t * di).collect();
                let y: Vec<f64> = w.g.iter().zip(&g).map(|(gn, go)| gn - go).collect();
                for (pi, si) in params.iter_mut().zip(&s) {
                    *pi += si;
                }
                f = w.f;
                g = w.g;
                opt.iter += 1;
                if f < best_f {
                    best_f = f;
                    best_x.copy_from_slice(params);
                }
                history.push(best_f);
                let ys = dot(&y, &s);
                if ys > 1e-10 * norm2(&y) * norm2(&s) {
                    gamma = ys / dot(&y, &y);
                    if mem.len() == lp.memory {
                        mem.pop_front();
                    }
                    mem.push_back((s, y, 1.0 / ys));
                }
                if norm2(&g) < opt.grad_tol {
                    stop = StopReason::GradientTolerance;
                    break;
                }
            }
        }
    }

    params.copy_from_slice(&best_x);
    Ok(MinimizeReport { history, best_loss: best_f, stop, iters: opt.iter })
}

/// Trains a network in place against a batch loss. Convenience wrapper
/// around [`minimize_flat`].
pub fn minimize(
    net: &mut Mlp,
    x: ArrayView2<'_, f64>,
    loss: &dyn BatchLoss,
    opt: &mut OptState,
) -> Result<MinimizeReport> {
    let mut params = net.params();
    let mut scratch = net.clone();
    let mut objective = |p: &[f64]| -> Result<(f64, Vec<f64>)> {
        scratch.set_params(p)?;
        scratch.value_and_grad(x, loss)
    };
    let report = minimize_flat(&mut params, &mut objective, opt)?;
    net.set_params(&params)?;
    Ok(report)
}
