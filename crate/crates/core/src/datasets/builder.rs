//! Dataset generation: run the low-cost scheme(s) per family member,
//! assemble every admissible stencil, attach exact-solution targets.

use super::perturb::PerturbationFamily;
use super::stencil::{assemble_2cgnn, assemble_2dcnn, sample_coordinates, InputFormat, StencilSample};
use super::{Dataset, Provenance};
use crate::error::{CoreError, Result};
use crate::exact::EulerWaves;
use crate::schemes::{
    run_scheme, run_scheme_fixed, run_two_coefficient, AlphaPolicy, FieldKind, GasModel, Problem,
    SchemeKind, SpaceTimeSolution,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Which time levels contribute query points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeSelection {
    /// Every level n >= 1.
    All,
    /// Only the final level.
    FinalOnly,
    /// Every k-th level counting back from the final one (always includes
    /// the final level).
    Stride(usize),
}

impl TimeSelection {
    fn levels(&self, n_steps: usize) -> Vec<usize> {
        match self {
            TimeSelection::All => (1..=n_steps).collect(),
            TimeSelection::FinalOnly => vec![n_steps],
            TimeSelection::Stride(k) => {
                let k = (*k).max(1);
                (1..=n_steps).filter(|n| (n_steps - n) % k == 0).collect()
            }
        }
    }
}

/// Everything the builder needs besides the family itself.
#[derive(Debug, Clone)]
pub struct BuildConfig {
    pub format: InputFormat,
    pub scheme: SchemeKind,
    pub coarse_cells: usize,
    pub t_target: f64,
    pub cfl: f64,
    pub policy: AlphaPolicy,
    pub time_selection: TimeSelection,
    pub seed: u64,
}

impl BuildConfig {
    pub fn new(format: InputFormat, scheme: SchemeKind, coarse_cells: usize) -> Self {
        BuildConfig {
            format,
            scheme,
            coarse_cells,
            t_target: 0.16,
            cfl: 0.9,
            policy: AlphaPolicy::default(),
            time_selection: TimeSelection::All,
            seed: 0,
        }
    }
}

fn assert_in_dependence_cone(
    coarse: &SpaceTimeSolution,
    format: InputFormat,
    i: usize,
    n: usize,
    max_speed: f64,
) {
    let g = coarse.grid();
    let (xq, tq) = (g.point(i), coarse.time(n));
    for (x, t) in sample_coordinates(coarse, format, i, n) {
        let reach = max_speed * (tq - t) + g.dx();
        debug_assert!(
            (x - xq).abs() <= reach + 1e-12,
            "stencil point ({x}, {t}) outside the widened dependence cone of ({xq}, {tq})"
        );
    }
}

/// Builds a two-grid dataset: coarse run at `coarse_cells`, nested fine run
/// at double resolution and half the step, exact-solution targets at every
/// selected coarse point, deterministic shuffle.
pub fn build_2cgnn_set(
    family: &PerturbationFamily,
    cfg: &BuildConfig,
    gas: &GasModel,
) -> Result<Dataset> {
    if cfg.format == InputFormat::TwoDiffusion8 {
        return Err(CoreError::usage("two-diffusion data comes from build_2dcnn_set"));
    }
    let mut samples = Vec::new();
    let mut dt_used = 0.0;
    for (eps, ic) in family.members()? {
        let problem = Problem::Riemann(ic);
        let grid = problem.grid(cfg.coarse_cells)?;
        let coarse =
            run_scheme(&problem, &grid, cfg.scheme, cfg.t_target, cfg.cfl, &cfg.policy, gas)?;
        let fine = run_scheme_fixed(
            &problem,
            &grid.refined(),
            cfg.scheme,
            coarse.dt() / 2.0,
            2 * coarse.n_steps(),
            &cfg.policy,
            gas,
        )?;
        dt_used = coarse.dt();
        let waves = EulerWaves::solve(&ic, gas)?;
        let max_speed =
            cfg.policy.speed_margin * crate::schemes::initial_max_speed(&problem, &grid, gas);
        let levels = cfg.time_selection.levels(coarse.n_steps());
        for &n in &levels {
            let t = coarse.time(n);
            for i in 1..=cfg.coarse_cells - 2 {
                let input = assemble_2cgnn(&coarse, &fine, i, n, cfg.format)?;
                assert_in_dependence_cone(&coarse, cfg.format, i, n, max_speed);
                let s = waves.sample(grid.point(i), t)?;
                samples.push(StencilSample {
                    input,
                    target: vec![s.rho, s.v, s.p],
                    eps,
                    i,
                    n,
                });
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    samples.shuffle(&mut rng);
    Ok(Dataset {
        format: cfg.format,
        kind: FieldKind::Euler,
        samples,
        provenance: Provenance {
            scheme: cfg.scheme.name().to_string(),
            coarse_cells: cfg.coarse_cells,
            dt: dt_used,
            t_target: cfg.t_target,
            diffusion_factor: 0.0,
            epsilons: family.epsilons.clone(),
            seed: cfg.seed,
        },
    })
}

/// Builds a two-coefficient dataset on a single grid of `cells` cells with
/// diffusion coefficients `dx` and `c * dx`.
pub fn build_2dcnn_set(
    family: &PerturbationFamily,
    c: f64,
    cells: usize,
    cfg: &BuildConfig,
    gas: &GasModel,
) -> Result<Dataset> {
    let mut samples = Vec::new();
    let mut dt_used = 0.0;
    for (eps, ic) in family.members()? {
        let problem = Problem::Riemann(ic);
        let grid = problem.grid(cells)?;
        let (run_u, run_v) =
            run_two_coefficient(&problem, &grid, c, cfg.t_target, cfg.cfl, &cfg.policy, gas)?;
        dt_used = run_u.dt();
        let waves = EulerWaves::solve(&ic, gas)?;
        let levels = cfg.time_selection.levels(run_u.n_steps());
        for &n in &levels {
            let t = run_u.time(n);
            for i in 1..=cells - 2 {
                let input = assemble_2dcnn(&run_u, &run_v, i, n)?;
                let s = waves.sample(grid.point(i), t)?;
                samples.push(StencilSample {
                    input,
                    target: vec![s.rho, s.v, s.p],
                    eps,
                    i,
                    n,
                });
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    samples.shuffle(&mut rng);
    Ok(Dataset {
        format: InputFormat::TwoDiffusion8,
        kind: FieldKind::Euler,
        samples,
        provenance: Provenance {
            scheme: SchemeKind::LeapfrogSplitting.name().to_string(),
            coarse_cells: cells,
            dt: dt_used,
            t_target: cfg.t_target,
            diffusion_factor: c,
            epsilons: family.epsilons.clone(),
            seed: cfg.seed,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::RiemannIC;

    #[test]
    fn sample_count_matches_the_formula() {
        let family = PerturbationFamily {
            base: RiemannIC::lax(&GasModel::default()),
            epsilons: vec![0.02, -0.02],
        };
        let cfg = BuildConfig::new(InputFormat::Standard8, SchemeKind::Rusanov, 50);
        let ds = build_2cgnn_set(&family, &cfg, &GasModel::default()).unwrap();
        // Two members, (coarse_cells - 2) interior points, n_steps levels.
        let problem = Problem::Riemann(family.base);
        let grid = problem.grid(50).unwrap();
        let probe = run_scheme(
            &problem,
            &grid,
            SchemeKind::Rusanov,
            cfg.t_target,
            cfg.cfl,
            &cfg.policy,
            &GasModel::default(),
        )
        .unwrap();
        // Perturbed members scale all speeds by sqrt(1+eps)... the per-member
        // dt differs, but the level count comes from the same floor; assert
        // against the actual builder arithmetic member by member.
        let mut expected = 0;
        for (_, ic) in family.members().unwrap() {
            let p = Problem::Riemann(ic);
            let run = run_scheme(
                &p,
                &grid,
                SchemeKind::Rusanov,
                cfg.t_target,
                cfg.cfl,
                &cfg.policy,
                &GasModel::default(),
            )
            .unwrap();
            expected += 48 * run.n_steps();
        }
        assert_eq!(ds.len(), expected);
        assert!(probe.n_steps() > 0);
        assert!(ds.samples.iter().all(|s| s.input.len() == 24 && s.target.len() == 3));
    }

    #[test]
    fn empty_family_gives_empty_dataset() {
        let family = PerturbationFamily {
            base: RiemannIC::sod(),
            epsilons: vec![],
        };
        let cfg = BuildConfig::new(InputFormat::Standard8, SchemeKind::Rusanov, 50);
        let ds = build_2cgnn_set(&family, &cfg, &GasModel::default()).unwrap();
        assert!(ds.is_empty());
    }

    #[test]
    fn shuffle_is_deterministic_in_the_seed() {
        let family = PerturbationFamily {
            base: RiemannIC::sod(),
            epsilons: vec![0.04],
        };
        let mut cfg = BuildConfig::new(InputFormat::Standard8, SchemeKind::Rusanov, 50);
        cfg.time_selection = TimeSelection::FinalOnly;
        let a = build_2cgnn_set(&family, &cfg, &GasModel::default()).unwrap();
        let b = build_2cgnn_set(&family, &cfg, &GasModel::default()).unwrap();
        assert_eq!(a.samples, b.samples);
        cfg.seed = 1;
        let c = build_2cgnn_set(&family, &cfg, &GasModel::default()).unwrap();
        assert_ne!(a.samples, c.samples);
        assert_eq!(a.len(), c.len());
    }

    #[test]
    fn early_level_targets_are_near_initial_oracle_values() {
        // Level-1 targets sit one dt after the initial data; away from the
        // split they must equal the initial constants.
        let family = PerturbationFamily {
            base: RiemannIC::sod(),
            epsilons: vec![0.02],
        };
        let cfg = BuildConfig::new(InputFormat::Standard8, SchemeKind::Rusanov, 50);
        let ds = build_2cgnn_set(&family, &cfg, &GasModel::default()).unwrap();
        let ic = crate::datasets::perturb_ic(&family.base, 0.02).unwrap();
        for s in ds.samples.iter().filter(|s| s.n == 1 && (s.i < 20 || s.i > 30)) {
            let expect = if s.i < 25 { ic.left } else { ic.right };
            assert!((s.target[0] - expect.rho).abs() < 1e-12);
            assert!((s.target[2] - expect.p).abs() < 1e-12);
        }
    }

    #[test]
    fn two_dcnn_counts_and_halves() {
        let family = PerturbationFamily {
            base: RiemannIC::lax(&GasModel::default()),
            epsilons: vec![0.02],
        };
        let mut cfg = BuildConfig::new(InputFormat::TwoDiffusion8, SchemeKind::LeapfrogSplitting, 100);
        cfg.time_selection = TimeSelection::FinalOnly;
        let ds = build_2dcnn_set(&family, 4.0, 100, &cfg, &GasModel::default()).unwrap();
        assert_eq!(ds.len(), 98);
        assert_eq!(ds.provenance.diffusion_factor, 4.0);
        assert!(ds.samples.iter().all(|s| s.input.len() == 24));
    }
}
