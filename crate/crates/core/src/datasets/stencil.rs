//! Stencil input assembly.
//!
//! A surrogate input gathers solution values at a handful of space-time
//! locations that enclose a domain of dependence of the query point
//! `(x_i, t_n)`. For two-grid inputs the fine run's index map is
//! `i'' = 2i'`, `n'' = 2n'`, which lands on identical coordinates; the
//! assembler verifies the coincidence numerically instead of trusting the
//! index arithmetic.

use crate::error::{CoreError, Result};
use crate::schemes::SpaceTimeSolution;

/// Supported input layouts (entries per variable).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    /// Coarse {(n-1, i-1..i+1), (n, i)} plus fine {(n''-2, i''+-2), (n'', i'')}.
    Standard8,
    /// As `Standard8` with the fine level filled in: i''-2..i''+2.
    Variant10,
    /// Fine +-2 neighbors replaced by the +-1 neighbors.
    Variant8,
    /// Two same-grid runs with different diffusion: 4 entries from each.
    TwoDiffusion8,
}

impl InputFormat {
    pub fn per_var(&self) -> usize {
        match self {
            InputFormat::Variant10 => 10,
            _ => 8,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            InputFormat::Standard8 => "standard8",
            InputFormat::Variant10 => "variant10",
            InputFormat::Variant8 => "variant8",
            InputFormat::TwoDiffusion8 => "two-diffusion8",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "standard8" => Ok(InputFormat::Standard8),
            "variant10" => Ok(InputFormat::Variant10),
            "variant8" => Ok(InputFormat::Variant8),
            "two-diffusion8" => Ok(InputFormat::TwoDiffusion8),
            other => Err(CoreError::usage(format!("unknown input format '{other}'"))),
        }
    }

    /// Fine-grid column offsets (relative to `i'' = 2i'`) at level `n''-2`.
    fn fine_offsets(&self) -> &'static [isize] {
        match self {
            InputFormat::Standard8 => &[-2, 0, 2],
            InputFormat::Variant10 => &[-2, -1, 0, 1, 2],
            InputFormat::Variant8 => &[-1, 0, 1],
            InputFormat::TwoDiffusion8 => &[],
        }
    }
}

/// One surrogate record: the assembled input vector and the reference
/// target at the query point, plus where it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct StencilSample {
    pub input: Vec<f64>,
    pub target: Vec<f64>,
    /// Perturbation of the family member this sample came from.
    pub eps: f64,
    /// Coarse-grid cell index of the query point.
    pub i: usize,
    /// Coarse-grid time level of the query point.
    pub n: usize,
}

fn check_range(name: &str, idx: usize, lo: usize, hi: usize) -> Result<()> {
    if idx < lo || idx > hi {
        return Err(CoreError::usage(format!(
            "{name} = {idx} outside admissible range [{lo}, {hi}] (boundary stencils are excluded)"
        )));
    }
    Ok(())
}

/// Assembles a two-grid input vector for the query point `(i, n)` on the
/// coarse grid. `fine` must be the exact 2:1 refinement of `coarse`
/// (double the cells, half the time step, same span).
pub fn assemble_2cgnn(
    coarse: &SpaceTimeSolution,
    fine: &SpaceTimeSolution,
    i: usize,
    n: usize,
    format: InputFormat,
) -> Result<Vec<f64>> {
    if format == InputFormat::TwoDiffusion8 {
        return Err(CoreError::usage("two-diffusion inputs come from assemble_2dcnn"));
    }
    let nc = coarse.grid().n_cells();
    if fine.grid().n_cells() != 2 * nc
        || (fine.dt() - coarse.dt() / 2.0).abs() > 1e-15 * coarse.dt()
    {
        return Err(CoreError::usage(format!(
            "fine run is not the 2:1 refinement: {} vs {} cells, dt {} vs {}",
            fine.grid().n_cells(),
            nc,
            fine.dt(),
            coarse.dt()
        )));
    }
    if coarse.kind() != fine.kind() {
        return Err(CoreError::usage("mixed field kinds across grids"));
    }
    check_range("i", i, 1, nc - 2)?;
    check_range("n", n, 1, coarse.n_steps())?;
    let (fi, fnn) = (2 * i, 2 * n);
    if fnn > fine.n_steps() {
        return Err(CoreError::usage(format!(
            "fine run too short: needs level {fnn}, has {}",
            fine.n_steps()
        )));
    }

    // The index map must land on the same space-time points; verify the
    // coordinates rather than trusting the arithmetic.
    let xc = coarse.grid().point(i);
    let xf = fine.grid().point(fi);
    if (xc - xf).abs() > 1e-12 * (1.0 + xc.abs()) {
        return Err(CoreError::usage(format!(
            "grid nesting broken: coarse x = {xc}, fine x = {xf}"
        )));
    }
    let (tc, tf) = (coarse.time(n), fine.time(fnn));
    if (tc - tf).abs() > 1e-12 * (1.0 + tc.abs()) {
        return Err(CoreError::usage(format!(
            "time nesting broken: coarse t = {tc}, fine t = {tf}"
        )));
    }

    let width = coarse.kind().width();
    let mut input = Vec::with_capacity(format.per_var() * width);
    for var in 0..width {
        for di in [-1isize, 0, 1] {
            input.push(coarse.value(n - 1, (i as isize + di) as usize, var));
        }
        input.push(coarse.value(n, i, var));
        for di in format.fine_offsets() {
            input.push(fine.value(fnn - 2, (fi as isize + di) as usize, var));
        }
        input.push(fine.value(fnn, fi, var));
    }
    Ok(input)
}

/// Assembles a two-coefficient input for `(i, n)`: four entries from the
/// small-diffusion run, then four from the large-diffusion run, per
/// variable. Both runs must share the grid and time step.
pub fn assemble_2dcnn(
    run_u: &SpaceTimeSolution,
    run_v: &SpaceTimeSolution,
    i: usize,
    n: usize,
) -> Result<Vec<f64>> {
    if run_u.grid() != run_v.grid() || run_u.dt() != run_v.dt() {
        return Err(CoreError::usage("two-coefficient runs must share grid and dt"));
    }
    if run_u.kind() != run_v.kind() {
        return Err(CoreError::usage("mixed field kinds across runs"));
    }
    let nc = run_u.grid().n_cells();
    check_range("i", i, 1, nc - 2)?;
    check_range("n", n, 1, run_u.n_steps().min(run_v.n_steps()))?;

    let width = run_u.kind().width();
    let mut input = Vec::with_capacity(8 * width);
    for var in 0..width {
        for run in [run_u, run_v] {
            for di in [-1isize, 0, 1] {
                input.push(run.value(n - 1, (i as isize + di) as usize, var));
            }
            input.push(run.value(n, i, var));
        }
    }
    Ok(input)
}

/// The space-time sample coordinates an assembled input draws from,
/// matching the entry order of one variable block. Used to assert that
/// every entry stays inside the widened domain of dependence.
pub(crate) fn sample_coordinates(
    coarse: &SpaceTimeSolution,
    format: InputFormat,
    i: usize,
    n: usize,
) -> Vec<(f64, f64)> {
    let g = coarse.grid();
    let mut pts = vec![
        (g.point(i - 1), coarse.time(n - 1)),
        (g.point(i), coarse.time(n - 1)),
        (g.point(i + 1), coarse.time(n - 1)),
        (g.point(i), coarse.time(n)),
    ];
    let fine_dx = g.dx() / 2.0;
    for di in format.fine_offsets() {
        pts.push((g.point(i) + *di as f64 * fine_dx, coarse.time(n - 1)));
    }
    if format != InputFormat::TwoDiffusion8 {
        pts.push((g.point(i), coarse.time(n)));
    } else {
        // Both runs sample the same four coarse locations.
        pts.extend_from_slice(&pts.clone()[..4]);
    }
    pts
}
