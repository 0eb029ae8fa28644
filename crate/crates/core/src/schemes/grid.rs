//! Uniform 1D grids and full space-time solution storage.

use super::state::PrimState;
use crate::error::{CoreError, Result};
use std::io::{BufRead, Write};

/// Uniform grid on `[x_min, x_max]` with `n_cells` cells of width `dx`.
///
/// Solution values are point samples at the left edge of each cell,
/// `x_i = x_min + i dx` for `i = 0..n_cells`. This convention makes a 2:1
/// refinement nest exactly: fine sample `2i` sits at the same coordinate as
/// coarse sample `i`, which the stencil assembly relies on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    x_min: f64,
    x_max: f64,
    n_cells: usize,
}

impl Grid1D {
    pub fn new(x_min: f64, x_max: f64, n_cells: usize) -> Result<Self> {
        if !(x_max > x_min) {
            return Err(CoreError::usage(format!(
                "grid bounds out of order: [{x_min}, {x_max}]"
            )));
        }
        if n_cells < 4 {
            return Err(CoreError::usage(format!("need at least 4 cells, got {n_cells}")));
        }
        Ok(Grid1D { x_min, x_max, n_cells })
    }

    #[inline]
    pub fn x_min(&self) -> f64 {
        self.x_min
    }
    #[inline]
    pub fn x_max(&self) -> f64 {
        self.x_max
    }
    #[inline]
    pub fn n_cells(&self) -> usize {
        self.n_cells
    }
    #[inline]
    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.n_cells as f64
    }
    /// Sample coordinate of cell `i`.
    #[inline]
    pub fn point(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_cells).map(|i| self.point(i)).collect()
    }

    /// The 2:1 refinement: twice the cells on the same interval.
    pub fn refined(&self) -> Grid1D {
        Grid1D {
            x_min: self.x_min,
            x_max: self.x_max,
            n_cells: 2 * self.n_cells,
        }
    }
}

/// Which physical fields a solution carries per sample point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    /// One value per point (Burgers).
    Scalar,
    /// Primitive Euler triplet (rho, v, p) per point.
    Euler,
}

impl FieldKind {
    #[inline]
    pub fn width(&self) -> usize {
        match self {
            FieldKind::Scalar => 1,
            FieldKind::Euler => 3,
        }
    }
}

/// Every time level of one scheme run on one grid.
///
/// Level `n` holds the solution at `t = n dt`; level 0 is the initial data.
/// Euler levels store primitive variables.
#[derive(Debug, Clone)]
pub struct SpaceTimeSolution {
    grid: Grid1D,
    dt: f64,
    kind: FieldKind,
    /// `levels[n]` is a flat row of `n_cells * kind.width()` values.
    levels: Vec<Vec<f64>>,
}

impl SpaceTimeSolution {
    pub fn new(grid: Grid1D, dt: f64, kind: FieldKind) -> Self {
        SpaceTimeSolution { grid, dt, kind, levels: Vec::new() }
    }

    pub fn push_scalar_level(&mut self, level: &[f64]) {
        debug_assert_eq!(self.kind, FieldKind::Scalar);
        debug_assert_eq!(level.len(), self.grid.n_cells);
        self.levels.push(level.to_vec());
    }

    pub fn push_prim_level(&mut self, level: &[PrimState]) {
        debug_assert_eq!(self.kind, FieldKind::Euler);
        debug_assert_eq!(level.len(), self.grid.n_cells);
        let mut row = Vec::with_capacity(level.len() * 3);
        for s in level {
            row.extend_from_slice(&[s.rho, s.v, s.p]);
        }
        self.levels.push(row);
    }

    #[inline]
    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }
    #[inline]
    pub fn dt(&self) -> f64 {
        self.dt
    }
    #[inline]
    pub fn kind(&self) -> FieldKind {
        self.kind
    }
    /// Number of stored time levels (steps + 1).
    #[inline]
    pub fn n_levels(&self) -> usize {
        self.levels.len()
    }
    #[inline]
    pub fn n_steps(&self) -> usize {
        self.levels.len().saturating_sub(1)
    }
    /// Final time actually reached, `n_steps * dt`.
    #[inline]
    pub fn t_final(&self) -> f64 {
        self.n_steps() as f64 * self.dt
    }
    #[inline]
    pub fn time(&self, level: usize) -> f64 {
        level as f64 * self.dt
    }

    /// Raw component access: variable `var` of cell `i` at time level `n`.
    #[inline]
    pub fn value(&self, n: usize, i: usize, var: usize) -> f64 {
        debug_assert!(var < self.kind.width());
        self.levels[n][i * self.kind.width() + var]
    }

    pub fn scalar(&self, n: usize, i: usize) -> f64 {
        assert_eq!(self.kind, FieldKind::Scalar);
        self.levels[n][i]
    }

    pub fn prim(&self, n: usize, i: usize) -> PrimState {
        assert_eq!(self.kind, FieldKind::Euler);
        let row = &self.levels[n];
        PrimState { rho: row[3 * i], v: row[3 * i + 1], p: row[3 * i + 2] }
    }

    pub fn scalar_level(&self, n: usize) -> &[f64] {
        assert_eq!(self.kind, FieldKind::Scalar);
        &self.levels[n]
    }

    pub fn prim_level(&self, n: usize) -> Vec<PrimState> {
        (0..self.grid.n_cells).map(|i| self.prim(n, i)).collect()
    }

    /// Writes the columnar text form:
    /// a header line `# grid x_min x_max n_cells dt n_steps`, then one row
    /// per (level, cell): `n i rho v p` (Euler) or `n i u` (scalar), with 17
    /// significant digits.
    pub fn write_text<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(
            out,
            "# grid {:.16e} {:.16e} {} {:.16e} {}",
            self.grid.x_min,
            self.grid.x_max,
            self.grid.n_cells,
            self.dt,
            self.n_steps()
        )?;
        for (n, row) in self.levels.iter().enumerate() {
            for i in 0..self.grid.n_cells {
                write!(out, "{n} {i}")?;
                for k in 0..self.kind.width() {
                    write!(out, " {:.16e}", row[i * self.kind.width() + k])?;
                }
                writeln!(out)?;
            }
        }
        Ok(())
    }

    pub fn read_text<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines();
        let header = lines
            .next()
            .ok_or_else(|| CoreError::format("empty solution file"))??;
        let tok: Vec<&str> = header.split_whitespace().collect();
        if tok.len() != 7 || tok[0] != "#" || tok[1] != "grid" {
            return Err(CoreError::format(format!("bad solution header: {header}")));
        }
        let parse = |s: &str, what: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|_| CoreError::format(format!("bad {what} in header: {s}")))
        };
        let x_min = parse(tok[2], "x_min")?;
        let x_max = parse(tok[3], "x_max")?;
        let n_cells: usize = tok[4]
            .parse()
            .map_err(|_| CoreError::format(format!("bad n_cells: {}", tok[4])))?;
        let dt = parse(tok[5], "dt")?;
        let n_steps: usize = tok[6]
            .parse()
            .map_err(|_| CoreError::format(format!("bad n_steps: {}", tok[6])))?;
        let grid = Grid1D::new(x_min, x_max, n_cells)?;

        let mut rows: Vec<Vec<f64>> = Vec::new();
        let mut kind: Option<FieldKind> = None;
        for (lineno, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let vals: Vec<&str> = line.split_whitespace().collect();
            let k = match vals.len() {
                3 => FieldKind::Scalar,
                5 => FieldKind::Euler,
                _ => {
                    return Err(CoreError::format(format!(
                        "row {} has {} columns",
                        lineno + 2,
                        vals.len()
                    )))
                }
            };
            if *kind.get_or_insert(k) != k {
                return Err(CoreError::format(format!("mixed row widths at row {}", lineno + 2)));
            }
            let n: usize = vals[0]
                .parse()
                .map_err(|_| CoreError::format(format!("bad level index at row {}", lineno + 2)))?;
            let i: usize = vals[1]
                .parse()
                .map_err(|_| CoreError::format(format!("bad cell index at row {}", lineno + 2)))?;
            while rows.len() <= n {
                rows.push(vec![f64::NAN; n_cells * k.width()]);
            }
            for (c, s) in vals[2..].iter().enumerate() {
                rows[n][i * k.width() + c] = s
                    .parse()
                    .map_err(|_| CoreError::format(format!("bad value at row {}", lineno + 2)))?;
            }
        }
        let kind = kind.ok_or_else(|| CoreError::format("solution file has no data rows"))?;
        if rows.len() != n_steps + 1 {
            return Err(CoreError::format(format!(
                "header claims {} levels, file has {}",
                n_steps + 1,
                rows.len()
            )));
        }
        if rows.iter().any(|r| r.iter().any(|v| v.is_nan())) {
            return Err(CoreError::format("solution file has missing cells"));
        }
        Ok(SpaceTimeSolution { grid, dt, kind, levels: rows })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_points_and_refinement() {
        let g = Grid1D::new(0.0, 1.0, 50).unwrap();
        assert_eq!(g.dx(), 0.02);
        assert_eq!(g.point(0), 0.0);
        assert_eq!(g.point(25), 0.5);
        let f = g.refined();
        assert_eq!(f.n_cells(), 100);
        // Exact 2:1 nesting of sample coordinates.
        for i in 0..50 {
            assert_eq!(g.point(i), f.point(2 * i));
        }
    }

    #[test]
    fn grid_validation() {
        assert!(Grid1D::new(1.0, 0.0, 10).is_err());
        assert!(Grid1D::new(0.0, 1.0, 3).is_err());
    }

    #[test]
    fn text_round_trip() {
        let g = Grid1D::new(0.0, 1.0, 4).unwrap();
        let mut sol = SpaceTimeSolution::new(g, 0.01, FieldKind::Euler);
        for n in 0..3 {
            let level: Vec<PrimState> = (0..4)
                .map(|i| PrimState {
                    rho: 1.0 + 0.1 * (n * 4 + i) as f64,
                    v: -0.3 + 0.01 * i as f64,
                    p: 2.0 + 0.2 * n as f64,
                })
                .collect();
            sol.push_prim_level(&level);
        }
        let mut buf = Vec::new();
        sol.write_text(&mut buf).unwrap();
        let back = SpaceTimeSolution::read_text(&buf[..]).unwrap();
        assert_eq!(back.n_levels(), 3);
        assert_eq!(back.dt(), sol.dt());
        for n in 0..3 {
            for i in 0..4 {
                assert_eq!(back.prim(n, i), sol.prim(n, i));
            }
        }
    }

    #[test]
    fn truncated_file_is_a_format_error() {
        let g = Grid1D::new(0.0, 1.0, 4).unwrap();
        let mut sol = SpaceTimeSolution::new(g, 0.01, FieldKind::Scalar);
        sol.push_scalar_level(&[1.0, 2.0, 3.0, 4.0]);
        sol.push_scalar_level(&[1.5, 2.5, 3.5, 4.5]);
        let mut buf = Vec::new();
        sol.write_text(&mut buf).unwrap();
        // Cut into the exponent of the last value so the row cannot parse.
        let cut = buf.len() - 2;
        let err = SpaceTimeSolution::read_text(&buf[..cut]).unwrap_err();
        assert!(matches!(err, CoreError::Format(_)));
        // Dropping whole trailing rows leaves a hole the reader must notice.
        let last_row = buf[..buf.len() - 1].iter().rposition(|b| *b == b'\n').unwrap();
        let err = SpaceTimeSolution::read_text(&buf[..=last_row]).unwrap_err();
        assert!(matches!(err, CoreError::Format(_)));
    }
}
