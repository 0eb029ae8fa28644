//! Columnar text persistence for datasets.
//!
//! Header lines carry the format and provenance; each data row is
//! `eps n i input.. target..` at 17 significant digits, which round-trips
//! f64 exactly.

use super::stencil::{InputFormat, StencilSample};
use super::{Dataset, Provenance};
use crate::error::{CoreError, Result};
use crate::schemes::FieldKind;
use std::io::{BufRead, Write};

impl Dataset {
    pub fn write_text<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "# shocknet-dataset v1")?;
        writeln!(
            out,
            "# format {} vars {} scheme {} coarse_cells {} dt {:.16e} t_target {:.16e} c {:.16e} seed {}",
            self.format.name(),
            self.kind.width(),
            self.provenance.scheme,
            self.provenance.coarse_cells,
            self.provenance.dt,
            self.provenance.t_target,
            self.provenance.diffusion_factor,
            self.provenance.seed,
        )?;
        write!(out, "# epsilons")?;
        for e in &self.provenance.epsilons {
            write!(out, " {:.16e}", e)?;
        }
        writeln!(out)?;
        for s in &self.samples {
            write!(out, "{:.16e} {} {}", s.eps, s.n, s.i)?;
            for v in s.input.iter().chain(&s.target) {
                write!(out, " {:.16e}", v)?;
            }
            writeln!(out)?;
        }
        Ok(())
    }

    pub fn read_text<R: BufRead>(input: R) -> Result<Dataset> {
        let mut lines = input.lines().enumerate();
        let magic = lines
            .next()
            .ok_or_else(|| CoreError::format("empty dataset file"))?
            .1?;
        if magic.trim() != "# shocknet-dataset v1" {
            return Err(CoreError::format(format!("bad dataset magic: {magic}")));
        }
        let header = lines
            .next()
            .ok_or_else(|| CoreError::format("missing dataset header"))?
            .1?;
        let tok: Vec<&str> = header.split_whitespace().collect();
        let expect = |idx: usize, key: &str| -> Result<&str> {
            if tok.get(idx).copied() != Some(key) {
                return Err(CoreError::format(format!(
                    "dataset header missing '{key}' at position {idx}: {header}"
                )));
            }
            tok.get(idx + 1)
                .copied()
                .ok_or_else(|| CoreError::format(format!("dataset header truncated after '{key}'")))
        };
        let format = InputFormat::parse(expect(1, "format")?)
            .map_err(|e| CoreError::format(e.to_string()))?;
        let vars: usize = expect(3, "vars")?
            .parse()
            .map_err(|_| CoreError::format("bad vars count"))?;
        let kind = match vars {
            1 => FieldKind::Scalar,
            3 => FieldKind::Euler,
            other => return Err(CoreError::format(format!("unsupported vars count {other}"))),
        };
        let scheme = expect(5, "scheme")?.to_string();
        let coarse_cells: usize = expect(7, "coarse_cells")?
            .parse()
            .map_err(|_| CoreError::format("bad coarse_cells"))?;
        let dt: f64 = expect(9, "dt")?.parse().map_err(|_| CoreError::format("bad dt"))?;
        let t_target: f64 = expect(11, "t_target")?
            .parse()
            .map_err(|_| CoreError::format("bad t_target"))?;
        let diffusion_factor: f64 =
            expect(13, "c")?.parse().map_err(|_| CoreError::format("bad c"))?;
        let seed: u64 = expect(15, "seed")?.parse().map_err(|_| CoreError::format("bad seed"))?;

        let eps_line = lines
            .next()
            .ok_or_else(|| CoreError::format("missing epsilons line"))?
            .1?;
        let mut eps_tok = eps_line.split_whitespace();
        if eps_tok.next() != Some("#") || eps_tok.next() != Some("epsilons") {
            return Err(CoreError::format(format!("bad epsilons line: {eps_line}")));
        }
        let epsilons: Vec<f64> = eps_tok
            .map(|s| s.parse().map_err(|_| CoreError::format(format!("bad epsilon '{s}'"))))
            .collect::<Result<_>>()?;

        let in_width = format.per_var() * kind.width();
        let row_width = 3 + in_width + kind.width();
        let mut samples = Vec::new();
        for (lineno, line) in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let vals: Vec<&str> = line.split_whitespace().collect();
            if vals.len() != row_width {
                return Err(CoreError::format(format!(
                    "line {}: {} columns, expected {row_width}",
                    lineno + 1,
                    vals.len()
                )));
            }
            let bad = |what: &str| CoreError::format(format!("line {}: bad {what}", lineno + 1));
            let eps: f64 = vals[0].parse().map_err(|_| bad("eps"))?;
            let n: usize = vals[1].parse().map_err(|_| bad("level"))?;
            let i: usize = vals[2].parse().map_err(|_| bad("cell"))?;
            let mut nums = Vec::with_capacity(in_width + kind.width());
            for v in &vals[3..] {
                let x: f64 = v.parse().map_err(|_| bad("value"))?;
                if !x.is_finite() {
                    return Err(bad("non-finite value"));
                }
                nums.push(x);
            }
            let target = nums.split_off(in_width);
            samples.push(StencilSample { input: nums, target, eps, n, i });
        }
        Ok(Dataset {
            format,
            kind,
            samples,
            provenance: Provenance {
                scheme,
                coarse_cells,
                dt,
                t_target,
                diffusion_factor,
                epsilons,
                seed,
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_dataset() -> Dataset {
        Dataset {
            format: InputFormat::Standard8,
            kind: FieldKind::Scalar,
            samples: vec![
                StencilSample {
                    input: (0..8).map(|i| i as f64 * 0.125 - 0.3).collect(),
                    target: vec![0.7071067811865476],
                    eps: 0.02,
                    n: 3,
                    i: 5,
                },
                StencilSample {
                    input: (0..8).map(|i| (i as f64).sin()).collect(),
                    target: vec![-1.5e-7],
                    eps: -0.04,
                    n: 1,
                    i: 2,
                },
            ],
            provenance: Provenance {
                scheme: "rusanov".to_string(),
                coarse_cells: 50,
                dt: 0.004466,
                t_target: 0.16,
                diffusion_factor: 0.0,
                epsilons: vec![0.02, -0.04],
                seed: 7,
            },
        }
    }

    #[test]
    fn round_trip_preserves_everything() {
        let ds = toy_dataset();
        let mut buf = Vec::new();
        ds.write_text(&mut buf).unwrap();
        let back = Dataset::read_text(&buf[..]).unwrap();
        assert_eq!(back.format, ds.format);
        assert_eq!(back.kind, ds.kind);
        assert_eq!(back.samples, ds.samples);
        assert_eq!(back.provenance, ds.provenance);
    }

    #[test]
    fn header_only_file_is_an_empty_dataset() {
        let mut ds = toy_dataset();
        ds.samples.clear();
        let mut buf = Vec::new();
        ds.write_text(&mut buf).unwrap();
        let back = Dataset::read_text(&buf[..]).unwrap();
        assert!(back.is_empty());
        assert_eq!(back.provenance, ds.provenance);
    }

    #[test]
    fn corrupted_row_reports_its_line() {
        let ds = toy_dataset();
        let mut buf = Vec::new();
        ds.write_text(&mut buf).unwrap();
        let mut text = String::from_utf8(buf).unwrap();
        text = text.replace("7.0710678118654757e-1", "7.07z-1");
        let err = Dataset::read_text(text.as_bytes()).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 4"), "message does not name the line: {msg}");
    }

    #[test]
    fn wrong_width_rows_are_rejected() {
        let ds = toy_dataset();
        let mut buf = Vec::new();
        ds.write_text(&mut buf).unwrap();
        let mut text = String::from_utf8(buf).unwrap();
        text.push_str("1 2 3\n");
        assert!(Dataset::read_text(text.as_bytes()).is_err());
    }
}
