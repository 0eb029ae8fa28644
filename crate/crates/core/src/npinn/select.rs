//! Additional-training-data selection around discontinuities.
//!
//! Jumps are detected per time level from the density differences of
//! adjacent samples; flagged cells are dilated a few cells wide and `count`
//! points are drawn uniformly (without replacement) from the union.

use super::loss::{PhysicsDataset, PhysicsPoint, PointSource};
use crate::error::{CoreError, Result};
use crate::schemes::{FieldKind, SpaceTimeSolution};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const JUMP_THRESHOLD: f64 = 0.2;
const BASE_DILATION: usize = 3;

fn jump_mask(reference: &SpaceTimeSolution, dilation: usize) -> Vec<(usize, usize)> {
    let nc = reference.grid().n_cells();
    let mut mask = Vec::new();
    for n in 0..reference.n_levels() {
        let jumps: Vec<f64> = (1..nc)
            .map(|i| (reference.value(n, i, 0) - reference.value(n, i - 1, 0)).abs())
            .collect();
        let max_jump = jumps.iter().fold(0.0_f64, |a, b| a.max(*b));
        if max_jump <= 0.0 {
            continue;
        }
        let mut level_mask = vec![false; nc];
        for (k, j) in jumps.iter().enumerate() {
            if *j > JUMP_THRESHOLD * max_jump {
                let lo = k.saturating_sub(dilation);
                let hi = (k + 1 + dilation).min(nc - 1);
                for cell in lo..=hi {
                    level_mask[cell] = true;
                }
            }
        }
        for (i, flagged) in level_mask.iter().enumerate() {
            if *flagged {
                mask.push((n, i));
            }
        }
    }
    mask
}

/// Draws `count` space-time points clustered around the reference
/// solution's discontinuities, with the reference values attached as
/// training data. Deterministic for a fixed seed.
///
/// A jump-free reference degenerates to uniform sampling over the whole
/// lattice; an undersized vicinity is widened (never sampled with
/// replacement). Both fallbacks warn on stderr.
pub fn select_additional_data(
    reference: &SpaceTimeSolution,
    count: usize,
    seed: u64,
) -> Result<PhysicsDataset> {
    let nc = reference.grid().n_cells();
    let total = nc * reference.n_levels();
    if count > total {
        return Err(CoreError::usage(format!(
            "asked for {count} points from a lattice of {total}"
        )));
    }
    let mut dilation = BASE_DILATION;
    let mut mask = jump_mask(reference, dilation);
    if mask.is_empty() {
        eprintln!("warning: reference has no density jumps; sampling uniformly");
        mask = (0..reference.n_levels())
            .flat_map(|n| (0..nc).map(move |i| (n, i)))
            .collect();
    }
    while mask.len() < count {
        dilation += BASE_DILATION;
        eprintln!(
            "warning: jump vicinity ({} points) smaller than requested {count}; widening dilation to {dilation}",
            mask.len()
        );
        mask = jump_mask(reference, dilation);
        if dilation > nc {
            mask = (0..reference.n_levels())
                .flat_map(|n| (0..nc).map(move |i| (n, i)))
                .collect();
            break;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    mask.shuffle(&mut rng);
    mask.truncate(count);

    let points = mask
        .into_iter()
        .map(|(n, i)| {
            let values = match reference.kind() {
                FieldKind::Scalar => vec![reference.scalar(n, i)],
                FieldKind::Euler => {
                    let s = reference.prim(n, i);
                    vec![s.rho, s.v, s.p]
                }
            };
            PhysicsPoint {
                t: reference.time(n),
                x: reference.grid().point(i),
                values,
                source: PointSource::Data,
            }
        })
        .collect();
    Ok(PhysicsDataset { points })
}

/// The dilated jump mask itself, for membership assertions in tests.
#[cfg(test)]
pub(crate) fn dilated_jump_mask(reference: &SpaceTimeSolution) -> Vec<(usize, usize)> {
    jump_mask(reference, BASE_DILATION)
}
