//! Horizontal line slicing of disk families.
//!
//! A horizontal line at height `y` meets a disk's interior exactly when
//! `|y - c_y| < r`, contributing one chord (two boundary crossings). A disk
//! intercepts an offset range of length `2r` out of the window height `H`,
//! so the expected crossing count of a uniform random line is
//! `sum_k 4 r_k / H`; the Monte-Carlo mean is checked against this closed
//! form. Tangent lines (`|y - c_y| = r` within tolerance) form the
//! exceptional set and are counted separately.

use crate::disk::DiskFamily;
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::Write;

/// Absolute tolerance on the chord discriminant `r^2 - (y - c_y)^2`
/// classifying a line as tangent to a circle.
pub const TANGENT_DISCRIMINANT_TOL: f64 = 1e-12;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LineSample {
    pub offset: f64,
    pub crossings: u32,
    pub sets_met: Vec<u32>,
    pub tangent_hits: u32,
}

/// Slices the family with the horizontal line `y = offset`.
pub fn slice_line(family: &DiskFamily, offset: f64) -> LineSample {
    let mut crossings = 0;
    let mut sets_met = Vec::new();
    let mut tangent_hits = 0;
    for entry in &family.disks {
        let dy = offset - entry.disk.center[1];
        let discriminant = entry.disk.radius * entry.disk.radius - dy * dy;
        if discriminant.abs() <= TANGENT_DISCRIMINANT_TOL {
            tangent_hits += 1;
        } else if discriminant > 0.0 {
            crossings += 2;
            sets_met.push(entry.id);
        }
    }
    LineSample {
        offset,
        crossings,
        sets_met,
        tangent_hits,
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CrossingStats {
    pub n_lines: usize,
    pub mean_crossings: f64,
    /// Closed form `sum_k 4 r_k / H`.
    pub analytic_mean: f64,
    /// Standard error of the sample mean.
    pub std_error: f64,
    pub mean_sets_met: f64,
    /// Whether every non-tangent sample had an even crossing count.
    pub all_non_tangent_even: bool,
    /// `(sets met, number of lines)` pairs in increasing order.
    pub sets_met_histogram: Vec<(u32, usize)>,
}

fn sample_offsets(family: &DiskFamily, n_lines: usize, rng_seed: u64) -> Vec<f64> {
    let (y_min, y_max) = family.ambient.y_extent();
    // One stream per line index: the sampled offsets do not depend on how
    // the parallel map is scheduled.
    (0..n_lines as u64)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
            rng.set_stream(i);
            rng.gen_range(y_min..y_max)
        })
        .collect()
}

/// Monte-Carlo crossing statistics over uniform random horizontal lines.
pub fn crossing_statistics(
    family: &DiskFamily,
    n_lines: usize,
    rng_seed: u64,
) -> Result<CrossingStats> {
    if n_lines < 100 {
        return Err(Error::TooFewLines {
            need: 100,
            got: n_lines,
        });
    }
    let offsets = sample_offsets(family, n_lines, rng_seed);
    let samples: Vec<LineSample> = offsets
        .par_iter()
        .map(|&offset| slice_line(family, offset))
        .collect();

    let mean_crossings =
        samples.iter().map(|s| s.crossings as f64).sum::<f64>() / n_lines as f64;
    let variance = samples
        .iter()
        .map(|s| {
            let d = s.crossings as f64 - mean_crossings;
            d * d
        })
        .sum::<f64>()
        / (n_lines as f64 - 1.0);
    let std_error = (variance / n_lines as f64).sqrt();

    let (y_min, y_max) = family.ambient.y_extent();
    let height = y_max - y_min;
    let analytic_mean = family
        .disks
        .iter()
        .map(|e| 4.0 * e.disk.radius / height)
        .sum::<f64>();

    let mean_sets_met =
        samples.iter().map(|s| s.sets_met.len() as f64).sum::<f64>() / n_lines as f64;
    let all_non_tangent_even = samples
        .iter()
        .filter(|s| s.tangent_hits == 0)
        .all(|s| s.crossings % 2 == 0);
    let mut histogram: BTreeMap<u32, usize> = BTreeMap::new();
    for s in &samples {
        *histogram.entry(s.sets_met.len() as u32).or_insert(0) += 1;
    }

    Ok(CrossingStats {
        n_lines,
        mean_crossings,
        analytic_mean,
        std_error,
        mean_sets_met,
        all_non_tangent_even,
        sets_met_histogram: histogram.into_iter().collect(),
    })
}

/// Mean number of distinct members met per line, cumulative by generation:
/// entry `(g, mean)` counts members of generation `<= g`. Uses the same
/// offset streams as [`crossing_statistics`], so the means at successive
/// depths are coupled samples.
pub fn cumulative_sets_met_by_generation(
    family: &DiskFamily,
    n_lines: usize,
    rng_seed: u64,
) -> Result<Vec<(u32, f64)>> {
    if n_lines < 100 {
        return Err(Error::TooFewLines {
            need: 100,
            got: n_lines,
        });
    }
    let max_generation = family.max_generation().ok_or(Error::EmptyFamily)?;
    let offsets = sample_offsets(family, n_lines, rng_seed);
    let per_line: Vec<Vec<u64>> = offsets
        .par_iter()
        .map(|&offset| {
            let mut counts = vec![0u64; max_generation as usize + 1];
            for entry in &family.disks {
                let dy = offset - entry.disk.center[1];
                let discriminant = entry.disk.radius * entry.disk.radius - dy * dy;
                if discriminant > TANGENT_DISCRIMINANT_TOL {
                    counts[entry.generation as usize] += 1;
                }
            }
            counts
        })
        .collect();
    let mut totals = vec![0u64; max_generation as usize + 1];
    for counts in &per_line {
        for (total, &c) in totals.iter_mut().zip(counts) {
            *total += c;
        }
    }
    let mut cumulative = 0u64;
    Ok(totals
        .iter()
        .enumerate()
        .map(|(g, &total)| {
            cumulative += total;
            (g as u32, cumulative as f64 / n_lines as f64)
        })
        .collect())
}

/// Verifies the interval structure of one line: the intersection with each
/// disk is a single chord, chord interiors are pairwise disjoint, and every
/// chord endpoint interior to the window is either a contact point with
/// another member or lies strictly in the residual set. Returns `false`
/// exactly when some endpoint sits strictly inside another member, which is
/// the overlap signature.
pub fn interval_structure_check(
    family: &DiskFamily,
    offset: f64,
    max_generation: Option<u32>,
) -> bool {
    let members: Vec<&crate::disk::DiskEntry> = family
        .disks
        .iter()
        .filter(|e| max_generation.is_none_or(|g| e.generation <= g))
        .collect();
    let mut intervals: Vec<(f64, f64, u32)> = Vec::new();
    for entry in &members {
        let dy = offset - entry.disk.center[1];
        let discriminant = entry.disk.radius * entry.disk.radius - dy * dy;
        if discriminant > TANGENT_DISCRIMINANT_TOL {
            let half = discriminant.sqrt();
            intervals.push((
                entry.disk.center[0] - half,
                entry.disk.center[0] + half,
                entry.id,
            ));
        }
    }
    intervals.sort_by(|a, b| a.partial_cmp(b).expect("finite endpoints"));

    let scale = members
        .iter()
        .map(|e| e.disk.radius)
        .fold(0.0f64, f64::max)
        .max(1e-300);
    let tol = 1e-9 * scale;

    // Chord interiors must not overlap (tangency contact at endpoints is
    // allowed within tolerance).
    for pair in intervals.windows(2) {
        if pair[1].0 < pair[0].1 - tol {
            return false;
        }
    }

    // Classify endpoints: inside another member's interior is a violation.
    for &(left, right, id) in &intervals {
        for x in [left, right] {
            if !family.ambient.contains_point(x, offset) {
                continue; // endpoint on or outside the window boundary
            }
            for entry in &members {
                if entry.id == id {
                    continue;
                }
                let dx = x - entry.disk.center[0];
                let dy = offset - entry.disk.center[1];
                let signed = dx.hypot(dy) - entry.disk.radius;
                if signed < -tol {
                    return false;
                }
            }
        }
    }
    true
}

/// The family rotated by `angle` radians counterclockwise about the center
/// of its ambient disk. Circles are rotation invariant, so slicing the
/// rotated family with horizontal lines realizes slicing the original
/// family in the rotated direction. Box ambients are not rotation
/// symmetric and are rejected.
pub fn rotated_family(family: &DiskFamily, angle: f64) -> Result<DiskFamily> {
    let crate::disk::Window::Disk(outer) = &family.ambient else {
        return Err(Error::InvalidConfig(
            "only families with a disk ambient can be rotated".into(),
        ));
    };
    let (sin, cos) = angle.sin_cos();
    let mut rotated = family.clone();
    for entry in &mut rotated.disks {
        let dx = entry.disk.center[0] - outer.center[0];
        let dy = entry.disk.center[1] - outer.center[1];
        entry.disk.center = [
            outer.center[0] + cos * dx - sin * dy,
            outer.center[1] + sin * dx + cos * dy,
        ];
    }
    Ok(rotated)
}

/// Writes `offset,crossings,sets_met,tangent_hits` rows.
pub fn write_samples_csv<W: Write>(samples: &[LineSample], mut w: W) -> std::io::Result<()> {
    writeln!(w, "offset,crossings,sets_met,tangent_hits")?;
    for s in samples {
        writeln!(
            w,
            "{},{},{},{}",
            s.offset,
            s.crossings,
            s.sets_met.len(),
            s.tangent_hits
        )?;
    }
    Ok(())
}

/// Samples `n_lines` uniform horizontal lines, reproducibly per seed.
pub fn sample_lines(family: &DiskFamily, n_lines: usize, rng_seed: u64) -> Result<Vec<LineSample>> {
    if n_lines < 100 {
        return Err(Error::TooFewLines {
            need: 100,
            got: n_lines,
        });
    }
    let offsets = sample_offsets(family, n_lines, rng_seed);
    Ok(offsets
        .par_iter()
        .map(|&offset| slice_line(family, offset))
        .collect())
}
