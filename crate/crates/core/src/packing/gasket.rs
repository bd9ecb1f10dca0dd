//! Apollonian gasket generation via the Descartes circle theorem.
//!
//! Four mutually tangent circles with signed curvatures `k_i` (negative for
//! an enclosing circle) satisfy `(sum k_i)^2 = 2 sum k_i^2`, so a tangent
//! triple determines the fourth curvature up to a square-root sign:
//!
//! ```text
//! k4 = k1 + k2 + k3 ± 2 sqrt(k1 k2 + k2 k3 + k3 k1)
//! ```
//!
//! The same relation holds for curvature-weighted centers as complex
//! numbers, which pins the new circle's position up to a second sign that is
//! resolved by checking tangency distances against all three parents.

use crate::disk::{Disk, DiskEntry, DiskFamily, Window, OUTER_PARENT};
use crate::{Error, Result};
use num_complex::Complex64;
use std::collections::HashSet;

/// Square-root branch in the Descartes relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// Fourth curvature tangent to a mutually tangent triple.
///
/// The two branches sum to `2 (k1 + k2 + k3)`.
pub fn descartes_next(k1: f64, k2: f64, k3: f64, sign: Sign) -> Result<f64> {
    let discriminant = k1 * k2 + k2 * k3 + k3 * k1;
    if discriminant < 0.0 {
        return Err(Error::NegativeDiscriminant(discriminant));
    }
    let root = 2.0 * discriminant.sqrt();
    Ok(match sign {
        Sign::Plus => k1 + k2 + k3 + root,
        Sign::Minus => k1 + k2 + k3 - root,
    })
}

/// Relative tolerance accepted for tangency of a candidate center against
/// its parent triple.
const CENTER_TOL: f64 = 1e-7;

fn tangency_residual(center: Complex64, curvature: f64, triple: &[(Complex64, f64); 3]) -> f64 {
    let r4 = 1.0 / curvature;
    let mut worst = 0.0f64;
    for &(z, k) in triple {
        let r = 1.0 / k;
        // With signed radii both external tangency and tangency inside an
        // enclosing circle read |z4 - z| = |r4 + r|.
        let expected = (r4 + r).abs();
        let actual = (center - z).norm();
        let scale = r4.abs().max(r.abs());
        worst = worst.max((actual - expected).abs() / scale);
    }
    worst
}

/// Both tangency-consistent centers for curvature `k4` against a tangent
/// triple of (center, signed curvature) circles. The symmetric seed triple
/// yields two valid circles; generic triples yield one per curvature branch.
pub fn descartes_centers(triple: &[(Complex64, f64); 3], k4: f64) -> Vec<Complex64> {
    let [(z1, k1), (z2, k2), (z3, k3)] = *triple;
    let s = z1 * z2 * k1 * k2 + z2 * z3 * k2 * k3 + z3 * z1 * k3 * k1;
    let root = 2.0 * s.sqrt();
    let base = z1 * k1 + z2 * k2 + z3 * k3;
    let mut out = Vec::with_capacity(2);
    for candidate in [(base + root) / k4, (base - root) / k4] {
        if tangency_residual(candidate, k4, triple) <= CENTER_TOL {
            out.push(candidate);
        }
    }
    out
}

/// The tangency-consistent center for curvature `k4` on the requested
/// square-root branch of the complex Descartes relation.
pub fn descartes_center(
    triple: &[(Complex64, f64); 3],
    k4: f64,
    sign: Sign,
) -> Result<Complex64> {
    let [(z1, k1), (z2, k2), (z3, k3)] = *triple;
    let s = z1 * z2 * k1 * k2 + z2 * z3 * k2 * k3 + z3 * z1 * k3 * k1;
    let root = 2.0 * s.sqrt();
    let base = z1 * k1 + z2 * k2 + z3 * k3;
    let candidate = match sign {
        Sign::Plus => (base + root) / k4,
        Sign::Minus => (base - root) / k4,
    };
    if tangency_residual(candidate, k4, triple) <= CENTER_TOL {
        Ok(candidate)
    } else {
        Err(Error::NoConsistentCenter(k4))
    }
}

/// Configuration of the gasket recursion.
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct GasketConfig {
    /// Curvatures of the three mutually tangent seed circles; the first is
    /// the enclosing circle and must be negative.
    pub seed_curvatures: [f64; 3],
    pub max_depth: u32,
    pub min_radius: f64,
    pub max_count: usize,
}

impl Default for GasketConfig {
    fn default() -> Self {
        GasketConfig {
            seed_curvatures: [-1.0, 2.0, 2.0],
            max_depth: 6,
            min_radius: 1e-12,
            max_count: 2_000_000,
        }
    }
}

/// Curvatures grow roughly geometrically with depth; past this depth the
/// double-precision tangency residuals degrade beyond the 1e-7 budget.
pub const MAX_GASKET_DEPTH: u32 = 12;

impl GasketConfig {
    pub fn validate(&self) -> Result<()> {
        let [k1, k2, k3] = self.seed_curvatures;
        if !(k1 < 0.0 && k2 > 0.0 && k3 > 0.0) {
            return Err(Error::InvalidConfig(
                "seed curvatures must be (negative outer, positive, positive)".into(),
            ));
        }
        if k1 * k2 + k2 * k3 + k3 * k1 < 0.0 {
            return Err(Error::InvalidConfig(
                "seed triple admits no real Descartes solution".into(),
            ));
        }
        if !(self.min_radius > 0.0) {
            return Err(Error::InvalidConfig("min_radius must be positive".into()));
        }
        if self.max_depth > MAX_GASKET_DEPTH {
            return Err(Error::InvalidConfig(format!(
                "max_depth {} exceeds the supported cap {MAX_GASKET_DEPTH}",
                self.max_depth
            )));
        }
        if self.max_count < 2 {
            return Err(Error::InvalidConfig("max_count must be at least 2".into()));
        }
        Ok(())
    }
}

struct RawCircle {
    center: Complex64,
    curvature: f64,
    generation: u32,
    /// Indices into the working circle list (0 is the outer circle).
    parents: Vec<usize>,
}

/// Key quantized at 1e-9 granularity for center and radius.
fn dedupe_key(center: Complex64, radius: f64) -> (i64, i64, i64) {
    let q = 1e-9;
    (
        (center.re / q).round() as i64,
        (center.im / q).round() as i64,
        (radius / q).round() as i64,
    )
}

/// Places the seed triple: outer circle at the origin and the two inner
/// circles tangent to it and to each other.
fn place_seeds(curvatures: [f64; 3]) -> Result<[(Complex64, f64); 3]> {
    let [k1, k2, k3] = curvatures;
    let outer_radius = -1.0 / k1;
    let r2 = 1.0 / k2;
    let r3 = 1.0 / k3;
    if r2 > outer_radius || r3 > outer_radius {
        return Err(Error::InvalidConfig(
            "inner seed circles do not fit inside the outer circle".into(),
        ));
    }
    let z2 = Complex64::new(outer_radius - r2, 0.0);
    let d2 = outer_radius - r2;
    let d3 = outer_radius - r3;
    if d2 == 0.0 || d3 == 0.0 {
        return Err(Error::InvalidConfig(
            "seed circle is concentric with the outer circle".into(),
        ));
    }
    let cos_phi = (d2 * d2 + d3 * d3 - (r2 + r3) * (r2 + r3)) / (2.0 * d2 * d3);
    if !(-1.0..=1.0).contains(&cos_phi) {
        return Err(Error::InvalidConfig(
            "seed curvatures do not form a mutually tangent triple".into(),
        ));
    }
    let phi = cos_phi.acos();
    let z3 = Complex64::new(d3 * phi.cos(), d3 * phi.sin());
    Ok([(Complex64::new(0.0, 0.0), k1), (z2, k2), (z3, k3)])
}

/// Generates the gasket family breadth first.
///
/// For every tangent triple the inscribed circle on each consistent branch
/// is emitted unless already seen (deduplication by quantized center and
/// radius); recursion stops at `max_depth`, below `min_radius`, or at
/// `max_count` circles. Members are ordered by generation, then radius
/// descending, with center coordinates as the final tie-break, and ids are
/// assigned densely in that order.
pub fn generate_gasket(config: &GasketConfig) -> Result<DiskFamily> {
    config.validate()?;
    let seeds = place_seeds(config.seed_curvatures)?;

    let mut circles: Vec<RawCircle> = Vec::new();
    let mut seen: HashSet<(i64, i64, i64)> = HashSet::new();
    for &(center, curvature) in &seeds {
        circles.push(RawCircle {
            center,
            curvature,
            generation: 0,
            parents: Vec::new(),
        });
        seen.insert(dedupe_key(center, (1.0 / curvature).abs()));
    }

    // Triples of indices into `circles`; index 0 is the outer circle.
    let mut frontier: Vec<[usize; 3]> = vec![[0, 1, 2]];
    let mut truncated = false;

    for generation in 1..=config.max_depth {
        if frontier.is_empty() || truncated {
            break;
        }
        let mut next_frontier = Vec::new();
        for triple_idx in frontier.drain(..) {
            let triple = [
                (circles[triple_idx[0]].center, circles[triple_idx[0]].curvature),
                (circles[triple_idx[1]].center, circles[triple_idx[1]].curvature),
                (circles[triple_idx[2]].center, circles[triple_idx[2]].curvature),
            ];
            let (k1, k2, k3) = (triple[0].1, triple[1].1, triple[2].1);
            for sign in [Sign::Plus, Sign::Minus] {
                let k4 = descartes_next(k1, k2, k3, sign)?;
                if k4 <= 0.0 {
                    continue; // an enclosing solution, never a new inscribed circle
                }
                let radius = 1.0 / k4;
                if radius < config.min_radius {
                    continue;
                }
                for center in descartes_centers(&triple, k4) {
                    if !seen.insert(dedupe_key(center, radius)) {
                        continue;
                    }
                    if circles.len() > config.max_count {
                        truncated = true;
                        continue;
                    }
                    let new_index = circles.len();
                    circles.push(RawCircle {
                        center,
                        curvature: k4,
                        generation,
                        parents: triple_idx.to_vec(),
                    });
                    next_frontier.push([triple_idx[0], triple_idx[1], new_index]);
                    next_frontier.push([triple_idx[0], new_index, triple_idx[2]]);
                    next_frontier.push([new_index, triple_idx[1], triple_idx[2]]);
                }
            }
        }
        frontier = next_frontier;
    }

    // Enumeration order: generation-major, radius descending, then center
    // coordinates for a deterministic total order.
    let outer_radius = -1.0 / seeds[0].1;
    let mut order: Vec<usize> = (1..circles.len()).collect();
    order.sort_by(|&a, &b| {
        let ca = &circles[a];
        let cb = &circles[b];
        ca.generation
            .cmp(&cb.generation)
            .then(
                // radius descending = curvature ascending
                ca.curvature
                    .partial_cmp(&cb.curvature)
                    .expect("finite curvatures"),
            )
            .then(ca.center.re.partial_cmp(&cb.center.re).expect("finite"))
            .then(ca.center.im.partial_cmp(&cb.center.im).expect("finite"))
    });

    // Working index -> final id (outer circle maps to the sentinel).
    let mut final_id = vec![OUTER_PARENT; circles.len()];
    for (id, &index) in order.iter().enumerate() {
        final_id[index] = id as i64;
    }

    let disks = order
        .iter()
        .enumerate()
        .map(|(id, &index)| {
            let c = &circles[index];
            DiskEntry {
                id: id as u32,
                disk: Disk::new(c.center.re, c.center.im, 1.0 / c.curvature),
                generation: c.generation,
                parents: c.parents.iter().map(|&p| final_id[p]).collect(),
            }
        })
        .collect();

    Ok(DiskFamily {
        ambient: Window::Disk(Disk::new(0.0, 0.0, outer_radius)),
        disks,
    })
}
