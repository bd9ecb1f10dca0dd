//! Random greedy disk packing of a rectangular ambient.
//!
//! Each placement samples candidate centers uniformly from the residual
//! region and keeps the candidate admitting the largest disk; the placed
//! radius is exactly the binding constraint (distance to a wall or to a
//! placed disk's boundary), so every disk is tangent to whatever bound it.

use crate::disk::{Disk, DiskEntry, DiskFamily, Window};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct GreedyConfig {
    pub rect_min: [f64; 2],
    pub rect_max: [f64; 2],
    pub rng_seed: u64,
    pub target_count: usize,
    /// Candidate centers sampled per placement.
    pub candidate_samples: usize,
    /// Placement fails once no candidate admits at least this radius.
    pub min_radius: f64,
}

impl Default for GreedyConfig {
    fn default() -> Self {
        GreedyConfig {
            rect_min: [0.0, 0.0],
            rect_max: [1.0, 1.0],
            rng_seed: 0,
            target_count: 64,
            candidate_samples: 64,
            min_radius: 1e-4,
        }
    }
}

impl GreedyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.target_count < 2 {
            return Err(Error::InvalidConfig(
                "target_count must be at least 2".into(),
            ));
        }
        if self.candidate_samples == 0 {
            return Err(Error::InvalidConfig(
                "candidate_samples must be positive".into(),
            ));
        }
        if !(self.min_radius > 0.0) {
            return Err(Error::InvalidConfig("min_radius must be positive".into()));
        }
        if self.rect_min[0] >= self.rect_max[0] || self.rect_min[1] >= self.rect_max[1] {
            return Err(Error::InvalidConfig(
                "rectangle max must strictly dominate min".into(),
            ));
        }
        Ok(())
    }
}

fn wall_distance(cfg: &GreedyConfig, x: f64, y: f64) -> f64 {
    (x - cfg.rect_min[0])
        .min(cfg.rect_max[0] - x)
        .min(y - cfg.rect_min[1])
        .min(cfg.rect_max[1] - y)
}

/// Generates a greedy packing, deterministic for a fixed seed.
pub fn generate_greedy(config: &GreedyConfig) -> Result<DiskFamily> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let mut placed: Vec<Disk> = Vec::with_capacity(config.target_count);
    let mut entries: Vec<DiskEntry> = Vec::with_capacity(config.target_count);

    for index in 0..config.target_count {
        let mut best: Option<(f64, f64, f64)> = None;
        let mut candidates = 0usize;
        let mut attempts = 0usize;
        let attempt_cap = config.candidate_samples.saturating_mul(1000);
        while candidates < config.candidate_samples {
            attempts += 1;
            if attempts > attempt_cap {
                break;
            }
            let x = rng.gen_range(config.rect_min[0]..config.rect_max[0]);
            let y = rng.gen_range(config.rect_min[1]..config.rect_max[1]);
            if placed.iter().any(|d| d.contains_point(x, y)) {
                continue; // not in the residual region
            }
            candidates += 1;
            let mut radius = wall_distance(config, x, y);
            for d in &placed {
                let dx = x - d.center[0];
                let dy = y - d.center[1];
                radius = radius.min(dx.hypot(dy) - d.radius);
            }
            if best.map(|(_, _, r)| radius > r).unwrap_or(true) {
                best = Some((x, y, radius));
            }
        }
        let (x, y, radius) = best.ok_or(Error::CannotPlace(config.min_radius))?;
        if radius < config.min_radius {
            return Err(Error::CannotPlace(config.min_radius));
        }
        let disk = Disk::new(x, y, radius);
        // Record which placed disks bind the radius (tangent neighbors).
        let parents: Vec<i64> = placed
            .iter()
            .enumerate()
            .filter(|(_, d)| (disk.boundary_gap(d)).abs() <= 1e-12 * radius.max(d.radius))
            .map(|(i, _)| i as i64)
            .collect();
        placed.push(disk);
        entries.push(DiskEntry {
            id: index as u32,
            disk,
            generation: index as u32,
            parents,
        });
    }

    Ok(DiskFamily {
        ambient: Window::Rect {
            min: config.rect_min,
            max: config.rect_max,
        },
        disks: entries,
    })
}
