//! Dyadic square tilings of the unit square.
//!
//! The tiles cover the grid exactly and kiss along whole faces, so the
//! family deliberately violates the zero-kissing packing hypothesis while
//! keeping a finite total perimeter; it serves as the negative control.

use crate::family::{GridFamily, GridMember};
use crate::grid::{AmbientBox, GridSet};
use crate::{Error, Result};

#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct TilingConfig {
    /// Dyadic subdivision depth: the unit square splits into `4^levels`
    /// congruent squares.
    pub levels: u32,
    /// Grid resolution; must be divisible by `2^levels`.
    pub resolution: usize,
}

impl TilingConfig {
    pub fn validate(&self) -> Result<()> {
        if self.levels < 1 {
            return Err(Error::InvalidConfig("levels must be at least 1".into()));
        }
        if self.levels >= usize::BITS {
            return Err(Error::InvalidConfig("levels out of range".into()));
        }
        let tiles_per_axis = 1usize << self.levels;
        if self.resolution == 0 || !self.resolution.is_multiple_of(tiles_per_axis) {
            return Err(Error::ResolutionNotDivisible {
                resolution: self.resolution,
                levels: self.levels,
            });
        }
        Ok(())
    }
}

/// Splits the unit square into `4^levels` square grid sets covering the
/// ambient exactly. Tiles are enumerated row-major, bottom row first.
pub fn generate_square_tiling(config: &TilingConfig) -> Result<GridFamily> {
    config.validate()?;
    let ambient = AmbientBox::unit_square(config.resolution);
    let tiles_per_axis = 1usize << config.levels;
    let tile_cells = config.resolution / tiles_per_axis;
    let mut members = Vec::with_capacity(tiles_per_axis * tiles_per_axis);
    for ty in 0..tiles_per_axis {
        for tx in 0..tiles_per_axis {
            let mut set = GridSet::empty(ambient.clone());
            set.insert_box(
                &[tx * tile_cells, ty * tile_cells],
                &[(tx + 1) * tile_cells, (ty + 1) * tile_cells],
            )?;
            members.push(GridMember {
                id: (ty * tiles_per_axis + tx) as u32,
                generation: 0,
                set,
            });
        }
    }
    GridFamily::new(ambient, members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::kissing_measure_grids;

    #[test]
    fn level_one_on_two_by_two_grid() {
        let family = generate_square_tiling(&TilingConfig {
            levels: 1,
            resolution: 2,
        })
        .unwrap();
        assert_eq!(family.len(), 4);
        // Each quadrant cell has exactly two internal faces; the total face
        // count over the four tiles is 8.
        let mut total_faces = 0;
        for m in &family.members {
            assert_eq!(m.set.cell_count(), 1);
            assert_eq!(m.set.boundary_face_count(), 2);
            total_faces += m.set.boundary_face_count();
        }
        assert_eq!(total_faces, 8);
        // With h = 1/2 each tile's relative perimeter is 2 * h = 1.
        let h = family.ambient.cell_width();
        for m in &family.members {
            assert!((m.set.perimeter() - 2.0 * h).abs() < 1e-15);
        }
    }

    #[test]
    fn union_covers_exactly() {
        let family = generate_square_tiling(&TilingConfig {
            levels: 2,
            resolution: 64,
        })
        .unwrap();
        assert_eq!(family.len(), 16);
        assert_eq!(family.union().cell_count(), 64 * 64);
        assert!(family.residual_measure().abs() < 1e-15);
        // Tiles are pairwise disjoint.
        for a in &family.members {
            for b in &family.members {
                if a.id != b.id {
                    assert!(a.set.is_disjoint_from(&b.set).unwrap());
                }
            }
        }
    }

    #[test]
    fn adjacent_tiles_kiss_on_full_edges() {
        let family = generate_square_tiling(&TilingConfig {
            levels: 1,
            resolution: 8,
        })
        .unwrap();
        let h = family.ambient.cell_width();
        let side_faces = 4u64; // tile side length in cells
        let horizontal = kissing_measure_grids(&family.members[0].set, &family.members[1].set)
            .unwrap()
            .value;
        assert!((horizontal - side_faces as f64 * h).abs() < 1e-15);
        // Diagonal tiles touch only at a corner.
        let diagonal = kissing_measure_grids(&family.members[0].set, &family.members[3].set)
            .unwrap()
            .value;
        assert_eq!(diagonal, 0.0);
    }

    #[test]
    fn total_perimeter_is_independent_of_resolution() {
        // At fixed levels the total relative perimeter is 4 (2^L - 1)
        // regardless of how fine the realizing grid is.
        for levels in 1..=3u32 {
            let expected = 4.0 * ((1usize << levels) as f64 - 1.0);
            for resolution in [1usize << levels, 64, 128] {
                let family = generate_square_tiling(&TilingConfig { levels, resolution }).unwrap();
                let total: f64 = family.members.iter().map(|m| m.set.perimeter()).sum();
                assert!(
                    (total - expected).abs() < 1e-9,
                    "levels {levels} resolution {resolution}: {total} vs {expected}"
                );
            }
        }
    }

    #[test]
    fn rejects_indivisible_resolution() {
        assert!(matches!(
            generate_square_tiling(&TilingConfig {
                levels: 2,
                resolution: 6,
            }),
            Err(Error::ResolutionNotDivisible { .. })
        ));
        assert!(generate_square_tiling(&TilingConfig {
            levels: 0,
            resolution: 8,
        })
        .is_err());
    }
}
