//! Enumerated packing families in either set model.

use crate::disk::DiskFamily;
use crate::grid::{AmbientBox, GridSet};
use crate::{Error, Result};

/// One enumerated grid member.
#[derive(Clone, Debug, PartialEq)]
pub struct GridMember {
    pub id: u32,
    pub generation: u32,
    pub set: GridSet,
}

/// A family of grid sets over a common ambient box.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFamily {
    pub ambient: AmbientBox,
    pub members: Vec<GridMember>,
}

impl GridFamily {
    pub fn new(ambient: AmbientBox, members: Vec<GridMember>) -> Result<Self> {
        for m in &members {
            if m.set.ambient() != &ambient {
                return Err(Error::GridMismatch);
            }
        }
        Ok(GridFamily { ambient, members })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Bitwise union of all members.
    pub fn union(&self) -> GridSet {
        let mut out = GridSet::empty(self.ambient.clone());
        for m in &self.members {
            out = out.union(&m.set).expect("members share the ambient");
        }
        out
    }

    /// Measure of the ambient not covered by the union.
    pub fn residual_measure(&self) -> f64 {
        self.ambient.volume() - self.union().measure()
    }
}

/// A packing family in either model, in enumeration order.
#[derive(Clone, Debug)]
pub enum Family {
    Disks(DiskFamily),
    Grid(GridFamily),
}

impl Family {
    pub fn len(&self) -> usize {
        match self {
            Family::Disks(f) => f.len(),
            Family::Grid(f) => f.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn model_name(&self) -> &'static str {
        match self {
            Family::Disks(_) => "disks",
            Family::Grid(_) => "grid",
        }
    }

    /// Ambient dimension (disks are planar).
    pub fn dim(&self) -> usize {
        match self {
            Family::Disks(_) => 2,
            Family::Grid(f) => f.ambient.dim(),
        }
    }

    pub fn generation(&self, index: usize) -> u32 {
        match self {
            Family::Disks(f) => f.disks[index].generation,
            Family::Grid(f) => f.members[index].generation,
        }
    }

    pub fn id(&self, index: usize) -> u32 {
        match self {
            Family::Disks(f) => f.disks[index].id,
            Family::Grid(f) => f.members[index].id,
        }
    }

    /// Residual measure of the ambient after removing all members.
    pub fn residual_measure(&self) -> f64 {
        match self {
            Family::Disks(f) => f.residual_measure(),
            Family::Grid(f) => f.residual_measure(),
        }
    }

    pub fn ambient_measure(&self) -> f64 {
        match self {
            Family::Disks(f) => f.ambient.area(),
            Family::Grid(f) => f.ambient.volume(),
        }
    }

    /// Measure of one member.
    pub fn member_measure(&self, index: usize) -> f64 {
        match self {
            Family::Disks(f) => f.disks[index].disk.area(),
            Family::Grid(f) => f.members[index].set.measure(),
        }
    }

    /// Diameter of one member: `2r` for disks, the tight bounding-box
    /// diagonal for grid sets.
    pub fn member_diameter(&self, index: usize) -> f64 {
        match self {
            Family::Disks(f) => 2.0 * f.disks[index].disk.radius,
            Family::Grid(f) => f.members[index].set.bounding_box_diameter(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn union_and_residual() {
        let ambient = AmbientBox::unit_square(4);
        let mut a = GridSet::empty(ambient.clone());
        a.insert_box(&[0, 0], &[2, 4]).unwrap();
        let mut b = GridSet::empty(ambient.clone());
        b.insert_box(&[2, 0], &[4, 4]).unwrap();
        let fam = GridFamily::new(
            ambient,
            vec![
                GridMember { id: 0, generation: 0, set: a },
                GridMember { id: 1, generation: 0, set: b },
            ],
        )
        .unwrap();
        assert_eq!(fam.union().cell_count(), 16);
        assert!(fam.residual_measure().abs() < 1e-15);
    }

    #[test]
    fn rejects_foreign_ambient() {
        let ambient = AmbientBox::unit_square(4);
        let other = AmbientBox::unit_square(8);
        let result = GridFamily::new(
            ambient,
            vec![GridMember {
                id: 0,
                generation: 0,
                set: GridSet::empty(other),
            }],
        );
        assert!(matches!(result, Err(Error::GridMismatch)));
    }
}
