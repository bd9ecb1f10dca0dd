//! Digital subsets of a d-dimensional box.
//!
//! A [`GridSet`] stores one bit per cell of a uniform grid over an open
//! axis-aligned box. Measure is `#cells * h^d` and the relative perimeter is
//! `h^(d-1)` times the number of internal faces separating an in-cell from an
//! out-cell; faces lying on the ambient box boundary are never counted, so
//! the perimeter is taken relative to the open box.

use crate::bits::BitSet;
use crate::{Error, Result};
use rand::Rng;

/// Open axis-aligned box carrying the grid parameters.
///
/// All side lengths must be equal so that the derived cell width `h` is
/// uniform across axes.
#[derive(Clone, Debug, PartialEq)]
pub struct AmbientBox {
    min: Vec<f64>,
    max: Vec<f64>,
    resolution: usize,
}

impl AmbientBox {
    pub fn new(min: Vec<f64>, max: Vec<f64>, resolution: usize) -> Result<Self> {
        if min.is_empty() || min.len() != max.len() {
            return Err(Error::InvalidConfig(
                "corner vectors must be nonempty and of equal dimension".into(),
            ));
        }
        if resolution < 1 {
            return Err(Error::InvalidConfig("resolution must be >= 1".into()));
        }
        let side = max[0] - min[0];
        for axis in 0..min.len() {
            let s = max[axis] - min[axis];
            if !(s > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "max corner must strictly dominate min corner (axis {axis})"
                )));
            }
            if (s - side).abs() > 1e-9 * side.abs() {
                return Err(Error::InvalidConfig(
                    "box side lengths must be equal across axes".into(),
                ));
            }
        }
        let mut cells = 1usize;
        for _ in 0..min.len() {
            cells = cells
                .checked_mul(resolution)
                .ok_or_else(|| Error::InvalidConfig("resolution^dim overflows".into()))?;
        }
        Ok(AmbientBox {
            min,
            max,
            resolution,
        })
    }

    /// The unit square `(0,1)^2` at the given resolution.
    pub fn unit_square(resolution: usize) -> Self {
        AmbientBox::new(vec![0.0, 0.0], vec![1.0, 1.0], resolution).expect("valid unit square")
    }

    /// The unit cube `(0,1)^d` at the given resolution.
    pub fn unit_cube(dim: usize, resolution: usize) -> Result<Self> {
        AmbientBox::new(vec![0.0; dim], vec![1.0; dim], resolution)
    }

    pub fn dim(&self) -> usize {
        self.min.len()
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn min_corner(&self) -> &[f64] {
        &self.min
    }

    pub fn max_corner(&self) -> &[f64] {
        &self.max
    }

    /// Uniform cell width `h`.
    pub fn cell_width(&self) -> f64 {
        (self.max[0] - self.min[0]) / self.resolution as f64
    }

    pub fn cell_count(&self) -> usize {
        self.resolution.pow(self.dim() as u32)
    }

    pub fn cell_volume(&self) -> f64 {
        self.cell_width().powi(self.dim() as i32)
    }

    /// Area of one cell face, `h^(d-1)`.
    pub fn face_area(&self) -> f64 {
        self.cell_width().powi(self.dim() as i32 - 1)
    }

    pub fn volume(&self) -> f64 {
        self.min
            .iter()
            .zip(&self.max)
            .map(|(lo, hi)| hi - lo)
            .product()
    }

    /// A box over the same coordinates with `factor` times finer resolution.
    pub fn refined(&self, factor: usize) -> Result<Self> {
        AmbientBox::new(
            self.min.clone(),
            self.max.clone(),
            self.resolution
                .checked_mul(factor)
                .ok_or_else(|| Error::InvalidConfig("refined resolution overflows".into()))?,
        )
    }

    /// Same coordinates, equal up to rounding; resolutions may differ.
    pub fn same_box(&self, other: &Self) -> bool {
        self.min == other.min && self.max == other.max
    }
}

/// A measurable digital set: one bit per grid cell.
#[derive(Clone, PartialEq)]
pub struct GridSet {
    ambient: AmbientBox,
    bits: BitSet,
}

impl GridSet {
    pub fn empty(ambient: AmbientBox) -> Self {
        let bits = BitSet::new(ambient.cell_count());
        GridSet { ambient, bits }
    }

    pub fn full(ambient: AmbientBox) -> Self {
        let mut bits = BitSet::new(ambient.cell_count());
        bits.set_range(0, ambient.cell_count(), true);
        GridSet { ambient, bits }
    }

    /// Wraps raw bits in row-major linear order (axis 0 fastest).
    pub(crate) fn from_bits(ambient: AmbientBox, bits: BitSet) -> Self {
        assert_eq!(bits.len(), ambient.cell_count());
        GridSet { ambient, bits }
    }

    /// Builds a set from multi-indices `(i_0, ..., i_{d-1})`.
    pub fn from_cells<'a>(
        ambient: AmbientBox,
        cells: impl IntoIterator<Item = &'a [usize]>,
    ) -> Result<Self> {
        let mut set = GridSet::empty(ambient);
        for idx in cells {
            set.insert(idx)?;
        }
        Ok(set)
    }

    /// Independently includes each cell with probability `density`.
    pub fn random(ambient: AmbientBox, rng: &mut impl Rng, density: f64) -> Self {
        let mut set = GridSet::empty(ambient);
        for i in 0..set.ambient.cell_count() {
            if rng.gen::<f64>() < density {
                set.bits.set(i, true);
            }
        }
        set
    }

    pub fn ambient(&self) -> &AmbientBox {
        &self.ambient
    }

    fn stride(&self, axis: usize) -> usize {
        self.ambient.resolution.pow(axis as u32)
    }

    fn linear_index(&self, idx: &[usize]) -> Result<usize> {
        if idx.len() != self.ambient.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient.dim(),
                got: idx.len(),
            });
        }
        let res = self.ambient.resolution;
        let mut linear = 0usize;
        for (axis, &i) in idx.iter().enumerate() {
            if i >= res {
                return Err(Error::InvalidConfig(format!(
                    "cell index {i} out of range on axis {axis} (resolution {res})"
                )));
            }
            linear += i * self.stride(axis);
        }
        Ok(linear)
    }

    pub fn insert(&mut self, idx: &[usize]) -> Result<()> {
        let i = self.linear_index(idx)?;
        self.bits.set(i, true);
        Ok(())
    }

    pub fn contains(&self, idx: &[usize]) -> bool {
        self.linear_index(idx).map(|i| self.bits.get(i)).unwrap_or(false)
    }

    /// Inserts the half-open cell box `lo..hi` along each axis.
    pub fn insert_box(&mut self, lo: &[usize], hi: &[usize]) -> Result<()> {
        let dim = self.ambient.dim();
        if lo.len() != dim || hi.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: lo.len().max(hi.len()),
            });
        }
        for axis in 0..dim {
            if lo[axis] >= hi[axis] || hi[axis] > self.ambient.resolution {
                return Err(Error::InvalidConfig(format!(
                    "invalid cell range {}..{} on axis {axis}",
                    lo[axis], hi[axis]
                )));
            }
        }
        // Rows along axis 0 are contiguous in the linear order.
        let mut cursor = lo.to_vec();
        loop {
            let row_start = self.linear_index(&cursor)?;
            self.bits
                .set_range(row_start, row_start + (hi[0] - lo[0]), true);
            let mut axis = 1;
            loop {
                if axis >= dim {
                    return Ok(());
                }
                cursor[axis] += 1;
                if cursor[axis] < hi[axis] {
                    break;
                }
                cursor[axis] = lo[axis];
                axis += 1;
            }
        }
    }

    pub fn cell_count(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.any()
    }

    /// Lebesgue measure: `#cells * h^d`.
    pub fn measure(&self) -> f64 {
        self.cell_count() as f64 * self.ambient.cell_volume()
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.ambient == other.ambient {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    /// Number of internal faces separating an in-cell from an out-cell.
    ///
    /// Faces on the ambient box boundary are not counted.
    pub fn boundary_face_count(&self) -> u64 {
        let res = self.ambient.resolution;
        let dim = self.ambient.dim();
        let mut faces = 0u64;
        for linear in self.bits.ones() {
            let mut rest = linear;
            for axis in 0..dim {
                let coord = rest % res;
                rest /= res;
                let stride = self.stride(axis);
                if coord > 0 && !self.bits.get(linear - stride) {
                    faces += 1;
                }
                if coord + 1 < res && !self.bits.get(linear + stride) {
                    faces += 1;
                }
            }
        }
        faces
    }

    /// Relative perimeter in the open box: `face count * h^(d-1)`.
    pub fn perimeter(&self) -> f64 {
        self.boundary_face_count() as f64 * self.ambient.face_area()
    }

    /// Number of faces where a cell of `self` abuts a cell of `other`.
    pub fn shared_face_count(&self, other: &Self) -> Result<u64> {
        self.compatible(other)?;
        let res = self.ambient.resolution;
        let dim = self.ambient.dim();
        let mut faces = 0u64;
        for linear in self.bits.ones() {
            let mut rest = linear;
            for axis in 0..dim {
                let coord = rest % res;
                rest /= res;
                let stride = self.stride(axis);
                if coord > 0 && other.bits.get(linear - stride) {
                    faces += 1;
                }
                if coord + 1 < res && other.bits.get(linear + stride) {
                    faces += 1;
                }
            }
        }
        Ok(faces)
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        Ok(GridSet {
            ambient: self.ambient.clone(),
            bits: self.bits.union(&other.bits),
        })
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        Ok(GridSet {
            ambient: self.ambient.clone(),
            bits: self.bits.intersection(&other.bits),
        })
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        Ok(GridSet {
            ambient: self.ambient.clone(),
            bits: self.bits.difference(&other.bits),
        })
    }

    pub fn symmetric_difference(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        Ok(GridSet {
            ambient: self.ambient.clone(),
            bits: self.bits.symmetric_difference(&other.bits),
        })
    }

    /// Complement within the ambient box.
    pub fn complement(&self) -> Self {
        GridSet {
            ambient: self.ambient.clone(),
            bits: self.bits.complement(),
        }
    }

    pub fn is_subset_of(&self, other: &Self) -> Result<bool> {
        self.compatible(other)?;
        Ok(self.bits.is_subset(&other.bits))
    }

    pub fn is_disjoint_from(&self, other: &Self) -> Result<bool> {
        self.compatible(other)?;
        Ok(!self.bits.intersects(&other.bits))
    }

    /// The same geometric set rendered on a `factor` times finer grid.
    pub fn refine(&self, factor: usize) -> Result<Self> {
        if factor == 0 {
            return Err(Error::InvalidConfig("refinement factor must be >= 1".into()));
        }
        if factor == 1 {
            return Ok(self.clone());
        }
        let fine = self.ambient.refined(factor)?;
        let dim = self.ambient.dim();
        let res = self.ambient.resolution;
        let mut out = GridSet::empty(fine);
        let mut coarse = vec![0usize; dim];
        let mut lo = vec![0usize; dim];
        let mut hi = vec![0usize; dim];
        for linear in self.bits.ones() {
            let mut rest = linear;
            for axis in 0..dim {
                coarse[axis] = rest % res;
                rest /= res;
                lo[axis] = coarse[axis] * factor;
                hi[axis] = lo[axis] + factor;
            }
            out.insert_box(&lo, &hi)?;
        }
        Ok(out)
    }

    /// Diagonal of the tight cell-aligned bounding box, in length units.
    pub fn bounding_box_diameter(&self) -> f64 {
        let dim = self.ambient.dim();
        let res = self.ambient.resolution;
        let mut lo = vec![usize::MAX; dim];
        let mut hi = vec![0usize; dim];
        let mut seen = false;
        for linear in self.bits.ones() {
            seen = true;
            let mut rest = linear;
            for axis in 0..dim {
                let coord = rest % res;
                rest /= res;
                lo[axis] = lo[axis].min(coord);
                hi[axis] = hi[axis].max(coord);
            }
        }
        if !seen {
            return 0.0;
        }
        let h = self.ambient.cell_width();
        let mut sq = 0.0;
        for axis in 0..dim {
            let extent = (hi[axis] - lo[axis] + 1) as f64 * h;
            sq += extent * extent;
        }
        sq.sqrt()
    }

    /// Iterates linear indices of set cells.
    pub fn cells(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    /// Decomposes a linear index into per-axis coordinates.
    pub fn coords_of(&self, linear: usize) -> Vec<usize> {
        let res = self.ambient.resolution;
        let mut rest = linear;
        (0..self.ambient.dim())
            .map(|_| {
                let c = rest % res;
                rest /= res;
                c
            })
            .collect()
    }
}

impl std::fmt::Debug for GridSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "GridSet(dim {}, res {}, {} cells)",
            self.ambient.dim(),
            self.ambient.resolution,
            self.cell_count()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square_grid(res: usize) -> AmbientBox {
        AmbientBox::unit_square(res)
    }

    #[test]
    fn ambient_rejects_bad_corners() {
        assert!(AmbientBox::new(vec![0.0, 0.0], vec![1.0, 0.0], 4).is_err());
        assert!(AmbientBox::new(vec![0.0], vec![1.0, 1.0], 4).is_err());
        assert!(AmbientBox::new(vec![0.0, 0.0], vec![1.0, 2.0], 4).is_err());
        assert!(AmbientBox::new(vec![0.0, 0.0], vec![1.0, 1.0], 0).is_err());
    }

    #[test]
    fn measure_examples() {
        // Empty set has measure zero on any grid.
        let g = square_grid(10);
        assert_eq!(GridSet::empty(g.clone()).measure(), 0.0);

        // One cell with h = 1 in d = 2 has measure 1.
        let unit_cells = AmbientBox::new(vec![0.0, 0.0], vec![10.0, 10.0], 10).unwrap();
        let mut one = GridSet::empty(unit_cells);
        one.insert(&[3, 4]).unwrap();
        assert_eq!(one.measure(), 1.0);

        // The full 4x4 grid over the unit square has measure 1.
        let full = GridSet::full(square_grid(4));
        assert!((full.measure() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn perimeter_examples() {
        let g = AmbientBox::new(vec![0.0, 0.0], vec![10.0, 10.0], 10).unwrap();
        assert_eq!(g.cell_width(), 1.0);

        // Single interior cell: 4 faces.
        let mut single = GridSet::empty(g.clone());
        single.insert(&[4, 5]).unwrap();
        assert_eq!(single.boundary_face_count(), 4);
        assert_eq!(single.perimeter(), 4.0);

        // Complement of the single cell: the same 4 faces.
        assert_eq!(single.complement().boundary_face_count(), 4);

        // 2x1 domino: 6 faces.
        let mut domino = GridSet::empty(g.clone());
        domino.insert(&[4, 5]).unwrap();
        domino.insert(&[5, 5]).unwrap();
        assert_eq!(domino.perimeter(), 6.0);

        // Empty set: property (0).
        assert_eq!(GridSet::empty(g).perimeter(), 0.0);
    }

    #[test]
    fn boundary_faces_not_counted() {
        // A full grid has relative perimeter zero: every face would lie on
        // the ambient boundary.
        let full = GridSet::full(square_grid(8));
        assert_eq!(full.boundary_face_count(), 0);

        // A corner cell only contributes its two interior faces.
        let mut corner = GridSet::empty(square_grid(8));
        corner.insert(&[0, 0]).unwrap();
        assert_eq!(corner.boundary_face_count(), 2);
    }

    #[test]
    fn shared_faces() {
        let g = square_grid(8);
        let mut a = GridSet::empty(g.clone());
        a.insert(&[2, 2]).unwrap();
        let mut b = GridSet::empty(g.clone());
        b.insert(&[3, 2]).unwrap();
        assert_eq!(a.shared_face_count(&b).unwrap(), 1);
        assert_eq!(b.shared_face_count(&a).unwrap(), 1);

        // Diagonal contact shares no face.
        let mut c = GridSet::empty(g);
        c.insert(&[3, 3]).unwrap();
        assert_eq!(a.shared_face_count(&c).unwrap(), 0);
    }

    #[test]
    fn refine_preserves_measure_and_perimeter() {
        let mut s = GridSet::empty(square_grid(4));
        s.insert(&[1, 1]).unwrap();
        s.insert(&[2, 1]).unwrap();
        let r = s.refine(4).unwrap();
        assert_eq!(r.ambient().resolution(), 16);
        assert!((r.measure() - s.measure()).abs() < 1e-15);
        assert!((r.perimeter() - s.perimeter()).abs() < 1e-12);
    }

    #[test]
    fn insert_box_matches_manual() {
        let mut a = GridSet::empty(square_grid(8));
        a.insert_box(&[2, 3], &[5, 6]).unwrap();
        let mut b = GridSet::empty(square_grid(8));
        for i in 2..5 {
            for j in 3..6 {
                b.insert(&[i, j]).unwrap();
            }
        }
        assert_eq!(a, b);
        assert_eq!(a.cell_count(), 9);
    }

    #[test]
    fn three_dimensional_faces() {
        let g = AmbientBox::unit_cube(3, 4).unwrap();
        let mut s = GridSet::empty(g);
        s.insert(&[1, 1, 1]).unwrap();
        assert_eq!(s.boundary_face_count(), 6);
        let h = s.ambient().cell_width();
        assert!((s.perimeter() - 6.0 * h * h).abs() < 1e-15);
    }

    #[test]
    fn bounding_box_diameter_examples() {
        let g = square_grid(4);
        assert_eq!(GridSet::empty(g.clone()).bounding_box_diameter(), 0.0);
        let full = GridSet::full(g.clone());
        assert!((full.bounding_box_diameter() - 2f64.sqrt()).abs() < 1e-12);
        let mut cell = GridSet::empty(g);
        cell.insert(&[2, 3]).unwrap();
        let h = 0.25f64;
        assert!((cell.bounding_box_diameter() - (2.0 * h * h).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn mismatched_grids_error() {
        let a = GridSet::empty(square_grid(4));
        let b = GridSet::empty(square_grid(8));
        assert!(matches!(a.union(&b), Err(Error::GridMismatch)));
    }
}
