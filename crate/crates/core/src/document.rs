//! The packing interchange format.
//!
//! A [`PackingDocument`] serializes an ambient region plus an enumerated
//! family as JSON, with generator provenance for reproducibility. Ids are
//! dense from zero in enumeration order; geometry kinds must match the
//! declared model. Serialization is canonical (fixed field order, shortest
//! round-trip float form), so identical families produce byte-identical
//! documents.

use crate::disk::{Disk, DiskEntry, DiskFamily, Window};
use crate::family::{Family, GridFamily, GridMember};
use crate::grid::{AmbientBox, GridSet};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AmbientSpec {
    Disk {
        center: [f64; 2],
        radius: f64,
    },
    Box {
        min: Vec<f64>,
        max: Vec<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        resolution: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Disks,
    Grid,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Disks => "disks",
            Model::Grid => "grid",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SetSpec {
    Disk {
        id: u32,
        center: [f64; 2],
        radius: f64,
        generation: u32,
        parents: Vec<i64>,
    },
    /// Axis-aligned block of grid cells, `min_cell` inclusive and
    /// `max_cell` exclusive per axis.
    CellRect {
        id: u32,
        min_cell: Vec<usize>,
        max_cell: Vec<usize>,
        generation: u32,
        parents: Vec<i64>,
    },
}

impl SetSpec {
    fn id(&self) -> u32 {
        match self {
            SetSpec::Disk { id, .. } | SetSpec::CellRect { id, .. } => *id,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub generator: String,
    pub config: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rng_seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PackingDocument {
    pub format_version: u32,
    pub ambient: AmbientSpec,
    pub model: Model,
    pub sets: Vec<SetSpec>,
    pub provenance: Provenance,
}

impl PackingDocument {
    pub fn from_family(family: &Family, provenance: Provenance) -> Result<Self> {
        match family {
            Family::Disks(f) => Ok(PackingDocument {
                format_version: FORMAT_VERSION,
                ambient: match &f.ambient {
                    Window::Disk(d) => AmbientSpec::Disk {
                        center: d.center,
                        radius: d.radius,
                    },
                    Window::Rect { min, max } => AmbientSpec::Box {
                        min: min.to_vec(),
                        max: max.to_vec(),
                        resolution: None,
                    },
                },
                model: Model::Disks,
                sets: f
                    .disks
                    .iter()
                    .map(|e| SetSpec::Disk {
                        id: e.id,
                        center: e.disk.center,
                        radius: e.disk.radius,
                        generation: e.generation,
                        parents: e.parents.clone(),
                    })
                    .collect(),
                provenance,
            }),
            Family::Grid(f) => {
                let sets = f
                    .members
                    .iter()
                    .map(|m| {
                        let rect = cell_rect_of(&m.set).ok_or_else(|| {
                            Error::MalformedDocument(format!(
                                "grid member {} is not an axis-aligned cell rectangle",
                                m.id
                            ))
                        })?;
                        Ok(SetSpec::CellRect {
                            id: m.id,
                            min_cell: rect.0,
                            max_cell: rect.1,
                            generation: m.generation,
                            parents: Vec::new(),
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(PackingDocument {
                    format_version: FORMAT_VERSION,
                    ambient: AmbientSpec::Box {
                        min: f.ambient.min_corner().to_vec(),
                        max: f.ambient.max_corner().to_vec(),
                        resolution: Some(f.ambient.resolution()),
                    },
                    model: Model::Grid,
                    sets,
                    provenance,
                })
            }
        }
    }

    /// Checks version, id density, and geometry/model coherence.
    pub fn validate(&self) -> Result<()> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::MalformedDocument(format!(
                "unsupported format_version {}",
                self.format_version
            )));
        }
        for (index, set) in self.sets.iter().enumerate() {
            if set.id() as usize != index {
                return Err(Error::MalformedDocument(format!(
                    "ids must be dense from 0 in order; found {} at position {index}",
                    set.id()
                )));
            }
            match (self.model, set) {
                (Model::Disks, SetSpec::Disk { radius, parents, .. }) => {
                    if !(*radius > 0.0) {
                        return Err(Error::MalformedDocument(format!(
                            "set {index} has nonpositive radius"
                        )));
                    }
                    for &p in parents {
                        if p != crate::disk::OUTER_PARENT
                            && !(0..self.sets.len() as i64).contains(&p)
                        {
                            return Err(Error::MalformedDocument(format!(
                                "set {index} references unknown parent {p}"
                            )));
                        }
                    }
                }
                (Model::Grid, SetSpec::CellRect {
                    min_cell, max_cell, ..
                }) => {
                    let AmbientSpec::Box {
                        resolution: Some(resolution),
                        min,
                        ..
                    } = &self.ambient
                    else {
                        return Err(Error::MalformedDocument(
                            "grid model requires a box ambient with a resolution".into(),
                        ));
                    };
                    if min_cell.len() != min.len() || max_cell.len() != min.len() {
                        return Err(Error::MalformedDocument(format!(
                            "set {index} cell ranks do not match the ambient dimension"
                        )));
                    }
                    for axis in 0..min_cell.len() {
                        if min_cell[axis] >= max_cell[axis] || max_cell[axis] > *resolution {
                            return Err(Error::MalformedDocument(format!(
                                "set {index} has an invalid cell range on axis {axis}"
                            )));
                        }
                    }
                }
                _ => {
                    return Err(Error::MalformedDocument(format!(
                        "set {index} geometry does not match the {} model",
                        self.model.name()
                    )))
                }
            }
        }
        Ok(())
    }

    pub fn to_family(&self) -> Result<Family> {
        self.validate()?;
        match self.model {
            Model::Disks => {
                let ambient = match &self.ambient {
                    AmbientSpec::Disk { center, radius } => {
                        Window::Disk(Disk::new(center[0], center[1], *radius))
                    }
                    AmbientSpec::Box { min, max, .. } => {
                        if min.len() != 2 {
                            return Err(Error::MalformedDocument(
                                "disk model requires a planar ambient".into(),
                            ));
                        }
                        Window::rect([min[0], min[1]], [max[0], max[1]])
                            .map_err(|e| Error::MalformedDocument(e.to_string()))?
                    }
                };
                let disks = self
                    .sets
                    .iter()
                    .map(|s| match s {
                        SetSpec::Disk {
                            id,
                            center,
                            radius,
                            generation,
                            parents,
                        } => DiskEntry {
                            id: *id,
                            disk: Disk::new(center[0], center[1], *radius),
                            generation: *generation,
                            parents: parents.clone(),
                        },
                        SetSpec::CellRect { .. } => unreachable!("validated"),
                    })
                    .collect();
                Ok(Family::Disks(DiskFamily { ambient, disks }))
            }
            Model::Grid => {
                let AmbientSpec::Box {
                    min,
                    max,
                    resolution: Some(resolution),
                } = &self.ambient
                else {
                    unreachable!("validated")
                };
                let ambient = AmbientBox::new(min.clone(), max.clone(), *resolution)
                    .map_err(|e| Error::MalformedDocument(e.to_string()))?;
                let members = self
                    .sets
                    .iter()
                    .map(|s| match s {
                        SetSpec::CellRect {
                            id,
                            min_cell,
                            max_cell,
                            generation,
                            ..
                        } => {
                            let mut set = GridSet::empty(ambient.clone());
                            set.insert_box(min_cell, max_cell)
                                .map_err(|e| Error::MalformedDocument(e.to_string()))?;
                            Ok(GridMember {
                                id: *id,
                                generation: *generation,
                                set,
                            })
                        }
                        SetSpec::Disk { .. } => unreachable!("validated"),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Family::Grid(GridFamily::new(ambient, members)?))
            }
        }
    }

    /// Canonical JSON form: pretty-printed with a trailing newline.
    pub fn to_json_string(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("serializable document");
        text.push('\n');
        text
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let doc: PackingDocument =
            serde_json::from_str(text).map_err(|e| Error::MalformedDocument(e.to_string()))?;
        doc.validate()?;
        Ok(doc)
    }
}

/// The tight cell rectangle of a grid set, when the set is exactly one.
fn cell_rect_of(set: &GridSet) -> Option<(Vec<usize>, Vec<usize>)> {
    let dim = set.ambient().dim();
    let mut lo = vec![usize::MAX; dim];
    let mut hi = vec![0usize; dim];
    let mut count = 0usize;
    for linear in set.cells() {
        count += 1;
        for (axis, coord) in set.coords_of(linear).into_iter().enumerate() {
            lo[axis] = lo[axis].min(coord);
            hi[axis] = hi[axis].max(coord + 1);
        }
    }
    if count == 0 {
        return None;
    }
    let volume: usize = lo.iter().zip(&hi).map(|(&l, &h)| h - l).product();
    (volume == count).then_some((lo, hi))
}
