//! Planar disk families with exact arc-length perimeters.
//!
//! A [`DiskFamily`] is an enumerated list of circles with pairwise disjoint
//! interiors inside an ambient window (an outer disk or an axis-aligned
//! rectangle). Perimeter of a member relative to an open window is the arc
//! length of its boundary circle lying strictly inside the window, computed
//! by subtracting excluded angular intervals.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// Relative tolerance classifying two circles as tangent:
/// `|dist - (r_i + r_j)| <= TANGENCY_TOL * max(r_i, r_j)`.
pub const TANGENCY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: [f64; 2],
    pub radius: f64,
}

impl Disk {
    pub fn new(cx: f64, cy: f64, radius: f64) -> Self {
        Disk {
            center: [cx, cy],
            radius,
        }
    }

    pub fn area(&self) -> f64 {
        PI * self.radius * self.radius
    }

    pub fn circumference(&self) -> f64 {
        TAU * self.radius
    }

    pub fn center_distance(&self, other: &Disk) -> f64 {
        let dx = self.center[0] - other.center[0];
        let dy = self.center[1] - other.center[1];
        dx.hypot(dy)
    }

    pub fn contains_point(&self, x: f64, y: f64) -> bool {
        let dx = x - self.center[0];
        let dy = y - self.center[1];
        dx * dx + dy * dy < self.radius * self.radius
    }

    /// Gap between boundaries: zero at external tangency, negative on overlap.
    pub fn boundary_gap(&self, other: &Disk) -> f64 {
        self.center_distance(other) - self.radius - other.radius
    }

    pub fn is_tangent_to(&self, other: &Disk, tol_rel: f64) -> bool {
        self.boundary_gap(other).abs() <= tol_rel * self.radius.max(other.radius)
    }

    pub fn overlaps(&self, other: &Disk, tol_rel: f64) -> bool {
        self.boundary_gap(other) < -tol_rel * self.radius.max(other.radius)
    }
}

/// Ambient region (and clipping window) for planar families.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Window {
    Disk(Disk),
    Rect { min: [f64; 2], max: [f64; 2] },
}

impl Window {
    pub fn rect(min: [f64; 2], max: [f64; 2]) -> Result<Self> {
        if min[0] < max[0] && min[1] < max[1] {
            Ok(Window::Rect { min, max })
        } else {
            Err(Error::InvalidConfig(
                "rectangle max must strictly dominate min".into(),
            ))
        }
    }

    pub fn area(&self) -> f64 {
        match self {
            Window::Disk(d) => d.area(),
            Window::Rect { min, max } => (max[0] - min[0]) * (max[1] - min[1]),
        }
    }

    /// Vertical extent `(y_min, y_max)` of the window.
    pub fn y_extent(&self) -> (f64, f64) {
        match self {
            Window::Disk(d) => (d.center[1] - d.radius, d.center[1] + d.radius),
            Window::Rect { min, max } => (min[1], max[1]),
        }
    }

    /// Tight axis-aligned bounding rectangle.
    pub fn bounding_rect(&self) -> ([f64; 2], [f64; 2]) {
        match self {
            Window::Disk(d) => (
                [d.center[0] - d.radius, d.center[1] - d.radius],
                [d.center[0] + d.radius, d.center[1] + d.radius],
            ),
            Window::Rect { min, max } => (*min, *max),
        }
    }

    pub fn contains_point(&self, x: f64, y: f64) -> bool {
        match self {
            Window::Disk(d) => d.contains_point(x, y),
            Window::Rect { min, max } => {
                x > min[0] && x < max[0] && y > min[1] && y < max[1]
            }
        }
    }

    /// Whether the closed disk lies in the closure of the window.
    pub fn contains_disk(&self, disk: &Disk, tol_rel: f64) -> bool {
        let slack = tol_rel * disk.radius.max(1.0);
        match self {
            Window::Disk(outer) => {
                outer.center_distance(disk) + disk.radius <= outer.radius + slack
            }
            Window::Rect { min, max } => {
                disk.center[0] - disk.radius >= min[0] - slack
                    && disk.center[0] + disk.radius <= max[0] + slack
                    && disk.center[1] - disk.radius >= min[1] - slack
                    && disk.center[1] + disk.radius <= max[1] + slack
            }
        }
    }
}

/// Angular interval on a circle, stored as (center angle, half-width).
#[derive(Clone, Copy, Debug)]
struct Arc {
    center: f64,
    half_width: f64,
}

/// Total measure of the union of angular intervals, in radians.
fn union_measure(arcs: &[Arc]) -> f64 {
    // Normalize to [start, end) pairs in [0, 2pi), splitting wrap-arounds.
    let mut spans: Vec<(f64, f64)> = Vec::with_capacity(arcs.len() + 1);
    for arc in arcs {
        if arc.half_width <= 0.0 {
            continue;
        }
        if arc.half_width >= PI {
            return TAU;
        }
        let start = (arc.center - arc.half_width).rem_euclid(TAU);
        let end = start + 2.0 * arc.half_width;
        if end <= TAU {
            spans.push((start, end));
        } else {
            spans.push((start, TAU));
            spans.push((0.0, end - TAU));
        }
    }
    spans.sort_by(|a, b| a.partial_cmp(b).expect("finite angles"));
    let mut total = 0.0;
    let mut cursor = 0.0f64;
    for (start, end) in spans {
        let lo = start.max(cursor);
        if end > lo {
            total += end - lo;
            cursor = end;
        }
    }
    total.min(TAU)
}

/// Angular intervals of the circle `disk` excluded by the window (the part
/// of the circle lying outside the open window).
///
/// Contact classification happens on distances with the family tangency
/// tolerance, before any inverse-cosine is formed; the cosine arguments of
/// genuine crossings are then bounded away from ±1 and well conditioned.
fn window_exclusions(disk: &Disk, window: &Window, out: &mut Vec<Arc>) -> Option<f64> {
    // Returns Some(full) when the whole circle is excluded.
    let r = disk.radius;
    match window {
        Window::Rect { min, max } => {
            let slack = TANGENCY_TOL * r;
            let walls = [
                // (signed gap from center to wall, outward arc center)
                (max[0] - disk.center[0], 0.0),
                (disk.center[0] - min[0], PI),
                (max[1] - disk.center[1], PI / 2.0),
                (disk.center[1] - min[1], 3.0 * PI / 2.0),
            ];
            for (gap, center) in walls {
                if gap >= r - slack {
                    continue; // inside the wall, or tangent to it
                }
                if gap <= -r + slack {
                    return Some(TAU); // fully beyond the wall
                }
                // The wall at signed distance gap excludes the arc centered
                // at its outward normal with half-width acos(gap / r).
                out.push(Arc {
                    center,
                    half_width: (gap / r).clamp(-1.0, 1.0).acos(),
                });
            }
            None
        }
        Window::Disk(outer) => {
            let d = outer.center_distance(disk);
            let slack = TANGENCY_TOL * outer.radius.max(r);
            if d + r <= outer.radius + slack {
                return None; // interior, or internally tangent
            }
            if d >= outer.radius + r - slack || r >= d + outer.radius - slack {
                return Some(TAU); // outside, or enclosing the window
            }
            // Points of the circle at angle psi from the direction toward
            // the window center satisfy
            // |p - q|^2 = r^2 + d^2 - 2 r d cos(psi); they fall outside when
            // cos(psi) < t0.
            let t0 = (r * r + d * d - outer.radius * outer.radius) / (2.0 * r * d);
            let toward = (outer.center[1] - disk.center[1])
                .atan2(outer.center[0] - disk.center[0]);
            out.push(Arc {
                center: toward + PI,
                half_width: PI - t0.clamp(-1.0, 1.0).acos(),
            });
            None
        }
    }
}

/// Arc length of the boundary circle of `disk` lying strictly inside the
/// open window. A disk interior to the window contributes its full
/// circumference; tangency contacts with the window boundary have zero arc
/// measure and are ignored.
pub fn arc_length_in_window(disk: &Disk, window: &Window) -> f64 {
    let mut arcs = Vec::new();
    if window_exclusions(disk, window, &mut arcs).is_some() {
        return 0.0;
    }
    disk.radius * (TAU - union_measure(&arcs))
}

/// Arc length of the circle of `disk` inside the open window and outside
/// every closed disk in `others`. For families with pairwise disjoint
/// interiors the subtraction is exactly zero; it becomes positive only when
/// interiors genuinely overlap.
pub fn arc_length_uncovered(disk: &Disk, window: &Window, others: &[Disk]) -> f64 {
    let mut arcs = Vec::new();
    if window_exclusions(disk, window, &mut arcs).is_some() {
        return 0.0;
    }
    for other in others {
        let d = disk.center_distance(other);
        let tangency_slack = TANGENCY_TOL * disk.radius.max(other.radius);
        if d >= disk.radius + other.radius - tangency_slack {
            continue; // disjoint or tangent within tolerance: zero covered arc
        }
        if d == 0.0 {
            if disk.radius <= other.radius {
                return 0.0;
            }
            continue;
        }
        let t = (disk.radius * disk.radius + d * d - other.radius * other.radius)
            / (2.0 * disk.radius * d);
        if t >= 1.0 {
            continue;
        }
        if t <= -1.0 {
            return 0.0; // circle entirely inside the other disk
        }
        let toward = (other.center[1] - disk.center[1]).atan2(other.center[0] - disk.center[0]);
        arcs.push(Arc {
            center: toward,
            half_width: t.acos(),
        });
    }
    disk.radius * (TAU - union_measure(&arcs))
}

/// Overlap area of two disk interiors (circular lens; zero when disjoint).
pub fn overlap_area(a: &Disk, b: &Disk) -> f64 {
    let d = a.center_distance(b);
    let (r1, r2) = (a.radius, b.radius);
    if d >= r1 + r2 {
        return 0.0;
    }
    if d <= (r1 - r2).abs() {
        return PI * r1.min(r2) * r1.min(r2);
    }
    let alpha = ((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1)).clamp(-1.0, 1.0).acos();
    let beta = ((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2)).clamp(-1.0, 1.0).acos();
    let kite = 0.5
        * ((-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2))
            .max(0.0)
            .sqrt();
    r1 * r1 * alpha + r2 * r2 * beta - kite
}

/// Parent id of a generated disk; the outer ambient circle is `-1`.
pub const OUTER_PARENT: i64 = -1;

/// One enumerated member of a family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiskEntry {
    pub id: u32,
    pub disk: Disk,
    pub generation: u32,
    /// Ids of the circles this one was inscribed against ([`OUTER_PARENT`]
    /// refers to the ambient boundary circle). Empty for seed members.
    pub parents: Vec<i64>,
}

/// An enumerated family of disks with pairwise disjoint interiors.
#[derive(Clone, Debug, PartialEq)]
pub struct DiskFamily {
    pub ambient: Window,
    pub disks: Vec<DiskEntry>,
}

impl DiskFamily {
    pub fn len(&self) -> usize {
        self.disks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.disks.is_empty()
    }

    /// Sum of member areas; valid because interiors are pairwise disjoint.
    pub fn covered_area(&self) -> f64 {
        self.disks.iter().map(|e| e.disk.area()).sum()
    }

    /// Ambient measure not covered by the union of the members.
    pub fn residual_measure(&self) -> f64 {
        self.ambient.area() - self.covered_area()
    }

    /// Residual measure using only members of generation `<= generation`.
    pub fn residual_measure_at(&self, generation: u32) -> f64 {
        self.ambient.area()
            - self
                .disks
                .iter()
                .filter(|e| e.generation <= generation)
                .map(|e| e.disk.area())
                .sum::<f64>()
    }

    pub fn max_generation(&self) -> Option<u32> {
        self.disks.iter().map(|e| e.generation).max()
    }

    /// Total boundary measure in the open window: the sum over members of
    /// the arc length of each boundary circle inside the window.
    pub fn perimeter_in(&self, window: &Window) -> f64 {
        self.disks
            .iter()
            .map(|e| arc_length_in_window(&e.disk, window))
            .sum()
    }

    /// Contact point of the two largest members: the point on the segment
    /// between their centers at distance `r` from the larger one. For a
    /// tangent pair this is the tangency point; it is the natural center
    /// for a boundary-anchored window.
    pub fn tangency_point_of_largest_pair(&self) -> Option<[f64; 2]> {
        if self.disks.len() < 2 {
            return None;
        }
        let mut order: Vec<usize> = (0..self.disks.len()).collect();
        order.sort_by(|&a, &b| {
            self.disks[b]
                .disk
                .radius
                .partial_cmp(&self.disks[a].disk.radius)
                .expect("finite radii")
                .then(self.disks[a].id.cmp(&self.disks[b].id))
        });
        let a = &self.disks[order[0]].disk;
        let b = &self.disks[order[1]].disk;
        let d = a.center_distance(b);
        if d == 0.0 {
            return Some(a.center);
        }
        let t = a.radius / d;
        Some([
            a.center[0] + t * (b.center[0] - a.center[0]),
            a.center[1] + t * (b.center[1] - a.center[1]),
        ])
    }

    /// Checks radii, containment in the ambient closure, pairwise disjoint
    /// interiors, and tangency residuals of recorded parent contacts.
    pub fn validate(&self, tol_rel: f64) -> Result<()> {
        for e in &self.disks {
            if !(e.disk.radius > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "disk {} has nonpositive radius {}",
                    e.id, e.disk.radius
                )));
            }
            if !self.ambient.contains_disk(&e.disk, tol_rel) {
                return Err(Error::InvalidConfig(format!(
                    "disk {} is not contained in the ambient closure",
                    e.id
                )));
            }
        }
        // Pairwise disjoint interiors; ascending-x sweep with the suffix
        // maximum radius bounding how far right a partner can still touch.
        let mut order: Vec<usize> = (0..self.disks.len()).collect();
        order.sort_by(|&a, &b| {
            self.disks[a].disk.center[0]
                .partial_cmp(&self.disks[b].disk.center[0])
                .expect("finite centers")
        });
        let mut suffix_max_radius = vec![0.0f64; order.len() + 1];
        for rank in (0..order.len()).rev() {
            suffix_max_radius[rank] =
                suffix_max_radius[rank + 1].max(self.disks[order[rank]].disk.radius);
        }
        for (rank, &i) in order.iter().enumerate() {
            let a = &self.disks[i];
            for (offset, &j) in order[rank + 1..].iter().enumerate() {
                let b = &self.disks[j];
                if b.disk.center[0] - a.disk.center[0]
                    > a.disk.radius + suffix_max_radius[rank + 1 + offset]
                {
                    break;
                }
                if a.disk.overlaps(&b.disk, tol_rel) {
                    return Err(Error::Overlap(a.id.min(b.id), a.id.max(b.id)));
                }
            }
        }
        // Recorded tangencies must hold to within the residual tolerance.
        for e in &self.disks {
            for &p in &e.parents {
                let residual = match p {
                    OUTER_PARENT => match &self.ambient {
                        Window::Disk(outer) => {
                            (outer.center_distance(&e.disk) - (outer.radius - e.disk.radius))
                                .abs()
                                / outer.radius.max(e.disk.radius)
                        }
                        Window::Rect { .. } => {
                            return Err(Error::InvalidConfig(format!(
                                "disk {} records an outer-circle parent but the ambient is a box",
                                e.id
                            )))
                        }
                    },
                    id => {
                        let other = self.disks.iter().find(|x| x.id as i64 == id).ok_or_else(
                            || {
                                Error::InvalidConfig(format!(
                                    "disk {} references unknown parent {id}",
                                    e.id
                                ))
                            },
                        )?;
                        e.disk.boundary_gap(&other.disk).abs()
                            / e.disk.radius.max(other.disk.radius)
                    }
                };
                if residual > tol_rel.max(1e-7) {
                    return Err(Error::InvalidConfig(format!(
                        "disk {} tangency residual {residual:.3e} exceeds tolerance",
                        e.id
                    )));
                }
            }
        }
        Ok(())
    }
}
