//! Partial perimeter and diameter sums with growth diagnostics.
//!
//! A genuinely divergent packing keeps adding boundary at every generation;
//! at desk scale this shows up as per-generation perimeter increments whose
//! consecutive ratios stay bounded away from zero. The verdict rule is the
//! ratio test over the trailing generations, with a complete finite cover
//! (zero residual) short-circuiting to a finite total.

use crate::family::Family;
use crate::fit::{linear_fit, LinearFit};
use crate::certify::Tolerances;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::Write;

/// Minimum consecutive increment ratio still counted as non-decaying.
pub const RATIO_THRESHOLD: f64 = 0.9;
/// Number of trailing ratios inspected by the verdict rule.
pub const RATIO_WINDOW: usize = 4;

/// Neumaier-compensated accumulator; keeps the running sums accurate to a
/// few ulps over tens of thousands of terms, so identities such as
/// `D_n = S_n / pi` survive at 1e-12 relative.
#[derive(Clone, Copy, Default)]
struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DivergenceVerdict {
    Divergent,
    Finite,
    /// Too few generations to run the ratio test on an incomplete family.
    Inconclusive,
}

impl std::fmt::Display for DivergenceVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            DivergenceVerdict::Divergent => "divergent",
            DivergenceVerdict::Finite => "finite",
            DivergenceVerdict::Inconclusive => "inconclusive",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GrowthLaw {
    Power,
    Exponential,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct GrowthFit {
    pub law: GrowthLaw,
    /// Exponent `b` of `a * g^b`, or rate `c` of `a * exp(c g)`.
    pub exponent: f64,
    pub r_squared: f64,
}

/// One enumeration step of the running sums.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SumRow {
    pub n: usize,
    pub id: u32,
    pub generation: u32,
    /// Radius for disks, bounding-box diagonal for grid sets.
    pub radius_or_diam: f64,
    pub perim_increment: f64,
    pub s_n: f64,
    pub d_n: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DivergenceReport {
    pub rows: Vec<SumRow>,
    /// Perimeter added per generation, in generation order.
    pub generation_increments: Vec<(u32, f64)>,
    /// Trailing consecutive increment ratios inspected by the verdict.
    pub tail_ratios: Vec<f64>,
    pub fit: Option<GrowthFit>,
    pub verdict: DivergenceVerdict,
    pub total_perimeter: f64,
    pub total_diameter_sum: f64,
    pub residual_measure: f64,
}

impl DivergenceReport {
    /// Writes `n,id,generation,radius_or_diam,perim_increment,s_n,d_n`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "n,id,generation,radius_or_diam,perim_increment,s_n,d_n")?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                r.n, r.id, r.generation, r.radius_or_diam, r.perim_increment, r.s_n, r.d_n
            )?;
        }
        Ok(())
    }
}

/// Cumulative `sum (diam E_k)^exponent` in enumeration order; the exponent
/// defaults to `d - 1`.
pub fn diameter_partial_sums(family: &Family, exponent: Option<f64>) -> Result<Vec<f64>> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let e = exponent.unwrap_or((family.dim() - 1) as f64);
    let mut total = CompensatedSum::default();
    Ok((0..family.len())
        .map(|i| {
            total.add(family.member_diameter(i).powf(e));
            total.value()
        })
        .collect())
}

/// Ratio-test verdict over per-generation increments.
///
/// Requires at least `RATIO_WINDOW + 1` generations; a trailing ratio below
/// [`RATIO_THRESHOLD`] (or a vanished increment) grades the family finite.
pub fn verdict_from_increments(increments: &[f64]) -> DivergenceVerdict {
    if increments.len() < RATIO_WINDOW + 1 {
        return DivergenceVerdict::Inconclusive;
    }
    let tail = &increments[increments.len() - (RATIO_WINDOW + 1)..];
    for pair in tail.windows(2) {
        if pair[0] <= 0.0 || pair[1] / pair[0] < RATIO_THRESHOLD {
            return DivergenceVerdict::Finite;
        }
    }
    DivergenceVerdict::Divergent
}

/// Fits the partial sums at generation marks to `a * g^b` and
/// `a * exp(c g)` and keeps the better-R² law.
pub fn fit_growth(sums: &[f64], marks: &[usize]) -> Result<GrowthFit> {
    if marks.len() < 5 {
        return Err(Error::DegenerateSequence(format!(
            "need at least 5 generation marks, got {}",
            marks.len()
        )));
    }
    let mut gs = Vec::with_capacity(marks.len());
    let mut values = Vec::with_capacity(marks.len());
    for (ordinal, &mark) in marks.iter().enumerate() {
        let value = *sums
            .get(mark)
            .ok_or_else(|| Error::DegenerateSequence("mark outside the sequence".into()))?;
        if value <= 0.0 {
            return Err(Error::DegenerateSequence(
                "partial sums must be positive at every mark".into(),
            ));
        }
        gs.push((ordinal + 1) as f64);
        values.push(value);
    }
    let log_values: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let log_gs: Vec<f64> = gs.iter().map(|g| g.ln()).collect();
    let power: LinearFit = linear_fit(&log_gs, &log_values)?;
    let exponential: LinearFit = linear_fit(&gs, &log_values)?;
    Ok(if power.r_squared >= exponential.r_squared {
        GrowthFit {
            law: GrowthLaw::Power,
            exponent: power.slope,
            r_squared: power.r_squared,
        }
    } else {
        GrowthFit {
            law: GrowthLaw::Exponential,
            exponent: exponential.slope,
            r_squared: exponential.r_squared,
        }
    })
}

/// Running perimeter and diameter sums in enumeration order, with
/// per-generation increments, a growth fit when enough generations exist,
/// and the divergent/finite verdict.
///
/// For disk families the per-member perimeter is the boundary arc length
/// inside `window` (the ambient when `None`); grid members use their
/// relative grid perimeter.
pub fn perimeter_partial_sums(
    family: &Family,
    window: Option<&crate::disk::Window>,
    tolerances: &Tolerances,
) -> Result<DivergenceReport> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let diameters = diameter_partial_sums(family, None)?;
    let mut rows = Vec::with_capacity(family.len());
    let mut by_generation: BTreeMap<u32, f64> = BTreeMap::new();
    let mut s = CompensatedSum::default();
    for (index, &d_n) in diameters.iter().enumerate() {
        let increment = match family {
            Family::Disks(f) => {
                let w = window.unwrap_or(&f.ambient);
                crate::disk::arc_length_in_window(&f.disks[index].disk, w)
            }
            Family::Grid(f) => f.members[index].set.perimeter(),
        };
        s.add(increment);
        let generation = family.generation(index);
        *by_generation.entry(generation).or_insert(0.0) += increment;
        rows.push(SumRow {
            n: index + 1,
            id: family.id(index),
            generation,
            radius_or_diam: match family {
                Family::Disks(f) => f.disks[index].disk.radius,
                Family::Grid(f) => f.members[index].set.bounding_box_diameter(),
            },
            perim_increment: increment,
            s_n: s.value(),
            d_n,
        });
    }
    let generation_increments: Vec<(u32, f64)> = by_generation.into_iter().collect();
    let increments: Vec<f64> = generation_increments.iter().map(|&(_, v)| v).collect();

    let residual = family.residual_measure();
    let verdict = if residual <= tolerances.tol_vol {
        DivergenceVerdict::Finite
    } else {
        verdict_from_increments(&increments)
    };
    let tail_ratios = if increments.len() > RATIO_WINDOW {
        increments[increments.len() - (RATIO_WINDOW + 1)..]
            .windows(2)
            .map(|p| if p[0] > 0.0 { p[1] / p[0] } else { 0.0 })
            .collect()
    } else {
        Vec::new()
    };

    // Generation marks: the last row index of each generation.
    let mut marks = Vec::with_capacity(generation_increments.len());
    for &(generation, _) in &generation_increments {
        let mark = rows
            .iter()
            .rposition(|r| r.generation == generation)
            .expect("generation came from the rows");
        marks.push(mark);
    }
    let sums: Vec<f64> = rows.iter().map(|r| r.s_n).collect();
    let fit = if marks.len() >= 5 {
        fit_growth(&sums, &marks).ok()
    } else {
        None
    };

    Ok(DivergenceReport {
        total_perimeter: s.value(),
        total_diameter_sum: *diameters.last().expect("nonempty"),
        rows,
        generation_increments,
        tail_ratios,
        fit,
        verdict,
        residual_measure: residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packing::{generate_gasket, generate_square_tiling, GasketConfig, TilingConfig};
    use std::f64::consts::PI;

    fn gasket(depth: u32) -> Family {
        Family::Disks(
            generate_gasket(&GasketConfig {
                max_depth: depth,
                ..GasketConfig::default()
            })
            .unwrap(),
        )
    }

    #[test]
    fn first_three_circles_sum_to_eight_pi_thirds() {
        // Enumeration order puts the two radius-1/2 seeds first, then the
        // radius-1/3 circles: S_3 = 2 pi (1/2 + 1/2 + 1/3).
        let family = gasket(2);
        let tol = Tolerances::for_family(&family);
        let report = perimeter_partial_sums(&family, None, &tol).unwrap();
        let expected = 8.0 * PI / 3.0;
        assert!((report.rows[2].s_n - expected).abs() < 1e-12);
        assert!((expected - 8.37758).abs() < 1e-5);
    }

    #[test]
    fn single_member_sum_is_its_perimeter() {
        let family = gasket(0);
        let tol = Tolerances::for_family(&family);
        let report = perimeter_partial_sums(&family, None, &tol).unwrap();
        assert!((report.rows[0].s_n - report.rows[0].perim_increment).abs() == 0.0);
    }

    #[test]
    fn sums_are_non_decreasing_and_diameter_identity_holds() {
        let family = gasket(5);
        let tol = Tolerances::for_family(&family);
        let report = perimeter_partial_sums(&family, None, &tol).unwrap();
        let mut previous = 0.0;
        for row in &report.rows {
            assert!(row.perim_increment >= 0.0);
            assert!(row.s_n >= previous);
            previous = row.s_n;
            // For full interior circles S_n = pi * D_n.
            assert!((row.s_n - PI * row.d_n).abs() <= 1e-12 * row.s_n);
        }
    }

    #[test]
    fn tiling_is_finite() {
        let family = Family::Grid(
            generate_square_tiling(&TilingConfig {
                levels: 2,
                resolution: 32,
            })
            .unwrap(),
        );
        let tol = Tolerances::for_family(&family);
        let report = perimeter_partial_sums(&family, None, &tol).unwrap();
        assert_eq!(report.verdict, DivergenceVerdict::Finite);
        assert!(report.residual_measure.abs() < 1e-12);
        // S_n is constant once every tile is enumerated: the total equals
        // the last row's running sum by definition, and the family adds
        // nothing beyond its finite count.
        assert!((report.total_perimeter - 4.0 * 3.0).abs() < 1e-9);
    }

    #[test]
    fn gasket_is_divergent_with_bounded_ratios() {
        let family = gasket(6);
        let tol = Tolerances::for_family(&family);
        let report = perimeter_partial_sums(&family, None, &tol).unwrap();
        assert_eq!(report.verdict, DivergenceVerdict::Divergent);
        assert_eq!(report.tail_ratios.len(), RATIO_WINDOW);
        for &ratio in &report.tail_ratios {
            assert!(ratio >= RATIO_THRESHOLD, "ratio {ratio}");
        }
        assert!(report.fit.is_some());
    }

    #[test]
    fn verdict_rule_on_synthetic_increments() {
        // Constant increments: divergent.
        assert_eq!(
            verdict_from_increments(&[1.0; 8]),
            DivergenceVerdict::Divergent
        );
        // Geometrically vanishing increments: finite.
        let decaying: Vec<f64> = (0..10).map(|k| 0.5f64.powi(k)).collect();
        assert_eq!(
            verdict_from_increments(&decaying),
            DivergenceVerdict::Finite
        );
        // Too short to grade.
        assert_eq!(
            verdict_from_increments(&[1.0, 1.0]),
            DivergenceVerdict::Inconclusive
        );
    }

    #[test]
    fn fit_growth_recovers_laws() {
        // Constant increments make S(g) = c g: a power law with b ~ 1.
        let sums: Vec<f64> = (1..=8).map(|g| 2.0 * g as f64).collect();
        let marks: Vec<usize> = (0..8).collect();
        let fit = fit_growth(&sums, &marks).unwrap();
        assert_eq!(fit.law, GrowthLaw::Power);
        assert!((fit.exponent - 1.0).abs() < 1e-9);

        // Geometric sums prefer the exponential law.
        let sums: Vec<f64> = (1..=8).map(|g| 3.0f64.powi(g)).collect();
        let fit = fit_growth(&sums, &marks).unwrap();
        assert_eq!(fit.law, GrowthLaw::Exponential);
        assert!((fit.exponent - 3f64.ln()).abs() < 1e-9);

        assert!(fit_growth(&sums, &[0, 1, 2]).is_err());
    }

    #[test]
    fn reordering_preserves_the_verdict() {
        let Family::Disks(mut disks) = gasket(6) else {
            unreachable!()
        };
        let tol = Tolerances::for_disks(&disks.ambient);
        let original = perimeter_partial_sums(&Family::Disks(disks.clone()), None, &tol)
            .unwrap();
        disks.disks.reverse();
        let reordered = perimeter_partial_sums(&Family::Disks(disks), None, &tol).unwrap();
        assert_eq!(original.verdict, reordered.verdict);
        // Pointwise sums differ but totals agree.
        assert!((original.total_perimeter - reordered.total_perimeter).abs() < 1e-9);
    }

    #[test]
    fn csv_shape() {
        let family = gasket(1);
        let tol = Tolerances::for_family(&family);
        let report = perimeter_partial_sums(&family, None, &tol).unwrap();
        let mut buffer = Vec::new();
        report.write_csv(&mut buffer).unwrap();
        let text = String::from_utf8(buffer).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "n,id,generation,radius_or_diam,perim_increment,s_n,d_n");
        assert_eq!(lines.len(), family.len() + 1);
    }
}
