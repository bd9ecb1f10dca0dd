//! Acceptance suite: one test per contracted criterion.
//!
//! Each test prints `criterion N PASS/FAIL: <measured values>`; run with
//! `cargo test -p potato-cli --test acceptance -- --nocapture` to see the
//! lines. Tolerances are pinned in the assertions.

use potato_core::dimension::{box_counting, rasterize_residual};
use potato_core::disk::{DiskFamily, Window, OUTER_PARENT, TANGENCY_TOL};
use potato_core::divergence::{perimeter_partial_sums, DivergenceVerdict};
use potato_core::family::Family;
use potato_core::grid::{AmbientBox, GridSet};
use potato_core::packing::{generate_gasket, GasketConfig};
use potato_core::slicing::{crossing_statistics, cumulative_sets_met_by_generation};
use potato_core::certify::{tail_union_check, Tolerances};
use std::path::PathBuf;
use std::process::{Command, Output};
use std::time::Instant;

fn report(criterion: u32, pass: bool, detail: &str) {
    println!(
        "criterion {criterion} {}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} failed: {detail}");
}

fn gasket(depth: u32) -> DiskFamily {
    generate_gasket(&GasketConfig {
        max_depth: depth,
        ..GasketConfig::default()
    })
    .expect("standard gasket generates")
}

fn potato(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_potato"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn potato_with_threads(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_potato"))
        .args(args)
        .env("POTATO_THREADS", threads)
        .output()
        .expect("binary runs")
}

fn tmp(dir: &tempfile::TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn read(path: &PathBuf) -> String {
    std::fs::read_to_string(path).expect("readable file")
}

/// Criterion 1: 1000 random 128x128 grid sets (seed 7) pass (0), (C), (Z),
/// (T' with c = 1), and the additivity-defect identity with zero failures,
/// in exact integer face arithmetic, in under 30 seconds.
#[test]
fn criterion_1_axiom_suite() {
    let dir = tempfile::tempdir().unwrap();
    let report_path = tmp(&dir, "axioms.json");
    let started = Instant::now();
    let output = potato(&[
        "verify",
        "axioms",
        "--grid",
        "128",
        "--trials",
        "1000",
        "--seed",
        "7",
        "--report",
        report_path.to_str().unwrap(),
    ]);
    let elapsed = started.elapsed().as_secs_f64();
    let parsed: serde_json::Value = serde_json::from_str(&read(&report_path)).unwrap();
    let failures = parsed["empty_set_failures"].as_u64().unwrap()
        + parsed["complement_failures"].as_u64().unwrap()
        + parsed["null_invariance_failures"].as_u64().unwrap()
        + parsed["truncation_failures"].as_u64().unwrap()
        + parsed["additivity_failures"].as_u64().unwrap();
    let pass = output.status.code() == Some(0) && failures == 0 && elapsed < 30.0;
    report(
        1,
        pass,
        &format!("1000 trials on 128^2 grids, {failures} failures, {elapsed:.1} s"),
    );
}

/// Criterion 2: all circles to depth 10 have recorded tangency residuals
/// below 1e-7 of the larger radius and pairwise disjoint interiors; the
/// first generation matches the hand-derived curvature-3 circles at
/// (0, +-2/3) to 1e-12.
#[test]
fn criterion_2_descartes_correctness() {
    let family = gasket(10);
    let outer = match &family.ambient {
        Window::Disk(d) => *d,
        Window::Rect { .. } => unreachable!("gasket ambient is a disk"),
    };

    // Pairwise disjointness and recorded-contact residuals.
    family
        .validate(TANGENCY_TOL)
        .expect("depth-10 gasket validates");
    let mut worst_residual = 0.0f64;
    for entry in &family.disks {
        for &parent in &entry.parents {
            let residual = if parent == OUTER_PARENT {
                (outer.center_distance(&entry.disk) - (outer.radius - entry.disk.radius)).abs()
                    / outer.radius.max(entry.disk.radius)
            } else {
                let other = &family.disks[parent as usize];
                entry.disk.boundary_gap(&other.disk).abs()
                    / entry.disk.radius.max(other.disk.radius)
            };
            worst_residual = worst_residual.max(residual);
        }
    }

    let first_generation: Vec<_> = family
        .disks
        .iter()
        .filter(|e| e.generation == 1)
        .collect();
    let hand_derived = first_generation.len() == 2
        && first_generation.iter().all(|e| {
            (e.disk.radius - 1.0 / 3.0).abs() <= 1e-12
                && e.disk.center[0].abs() <= 1e-12
                && (e.disk.center[1].abs() - 2.0 / 3.0).abs() <= 1e-12
        });

    let pass = worst_residual < 1e-7 && hand_derived;
    report(
        2,
        pass,
        &format!(
            "{} circles, worst tangency residual {worst_residual:.2e}, first generation at (0, ±2/3): {hand_derived}",
            family.len()
        ),
    );
}

/// Criterion 3: depth-10 partial perimeter sums grade divergent with every
/// trailing generation-increment ratio at least 0.9, and D_n = S_n / pi to
/// 1e-12 relative throughout, inside 60 seconds.
#[test]
fn criterion_3_divergence_signature() {
    let started = Instant::now();
    let family = Family::Disks(gasket(10));
    let tolerances = Tolerances::for_family(&family);
    let result = perimeter_partial_sums(&family, None, &tolerances).unwrap();
    let elapsed = started.elapsed().as_secs_f64();

    let min_ratio = result
        .tail_ratios
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let diameter_identity = result
        .rows
        .iter()
        .all(|r| (r.d_n - r.s_n / std::f64::consts::PI).abs() <= 1e-12 * r.d_n.abs());
    let pass = result.verdict == DivergenceVerdict::Divergent
        && result.tail_ratios.len() == 4
        && min_ratio >= 0.9
        && diameter_identity
        && elapsed < 60.0;
    report(
        3,
        pass,
        &format!(
            "verdict {}, min trailing ratio {min_ratio:.4}, D_n = S_n/pi to 1e-12: {diameter_identity}, {elapsed:.1} s",
            result.verdict
        ),
    );
}

/// Criterion 4: the square tiling yields verdict finite, hypothesis (iii)
/// fails with a witness pair, the tail-union certificate is strictly
/// unequal, and the exit codes are 1 (hypotheses) and 0 (expected finite).
#[test]
fn criterion_4_negative_control() {
    let dir = tempfile::tempdir().unwrap();
    let mut pass = true;
    let mut details = Vec::new();
    for levels in [1u32, 2, 3] {
        let doc = tmp(&dir, &format!("squares-{levels}.json"));
        let output = potato(&[
            "generate",
            "squares",
            "--levels",
            &levels.to_string(),
            "--resolution",
            "64",
            "--out",
            doc.to_str().unwrap(),
        ]);
        pass &= output.status.code() == Some(0);

        let report_path = tmp(&dir, &format!("hyp-{levels}.json"));
        let output = potato(&[
            "verify",
            "hypotheses",
            doc.to_str().unwrap(),
            "--report",
            report_path.to_str().unwrap(),
        ]);
        let hypotheses_exit = output.status.code();
        let parsed: serde_json::Value = serde_json::from_str(&read(&report_path)).unwrap();
        let kissing_fail = parsed["report"]["kissing_negligible"] == "fail";
        let witness = parsed["report"]["kissing_witness"].is_array();

        let output = potato(&[
            "verify",
            "divergence",
            doc.to_str().unwrap(),
            "--expect",
            "finite",
        ]);
        let finite_exit = output.status.code();

        // Strict tail-union inequality over the whole family.
        let family = potato_core::document::PackingDocument::from_json_str(&read(&doc))
            .unwrap()
            .to_family()
            .unwrap();
        let check = tail_union_check(&family, 0, family.len()).unwrap();
        let strict = check.holds && check.lhs < check.rhs - 1e-9 * check.rhs;

        pass &= hypotheses_exit == Some(1)
            && kissing_fail
            && witness
            && finite_exit == Some(0)
            && strict;
        details.push(format!(
            "levels {levels}: hyp exit {hypotheses_exit:?}, (iii) fail {kissing_fail}, finite exit {finite_exit:?}, strict union gap {:.3}",
            check.rhs - check.lhs
        ));
    }
    report(4, pass, &details.join("; "));
}

/// Criterion 5: every block union over the first 100 members of the depth-6
/// gasket satisfies the perimeter certificate with equality to 1e-9
/// relative; zero violations.
#[test]
fn criterion_5_tail_union_certificates() {
    let family = Family::Disks(gasket(6));
    let cap = 100.min(family.len());
    let mut violations = 0usize;
    let mut max_gap = 0.0f64;
    let mut checked = 0usize;
    for n in 0..cap {
        for m in (n + 1)..=cap {
            let check = tail_union_check(&family, n, m).unwrap();
            checked += 1;
            if !check.holds {
                violations += 1;
            }
            max_gap = max_gap.max((check.lhs - check.rhs).abs() / check.rhs);
        }
    }
    let pass = violations == 0 && max_gap <= 1e-9;
    report(
        5,
        pass,
        &format!(
            "{checked} blocks with 0 <= n < m <= {cap}, {violations} violations, max relative gap {max_gap:.2e}"
        ),
    );
}

/// Criterion 6: 10^4 random horizontal lines through the depth-8 gasket
/// give a mean crossing count within 3 sigma of 4 sum(r)/H, every
/// non-tangent sample is even, and the mean number of sets met strictly
/// increases with depth from 4 to 10.
#[test]
fn criterion_6_coarea_statistics() {
    let family = gasket(8);
    let stats = crossing_statistics(&family, 10_000, 601).unwrap();
    let deviation = (stats.mean_crossings - stats.analytic_mean).abs();
    let within = deviation <= 3.0 * stats.std_error;

    let deep = gasket(10);
    let by_generation = cumulative_sets_met_by_generation(&deep, 10_000, 601).unwrap();
    let depth_window: Vec<f64> = by_generation
        .iter()
        .filter(|&&(g, _)| (4..=10).contains(&g))
        .map(|&(_, mean)| mean)
        .collect();
    let strictly_increasing = depth_window.windows(2).all(|p| p[1] > p[0]);

    let pass = within && stats.all_non_tangent_even && strictly_increasing;
    report(
        6,
        pass,
        &format!(
            "mean {:.3} vs analytic {:.3} ({:.2} sigma), even crossings {}, sets met depth 4..10 strictly increasing {strictly_increasing}",
            stats.mean_crossings,
            stats.analytic_mean,
            deviation / stats.std_error,
            stats.all_non_tangent_even
        ),
    );
}

/// Criterion 7: calibration slopes 2.00 +- 0.02 (full square) and
/// 1.00 +- 0.05 (segment); the gasket residual slope stays >= 1.0 at depths
/// 8 and 10 and lands within 1.3 +- 0.15 with R^2 >= 0.99 at depth 10 on
/// scales 2^-5 .. 2^-10 at 4096^2, in under five minutes.
#[test]
fn criterion_7_dimension_lower_bound() {
    let started = Instant::now();

    // Calibration fixtures.
    let empty = DiskFamily {
        ambient: Window::Rect {
            min: [0.0, 0.0],
            max: [1.0, 1.0],
        },
        disks: vec![],
    };
    let square = rasterize_residual(&empty, 1024, false).unwrap();
    let square_fit = box_counting(&square, &[2, 3, 4, 5, 6, 7]).unwrap();

    let ambient = AmbientBox::unit_square(1024);
    let mut segment = GridSet::empty(ambient);
    segment.insert_box(&[0, 512], &[1024, 513]).unwrap();
    let segment_fit = box_counting(&segment, &[2, 3, 4, 5, 6, 7]).unwrap();

    // Gasket residuals at 4096^2.
    let scales = [5u32, 6, 7, 8, 9, 10];
    let mut slopes = Vec::new();
    for depth in [8u32, 10] {
        let family = gasket(depth);
        let residual = rasterize_residual(&family, 4096, false).unwrap();
        let estimate = box_counting(&residual, &scales).unwrap();
        slopes.push((depth, estimate.slope, estimate.r_squared));
    }
    let elapsed = started.elapsed().as_secs_f64();

    let calibration_ok = (square_fit.slope - 2.0).abs() <= 0.02
        && (segment_fit.slope - 1.0).abs() <= 0.05;
    let lower_bound_ok = slopes.iter().all(|&(_, slope, _)| slope >= 1.0);
    let (_, depth10_slope, depth10_r2) = slopes[1];
    let depth10_ok = (depth10_slope - 1.3).abs() <= 0.15 && depth10_r2 >= 0.99;
    let pass = calibration_ok && lower_bound_ok && depth10_ok && elapsed < 300.0;
    report(
        7,
        pass,
        &format!(
            "square {:.3}, segment {:.3}, slopes {:?}, depth-10 R^2 {:.4}, {elapsed:.1} s",
            square_fit.slope, segment_fit.slope, slopes, depth10_r2
        ),
    );
}

/// Criterion 8: documents and reports are byte-identical across repeated
/// runs and thread counts for fixed seeds and configs.
#[test]
fn criterion_8_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let mut pass = true;
    let mut details = Vec::new();

    let doc1 = tmp(&dir, "g1.json");
    let doc2 = tmp(&dir, "g2.json");
    for (path, threads) in [(&doc1, "1"), (&doc2, "4")] {
        let output = potato_with_threads(
            &["generate", "gasket", "--depth", "6", "--out", path.to_str().unwrap()],
            threads,
        );
        pass &= output.status.code() == Some(0);
    }
    let docs_match = read(&doc1) == read(&doc2);
    details.push(format!("gasket documents identical: {docs_match}"));

    let greedy1 = tmp(&dir, "p1.json");
    let greedy2 = tmp(&dir, "p2.json");
    for (path, threads) in [(&greedy1, "1"), (&greedy2, "4")] {
        let output = potato_with_threads(
            &[
                "generate", "greedy", "--count", "50", "--seed", "21", "--out",
                path.to_str().unwrap(),
            ],
            threads,
        );
        pass &= output.status.code() == Some(0);
    }
    let greedy_match = read(&greedy1) == read(&greedy2);
    details.push(format!("greedy documents identical: {greedy_match}"));

    let mut report_texts = Vec::new();
    let mut csv_texts = Vec::new();
    for (tag, threads) in [("a", "1"), ("b", "4")] {
        let csv = tmp(&dir, &format!("div-{tag}.csv"));
        let rep = tmp(&dir, &format!("div-{tag}.json"));
        let output = potato_with_threads(
            &[
                "verify",
                "divergence",
                doc1.to_str().unwrap(),
                "--csv",
                csv.to_str().unwrap(),
                "--report",
                rep.to_str().unwrap(),
            ],
            threads,
        );
        pass &= output.status.code() == Some(0);
        report_texts.push(read(&rep));
        csv_texts.push(read(&csv));
    }
    let reports_match = report_texts[0] == report_texts[1] && csv_texts[0] == csv_texts[1];
    details.push(format!("divergence reports and CSVs identical: {reports_match}"));

    let mut slice_reports = Vec::new();
    for (tag, threads) in [("a", "1"), ("b", "4")] {
        let rep = tmp(&dir, &format!("slice-{tag}.json"));
        let output = potato_with_threads(
            &[
                "slice",
                doc1.to_str().unwrap(),
                "--lines",
                "2000",
                "--seed",
                "5",
                "--report",
                rep.to_str().unwrap(),
            ],
            threads,
        );
        pass &= output.status.code() == Some(0);
        slice_reports.push(read(&rep));
    }
    let slices_match = slice_reports[0] == slice_reports[1];
    details.push(format!("slice reports identical: {slices_match}"));

    pass &= docs_match && greedy_match && reports_match && slices_match;
    report(8, pass, &details.join("; "));
}
