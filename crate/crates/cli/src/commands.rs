//! Command implementations.

use crate::output::{emit, to_json, CliError, CliResult, Outcome};
use crate::{
    Command, DimensionArgs, GasketArgs, GenerateCommand, GreedyArgs, SliceArgs, SquaresArgs,
    VerifyCommand,
};
use potato_core::axioms::{
    check_additivity_grids, check_axiom_c, check_axiom_t_prime, check_axiom_z,
    kissing_measure_grids,
};
use potato_core::dimension::{box_counting, rasterize_residual, DimensionEstimate};
use potato_core::disk::DiskFamily;
use potato_core::divergence::perimeter_partial_sums;
use potato_core::document::{PackingDocument, Provenance};
use potato_core::family::Family;
use potato_core::grid::{AmbientBox, GridSet};
use potato_core::packing::{
    generate_gasket, generate_greedy, generate_square_tiling, GasketConfig, GreedyConfig,
    TilingConfig,
};
use potato_core::slicing::{crossing_statistics, sample_lines, write_samples_csv};
use potato_core::certify::{tail_union_check, validate_hypotheses, Tolerances};
use potato_core::Error as CoreError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::path::Path;

pub fn run(command: Command) -> CliResult<Outcome> {
    match command {
        Command::Generate { kind } => match kind {
            GenerateCommand::Gasket(args) => generate_gasket_cmd(args),
            GenerateCommand::Greedy(args) => generate_greedy_cmd(args),
            GenerateCommand::Squares(args) => generate_squares_cmd(args),
        },
        Command::Verify { what } => match what {
            VerifyCommand::Hypotheses { input, report } => verify_hypotheses(&input, report),
            VerifyCommand::Divergence {
                input,
                expect,
                window,
                window_radius,
                csv,
                report,
            } => verify_divergence(&input, expect, window, window_radius, csv, report),
            VerifyCommand::Axioms {
                grid,
                trials,
                seed,
                report,
            } => verify_axioms(grid, trials, seed, report),
            VerifyCommand::Tailunion {
                input,
                max_m,
                report,
            } => verify_tailunion(&input, max_m, report),
        },
        Command::Slice(args) => slice_cmd(args),
        Command::Dimension(args) => dimension_cmd(args),
    }
}

fn load_document(path: &Path) -> CliResult<PackingDocument> {
    let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
    Ok(PackingDocument::from_json_str(&text)?)
}

fn load_disk_family(path: &Path) -> CliResult<DiskFamily> {
    let family = load_document(path)?.to_family()?;
    match family {
        Family::Disks(f) => Ok(f),
        Family::Grid(_) => Err(CoreError::ModelMismatch {
            expected: "disks",
            got: "grid",
        }
        .into()),
    }
}

fn write_document(document: &PackingDocument, path: &Path) -> CliResult<()> {
    std::fs::write(path, document.to_json_string()).map_err(CliError::io(path))
}

fn generate_gasket_cmd(args: GasketArgs) -> CliResult<Outcome> {
    let config = GasketConfig {
        seed_curvatures: [
            args.seed_curvatures[0],
            args.seed_curvatures[1],
            args.seed_curvatures[2],
        ],
        max_depth: args.depth,
        min_radius: args.min_radius,
        max_count: args.max_count,
    };
    let family = generate_gasket(&config)?;
    let document = PackingDocument::from_family(
        &Family::Disks(family),
        Provenance {
            generator: "gasket".into(),
            config: serde_json::to_value(&config).expect("serializable config"),
            rng_seed: None,
        },
    )?;
    write_document(&document, &args.out)?;
    println!("wrote {} circles to {}", document.sets.len(), args.out.display());
    Ok(Outcome::Pass)
}

fn generate_greedy_cmd(args: GreedyArgs) -> CliResult<Outcome> {
    let config = GreedyConfig {
        target_count: args.count,
        candidate_samples: args.samples,
        rng_seed: args.seed,
        min_radius: args.min_radius,
        ..GreedyConfig::default()
    };
    let family = generate_greedy(&config)?;
    let document = PackingDocument::from_family(
        &Family::Disks(family),
        Provenance {
            generator: "greedy".into(),
            config: serde_json::to_value(&config).expect("serializable config"),
            rng_seed: Some(args.seed),
        },
    )?;
    write_document(&document, &args.out)?;
    println!("wrote {} disks to {}", document.sets.len(), args.out.display());
    Ok(Outcome::Pass)
}

fn generate_squares_cmd(args: SquaresArgs) -> CliResult<Outcome> {
    let config = TilingConfig {
        levels: args.levels,
        resolution: args.resolution,
    };
    let family = generate_square_tiling(&config)?;
    let document = PackingDocument::from_family(
        &Family::Grid(family),
        Provenance {
            generator: "squares".into(),
            config: serde_json::to_value(&config).expect("serializable config"),
            rng_seed: None,
        },
    )?;
    write_document(&document, &args.out)?;
    println!("wrote {} tiles to {}", document.sets.len(), args.out.display());
    Ok(Outcome::Pass)
}

#[derive(Serialize)]
struct HypothesesRun {
    command: &'static str,
    input: String,
    tolerances: Tolerances,
    report: potato_core::certify::HypothesisReport,
}

fn verify_hypotheses(input: &Path, report_path: Option<std::path::PathBuf>) -> CliResult<Outcome> {
    let family = load_document(input)?.to_family()?;
    let tolerances = Tolerances::for_family(&family);
    let report = validate_hypotheses(&family, &tolerances)?;
    let admissible = report.admissible;
    let run = HypothesesRun {
        command: "verify hypotheses",
        input: input.display().to_string(),
        tolerances,
        report,
    };
    emit(&to_json(&run), report_path.as_deref())?;
    Ok(if admissible {
        Outcome::Pass
    } else {
        Outcome::CheckFailed
    })
}

#[derive(Serialize)]
struct DivergenceRun {
    command: &'static str,
    input: String,
    expect: Option<String>,
    window: Option<potato_core::disk::Window>,
    verdict: String,
    total_perimeter: f64,
    total_diameter_sum: f64,
    residual_measure: f64,
    generation_increments: Vec<(u32, f64)>,
    tail_ratios: Vec<f64>,
    fit: Option<potato_core::divergence::GrowthFit>,
}

/// Resolves the optional clipping window. The radius-only form centers the
/// window on the contact point of the two largest members, the natural
/// boundary-anchored choice.
fn resolve_window(
    family: &Family,
    window: Option<Vec<f64>>,
    window_radius: Option<f64>,
) -> CliResult<Option<potato_core::disk::Window>> {
    if window.is_none() && window_radius.is_none() {
        return Ok(None);
    }
    let Family::Disks(disks) = family else {
        return Err(CoreError::ModelMismatch {
            expected: "disks",
            got: "grid",
        }
        .into());
    };
    let spec = match (window, window_radius) {
        (Some(params), _) => potato_core::disk::Disk::new(params[0], params[1], params[2]),
        (None, Some(radius)) => {
            let center = disks.tangency_point_of_largest_pair().ok_or_else(|| {
                CoreError::InvalidConfig(
                    "window-radius needs at least two members to anchor the center".into(),
                )
            })?;
            potato_core::disk::Disk::new(center[0], center[1], radius)
        }
        (None, None) => unreachable!("guarded above"),
    };
    if spec.radius.is_nan() || spec.radius <= 0.0 {
        return Err(CoreError::InvalidConfig("window radius must be positive".into()).into());
    }
    Ok(Some(potato_core::disk::Window::Disk(spec)))
}

fn verify_divergence(
    input: &Path,
    expect: Option<crate::ExpectedVerdict>,
    window: Option<Vec<f64>>,
    window_radius: Option<f64>,
    csv: Option<std::path::PathBuf>,
    report_path: Option<std::path::PathBuf>,
) -> CliResult<Outcome> {
    let family = load_document(input)?.to_family()?;
    let clip = resolve_window(&family, window, window_radius)?;
    let tolerances = Tolerances::for_family(&family);
    let report = perimeter_partial_sums(&family, clip.as_ref(), &tolerances)?;
    if let Some(csv_path) = &csv {
        let mut buffer = Vec::new();
        report.write_csv(&mut buffer).expect("in-memory write");
        std::fs::write(csv_path, buffer).map_err(CliError::io(csv_path))?;
    }
    let run = DivergenceRun {
        command: "verify divergence",
        input: input.display().to_string(),
        expect: expect.map(|e| format!("{e:?}").to_lowercase()),
        window: clip,
        verdict: report.verdict.to_string(),
        total_perimeter: report.total_perimeter,
        total_diameter_sum: report.total_diameter_sum,
        residual_measure: report.residual_measure,
        generation_increments: report.generation_increments.clone(),
        tail_ratios: report.tail_ratios.clone(),
        fit: report.fit,
    };
    emit(&to_json(&run), report_path.as_deref())?;
    Ok(match expect {
        Some(expected) if !expected.matches(report.verdict) => Outcome::CheckFailed,
        _ => Outcome::Pass,
    })
}

#[derive(Serialize)]
struct AxiomSuiteReport {
    command: &'static str,
    grid: usize,
    trials: usize,
    seed: u64,
    empty_set_failures: usize,
    complement_failures: usize,
    null_invariance_failures: usize,
    truncation_failures: usize,
    additivity_failures: usize,
    elapsed_seconds: f64,
}

/// Random grid suite: complement symmetry, null-difference invariance,
/// truncation stability on nested pairs, and the additivity defect
/// identity, all in exact integer face arithmetic.
fn verify_axioms(
    grid: usize,
    trials: usize,
    seed: u64,
    report_path: Option<std::path::PathBuf>,
) -> CliResult<Outcome> {
    if !(2..=4096).contains(&grid) {
        return Err(CoreError::InvalidConfig(format!(
            "grid resolution {grid} out of range [2, 4096]"
        ))
        .into());
    }
    let started = std::time::Instant::now();
    let ambient = AmbientBox::unit_square(grid);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = AxiomSuiteReport {
        command: "verify axioms",
        grid,
        trials,
        seed,
        empty_set_failures: 0,
        complement_failures: 0,
        null_invariance_failures: 0,
        truncation_failures: 0,
        additivity_failures: 0,
        elapsed_seconds: 0.0,
    };
    if GridSet::empty(ambient.clone()).perimeter() != 0.0 {
        report.empty_set_failures += 1;
    }
    for _ in 0..trials {
        let density = rng.gen_range(0.05..0.95);
        let a = GridSet::random(ambient.clone(), &mut rng, density);
        let mask_density = rng.gen_range(0.05..0.95);
        let mask = GridSet::random(ambient.clone(), &mut rng, mask_density);

        if !check_axiom_c(&a) {
            report.complement_failures += 1;
        }
        if !check_axiom_z(&a, &a.clone())? {
            report.null_invariance_failures += 1;
        }
        let nested = a.intersection(&mask)?;
        if !check_axiom_t_prime(&a, &nested)? {
            report.truncation_failures += 1;
        }
        let disjoint = mask.difference(&a)?;
        let additivity = check_additivity_grids(&a, &disjoint)?;
        let kissing = kissing_measure_grids(&a, &disjoint)?;
        if additivity.defect != 2.0 * kissing.value
            || additivity.additive != (kissing.value == 0.0)
        {
            report.additivity_failures += 1;
        }
    }
    report.elapsed_seconds = started.elapsed().as_secs_f64();
    let failures = report.empty_set_failures
        + report.complement_failures
        + report.null_invariance_failures
        + report.truncation_failures
        + report.additivity_failures;
    emit(&to_json(&report), report_path.as_deref())?;
    Ok(if failures == 0 {
        Outcome::Pass
    } else {
        Outcome::CheckFailed
    })
}

#[derive(Serialize)]
struct TailUnionReport {
    command: &'static str,
    input: String,
    max_m: usize,
    pairs_checked: usize,
    violations: usize,
    /// Largest positive excess `(lhs - rhs) / rhs` seen.
    max_relative_excess: f64,
    /// Largest `|lhs - rhs| / rhs` seen (equality defect).
    max_relative_gap: f64,
    /// Blocks with `lhs < rhs` beyond tolerance (positive kissing).
    strict_inequalities: usize,
}

fn verify_tailunion(
    input: &Path,
    max_m: Option<usize>,
    report_path: Option<std::path::PathBuf>,
) -> CliResult<Outcome> {
    let family = load_document(input)?.to_family()?;
    if family.is_empty() {
        return Err(CoreError::EmptyFamily.into());
    }
    let cap = max_m.unwrap_or(100).min(family.len());
    let mut report = TailUnionReport {
        command: "verify tailunion",
        input: input.display().to_string(),
        max_m: cap,
        pairs_checked: 0,
        violations: 0,
        max_relative_excess: 0.0,
        max_relative_gap: 0.0,
        strict_inequalities: 0,
    };
    for n in 0..cap {
        for m in (n + 1)..=cap {
            let check = tail_union_check(&family, n, m)?;
            report.pairs_checked += 1;
            if !check.holds {
                report.violations += 1;
            }
            let scale = check.rhs.max(1e-300);
            report.max_relative_excess = report
                .max_relative_excess
                .max((check.lhs - check.rhs) / scale);
            report.max_relative_gap = report
                .max_relative_gap
                .max((check.lhs - check.rhs).abs() / scale);
            if check.rhs - check.lhs > 1e-9 * scale {
                report.strict_inequalities += 1;
            }
        }
    }
    let pass = report.violations == 0;
    emit(&to_json(&report), report_path.as_deref())?;
    Ok(if pass { Outcome::Pass } else { Outcome::CheckFailed })
}

#[derive(Serialize)]
struct SliceRun {
    command: &'static str,
    input: String,
    lines: usize,
    seed: u64,
    angle: Option<f64>,
    mean_crossings: f64,
    analytic_mean: f64,
    std_error: f64,
    within_three_sigma: bool,
    all_non_tangent_even: bool,
    mean_sets_met: f64,
}

fn slice_cmd(args: SliceArgs) -> CliResult<Outcome> {
    let mut family = load_disk_family(&args.input)?;
    if let Some(angle) = args.angle {
        // Rotating the family by the negated angle and slicing horizontally
        // realizes slicing in the rotated direction.
        family = potato_core::slicing::rotated_family(&family, -angle)?;
    }
    let stats = crossing_statistics(&family, args.lines, args.seed)?;
    if let Some(csv_path) = &args.out {
        let samples = sample_lines(&family, args.lines, args.seed)?;
        let mut buffer = Vec::new();
        write_samples_csv(&samples, &mut buffer).expect("in-memory write");
        std::fs::write(csv_path, buffer).map_err(CliError::io(csv_path))?;
    }
    let within =
        (stats.mean_crossings - stats.analytic_mean).abs() <= 3.0 * stats.std_error.max(1e-300);
    let run = SliceRun {
        command: "slice",
        input: args.input.display().to_string(),
        lines: args.lines,
        seed: args.seed,
        angle: args.angle,
        mean_crossings: stats.mean_crossings,
        analytic_mean: stats.analytic_mean,
        std_error: stats.std_error,
        within_three_sigma: within,
        all_non_tangent_even: stats.all_non_tangent_even,
        mean_sets_met: stats.mean_sets_met,
    };
    emit(&to_json(&run), args.report.as_deref())?;
    Ok(if within && stats.all_non_tangent_even {
        Outcome::Pass
    } else {
        Outcome::CheckFailed
    })
}

fn parse_scales(spec: &str) -> CliResult<Vec<u32>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let parse = |s: &str| {
        s.parse::<u32>().map_err(|_| {
            CliError::Core(CoreError::InvalidConfig(format!(
                "invalid scale range '{spec}': expected 'lo:hi'"
            )))
        })
    };
    match parts.as_slice() {
        [lo, hi] => {
            let (lo, hi) = (parse(lo)?, parse(hi)?);
            if lo > hi {
                return Err(CoreError::InvalidConfig(format!(
                    "invalid scale range '{spec}': lo must not exceed hi"
                ))
                .into());
            }
            Ok((lo..=hi).collect())
        }
        _ => Err(CoreError::InvalidConfig(format!(
            "invalid scale range '{spec}': expected 'lo:hi'"
        ))
        .into()),
    }
}

#[derive(Serialize)]
struct DimensionRun {
    command: &'static str,
    input: String,
    resolution: usize,
    conservative: bool,
    scales: Vec<f64>,
    counts: Vec<u64>,
    slope: f64,
    r_squared: f64,
    std_error: f64,
    residual_cells: usize,
}

fn dimension_cmd(args: DimensionArgs) -> CliResult<Outcome> {
    let family = load_disk_family(&args.input)?;
    let exponents = parse_scales(&args.scales)?;
    let residual = rasterize_residual(&family, args.resolution, args.conservative)?;
    let estimate: DimensionEstimate = box_counting(&residual, &exponents)?;
    if let Some(csv_path) = &args.out {
        let mut buffer = Vec::new();
        estimate.write_csv(&mut buffer).expect("in-memory write");
        std::fs::write(csv_path, buffer).map_err(CliError::io(csv_path))?;
    }
    let run = DimensionRun {
        command: "dimension",
        input: args.input.display().to_string(),
        resolution: args.resolution,
        conservative: args.conservative,
        scales: estimate.scales.clone(),
        counts: estimate.counts.clone(),
        slope: estimate.slope,
        r_squared: estimate.r_squared,
        std_error: estimate.std_error,
        residual_cells: residual.cell_count(),
    };
    emit(&to_json(&run), args.report.as_deref())?;
    Ok(Outcome::Pass)
}
