//! The five subcommand implementations.
//!
//! Each command follows the same shape: read and digest the input file,
//! delegate to the library, render a payload, and emit payload + manifest.
//! Nothing here draws randomness outside the seeded [`RandomSource`], so a
//! payload is determined by the command line and the input bytes alone.

use std::fs;
use std::path::Path;

use discrepancy::coloring::{full_color_with_base, parse_set_system};
use discrepancy::containment::check_containment;
use discrepancy::gaussian::{estimate_gaussian_measure_sharded, estimate_mean_width};
use discrepancy::geometry::parse_body;
use discrepancy::partial::{partial_coloring, LpColoringConfig};
use discrepancy::walk::{derive_constants, walk_with_trace, WalkConfig};
use discrepancy::RandomSource;

use crate::manifest::Manifest;
use crate::report::{joined, sign_string, Report};
use crate::{CliError, Command, Profile, Quantity};

/// Shard count for the measure estimator. Fixed (rather than derived from
/// `--threads`) so the estimate depends only on seed and sample count;
/// threads merely decide how many shards run concurrently.
const MEASURE_SHARDS: usize = 8;

pub fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Color {
            input,
            c0,
            n_stop,
            delta,
            seed,
            out,
        } => color(&input, c0, n_stop, delta, seed, out.as_deref()),
        Command::Partial {
            input,
            delta,
            seed,
            out,
        } => partial(&input, delta, seed, out.as_deref()),
        Command::Walk {
            input,
            alpha,
            profile,
            seed,
            out,
        } => walk(&input, alpha, profile, seed, out.as_deref()),
        Command::ContainCheck {
            input,
            delta,
            samples,
            seed,
            out,
        } => contain_check(&input, delta, samples, seed, out.as_deref()),
        Command::Estimate {
            input,
            quantity,
            samples,
            threads,
            seed,
            out,
        } => estimate(&input, quantity, samples, threads, seed, out.as_deref()),
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|err| CliError::Usage(format!("{}: {err}", path.display())))
}

/// Writes the payload and manifest: to `OUT` and `OUT.manifest` when an
/// output path is given, otherwise payload → stdout and manifest → stderr.
fn emit(out: Option<&Path>, payload: String, manifest: Manifest) -> Result<(), CliError> {
    let manifest_text = manifest.render();
    match out {
        Some(path) => {
            let write = |p: &Path, text: &str| {
                fs::write(p, text).map_err(|err| CliError::Usage(format!("{}: {err}", p.display())))
            };
            write(path, &payload)?;
            let mut manifest_path = path.as_os_str().to_owned();
            manifest_path.push(".manifest");
            write(Path::new(&manifest_path), &manifest_text)?;
        }
        None => {
            print!("{payload}");
            eprint!("{manifest_text}");
        }
    }
    Ok(())
}

fn color(
    input: &Path,
    c0: f64,
    n_stop: usize,
    delta: f64,
    seed: u64,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let mut manifest = Manifest::new("color", seed);
    manifest.param("c0", c0);
    manifest.param("n_stop", n_stop);
    manifest.param("delta", delta);
    let text = read_input(input)?;
    manifest.input(input, &text);

    let system = parse_set_system(&text)?;
    let config = LpColoringConfig {
        min_tight_fraction: delta,
        ..LpColoringConfig::default()
    };
    let (coloring, report) =
        full_color_with_base(&system, c0, &config, n_stop, &RandomSource::new(seed))?;

    let mut doc = Report::new();
    doc.section("coloring");
    doc.kv("n", system.n());
    doc.kv("m", system.sets().len());
    doc.kv("discrepancy", report.discrepancy());
    doc.kv("claimed_bound", report.claimed_bound);
    doc.kv("signs", sign_string(&coloring.signs));
    doc.section("levels");
    doc.kv("count", report.levels.len());
    for (k, level) in report.levels.iter().enumerate() {
        doc.kv(format_args!("level.{k}.uncolored"), level.uncolored);
        doc.kv(format_args!("level.{k}.strip_bound"), level.strip_bound);
        doc.kv(format_args!("level.{k}.tight_count"), level.tight_count);
    }
    doc.section("rounding");
    doc.kv("count", coloring.rounding_log.len());
    for (k, (index, value)) in coloring.rounding_log.iter().enumerate() {
        doc.kv(format_args!("round.{k}.index"), index);
        doc.kv(format_args!("round.{k}.value"), value);
    }
    doc.section("sets");
    for (j, d) in report.set_discrepancies.iter().enumerate() {
        doc.kv(format_args!("set.{j}.discrepancy"), d);
    }
    emit(out, doc.render(), manifest)
}

fn partial(input: &Path, delta: f64, seed: u64, out: Option<&Path>) -> Result<(), CliError> {
    let mut manifest = Manifest::new("partial", seed);
    manifest.param("delta", delta);
    let text = read_input(input)?;
    manifest.input(input, &text);

    let body = parse_body(&text)?;
    let config = LpColoringConfig {
        min_tight_fraction: delta,
        ..LpColoringConfig::default()
    };
    let result = partial_coloring(&body, &config, &RandomSource::new(seed))?;

    let mut doc = Report::new();
    doc.section("partial");
    doc.kv("dim", body.dim());
    doc.kv("level", result.level);
    doc.kv("tight_count", result.fixed_count());
    doc.kv(
        "tight_fraction",
        result.fixed_count() as f64 / body.dim() as f64,
    );
    doc.kv("tight_set", joined(result.fixed_set.iter()));
    doc.kv("point", joined(result.point.iter()));
    emit(out, doc.render(), manifest)
}

fn walk(
    input: &Path,
    alpha: f64,
    profile: Profile,
    seed: u64,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let mut manifest = Manifest::new("walk", seed);
    manifest.param("alpha", alpha);
    manifest.param("profile", profile.name());
    let text = read_input(input)?;
    manifest.input(input, &text);

    let body = parse_body(&text)?;
    let config = match profile {
        Profile::Practical => WalkConfig::practical(alpha, body.dim())?,
        Profile::Rigorous => derive_constants(alpha, body.dim())?,
    };
    let (coloring, trace) = walk_with_trace(&body, &config, &RandomSource::new(seed))?;

    let mut doc = Report::new();
    doc.section("walk");
    doc.kv("dim", body.dim());
    doc.kv("alpha", config.alpha);
    doc.kv("profile", profile.name());
    doc.kv("epsilon", config.epsilon);
    doc.kv("tau", config.tau);
    doc.kv("eta", config.eta);
    doc.kv("delta_steps", config.delta_steps);
    doc.kv("fixed_count", coloring.fixed_count());
    doc.kv(
        "fixed",
        joined(
            coloring
                .fixed_signs()
                .into_iter()
                .map(|(i, sign)| format!("{i}:{sign:+}")),
        ),
    );
    doc.kv("point", joined(coloring.point.iter()));
    doc.section("steps");
    doc.kv("count", trace.len());
    for step in &trace {
        let k = step.step;
        doc.kv(format_args!("step.{k}.coordinate"), step.coordinate);
        doc.kv(format_args!("step.{k}.sign"), step.sign);
        doc.kv(format_args!("step.{k}.mean"), step.mean);
        doc.kv(format_args!("step.{k}.variance"), step.variance);
        doc.kv(format_args!("step.{k}.plus_fraction"), step.plus_fraction);
        doc.kv(format_args!("step.{k}.minus_fraction"), step.minus_fraction);
    }
    emit(out, doc.render(), manifest)
}

fn contain_check(
    input: &Path,
    delta: f64,
    samples: usize,
    seed: u64,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let mut manifest = Manifest::new("contain-check", seed);
    manifest.param("delta", delta);
    manifest.param("samples", samples);
    let text = read_input(input)?;
    manifest.input(input, &text);

    let body = parse_body(&text)?;
    let report = check_containment(&body, delta, samples, &RandomSource::new(seed))?;

    let mut doc = Report::new();
    doc.section("containment");
    doc.kv("dim", body.dim());
    doc.kv("delta", delta);
    doc.kv("samples", samples);
    doc.kv("sign_norm_sq", report.sign_norm_sq.estimate);
    doc.kv("sign_norm_sq_std_error", report.sign_norm_sq.std_error);
    doc.kv("gaussian_norm_sq", report.gaussian_norm_sq.estimate);
    doc.kv(
        "gaussian_norm_sq_std_error",
        report.gaussian_norm_sq.std_error,
    );
    doc.kv("inscribed_radius", report.inscribed_radius);
    doc.kv("scale", report.scale);
    doc.kv("measure", report.measure.estimate);
    doc.kv("measure_half_width", report.measure.half_width);
    doc.kv("containment", report.containment.estimate);
    doc.kv("containment_half_width", report.containment.half_width);
    doc.kv("passes", report.passes);
    emit(out, doc.render(), manifest)
}

fn estimate(
    input: &Path,
    quantity: Quantity,
    samples: usize,
    threads: usize,
    seed: u64,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let mut manifest = Manifest::new("estimate", seed);
    manifest.param("quantity", quantity.name());
    manifest.param("samples", samples);
    manifest.param("threads", threads);
    let text = read_input(input)?;
    manifest.input(input, &text);

    let body = parse_body(&text)?;
    let source = RandomSource::new(seed);
    let mut doc = Report::new();
    doc.section("estimate");
    doc.kv("quantity", quantity.name());
    doc.kv("dim", body.dim());
    match quantity {
        Quantity::Measure => {
            let est = estimate_gaussian_measure_sharded(
                &body,
                samples,
                &source,
                MEASURE_SHARDS,
                threads.max(1),
            )?;
            doc.kv("samples", est.sample_count);
            doc.kv("estimate", est.estimate);
            doc.kv("half_width", est.half_width);
        }
        Quantity::Width => {
            let est = estimate_mean_width(&body, samples, &source)?;
            doc.kv("samples", est.sample_count);
            doc.kv("estimate", est.estimate);
            doc.kv("std_error", est.std_error);
        }
    }
    emit(out, doc.render(), manifest)
}
