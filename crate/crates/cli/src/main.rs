//! `flatspan`: experiment driver for spanned flats and bichromatic incidences.

mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use flatspan::constructions::{
    bichromatic_lower_construction, erdos_grid_2d, purdy_counterexample, theta_mk_construction,
    BichromaticParams, PlantKind,
};
use flatspan::experiments::{
    beck3, conjecture_measurements, conjecture_search, envelope_sweep, verify_purdy, Beck3Config,
    ConjectureConfig, EnvelopeSweepConfig, PointDistribution, SweepConstruction, SCHEMA_VERSION,
};
use flatspan::fit::fit_loglog;
use flatspan::incidence::BiArrangementFile;
use flatspan::io::{format_points, parse_points, read_points, Provenance};
use flatspan::kernel::parse_rational;
use flatspan::{
    bound_envelope, count_bichromatic, spanned_flats, validate_vertices, BiArrangement,
};
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

use output::{CliResult, Failure, Format, Sink};

#[derive(Parser, Debug)]
#[command(name = "flatspan", version, about)]
struct Cli {
    /// Output format for tables and records.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Base seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (0 = all cores). Output does not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Spanned f-flats of a point-set file; prints the count.
    Enumerate {
        file: PathBuf,
        #[arg(short, long)]
        f: usize,
    },
    /// Bichromatic incidence count for an arrangement JSON file.
    Incidences { file: PathBuf },
    /// Build an extremal configuration.
    Construct {
        #[command(subcommand)]
        which: Construct,
    },
    /// Closed-form counts against enumeration on generated configurations.
    VerifyPurdy {
        /// Dimensions, e.g. `4`, `4,5` or `4..5` (inclusive).
        #[arg(short, long, default_value = "4")]
        d: String,
        #[arg(short, long, default_value = "2..4")]
        k: String,
    },
    /// Log-log least-squares slope of a series file of `x,count` lines.
    Fit { file: PathBuf },
    /// Measured red incidences against the three-term envelope along a ladder.
    EnvelopeSweep(SweepArgs),
    /// Spanned planes of planted 3-dimensional instances.
    Beck3(Beck3Args),
    /// Ratio statistics for random point sets that are not d-degenerate.
    ConjectureSearch(ConjectureArgs),
}

#[derive(Subcommand, Debug)]
enum Construct {
    Erdos2d {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        s: u32,
    },
    Bichromatic {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: u64,
        #[arg(long, default_value_t = 1)]
        c0: u64,
    },
    Thetamk {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: u64,
    },
    Purdy {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, default_value = "bichromatic")]
    construction: String,
    #[arg(long, default_value_t = 3)]
    d: usize,
    /// Explicit n ladder (strictly increasing); overrides --n0/--steps.
    #[arg(long)]
    ns: Option<String>,
    #[arg(long, default_value_t = 8)]
    n0: usize,
    /// Number of ladder values; n doubles at each step.
    #[arg(long, default_value_t = 4)]
    steps: usize,
    /// k as a fraction of n.
    #[arg(long, default_value = "1/2")]
    k_ratio: String,
    /// Planar vertices p as a fraction of k (bichromatic only).
    #[arg(long, default_value = "1")]
    p_ratio: String,
}

#[derive(Args, Debug)]
struct Beck3Args {
    #[arg(long, default_value = "20,30,40")]
    n: String,
    #[arg(long, default_value = "3,5,7")]
    k: String,
    /// Replicates per (n, k) cell.
    #[arg(long, default_value_t = 5)]
    seeds: usize,
    /// `plane` or `skew-lines`.
    #[arg(long, default_value = "plane")]
    kind: String,
    /// Regenerations allowed when a planted instance fails the hypothesis.
    #[arg(long, default_value_t = 8)]
    retries: usize,
}

#[derive(Args, Debug)]
struct ConjectureArgs {
    #[arg(long, default_value_t = 3)]
    d: usize,
    #[arg(long, default_value_t = 8)]
    n: usize,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Rows with a ratio below this are flagged.
    #[arg(long, default_value_t = 0.01)]
    floor: f64,
    /// Sample integer points from `[0, side)^d` instead of small rationals.
    #[arg(long)]
    grid: Option<i64>,
    /// Measure this point-set file instead of sampling.
    #[arg(long)]
    input: Option<PathBuf>,
}

fn parse_list(s: &str) -> CliResult<Vec<usize>> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let num = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Failure::input(format!("bad number `{t}` in `{s}`")))
        };
        match part.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
                if a > b {
                    return Err(Failure::input(format!("empty range `{part}`")));
                }
                out.extend(a..=b);
            }
            None => out.push(num(part)?),
        }
    }
    if out.is_empty() {
        return Err(Failure::input(format!("empty list `{s}`")));
    }
    Ok(out)
}

fn parse_fraction(s: &str) -> CliResult<(usize, usize)> {
    let r = parse_rational(s)?;
    match (r.numer().to_usize(), r.denom().to_usize()) {
        (Some(n), Some(d)) if n > 0 => Ok((n, d)),
        _ => Err(Failure::input(format!("`{s}` must be a positive fraction"))),
    }
}

fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn params<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).unwrap_or(Value::Null)
}

fn enumerate(sink: &Sink, file: &Path, f: usize) -> CliResult {
    let points = parse_points(&read_text(file)?)?;
    let set = spanned_flats(&points, f)?;
    let export = set.to_export();
    if let Some(path) = &sink.out {
        let text = match sink.format {
            Format::Json => {
                let mut doc = serde_json::to_value(&export)?;
                if let Value::Object(map) = &mut doc {
                    map.insert("schema_version".into(), json!(SCHEMA_VERSION));
                }
                serde_json::to_string_pretty(&doc)? + "\n"
            }
            Format::Csv => {
                #[derive(Serialize)]
                struct Row {
                    index: usize,
                    point_indices: String,
                    constraints: String,
                }
                let rows: Vec<Row> = export
                    .flats
                    .iter()
                    .enumerate()
                    .map(|(index, s)| Row {
                        index,
                        point_indices: s
                            .point_indices
                            .iter()
                            .map(usize::to_string)
                            .collect::<Vec<_>>()
                            .join(" "),
                        constraints: s.constraints.join(";"),
                    })
                    .collect();
                output::csv_rows(&rows)?
            }
        };
        std::fs::write(path, text)
            .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    }
    println!("{}", set.count());
    Ok(())
}

#[derive(Serialize)]
struct IncidenceRecord {
    d: usize,
    k: usize,
    n: usize,
    m: usize,
    red_incidences: u64,
    total_incidences: u64,
    red_incident_vertex_count: usize,
    all_vertices: bool,
    all_red_incident: bool,
    mixed_term: Option<f64>,
    kn_term: Option<f64>,
    linear_term: Option<f64>,
    envelope: Option<f64>,
    ratio: Option<f64>,
}

fn incidences(sink: &Sink, file: &Path) -> CliResult {
    let text = read_text(file)?;
    let parsed: BiArrangementFile = serde_json::from_str(&text)
        .map_err(|e| Failure::input(format!("{}: {e}", file.display())))?;
    let a = BiArrangement::from_file(&parsed)?;
    let validation = validate_vertices(&a);
    let report = count_bichromatic(&a)?;
    let envelope = bound_envelope(a.m() as u64, a.k() as u64, a.n() as u64, a.d()).ok();
    let record = IncidenceRecord {
        d: a.d(),
        k: a.k(),
        n: a.n(),
        m: a.m(),
        red_incidences: report.red_incidences,
        total_incidences: report.total_incidences,
        red_incident_vertex_count: report.red_incident_vertex_count,
        all_vertices: validation.all_vertices,
        all_red_incident: validation.all_red_incident,
        mixed_term: envelope.map(|e| e.mixed),
        kn_term: envelope.map(|e| e.kn),
        linear_term: envelope.map(|e| e.linear),
        envelope: envelope.map(|e| e.sum),
        ratio: envelope.map(|e| report.red_incidences as f64 / e.sum),
    };
    let provenance = Provenance::new("incidences", None, json!({ "file": file }));
    sink.record(&provenance, &record)
}

fn arrangement_payload(
    provenance: &Provenance,
    summary: Value,
    a: &BiArrangement,
) -> CliResult<String> {
    let mut doc = serde_json::to_value(a.to_file())?;
    if let Value::Object(map) = &mut doc {
        map.insert("schema_version".into(), json!(provenance.schema_version));
        map.insert("provenance".into(), serde_json::to_value(provenance)?);
        map.insert("summary".into(), summary);
    }
    Ok(serde_json::to_string_pretty(&doc)? + "\n")
}

/// Payload to `--out` with the summary on stdout, or everything on stdout.
fn emit_construction(sink: &Sink, payload: &str, summary: &Value) -> CliResult {
    sink.write(payload)?;
    if sink.out.is_some() {
        println!("{}", serde_json::to_string(summary)?);
    }
    Ok(())
}

fn construct(sink: &Sink, seed: u64, which: &Construct) -> CliResult {
    match *which {
        Construct::Erdos2d { r, s } => {
            let g = erdos_grid_2d(r, s)?;
            let summary = json!({
                "construction": "erdos2d", "r": r, "s": s, "lines": g.lines.len(),
                "vertices": g.vertices.len(), "incidences": g.incidences,
            });
            let p = Provenance::new("construct erdos2d", None, json!({ "r": r, "s": s }));
            emit_construction(
                sink,
                &arrangement_payload(&p, summary.clone(), &g.to_arrangement())?,
                &summary,
            )
        }
        Construct::Bichromatic { d, n, k, m, c0 } => {
            let c = bichromatic_lower_construction(&BichromaticParams { d, n, k, m, c0 })?;
            let a = &c.arrangement;
            let summary = json!({
                "construction": "bichromatic", "d": d, "n": a.n(), "k": a.k(), "m": a.m(),
                "requested_m": m, "c0": c0, "p": c.p, "family_size": c.family_size,
                "planar_incidences": c.planar_incidences,
                "expected_red_incidences": c.expected_red_incidences,
            });
            let p = Provenance::new(
                "construct bichromatic",
                None,
                json!({ "d": d, "n": n, "k": k, "m": m, "c0": c0 }),
            );
            emit_construction(
                sink,
                &arrangement_payload(&p, summary.clone(), a)?,
                &summary,
            )
        }
        Construct::Thetamk { d, n, k, m } => {
            let c = theta_mk_construction(d, n, k, m)?;
            let a = &c.arrangement;
            let summary = json!({
                "construction": "thetamk", "d": d, "n": a.n(), "k": a.k(), "m": a.m(),
                "p": c.p, "bundle_size": c.bundle_size, "red_indices": c.red_indices,
                "expected_red_incidences": c.expected_red_incidences,
            });
            let p = Provenance::new(
                "construct thetamk",
                None,
                json!({ "d": d, "n": n, "k": k, "m": m }),
            );
            emit_construction(
                sink,
                &arrangement_payload(&p, summary.clone(), a)?,
                &summary,
            )
        }
        Construct::Purdy { d, k } => {
            let c = purdy_counterexample(d, k, seed)?;
            let summary = json!({
                "construction": "purdy", "d": d, "k": k, "n": c.points.len(),
                "seed": seed, "attempts": c.attempts,
            });
            let p = Provenance::new("construct purdy", Some(seed), json!({ "d": d, "k": k }));
            let mut text = p.csv_header();
            for (i, line) in c.lines.iter().enumerate() {
                text.push_str(&format!(
                    "# line {i}: {}\n",
                    line.constraint_strings().join(" ; ")
                ));
            }
            text.push_str(&format_points(&c.points));
            emit_construction(sink, &text, &summary)
        }
    }
}

fn verify(sink: &Sink, seed: u64, d: &str, k: &str) -> CliResult {
    let ds = parse_list(d)?;
    let ks = parse_list(k)?;
    let rows = verify_purdy(&ds, &ks, seed)?;
    let mismatches = rows.iter().filter(|r| !r.ok()).count();
    let provenance = Provenance::new("verify-purdy", Some(seed), json!({ "d": ds, "k": ks }));
    sink.table(
        &provenance,
        &rows,
        json!({ "cells": rows.len(), "mismatches": mismatches,
                "all_g_exceeds_h": rows.iter().all(|r| r.g_exceeds_h) }),
    )?;
    if mismatches > 0 {
        return Err(Failure::mismatch(format!(
            "{mismatches} cell(s) did not match"
        )));
    }
    Ok(())
}

fn fit(sink: &Sink, file: &Path) -> CliResult {
    let text = read_text(file)?;
    let mut series = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .collect();
        let value = |t: &str| {
            parse_rational(t)
                .ok()
                .and_then(|r| r.to_f64())
                .ok_or_else(|| Failure::input(format!("line {}: bad number `{t}`", lineno + 1)))
        };
        if fields.len() != 2 {
            return Err(Failure::input(format!(
                "line {}: expected `x,count`, found {} fields",
                lineno + 1,
                fields.len()
            )));
        }
        series.push((value(fields[0])?, value(fields[1])?));
    }
    let result = fit_loglog(&series)?;
    let provenance = Provenance::new("fit", None, json!({ "file": file }));
    sink.record(&provenance, &result)
}

fn sweep(sink: &Sink, args: &SweepArgs) -> CliResult {
    let construction: SweepConstruction = args.construction.parse()?;
    let n_ladder = match &args.ns {
        Some(list) => parse_list(list)?,
        None => (0..args.steps).map(|i| args.n0 << i).collect(),
    };
    let (k_num, k_den) = parse_fraction(&args.k_ratio)?;
    let (p_num, p_den) = parse_fraction(&args.p_ratio)?;
    let config = EnvelopeSweepConfig {
        construction,
        d: args.d,
        n_ladder,
        k_num,
        k_den,
        p_num,
        p_den,
    };
    let result = envelope_sweep(&config)?;
    let provenance = Provenance::new("envelope-sweep", None, params(&config));
    sink.table(
        &provenance,
        &result.rows,
        json!({ "min_ratio": result.min_ratio, "max_ratio": result.max_ratio,
                "skipped": result.rows.iter().filter(|r| !r.warning.is_empty()).count() }),
    )
}

fn run_beck3(sink: &Sink, seed: u64, args: &Beck3Args) -> CliResult {
    let kind: PlantKind = args.kind.parse()?;
    let config = Beck3Config {
        ns: parse_list(&args.n)?,
        ks: parse_list(&args.k)?,
        seeds_per_cell: args.seeds,
        base_seed: seed,
        kind,
        max_retries: args.retries,
    };
    let report = beck3(&config)?;
    let provenance = Provenance::new("beck3", Some(seed), params(&config));
    sink.table(
        &provenance,
        &report.rows,
        json!({ "min_ratio": report.min_ratio, "median_ratio": report.median_ratio,
                "max_ratio": report.max_ratio, "all_hypotheses_hold": report.all_hypotheses_hold }),
    )?;
    if !report.all_hypotheses_hold {
        return Err(Failure::mismatch(
            "some planted instances never met the hypothesis",
        ));
    }
    Ok(())
}

fn conjecture(sink: &Sink, seed: u64, args: &ConjectureArgs) -> CliResult {
    if let Some(file) = &args.input {
        let points = read_points(file)?;
        let row = conjecture_measurements(&points, args.floor)?;
        let provenance = Provenance::new(
            "conjecture-search",
            None,
            json!({ "input": file, "floor": args.floor }),
        );
        return sink.record(&provenance, &row);
    }
    let config = ConjectureConfig {
        d: args.d,
        n: args.n,
        samples: args.samples,
        seed,
        distribution: match args.grid {
            Some(side) => PointDistribution::Grid { side },
            None => PointDistribution::UniformRational,
        },
        floor: args.floor,
    };
    let report = conjecture_search(&config)?;
    let provenance = Provenance::new("conjecture-search", Some(seed), params(&config));
    sink.table(
        &provenance,
        &report.rows,
        json!({
            "kept": report.kept, "filtered_degenerate": report.filtered_degenerate,
            "flagged": report.flagged,
            "conj1_min": report.conj1_min, "conj1_median": report.conj1_median,
            "conj2_min": report.conj2_min, "conj2_median": report.conj2_median,
        }),
    )
}

fn run(cli: &Cli) -> CliResult {
    let sink = Sink {
        format: cli.format,
        out: cli.out.clone(),
    };
    match &cli.command {
        Command::Enumerate { file, f } => enumerate(&sink, file, *f),
        Command::Incidences { file } => incidences(&sink, file),
        Command::Construct { which } => construct(&sink, cli.seed, which),
        Command::VerifyPurdy { d, k } => verify(&sink, cli.seed, d, k),
        Command::Fit { file } => fit(&sink, file),
        Command::EnvelopeSweep(args) => sweep(&sink, args),
        Command::Beck3(args) => run_beck3(&sink, cli.seed, args),
        Command::ConjectureSearch(args) => conjecture(&sink, cli.seed, args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build()
    {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match pool.install(|| run(&cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
