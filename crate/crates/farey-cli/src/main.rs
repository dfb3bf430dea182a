//! Command-line front end: continued fractions, runs, tessellations,
//! prismatic diagrams, sails, frieze patterns and the acceptance checks.
//!
//! Results go to stdout as JSON, summaries to stderr. Exit codes: 0 success,
//! 1 usage error, 2 computation error, 3 failed acceptance check.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use farey::frieze::{
    boundary_triangles, frieze_pattern, ptolemy_constant, ptolemy_scan, BoundaryTriangle, Chirality,
};
use farey::meester::{meester, to_farey_form, ParsedCf};
use farey::prismatic::{describe, diagram_of_cf, PrismaticDiagram};
use farey::reconstruct::{nose_stretch, word_of_farey_form, word_to_string, NoseProgram};
use farey::sails::{lls_sequence, lls_to_svg, DEFAULT_UNIT_BUDGET};
use farey::tessellation::{farey_summation_run_int, tessellate};
use farey::{FareyCF, FareyError, IntVec};
use num_bigint::BigInt;
use serde_json::json;

/// Farey summation continued fractions.
#[derive(Parser, Debug)]
#[command(name = "farey", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Meester continued fraction and Farey form of an integer vector such as 5,7,8.
    Cf {
        /// The vector, optionally in parentheses.
        vector: String,
        /// Step limit for the algorithm.
        #[arg(long, default_value_t = 1_000_000)]
        max_steps: usize,
    },
    /// Nose stretching chain and pennant of a continued fraction.
    Reconstruct {
        /// Meester form such as "[1;1:2 |_2 1]" or Farey form such as "[1;1:2:0:0 | 1]".
        cf: String,
    },
    /// Geometric Farey summation run of an integer vector.
    Run {
        /// The vector.
        vector: String,
        /// Budget of unit steps.
        #[arg(long, default_value_t = 1_000_000)]
        max_units: u64,
        /// Write an SVG picture of the run.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Picture size in pixels.
        #[arg(long, default_value_t = 600.0)]
        size: f64,
    },
    /// Farey tessellation of the positive orthant.
    Tessellate {
        /// Ambient dimension.
        #[arg(long, default_value_t = 3)]
        dim: usize,
        /// Number of construction steps.
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// Write an SVG picture (dimension three only).
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Picture size in pixels.
        #[arg(long, default_value_t = 600.0)]
        size: f64,
    },
    /// Prismatic diagram of a continued fraction or of an exponent sequence.
    Diagram {
        /// Meester or Farey form.
        #[arg(
            long,
            conflicts_with = "exponents",
            required_unless_present = "exponents"
        )]
        cf: Option<String>,
        /// Comma-separated exponents of the LR-sequence.
        #[arg(long)]
        exponents: Option<String>,
        /// Number of masts for --exponents.
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Write an SVG picture of one part of the diagram.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Part drawn with --svg.
        #[arg(long, default_value_t = 0)]
        part: usize,
    },
    /// LLS sequence of a sail of the Farey polyhedron of a vector.
    Lls {
        /// The vector.
        vector: String,
        /// Sail index: the mast opposite the sail, 1 to 3.
        #[arg(long, default_value_t = 3)]
        sail: usize,
        /// Write an SVG picture of the sail.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Picture width in pixels.
        #[arg(long, default_value_t = 800.0)]
        width: f64,
    },
    /// Frieze pattern of a three-mast prismatic diagram and optional Ptolemy constant.
    Frieze {
        /// Comma-separated exponents of the LR-sequence.
        exponents: String,
        /// Earlier triangle as SEGMENT.POSITION followed by L or R, for example 2.1R.
        #[arg(long, requires = "w")]
        v: Option<String>,
        /// Later triangle in the same format.
        #[arg(long, requires = "v")]
        w: Option<String>,
        /// Print the frieze as CSV instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Cells of the simplex where the algorithm diverges, up to an element bound.
    Divergence {
        /// Bound on the sum of the prefix elements.
        #[arg(long, default_value_t = 3)]
        bound: u64,
        /// Write an SVG picture of the cells.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Picture size in pixels.
        #[arg(long, default_value_t = 600.0)]
        size: f64,
    },
    /// Continued fraction of the Perron eigenvector of a cubic matrix.
    CubicDemo {
        /// Decimal digits of the approximation.
        #[arg(long, default_value_t = 60)]
        digits: u32,
        /// Number of elements.
        #[arg(long, default_value_t = 22)]
        steps: usize,
    },
    /// Runs the acceptance checks.
    CheckPaper {
        /// Run a single check by number.
        #[arg(long)]
        only: Option<u8>,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Farey(#[from] FareyError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("acceptance checks failed: {0:?}")]
    Acceptance(Vec<u8>),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Farey(FareyError::Parse(_)) => 1,
            CliError::Farey(_) | CliError::Io(_) => 2,
            CliError::Acceptance(_) => 3,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(value) => {
            emit(&value);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

/// Prints pretty JSON to stdout; a closed pipe is not an error.
fn emit(value: &serde_json::Value) {
    let text = serde_json::to_string_pretty(value).expect("JSON values serialize");
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn parse_cf(text: &str) -> CliResult<FareyCF> {
    Ok(match ParsedCf::parse(text, 3)? {
        ParsedCf::Meester(cf) => cf,
        ParsedCf::Farey(f) => f.to_meester()?,
    })
}

fn parse_exponents(text: &str) -> CliResult<Vec<u64>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|e| CliError::Usage(format!("exponent {t:?}: {e}")))
        })
        .collect()
}

fn parse_triangle(text: &str) -> CliResult<(usize, usize, Chirality)> {
    let bad = || {
        CliError::Usage(format!(
            "triangle {text:?} is not SEGMENT.POSITION followed by L or R"
        ))
    };
    let (body, chirality) = match text.chars().last() {
        Some('L') | Some('l') => (&text[..text.len() - 1], Chirality::Left),
        Some('R') | Some('r') => (&text[..text.len() - 1], Chirality::Right),
        _ => return Err(bad()),
    };
    let (s, p) = body.split_once('.').ok_or_else(bad)?;
    Ok((
        s.parse().map_err(|_| bad())?,
        p.parse().map_err(|_| bad())?,
        chirality,
    ))
}

fn find_triangle<'a>(tris: &'a [BoundaryTriangle], spec: &str) -> CliResult<&'a BoundaryTriangle> {
    let (s, p, c) = parse_triangle(spec)?;
    tris.iter()
        .find(|t| t.segment == s && t.position == p && t.chirality == c)
        .ok_or_else(|| CliError::Usage(format!("no boundary triangle {spec}")))
}

fn write_file(path: &PathBuf, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents)?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn run(command: Command) -> CliResult<serde_json::Value> {
    match command {
        Command::Cf { vector, max_steps } => {
            let v: IntVec = vector.parse()?;
            let trace = meester(&v, max_steps)?;
            let form = if v.dim() == 3 {
                to_farey_form(&trace.cf).ok().map(|f| f.to_string())
            } else {
                None
            };
            eprintln!("{} = {}", v, trace.cf);
            Ok(json!({
                "vector": v,
                "meester": trace.cf.to_string(),
                "farey_form": form,
                "elements": trace.cf,
                "actives": trace.actives,
            }))
        }
        Command::Reconstruct { cf } => {
            let cf = parse_cf(&cf)?;
            let chain = nose_stretch(&cf)?;
            let form = to_farey_form(&cf)?;
            eprintln!(
                "{cf} -> {:?}",
                chain.pennant.as_ref().map(|p| p.to_string())
            );
            Ok(json!({
                "meester": cf.to_string(),
                "farey_form": form.to_string(),
                "word": word_to_string(&word_of_farey_form(&form)),
                "chain": chain,
            }))
        }
        Command::Run {
            vector,
            max_units,
            svg,
            size,
        } => {
            let v: IntVec = vector.parse()?;
            let run = farey_summation_run_int(&v, &BigInt::from(max_units))?;
            let simplices = run.simplices(max_units)?;
            if let Some(path) = svg {
                write_file(&path, &run.to_svg(size, max_units)?)?;
            }
            eprintln!(
                "{} unit steps, {} pyramids",
                simplices.steps.len(),
                run.pyramid_count()
            );
            Ok(json!({ "run": run, "simplices": simplices }))
        }
        Command::Tessellate {
            dim,
            depth,
            svg,
            size,
        } => {
            let t = tessellate(dim, depth)?;
            let report = if dim == 3 {
                Some(t.check_properties()?)
            } else {
                None
            };
            if let Some(path) = svg {
                write_file(&path, &t.to_svg(size)?)?;
            }
            eprintln!(
                "{} faces, {} maximal simplices",
                t.faces.len(),
                t.maximal.len()
            );
            Ok(json!({
                "dim": dim,
                "depth": depth,
                "faces": t.faces.len(),
                "maximal": t.maximal,
                "report": report,
            }))
        }
        Command::Diagram {
            cf,
            exponents,
            k,
            svg,
            part,
        } => {
            if let Some(text) = cf {
                let flag = diagram_of_cf(&parse_cf(&text)?)?;
                if let Some(path) = svg {
                    let p = flag.parts.get(part).ok_or_else(|| {
                        CliError::Usage(format!("part {part} of {}", flag.parts.len()))
                    })?;
                    write_file(&path, &p.diagram.to_svg(600.0))?;
                }
                eprintln!("{} parts", flag.parts.len());
                Ok(serde_json::to_value(&flag).map_err(|e| FareyError::Internal(e.to_string()))?)
            } else {
                let exps = parse_exponents(exponents.as_deref().unwrap_or_default())?;
                let d = PrismaticDiagram::from_exponents(k, &exps)?;
                if let Some(path) = svg {
                    write_file(&path, &d.to_svg(600.0))?;
                }
                Ok(describe(&d))
            }
        }
        Command::Lls {
            vector,
            sail,
            svg,
            width,
        } => {
            let v: IntVec = vector.parse()?;
            let cf = meester(&v, 10_000_000)?.cf;
            let poly = NoseProgram::from_cf(&cf).polyhedron(DEFAULT_UNIT_BUDGET)?;
            let lls = lls_sequence(&poly, sail)?;
            if let Some(path) = svg {
                write_file(&path, &lls_to_svg(&poly, &lls, width))?;
            }
            eprintln!(
                "sail {sail}: {} faces, {} edges",
                lls.faces.len(),
                lls.edges.len()
            );
            Ok(json!({ "meester": cf.to_string(), "lls": lls }))
        }
        Command::Frieze {
            exponents,
            v,
            w,
            csv,
        } => {
            let d = PrismaticDiagram::from_exponents(3, &parse_exponents(&exponents)?)?;
            let frieze = frieze_pattern(&d)?;
            let pair = match (v, w) {
                (Some(v), Some(w)) => {
                    let tris = boundary_triangles(&d)?;
                    Some(ptolemy_constant(
                        &d,
                        find_triangle(&tris, &v)?,
                        find_triangle(&tris, &w)?,
                    )?)
                }
                _ => None,
            };
            if csv {
                let _ = write!(std::io::stdout().lock(), "{}", frieze.to_csv());
            }
            let scan = ptolemy_scan(&d)?;
            eprintln!(
                "{} admissible pairs, {} violations",
                scan.pairs,
                scan.violations.len()
            );
            Ok(
                json!({ "frieze": if csv { None } else { Some(frieze) }, "ptolemy": pair, "scan": scan }),
            )
        }
        Command::Divergence { bound, svg, size } => {
            let cells = farey::explore::divergence_cells(bound)?;
            if let Some(path) = svg {
                write_file(&path, &farey::explore::cells_to_svg(&cells, size))?;
            }
            eprintln!("{} cells", cells.len());
            Ok(json!({ "bound": bound, "cells": cells }))
        }
        Command::CubicDemo { digits, steps } => {
            let demo = farey::explore::cubic_demo(digits, steps)?;
            eprintln!("{} elements", demo.elements.len());
            Ok(serde_json::to_value(&demo).map_err(|e| FareyError::Internal(e.to_string()))?)
        }
        Command::CheckPaper { only } => {
            let outcomes = match only {
                Some(id) => vec![farey::checks::run_check(id)
                    .ok_or_else(|| CliError::Usage(format!("no check {id}")))?],
                None => farey::checks::run_all(),
            };
            for o in &outcomes {
                eprintln!("{o}");
            }
            let failed: Vec<u8> = outcomes
                .iter()
                .filter(|o| !o.passed)
                .map(|o| o.id)
                .collect();
            if failed.is_empty() {
                Ok(json!(outcomes))
            } else {
                emit(&json!(outcomes));
                Err(CliError::Acceptance(failed))
            }
        }
    }
}
