//! Command-line driver.
//!
//! Exit codes: 0 on success, 1 when a claim fails or a run errors, 2 on usage errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::cliques::{classify_cliques, enumerate_maximal_cliques};
use crate::error::{Error, Result};
use crate::geometry::Geometry;
use crate::graph::{build_graph, SrgGraph};
use crate::io::cache::{load_geometry, save_cache};
use crate::io::export::{export_graph, ExportFormat};
use crate::io::report::{Verifier, CLAIM_IDS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "hermitian-srg", version, about = "Builds and certifies the (216, 40, 4, 8) graph on the ovoids of H(3,4)")]
struct Cli {
    /// Worker threads for parallel stages.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: Option<u16>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Source {
    /// Load the geometry from this cache instead of rebuilding it.
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Output {
    /// Write to this file instead of standard output.
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate the geometry and write the cache.
    Build {
        #[arg(long)]
        cache: PathBuf,
    },
    /// Check claims and print one pass/fail line each.
    Verify {
        #[arg(long, conflicts_with = "claim", required_unless_present = "claim")]
        all: bool,
        /// A claim id; may be repeated.
        #[arg(long)]
        claim: Vec<String>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Print the full report as JSON instead of the summary.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        out: Output,
    },
    /// Write the graph in an exchange format.
    Export {
        /// graph6, dimacs, edge-csv or json.
        #[arg(long)]
        format: String,
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        out: Output,
    },
    /// Enumerate and classify the maximal cliques.
    Cliques {
        /// Also write every clique as `u,v,w,triple_meet`.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        source: Source,
    },
    /// Realize the unitary group and certify its orders.
    Group {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        source: Source,
    },
    /// Full certification report with every claim.
    Report {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        json: bool,
        /// Leave out per-claim runtimes so that reruns are byte-identical.
        #[arg(long)]
        no_timings: bool,
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        out: Output,
    },
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n as usize).build() {
            Ok(pool) => pool.install(|| run(cli.command)),
            Err(e) => Err(Error::Consistency(format!("thread pool: {e}"))),
        },
        None => run(cli.command),
    };
    match outcome {
        Ok(code) => code,
        Err(e @ Error::UnsupportedFormat(_)) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_FAILURE
        }
    }
}

fn geometry_from(source: &Source) -> Result<Geometry> {
    match &source.cache {
        Some(path) => load_geometry(path),
        None => Geometry::build(),
    }
}

fn emit(out: &Output, bytes: &[u8]) -> Result<()> {
    match &out.output {
        Some(path) => fs::write(path, bytes)?,
        None => std::io::stdout().write_all(bytes)?,
    }
    Ok(())
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes)?;
    Ok(())
}

fn graph_of(geo: &Geometry) -> SrgGraph {
    build_graph(&geo.ovoids, &geo.subquadrangles)
}

fn run(command: Command) -> Result<i32> {
    match command {
        Command::Build { cache } => {
            let geo = Geometry::build()?;
            save_cache(&cache, &geo)?;
            println!("points: {}", geo.space.points().len());
            println!("lines: {}", geo.space.lines().len());
            println!("surface points: {}", geo.surface.points.len());
            println!("subquadrangles: {}", geo.subquadrangles.len());
            println!("ovoids: {}", geo.ovoids.len());
            println!("cache: {}", cache.display());
            Ok(EXIT_OK)
        }
        Command::Verify {
            all,
            claim,
            seed,
            json,
            source,
            out,
        } => {
            if let Some(bad) = claim.iter().find(|c| !CLAIM_IDS.contains(&c.as_str())) {
                eprintln!("error: unknown claim id {bad}; known ids: {}", CLAIM_IDS.join(", "));
                return Ok(EXIT_USAGE);
            }
            let geo = geometry_from(&source)?;
            let graph = graph_of(&geo);
            let verifier = Verifier::new(&geo, &graph, seed);
            let ids: Vec<&str> = if all {
                CLAIM_IDS.to_vec()
            } else {
                claim.iter().map(String::as_str).collect()
            };
            let report = verifier.run(&ids)?;
            let text = if json {
                report.to_json(true)
            } else {
                let mut s = report.summary();
                s.push_str(&format!("overall: {}\n", if report.pass { "PASS" } else { "FAIL" }));
                s
            };
            emit(&out, text.as_bytes())?;
            Ok(if report.pass { EXIT_OK } else { EXIT_FAILURE })
        }
        Command::Export { format, source, out } => {
            let format: ExportFormat = format.parse()?;
            let geo = geometry_from(&source)?;
            emit(&out, &export_graph(&graph_of(&geo), format))?;
            Ok(EXIT_OK)
        }
        Command::Cliques { csv, json, source } => {
            let geo = geometry_from(&source)?;
            let graph = graph_of(&geo);
            let cliques = enumerate_maximal_cliques(&graph)?;
            let census = classify_cliques(&cliques, &geo.ovoids, &geo.subquadrangles)?;
            if let Some(path) = csv {
                let mut s = String::from("u,v,w,triple_meet\n");
                for r in &census.records {
                    let [u, v, w] = r.vertices;
                    s.push_str(&format!("{u},{v},{w},{}\n", r.triple_meet));
                }
                write_file(&path, s.as_bytes())?;
            }
            if json {
                let v = json!({
                    "triple_meet_6": census.meet_six,
                    "triple_meet_2": census.meet_two,
                    "total": census.total(),
                });
                println!("{}", serde_json::to_string_pretty(&v)?);
            } else {
                println!("triple meet 6: {}", census.meet_six);
                println!("triple meet 2: {}", census.meet_two);
                println!("total: {}", census.total());
            }
            let ok = census.meet_six == 1440 && census.meet_two == 4320;
            Ok(if ok { EXIT_OK } else { EXIT_FAILURE })
        }
        Command::Group { seed, json, source } => {
            let geo = geometry_from(&source)?;
            let graph = graph_of(&geo);
            let report = Verifier::new(&geo, &graph, seed).run(&["symmetry"])?;
            let claim = &report.claims[0];
            if json {
                let v = json!({
                    "expected": claim.expected,
                    "computed": claim.computed,
                    "details": claim.details,
                    "pass": claim.pass,
                });
                println!("{}", serde_json::to_string_pretty(&v)?);
            } else {
                print!("{}", report.to_text(true));
            }
            Ok(if claim.pass { EXIT_OK } else { EXIT_FAILURE })
        }
        Command::Report {
            seed,
            json,
            no_timings,
            source,
            out,
        } => {
            let geo = geometry_from(&source)?;
            let graph = graph_of(&geo);
            let report = Verifier::new(&geo, &graph, seed).run_all();
            let text = if json {
                report.to_json(!no_timings)
            } else {
                report.to_text(!no_timings)
            };
            emit(&out, text.as_bytes())?;
            Ok(if report.pass { EXIT_OK } else { EXIT_FAILURE })
        }
    }
}
