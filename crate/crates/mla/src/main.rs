//! Command-line front end: graph generation, reduction, solving, the
//! cover/labeling mappings, labeling verification, and the lemma checks.
//!
//! Exit codes: 0 success, 1 a check failed, 2 invalid input. All
//! randomness flows from the explicit `--seed` flag.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use mla::graph::{gen_k4, gen_random_cubic, vc_approx_matching, vc_exact, CubicGraph, VertexCover};
use mla::labeling::{is_feasible, labeling_cost, validate_cover, Labeling};
use mla::lemmas::check_lemmas;
use mla::mapping::{cover_to_labeling, labeling_to_cover, lreduction_report};
use mla::model::AlignedPair;
use mla::reduction::{reduce_graph, BlockMap};
use mla::solver::{brute_force_oracle, solve_exact};

#[derive(Parser)]
#[command(name = "mla", version, about = "Minimum labeling alignment toolkit")]
struct Cli {
    /// Emit JSON reports on stdout instead of human-readable lines.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphKind {
    K4,
    Random,
}

#[derive(Clone, Copy, ValueEnum, Default)]
enum SolveMode {
    #[default]
    Exact,
    Oracle,
}

#[derive(Clone, Copy, ValueEnum, Default)]
enum VcMode {
    #[default]
    Exact,
    Approx,
}

#[derive(Clone, Copy, ValueEnum)]
enum MapDirection {
    CoverToLabeling,
    LabelingToCover,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a cubic graph file.
    GenGraph {
        #[arg(long, value_enum)]
        kind: GraphKind,
        /// Vertex count (random graphs only; must be even and >= 4).
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build the aligned-pair instance and block map sidecar for a graph.
    Reduce {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        blockmap: PathBuf,
    },
    /// Solve an instance exactly or with the exhaustive oracle.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        mode: SolveMode,
        /// Search-node budget for exact mode.
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        /// Write the best labeling found to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute a vertex cover.
    Vc {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        mode: VcMode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Map a cover to a labeling, or a labeling back to a cover.
    Map {
        #[arg(long, value_enum)]
        direction: MapDirection,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        blockmap: PathBuf,
        /// Cover file (cover-to-labeling only).
        #[arg(long)]
        cover: Option<PathBuf>,
        /// Labeling file (labeling-to-cover only).
        #[arg(long)]
        labeling: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a labeling file against an instance.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        labeling: PathBuf,
        /// Block map for the per-block cost breakdown.
        #[arg(long)]
        blockmap: Option<PathBuf>,
    },
    /// Run the whole battery of lemma-level checks on a graph.
    CheckLemmas {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Print the reduction's arithmetic report for a graph.
    Report {
        #[arg(long)]
        graph: PathBuf,
    },
}

fn read_file(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("reading {}", path.display()))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn load_graph(path: &Path) -> Result<CubicGraph> {
    CubicGraph::from_json(&read_file(path)?)
        .with_context(|| format!("loading graph {}", path.display()))
}

fn load_instance(path: &Path) -> Result<AlignedPair> {
    AlignedPair::parse_alignment(&read_file(path)?)
        .with_context(|| format!("loading instance {}", path.display()))
}

fn load_blockmap(path: &Path) -> Result<BlockMap> {
    BlockMap::from_json(&read_file(path)?)
        .with_context(|| format!("loading block map {}", path.display()))
}

fn load_labeling(path: &Path) -> Result<Labeling> {
    Labeling::from_json(&read_file(path)?)
        .map_err(|e| anyhow::anyhow!("{e}"))
        .with_context(|| format!("loading labeling {}", path.display()))
}

fn load_cover(path: &Path) -> Result<VertexCover> {
    VertexCover::from_json(&read_file(path)?)
        .with_context(|| format!("loading cover {}", path.display()))
}

fn vertices_line(cover: &VertexCover) -> String {
    let list: Vec<String> = cover.vertices.iter().map(u32::to_string).collect();
    format!("[{}]", list.join(", "))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::GenGraph { kind, n, seed, out } => {
            let graph = match kind {
                GraphKind::K4 => {
                    if let Some(n) = n {
                        anyhow::ensure!(n == 4, "k4 has exactly 4 vertices, got --n {n}");
                    }
                    gen_k4()
                }
                GraphKind::Random => {
                    let n = n.context("--n is required for random graphs")?;
                    gen_random_cubic(n, seed)?
                }
            };
            write_file(&out, &graph.to_json())?;
            if cli.json {
                println!(
                    "{}",
                    json!({"n": graph.n, "edges": graph.edge_count(), "path": out})
                );
            } else {
                println!("n: {}, edges: {}", graph.n, graph.edge_count());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Reduce {
            graph,
            instance,
            blockmap,
        } => {
            let graph = load_graph(&graph)?;
            let (pair, map) = reduce_graph(&graph)?;
            write_file(&instance, &pair.to_json())?;
            write_file(&blockmap, &map.to_json())?;
            let columns = pair.columns();
            let max_occurrence = pair.max_occurrence();
            if cli.json {
                println!(
                    "{}",
                    json!({"columns": columns, "max_occurrence": max_occurrence})
                );
            } else {
                println!("columns: {columns}, max-occurrence: {max_occurrence}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve {
            instance,
            mode,
            budget,
            out,
        } => {
            let pair = load_instance(&instance)?;
            let result = match mode {
                SolveMode::Exact => solve_exact(&pair, budget)?,
                SolveMode::Oracle => brute_force_oracle(&pair)?,
            };
            if let Some(out) = out {
                write_file(&out, &result.best.to_json())?;
            }
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "cost": result.cost,
                        "nodes_explored": result.nodes_explored,
                        "proven_optimal": result.proven_optimal,
                    })
                );
            } else {
                println!(
                    "cost: {}, nodes: {}, proven-optimal: {}",
                    result.cost, result.nodes_explored, result.proven_optimal
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Vc { graph, mode, out } => {
            let graph = load_graph(&graph)?;
            let cover = match mode {
                VcMode::Exact => vc_exact(&graph)?,
                VcMode::Approx => vc_approx_matching(&graph)?,
            };
            if let Some(out) = out {
                write_file(&out, &cover.to_json())?;
            }
            if cli.json {
                println!(
                    "{}",
                    json!({"size": cover.size(), "vertices": cover.vertices})
                );
            } else {
                println!(
                    "size: {}, vertices: {}",
                    cover.size(),
                    vertices_line(&cover)
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Map {
            direction,
            graph,
            instance,
            blockmap,
            cover,
            labeling,
            out,
        } => {
            let graph = load_graph(&graph)?;
            let pair = load_instance(&instance)?;
            let map = load_blockmap(&blockmap)?;
            match direction {
                MapDirection::CoverToLabeling => {
                    let cover = cover.context("--cover is required for cover-to-labeling")?;
                    let cover = load_cover(&cover)?;
                    let labeling = cover_to_labeling(&graph, &cover, &pair, &map)?;
                    write_file(&out, &labeling.to_json())?;
                    let cost = labeling_cost(&labeling);
                    if cli.json {
                        println!("{}", json!({"cost": cost, "events": labeling.events.len()}));
                    } else {
                        println!("cost: {cost}, events: {}", labeling.events.len());
                    }
                }
                MapDirection::LabelingToCover => {
                    let labeling =
                        labeling.context("--labeling is required for labeling-to-cover")?;
                    let labeling = load_labeling(&labeling)?;
                    let cover = labeling_to_cover(&graph, &pair, &map, &labeling)?;
                    write_file(&out, &cover.to_json())?;
                    if cli.json {
                        println!(
                            "{}",
                            json!({"size": cover.size(), "vertices": cover.vertices})
                        );
                    } else {
                        println!(
                            "size: {}, vertices: {}",
                            cover.size(),
                            vertices_line(&cover)
                        );
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            instance,
            labeling,
            blockmap,
        } => {
            let pair = load_instance(&instance)?;
            let labeling = load_labeling(&labeling)?;
            let violation = validate_cover(&pair, &labeling).err();
            let cover_valid = violation.is_none();
            let feasible = is_feasible(&labeling);
            let cost = labeling_cost(&labeling);
            let block_costs: Vec<(String, usize)> = match blockmap {
                Some(path) => load_blockmap(&path)?
                    .blocks
                    .iter()
                    .filter(|b| {
                        !matches!(
                            b.name,
                            mla::reduction::BlockName::Aux1(_) | mla::reduction::BlockName::Aux2(_)
                        )
                    })
                    .map(|b| (b.name.to_string(), labeling.restricted_cost(b.interval)))
                    .collect(),
                None => Vec::new(),
            };
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "cover_valid": cover_valid,
                        "feasible": feasible,
                        "cost": cost,
                        "violation": violation.as_ref().map(|v| v.to_string()),
                        "blocks": block_costs
                            .iter()
                            .map(|(name, cost)| json!({"name": name, "cost": cost}))
                            .collect::<Vec<_>>(),
                    })
                );
            } else {
                println!("cover-valid: {cover_valid}, feasible: {feasible}, cost: {cost}");
                if let Some(violation) = &violation {
                    println!("violation: {violation}");
                }
                for (name, cost) in &block_costs {
                    println!("  {name}  {cost}");
                }
            }
            if cover_valid && feasible {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
        Command::CheckLemmas { graph } => {
            let graph = load_graph(&graph)?;
            let report = check_lemmas(&graph)?;
            if cli.json {
                println!("{}", serde_json::to_string(&report)?);
            } else {
                println!("{:<28} {:<6} detail", "check", "result");
                for check in &report.checks {
                    println!(
                        "{:<28} {:<6} {}",
                        check.name,
                        if check.passed { "ok" } else { "FAIL" },
                        check.detail
                    );
                }
            }
            if report.all_passed() {
                Ok(ExitCode::SUCCESS)
            } else {
                let failed = report.first_failure().expect("some check failed");
                eprintln!("check failed: {}", failed.name);
                Ok(ExitCode::from(1))
            }
        }
        Command::Report { graph } => {
            let graph = load_graph(&graph)?;
            let report = lreduction_report(&graph)?;
            if cli.json {
                println!("{}", serde_json::to_string(&report)?);
            } else {
                println!(
                    "n: {}, edges: {}, tau: {}, opt-cost: {}, identity-ok: {}, apx-bound-ok: {}",
                    report.n,
                    report.edges,
                    report.tau,
                    report.opt_cost,
                    report.identity_ok,
                    report.apx_bound_ok
                );
            }
            if report.identity_ok && report.apx_bound_ok {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
    }
}

fn main() -> ExitCode {
    // Die silently on a closed pipe (e.g. `mla verify ... | head`) like
    // other Unix filters instead of panicking with code 101.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(error) => {
            eprintln!("error: {error:#}");
            ExitCode::from(2)
        }
    }
}
