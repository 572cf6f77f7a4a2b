//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a checked property fails (`verify`), 2 invalid
//! arguments, configuration or input, 3 I/O failure.

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use starsat::construct::{build_saturated, V1Choice};
use starsat::experiment::{emit_outputs, run_experiment, ExperimentConfig, ExperimentError};
use starsat::sat::{is_star_saturated, sat_exact_oracle, sat_exact_structured, Verdict};
use starsat::sparse::{max_sparse_set, SparseMode, DEFAULT_BUDGET};
use starsat::theory::{predict, TheoryParams};
use starsat::{Graph, Seed};

/// `println!` that ignores a closed stdout, so piping into `head` is quiet.
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

/// Writes text verbatim, ignoring a closed stdout.
fn out_raw(text: &str) {
    use std::io::Write;
    let _ = std::io::stdout().write_all(text.as_bytes());
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Check(String),
}

impl CliError {
    fn input(e: impl Display) -> CliError {
        CliError::Input(e.to_string())
    }

    fn code(&self) -> u8 {
        match self {
            CliError::Check(_) => 1,
            CliError::Input(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Config(msg) => CliError::Input(msg),
            ExperimentError::Io { path, source } => CliError::Io { path, source },
            ExperimentError::Csv(e) => CliError::Io {
                path: "csv output".into(),
                source: std::io::Error::other(e),
            },
        }
    }
}

#[derive(Parser)]
#[command(name = "starsat", version, about = "Star saturation numbers of graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlphaMode {
    AtMost,
    Exactly,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolveMethod {
    Oracle,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Predicted concentration values of sat(G(n, p), K_{1,r}).
    Theory {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        r: u64,
        #[arg(long, default_value_t = TheoryParams::DEFAULT_EPS)]
        eps: f64,
        #[arg(long, default_value_t = TheoryParams::DEFAULT_EPS_PRIME)]
        eps_prime: f64,
        #[arg(long, default_value_t = TheoryParams::DEFAULT_DELTA)]
        delta: f64,
        #[arg(long)]
        json: bool,
    },
    /// Largest vertex set inducing at most (or exactly) m edges.
    Alpha {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value = "at-most")]
        mode: AlphaMode,
        /// Search-tree node budget.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Exact sat(G, K_{1,r}) on a small host.
    Solve {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        r: usize,
        #[arg(long, value_enum, default_value = "structured")]
        method: SolveMethod,
        #[arg(long)]
        json: bool,
        /// Also print the optimal subgraph as an edge list.
        #[arg(long)]
        witness: bool,
    },
    /// Builds a K_{1,r}-saturated subgraph from a sparse V1 and a clique cover.
    Construct {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// auto, independent or sparse:M.
        #[arg(long, default_value = "auto")]
        mode: String,
        /// Edge probability used by auto mode; defaults to the host density.
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        witness: bool,
    },
    /// Checks that a subgraph is K_{1,r}-saturated in a host.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        subgraph: PathBuf,
        #[arg(long)]
        r: usize,
    },
    /// Runs a seeded batch experiment from a JSON configuration.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long)]
        workers: Option<usize>,
    },
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn read_graph(path: &Path) -> Result<Graph, CliError> {
    Graph::parse(&read_text(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Prints the fields of a JSON object one per line.
fn print_table(value: &Value) {
    if let Value::Object(map) = value {
        for (k, v) in map {
            match v {
                Value::String(s) => out!("{k}: {s}"),
                Value::Null => out!("{k}: none"),
                other => out!("{k}: {other}"),
            }
        }
    }
}

fn print_json(value: &Value) {
    out!(
        "{}",
        serde_json::to_string_pretty(value).expect("json values serialize")
    );
}

fn parse_choice(mode: &str, g: &Graph, r: usize, p: Option<f64>) -> Result<V1Choice, CliError> {
    match mode {
        "independent" => Ok(V1Choice::Independent),
        "auto" => {
            let p = match p {
                Some(p) => p,
                None => {
                    let pairs = g.n() * g.n().saturating_sub(1) / 2;
                    if pairs == 0 {
                        return Err(CliError::Input("host has no vertex pairs; pass --p".into()));
                    }
                    g.m() as f64 / pairs as f64
                }
            };
            let params = TheoryParams::new(g.n() as u64, p, r as u64)
                .map_err(|e| CliError::Input(format!("auto mode: {e}; pass --p or another --mode")))?;
            Ok(V1Choice::Auto(params))
        }
        other => match other.strip_prefix("sparse:").map(str::parse::<usize>) {
            Some(Ok(m)) => Ok(V1Choice::Sparse(m)),
            _ => Err(CliError::Input(format!(
                "unknown mode {other:?}; expected auto, independent or sparse:M"
            ))),
        },
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Theory {
            n,
            p,
            r,
            eps,
            eps_prime,
            delta,
            json,
        } => {
            let params = TheoryParams::with_tolerances(n, p, r, eps, eps_prime, delta).map_err(CliError::input)?;
            let pred = predict(&params).map_err(CliError::input)?;
            let value = serde_json::to_value(&pred).expect("prediction serializes");
            if json {
                print_json(&value);
            } else {
                print_table(&value);
            }
        }
        Command::Alpha { graph, m, mode, budget } => {
            let g = read_graph(&graph)?;
            let mode = match mode {
                AlphaMode::AtMost => SparseMode::AtMost,
                AlphaMode::Exactly => SparseMode::Exactly,
            };
            match max_sparse_set(&g, m, mode, budget) {
                Some(res) => {
                    out!("size: {}", res.size);
                    out!("edges: {}", res.induced_edges);
                    out!(
                        "set: {}",
                        res.set.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
                    );
                    out!("exact: {}", res.exact);
                }
                None => out!("none: no vertex set induces exactly {m} edges"),
            }
        }
        Command::Solve {
            graph,
            r,
            method,
            json,
            witness,
        } => {
            let g = read_graph(&graph)?;
            let res = match method {
                SolveMethod::Oracle => sat_exact_oracle(&g, r),
                SolveMethod::Structured => sat_exact_structured(&g, r),
            }
            .map_err(CliError::input)?;
            let w = &res.witness;
            let mut value = json!({
                "value": res.value,
                "method": res.method,
                "proven": res.proven,
                "v1_size": w.v1.len(),
                "v1_edges": w.v1_edges(),
                "cross_edges": w.cross_edges,
            });
            if json {
                if witness {
                    value["witness"] = json!(w.h.edges().map(|(u, v)| [u, v]).collect::<Vec<_>>());
                }
                print_json(&value);
            } else {
                print_table(&value);
                if witness {
                    out_raw(&w.h.to_edge_list());
                }
            }
        }
        Command::Construct {
            graph,
            r,
            seed,
            mode,
            p,
            witness,
        } => {
            let g = read_graph(&graph)?;
            let choice = parse_choice(&mode, &g, r, p)?;
            let rep = build_saturated(&g, r, &choice, &Seed::new(seed)).map_err(CliError::input)?;
            let value = json!({
                "edge_count": rep.result.edge_count,
                "v1_size": rep.v1.len(),
                "v1_edges": rep.v1_edges,
                "v1_mode": rep.v1_mode.to_string(),
                "v1_exact": rep.v1_exact,
                "v1_trimmed": rep.v1_trimmed,
                "cliques": rep.cover.cliques.len(),
                "remainder": rep.cover.remainder.len(),
                "parity_case": rep.parity_case.to_string(),
                "cross_vertex": rep.cross_vertex,
                "cross_partner": rep.cross_partner,
                "restarts": rep.restarts,
                "identity_holds": rep.result.decomposition_holds(&g),
            });
            print_table(&value);
            if witness {
                out_raw(&rep.result.h.to_edge_list());
            }
        }
        Command::Verify { graph, subgraph, r } => {
            let g = read_graph(&graph)?;
            let h = read_graph(&subgraph)?;
            match is_star_saturated(&g, &h, r).map_err(CliError::input)? {
                Verdict::Saturated => out!("ok: saturated with {} edges", h.m()),
                Verdict::Violated(v) => return Err(CliError::Check(format!("not saturated: {v}"))),
            }
        }
        Command::Experiment { config, out, workers } => {
            let text = read_text(&config)?;
            let cfg = ExperimentConfig::from_json(&text)?;
            let run = run_experiment(&cfg, workers.or(cfg.workers))?;
            let paths = emit_outputs(&run, &cfg, &out)?;
            print_json(&serde_json::to_value(&run.summary).expect("summary serializes"));
            eprintln!(
                "wrote {}, {} and {}",
                paths.csv.display(),
                paths.summary.display(),
                paths.plot.display()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
