//! Command-line front end. `main` only forwards to [`run`].
//!
//! Exit codes: 0 success, 1 usage or malformed input, 2 no factor,
//! 3 factor exists but none connected (or a verified factor is disconnected),
//! 4 precondition violated, 5 internal error or exhausted oracle budget.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::distance::{distance_constrained_factor, path_constrained_factor, PathConstraint};
use crate::error::Error;
use crate::graph::{EdgeSet, Graph};
use crate::matching::max_matching;
use crate::oracle::{enumerate_f_factors, find_f_factor, gen_instance, EnumerationBudget, Model};
use crate::solver::{solve, verify_connected_factor, FactorStatus, Outcome, SolveOptions};
use crate::tutte::{f_factor, DegreeSpec, Factor};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NO_FACTOR: i32 = 2;
pub const EXIT_NO_CONNECTED: i32 = 3;
pub const EXIT_PRECONDITION: i32 = 4;
pub const EXIT_INTERNAL: i32 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "cfactor",
    version,
    about = "Connected f-factors of dense graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GraphArg {
    /// Edge-list file: header `n m`, then one `u v` per line.
    #[arg(long)]
    pub graph: PathBuf,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false, id = "targets")]
pub struct TargetArgs {
    /// File with one target degree per line.
    #[arg(long = "f", value_name = "PATH")]
    pub f_file: Option<PathBuf>,
    /// Same target degree for every vertex.
    #[arg(long)]
    pub uniform_f: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide and construct a connected f-factor.
    Solve {
        #[command(flatten)]
        graph: GraphArg,
        #[command(flatten)]
        targets: TargetArgs,
        /// Decide instances outside the density preconditions by brute force.
        #[arg(long)]
        fallback_oracle: bool,
        /// Evaluate forced-path candidates concurrently.
        #[arg(long)]
        parallel: bool,
        /// Sequential candidate loop and no timing on stderr.
        #[arg(long)]
        deterministic: bool,
        /// Node budget for the fallback oracle.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Tutte's f-factor algorithm only.
    Factor {
        #[command(flatten)]
        graph: GraphArg,
        #[command(flatten)]
        targets: TargetArgs,
        #[arg(long)]
        json: bool,
    },
    /// f-factor with `u` and `v` at distance at least 3, or containing a
    /// forced shortest path `u,a,b,v`.
    DcFactor {
        #[command(flatten)]
        graph: GraphArg,
        #[command(flatten)]
        targets: TargetArgs,
        #[arg(long)]
        u: Option<usize>,
        #[arg(long)]
        v: Option<usize>,
        /// Forced path as `u,a,b,v`.
        #[arg(long, value_delimiter = ',', num_args = 4)]
        path: Option<Vec<usize>>,
        #[arg(long)]
        json: bool,
    },
    /// Maximum matching of a graph.
    Match {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        json: bool,
    },
    /// Check a factor file against a graph and targets.
    Verify {
        #[command(flatten)]
        graph: GraphArg,
        #[command(flatten)]
        targets: TargetArgs,
        /// Candidate factor in edge-list format.
        #[arg(long)]
        factor: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Generate an instance.
    Gen {
        /// twin-k, planted-connected or gnp-threshold.
        #[arg(long)]
        model: String,
        /// Comma-separated parameters, positional or `key=value`.
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the graph here instead of standard output.
        #[arg(long)]
        graph_out: Option<PathBuf>,
        /// Also write the target file here.
        #[arg(long)]
        f_out: Option<PathBuf>,
    },
    /// Brute-force existence and counting of f-factors.
    Oracle {
        #[command(flatten)]
        graph: GraphArg,
        #[command(flatten)]
        targets: TargetArgs,
        /// Backtracking node budget.
        #[arg(long)]
        budget: Option<u64>,
        /// Enumerate and count every factor.
        #[arg(long)]
        count: bool,
        #[arg(long)]
        json: bool,
    },
    /// Time the solver over generated instances; CSV on standard output.
    Bench {
        #[arg(long)]
        model: String,
        #[arg(long, default_value = "")]
        params: String,
        /// First seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of consecutive seeds.
        #[arg(long, default_value_t = 3)]
        seeds: u64,
        #[arg(long)]
        parallel: bool,
    },
}

/// Failure carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::MalformedInput { .. } | Error::InvalidDegreeSpec(_) => EXIT_USAGE,
            Error::PreconditionViolated(_) | Error::InfeasibleConstraint { .. } => {
                EXIT_PRECONDITION
            }
            Error::NotEquitable { .. } | Error::NotASwitch => EXIT_PRECONDITION,
            Error::InternalInconsistency(_) | Error::BudgetExhausted { .. } => EXIT_INTERNAL,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: e.to_string(),
        }
    }
}

type CliResult = Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(rendered.as_bytes());
            } else {
                let _ = out.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_USAGE,
        message: format!("{}: {e}", path.display()),
    })
}

fn load_graph(arg: &GraphArg) -> Result<Graph, Failure> {
    Ok(Graph::parse_edge_list(&read(&arg.graph)?)?)
}

fn load_targets(g: &Graph, t: &TargetArgs) -> Result<DegreeSpec, Failure> {
    let spec = match (&t.f_file, t.uniform_f) {
        (Some(path), _) => DegreeSpec::parse(&read(path)?)?,
        (None, Some(k)) => DegreeSpec::uniform(g.n(), k),
        (None, None) => unreachable!("clap enforces one target source"),
    };
    if spec.len() != g.n() {
        return Err(Error::malformed(
            0,
            format!("{} target values for {} vertices", spec.len(), g.n()),
        )
        .into());
    }
    Ok(spec)
}

fn budget(nodes: Option<u64>) -> EnumerationBudget {
    nodes.map(EnumerationBudget::nodes).unwrap_or_default()
}

fn factor_json(f: &Factor) -> serde_json::Value {
    json!({
        "n": f.n(),
        "m": f.edges().len(),
        "edges": f.edges().iter().map(|e| [e.u, e.v]).collect::<Vec<_>>(),
    })
}

fn emit_json(out: &mut dyn Write, v: &serde_json::Value) -> std::io::Result<()> {
    writeln!(
        out,
        "{}",
        serde_json::to_string(v).expect("json value serialises")
    )
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    match cmd {
        Command::Solve {
            graph,
            targets,
            fallback_oracle,
            parallel,
            deterministic,
            budget: nodes,
            json,
        } => {
            let g = load_graph(&graph)?;
            let f = load_targets(&g, &targets)?;
            let opts = SolveOptions {
                fallback_oracle,
                parallel: parallel && !deterministic,
                oracle_budget: budget(nodes),
            };
            let start = Instant::now();
            let r = solve(&g, &f, &opts)?;
            if json {
                emit_json(out, &r.to_json())?;
            } else {
                out.write_all(r.to_text().as_bytes())?;
            }
            let d = &r.diagnostics;
            write!(
                err,
                "candidates tried {} skipped {} matchings {}",
                d.candidates_tried, d.candidates_skipped, d.matchings_solved
            )?;
            if let Some((x, y)) = &d.split {
                write!(err, " split {}+{}", x.len(), y.len())?;
            }
            if d.via_oracle {
                write!(err, " (oracle)")?;
            }
            if !deterministic {
                write!(err, " in {:.3}s", start.elapsed().as_secs_f64())?;
            }
            writeln!(err)?;
            Ok(match r.outcome {
                Outcome::ConnectedFactor(_) => EXIT_OK,
                Outcome::NoFactor => EXIT_NO_FACTOR,
                Outcome::NoConnectedFactor => EXIT_NO_CONNECTED,
            })
        }
        Command::Factor {
            graph,
            targets,
            json,
        } => {
            let g = load_graph(&graph)?;
            let f = load_targets(&g, &targets)?;
            let found = f_factor(&g, &f);
            write_factor_outcome(out, json, found.as_ref(), "factor", "no-factor")?;
            Ok(if found.is_some() {
                EXIT_OK
            } else {
                EXIT_NO_FACTOR
            })
        }
        Command::DcFactor {
            graph,
            targets,
            u,
            v,
            path,
            json,
        } => {
            let g = load_graph(&graph)?;
            let f = load_targets(&g, &targets)?;
            let found = match path {
                Some(p) => {
                    let pc = PathConstraint::new(&g, p[0], p[1], p[2], p[3])?;
                    if u.is_some_and(|x| x != pc.u) || v.is_some_and(|x| x != pc.v) {
                        return Err(Error::PreconditionViolated(
                            "--u/--v disagree with --path".into(),
                        )
                        .into());
                    }
                    path_constrained_factor(&g, &f, &pc)?
                }
                None => {
                    let (Some(u), Some(v)) = (u, v) else {
                        return Err(Failure {
                            code: EXIT_USAGE,
                            message: "dc-factor needs --u and --v, or --path".into(),
                        });
                    };
                    distance_constrained_factor(&g, &f, u, v)?
                }
            };
            write_factor_outcome(out, json, found.as_ref(), "found", "none")?;
            Ok(if found.is_some() {
                EXIT_OK
            } else {
                EXIT_NO_FACTOR
            })
        }
        Command::Match { graph, json } => {
            let g = load_graph(&graph)?;
            let m = max_matching(&g);
            if json {
                let pairs: Vec<[usize; 2]> = m.pairs().iter().map(|e| [e.u, e.v]).collect();
                emit_json(out, &json!({ "size": m.len(), "pairs": pairs }))?;
            } else {
                writeln!(out, "MATCHING {}", m.len())?;
                for e in m.pairs() {
                    writeln!(out, "{e}")?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Verify {
            graph,
            targets,
            factor,
            json,
        } => {
            let g = load_graph(&graph)?;
            let f = load_targets(&g, &targets)?;
            let candidate = Graph::parse_edge_list(&read(&factor)?)?;
            if candidate.n() != g.n() {
                return Err(Error::malformed(1, "factor and graph differ in vertex count").into());
            }
            let edges: EdgeSet = candidate.edge_set();
            let report = verify_connected_factor(&g, &f, &edges);
            if json {
                emit_json(
                    out,
                    &json!({
                        "result": report.status().as_str(),
                        "components": report.components,
                        "diameter": report.diameter,
                        "foreign_edges": report.foreign_edges,
                        "degree_violations": report.degree_violations,
                    }),
                )?;
            } else {
                out.write_all(report.to_text().as_bytes())?;
            }
            Ok(match report.status() {
                FactorStatus::Valid => EXIT_OK,
                FactorStatus::Disconnected => EXIT_NO_CONNECTED,
                FactorStatus::NotAFactor => EXIT_NO_FACTOR,
            })
        }
        Command::Gen {
            model,
            params,
            seed,
            graph_out,
            f_out,
        } => {
            let model = Model::parse(&model, &params)?;
            let (g, f) = gen_instance(&model, seed)?;
            match graph_out {
                Some(p) => fs::write(p, g.to_edge_list())?,
                None => out.write_all(g.to_edge_list().as_bytes())?,
            }
            if let Some(p) = f_out {
                fs::write(p, f.to_text())?;
            }
            Ok(EXIT_OK)
        }
        Command::Oracle {
            graph,
            targets,
            budget: nodes,
            count,
            json,
        } => {
            let g = load_graph(&graph)?;
            let f = load_targets(&g, &targets)?;
            let b = budget(nodes);
            let (total, connected) = if count {
                let all = enumerate_f_factors(&g, &f, b).into_complete()?;
                let connected = all.iter().filter(|x| x.is_connected()).count();
                (Some(all.len()), connected > 0)
            } else {
                (
                    None,
                    find_f_factor(&g, &f, b, Factor::is_connected)?.is_some(),
                )
            };
            let any = match total {
                Some(t) => t > 0,
                None => connected || find_f_factor(&g, &f, b, |_| true)?.is_some(),
            };
            if json {
                emit_json(
                    out,
                    &json!({ "factors": total, "exists": any, "connected": connected }),
                )?;
            } else {
                if let Some(t) = total {
                    writeln!(out, "FACTORS {t}")?;
                }
                writeln!(out, "EXISTS {}", if any { "yes" } else { "no" })?;
                writeln!(out, "CONNECTED {}", if connected { "yes" } else { "no" })?;
            }
            Ok(match (any, connected) {
                (_, true) => EXIT_OK,
                (false, _) => EXIT_NO_FACTOR,
                (true, false) => EXIT_NO_CONNECTED,
            })
        }
        Command::Bench {
            model,
            params,
            seed,
            seeds,
            parallel,
        } => {
            let parsed = Model::parse(&model, &params)?;
            writeln!(out, "model,params,seed,n,m,status,candidates,millis")?;
            for s in seed..seed + seeds {
                let (g, f) = gen_instance(&parsed, s)?;
                let opts = SolveOptions {
                    parallel,
                    ..SolveOptions::default()
                };
                let start = Instant::now();
                let r = solve(&g, &f, &opts)?;
                let millis = start.elapsed().as_secs_f64() * 1e3;
                writeln!(
                    out,
                    "{model},\"{params}\",{s},{},{},{},{},{millis:.3}",
                    g.n(),
                    g.m(),
                    r.outcome.status(),
                    r.diagnostics.candidates_tried
                )?;
            }
            Ok(EXIT_OK)
        }
    }
}

fn write_factor_outcome(
    out: &mut dyn Write,
    json: bool,
    found: Option<&Factor>,
    yes: &str,
    no: &str,
) -> std::io::Result<()> {
    if json {
        let v = match found {
            Some(f) => json!({ "status": yes, "factor": factor_json(f) }),
            None => json!({ "status": no }),
        };
        return emit_json(out, &v);
    }
    match found {
        Some(f) => {
            writeln!(out, "STATUS {yes}")?;
            out.write_all(f.to_graph().to_edge_list().as_bytes())
        }
        None => writeln!(out, "STATUS {no}"),
    }
}
