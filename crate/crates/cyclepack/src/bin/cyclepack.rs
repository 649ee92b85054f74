//! Command-line surface: instance generation, the packing drivers, the
//! bipartite partitioner, brute-force oracles, witness search, and
//! certificate verification.
//!
//! Exit codes: 0 = certificate produced or verified, 1 = failure report
//! or rejection, 2 = usage or input error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cyclepack::certificate::{
    packing_certificate, separation_certificate, verify_certificate, Certificate, Envelope,
};
use cyclepack::digraph::Digraph;
use cyclepack::extraction::{pack_cycles, ConstantsMode};
use cyclepack::generate::{generate, InstanceSpec};
use cyclepack::io::{parse_dot, parse_edge_list, parse_vertex_set, write_dot, write_edge_list};
use cyclepack::linkage::{is_well_linked, WELL_LINKED_CAP};
use cyclepack::oracles::{gap_report, OracleCaps};
use cyclepack::partition::{disjoint_pairs, OrderedBipartite};
use cyclepack::witness::{balanced_separation, SEPARATION_CAP};
use cyclepack::Error;

#[derive(Parser)]
#[command(name = "cyclepack", version, about = "Certificate-producing directed cycle packing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Edgelist,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstantsFlag {
    Paper,
    Scaled,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance: grid R C | planted-cycles K P SEED |
    /// planted-gridwitness K | random N M SEED | planted-dual Q K SEED.
    Gen {
        /// Generator name and its parameters.
        #[arg(required = true)]
        words: Vec<String>,
        #[arg(long, value_enum, default_value = "edgelist")]
        format: GraphFormat,
        /// Write the graph here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the packing driver over a well-linked set.
    Pack {
        /// Graph file.
        input: PathBuf,
        #[arg(long, value_enum, default_value = "edgelist")]
        format: GraphFormat,
        /// The designated vertex set, comma-separated.
        #[arg(long)]
        set: String,
        #[arg(short)]
        k: usize,
        /// Per-vertex congestion bound (2, 3, or 4).
        #[arg(short, default_value_t = 2)]
        p: usize,
        #[arg(long, value_enum, default_value = "scaled")]
        constants: ConstantsFlag,
        /// Degeneracy threshold in scaled mode.
        #[arg(long, default_value_t = 0)]
        scale_d: usize,
        /// Walk count in scaled mode (must be even).
        #[arg(long, default_value_t = 2)]
        scale_a: usize,
        /// Marked-set size in scaled mode.
        #[arg(long, default_value_t = 1)]
        scale_b: usize,
        /// Write the certificate JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Split an ordered bipartite graph into disjoint dense segment
    /// pairs. Input: header `a b`, then one `i j` edge per line.
    Partition {
        input: PathBuf,
        #[arg(short)]
        k: usize,
        /// Average-degree demand per pair.
        #[arg(short, default_value_t = 2)]
        r: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact packing/covering numbers with consistency audit.
    Oracle {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "edgelist")]
        format: GraphFormat,
        /// Vertex-count cap for the feedback-set search.
        #[arg(long, default_value_t = 20)]
        cap: usize,
        /// Emit a CSV row instead of JSON.
        #[arg(long)]
        csv: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a balanced separation or check well-linkedness.
    Witness {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "edgelist")]
        format: GraphFormat,
        /// Witness kind: separation | well-linked.
        #[arg(long)]
        kind: String,
        /// The vertex set the witness is about, comma-separated.
        #[arg(long)]
        set: String,
        /// Maximum separator order (separation kind only).
        #[arg(short, default_value_t = 1)]
        w: usize,
        /// Brute-force size cap.
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify a certificate against a graph.
    Verify {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "edgelist")]
        format: GraphFormat,
        /// Certificate JSON file.
        cert: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::BadSpec(_) | Error::Parse(_) | Error::UnknownKind(_) | Error::Io(_)
                | Error::Json(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn read_graph(path: &PathBuf, format: GraphFormat) -> Result<Digraph, Error> {
    let text = std::fs::read_to_string(path)?;
    match format {
        GraphFormat::Edgelist => parse_edge_list(&text),
        GraphFormat::Dot => parse_dot(&text),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Gen { words, format, out } => {
            let refs: Vec<&str> = words.iter().map(String::as_str).collect();
            let spec = InstanceSpec::parse(&refs)?;
            let gen = generate(&spec)?;
            let mut text = match format {
                GraphFormat::Edgelist => write_edge_list(&gen.graph),
                GraphFormat::Dot => write_dot(&gen.graph),
            };
            if let (GraphFormat::Edgelist, Some(marked)) = (format, &gen.marked) {
                let list: Vec<String> = marked.iter().map(usize::to_string).collect();
                text.push_str(&format!("# marked: {}\n", list.join(",")));
            }
            emit(&out, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Pack {
            input,
            format,
            set,
            k,
            p,
            constants,
            scale_d,
            scale_a,
            scale_b,
            out,
        } => {
            let g = read_graph(&input, format)?;
            let d_set = parse_vertex_set(&set)?;
            let mode = match constants {
                ConstantsFlag::Paper => ConstantsMode::Paper,
                ConstantsFlag::Scaled => ConstantsMode::Scaled {
                    d: scale_d,
                    a: scale_a,
                    b: scale_b,
                },
            };
            match pack_cycles(&g, &d_set, k, p, mode) {
                Ok(cert) => {
                    emit(&out, &packing_certificate(&cert).to_json()?)?;
                    Ok(ExitCode::SUCCESS)
                }
                Err(report) => {
                    eprintln!("{}", serde_json::to_string_pretty(&report)?);
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Partition { input, k, r, out } => {
            let text = std::fs::read_to_string(&input)?;
            let ob = parse_bipartite(&text)?;
            let pairs = disjoint_pairs(&ob, k, r)?;
            emit(&out, &serde_json::to_string_pretty(&pairs)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle {
            input,
            format,
            cap,
            csv,
            out,
        } => {
            let g = read_graph(&input, format)?;
            let caps = OracleCaps {
                fvs_cap: cap,
                ..OracleCaps::default()
            };
            let rep = gap_report(&g, &caps)?;
            let text = if csv {
                format!(
                    "{}\n{}\n",
                    cyclepack::oracles::GapReport::csv_header(),
                    rep.csv_row()
                )
            } else {
                serde_json::to_string_pretty(&rep)? + "\n"
            };
            emit(&out, &text)?;
            if rep.monotone_ok && rep.covering_ok {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
        Command::Witness {
            input,
            format,
            kind,
            set,
            w,
            cap,
            out,
        } => {
            let g = read_graph(&input, format)?;
            let w_set = parse_vertex_set(&set)?;
            match kind.as_str() {
                "separation" => {
                    let found =
                        balanced_separation(&g, &w_set, w, cap.unwrap_or(SEPARATION_CAP))?;
                    match found {
                        Some(sep) => {
                            let env = separation_certificate(&sep, Some(&w_set));
                            emit(&out, &env.to_json()?)?;
                            Ok(ExitCode::SUCCESS)
                        }
                        None => {
                            eprintln!("no balanced separation of order <= {w}");
                            Ok(ExitCode::from(1))
                        }
                    }
                }
                "well-linked" => {
                    let rep = is_well_linked(&g, &w_set, cap.unwrap_or(WELL_LINKED_CAP))?;
                    let env = Envelope::new(Certificate::WellLinked {
                        set: w_set.iter().copied().collect(),
                        verdict: rep.verdict,
                        violation: rep.witness.map(|(a, b, s)| {
                            (
                                a.into_iter().collect(),
                                b.into_iter().collect(),
                                s.into_iter().collect(),
                            )
                        }),
                    });
                    emit(&out, &env.to_json()?)?;
                    Ok(if rep.verdict {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    })
                }
                other => Err(Error::UnknownKind(other.to_string())),
            }
        }
        Command::Verify { input, format, cert } => {
            let g = read_graph(&input, format)?;
            let text = std::fs::read_to_string(&cert)?;
            let env = Envelope::from_json(&text)?;
            let (ok, diags) = verify_certificate(&g, &env);
            if ok {
                println!("certificate verified");
                Ok(ExitCode::SUCCESS)
            } else {
                for d in diags {
                    eprintln!("violated: {d}");
                }
                Ok(ExitCode::from(1))
            }
        }
    }
}

/// Parses `a b` header then `i j` edge lines of an ordered bipartite
/// graph.
fn parse_bipartite(text: &str) -> Result<OrderedBipartite, Error> {
    let mut nums = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let (Some(x), Some(y), None) = (it.next(), it.next(), it.next()) else {
            return Err(Error::Parse(format!("expected two numbers per line: {line:?}")));
        };
        let x: usize = x
            .parse()
            .map_err(|e| Error::Parse(format!("bad number {x:?}: {e}")))?;
        let y: usize = y
            .parse()
            .map_err(|e| Error::Parse(format!("bad number {y:?}: {e}")))?;
        nums.push((x, y));
    }
    let Some(&(a, b)) = nums.first() else {
        return Err(Error::Parse("empty bipartite input".into()));
    };
    OrderedBipartite::new(a, b, nums[1..].iter().copied())
}
