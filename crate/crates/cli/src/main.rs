use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use linkcone::contraction::{search_contraction_map, ContractionMode, SearchOutcome};
use linkcone::format::{
    bitstring_map_json, entropy_vector_json, link_json, parse_prop3_map, pretty, ModelFile,
};
use linkcone::generate::{random_graph, random_hypergraph, random_link, HypergraphParams, LinkParams};
use linkcone::link::{hypergraph_to_link, ray15_link};
use linkcone::prop3::{
    build_trit_partition, check_prop3_certificate, compute_oracular_indicator, TupleCoverage,
};
use linkcone::{Error, Hypergraph, LinearInequality, Subsystem};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

/// Exact entropy vectors of graph, hypergraph and link models, and checks of
/// linear entropy inequalities on them.
#[derive(Parser)]
#[command(name = "linkcone", version)]
struct Cli {
    /// Also write a JSON run report (command, input digest, results, exit code).
    #[arg(long, global = true, value_name = "PATH")]
    report: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the entropy of one subsystem as an exact rational.
    Entropy {
        #[command(flatten)]
        model: ModelSource,
        #[arg(long)]
        subsystem: String,
    },
    /// Print the entropy vector in canonical order as JSON.
    EntropyVector {
        #[command(flatten)]
        model: ModelSource,
    },
    /// Evaluate an inequality directly, or check a cut-dependent certificate.
    CheckIneq {
        #[command(flatten)]
        model: ModelSource,
        /// File holding the inequality, e.g. `S(A) + S(B) >= S(AB)`.
        #[arg(long, value_name = "PATH")]
        ineq: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Direct)]
        method: Method,
        /// Trit-string map for the certificate method.
        #[arg(long, value_name = "PATH")]
        map: Option<PathBuf>,
        /// Check every cell tuple instead of the support plus samples.
        #[arg(long)]
        exhaustive: bool,
        /// Sampled tuples outside the indicator support.
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the indicator table as JSON.
        #[arg(long, value_name = "PATH")]
        indicator: Option<PathBuf>,
    },
    /// Search for a contraction map proving an inequality.
    FindContraction {
        #[arg(long, value_name = "PATH")]
        ineq: PathBuf,
        /// Party count; by default the largest letter used.
        #[arg(long)]
        parties: Option<usize>,
        /// `graph` or `hypergraph:K`.
        #[arg(long, default_value = "graph", value_parser = parse_mode)]
        mode: ContractionMode,
        /// Maximum number of search nodes.
        #[arg(long)]
        budget: Option<u64>,
        /// Where to write the map; standard output by default.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Convert a hypergraph (or graph) file into a link model.
    Convert {
        #[arg(long, value_name = "PATH")]
        model: PathBuf,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Emit a seeded random model, or a built-in one.
    Generate(GenerateArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ModelSource {
    #[arg(long, value_name = "PATH")]
    model: Option<PathBuf>,
    #[arg(long, value_enum)]
    builtin: Option<Builtin>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Builtin {
    Ray15,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Direct,
    Prop3,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Link,
    Hypergraph,
    Graph,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum, default_value_t = Kind::Link)]
    kind: Kind,
    /// Emit a built-in model instead of a random one.
    #[arg(long, value_enum)]
    builtin: Option<Builtin>,
    #[arg(long, default_value_t = 3)]
    parties: usize,
    #[arg(long, default_value_t = 8)]
    loops: usize,
    #[arg(long, default_value_t = 5)]
    atoms: usize,
    #[arg(long, default_value_t = 3)]
    max_arity: usize,
    #[arg(long, default_value_t = 7)]
    vertices: usize,
    #[arg(long, default_value_t = 6)]
    edges: usize,
    #[arg(long, default_value_t = 3)]
    max_rank: usize,
    #[arg(long, default_value_t = 4)]
    max_weight: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

fn parse_mode(text: &str) -> Result<ContractionMode, String> {
    match text.split_once(':') {
        None if text == "graph" => Ok(ContractionMode::Graph),
        Some(("hypergraph", k)) => k
            .parse()
            .map(ContractionMode::Hypergraph)
            .map_err(|_| format!("bad rank in '{text}'")),
        _ => Err(format!("expected graph or hypergraph:K, got '{text}'")),
    }
}

mod code {
    pub const VIOLATED: u8 = 1;
    pub const PARSE: u8 = 2;
    pub const SEMANTIC: u8 = 3;
    pub const USAGE: u8 = 4;
    pub const BUDGET: u8 = 5;
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) => code::PARSE,
            _ => code::SEMANTIC,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

/// What a command produced: text for standard output, report fields, and
/// the exit code of a successful run (0, or 1 for a violated check).
struct Output {
    stdout: String,
    digest: Option<String>,
    results: Value,
    code: u8,
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| fail(code::PARSE, format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| fail(code::SEMANTIC, format!("cannot write {}: {e}", path.display())))
}

fn digest(text: &str) -> String {
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn load_model(source: &ModelSource) -> Result<(ModelFile, String), Failure> {
    let text = match (&source.model, source.builtin) {
        (Some(path), _) => read(path)?,
        (None, Some(Builtin::Ray15)) => pretty(&link_json(&ray15_link())),
        (None, None) => return Err(fail(code::USAGE, "give --model or --builtin")),
    };
    Ok((ModelFile::parse(&text)?, digest(&text)))
}

/// Largest party letter inside the terms' parentheses.
fn infer_parties(text: &str) -> usize {
    let mut n = 0;
    let mut inside = false;
    for c in text.chars() {
        match c {
            '(' => inside = true,
            ')' => inside = false,
            'A'..='Z' if inside => n = n.max((c as u8 - b'A' + 1) as usize),
            _ => {}
        }
    }
    n
}

fn load_ineq(path: &Path, n: Option<usize>) -> Result<LinearInequality, Failure> {
    let text = read(path)?;
    let n = n.unwrap_or_else(|| infer_parties(&text));
    Ok(LinearInequality::parse(text.trim(), n)?)
}

fn run(command: &Command) -> Result<Output, Failure> {
    match command {
        Command::Entropy { model, subsystem } => {
            let (m, d) = load_model(model)?;
            let s = Subsystem::parse(subsystem, m.n())?;
            let e = m.entropy(s)?;
            Ok(Output {
                stdout: format!("{e}\n"),
                digest: Some(d),
                results: json!({ "subsystem": s.letters(), "entropy": e.to_string() }),
                code: 0,
            })
        }
        Command::EntropyVector { model } => {
            let (m, d) = load_model(model)?;
            let v = entropy_vector_json(&m.entropy_vector()?);
            Ok(Output {
                stdout: pretty(&v),
                digest: Some(d),
                results: json!({ "entropy_vector": v }),
                code: 0,
            })
        }
        Command::CheckIneq {
            model,
            ineq,
            method,
            map,
            exhaustive,
            samples,
            seed,
            indicator,
        } => {
            if *method == Method::Prop3 && map.is_none() {
                return Err(fail(code::USAGE, "--method prop3 needs --map"));
            }
            let (m, d) = load_model(model)?;
            let ineq = load_ineq(ineq, Some(m.n()))?;
            match method {
                Method::Direct => {
                    let e = ineq.evaluate_with(|s| m.entropy(s))?;
                    Ok(Output {
                        stdout: format!("{e}\n"),
                        digest: Some(d),
                        results: json!({
                            "holds": e.holds,
                            "lhs": e.lhs.to_string(),
                            "rhs": e.rhs.to_string(),
                        }),
                        code: if e.holds { 0 } else { code::VIOLATED },
                    })
                }
                Method::Prop3 => {
                    let ModelFile::Link(link) = m else {
                        return Err(fail(code::SEMANTIC, "the certificate method needs a link model"));
                    };
                    let f = parse_prop3_map(&read(map.as_deref().expect("checked above"))?, ineq.rhs_len())?;
                    let partition = build_trit_partition(&link, &ineq)?;
                    let table = compute_oracular_indicator(&link, &partition)?;
                    if let Some(path) = indicator {
                        write(path, &pretty(&table.to_json(&link)))?;
                    }
                    let coverage = if *exhaustive {
                        TupleCoverage::Exhaustive
                    } else {
                        TupleCoverage::Support {
                            samples: *samples,
                            seed: *seed,
                        }
                    };
                    let report = check_prop3_certificate(&link, &ineq, &partition, &table, &f, &coverage)?;
                    let mut stdout = if report.passed {
                        format!("certificate passed ({} tuples checked)\n", report.tuples_checked)
                    } else if let Some(c) = report.condition1.iter().find(|c| c.failure.is_some()) {
                        format!(
                            "certificate failed: U_{} for {} is invalid: {}\n",
                            c.term,
                            ineq.rhs()[c.term].subsystem,
                            c.failure.as_ref().expect("found a failure")
                        )
                    } else {
                        let v = report.violation.as_ref().expect("a failed check has a reason");
                        let tuple: Vec<String> = v.tuple.iter().map(|x| format!("({x})")).collect();
                        format!(
                            "certificate failed: n={} k={} tuple {} gives {} < {}\n",
                            v.n,
                            v.k,
                            tuple.join(" "),
                            v.lhs,
                            v.rhs
                        )
                    };
                    stdout.push_str(&format!("direct: {}\n", report.direct));
                    Ok(Output {
                        stdout,
                        digest: Some(d),
                        results: report.to_json(&link),
                        code: if report.passed { 0 } else { code::VIOLATED },
                    })
                }
            }
        }
        Command::FindContraction {
            ineq,
            parties,
            mode,
            budget,
            out,
        } => {
            let text = read(ineq)?;
            let n = parties.unwrap_or_else(|| infer_parties(&text));
            let ineq = LinearInequality::parse(text.trim(), n)?;
            let (outcome, stats) = search_contraction_map(&ineq, *mode, *budget)?;
            let stats_json = json!({
                "nodes": stats.nodes,
                "max_depth": stats.max_depth,
                "free_strings": stats.free_strings,
            });
            let stats_line = format!("nodes {}, depth {}", stats.nodes, stats.max_depth);
            let d = Some(digest(&text));
            match outcome {
                SearchOutcome::Found(f) => {
                    let map = pretty(&bitstring_map_json(&f));
                    let stdout = match out {
                        Some(path) => {
                            write(path, &map)?;
                            format!("Found; map written to {}\n{stats_line}\n", path.display())
                        }
                        None => map,
                    };
                    Ok(Output {
                        stdout,
                        digest: d,
                        results: json!({ "outcome": "Found", "stats": stats_json }),
                        code: 0,
                    })
                }
                SearchOutcome::NotFound => Ok(Output {
                    stdout: format!("NotFound\n{stats_line}\n"),
                    digest: d,
                    results: json!({ "outcome": "NotFound", "stats": stats_json }),
                    code: code::VIOLATED,
                }),
                SearchOutcome::BudgetExceeded => Err(fail(
                    code::BUDGET,
                    format!("budget exceeded after {stats_line}"),
                )),
            }
        }
        Command::Convert { model, out } => {
            let text = read(model)?;
            let h = match ModelFile::parse(&text)? {
                ModelFile::Hypergraph(h) => h,
                ModelFile::Graph(g) => Hypergraph::from_graph(&g),
                ModelFile::Link(_) => return Err(fail(code::SEMANTIC, "convert expects a hypergraph or graph")),
            };
            let link = hypergraph_to_link(&h);
            let hv = entropy_vector_json(&h.entropy_vector()?);
            let lv = entropy_vector_json(&link.entropy_vector()?);
            let equal = hv == lv;
            let model_text = pretty(&link_json(&link));
            let summary = format!(
                "hypergraph: {}\nlink:       {}\nvectors equal: {equal}\n",
                serde_json::to_string(&hv).expect("serializes"),
                serde_json::to_string(&lv).expect("serializes")
            );
            let stdout = match out {
                Some(path) => {
                    write(path, &model_text)?;
                    summary
                }
                None => {
                    eprint!("{summary}");
                    model_text
                }
            };
            Ok(Output {
                stdout,
                digest: Some(digest(&text)),
                results: json!({ "hypergraph_vector": hv, "link_vector": lv, "equal": equal }),
                code: if equal { 0 } else { code::VIOLATED },
            })
        }
        Command::Generate(g) => {
            let model = match (g.builtin, g.kind) {
                (Some(Builtin::Ray15), _) => ModelFile::Link(ray15_link()),
                (None, Kind::Link) => {
                    let mut p = LinkParams::new(g.parties, g.loops, g.atoms, g.max_arity, g.seed);
                    p.max_weight = g.max_weight;
                    ModelFile::Link(random_link(&p)?)
                }
                (None, Kind::Hypergraph) => ModelFile::Hypergraph(random_hypergraph(&HypergraphParams {
                    parties: g.parties,
                    vertices: g.vertices,
                    edges: g.edges,
                    max_rank: g.max_rank,
                    max_weight: g.max_weight,
                    seed: g.seed,
                })?),
                (None, Kind::Graph) => {
                    ModelFile::Graph(random_graph(g.parties, g.vertices, g.edges, g.max_weight, g.seed)?)
                }
            };
            let text = model.to_pretty_string();
            let stdout = match &g.out {
                Some(path) => {
                    write(path, &text)?;
                    String::new()
                }
                None => text.clone(),
            };
            Ok(Output {
                stdout,
                digest: Some(digest(&text)),
                results: json!({ "kind": model.kind() }),
                code: 0,
            })
        }
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { code::USAGE } else { 0 });
        }
    };
    let (code, results, digest) = match run(&cli.command) {
        Ok(out) => {
            print!("{}", out.stdout);
            (out.code, out.results, out.digest)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            (f.code, json!({ "error": f.message }), None)
        }
    };
    if let Some(path) = &cli.report {
        let report = json!({
            "command": args[1..],
            "model_digest": digest,
            "results": results,
            "exit_code": code,
        });
        if let Err(e) = fs::write(path, pretty(&report)) {
            eprintln!("error: cannot write report {}: {e}", path.display());
        }
    }
    ExitCode::from(code)
}
