//! `sidokit`: arrangeability certificates, homomorphism counts, exact
//! inequality runs, constructions and functional identity reports.
//!
//! Exit status: 0 success or inequality holds, 1 negative result, 2 usage
//! or I/O error.

mod address;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{ArgMatches, Args, CommandFactory, FromArgMatches, Parser, Subcommand};
use serde_json::json;

use address::Address;
use sidokit::arrange::decide_tree_arrangeable;
use sidokit::construct::{cartesian_product, degree_split, phi, psi, tensor_product, PSI_VERTEX_LIMIT};
use sidokit::graph6::write_graph6;
use sidokit::hom::{count_hom, count_hom_bruteforce};
use sidokit::proof::check_section2_identities;
use sidokit::rational::{parse_rational, Rational};
use sidokit::verify::{classify, corpus_run, load_source, RunOptions, Source, Status};
use sidokit::Graph;

#[derive(Parser)]
#[command(name = "sidokit", version, about = "Exact tools for homomorphism-density inequalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide tree-arrangeability and print the certificate as JSON.
    CheckArrangeable {
        #[command(flatten)]
        input: OneGraph,
    },
    /// Print |Hom(H, G)|.
    Count {
        /// Pattern graph address
        #[arg(long)]
        h: Address,
        /// Target graph address
        #[arg(long)]
        g: Address,
        /// Counting method.
        #[arg(long, value_enum, default_value = "dp")]
        method: Method,
    },
    /// Check t_H(G) >= t_K2(G)^|E(H)| exactly; one JSON line per pair.
    Verify(VerifyArgs),
    /// Build a graph and print it in graph6.
    Construct {
        #[command(subcommand)]
        kind: Construct,
    },
    /// Evaluate the normalised-functional identities by full enumeration.
    CertifyProof(CertifyArgs),
    /// Classify H as tree-arrangeable, closure-derived or unknown.
    Classify {
        #[command(flatten)]
        input: OneGraph,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Method {
    Dp,
    Brute,
}

#[derive(Args)]
struct OneGraph {
    /// Graph address.
    #[arg(long, alias = "h", conflicts_with = "named")]
    graph: Option<Address>,
    /// Named graph: KEY followed by its parameters.
    #[arg(long, num_args = 1.., value_name = "KEY PARAMS")]
    named: Option<Vec<String>>,
}

impl OneGraph {
    fn load(&self) -> Result<Graph> {
        match (&self.graph, &self.named) {
            (Some(a), None) => a.load(),
            (None, Some(words)) => Address::named(words)?.load(),
            _ => bail!("give the graph with --graph ADDRESS or --named KEY PARAMS"),
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// Source of H graphs.
    /// Pattern graph address
    #[arg(long)]
    h: Address,
    /// Source of G graphs.
    #[arg(long, conflicts_with = "random", required_unless_present = "random")]
    g: Option<Address>,
    /// Random G ensemble: N P SEED COUNT, with P as "p/q".
    #[arg(long, num_args = 4, value_names = ["N", "P", "SEED", "COUNT"])]
    random: Option<Vec<String>>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Report zero timings so output is reproducible byte for byte.
    #[arg(long)]
    no_timings: bool,
    /// Write records here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Write the summary here instead of standard error.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Args)]
struct CertifyArgs {
    /// Pattern graph address
    #[arg(long)]
    h: Address,
    /// Target graph address
    #[arg(long)]
    g: Address,
    /// Positive rational "p/q".
    #[arg(long)]
    eps: String,
    /// Side A as comma-separated vertices; default from the decider.
    #[arg(long, value_delimiter = ',', requires = "tree")]
    side_a: Option<Vec<usize>>,
    /// Tree on side A as comma-separated `u-v` edges; an empty string is the
    /// one-vertex tree.
    #[arg(long, requires = "side_a")]
    tree: Option<String>,
}

#[derive(Subcommand)]
enum Construct {
    /// Cartesian product of two graphs; pair (w, v) is vertex w*|V2| + v.
    Product(TwoGraphs),
    /// Tensor product of two graphs, same indexing.
    Tensor(TwoGraphs),
    /// Graph on Hom(T, G) with coordinatewise adjacency.
    Psi {
        /// Tree address
        #[arg(long)]
        t: Address,
        /// Target graph address
        #[arg(long)]
        g: Address,
        #[arg(long, default_value_t = PSI_VERTEX_LIMIT)]
        limit: usize,
        /// Print JSON with the homomorphism behind each vertex.
        #[arg(long)]
        json: bool,
        /// Write the result here instead of standard output
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Bipartite double of a graph.
    Phi {
        #[command(flatten)]
        input: OneGraph,
        /// Write the result here instead of standard output
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Degree splitting; --json adds the copy-to-vertex map.
    Split {
        #[arg(long, alias = "graph")]
        g: Address,
        #[arg(long)]
        json: bool,
        /// Write the result here instead of standard output
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// A catalogue graph: KEY PARAMS...
    Named {
        #[arg(required = true, num_args = 1..)]
        words: Vec<String>,
        /// Write the result here instead of standard output
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

/// Two operands, given by `--named KEY PARAMS` and `--graph ADDRESS` in
/// command-line order.
#[derive(Args)]
struct TwoGraphs {
    #[arg(long, num_args = 1.., value_name = "KEY PARAMS", action = clap::ArgAction::Append)]
    named: Vec<String>,
    #[arg(long, alias = "g", action = clap::ArgAction::Append)]
    graph: Vec<Address>,
    /// Write the result here instead of standard output
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Operands of a two-graph construction in command-line order.
fn ordered_operands(m: &ArgMatches) -> Result<Vec<Address>> {
    let mut found: Vec<(usize, Address)> = Vec::new();
    if let (Some(groups), Some(indices)) = (m.get_occurrences::<String>("named"), m.indices_of("named")) {
        let indices: Vec<usize> = indices.collect();
        let mut at = 0;
        for group in groups {
            let words: Vec<String> = group.cloned().collect();
            found.push((indices[at], Address::named(&words)?));
            at += words.len();
        }
    }
    if let (Some(values), Some(indices)) = (m.get_many::<Address>("graph"), m.indices_of("graph")) {
        found.extend(indices.zip(values.cloned()));
    }
    found.sort_by_key(|(i, _)| *i);
    if found.len() != 2 {
        bail!("expected two graphs, got {}", found.len());
    }
    Ok(found.into_iter().map(|(_, a)| a).collect())
}

enum Outcome {
    Success,
    Negative,
}

fn writer(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    })
}

fn emit(path: &Option<PathBuf>, text: &str) -> Result<()> {
    let mut out = writer(path)?;
    writeln!(out, "{text}")?;
    out.flush()?;
    Ok(())
}

fn eps_arg(text: &str) -> Result<Rational> {
    let eps = parse_rational(text)?;
    if eps <= Rational::from_integer(0.into()) {
        bail!("--eps must be positive, got {text}");
    }
    Ok(eps)
}

fn parse_tree(text: &str) -> Result<Vec<(usize, usize)>> {
    text.split(',')
        .filter(|e| !e.trim().is_empty())
        .map(|e| {
            let (u, v) = e.split_once('-').ok_or_else(|| anyhow!("tree edge {e:?} is not u-v"))?;
            Ok((u.trim().parse()?, v.trim().parse()?))
        })
        .collect()
}

fn run(cli: Cli, matches: &ArgMatches) -> Result<Outcome> {
    match cli.command {
        Command::CheckArrangeable { input } => {
            let h = input.load()?;
            let cert = decide_tree_arrangeable(&h)?;
            emit(&None, &serde_json::to_string(&cert)?)?;
            Ok(if cert.is_arrangeable() {
                Outcome::Success
            } else {
                Outcome::Negative
            })
        }
        Command::Count { h, g, method } => {
            let (h, g) = (h.load()?, g.load()?);
            let count = match method {
                Method::Dp => count_hom(&h, &g),
                Method::Brute => count_hom_bruteforce(&h, &g)?,
            };
            emit(&None, &count.to_string())?;
            Ok(Outcome::Success)
        }
        Command::Verify(args) => verify(args),
        Command::Construct { kind } => {
            let sub = matches
                .subcommand_matches("construct")
                .and_then(ArgMatches::subcommand)
                .map(|(_, m)| m)
                .expect("construct was parsed");
            construct(kind, sub)?;
            Ok(Outcome::Success)
        }
        Command::CertifyProof(args) => {
            let eps = eps_arg(&args.eps)?;
            let (h, g) = (args.h.load()?, args.g.load()?);
            let (side_a, tree) = match (args.side_a, args.tree) {
                (Some(side), Some(tree)) => (side, parse_tree(&tree)?),
                _ => {
                    let cert = decide_tree_arrangeable(&h)?;
                    match (cert.bipartition, cert.tree) {
                        (Some(b), Some(t)) => (b.side_a, t),
                        _ => bail!("H is not tree-arrangeable; give --side-a and --tree explicitly"),
                    }
                }
            };
            let report = check_section2_identities(&h, &side_a, &tree, &g, &eps)?;
            emit(&None, &serde_json::to_string(&report)?)?;
            Ok(if report.all_pass {
                Outcome::Success
            } else {
                Outcome::Negative
            })
        }
        Command::Classify { input } => {
            let h = input.load()?;
            let id = match (&input.graph, &input.named) {
                (Some(a), _) => a.to_string(),
                (None, words) => Address::named(&words.clone().unwrap_or_default())?.to_string(),
            };
            let record = classify(&id, &h)?;
            emit(&None, &serde_json::to_string(&record)?)?;
            Ok(if record.status == Status::Unknown {
                Outcome::Negative
            } else {
                Outcome::Success
            })
        }
    }
}

fn verify(args: VerifyArgs) -> Result<Outcome> {
    let hs = load_source(&args.h.source()?)?;
    let g_source = match (&args.g, &args.random) {
        (Some(g), None) => g.source()?,
        (None, Some(r)) => Source::Random {
            n: r[0].parse().with_context(|| format!("bad N {:?}", r[0]))?,
            p: parse_rational(&r[1])?,
            seed: r[2].parse().with_context(|| format!("bad SEED {:?}", r[2]))?,
            count: r[3].parse().with_context(|| format!("bad COUNT {:?}", r[3]))?,
        },
        _ => bail!("give G with --g ADDRESS or --random N P SEED COUNT"),
    };
    let gs = load_source(&g_source)?;
    let options = RunOptions {
        workers: args.workers,
        timings: !args.no_timings,
    };
    let mut out = writer(&args.output)?;
    let mut io_result = Ok(());
    let summary = corpus_run(&hs, &gs, options, |record| {
        if io_result.is_ok() {
            io_result = serde_json::to_string(record)
                .map_err(anyhow::Error::from)
                .and_then(|line| writeln!(out, "{line}").map_err(Into::into));
        }
    });
    io_result?;
    out.flush()?;
    let summary_json = serde_json::to_string(&summary)?;
    match &args.summary {
        Some(path) => std::fs::write(path, summary_json + "\n").with_context(|| format!("writing {}", path.display()))?,
        None => eprintln!("{summary_json}"),
    }
    if !summary.violations.is_empty() {
        Ok(Outcome::Negative)
    } else if summary.errors > 0 {
        Err(anyhow!("{} pair(s) could not be evaluated", summary.errors))
    } else {
        Ok(Outcome::Success)
    }
}

fn construct(kind: Construct, m: &ArgMatches) -> Result<()> {
    let graph6 = |g: &Graph| write_graph6(g).map_err(|e| anyhow!("{e}"));
    match kind {
        Construct::Product(args) => {
            let ops = ordered_operands(m)?;
            let (a, b) = (ops[0].load()?, ops[1].load()?);
            emit(&args.output, &graph6(&cartesian_product(&a, &b).graph)?)
        }
        Construct::Tensor(args) => {
            let ops = ordered_operands(m)?;
            let (a, b) = (ops[0].load()?, ops[1].load()?);
            emit(&args.output, &graph6(&tensor_product(&a, &b))?)
        }
        Construct::Psi {
            t,
            g,
            limit,
            json,
            output,
        } => {
            let p = psi(&t.load()?, &g.load()?, limit)?;
            let text = if json {
                json!({ "graph6": graph6(&p.graph)?, "homs": p.homs }).to_string()
            } else {
                graph6(&p.graph)?
            };
            emit(&output, &text)
        }
        Construct::Phi { input, output } => emit(&output, &graph6(&phi(&input.load()?))?),
        Construct::Split { g, json, output } => {
            let s = degree_split(&g.load()?)?;
            let text = if json {
                json!({
                    "graph6": graph6(&s.graph)?,
                    "origin": s.origin,
                    "average_degree": sidokit::rational::format_rational(&s.average_degree),
                })
                .to_string()
            } else {
                graph6(&s.graph)?
            };
            emit(&output, &text)
        }
        Construct::Named { words, output } => emit(&output, &graph6(&Address::named(&words)?.load()?)?),
    }
}

fn main() -> ExitCode {
    let matches = Cli::command().get_matches();
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli, &matches) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::Negative) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
