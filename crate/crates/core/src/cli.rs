//! Command-line front end. `run` parses arguments, resolves built-in or file
//! inputs, and writes deterministic output.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::algebra::{AlgebraJson, FiniteAlgebra, FreeCaps};
use crate::condition::{generate_with, Representative};
use crate::error::{Error, Result};
use crate::eval;
use crate::fixtures;
use crate::graph::LabeledGraph;
use crate::relation::FinRelation;
use crate::term::parse_term;
use crate::verify::{self, Sample, VerificationReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "malcev", version, about = "Mal'cev conditions from labeled graphs")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Largest number of free-algebra elements.
    #[arg(long, global = true)]
    pub cap_elements: Option<usize>,
    /// Largest `s^m` coordinate count for free algebras.
    #[arg(long, global = true)]
    pub cap_power: Option<usize>,
    /// Accepted for compatibility; every command is deterministic.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Print elapsed time of verification commands to stderr.
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Rep {
    Min,
    Max,
}

#[derive(Args, Debug, Clone)]
pub struct TermArgs {
    /// Term such as `a1 o (a2 & a1)`.
    pub term: String,
    /// Number of relation variables.
    #[arg(long, short = 'n', default_value_t = 2)]
    pub labels: usize,
}

#[derive(Args, Debug, Clone)]
pub struct PairArgs {
    /// Graph G: built-in name or JSON file.
    #[arg(long)]
    pub g: String,
    /// Graph H: built-in name or JSON file.
    #[arg(long)]
    pub h: String,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    /// Algebra generating the variety: built-in name or JSON file.
    #[arg(long)]
    pub algebra: String,
    #[command(flatten)]
    pub graphs: PairArgs,
    /// Comma-separated sample algebras; defaults to the algebra and its square.
    #[arg(long, value_delimiter = ',')]
    pub samples: Vec<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a term and print it back.
    ParseTerm(TermArgs),
    /// Graph of a term.
    TermGraph(TermArgs),
    /// Classes of each label equivalence.
    Partition {
        #[arg(long)]
        g: String,
    },
    /// Whether every label class has at most two vertices.
    Regular {
        #[arg(long)]
        g: String,
    },
    /// Exponents k₁ … kₙ of a graph.
    KConstants {
        #[arg(long)]
        g: String,
    },
    /// Identity set of the Mal'cev condition for a pair of graphs.
    GenMalcev {
        #[command(flatten)]
        graphs: PairArgs,
        /// Substitute projections and drop trivial identities.
        #[arg(long)]
        simplify: bool,
        /// Vertex naming each label class.
        #[arg(long, value_enum, default_value_t = Rep::Min)]
        representative: Rep,
    },
    /// The relation a graph defines from given relations.
    EvalRelation {
        #[arg(long)]
        g: String,
        /// JSON list of relations (file or inline).
        #[arg(long)]
        relations: String,
        /// Only decide this tuple and print the connecting assignment.
        #[arg(long, value_delimiter = ',')]
        tuple: Option<Vec<usize>>,
    },
    /// Decide G(R⃗) ⊆ H(R⃗).
    CheckInclusion {
        #[command(flatten)]
        graphs: PairArgs,
        #[arg(long)]
        relations: String,
    },
    /// Congruence lattice of an algebra.
    Congruences {
        #[arg(long)]
        algebra: String,
    },
    /// Tolerances of an algebra with their classification.
    Tolerances {
        #[arg(long)]
        algebra: String,
    },
    /// Free algebra on m generators of the variety of an algebra.
    FreeAlgebra {
        #[arg(long)]
        algebra: String,
        #[arg(long, short = 'm')]
        generators: usize,
    },
    /// Congruence inclusion on the variety, with extracted terms.
    VerifyWp(VerifyArgs),
    /// Congruence and tolerance clauses for a regular graph.
    VerifyContolnuo(VerifyArgs),
    /// Tolerance inclusion with exponents computed from G.
    VerifyContolnuok(VerifyArgs),
    /// Alternating products of congruence pairs.
    VerifyCornuo {
        #[command(flatten)]
        args: VerifyArgs,
        /// Odd factor counts.
        #[arg(long, value_delimiter = ',', default_value = "1,3,5")]
        m: Vec<usize>,
    },
    /// Whether a graph is the graph of some term of bounded size.
    Realizable {
        #[arg(long)]
        g: String,
        #[arg(long, default_value_t = 8)]
        max_size: usize,
    },
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn read_input(source: &str) -> Result<String> {
    let trimmed = source.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(source.to_string());
    }
    Ok(std::fs::read_to_string(Path::new(source))?)
}

pub fn load_graph(source: &str) -> Result<LabeledGraph> {
    if let Some(g) = fixtures::builtin_graph(source) {
        return Ok(g);
    }
    Ok(serde_json::from_str(&read_input(source)?)?)
}

pub fn load_algebra(source: &str) -> Result<FiniteAlgebra> {
    if let Some(a) = FiniteAlgebra::builtin(source) {
        return Ok(a);
    }
    Ok(serde_json::from_str(&read_input(source)?)?)
}

pub fn load_relations(source: &str) -> Result<Vec<FinRelation>> {
    Ok(serde_json::from_str(&read_input(source)?)?)
}

fn caps(global: &Global) -> FreeCaps {
    let mut caps = FreeCaps::default();
    if let Some(e) = global.cap_elements {
        caps.max_elements = e;
    }
    if let Some(p) = global.cap_power {
        caps.max_power = p;
    }
    caps
}

/// Sample algebras; a sample named `alg` or `alg^k` is recorded as a power
/// of the generating algebra.
fn load_samples(alg_name: &str, alg: &FiniteAlgebra, names: &[String]) -> Result<Vec<Sample>> {
    if names.is_empty() {
        return verify::default_samples(alg_name, alg);
    }
    names
        .iter()
        .map(|name| {
            let power = if name == alg_name {
                Some(1)
            } else {
                name.strip_prefix(alg_name)
                    .and_then(|rest| rest.strip_prefix('^'))
                    .and_then(|k| k.parse::<usize>().ok())
                    .filter(|&k| k >= 1)
            };
            match power {
                Some(k) => Sample::power_of(alg_name, alg, k).map(|mut s| {
                    s.name = name.clone();
                    s
                }),
                None => Ok(Sample::new(name.clone(), load_algebra(name)?)),
            }
        })
        .collect()
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn fmt_tuple(t: &[usize]) -> String {
    let parts: Vec<String> = t.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

fn fmt_blocks(blocks: &[Vec<usize>], name: impl Fn(usize) -> String) -> String {
    blocks
        .iter()
        .map(|b| format!("{{{}}}", b.iter().map(|&v| name(v)).collect::<Vec<_>>().join(",")))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Partition notation for equivalences, otherwise the off-diagonal pairs.
pub fn fmt_relation(r: &FinRelation) -> String {
    if let Some(classes) = r.classes() {
        return fmt_blocks(&classes, |v| v.to_string());
    }
    let pairs: Vec<String> = r
        .pairs()
        .filter(|(a, b)| a != b)
        .map(|(a, b)| format!("({a},{b})"))
        .collect();
    let diag = if r.is_reflexive() { "Δ ∪ " } else { "" };
    format!("{diag}{{{}}}", pairs.join(" "))
}

fn fmt_report(report: &VerificationReport) -> String {
    let mut s = String::new();
    let theorem = serde_json::to_value(report.theorem).expect("plain enum");
    let _ = writeln!(s, "theorem: {}", theorem.as_str().unwrap_or_default());
    for (k, v) in &report.inputs {
        let _ = writeln!(s, "input {k}: {v}");
    }
    for c in &report.clauses {
        let verdict = if c.holds { "holds" } else { "fails" };
        let _ = writeln!(s, "clause {} [{}]: {verdict} ({} checked)", c.clause, c.scope, c.checked);
        if let Some(cx) = &c.counterexample {
            let _ = writeln!(
                s,
                "  counterexample on {}: tuple {}",
                cx.algebra,
                fmt_tuple(&cx.tuple)
            );
            for (i, r) in cx.relations.iter().enumerate() {
                let _ = writeln!(s, "    G relation {}: {}", i + 1, fmt_relation(r));
            }
            for (i, r) in cx.h_relations.iter().flatten().enumerate() {
                let _ = writeln!(s, "    H relation {}: {}", i + 1, fmt_relation(r));
            }
        }
    }
    for a in &report.assertions {
        let _ = writeln!(s, "assert {}: {}", a.statement, if a.holds { "ok" } else { "VIOLATED" });
    }
    let _ = writeln!(s, "result: {}", if report.passed { "PASS" } else { "FAIL" });
    s
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let format = cli.global.format;
    let caps = caps(&cli.global);
    let mut code = EXIT_OK;
    let text = match &cli.command {
        Command::ParseTerm(t) => {
            let term = parse_term(&t.term, t.labels)?;
            match format {
                Format::Json => json(&term)?,
                _ => format!("{term}\n"),
            }
        }
        Command::TermGraph(t) => {
            let term = parse_term(&t.term, t.labels)?;
            let g = term.to_graph(t.labels)?;
            match format {
                Format::Json => json(&g)?,
                _ => fmt_graph(&g),
            }
        }
        Command::Partition { g } => {
            let g = load_graph(g)?;
            warn(&g, err);
            let parts = g.label_partitions();
            match format {
                Format::Json => {
                    let named: Vec<Vec<Vec<&str>>> = parts
                        .iter()
                        .map(|p| {
                            p.blocks
                                .iter()
                                .map(|b| b.iter().map(|&v| g.name(v)).collect())
                                .collect()
                        })
                        .collect();
                    json(&named)?
                }
                _ => parts
                    .iter()
                    .map(|p| {
                        format!(
                            "a{}: {}\n",
                            p.label,
                            fmt_blocks(&p.blocks, |v| g.name(v).to_string())
                        )
                    })
                    .collect(),
            }
        }
        Command::Regular { g } => {
            let g = load_graph(g)?;
            match format {
                Format::Json => json(&g.is_regular())?,
                _ => format!("{}\n", g.is_regular()),
            }
        }
        Command::KConstants { g } => {
            let g = load_graph(g)?;
            let ks = g.k_constants();
            match format {
                Format::Json => json(&ks)?,
                _ => format!(
                    "{}\n",
                    ks.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(" ")
                ),
            }
        }
        Command::GenMalcev {
            graphs,
            simplify,
            representative,
        } => {
            let g = load_graph(&graphs.g)?;
            let h = load_graph(&graphs.h)?;
            warn(&g, err);
            warn(&h, err);
            let choice = match representative {
                Rep::Min => Representative::Min,
                Rep::Max => Representative::Max,
            };
            let mut set = generate_with(&g, &h, choice)?;
            if *simplify {
                set = set.simplified();
            }
            match format {
                Format::Text => set.to_string(),
                Format::Json => json(&set)?,
                Format::Latex => set.to_latex(),
            }
        }
        Command::EvalRelation { g, relations, tuple } => {
            let g = load_graph(g)?;
            let rels = load_relations(relations)?;
            match tuple {
                Some(t) => {
                    let conn = eval::connect(&g, &rels, t)?;
                    let named = conn.map(|c| c.to_named(&g));
                    match format {
                        Format::Json => json(&named)?,
                        _ => match named {
                            Some(m) => m.iter().map(|(v, a)| format!("{v} = {a}\n")).collect(),
                            None => "not connected\n".to_string(),
                        },
                    }
                }
                None => {
                    let tuples = eval::relation(&g, &rels)?;
                    match format {
                        Format::Json => json(&tuples)?,
                        _ => tuples.iter().map(|t| format!("{}\n", fmt_tuple(t))).collect(),
                    }
                }
            }
        }
        Command::CheckInclusion { graphs, relations } => {
            let g = load_graph(&graphs.g)?;
            let h = load_graph(&graphs.h)?;
            let rels = load_relations(relations)?;
            let inc = eval::check_inclusion(&g, &h, &rels)?;
            match format {
                Format::Json => json(&inc)?,
                _ => match &inc.counterexample {
                    None => "holds\n".to_string(),
                    Some(t) => format!("fails at {}\n", fmt_tuple(t)),
                },
            }
        }
        Command::Congruences { algebra } => {
            let alg = load_algebra(algebra)?;
            let cons = alg.congruences()?;
            match format {
                Format::Json => json(&cons)?,
                _ => cons.iter().map(|c| format!("{}\n", fmt_relation(c))).collect(),
            }
        }
        Command::Tolerances { algebra } => {
            let alg = load_algebra(algebra)?;
            let tols = alg.tolerances()?;
            match format {
                Format::Json => json(&tols)?,
                _ => tols
                    .iter()
                    .map(|t| {
                        let class = serde_json::to_value(t.class).expect("plain enum");
                        format!(
                            "{}: {}\n",
                            class.as_str().unwrap_or_default(),
                            fmt_relation(&t.relation)
                        )
                    })
                    .collect(),
            }
        }
        Command::FreeAlgebra { algebra, generators } => {
            let alg = load_algebra(algebra)?;
            let free = alg.free_algebra(*generators, caps)?;
            match format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct FreeJson {
                        generators: usize,
                        elements: Vec<Vec<u8>>,
                        #[serde(flatten)]
                        algebra: AlgebraJson,
                    }
                    let algebra = AlgebraJson::from(&free.to_algebra()?);
                    json(&FreeJson {
                        generators: *generators,
                        elements: (0..free.len()).map(|i| free.element(i).to_vec()).collect(),
                        algebra,
                    })?
                }
                _ => format!("{}\n", free.len()),
            }
        }
        Command::VerifyWp(args) => {
            let (alg, samples, g, h) = verify_inputs(args)?;
            let (report, outcome) =
                verify::check_wp(&args.algebra, &alg, &samples, &g, &h, caps)?;
            let terms: Option<BTreeMap<String, Vec<usize>>> = outcome.connection.as_ref().map(|conn| {
                conn.iter()
                    .enumerate()
                    .map(|(w, &e)| {
                        let op = outcome.free.as_operation(e, "");
                        (format!("t_{}", h.name(w)), op.table().to_vec())
                    })
                    .collect()
            });
            if !(outcome.holds && report.passed) {
                code = EXIT_FAILED;
            }
            timing(&cli.global, &report, err);
            match format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct WpJson<'a> {
                        holds: bool,
                        free_size: usize,
                        terms: Option<BTreeMap<String, Vec<usize>>>,
                        report: &'a VerificationReport,
                    }
                    json(&WpJson {
                        holds: outcome.holds,
                        free_size: outcome.free.len(),
                        terms,
                        report: &report,
                    })?
                }
                _ => {
                    let mut s = format!(
                        "holds: {}\nfree algebra size: {}\n",
                        outcome.holds,
                        outcome.free.len()
                    );
                    for (sym, table) in terms.iter().flatten() {
                        let cells: Vec<String> = table.iter().map(|x| x.to_string()).collect();
                        let _ = writeln!(s, "{sym}: {}", cells.join(" "));
                    }
                    s + &fmt_report(&report)
                }
            }
        }
        Command::VerifyContolnuo(args) => {
            let (alg, samples, g, h) = verify_inputs(args)?;
            let report = verify::check_contolnuo(&args.algebra, &alg, &samples, &g, &h, caps)?;
            finish_report(&cli.global, &report, &mut code, err)?
        }
        Command::VerifyContolnuok(args) => {
            let (alg, samples, g, h) = verify_inputs(args)?;
            let report = verify::check_contolnuok(&args.algebra, &alg, &samples, &g, &h, caps)?;
            finish_report(&cli.global, &report, &mut code, err)?
        }
        Command::VerifyCornuo { args, m } => {
            let (alg, samples, g, h) = verify_inputs(args)?;
            let report = verify::check_cornuo(&args.algebra, &alg, &samples, &g, &h, m, caps)?;
            finish_report(&cli.global, &report, &mut code, err)?
        }
        Command::Realizable { g, max_size } => {
            let g = load_graph(g)?;
            let r = verify::term_realizability(&g, *max_size)?;
            match format {
                Format::Json => json(&r)?,
                _ => match &r.witness {
                    Some(t) => format!("true\nwitness: {t}\n"),
                    None => "false\n".to_string(),
                },
            }
        }
    };
    out.write_all(text.as_bytes())?;
    Ok(code)
}

fn verify_inputs(args: &VerifyArgs) -> Result<(FiniteAlgebra, Vec<Sample>, LabeledGraph, LabeledGraph)> {
    let alg = load_algebra(&args.algebra)?;
    let samples = load_samples(&args.algebra, &alg, &args.samples)?;
    let g = load_graph(&args.graphs.g)?;
    let h = load_graph(&args.graphs.h)?;
    Ok((alg, samples, g, h))
}

fn finish_report(
    global: &Global,
    report: &VerificationReport,
    code: &mut i32,
    err: &mut dyn Write,
) -> Result<String> {
    if !report.passed {
        *code = EXIT_FAILED;
    }
    timing(global, report, err);
    match global.format {
        Format::Json => json(report),
        _ => Ok(fmt_report(report)),
    }
}

fn timing(global: &Global, report: &VerificationReport, err: &mut dyn Write) {
    if global.timings {
        let _ = writeln!(err, "elapsed: {:.3}s", report.runtime.as_secs_f64());
    }
}

fn warn(g: &LabeledGraph, err: &mut dyn Write) {
    for w in g.warnings() {
        let _ = writeln!(err, "warning: {w}");
    }
}

fn fmt_graph(g: &LabeledGraph) -> String {
    let mut s = format!("vertices: {}\n", g.names().join(" "));
    let _ = writeln!(s, "labels: {}", g.label_count());
    for e in g.edges() {
        let _ = writeln!(s, "{} -a{}- {}", g.name(e.u), e.label, g.name(e.v));
    }
    let d: Vec<&str> = g.distinguished().iter().map(|&v| g.name(v)).collect();
    let _ = writeln!(s, "distinguished: {}", d.join(" "));
    s
}

impl From<std::fmt::Error> for Error {
    fn from(e: std::fmt::Error) -> Self {
        Error::Io(e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("malcev").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn regular_k4() {
        assert_eq!(call(&["regular", "--g", "k4"]), (0, "false\n".into(), String::new()));
        assert_eq!(call(&["k-constants", "--g", "path4"]).1, "4\n");
    }

    #[test]
    fn gen_malcev_formats() {
        let (code, text, _) = call(&["gen-malcev", "--g", "perm_g", "--h", "perm_h", "--simplify"]);
        assert_eq!(code, 0);
        assert_eq!(text, "t_v2(x_v1,x_v1,x_v3) = x_v3\nx_v1 = t_v2(x_v1,x_v2,x_v2)\n");
        let (code, latex, _) = call(&["gen-malcev", "--g", "perm_g", "--h", "perm_h", "--format", "latex"]);
        assert_eq!(code, 0);
        assert!(latex.contains("t_{"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["verify-wp", "--algebra", "z2", "--g", "perm_g", "--h", "perm_h"]).0, 0);
        assert_eq!(call(&["verify-wp", "--algebra", "chain2", "--g", "perm_g", "--h", "perm_h"]).0, 1);
        assert_eq!(call(&["verify-contolnuo", "--algebra", "z2", "--g", "k4", "--h", "k4"]).0, 2);
        assert_eq!(call(&["no-such-command"]).0, 2);
        assert_eq!(call(&["regular", "--g", "/no/such/file.json"]).0, 2);
        assert_eq!(call(&["parse-term", "a1 o", "-n", "1"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn witness_table_printed() {
        let (_, text, _) = call(&["verify-wp", "--algebra", "z2", "--g", "perm_g", "--h", "perm_h"]);
        assert!(text.contains("t_v2: 0 1 1 0 1 0 0 1\n"), "{text}");
    }

    #[test]
    fn relation_formatting() {
        let eq = FinRelation::from_partition(3, &[vec![0, 2], vec![1]]).unwrap();
        assert_eq!(fmt_relation(&eq), "{0,2} {1}");
        let tol = FinRelation::tolerance_from_pairs(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(fmt_relation(&tol), "Δ ∪ {(0,1) (1,0) (1,2) (2,1)}");
    }
}
