//! The `lpa` command line.
//!
//! Exit status: 0 on success, 1 on input errors, 2 when a graph does not
//! meet a precondition of the requested analysis, 64 on usage errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path as FsPath, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::corpus::{run_corpus, CorpusReport};
use crate::decision::{
    bounded_index, cycle_with_exit, decide, graded_primitive_spectrum, semisimple_decomposition, socle,
    DecompositionDescriptor, DescriptorReport, ElementPairWitness, Property, SocleReport,
    VerdictWithWitness, Witness, DEFAULT_WITNESS_ORDER,
};
use crate::element::Algebra;
use crate::error::{LpaError, Result};
use crate::field::Field;
use crate::graph::Graph;
use crate::parallel::Mode;
use crate::realization::{subdirect_faithfulness, SubdirectReport};
use crate::structure::{condition_report, maximal_tails, ConditionReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_REFUSED: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "lpa", version, about = "Leavitt path algebra workbench")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Coefficient field: `q` or `gf:p`.
    #[arg(long, global = true, default_value = "q", value_parser = parse_field)]
    field: Field,
    #[command(subcommand)]
    command: Command,
}

fn parse_field(s: &str) -> std::result::Result<Field, String> {
    s.parse().map_err(|e: LpaError| e.to_string())
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Vertex kinds, cycle conditions, maximal tails, verdicts and decompositions.
    Analyze { file: PathBuf },
    /// Decide one property, or `all`.
    Decide {
        property: PropertyArg,
        file: PathBuf,
        /// Order of the matrix-units witness for bounded index.
        #[arg(long, default_value_t = DEFAULT_WITNESS_ORDER)]
        order: usize,
    },
    /// Graded semisimple decomposition.
    Decompose { file: PathBuf },
    /// Graded primitive quotients and their matrix shapes.
    Spectrum { file: PathBuf },
    /// Line points and the ideal they generate.
    Socle { file: PathBuf },
    /// Emit a certificate as JSON.
    Witness {
        kind: WitnessKind,
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_WITNESS_ORDER)]
        order: usize,
    },
    /// Re-check every witness in a JSON report.
    VerifyWitness { file: PathBuf },
    /// Run every decider on seeded random graphs and cross-check them.
    Corpus {
        #[arg(long, default_value_t = 500)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Include ω-families.
        #[arg(long)]
        omega: bool,
        #[arg(long)]
        sequential: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PropertyArg {
    All,
    DirectlyFinite,
    GradedSigmaV,
    SigmaV,
    BoundedIndex,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum WitnessKind {
    ElementPair,
    MatrixUnits,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub vertices: Vec<String>,
    pub edges: usize,
    pub sinks: Vec<String>,
    pub sources: Vec<String>,
    pub regular: Vec<String>,
    pub infinite_emitters: Vec<String>,
    pub line_points: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleReport {
    pub edges: Vec<String>,
    pub exits: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refusal {
    pub analysis: String,
    pub reason: String,
}

/// Everything `analyze` and `decide` print in JSON mode.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub graph: String,
    pub field: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summary: Option<Summary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conditions: Option<ConditionReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cycles: Vec<CycleReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub maximal_tails: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub verdicts: Vec<VerdictWithWitness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionDescriptor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<Vec<DescriptorReport>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subdirect: Option<SubdirectReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub socle: Option<SocleReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub refusals: Vec<Refusal>,
}

impl Report {
    fn new(g: &Graph, field: Field) -> Self {
        Report {
            graph: g.to_text(),
            field: field.to_string(),
            summary: None,
            conditions: None,
            cycles: Vec::new(),
            maximal_tails: Vec::new(),
            verdicts: Vec::new(),
            decomposition: None,
            spectrum: None,
            subdirect: None,
            socle: None,
            witness: None,
            refusals: Vec::new(),
        }
    }
}

/// Input problems and refusals, carrying their exit status.
struct Failure {
    code: i32,
    message: String,
}

impl From<LpaError> for Failure {
    fn from(e: LpaError) -> Self {
        let code = if e.is_refusal() { EXIT_REFUSED } else { EXIT_INPUT };
        Failure { code, message: e.to_string() }
    }
}

fn input(message: String) -> Failure {
    Failure { code: EXIT_INPUT, message }
}

fn read_graph(path: &FsPath) -> std::result::Result<Graph, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
    Graph::parse(&text).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn summary(g: &Graph) -> Summary {
    let c = g.classify();
    Summary {
        vertices: g.vertex_names().to_vec(),
        edges: g.edge_count(),
        sinks: g.names(&c.sinks),
        sources: g.names(&c.sources),
        regular: g.names(&c.regular),
        infinite_emitters: g.names(&c.infinite_emitters),
        line_points: g.names(&c.line_points),
    }
}

fn cycles(g: &Graph) -> Vec<CycleReport> {
    g.cycles()
        .iter()
        .map(|c| CycleReport {
            edges: c.edges.iter().map(|&e| g.edge_name(e)).collect(),
            exits: c.exits.iter().map(|&e| g.edge_name(e)).collect(),
        })
        .collect()
}

fn properties(p: PropertyArg) -> Vec<Property> {
    match p {
        PropertyArg::All => Property::ALL.to_vec(),
        PropertyArg::DirectlyFinite => vec![Property::DirectlyFinite],
        PropertyArg::GradedSigmaV => vec![Property::GradedSigmaV],
        PropertyArg::SigmaV => vec![Property::SigmaV],
        PropertyArg::BoundedIndex => vec![Property::BoundedIndex],
    }
}

fn spectrum_into(report: &mut Report, g: &Graph, field: Field) {
    let spectrum = graded_primitive_spectrum(g);
    report.spectrum = Some(spectrum.iter().map(|d| d.report(g)).collect());
    if g.is_acyclic() && !g.has_omega() && spectrum.iter().all(|d| d.shape.is_matrix_over_k()) {
        match subdirect_faithfulness(g, field, &spectrum) {
            Ok(s) => report.subdirect = Some(s),
            Err(e) => report.refusals.push(Refusal { analysis: "subdirect".into(), reason: e.to_string() }),
        }
    }
}

fn render_verdict(out: &mut String, v: &VerdictWithWitness) {
    let _ = writeln!(out, "{}: {}", v.property.name(), v.verdict);
    for line in &v.evidence {
        let _ = writeln!(out, "  {line}");
    }
    match &v.witness {
        Witness::None => {}
        Witness::CycleExit(w) => {
            let exit = w.exit.as_deref().unwrap_or("none");
            let _ = writeln!(out, "  witness: cycle {} with exit {exit}", w.cycle.join(" "));
        }
        Witness::ElementPair(w) => {
            let _ = writeln!(out, "  witness: x = {}, y = {}, u = {}", w.x, w.y, w.u);
        }
        Witness::MatrixUnits(w) => {
            let _ = writeln!(
                out,
                "  witness: {} matrix units from cycle {} and exit {}",
                w.order * w.order,
                w.cycle.join(" "),
                w.exit
            );
        }
        Witness::TailViolation(w) => {
            let _ = writeln!(
                out,
                "  witness: tail {{{}}}, infinite emitter {}, edge {} into the tail",
                w.tail.join(", "),
                w.vertex,
                w.edge_into_tail
            );
        }
    }
}

fn render(report: &Report) -> String {
    let mut out = String::new();
    if let Some(s) = &report.summary {
        let _ = writeln!(out, "vertices: {}", s.vertices.join(", "));
        let _ = writeln!(out, "edges: {}", s.edges);
        let _ = writeln!(out, "sinks: {}", s.sinks.join(", "));
        let _ = writeln!(out, "sources: {}", s.sources.join(", "));
        let _ = writeln!(out, "regular: {}", s.regular.join(", "));
        let _ = writeln!(out, "infinite emitters: {}", s.infinite_emitters.join(", "));
        let _ = writeln!(out, "line points: {}", s.line_points.join(", "));
    }
    for c in &report.cycles {
        let _ = writeln!(out, "cycle {} exits: {}", c.edges.join(" "), c.exits.join(", "));
    }
    if let Some(c) = &report.conditions {
        let _ = writeln!(out, "conditions: {}", serde_json::to_string(c).expect("serializable"));
    }
    for t in &report.maximal_tails {
        let _ = writeln!(out, "maximal tail: {{{}}}", t.join(", "));
    }
    for v in &report.verdicts {
        render_verdict(&mut out, v);
    }
    if let Some(d) = &report.decomposition {
        let _ = writeln!(out, "decomposition: {}", d.display());
    }
    if let Some(spec) = &report.spectrum {
        for d in spec {
            let flag = if d.candidate { " (candidate)" } else { "" };
            let _ = writeln!(
                out,
                "quotient H = {{{}}}, S = {{{}}}{flag}: {}",
                d.h.join(", "),
                d.s.join(", "),
                d.shape.display()
            );
        }
    }
    if let Some(s) = &report.subdirect {
        let _ = writeln!(
            out,
            "subdirect: rank {} of {} basis elements over {} quotients, faithful: {}",
            s.rank, s.basis_count, s.quotients, s.faithful
        );
    }
    if let Some(s) = &report.socle {
        let _ = writeln!(out, "line points: {}", s.generating_line_points.join(", "));
        let _ = writeln!(out, "closure: {}", s.hs_closure.join(", "));
        let _ = writeln!(out, "socle is the whole algebra: {}", s.is_whole_algebra);
    }
    for r in &report.refusals {
        let _ = writeln!(out, "{}: refused: {}", r.analysis, r.reason);
    }
    out
}

fn emit<T: Serialize>(json: bool, value: &T, text: impl FnOnce() -> String) -> String {
    if json {
        let mut s = serde_json::to_string_pretty(value).expect("serializable");
        s.push('\n');
        s
    } else {
        text()
    }
}

fn analyze(g: &Graph, field: Field) -> Report {
    let alg = Algebra::with_field(g, field);
    let mut report = Report::new(g, field);
    report.summary = Some(summary(g));
    report.conditions = Some(condition_report(g));
    report.cycles = cycles(g);
    report.maximal_tails = maximal_tails(g).iter().map(|t| g.names(&t.vertices)).collect();
    for p in Property::ALL {
        match decide(&alg, p, DEFAULT_WITNESS_ORDER) {
            Ok(v) => report.verdicts.push(v),
            Err(e) => report.refusals.push(Refusal { analysis: p.name().into(), reason: e.to_string() }),
        }
    }
    match semisimple_decomposition(g) {
        Ok(d) => report.decomposition = Some(d),
        Err(e) => report.refusals.push(Refusal { analysis: "decompose".into(), reason: e.to_string() }),
    }
    spectrum_into(&mut report, g, field);
    report.socle = Some(socle(g));
    report
}

/// Every witness in a report, or the bare `witness` field.
fn verify_document(text: &str) -> std::result::Result<Vec<String>, Failure> {
    let report: Report = serde_json::from_str(text).map_err(|e| input(format!("not a report: {e}")))?;
    let g = Graph::parse(&report.graph).map_err(|e| input(format!("embedded graph: {e}")))?;
    let field: Field = report.field.parse()?;
    let alg = Algebra::with_field(&g, field);
    let mut checked = Vec::new();
    let mut all: Vec<(String, &Witness)> =
        report.verdicts.iter().map(|v| (v.property.name().to_string(), &v.witness)).collect();
    if let Some(w) = &report.witness {
        all.push(("witness".into(), w));
    }
    for (name, w) in all {
        if w.is_none() {
            continue;
        }
        w.verify(&alg).map_err(|e| input(format!("{name}: witness rejected: {e}")))?;
        checked.push(name);
    }
    Ok(checked)
}

fn execute(cli: Cli) -> std::result::Result<String, Failure> {
    let field = cli.field;
    let json = cli.json;
    match cli.command {
        Command::Analyze { file } => {
            let g = read_graph(&file)?;
            let report = analyze(&g, field);
            Ok(emit(json, &report, || render(&report)))
        }
        Command::Decide { property, file, order } => {
            let g = read_graph(&file)?;
            let alg = Algebra::with_field(&g, field);
            let mut report = Report::new(&g, field);
            let props = properties(property);
            for p in &props {
                match decide(&alg, *p, order) {
                    Ok(v) => report.verdicts.push(v),
                    Err(e) if props.len() > 1 && e.is_refusal() => {
                        report.refusals.push(Refusal { analysis: p.name().into(), reason: e.to_string() })
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            Ok(emit(json, &report, || render(&report)))
        }
        Command::Decompose { file } => {
            let g = read_graph(&file)?;
            let mut report = Report::new(&g, field);
            report.decomposition = Some(semisimple_decomposition(&g)?);
            Ok(emit(json, &report, || render(&report)))
        }
        Command::Spectrum { file } => {
            let g = read_graph(&file)?;
            let mut report = Report::new(&g, field);
            spectrum_into(&mut report, &g, field);
            Ok(emit(json, &report, || render(&report)))
        }
        Command::Socle { file } => {
            let g = read_graph(&file)?;
            let mut report = Report::new(&g, field);
            report.socle = Some(socle(&g));
            Ok(emit(json, &report, || render(&report)))
        }
        Command::Witness { kind, file, order } => {
            let g = read_graph(&file)?;
            let alg = Algebra::with_field(&g, field);
            let witness = match kind {
                WitnessKind::ElementPair => {
                    let (c, _) = cycle_with_exit(&g)
                        .ok_or_else(|| LpaError::Precondition("no cycle has an exit".into()))?;
                    let w = ElementPairWitness::from_cycle(&alg, &c);
                    w.verify(&alg)?;
                    Witness::ElementPair(w)
                }
                WitnessKind::MatrixUnits => {
                    let b = bounded_index(&alg, order)?;
                    let w = b.witness.ok_or_else(|| LpaError::Precondition("no cycle has an exit".into()))?;
                    Witness::MatrixUnits(w)
                }
            };
            let mut report = Report::new(&g, field);
            report.witness = Some(witness);
            Ok(emit(true, &report, String::new))
        }
        Command::VerifyWitness { file } => {
            let text = std::fs::read_to_string(&file).map_err(|e| input(format!("{}: {e}", file.display())))?;
            let checked = verify_document(&text)?;
            Ok(emit(json, &checked, || {
                checked.iter().map(|name| format!("{name}: witness verified\n")).collect::<String>()
            }))
        }
        Command::Corpus { count, seed, omega, sequential } => {
            let mode = if sequential { Mode::Sequential } else { Mode::Parallel };
            let report = run_corpus(count, seed, omega, DEFAULT_WITNESS_ORDER, mode);
            let text = emit(json, &report, || render_corpus(&report));
            if report.failures.is_empty() {
                Ok(text)
            } else {
                Err(input(format!("{text}corpus found {} inconsistent graphs", report.failures.len())))
            }
        }
    }
}

fn render_corpus(r: &CorpusReport) -> String {
    format!(
        "graphs: {} (seed {}, {} with omega families)\nfour-way disagreements: {}\nroute disagreements: {}\n\
         sigma-v without graded sigma-v: {}\nwitness failures: {}\nerrors: {}\n",
        r.graphs,
        r.seed,
        r.with_omega,
        r.four_way_disagreements,
        r.route_disagreements,
        r.sigma_v_implication_failures,
        r.witness_failures,
        r.errors
    )
}

/// Runs the command line, writing the report to `out` and diagnostics to
/// `err`; returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(cli) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            EXIT_OK
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// Parses `text` as a graph, for callers holding the contents already.
pub fn analyze_text(text: &str, field: Field) -> Result<Report> {
    let g = Graph::parse(text)?;
    Ok(analyze(&g, field))
}
