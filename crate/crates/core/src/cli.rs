//! The `succmso` command line. Boolean queries print `true`/`false` and
//! also report the verdict through the exit code: 0 for true, 1 for false.
//! Operation errors exit with 1 after printing the error name; usage errors
//! exit with 2.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::efgame::{ef_equiv, q_bound, q_bound_total, q_search, saturating_scan};
use crate::graph::{delta, glue, parse_word, BiboundariedGraph, Digraph, Family, GraphObject};
use crate::mso::{eval, parse, Formula};
use crate::reduce::{
    build_quadruple, compile, normalize_layout, pump_check, quadruple_from_json, reduce_clique, reduce_loop,
    triple_from_json, CliqueVariant, CnfInstance, GadgetQuadruple, ReduceError,
};
use crate::sgr::Sgr;
use crate::treedec::{decomposition_of_delta, treewidth_with_order, DecompositionFile, TreeDecomposition};
use crate::verify::{delta_layout, end_to_end, sat_solve, seeded_battery, SatOutcome, BATTERY_SEED};
use crate::Error;

/// Materialization cap for commands that expand an SGR.
const MATERIALIZE_LIMIT: usize = 1 << 12;

#[derive(Debug, Parser)]
#[command(name = "succmso", version, about = "SAT-to-succinct-graph reductions and desk-scale MSO tools")]
pub struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized batteries.
    #[arg(long, global = true, default_value_t = BATTERY_SEED)]
    seed: u64,
    /// Worker threads for parallel evaluation.
    #[arg(long, global = true, env = "SUCCMSO_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    group: Group,
}

#[derive(Debug, Subcommand)]
enum Group {
    /// Succinct graph representations.
    #[command(subcommand)]
    Sgr(SgrCmd),
    /// MSO formulas.
    #[command(subcommand)]
    Mso(MsoCmd),
    /// Tree decompositions.
    #[command(subcommand)]
    Td(TdCmd),
    /// Ehrenfeucht–Fraïssé games and idempotence.
    #[command(subcommand)]
    Ef(EfCmd),
    /// Explicit and biboundaried graphs.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// SAT reductions and gadget quadruples.
    #[command(subcommand)]
    Reduce(ReduceCmd),
    /// Independent oracles.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Debug, Args)]
struct SgrFile {
    /// SGR bundle (JSON).
    #[arg(long)]
    sgr: PathBuf,
}

#[derive(Debug, Subcommand)]
enum SgrCmd {
    /// Expand to an explicit graph.
    Materialize {
        #[command(flatten)]
        file: SgrFile,
        #[arg(long, default_value_t = MATERIALIZE_LIMIT)]
        limit: usize,
    },
    /// Query one edge.
    Edge {
        #[command(flatten)]
        file: SgrFile,
        #[arg(long)]
        x: BigUint,
        #[arg(long)]
        y: BigUint,
    },
    /// Check the gate count against the size convention.
    CheckSize {
        #[command(flatten)]
        file: SgrFile,
    },
}

#[derive(Debug, Subcommand)]
enum MsoCmd {
    /// Evaluate a sentence on a graph.
    Check {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        formula: String,
    },
    /// Quantifier rank of a sentence.
    Rank {
        #[arg(long)]
        formula: String,
    },
    /// Parse and print a sentence in canonical form.
    Parse {
        #[arg(long)]
        formula: String,
    },
}

#[derive(Debug, Subcommand)]
enum TdCmd {
    /// Check a decomposition against a graph.
    Validate {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        td: PathBuf,
    },
    /// Width of a decomposition.
    Width {
        #[arg(long)]
        td: PathBuf,
    },
    /// Rewrite to maximum degree 3.
    Normalize3 {
        #[arg(long)]
        td: PathBuf,
    },
    /// Exact treewidth of a small graph.
    Treewidth {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Decomposition of a glued graph from per-gadget decompositions.
    OfDelta {
        /// Gadget family: JSON array (letter = index) or object keyed by letter.
        #[arg(long)]
        family: PathBuf,
        /// Decompositions, keyed the same way.
        #[arg(long)]
        decompositions: PathBuf,
        #[arg(long)]
        word: String,
    },
}

#[derive(Debug, Subcommand)]
enum EfCmd {
    /// Whether two graphs agree on all sentences of rank `m`.
    Equiv {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long)]
        m: usize,
    },
    /// Least `q` with `q·G ≡_m (q+1)·G`.
    Qsearch {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 8)]
        q_max: usize,
    },
    /// Explicit idempotence bound.
    Qbound {
        /// Vertex count of the graph.
        #[arg(long)]
        size: u64,
        /// Total moves; the bound is maximized over point/set splits.
        #[arg(long, conflicts_with_all = ["point_moves", "set_moves"])]
        m: Option<u64>,
        #[arg(long, requires = "set_moves")]
        point_moves: Option<u64>,
        #[arg(long, requires = "point_moves")]
        set_moves: Option<u64>,
    },
    /// Classify `Ω` as sufficient, forbidden or neither against small graphs.
    Saturate {
        #[arg(long)]
        omega: PathBuf,
        #[arg(long)]
        formula: String,
        /// Companions are all digraphs on 1..=this many vertices.
        #[arg(long, default_value_t = 2)]
        max_vertices: usize,
    },
}

#[derive(Debug, Subcommand)]
enum GraphCmd {
    /// Glue two biboundaried graphs.
    Glue {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
    /// Glue a family along a word.
    Delta {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Disjoint union.
    Union {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
    /// Isomorphism test for small graphs.
    Iso {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Variant {
    WithLoops,
    Irreflexive,
}

#[derive(Debug, Subcommand)]
enum ReduceCmd {
    /// Compile a CNF over a gadget quadruple into an SGR.
    Sat2sgr {
        #[arg(long)]
        cnf: PathBuf,
        /// JSON array `[G0, G1, G2, G3]`.
        #[arg(long)]
        gadgets: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Loop-or-successor reduction.
    Loop {
        #[arg(long)]
        cnf: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Clique reduction.
    Clique {
        #[arg(long)]
        cnf: PathBuf,
        #[arg(long, value_enum, default_value = "with-loops")]
        variant: Variant,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a quadruple from a triple and a saturating graph.
    BuildQuad {
        /// JSON array `[G1, G2, G3]`.
        #[arg(long)]
        triple: PathBuf,
        #[arg(long)]
        omega: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate and normalize a quadruple.
    ValidateQuad {
        #[arg(long)]
        gadgets: PathBuf,
    },
    /// Evaluate a sentence along the pumping words.
    PumpCheck {
        #[arg(long)]
        triple: PathBuf,
        #[arg(long)]
        formula: String,
        #[arg(long, action = clap::ArgAction::Set)]
        expected: bool,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
    },
    /// Out-neighbours of a label by integer arithmetic.
    SuccRef {
        #[arg(long)]
        gadgets: PathBuf,
        #[arg(long)]
        cnf: PathBuf,
        #[arg(long)]
        x: BigUint,
    },
}

#[derive(Debug, Subcommand)]
enum VerifyCmd {
    /// Decide a CNF.
    Sat {
        #[arg(long)]
        cnf: PathBuf,
    },
    /// Glued graph placed directly on layout labels.
    DeltaLayout {
        #[arg(long)]
        gadgets: PathBuf,
        #[arg(long)]
        cnf: PathBuf,
    },
    /// Full pipeline over a battery of instances.
    End2end {
        #[arg(long)]
        gadgets: PathBuf,
        #[arg(long)]
        formula: String,
        /// `builtin`, or a list of DIMACS files.
        #[arg(long, num_args = 1.., default_value = "builtin")]
        battery: Vec<String>,
    },
}

/// What a command produced.
struct Outcome {
    text: String,
    json: Value,
    verdict: Option<bool>,
}

impl Outcome {
    fn value(text: impl Into<String>, json: Value) -> Self {
        Outcome {
            text: text.into(),
            json,
            verdict: None,
        }
    }

    fn verdict(holds: bool, detail: &str, json: Value) -> Self {
        let mut text = holds.to_string();
        if !detail.is_empty() {
            text.push('\n');
            text.push_str(detail);
        }
        Outcome {
            text,
            json,
            verdict: Some(holds),
        }
    }
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write(path: &Path, contents: &str) -> Result<(), Error> {
    std::fs::write(path, contents).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn from_json<T: DeserializeOwned>(path: &Path, text: &str) -> Result<T, Error> {
    serde_json::from_str(text).map_err(|e| Error::Json {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// A graph file in the line format, or a JSON graph object.
fn read_bb(path: &Path) -> Result<BiboundariedGraph, Error> {
    let text = read(path)?;
    if text.trim_start().starts_with('{') {
        let obj: GraphObject = from_json(path, &text)?;
        Ok(BiboundariedGraph::try_from(obj)?)
    } else {
        Ok(BiboundariedGraph::from_text(&text)?)
    }
}

fn read_graph(path: &Path) -> Result<Digraph, Error> {
    read_bb(path).map(|g| g.graph().clone())
}

fn read_cnf(path: &Path) -> Result<CnfInstance, Error> {
    Ok(CnfInstance::parse_dimacs(&read(path)?)?)
}

fn read_quadruple(path: &Path) -> Result<Result<GadgetQuadruple, ReduceError>, Error> {
    Ok(normalize_layout(quadruple_from_json(&read(path)?)?))
}

fn validated_quadruple(path: &Path) -> Result<GadgetQuadruple, Error> {
    Ok(read_quadruple(path)??)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Keyed<T> {
    List(Vec<T>),
    Map(BTreeMap<String, T>),
}

fn read_keyed<T: DeserializeOwned>(path: &Path) -> Result<BTreeMap<usize, T>, Error> {
    let text = read(path)?;
    match from_json::<Keyed<T>>(path, &text)? {
        Keyed::List(items) => Ok(items.into_iter().enumerate().collect()),
        Keyed::Map(map) => map
            .into_iter()
            .map(|(k, v)| {
                k.parse().map(|letter| (letter, v)).map_err(|_| Error::Json {
                    path: path.display().to_string(),
                    message: format!("letter {k:?} is not a decimal integer"),
                })
            })
            .collect(),
    }
}

fn read_family(path: &Path) -> Result<Family, Error> {
    read_keyed::<GraphObject>(path)?
        .into_iter()
        .map(|(letter, obj)| Ok((letter, BiboundariedGraph::try_from(obj)?)))
        .collect()
}

fn graph_json(g: &BiboundariedGraph) -> Value {
    serde_json::to_value(GraphObject::from(g)).expect("graph objects serialize")
}

fn digraph_json(g: &Digraph) -> Value {
    serde_json::to_value(GraphObject::from(g)).expect("graph objects serialize")
}

fn td_json(t: &TreeDecomposition) -> Value {
    serde_json::to_value(DecompositionFile::from(t)).expect("decompositions serialize")
}

fn read_td(path: &Path) -> Result<TreeDecomposition, Error> {
    Ok(TreeDecomposition::from_json(&read(path)?)?)
}

fn sentence(text: &str) -> Result<Formula, Error> {
    Ok(parse(text)?)
}

fn emit_sgr(sgr: &Sgr, out: Option<&Path>, extra: Value) -> Result<Outcome, Error> {
    if let Some(path) = out {
        write(path, &sgr.to_json())?;
    }
    let mut json = json!({
        "n": sgr.n_vertices().to_string(),
        "gates": sgr.circuit().gate_count(),
        "label_bits": sgr.circuit().label_bits(),
    });
    if let (Value::Object(map), Value::Object(more)) = (&mut json, extra) {
        map.extend(more);
    }
    let text = if out.is_some() {
        sgr.n_vertices().to_string()
    } else {
        sgr.to_json()
    };
    Ok(Outcome::value(text, json))
}

fn run_sgr(cmd: SgrCmd) -> Result<Outcome, Error> {
    let load = |f: &SgrFile| -> Result<Sgr, Error> { Ok(Sgr::from_json(&read(&f.sgr)?)?) };
    match cmd {
        SgrCmd::Materialize { file, limit } => {
            let g = load(&file)?.materialize(limit)?;
            Ok(Outcome::value(g.to_text().trim_end(), digraph_json(&g)))
        }
        SgrCmd::Edge { file, x, y } => {
            let holds = load(&file)?.edge_query(&x, &y)?;
            Ok(Outcome::verdict(holds, "", json!({ "edge": holds })))
        }
        SgrCmd::CheckSize { file } => {
            let sgr = load(&file)?;
            let holds = sgr.check_size_convention();
            let detail = format!("gates {} bound {}", sgr.circuit().gate_count(), sgr.size_bound());
            Ok(Outcome::verdict(
                holds,
                &detail,
                json!({ "within": holds, "gates": sgr.circuit().gate_count(), "bound": sgr.size_bound().to_string() }),
            ))
        }
    }
}

fn run_mso(cmd: MsoCmd) -> Result<Outcome, Error> {
    match cmd {
        MsoCmd::Check { graph, formula } => {
            let holds = eval(&read_graph(&graph)?, &sentence(&formula)?)?;
            Ok(Outcome::verdict(holds, "", json!({ "holds": holds })))
        }
        MsoCmd::Rank { formula } => {
            let rank = sentence(&formula)?.rank();
            Ok(Outcome::value(rank.to_string(), json!({ "rank": rank })))
        }
        MsoCmd::Parse { formula } => {
            let f = sentence(&formula)?;
            Ok(Outcome::value(
                f.to_string(),
                json!({ "formula": f.to_string(), "rank": f.rank(), "monadic": f.has_set_quantifier() }),
            ))
        }
    }
}

fn run_td(cmd: TdCmd) -> Result<Outcome, Error> {
    match cmd {
        TdCmd::Validate { graph, td } => {
            let violations = read_td(&td)?.validate(&read_graph(&graph)?);
            let detail: Vec<String> = violations.iter().map(ToString::to_string).collect();
            Ok(Outcome::verdict(
                violations.is_empty(),
                &detail.join("\n"),
                json!({ "valid": violations.is_empty(), "violations": violations }),
            ))
        }
        TdCmd::Width { td } => {
            let t = read_td(&td)?;
            Ok(Outcome::value(t.width().to_string(), json!({ "width": t.width(), "nodes": t.node_count() })))
        }
        TdCmd::Normalize3 { td } => {
            let t = read_td(&td)?.normalize_degree3();
            Ok(Outcome::value(t.to_json(), td_json(&t)))
        }
        TdCmd::Treewidth { graph } => {
            let (width, order) = treewidth_with_order(&read_graph(&graph)?)?;
            Ok(Outcome::value(width.to_string(), json!({ "treewidth": width, "elimination_order": order })))
        }
        TdCmd::OfDelta {
            family,
            decompositions,
            word,
        } => {
            let gamma = read_family(&family)?;
            let decs = read_keyed::<DecompositionFile>(&decompositions)?
                .into_iter()
                .map(|(letter, f)| Ok((letter, TreeDecomposition::try_from(f)?)))
                .collect::<Result<BTreeMap<_, _>, Error>>()?;
            let word = parse_word(&word)?;
            let t = decomposition_of_delta(&gamma, &decs, &word)?;
            let glued = delta(&gamma, &word)?;
            let valid = t.is_valid_for(glued.graph());
            Ok(Outcome::value(
                t.to_json(),
                json!({ "decomposition": td_json(&t), "width": t.width(), "valid": valid }),
            ))
        }
    }
}

fn run_ef(cmd: EfCmd) -> Result<Outcome, Error> {
    match cmd {
        EfCmd::Equiv { left, right, m } => {
            let holds = ef_equiv(&read_graph(&left)?, &read_graph(&right)?, m)?;
            Ok(Outcome::verdict(holds, "", json!({ "equivalent": holds, "m": m })))
        }
        EfCmd::Qsearch { graph, m, q_max } => {
            let q = q_search(&read_graph(&graph)?, m, q_max)?;
            let text = q.map_or_else(|| format!("none up to {q_max}"), |q| q.to_string());
            let mut out = Outcome::value(text, json!({ "q": q, "m": m, "q_max": q_max }));
            out.verdict = Some(q.is_some());
            Ok(out)
        }
        EfCmd::Qbound {
            size,
            m,
            point_moves,
            set_moves,
        } => {
            let bound = match (m, point_moves, set_moves) {
                (Some(m), _, _) => q_bound_total(size, m)?,
                (None, Some(p), Some(s)) => q_bound(size, p, s)?,
                _ => q_bound_total(size, 0)?,
            };
            Ok(Outcome::value(bound.to_string(), json!({ "bound": bound.to_string() })))
        }
        EfCmd::Saturate {
            omega,
            formula,
            max_vertices,
        } => {
            if max_vertices > 3 {
                return Err(crate::graph::GraphError::TooLarge {
                    size: max_vertices,
                    limit: 3,
                }
                .into());
            }
            let companions: Vec<Digraph> = (1..=max_vertices).flat_map(Digraph::all_on).collect();
            let report = saturating_scan(&read_graph(&omega)?, &sentence(&formula)?, &companions)?;
            let text = format!("{:?} ({} of {} companions are models)", report.verdict, report.models, report.tried);
            Ok(Outcome::value(text.to_lowercase(), serde_json::to_value(&report).expect("reports serialize")))
        }
    }
}

fn run_graph(cmd: GraphCmd) -> Result<Outcome, Error> {
    match cmd {
        GraphCmd::Glue { left, right } => {
            let g = glue(&read_bb(&left)?, &read_bb(&right)?)?;
            Ok(Outcome::value(g.to_text().trim_end(), graph_json(&g)))
        }
        GraphCmd::Delta { family, word } => {
            let g = delta(&read_family(&family)?, &parse_word(&word)?)?;
            Ok(Outcome::value(g.to_text().trim_end(), graph_json(&g)))
        }
        GraphCmd::Union { left, right } => {
            let g = read_graph(&left)?.disjoint_union(&read_graph(&right)?);
            Ok(Outcome::value(g.to_text().trim_end(), digraph_json(&g)))
        }
        GraphCmd::Iso { left, right } => {
            let holds = read_graph(&left)?.isomorphic_small(&read_graph(&right)?)?;
            Ok(Outcome::verdict(holds, "", json!({ "isomorphic": holds })))
        }
    }
}

fn run_reduce(cmd: ReduceCmd) -> Result<Outcome, Error> {
    match cmd {
        ReduceCmd::Sat2sgr { cnf, gadgets, out } => {
            let sgr = compile(&validated_quadruple(&gadgets)?, &read_cnf(&cnf)?)?;
            emit_sgr(&sgr, out.as_deref(), json!({}))
        }
        ReduceCmd::Loop { cnf, out } => emit_sgr(&reduce_loop(&read_cnf(&cnf)?)?, out.as_deref(), json!({})),
        ReduceCmd::Clique { cnf, variant, out } => {
            let variant = match variant {
                Variant::WithLoops => CliqueVariant::WithLoops,
                Variant::Irreflexive => CliqueVariant::Irreflexive,
            };
            let sgr = reduce_clique(&read_cnf(&cnf)?)?;
            emit_sgr(&sgr, out.as_deref(), json!({ "sentence": variant.sentence() }))
        }
        ReduceCmd::BuildQuad { triple, omega, out } => {
            let quad = build_quadruple(&triple_from_json(&read(&triple)?)?, &read_graph(&omega)?)?;
            let text = quad.to_json();
            if let Some(path) = &out {
                write(path, &text)?;
            }
            let layout = serde_json::to_value(quad.layout()).expect("layouts serialize");
            let gadgets: Value = from_json(Path::new("<quadruple>"), &text)?;
            Ok(Outcome::value(text, json!({ "gadgets": gadgets, "layout": layout })))
        }
        ReduceCmd::ValidateQuad { gadgets } => match read_quadruple(&gadgets)? {
            Ok(quad) => {
                let layout = quad.layout();
                let detail = format!(
                    "k={} k_private={} k_shared={} n1={} n2={} n3={}",
                    layout.k, layout.k_private, layout.k_shared, layout.n1, layout.n2, layout.n3
                );
                Ok(Outcome::verdict(true, &detail, json!({ "valid": true, "layout": layout })))
            }
            Err(ReduceError::ValidationError { condition, detail }) => Ok(Outcome::verdict(
                false,
                &format!("{condition}: {detail}"),
                json!({ "valid": false, "condition": condition, "detail": detail }),
            )),
            Err(e) => Err(e.into()),
        },
        ReduceCmd::PumpCheck {
            triple,
            formula,
            expected,
            n_max,
        } => {
            let report = pump_check(&triple_from_json(&read(&triple)?)?, &sentence(&formula)?, expected, n_max)?;
            let detail = match report.first_mismatch {
                Some(n) => format!("mismatch at n={n}"),
                None => format!("checked n=0..={n_max}"),
            };
            Ok(Outcome::verdict(report.passed(), &detail, serde_json::to_value(&report).expect("reports serialize")))
        }
        ReduceCmd::SuccRef { gadgets, cnf, x } => {
            let out = validated_quadruple(&gadgets)?.succ_ref(&read_cnf(&cnf)?, &x)?;
            let labels: Vec<String> = out.iter().map(ToString::to_string).collect();
            Ok(Outcome::value(labels.join(" "), json!({ "x": x.to_string(), "successors": labels })))
        }
    }
}

fn run_verify(cmd: VerifyCmd, seed: u64) -> Result<Outcome, Error> {
    match cmd {
        VerifyCmd::Sat { cnf } => {
            let outcome = sat_solve(&read_cnf(&cnf)?);
            let mut out = Outcome::value(outcome.to_string(), serde_json::to_value(&outcome).expect("outcomes serialize"));
            out.verdict = Some(outcome != SatOutcome::Unsat);
            Ok(out)
        }
        VerifyCmd::DeltaLayout { gadgets, cnf } => {
            let g = delta_layout(&validated_quadruple(&gadgets)?, &read_cnf(&cnf)?)?;
            Ok(Outcome::value(g.to_text().trim_end(), digraph_json(&g)))
        }
        VerifyCmd::End2end {
            gadgets,
            formula,
            battery,
        } => {
            let quad = validated_quadruple(&gadgets)?;
            let instances = if battery == ["builtin"] {
                seeded_battery(seed)
            } else {
                battery.iter().map(|p| read_cnf(Path::new(p))).collect::<Result<_, _>>()?
            };
            let report = end_to_end(&quad, &sentence(&formula)?, &instances);
            let json = serde_json::to_value(&report).expect("reports serialize");
            let mut out = Outcome::value(report.to_string(), json);
            out.verdict = Some(report.passed);
            Ok(out)
        }
    }
}

fn dispatch(cli: Cli) -> Result<Outcome, Error> {
    if let Some(n) = cli.threads {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match cli.group {
        Group::Sgr(c) => run_sgr(c),
        Group::Mso(c) => run_mso(c),
        Group::Td(c) => run_td(c),
        Group::Ef(c) => run_ef(c),
        Group::Graph(c) => run_graph(c),
        Group::Reduce(c) => run_reduce(c),
        Group::Verify(c) => run_verify(c, cli.seed),
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(rendered.as_bytes())
            } else {
                stderr.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let json = cli.json;
    match dispatch(cli) {
        Ok(outcome) => {
            let mut body = if json {
                serde_json::to_string_pretty(&outcome.json).expect("values serialize")
            } else {
                outcome.text
            };
            if !body.ends_with('\n') {
                body.push('\n');
            }
            let _ = stdout.write_all(body.as_bytes());
            match outcome.verdict {
                Some(false) => 1,
                _ => 0,
            }
        }
        Err(e) => {
            let mut line = String::new();
            let _ = writeln!(line, "error: {}: {e}", e.kind());
            if json {
                let v = json!({ "error": e.kind(), "message": e.to_string() });
                let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&v).expect("values serialize"));
            }
            let _ = stderr.write_all(line.as_bytes());
            1
        }
    }
}
