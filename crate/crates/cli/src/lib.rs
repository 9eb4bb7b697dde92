//! Batch front-end for mask analysis, completion, generation and rendering.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use latcomp::completion::{
    complete_rank2, complete_rank_r, propagate_greedy, random_instance, Completion, PartialMatrix, Status,
};
use latcomp::conditions::{verify_c_graph, CGraphReport};
use latcomp::generators::{
    diagonal_profile, gen_boundary_cycle, gen_nested_staircase_family, gen_nonremovable_counterexample,
    gen_staircase_cycle, GeneratorError,
};
use latcomp::lattice::{build_lattice_subgraph, extract_circuits, spans_all_indices};
use latcomp::removability::{removability_analysis, RemovabilityReport};
use latcomp::{CompletionError, ConditionError, LatticeError, LatticePoint, Mask, Walk};
use nalgebra::DMatrix;
use serde_json::{json, Value};
use thiserror::Error;

pub mod render;

/// Process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    NotCompletable = 1,
    Partial = 2,
    Genericity = 3,
    Usage = 64,
    Ambiguous = 65,
}

impl Exit {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("ambiguous walk decomposition; branching vertices: {}", fmt_points(.0))]
    Ambiguous(Vec<LatticePoint>),
    #[error("{0}")]
    Genericity(CompletionError),
    #[error("not completable: {0}")]
    NotCompletable(String),
    #[error("partial: {0}")]
    Partial(String),
}

impl CliError {
    pub fn exit(&self) -> Exit {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => Exit::Usage,
            CliError::Ambiguous(_) => Exit::Ambiguous,
            CliError::Genericity(_) => Exit::Genericity,
            CliError::NotCompletable(_) => Exit::NotCompletable,
            CliError::Partial(_) => Exit::Partial,
        }
    }
}

fn fmt_points(ps: &[LatticePoint]) -> String {
    ps.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ")
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        match e {
            LatticeError::AmbiguousDecomposition(v) => CliError::Ambiguous(v),
            e => CliError::Usage(e.to_string()),
        }
    }
}

impl From<GeneratorError> for CliError {
    fn from(e: GeneratorError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<ConditionError> for CliError {
    fn from(e: ConditionError) -> Self {
        match e {
            ConditionError::Lattice(l) => l.into(),
            e => CliError::Usage(e.to_string()),
        }
    }
}

impl From<CompletionError> for CliError {
    fn from(e: CompletionError) -> Self {
        match e {
            CompletionError::GenericityViolation { .. } => CliError::Genericity(e),
            CompletionError::ScheduleGap(_) => CliError::Partial(e.to_string()),
            CompletionError::Precondition(_) => CliError::NotCompletable(e.to_string()),
            e => CliError::Usage(e.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "latcomp", version, about = "Low-rank completion from lattice-walk masks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Removability report (rank 2) or C-graph report (rank > 2) for a mask.
    Analyze {
        mask: PathBuf,
        #[arg(long)]
        rank: usize,
        /// Main walk files, outermost first.
        #[arg(long, num_args = 1..)]
        walks: Vec<PathBuf>,
        /// Auxiliary walk files.
        #[arg(long, num_args = 1..)]
        aux: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Completes a partial matrix.
    Complete {
        partial: PathBuf,
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long, value_enum, default_value_t = Engine::Structured)]
        engine: Engine,
        #[arg(long, num_args = 1..)]
        walks: Vec<PathBuf>,
        #[arg(long, num_args = 1..)]
        aux: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Writes a generator family to a directory.
    Generate {
        #[arg(value_enum)]
        family: Family,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        rank: usize,
        #[arg(long)]
        min_cell: Option<usize>,
        /// Staircase steps as `WxH,WxH,...`.
        #[arg(long)]
        profile: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Random low-rank instance restricted to a mask.
    Instance {
        mask: PathBuf,
        #[arg(long)]
        rank: usize,
        /// Defaults to `LATCOMP_SEED`, then 0.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also writes the full matrix here.
        #[arg(long)]
        truth: Option<PathBuf>,
    },
    /// SVG or ASCII drawing of a mask and its walks.
    Render {
        mask: PathBuf,
        #[arg(long, num_args = 1..)]
        walks: Vec<PathBuf>,
        #[arg(long, num_args = 1..)]
        aux: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Svg)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Structured,
    Greedy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Boundary,
    Staircase,
    Nested,
    Counterexample,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Svg,
    Txt,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.into(), source })
}

fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(p) => write_file(p, text),
        None => writeln!(stdout, "{text}").map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
    }
}

/// Masks are JSON when the text starts with `{`, ASCII grids otherwise.
pub fn load_mask(path: &Path) -> Result<Mask, CliError> {
    let text = read(path)?;
    let mask = if text.trim_start().starts_with('{') { Mask::from_json(&text) } else { Mask::from_ascii(&text) };
    mask.map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

pub fn load_walks(paths: &[PathBuf]) -> Result<Vec<Walk>, CliError> {
    paths
        .iter()
        .map(|p| Walk::from_json(&read(p)?).map_err(|e| CliError::Usage(format!("{}: {e}", p.display()))))
        .collect()
}

/// Analyzes the given circuits, or the mask's extracted circuits when none
/// are given.
pub fn analyze_rank2(mask: &Mask, given: Vec<Walk>) -> Result<Vec<(Walk, RemovabilityReport)>, CliError> {
    let walks = if given.is_empty() { extract_circuits(&build_lattice_subgraph(mask))? } else { given };
    walks
        .into_iter()
        .filter(|w| w.closed)
        .map(|w| {
            let rep = removability_analysis(&w, mask).map_err(|e| CliError::Usage(e.to_string()))?;
            Ok((w, rep))
        })
        .collect()
}

/// A single closed walk with no auxiliary walks is a rank-2 circuit.
fn given_circuit(walks: &[PathBuf], aux: &[PathBuf]) -> Result<Option<Vec<Walk>>, CliError> {
    if walks.len() != 1 || !aux.is_empty() {
        return Ok(None);
    }
    let w = load_walks(walks)?;
    Ok(w[0].closed.then_some(w))
}

fn completable_circuit<'a>(mask: &Mask, circuits: &'a [(Walk, RemovabilityReport)]) -> Option<&'a (Walk, RemovabilityReport)> {
    circuits.iter().find(|(w, rep)| spans_all_indices(w, mask.m, mask.n) && rep.all_removable())
}

pub fn cmd_analyze(
    mask_path: &Path,
    rank: usize,
    walks: &[PathBuf],
    aux: &[PathBuf],
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<Exit, CliError> {
    if rank < 2 {
        return Err(CliError::Usage("--rank must be at least 2".into()));
    }
    if rank > 2 && walks.is_empty() {
        return Err(CliError::Usage("usage: latcomp analyze <MASK> --rank R --walks FILE... (walks are required for rank > 2)".into()));
    }
    let mask = load_mask(mask_path)?;
    let circuit = if rank == 2 { given_circuit(walks, aux)? } else { None };
    let (report, ok) = if walks.is_empty() || circuit.is_some() {
        let circuits = analyze_rank2(&mask, circuit.unwrap_or_default())?;
        let ok = completable_circuit(&mask, &circuits).is_some();
        let list: Vec<Value> = circuits
            .iter()
            .map(|(w, rep)| {
                json!({
                    "spans_all_indices": spans_all_indices(w, mask.m, mask.n),
                    "all_removable": rep.all_removable(),
                    "not_removable": rep.not_removable().iter().map(|p| [p.row, p.col]).collect::<Vec<_>>(),
                    "report": rep.to_json_value(),
                })
            })
            .collect();
        (json!({ "rank": 2, "m": mask.m, "n": mask.n, "completable": ok, "circuits": list }), ok)
    } else {
        let rep = c_graph(&mask, rank, walks, aux)?;
        let mut v = rep.to_json_value();
        v["completable"] = json!(rep.is_c_graph);
        (v, rep.is_c_graph)
    };
    emit(out, &serde_json::to_string_pretty(&report).expect("report serializes"), stdout)?;
    Ok(if ok { Exit::Ok } else { Exit::NotCompletable })
}

fn c_graph(mask: &Mask, rank: usize, walks: &[PathBuf], aux: &[PathBuf]) -> Result<CGraphReport, CliError> {
    let w = load_walks(walks)?;
    let a = load_walks(aux)?;
    Ok(verify_c_graph(mask, rank, &w, &a)?)
}

/// Singular values of the completed matrix and `sigma_{r+1} / sigma_1`.
pub fn rank_check(rows: &[Vec<f64>], r: usize) -> Value {
    let (m, n) = (rows.len(), rows.first().map_or(0, Vec::len));
    let a = DMatrix::from_fn(m, n, |i, j| rows[i][j]);
    let mut sv: Vec<f64> = a.singular_values().iter().copied().collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    let ratio = if sv.len() > r && sv[0] > 0.0 { sv[r] / sv[0] } else { 0.0 };
    json!({ "singular_values": sv, "ratio": ratio })
}

pub fn cmd_complete(
    partial_path: &Path,
    rank: Option<usize>,
    engine: Engine,
    walks: &[PathBuf],
    aux: &[PathBuf],
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<Exit, CliError> {
    let partial = PartialMatrix::<f64>::from_json(&read(partial_path)?).map_err(|e| CliError::Usage(e.to_string()))?;
    if let Some(r) = rank {
        if r != partial.rank {
            return Err(CliError::Usage(format!("--rank {r} differs from the file's rank {}", partial.rank)));
        }
    }
    let r = partial.rank;
    let completion: Completion<f64> = match engine {
        Engine::Greedy => propagate_greedy(&partial, r)?,
        Engine::Structured if !walks.is_empty() && (r != 2 || given_circuit(walks, aux)?.is_none()) => {
            let rep = c_graph(&partial.mask(), r, walks, aux)?;
            complete_rank_r(&partial, &rep)?
        }
        Engine::Structured if r == 2 => {
            let mask = partial.mask();
            let circuits = analyze_rank2(&mask, given_circuit(walks, aux)?.unwrap_or_default())?;
            let (w, rep) = completable_circuit(&mask, &circuits)
                .or_else(|| circuits.iter().find(|(w, _)| spans_all_indices(w, mask.m, mask.n)))
                .ok_or_else(|| CliError::NotCompletable("no circuit spans all row and column indices".into()))?;
            complete_rank2(&partial, rep, w)?
        }
        Engine::Structured => {
            return Err(CliError::Usage("the structured engine needs --walks for rank > 2".into()));
        }
    };
    let mut v = completion.to_json_value();
    v["engine"] = json!(match engine {
        Engine::Structured => "structured",
        Engine::Greedy => "greedy",
    });
    v["rank"] = json!(r);
    if let Some(rows) = completion.matrix() {
        v["rank_check"] = rank_check(&rows, r);
    }
    emit(out, &serde_json::to_string_pretty(&v).expect("completion serializes"), stdout)?;
    Ok(match completion.status {
        Status::Complete => Exit::Ok,
        Status::Partial => Exit::Partial,
    })
}

fn parse_profile(s: &str) -> Result<Vec<(usize, usize)>, CliError> {
    s.split(',')
        .map(|t| {
            let (w, h) = t.trim().split_once('x').ok_or_else(|| CliError::Usage(format!("bad profile step {t:?}")))?;
            let num = |x: &str| x.parse::<usize>().map_err(|_| CliError::Usage(format!("bad profile step {t:?}")));
            Ok((num(w)?, num(h)?))
        })
        .collect()
}

pub fn cmd_generate(
    family: Family,
    m: usize,
    n: usize,
    rank: usize,
    min_cell: Option<usize>,
    profile: Option<&str>,
    out_dir: &Path,
    stdout: &mut dyn Write,
) -> Result<Exit, CliError> {
    fs::create_dir_all(out_dir).map_err(|source| CliError::Io { path: out_dir.into(), source })?;
    let file = |name: &str| out_dir.join(name);
    let summary = match family {
        Family::Nested => {
            let fam = gen_nested_staircase_family(m, n, rank, min_cell.unwrap_or(rank + 1))?;
            write_file(&file("mask.json"), &fam.mask.to_json())?;
            for (k, w) in fam.walks.iter().enumerate() {
                write_file(&file(&format!("walk_{k}.json")), &w.to_json())?;
            }
            for (k, w) in fam.auxiliary.iter().enumerate() {
                write_file(&file(&format!("aux_{k}.json")), &w.to_json())?;
            }
            let rep = verify_c_graph(&fam.mask, rank, &fam.walks, &fam.auxiliary)?;
            format!(
                "nested {m}x{n} rank {rank}: {} walks, {} auxiliary, kappa = {}, c-graph = {}",
                fam.walks.len(),
                fam.auxiliary.len(),
                rep.kappa,
                rep.is_c_graph
            )
        }
        _ => {
            let (mask, walk) = match family {
                Family::Boundary => gen_boundary_cycle(m, n)?,
                Family::Staircase => {
                    let prof = match profile {
                        Some(s) => parse_profile(s)?,
                        None => diagonal_profile(m, n),
                    };
                    gen_staircase_cycle(m, n, &prof)?
                }
                _ => gen_nonremovable_counterexample(m, n)?,
            };
            write_file(&file("mask.json"), &mask.to_json())?;
            write_file(&file("walk.json"), &walk.to_json())?;
            let rep = removability_analysis(&walk, &mask).map_err(|e| CliError::Usage(e.to_string()))?;
            format!(
                "{family:?} {m}x{n}: {} reflex vertices, L = {}, not removable = {}",
                rep.n_r,
                rep.l,
                rep.not_removable().len()
            )
            .to_lowercase()
        }
    };
    writeln!(stdout, "{summary}").map_err(|source| CliError::Io { path: "<stdout>".into(), source })?;
    Ok(Exit::Ok)
}

/// `--seed`, else `LATCOMP_SEED`, else 0.
pub fn resolve_seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("LATCOMP_SEED") {
        Ok(v) => v.trim().parse().map_err(|_| CliError::Usage(format!("LATCOMP_SEED={v:?} is not an unsigned integer"))),
        Err(_) => Ok(0),
    }
}

pub fn cmd_instance(
    mask_path: &Path,
    rank: usize,
    seed: Option<u64>,
    out: Option<&Path>,
    truth: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<Exit, CliError> {
    if rank == 0 {
        return Err(CliError::Usage("--rank must be positive".into()));
    }
    let mask = load_mask(mask_path)?;
    let (partial, full) = random_instance(&mask, rank, resolve_seed(seed)?);
    if let Some(t) = truth {
        write_file(t, &serde_json::to_string(&full).expect("matrix serializes"))?;
    }
    emit(out, &partial.to_json_value().to_string(), stdout)?;
    Ok(Exit::Ok)
}

pub fn cmd_render(
    mask_path: &Path,
    walks: &[PathBuf],
    aux: &[PathBuf],
    format: Format,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<Exit, CliError> {
    let mask = load_mask(mask_path)?;
    let w = load_walks(walks)?;
    let a = load_walks(aux)?;
    let scene = if a.is_empty() && w.iter().all(|x| x.closed) {
        render::Scene::from_analysis(&mask, &analyze_rank2(&mask, w)?)
    } else {
        render::Scene::from_walks(&mask, w, a)
    };
    let text = match format {
        Format::Svg => render::svg(&scene),
        Format::Txt => render::ascii(&scene),
    };
    match out {
        Some(p) => write_file(p, &text)?,
        None => write!(stdout, "{text}").map_err(|source| CliError::Io { path: "<stdout>".into(), source })?,
    }
    Ok(Exit::Ok)
}

pub fn dispatch(cli: Cli, stdout: &mut dyn Write) -> Result<Exit, CliError> {
    match cli.command {
        Command::Analyze { mask, rank, walks, aux, out } => cmd_analyze(&mask, rank, &walks, &aux, out.as_deref(), stdout),
        Command::Complete { partial, rank, engine, walks, aux, out } => {
            cmd_complete(&partial, rank, engine, &walks, &aux, out.as_deref(), stdout)
        }
        Command::Generate { family, m, n, rank, min_cell, profile, out } => {
            cmd_generate(family, m, n, rank, min_cell, profile.as_deref(), &out, stdout)
        }
        Command::Instance { mask, rank, seed, out, truth } => {
            cmd_instance(&mask, rank, seed, out.as_deref(), truth.as_deref(), stdout)
        }
        Command::Render { mask, walks, aux, format, out } => cmd_render(&mask, &walks, &aux, format, out.as_deref(), stdout),
    }
}

/// Parses arguments, runs the command and returns the process exit code.
/// Argument errors exit with 64; `--help` and `--version` exit with 0.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                return Exit::Usage.code();
            }
            let _ = write!(stdout, "{e}");
            return Exit::Ok.code();
        }
    };
    match dispatch(cli, stdout) {
        Ok(code) => code.code(),
        Err(e) => {
            let _ = writeln!(stderr, "latcomp: {e}");
            e.exit().code()
        }
    }
}
