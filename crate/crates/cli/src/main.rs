//! Command-line front end: replay update streams with interleaved queries,
//! benchmark dynamic maintenance against static recomputation, and run the
//! streaming cluster vertex deletion kernelization.

mod stream;

use clap::{Parser, Subcommand, ValueEnum};
use dynfpt::dyn_chromatic::DynChromatic;
use dynfpt::dyn_cvd_exact::DynCvdExact;
use dynfpt::dyn_cvd_kernel::DynCvdKernel;
use dynfpt::dyn_fvs::DynFvs;
use dynfpt::dyn_vc::DynVc;
use dynfpt::graph::{EdgeOp, EdgeOpKind, Graph, MultiGraph, Vertex};
use dynfpt::solvers;
use std::collections::BTreeSet;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;
use stream::{parse_edge_list, parse_stream, Problem, StreamItem};

#[derive(Debug)]
pub struct CliError {
    line: Option<usize>,
    msg: String,
    internal: bool,
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError {
            line: None,
            msg: msg.into(),
            internal: false,
        }
    }

    pub fn input_at(line: usize, msg: impl Into<String>) -> Self {
        CliError {
            line: Some(line),
            msg: msg.into(),
            internal: false,
        }
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        CliError {
            line: None,
            msg: msg.into(),
            internal: true,
        }
    }

    fn exit_code(&self) -> u8 {
        if self.internal {
            2
        } else {
            1
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.internal {
            write!(f, "internal error: {}", self.msg)
        } else {
            match self.line {
                Some(no) => write!(f, "error: line {no}: {}", self.msg),
                None => write!(f, "error: {}", self.msg),
            }
        }
    }
}

fn parse_problem(s: &str) -> Result<Problem, String> {
    Problem::from_str(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Dynamic,
    Static,
}

#[derive(Parser)]
#[command(
    name = "dynfpt",
    version,
    about = "Dynamic graph structures for parameterized problems"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Replay an update stream, answering interleaved queries; CSV rows
    /// `index,op,u,v,problem,answer,micros` on stdout.
    Replay {
        /// Stream file: header `n <N>`, then `+ u v`, `- u v`, `? <problem>`.
        stream: PathBuf,
        /// Problems to maintain (comma-separated); defaults to the set
        /// queried by the stream.
        #[arg(long, value_delimiter = ',', value_parser = parse_problem)]
        problems: Vec<Problem>,
        /// Degree bound, required when fvs is maintained.
        #[arg(long)]
        max_degree: Option<usize>,
        /// Append solution vertex lists to query rows.
        #[arg(long)]
        verbose: bool,
    },
    /// Stream the edges of a graph through the dynamic cluster vertex
    /// deletion structure and print the kernel: a `forced` line, a
    /// `kernel |V'| |E'|` line, then the kernel edges in original ids.
    #[command(name = "kernelize-cvd")]
    KernelizeCvd {
        /// Edge list file: header `n m`, then `m` lines `u v`.
        edges: PathBuf,
    },
    /// Replay a stream for one problem, timing either the dynamic
    /// structure or static recomputation per query; CSV rows add a
    /// cumulative wall-time column.
    Bench {
        stream: PathBuf,
        #[arg(long, value_parser = parse_problem)]
        problem: Problem,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        max_degree: Option<usize>,
    },
}

/// The maintained structure bundle plus a mirror graph used to validate
/// every op up front, so diagnostics carry line numbers and the structures
/// only ever see valid updates.
struct Structures {
    mirror: Graph,
    max_degree: Option<usize>,
    vc: Option<DynVc>,
    cvd: Option<DynCvdKernel>,
    cvd_exact: Option<DynCvdExact>,
    chromatic: Option<DynChromatic>,
    fvs: Option<DynFvs>,
}

impl Structures {
    fn build(
        n: usize,
        problems: &BTreeSet<Problem>,
        max_degree: Option<usize>,
    ) -> Result<Self, CliError> {
        let fvs = if problems.contains(&Problem::Fvs) {
            let d = max_degree
                .ok_or_else(|| CliError::input("--max-degree is required when fvs is selected"))?;
            Some(DynFvs::new(n, d))
        } else {
            None
        };
        Ok(Structures {
            mirror: Graph::new(n),
            max_degree,
            vc: problems.contains(&Problem::Vc).then(|| DynVc::new(n)),
            cvd: problems
                .contains(&Problem::Cvd)
                .then(|| DynCvdKernel::new(n)),
            cvd_exact: problems
                .contains(&Problem::CvdExact)
                .then(|| DynCvdExact::new(n)),
            chromatic: problems
                .contains(&Problem::Chromatic)
                .then(|| DynChromatic::new(n)),
            fvs,
        })
    }

    fn validate_op(&self, op: EdgeOp, line: usize) -> Result<(), CliError> {
        self.mirror
            .validate(op)
            .map_err(|e| CliError::input_at(line, e.to_string()))?;
        // A given degree bound is enforced regardless of the selection, so
        // static and dynamic runs reject the same streams.
        if let Some(d) = self.max_degree {
            if op.kind == EdgeOpKind::Insert {
                for w in [op.u, op.v] {
                    if self.mirror.degree(w) + 1 > d {
                        return Err(CliError::input_at(
                            line,
                            format!("insert would push vertex {w} above the degree bound {d}"),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Applies a pre-validated op to every maintained structure.
    fn apply(&mut self, op: EdgeOp) -> Result<(), CliError> {
        self.mirror
            .apply(op)
            .map_err(|e| CliError::internal(e.to_string()))?;
        if let Some(st) = &mut self.vc {
            st.update(op)
                .map_err(|e| CliError::internal(e.to_string()))?;
        }
        if let Some(st) = &mut self.cvd {
            st.update(op)
                .map_err(|e| CliError::internal(e.to_string()))?;
        }
        if let Some(st) = &mut self.cvd_exact {
            st.update(op)
                .map_err(|e| CliError::internal(e.to_string()))?;
        }
        if let Some(st) = &mut self.chromatic {
            st.update(op)
                .map_err(|e| CliError::internal(e.to_string()))?;
        }
        if let Some(st) = &mut self.fvs {
            st.update(op)
                .map_err(|e| CliError::internal(e.to_string()))?;
        }
        Ok(())
    }

    /// Answer size plus the witness vertex set (empty for chromatic).
    fn query(&self, p: Problem) -> (usize, Vec<Vertex>) {
        match p {
            Problem::Vc => {
                let sol = self.vc.as_ref().expect("selected").query();
                (sol.len(), sol.into_iter().collect())
            }
            Problem::Cvd => {
                let sol = self.cvd.as_ref().expect("selected").query();
                (sol.len(), sol.into_iter().collect())
            }
            Problem::CvdExact => {
                let sol = self.cvd_exact.as_ref().expect("selected").solution();
                (sol.len(), sol.iter().copied().collect())
            }
            Problem::Chromatic => (
                self.chromatic
                    .as_ref()
                    .expect("selected")
                    .chromatic_number(),
                Vec::new(),
            ),
            Problem::Fvs => {
                let sol = self.fvs.as_ref().expect("selected").solution();
                (sol.len(), sol.iter().copied().collect())
            }
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))
}

fn replay(
    path: &Path,
    problems: Vec<Problem>,
    max_degree: Option<usize>,
    verbose: bool,
) -> Result<(), CliError> {
    let text = read_file(path)?;
    let stream = parse_stream(&text)?;

    let selected: BTreeSet<Problem> = if problems.is_empty() {
        stream
            .items
            .iter()
            .filter_map(|(_, item)| match item {
                StreamItem::Query(p) => Some(*p),
                StreamItem::Op(_) => None,
            })
            .collect()
    } else {
        problems.into_iter().collect()
    };
    let mut structures = Structures::build(stream.n, &selected, max_degree)?;

    let stdout = std::io::stdout();
    let mut out = std::io::BufWriter::new(stdout.lock());
    for (index, &(line, item)) in stream.items.iter().enumerate() {
        match item {
            StreamItem::Op(op) => {
                structures.validate_op(op, line)?;
                let start = Instant::now();
                structures.apply(op)?;
                let micros = start.elapsed().as_micros();
                let sym = if op.kind == EdgeOpKind::Insert {
                    '+'
                } else {
                    '-'
                };
                write!(out, "{index},{sym},{},{},,,{micros}", op.u, op.v).unwrap();
                if verbose {
                    write!(out, ",").unwrap();
                }
                writeln!(out).unwrap();
            }
            StreamItem::Query(p) => {
                if !selected.contains(&p) {
                    return Err(CliError::input_at(
                        line,
                        format!("query for {p} but only {selected:?} are maintained"),
                    ));
                }
                let start = Instant::now();
                let (answer, witness) = structures.query(p);
                let micros = start.elapsed().as_micros();
                write!(out, "{index},?,,,{p},{answer},{micros}").unwrap();
                if verbose {
                    let ids: Vec<String> = witness.iter().map(|v| v.to_string()).collect();
                    write!(out, ",{}", ids.join(" ")).unwrap();
                }
                writeln!(out).unwrap();
            }
        }
    }
    out.flush().unwrap();
    Ok(())
}

fn kernelize_cvd(path: &Path) -> Result<(), CliError> {
    let text = read_file(path)?;
    let (n, edges) = parse_edge_list(&text)?;
    let mut st = DynCvdKernel::new(n);
    for &(line, u, v) in &edges {
        let op = EdgeOp::insert(u, v);
        st.graph()
            .validate(op)
            .map_err(|e| CliError::input_at(line, e.to_string()))?;
        st.update(op)
            .map_err(|e| CliError::internal(e.to_string()))?;
    }
    let (forced, vp) = st.kernel();
    let (sub, table) = st
        .graph()
        .induced_subgraph(vp.iter().copied())
        .map_err(|e| CliError::internal(e.to_string()))?;

    let stdout = std::io::stdout();
    let mut out = std::io::BufWriter::new(stdout.lock());
    let forced_ids: Vec<String> = forced.iter().map(|v| v.to_string()).collect();
    if forced_ids.is_empty() {
        writeln!(out, "forced").unwrap();
    } else {
        writeln!(out, "forced {}", forced_ids.join(" ")).unwrap();
    }
    writeln!(out, "kernel {} {}", vp.len(), sub.edge_count()).unwrap();
    for (a, b) in sub.edges() {
        writeln!(out, "{} {}", table[a], table[b]).unwrap();
    }
    out.flush().unwrap();
    Ok(())
}

fn static_answer(g: &Graph, p: Problem) -> usize {
    match p {
        Problem::Vc => solvers::vc_exact(g, None).expect("unbounded").len(),
        Problem::Cvd | Problem::CvdExact => {
            solvers::cvd_exact_weighted(&solvers::WeightedGraph::unit(g.clone()), None)
                .expect("unbounded")
                .len()
        }
        Problem::Chromatic => solvers::chromatic_exact(g),
        Problem::Fvs => {
            let mg = MultiGraph::from_graph(g);
            solvers::disjoint_fvs(&mg, &BTreeSet::new(), g.vertex_count())
                .expect("unrestricted instance is feasible")
                .len()
        }
    }
}

fn bench(
    path: &Path,
    problem: Problem,
    mode: Mode,
    max_degree: Option<usize>,
) -> Result<(), CliError> {
    let text = read_file(path)?;
    let stream = parse_stream(&text)?;
    if problem == Problem::Fvs && max_degree.is_none() {
        return Err(CliError::input(
            "--max-degree is required when fvs is selected",
        ));
    }
    let selected = BTreeSet::from([problem]);
    // The bundle doubles as the validating mirror in static mode.
    let mut structures = match mode {
        Mode::Dynamic => Structures::build(stream.n, &selected, max_degree)?,
        Mode::Static => Structures::build(stream.n, &BTreeSet::new(), max_degree)?,
    };

    let stdout = std::io::stdout();
    let mut out = std::io::BufWriter::new(stdout.lock());
    let mut cumulative: u128 = 0;
    for (index, &(line, item)) in stream.items.iter().enumerate() {
        match item {
            StreamItem::Op(op) => {
                structures.validate_op(op, line)?;
                let start = Instant::now();
                match mode {
                    Mode::Dynamic => structures.apply(op)?,
                    Mode::Static => {
                        structures
                            .mirror
                            .apply(op)
                            .map_err(|e| CliError::internal(e.to_string()))?;
                    }
                }
                let micros = start.elapsed().as_micros();
                cumulative += micros;
                let sym = if op.kind == EdgeOpKind::Insert {
                    '+'
                } else {
                    '-'
                };
                writeln!(
                    out,
                    "{index},{sym},{},{},,,{micros},{cumulative}",
                    op.u, op.v
                )
                .unwrap();
            }
            StreamItem::Query(p) => {
                if p != problem {
                    return Err(CliError::input_at(
                        line,
                        format!("query for {p} but the benchmark maintains {problem}"),
                    ));
                }
                let start = Instant::now();
                let answer = match mode {
                    Mode::Dynamic => structures.query(p).0,
                    Mode::Static => static_answer(&structures.mirror, p),
                };
                let micros = start.elapsed().as_micros();
                cumulative += micros;
                writeln!(out, "{index},?,,,{p},{answer},{micros},{cumulative}").unwrap();
            }
        }
    }
    out.flush().unwrap();
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Replay {
            stream,
            problems,
            max_degree,
            verbose,
        } => replay(&stream, problems, max_degree, verbose),
        Cmd::KernelizeCvd { edges } => kernelize_cvd(&edges),
        Cmd::Bench {
            stream,
            problem,
            mode,
            max_degree,
        } => bench(&stream, problem, mode, max_degree),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
