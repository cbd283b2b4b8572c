//! `paleylab`: command-line front end.
//!
//! Exit codes: 0 all verdicts pass, 1 a verdict failed, 2 usage error,
//! 3 a size cap was exceeded.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use paleylab::cayley::CayleyGraph;
use paleylab::character::{gauss_sum, is_pure, is_supersingular, Character};
use paleylab::clique::{
    enumerate_max_cliques_through, is_clique, is_maximal, max_clique_with, SolverOptions, DEFAULT_ENUMERATION_CAP,
    DEFAULT_SOLVER_CAP,
};
use paleylab::formula::{applicable_cases, formula_gauss_sum};
use paleylab::graph::Graph;
use paleylab::harness::cache::{solve_maybe_cached, CliqueCache};
use paleylab::harness::report::VerificationReport;
use paleylab::harness::suites::{self, SuiteOptions};
use paleylab::peisert::{h_scan, pec_vanishing_check};
use paleylab::t5::t5_bound;
use paleylab::{arith, FieldElement, FiniteField};

#[derive(Parser)]
#[command(name = "paleylab", version, about = "Exact Gauss sums and clique numbers of generalized Paley and Peisert graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Largest graph the clique solver accepts.
    #[arg(long, global = true, default_value_t = DEFAULT_SOLVER_CAP)]
    cap: usize,
    /// Directory for reports and other artifacts.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Skip the on-disk clique cache.
    #[arg(long, global = true)]
    no_cache: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Finite field construction.
    #[command(subcommand)]
    Field(FieldCmd),
    /// Multiplicative characters and Gauss sums.
    #[command(subcommand)]
    Char(CharCmd),
    /// Generalized Paley and Peisert graphs.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Clique numbers, clique checks and the binomial bound.
    #[command(subcommand)]
    Clique(CliqueCmd),
    /// Peisert-graph criteria.
    #[command(subcommand)]
    Peisert(PeisertCmd),
    /// Verification suites.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Args)]
struct FieldArgs {
    p: Option<u32>,
    s: Option<u32>,
    #[arg(long)]
    q: Option<u32>,
}

#[derive(Subcommand)]
enum FieldCmd {
    /// Modulus, generator and descriptor.
    Info(FieldArgs),
    /// Every element with its coefficients, discrete log and trace.
    Table(FieldArgs),
}

#[derive(Args)]
struct CharArgs {
    #[arg(long)]
    q: u32,
    #[arg(long)]
    d: u32,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    j: i64,
}

#[derive(Subcommand)]
enum CharCmd {
    /// Exact Gauss sum and any closed forms that apply.
    Gauss(CharArgs),
    /// Whether some power of the Gauss sum is rational.
    Pure(CharArgs),
    /// Least t with p^t = -1 (mod d).
    Supersingular { p: u32, d: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Gp,
    Peisert,
}

#[derive(Args)]
struct GraphArgs {
    #[arg(value_enum)]
    kind: Option<Kind>,
    q: Option<u32>,
    d: Option<u32>,
}

#[derive(Subcommand)]
enum GraphCmd {
    /// Build a graph and print its manifest.
    Build(GraphArgs),
    /// Write a graph as DIMACS and/or JSON.
    Export {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        dimacs: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CliqueCmd {
    /// Exact clique number with a witness.
    Solve {
        #[command(flatten)]
        graph: GraphArgs,
        /// Solve a DIMACS file instead of a Cayley graph.
        #[arg(long)]
        dimacs: Option<PathBuf>,
    },
    /// Whether a vertex set is a clique, and whether it is maximal.
    Check {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<usize>,
    },
    /// All maximum cliques through the anchor vertices.
    Enumerate {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_delimiter = ',', default_value = "0,1")]
        anchors: Vec<usize>,
        /// Most candidate vertices the enumeration accepts.
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        limit: usize,
    },
    /// Binomial-coefficient upper bound on omega(GP(q, d)).
    T5bound { p: u64, q: u64, d: u64 },
}

#[derive(Subcommand)]
enum PeisertCmd {
    /// Kernel-intersection criterion against direct clique checks for all h.
    Scan {
        q: u32,
        #[arg(long)]
        r: Option<u32>,
    },
    /// Vanishing criterion for one candidate set.
    Pec {
        q: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<u32>,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    Main {
        #[arg(long, value_delimiter = ',', default_values_t = suites::MAIN_GRID)]
        q: Vec<u32>,
    },
    Fourier {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        d: u32,
    },
    Gauss {
        #[arg(long, default_value_t = suites::DEFAULT_GAUSS_BOUND)]
        bound: u32,
    },
    Inequalities {
        #[arg(long, default_value_t = suites::DEFAULT_TRIALS)]
        trials: usize,
    },
    Peisert {
        #[arg(long, value_delimiter = ',', default_values_t = suites::PEISERT_GRID)]
        q: Vec<u32>,
        #[arg(long, default_value_t = suites::DEFAULT_PEC_SETS)]
        sets: usize,
    },
    All,
}

#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Lib(#[from] paleylab::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Lib(e) if e.is_cap_exceeded() => 3,
            Failure::Lib(paleylab::Error::Io(_) | paleylab::Error::Json(_) | paleylab::Error::Csv(_)) => 1,
            Failure::Lib(_) | Failure::Usage(_) => 2,
            Failure::Io(_) | Failure::Csv(_) | Failure::Json(_) => 1,
        }
    }
}

impl Failure {
    /// The reader went away, e.g. output piped into `head`.
    fn is_broken_pipe(&self) -> bool {
        let io = match self {
            Failure::Io(e) => Some(e),
            Failure::Csv(e) => match e.kind() {
                csv::ErrorKind::Io(e) => Some(e),
                _ => None,
            },
            _ => None,
        };
        io.is_some_and(|e| e.kind() == std::io::ErrorKind::BrokenPipe)
    }
}

type Outcome = Result<bool, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

struct Ctx {
    cap: usize,
    out: Option<PathBuf>,
    format: Format,
    seed: u64,
    cache: Option<CliqueCache>,
}

impl Ctx {
    fn suite_options(&self) -> SuiteOptions {
        SuiteOptions { cap: self.cap, cache: self.cache.clone() }
    }

    fn out_dir(&self) -> Result<PathBuf, Failure> {
        let dir = self.out.clone().unwrap_or_else(|| PathBuf::from("reports"));
        std::fs::create_dir_all(&dir)?;
        Ok(dir)
    }
}

fn field_of_order(q: u32) -> Result<Arc<FiniteField>, Failure> {
    let (p, s) = arith::prime_power(q as u64).ok_or_else(|| usage(format!("{q} is not a prime power")))?;
    Ok(Arc::new(FiniteField::new(p as u32, s)?))
}

fn resolve_field(args: &FieldArgs) -> Result<Arc<FiniteField>, Failure> {
    match (args.q, args.p, args.s) {
        (Some(q), None, None) => field_of_order(q),
        (None, Some(p), Some(s)) => Ok(Arc::new(FiniteField::new(p, s)?)),
        (None, Some(p), None) => Ok(Arc::new(FiniteField::new(p, 1)?)),
        _ => Err(usage("give either P S or --q Q")),
    }
}

fn resolve_graph(args: &GraphArgs) -> Result<CayleyGraph, Failure> {
    let kind = args.kind.ok_or_else(|| usage("missing graph kind (gp or peisert)"))?;
    let q = args.q.ok_or_else(|| usage("missing field order Q"))?;
    let field = field_of_order(q)?;
    match (kind, args.d) {
        (Kind::Gp, Some(d)) => Ok(CayleyGraph::paley(&field, d)?),
        (Kind::Gp, None) => Err(usage("gp needs Q and D")),
        (Kind::Peisert, None) => Ok(CayleyGraph::peisert(&field)?),
        (Kind::Peisert, Some(_)) => Err(usage("peisert takes only Q")),
    }
}

fn print_json(v: &impl serde::Serialize) -> Result<(), Failure> {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{}", serde_json::to_string_pretty(v)?)?;
    Ok(())
}

fn field_info(f: &FiniteField, format: Format) -> Outcome {
    let g = f.generator();
    let info = json!({
        "descriptor": f.descriptor(),
        "p": f.characteristic(),
        "s": f.degree(),
        "q": f.order(),
        "modulus": f.modulus_string(),
        "generator": g.index(),
        "generator_poly": f.element_string(g),
    });
    match format {
        Format::Json => print_json(&info)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(std::io::stdout());
            w.write_record(["descriptor", "q", "modulus", "generator"])?;
            w.write_record([f.descriptor(), f.order().to_string(), f.modulus_string(), g.index().to_string()])?;
            w.flush()?;
        }
    }
    Ok(true)
}

fn field_table(f: &FiniteField, format: Format) -> Outcome {
    let rows: Vec<(u32, String, Option<u32>, u32)> = f
        .elements()
        .map(|a| (a.index(), f.element_string(a), f.discrete_log(a).ok(), f.trace(a)))
        .collect();
    match format {
        Format::Json => {
            let v: Vec<Value> = rows
                .iter()
                .map(|(i, poly, log, tr)| json!({ "index": i, "poly": poly, "log": log, "trace": tr }))
                .collect();
            print_json(&v)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(std::io::stdout());
            w.write_record(["index", "poly", "log", "trace"])?;
            for (i, poly, log, tr) in rows {
                let log = log.map(|l| l.to_string()).unwrap_or_default();
                w.write_record([i.to_string(), poly, log, tr.to_string()])?;
            }
            w.flush()?;
        }
    }
    Ok(true)
}

fn char_gauss(args: &CharArgs) -> Outcome {
    let f = field_of_order(args.q)?;
    let chi = Character::new(&f, args.d, args.j)?;
    let g = gauss_sum(&chi, FieldElement::ONE)?;
    let norm = g.value.norm_sq().as_rational();
    let mut all_match = norm.as_ref().is_some_and(|n| *n == args.q.into());
    let mut forms = Vec::new();
    if !chi.is_trivial() {
        for case in applicable_cases(f.characteristic(), f.degree(), chi.order()) {
            let form = formula_gauss_sum(&case)?;
            let matches = form.to_cyclotomic(g.value.ring())? == g.value;
            all_match &= matches;
            forms.push(json!({ "case": case.name(), "value": form.to_string(), "matches": matches }));
        }
    }
    print_json(&json!({
        "field": f.descriptor(),
        "d": args.d,
        "j": chi.base_power(),
        "order": chi.order(),
        "gauss_sum": g.value,
        "norm_sq": norm.map(|n| n.to_string()),
        "normalized_sign": g.normalized_sign,
        "closed_forms": forms,
    }))?;
    Ok(all_match || chi.is_trivial())
}

fn char_pure(args: &CharArgs) -> Outcome {
    let f = field_of_order(args.q)?;
    let chi = Character::new(&f, args.d, args.j)?;
    let purity = is_pure(&chi)?;
    print_json(&json!({ "field": f.descriptor(), "d": args.d, "j": chi.base_power(), "purity": purity }))?;
    Ok(true)
}

fn solve_graph(ctx: &Ctx, graph: &GraphArgs, dimacs: Option<&Path>) -> Outcome {
    let cert = match dimacs {
        Some(path) => {
            let g = Graph::parse_dimacs(&std::fs::read_to_string(path)?)?;
            max_clique_with(&g, &SolverOptions { cap: ctx.cap, anchors: Vec::new() })?
        }
        None => solve_maybe_cached(&resolve_graph(graph)?, ctx.cap, ctx.cache.as_ref())?,
    };
    print_json(&cert)?;
    Ok(true)
}

fn clique_check(graph: &GraphArgs, set: &[usize]) -> Outcome {
    let g = resolve_graph(graph)?;
    let clique = is_clique(g.graph(), set);
    let maximal = clique && is_maximal(g.graph(), set);
    print_json(&json!({ "graph": g.manifest(), "set": set, "clique": clique, "maximal": maximal }))?;
    Ok(clique)
}

fn clique_enumerate(ctx: &Ctx, graph: &GraphArgs, anchors: &[usize], limit: usize) -> Outcome {
    let g = resolve_graph(graph)?;
    let omega = solve_maybe_cached(&g, ctx.cap, ctx.cache.as_ref())?.omega;
    let cliques = enumerate_max_cliques_through(g.graph(), anchors, omega, limit)?;
    print_json(&json!({ "graph": g.manifest(), "omega": omega, "anchors": anchors, "count": cliques.len(), "cliques": cliques }))?;
    Ok(true)
}

fn peisert_scan(ctx: &Ctx, q: u32, r: Option<u32>) -> Outcome {
    let f = field_of_order(q)?;
    let r = r.unwrap_or(f.degree() / 4);
    let scan = h_scan(&f, r)?;
    let name = format!("scan-q{q}-r{r}");
    match (ctx.format, &ctx.out) {
        (Format::Json, None) => print_json(&scan)?,
        (Format::Json, Some(_)) => {
            let path = ctx.out_dir()?.join(format!("{name}.json"));
            std::fs::write(&path, serde_json::to_string_pretty(&scan)? + "\n")?;
            println!("{}", path.display());
        }
        (Format::Csv, out) => {
            let sink: Box<dyn Write> = match out {
                None => Box::new(std::io::stdout()),
                Some(_) => {
                    let path = ctx.out_dir()?.join(format!("{name}.csv"));
                    println!("{}", path.display());
                    Box::new(std::fs::File::create(path)?)
                }
            };
            let mut w = csv::Writer::from_writer(sink);
            w.write_record(["h", "criterion", "direct", "agree"])?;
            for rec in &scan.records {
                w.write_record([rec.h.to_string(), rec.criterion.to_string(), rec.direct.to_string(), rec.agree().to_string()])?;
            }
            w.flush()?;
        }
    }
    eprintln!("{} records, {} disagreements, conclusion {:?}", scan.records.len(), scan.disagreements, scan.conclusion);
    Ok(scan.disagreements == 0)
}

fn peisert_pec(q: u32, set: &[u32]) -> Outcome {
    let f = field_of_order(q)?;
    let g = CayleyGraph::peisert(&f)?;
    let elems: Vec<FieldElement> = set.iter().map(|&x| f.element(x)).collect::<Result<_, _>>()?;
    let v = pec_vanishing_check(&g, &elems)?;
    print_json(&json!({ "graph": g.manifest(), "set": set, "vanishing": v.vanishing, "clique": v.clique, "agree": v.agree() }))?;
    Ok(v.agree())
}

fn write_report(ctx: &Ctx, name: &str, report: &VerificationReport) -> Result<(), Failure> {
    let dir = ctx.out_dir()?;
    let path = match ctx.format {
        Format::Json => {
            let path = dir.join(format!("{name}.json"));
            report.write_json(&path)?;
            path
        }
        Format::Csv => {
            let path = dir.join(format!("{name}.csv"));
            report.write_csv(std::fs::File::create(&path)?)?;
            path
        }
    };
    println!("{}  {}", path.display(), report.summary());
    Ok(())
}

fn verify(ctx: &Ctx, cmd: &VerifyCmd) -> Outcome {
    let opts = ctx.suite_options();
    let reports: Vec<(String, VerificationReport)> = match cmd {
        VerifyCmd::Main { q } => vec![("main".into(), suites::verify_main(q, &opts)?)],
        VerifyCmd::Fourier { q, d } => vec![(format!("fourier-q{q}-d{d}"), suites::verify_fourier(*q, *d)?)],
        VerifyCmd::Gauss { bound } => {
            let (report, rows) = suites::verify_gauss_formulas(*bound, &opts)?;
            if ctx.format == Format::Csv {
                let path = ctx.out_dir()?.join("gauss-table.csv");
                let mut w = csv::Writer::from_path(&path)?;
                w.write_record(["q", "p", "s", "d", "j", "case", "direct", "formula", "matches"])?;
                for r in &rows {
                    w.write_record([
                        r.q.to_string(),
                        r.p.to_string(),
                        r.s.to_string(),
                        r.d.to_string(),
                        r.j.to_string(),
                        r.case.clone(),
                        r.direct.clone(),
                        r.formula.clone(),
                        r.matches.to_string(),
                    ])?;
                }
                w.flush()?;
                println!("{}", path.display());
            }
            vec![("gauss".into(), report)]
        }
        VerifyCmd::Inequalities { trials } => {
            vec![("inequalities".into(), suites::verify_inequalities(*trials, ctx.seed, &opts)?)]
        }
        VerifyCmd::Peisert { q, sets } => {
            vec![("peisert".into(), suites::verify_peisert(q, *sets, ctx.seed, &opts)?)]
        }
        VerifyCmd::All => suites::verify_all(ctx.seed, &opts)?
            .into_iter()
            .map(|r| {
                let name = match r.parameters.get("d") {
                    Some(d) if r.suite == "fourier" => format!("fourier-q{}-d{d}", r.parameters["q"]),
                    _ => r.suite.clone(),
                };
                (name, r)
            })
            .collect(),
    };
    let mut ok = true;
    for (name, report) in &reports {
        write_report(ctx, name, report)?;
        ok &= report.passed();
    }
    Ok(ok)
}

fn run(cli: Cli) -> Outcome {
    if let Some(n) = cli.jobs {
        if n == 0 {
            return Err(usage("--jobs must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| usage(format!("thread pool: {e}")))?;
    }
    let ctx = Ctx {
        cap: cli.cap,
        out: cli.out,
        format: cli.format,
        seed: cli.seed,
        cache: (!cli.no_cache).then(CliqueCache::from_env),
    };
    match &cli.command {
        Command::Field(FieldCmd::Info(a)) => field_info(resolve_field(a)?.as_ref(), ctx.format),
        Command::Field(FieldCmd::Table(a)) => field_table(resolve_field(a)?.as_ref(), ctx.format),
        Command::Char(CharCmd::Gauss(a)) => char_gauss(a),
        Command::Char(CharCmd::Pure(a)) => char_pure(a),
        Command::Char(CharCmd::Supersingular { p, d }) => {
            let t = is_supersingular(*p, *d)?;
            print_json(&json!({ "p": p, "d": d, "supersingular": t.is_some(), "t": t }))?;
            Ok(true)
        }
        Command::Graph(GraphCmd::Build(a)) => {
            print_json(&resolve_graph(a)?.manifest())?;
            Ok(true)
        }
        Command::Graph(GraphCmd::Export { graph, dimacs, json }) => {
            if dimacs.is_none() && json.is_none() {
                return Err(usage("give --dimacs PATH and/or --json PATH"));
            }
            let g = resolve_graph(graph)?;
            if let Some(path) = dimacs {
                g.graph().write_dimacs(std::fs::File::create(path)?)?;
                println!("{}", path.display());
            }
            if let Some(path) = json {
                std::fs::write(path, g.to_json()? + "\n")?;
                println!("{}", path.display());
            }
            Ok(true)
        }
        Command::Clique(CliqueCmd::Solve { graph, dimacs }) => solve_graph(&ctx, graph, dimacs.as_deref()),
        Command::Clique(CliqueCmd::Check { graph, set }) => clique_check(graph, set),
        Command::Clique(CliqueCmd::Enumerate { graph, anchors, limit }) => clique_enumerate(&ctx, graph, anchors, *limit),
        Command::Clique(CliqueCmd::T5bound { p, q, d }) => {
            print_json(&t5_bound(*p, *q, *d)?)?;
            Ok(true)
        }
        Command::Peisert(PeisertCmd::Scan { q, r }) => peisert_scan(&ctx, *q, *r),
        Command::Peisert(PeisertCmd::Pec { q, set }) => peisert_pec(*q, set),
        Command::Verify(cmd) => verify(&ctx, cmd),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("{}", json!({ "status": "fail" }));
            ExitCode::from(1)
        }
        Err(e) if e.is_broken_pipe() => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", json!({ "status": "error", "exit_code": e.exit_code(), "message": e.to_string() }));
            ExitCode::from(e.exit_code())
        }
    }
}
