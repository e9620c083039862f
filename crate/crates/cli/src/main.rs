//! `famcover`: solve, certify and analyze covering instances from the command line.
//!
//! Exit codes: 0 success, 1 negative verdict or finding, 2 usage or input
//! error, 3 instance beyond an exhaustive-size guard.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use famcover::exact::{brute_force_opt, certify, FamilyClass};
use famcover::gens::{self, random_instance, BundleJson, RandomKind};
use famcover::io::{FamilyKind, Instance, InstanceJson, SCHEMA_VERSION};
use famcover::rational::pair;
use famcover::setfam::{
    check_gamma_pliable, check_pliable, check_proper, check_sparse, check_uncrossable,
    crossing_number, sample_check, EdgeSet, ExplicitFamily, FamilyJson, NodeSet,
    Property,
};
use famcover::treeanal::analyze_cover;
use famcover::wgmv::{solve, RunTrace, TraceJson};
use famcover::witness::laminar_witness;
use famcover::Error;
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "famcover", about = "Cover pliable set families and check the result")]
#[command(disable_version_flag = true, subcommand_required = false, arg_required_else_help = true)]
struct Cli {
    /// Print the JSON schema version and exit.
    #[arg(long)]
    version: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Explicit,
    Smallcuts,
}

impl From<FamilyArg> for FamilyKind {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Explicit => FamilyKind::Explicit,
            FamilyArg::Smallcuts => FamilyKind::SmallCuts,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Tight7,
    Tight6,
    Tightbeta,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Sampled,
}

#[derive(Subcommand)]
enum Command {
    /// Run the primal-dual algorithm and emit its trace.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum)]
        family: Option<FamilyArg>,
        /// Write the trace here and print a summary instead.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Minimum-cost cover by exhaustive search.
    Exact {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum)]
        family: Option<FamilyArg>,
    },
    /// Check a trace against a class guarantee; exit 0 iff the verdict holds.
    Certify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        trace: PathBuf,
        /// gamma, sparse or beta:<int>.
        #[arg(long, value_parser = parse_class)]
        class: FamilyClass,
        #[arg(long, value_enum)]
        family: Option<FamilyArg>,
        /// Also compute the optimum and compare against it.
        #[arg(long)]
        opt: bool,
    },
    /// Laminar witness sets for a minimal cover.
    Witness {
        #[arg(long)]
        instance: PathBuf,
        /// JSON list of edge ids.
        #[arg(long)]
        cover: PathBuf,
    },
    /// Shortcut-tree report for a minimal cover; reads a `gen` bundle from stdin without `--instance`.
    Analyze {
        #[arg(long, requires = "cover", conflicts_with = "bundle")]
        instance: Option<PathBuf>,
        /// JSON list of edge ids into the instance.
        #[arg(long)]
        cover: Option<PathBuf>,
        /// Bundle file as written by `gen`.
        #[arg(long)]
        bundle: Option<PathBuf>,
        /// JSON list of cores; defaults to the minimal members of the family.
        #[arg(long)]
        cores: Option<PathBuf>,
        #[arg(long, value_parser = parse_class, default_value = "gamma")]
        class: FamilyClass,
        /// Also write the tree in DOT format.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Test a family property; exit 1 with a counterexample if it fails.
    CheckFamily {
        #[arg(long)]
        property: String,
        /// Instance file; its edges form the edge universe.
        #[arg(long, conflicts_with = "family")]
        instance: Option<PathBuf>,
        /// Family or bundle file, with all node pairs as the edge universe; stdin if absent.
        #[arg(long)]
        family: Option<PathBuf>,
        /// Bound for `crossing`.
        #[arg(long)]
        beta: Option<usize>,
        #[arg(long, value_enum, default_value = "exhaustive")]
        mode: ModeArg,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Emit a generated bundle or random instance.
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long, default_value_t = 4)]
        leaves: usize,
        #[arg(long, default_value_t = 2)]
        i: u32,
        #[arg(long, default_value_t = 1)]
        j: u32,
        /// Random family: gamma, sparse, beta or proper.
        #[arg(long, default_value = "gamma")]
        class: String,
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random instances, one JSON document per line.
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

fn parse_class(s: &str) -> Result<FamilyClass, String> {
    FamilyClass::parse(s).ok_or_else(|| format!("unknown class {s:?}; expected gamma, sparse or beta:<int>"))
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Guard(_) => 3,
            Error::Json(_)
            | Error::InvalidInput(_)
            | Error::UniverseMismatch(..)
            | Error::NodeOutOfRange { .. } => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

type CliResult<T = u8> = Result<T, Failure>;

fn read_text(path: Option<&Path>) -> CliResult<String> {
    match path {
        Some(p) if p != Path::new("-") => fs::read_to_string(p)
            .map_err(|e| Failure::usage(format!("cannot read {}: {e}", p.display()))),
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(|e| Failure::usage(format!("stdin: {e}")))?;
            Ok(s)
        }
    }
}

fn read_json<T: DeserializeOwned>(path: Option<&Path>) -> CliResult<T> {
    let text = read_text(path)?;
    let name = path.map_or("stdin".into(), |p| p.display().to_string());
    serde_json::from_str(&text).map_err(|e| Failure::usage(format!("malformed JSON in {name}: {e}")))
}

fn load_instance(path: &Path) -> CliResult<Instance> {
    let j: InstanceJson = read_json(Some(path))?;
    Ok(Instance::from_json(&j)?)
}

fn print(v: &impl serde::Serialize) -> CliResult<()> {
    let s = serde_json::to_string_pretty(v).map_err(|e| Failure::usage(e.to_string()))?;
    let mut out = io::stdout().lock();
    writeln!(out, "{s}").map_err(|e| Failure::usage(format!("stdout: {e}")))
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))
}

fn node_sets(n: usize, lists: &[Vec<usize>]) -> CliResult<Vec<NodeSet>> {
    Ok(lists.iter().map(|l| NodeSet::from_nodes(n, l.iter().copied())).collect::<Result<_, _>>()?)
}

fn cover_ids(inst: &Instance, path: &Path) -> CliResult<(Vec<usize>, EdgeSet)> {
    let ids: Vec<usize> = read_json(Some(path))?;
    if let Some(&bad) = ids.iter().find(|&&e| e >= inst.graph.len()) {
        return Err(Failure::usage(format!("cover edge id {bad} out of range")));
    }
    Ok((ids.clone(), inst.graph.edge_set(&ids)))
}

fn run(cli: Cli) -> CliResult {
    if cli.version {
        println!("famcover {} schema {SCHEMA_VERSION}", env!("CARGO_PKG_VERSION"));
        return Ok(0);
    }
    let Some(command) = cli.command else {
        return Err(Failure::usage("missing subcommand"));
    };
    match command {
        Command::Solve { instance, family, trace } => {
            let inst = load_instance(&instance)?;
            let oracle = inst.oracle(family.map(Into::into))?;
            let (_, t) = solve(&inst.graph, oracle.as_ref())?;
            let tj = t.to_json();
            match trace {
                Some(path) => {
                    let text = serde_json::to_string_pretty(&tj).expect("trace serializes");
                    write_file(&path, &(text + "\n"))?;
                    print(&json!({
                        "solution": t.solution,
                        "cost": pair(&inst.graph.cost(&t.solution)),
                        "dual": pair(&t.dual_objective()),
                    }))?;
                }
                None => print(&tj)?,
            }
            Ok(0)
        }
        Command::Exact { instance, family } => {
            let inst = load_instance(&instance)?;
            let oracle = inst.oracle(family.map(Into::into))?;
            let opt = brute_force_opt(&inst.graph, oracle.as_ref())?;
            print(&json!({ "cost": pair(&opt.cost), "edges": opt.edges }))?;
            Ok(0)
        }
        Command::Certify { instance, trace, class, family, opt } => {
            let inst = load_instance(&instance)?;
            let oracle = inst.oracle(family.map(Into::into))?;
            let tj: TraceJson = read_json(Some(&trace))?;
            let t = RunTrace::from_json(&inst.graph, &tj)?;
            let best = if opt { Some(brute_force_opt(&inst.graph, oracle.as_ref())?.cost) } else { None };
            let cert = certify(&inst.graph, oracle.as_ref(), &t, class, best.as_ref())?;
            print(&cert)?;
            Ok(if cert.verdict { 0 } else { 1 })
        }
        Command::Witness { instance, cover } => {
            let inst = load_instance(&instance)?;
            let f = inst.explicit_family()?;
            let (ids, i) = cover_ids(&inst, &cover)?;
            let w = laminar_witness(&f, &i)?;
            print(&w.to_json(&ids))?;
            Ok(0)
        }
        Command::Analyze { instance, cover, bundle, cores, class, dot } => {
            let (f, ids, i, default_cores) = match instance {
                Some(path) => {
                    let inst = load_instance(&path)?;
                    let f = inst.explicit_family()?;
                    let (ids, i) = cover_ids(&inst, cover.as_deref().expect("clap requires cover"))?;
                    (f, ids, i, None)
                }
                None => {
                    let b: BundleJson = read_json(bundle.as_deref())?;
                    let f = ExplicitFamily::from_json(&b.family)?;
                    let i = EdgeSet::new(f.universe(), b.cover.clone())?;
                    let c = node_sets(f.universe(), &b.cores)?;
                    (f, (0..b.cover.len()).collect(), i, Some(c))
                }
            };
            let core_sets = match cores {
                Some(p) => Some(node_sets(f.universe(), &read_json::<Vec<Vec<usize>>>(Some(&p))?)?),
                None => default_cores,
            };
            let a = analyze_cover(&f, &i, core_sets, class)?;
            if let Some(p) = dot {
                write_file(&p, &a.tree.to_dot())?;
            }
            let mut doc = a.to_json(&ids);
            doc["weight"] = json!(a.tree.total_weight());
            doc["cores"] = json!(a.tree.cores.len());
            doc["ok"] = json!(a.report.ok);
            print(&doc)?;
            Ok(if a.report.ok { 0 } else { 1 })
        }
        Command::CheckFamily { property, instance, family, beta, mode, samples, seed } => {
            let prop = Property::parse(&property)
                .ok_or_else(|| Failure::usage(format!("unknown property {property:?}")))?;
            let (f, universe) = match instance {
                Some(p) => {
                    let inst = load_instance(&p)?;
                    (inst.explicit_family()?, inst.graph.all_edges())
                }
                None => {
                    let v: Value = read_json(family.as_deref())?;
                    let fj: FamilyJson = serde_json::from_value(v.get("family").cloned().unwrap_or(v))
                        .map_err(|e| Failure::usage(format!("not a family: {e}")))?;
                    let f = ExplicitFamily::from_json(&fj)?;
                    let n = f.universe();
                    (f, EdgeSet::complete(n))
                }
            };
            check_family(&f, &universe, prop, beta, mode, samples, seed)
        }
        Command::Gen { kind, leaves, i, j, class, n, seed, count, jobs } => {
            let bundle = match kind {
                GenKind::Tight7 => gens::tight7(leaves)?,
                GenKind::Tight6 => gens::tight6(leaves)?,
                GenKind::Tightbeta => gens::tight_beta(i, j)?,
                GenKind::Random => return gen_random(&class, n, seed, count, jobs),
            };
            print(&bundle.bundle())?;
            Ok(0)
        }
    }
}

fn check_family(
    f: &ExplicitFamily,
    universe: &EdgeSet,
    prop: Property,
    beta: Option<usize>,
    mode: ModeArg,
    samples: usize,
    seed: u64,
) -> CliResult {
    if prop == Property::Crossing {
        let c = crossing_number(f, universe)?;
        let holds = beta.map(|b| c.beta <= b);
        print(&json!({ "property": "crossing", "beta": c.beta, "bound": beta, "holds": holds, "witness": c.witness }))?;
        return Ok(if holds == Some(false) { 1 } else { 0 });
    }
    let r = match (mode, prop) {
        (ModeArg::Sampled, Property::Gamma | Property::Sparse) => sample_check(f, universe, prop, samples, seed)?,
        (ModeArg::Sampled, _) => return Err(Failure::usage("sampled mode supports gamma and sparse only")),
        (_, Property::Pliable) => check_pliable(f)?,
        (_, Property::Gamma) => check_gamma_pliable(f, universe)?,
        (_, Property::Sparse) => check_sparse(f, universe)?,
        (_, Property::Uncrossable) => check_uncrossable(f)?,
        (_, Property::Proper) => check_proper(f)?,
        (_, Property::Crossing) => unreachable!("handled above"),
    };
    print(&r)?;
    Ok(if r.failed() { 1 } else { 0 })
}

fn gen_random(class: &str, n: usize, seed: u64, count: u64, jobs: usize) -> CliResult {
    let kind = RandomKind::parse(class)
        .ok_or_else(|| Failure::usage(format!("unknown random class {class:?}")))?;
    let one = |s: u64| -> Result<String, Error> {
        let x = random_instance(&mut gens::rng(s), kind, n)?;
        let doc = json!({ "seed": s, "class": x.class, "instance": x.instance.to_json() });
        Ok(serde_json::to_string(&doc).expect("instance serializes"))
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Failure::usage(e.to_string()))?;
    let lines: Vec<Result<String, Error>> = pool.install(|| {
        use rayon::prelude::*;
        (seed..seed + count).into_par_iter().map(one).collect()
    });
    let mut out = io::stdout().lock();
    for line in lines {
        writeln!(out, "{}", line?).map_err(|e| Failure::usage(format!("stdout: {e}")))?;
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("famcover: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
