//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
//!
//! Run with `cargo test -p famcover --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use famcover::exact::{brute_force_opt, certify, FamilyClass};
use famcover::gens::{self, random_instance, tight6, tight7, tight_beta, RandomInstance, RandomKind};
use famcover::rational::{int, Rational};
use famcover::setfam::{crossing_number, is_sparse, residual_cores, EdgeSet};
use famcover::smallcuts::{self, Augment, SmallCuts};
use famcover::treeanal::{analyze_cover, analyze_run};
use famcover::wgmv::solve;
use rand::Rng;
use rayon::prelude::*;

const LIMIT_TIGHT: Duration = Duration::from_secs(1);
const LIMIT_RATIO: Duration = Duration::from_secs(5);
const LIMIT_GAMMA: Duration = Duration::from_secs(300);
const LIMIT_SPARSE: Duration = Duration::from_secs(300);
const LIMIT_PROPER: Duration = Duration::from_secs(120);
const LIMIT_CUTS: Duration = Duration::from_secs(300);
const LIMIT_ORACLE: Duration = Duration::from_secs(120);

const GAMMA_RUNS: u64 = 500;
const SPARSE_RUNS: u64 = 250;
const BETA_RUNS: u64 = 250;
const PROPER_RUNS: u64 = 200;
const CUT_GRAPHS: u64 = 100;
const ORACLE_DRAWS: u64 = 1000;

/// Minimum ratio of tree weight to core count at 64 leaves.
const RATIO7_MIN: f64 = 6.5;
const RATIO6_MIN: f64 = 5.6;
/// Approximation ratio required on proper families.
const PROPER_RHO: i64 = 2;

struct Line {
    id: u8,
    name: &'static str,
    pass: bool,
    detail: String,
    elapsed: Duration,
    limit: Option<Duration>,
}

/// Outcome of solving, certifying and analyzing one random instance.
struct RunOutcome {
    failures: Vec<String>,
    tree_failures: Vec<String>,
    cost: Rational,
    opt: Rational,
}

fn run_one(x: &RandomInstance) -> RunOutcome {
    let mut failures = Vec::new();
    let mut tree_failures = Vec::new();
    let g = &x.instance.graph;
    let oracle = x.instance.oracle(None).expect("instance has a family");
    let (_, trace) = match solve(g, oracle.as_ref()) {
        Ok(r) => r,
        Err(e) => {
            return RunOutcome {
                failures: vec![format!("solve: {e}")],
                tree_failures,
                cost: int(0),
                opt: int(0),
            }
        }
    };
    let opt = brute_force_opt(g, oracle.as_ref()).expect("opt");
    match certify(g, oracle.as_ref(), &trace, x.class, Some(&opt.cost)) {
        Ok(c) if c.verdict => {}
        Ok(c) => failures.extend(c.failures()),
        Err(e) => failures.push(format!("certify: {e}")),
    }
    match analyze_run(&x.family, g, &trace, x.class) {
        Ok(r) => {
            for it in &r.iterations {
                for c in it.report.failures() {
                    tree_failures.push(format!("iteration {}: {}", it.index, c.name));
                }
            }
        }
        Err(e) => tree_failures.push(format!("analyze: {e}")),
    }
    RunOutcome { failures, tree_failures, cost: g.cost(&trace.solution), opt: opt.cost }
}

fn draw(kind: RandomKind, seed: u64) -> RandomInstance {
    let mut rng = gens::rng(seed);
    let n = rng.gen_range(3..=7);
    random_instance(&mut rng, kind, n).expect("random instance")
}

fn summarize(outcomes: &[RunOutcome]) -> (usize, Option<String>) {
    let bad: Vec<_> = outcomes.iter().enumerate().filter(|(_, o)| !o.failures.is_empty()).collect();
    let first = bad.first().map(|(i, o)| format!("run {i}: {}", o.failures.join("; ")));
    (bad.len(), first)
}

fn criterion1() -> (bool, String) {
    let mut msgs = Vec::new();
    let mut ok = true;
    for l in [2usize, 4, 8, 16] {
        for (name, t) in [("tight7", tight7(l)), ("tight6", tight6(l))] {
            let t = t.expect("generator");
            let (w, c) = if name == "tight7" { (7 * l - 2, l + 2) } else { (6 * l - 2, l + 1) };
            let class = if name == "tight7" { FamilyClass::Gamma } else { FamilyClass::Sparse };
            let start = Instant::now();
            let a = analyze_cover(&t.family, &t.cover, Some(t.cores.clone()), class);
            let fine = a.as_ref().is_ok_and(|a| {
                a.tree.total_weight() == w && t.cores.len() == c && a.tree.shape() == t.shape
            }) && start.elapsed() < LIMIT_TIGHT;
            if !fine {
                msgs.push(format!("{name}(L={l})"));
            }
            ok &= fine;
        }
    }
    for (i, j) in [(2u32, 0u32), (2, 1), (3, 1), (4, 2)] {
        let t = tight_beta(i, j).expect("generator");
        let start = Instant::now();
        let a = analyze_cover(&t.family, &t.cover, Some(t.cores.clone()), FamilyClass::Beta(1 << j));
        let fine = a.as_ref().is_ok_and(|a| {
            a.tree.total_weight() == 6 * (1 << i) - 2
                && t.cores.len() == (1 << i) + (1 << (i - j))
                && a.tree.shape() == t.shape
        }) && start.elapsed() < LIMIT_TIGHT;
        if !fine {
            msgs.push(format!("tightBeta({i},{j})"));
        }
        ok &= fine;
    }
    let detail = if ok { format!("12 weights, core counts and tree shapes exact, each under {}s", LIMIT_TIGHT.as_secs()) } else { msgs.join(", ") };
    (ok, detail)
}

fn criterion2() -> (bool, String) {
    let ratio = |t: &gens::TightInstance, class| {
        let a = analyze_cover(&t.family, &t.cover, Some(t.cores.clone()), class).expect("analysis");
        a.tree.total_weight() as f64 / t.cores.len() as f64
    };
    let r7 = ratio(&tight7(64).expect("tight7"), FamilyClass::Gamma);
    let r6 = ratio(&tight6(64).expect("tight6"), FamilyClass::Sparse);
    (r7 >= RATIO7_MIN && r6 >= RATIO6_MIN, format!("tight7 {r7:.4} >= {RATIO7_MIN}, tight6 {r6:.4} >= {RATIO6_MIN}"))
}

fn runs(kind: RandomKind, base: u64, count: u64) -> Vec<RunOutcome> {
    (0..count).into_par_iter().map(|i| run_one(&draw(kind, base + i))).collect()
}

fn criterion6() -> (bool, String) {
    let bad: Vec<String> = (0..CUT_GRAPHS)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = gens::rng(6_000 + i);
            let n = rng.gen_range(3..=8);
            let integer = rng.gen_bool(0.5);
            let h = gens::random::random_capgraph(&mut rng, n, integer).expect("graph");
            let all = EdgeSet::complete(n);
            let f = smallcuts::materialize(&h, &EdgeSet::empty(), &Augment::Cover).expect("family");
            if !is_sparse(&f, &all).expect("sparse check") {
                return Some(format!("graph {i}: small cuts not sparse"));
            }
            let hc = gens::random::random_connected_capgraph(&mut rng, n).expect("graph");
            let fc = smallcuts::materialize(&hc, &EdgeSet::empty(), &Augment::Cover).expect("family");
            let beta = crossing_number(&fc, &all).expect("crossing number").beta;
            let bound = smallcuts::beta_bound(&hc).expect("bound");
            (beta > bound).then(|| format!("graph {i}: crossing {beta} > bound {bound}"))
        })
        .collect();
    (bad.is_empty(), match bad.first() {
        None => format!("{CUT_GRAPHS} graphs sparse, {CUT_GRAPHS} crossing numbers within bound"),
        Some(b) => format!("{} failures, first {b}", bad.len()),
    })
}

fn criterion8() -> (bool, String) {
    let bad: Vec<String> = (0..ORACLE_DRAWS)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = gens::rng(8_000 + i);
            let n = rng.gen_range(2..=7);
            let integer = rng.gen_bool(0.5);
            let h = gens::random::random_capgraph(&mut rng, n, integer).expect("graph");
            let j: Vec<(usize, usize)> = (0..rng.gen_range(0..=3))
                .map(|_| {
                    let u = rng.gen_range(0..n);
                    (u, (u + rng.gen_range(1..n)) % n)
                })
                .collect();
            let j = EdgeSet::new(n, j).expect("edges");
            let direct = smallcuts::small_cut_cores(&h, &j, &Augment::Cover).expect("cores");
            let f = smallcuts::materialize(&h, &EdgeSet::empty(), &Augment::Cover).expect("family");
            if direct != residual_cores(&f, &j) {
                return Some(format!("draw {i}: cores differ"));
            }
            if i % 4 == 0 && !f.is_empty() {
                let g = gens::random::random_graph(&mut rng, &f, 0.5).expect("graph");
                let oracle = SmallCuts::new(h);
                let (_, trace) = solve(&g, &oracle).expect("solve");
                let opt = brute_force_opt(&g, &oracle).expect("opt");
                if trace.dual_objective() > opt.cost {
                    return Some(format!("draw {i}: dual above opt"));
                }
            }
            None
        })
        .collect();
    (bad.is_empty(), match bad.first() {
        None => format!("{ORACLE_DRAWS} draws agree; dual <= opt on every solved draw"),
        Some(b) => format!("{} failures, first {b}", bad.len()),
    })
}

/// Everything the CLI emits for a fixed seed, concatenated.
fn artifacts() -> String {
    let mut out = String::new();
    for seed in 0..20u64 {
        let kind = [RandomKind::Gamma, RandomKind::Sparse, RandomKind::Beta, RandomKind::Proper][seed as usize % 4];
        let x = draw(kind, 9_000 + seed);
        let oracle = x.instance.oracle(None).expect("oracle");
        let (_, trace) = solve(&x.instance.graph, oracle.as_ref()).expect("solve");
        let cert = certify(&x.instance.graph, oracle.as_ref(), &trace, x.class, None).expect("certify");
        out += &x.instance.to_string();
        out += &serde_json::to_string(&trace.to_json()).expect("trace");
        out += &serde_json::to_string(&cert).expect("certificate");
    }
    for t in [tight7(8), tight6(8), tight_beta(3, 1)] {
        out += &serde_json::to_string(&t.expect("tight").bundle()).expect("bundle");
    }
    out
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> (bool, String)) -> (bool, String, Duration) {
    let start = Instant::now();
    let (pass, detail) = f();
    let elapsed = start.elapsed();
    (pass && limit.is_none_or(|l| elapsed <= l), detail, elapsed)
}

fn main() -> ExitCode {
    let mut lines = Vec::new();
    let mut push = |id, name, limit: Option<Duration>, r: (bool, String, Duration)| {
        lines.push(Line { id, name, pass: r.0, detail: r.1, elapsed: r.2, limit });
        let l = lines.last().expect("just pushed");
        println!(
            "[{}] {} {}: {} ({:.2}s{})",
            if l.pass { "PASS" } else { "FAIL" },
            l.id,
            l.name,
            l.detail,
            l.elapsed.as_secs_f64(),
            l.limit.map(|d| format!(" / limit {}s", d.as_secs())).unwrap_or_default()
        );
    };

    push(1, "tight generators", None, timed(None, criterion1));
    push(2, "lower-bound ratios at 64 leaves", Some(LIMIT_RATIO), timed(Some(LIMIT_RATIO), criterion2));

    let mut tree_failures = Vec::new();
    let mut tree_runs = 0usize;
    let mut collect_tree = |outs: &[RunOutcome]| {
        tree_runs += outs.len();
        for (i, o) in outs.iter().enumerate() {
            tree_failures.extend(o.tree_failures.iter().map(|f| format!("run {i}: {f}")));
        }
    };

    let r = timed(Some(LIMIT_GAMMA), || {
        let outs = runs(RandomKind::Gamma, 3_000, GAMMA_RUNS);
        let (bad, first) = summarize(&outs);
        collect_tree(&outs);
        (bad == 0, first.unwrap_or_else(|| format!("{GAMMA_RUNS} γ-pliable runs, rho 7, zero failures")))
    });
    push(3, "gamma certificates", Some(LIMIT_GAMMA), r);

    let r = timed(Some(LIMIT_SPARSE), || {
        let sparse = runs(RandomKind::Sparse, 4_000, SPARSE_RUNS);
        let beta = runs(RandomKind::Beta, 4_500, BETA_RUNS);
        let (b1, f1) = summarize(&sparse);
        let (b2, f2) = summarize(&beta);
        collect_tree(&sparse);
        collect_tree(&beta);
        (b1 + b2 == 0, f1.or(f2).unwrap_or_else(|| {
            format!("{SPARSE_RUNS} sparse runs (rho 6), {BETA_RUNS} beta runs (rho 6-1/(b+1)), zero failures")
        }))
    });
    push(4, "sparse and beta certificates", Some(LIMIT_SPARSE), r);

    let r = timed(Some(LIMIT_PROPER), || {
        let outs = runs(RandomKind::Proper, 5_000, PROPER_RUNS);
        let over: Vec<usize> = (0..outs.len())
            .filter(|&i| outs[i].cost > int(PROPER_RHO) * &outs[i].opt || !outs[i].failures.is_empty())
            .collect();
        let worst = outs
            .iter()
            .filter(|o| o.opt > int(0))
            .map(|o| &o.cost / &o.opt)
            .max()
            .unwrap_or_else(|| int(0));
        collect_tree(&outs);
        (over.is_empty(), format!("{PROPER_RUNS} runs, worst cost/opt {worst}, {} above {PROPER_RHO}", over.len()))
    });
    push(5, "proper families", Some(LIMIT_PROPER), r);

    push(6, "small-cuts structure", Some(LIMIT_CUTS), timed(Some(LIMIT_CUTS), criterion6));

    let detail = match tree_failures.first() {
        None => format!("{tree_runs} runs, every iteration's tree checks hold"),
        Some(f) => format!("{} failures, first {f}", tree_failures.len()),
    };
    push(7, "tree analysis across runs", None, (tree_failures.is_empty(), detail, Duration::ZERO));

    push(8, "small-cut oracle agreement", Some(LIMIT_ORACLE), timed(Some(LIMIT_ORACLE), criterion8));

    let r = timed(None, || {
        let same = artifacts() == artifacts();
        (same, if same { "traces, certificates and bundles byte-identical".into() } else { "outputs differ".into() })
    });
    push(9, "determinism", None, r);

    if lines.iter().all(|l| l.pass) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
