//! Brute-force optima and certificates for solver runs.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::setfam::{FamilyOracle, NodeSet};
use crate::wgmv::{CostedGraph, DualState, RunTrace};

/// Largest edge count `brute_force_opt` accepts.
pub const OPT_MAX_EDGES: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Optimum {
    pub cost: Rational,
    /// Lexicographically least optimal id list, ascending.
    pub edges: Vec<usize>,
}

/// Minimum-cost cover by branch and bound.
///
/// Branches on the edges crossing the first uncovered core: the `i`-th branch
/// takes candidate `i` and forbids the earlier ones, so every cover is reached
/// exactly once.
pub fn brute_force_opt(g: &CostedGraph, oracle: &dyn FamilyOracle) -> Result<Optimum> {
    if g.len() > OPT_MAX_EDGES {
        return Err(Error::Guard(format!(
            "instance too large for brute-force optimum (|E| = {} > {OPT_MAX_EDGES})",
            g.len()
        )));
    }
    if g.n() != oracle.universe_size() {
        return Err(Error::UniverseMismatch(g.n(), oracle.universe_size()));
    }
    let mut bb = Search { g, oracle, best: None, excluded: vec![false; g.len()], chosen: Vec::new() };
    bb.run(rational::zero(), true)?;
    bb.best.ok_or_else(|| unreachable_core(g, oracle))
}

fn unreachable_core(g: &CostedGraph, oracle: &dyn FamilyOracle) -> Error {
    match oracle.cores(&g.all_edges()) {
        Ok(cores) => match cores.into_iter().next() {
            Some(core) => Error::Infeasible { core },
            None => Error::InvalidInput("no cover found".into()),
        },
        Err(e) => e,
    }
}

struct Search<'a> {
    g: &'a CostedGraph,
    oracle: &'a dyn FamilyOracle,
    best: Option<Optimum>,
    excluded: Vec<bool>,
    chosen: Vec<usize>,
}

impl Search<'_> {
    fn run(&mut self, cost: Rational, root: bool) -> Result<()> {
        if let Some(b) = &self.best {
            if cost > b.cost {
                return Ok(());
            }
        }
        let cores = self.oracle.cores(&self.g.edge_set(&self.chosen))?;
        let Some(core) = cores.first() else {
            let mut ids = self.chosen.clone();
            ids.sort_unstable();
            let better = match &self.best {
                None => true,
                Some(b) => cost < b.cost || (cost == b.cost && ids < b.edges),
            };
            if better {
                self.best = Some(Optimum { cost, edges: ids });
            }
            return Ok(());
        };
        let cands: Vec<usize> = (0..self.g.len())
            .filter(|&e| !self.excluded[e] && !self.chosen.contains(&e))
            .filter(|&e| core.separates(self.g.edges()[e].u, self.g.edges()[e].v))
            .collect();
        if root && cands.is_empty() {
            return Err(Error::Infeasible { core: core.clone() });
        }
        for &e in &cands {
            self.chosen.push(e);
            let c = &cost + &self.g.edges()[e].cost;
            self.run(c, false)?;
            self.chosen.pop();
            self.excluded[e] = true;
        }
        for &e in &cands {
            self.excluded[e] = false;
        }
        Ok(())
    }
}

/// The family class a certificate is issued against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyClass {
    Gamma,
    Sparse,
    Beta(usize),
}

impl FamilyClass {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "gamma" => Some(FamilyClass::Gamma),
            "sparse" => Some(FamilyClass::Sparse),
            _ => s.strip_prefix("beta:")?.parse().ok().filter(|&b| b >= 1).map(FamilyClass::Beta),
        }
    }

    /// The approximation ratio the class guarantees.
    pub fn rho(self) -> Rational {
        match self {
            FamilyClass::Gamma => rational::int(7),
            FamilyClass::Sparse => rational::int(6),
            FamilyClass::Beta(b) => rational::int(6) - rational::frac(1, b as i64 + 1),
        }
    }

    /// Bound on `Σ_C d_J(C)` for one iteration with `c` cores; gates the verdict.
    pub fn iteration_bound(self, c: usize) -> Rational {
        match self {
            FamilyClass::Sparse => self.tree_bound(c),
            _ => self.rho() * rational::int(c as i64),
        }
    }

    /// The sharper shortcut-tree bound (`7|C|−2`, `6|C|−2`, `ρ|C|`).
    pub fn tree_bound(self, c: usize) -> Rational {
        let c = rational::int(c as i64);
        match self {
            FamilyClass::Gamma => rational::int(7) * c - rational::int(2),
            FamilyClass::Sparse => rational::int(6) * c - rational::int(2),
            FamilyClass::Beta(_) => self.rho() * c,
        }
    }
}

impl fmt::Display for FamilyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyClass::Gamma => write!(f, "gamma"),
            FamilyClass::Sparse => write!(f, "sparse"),
            FamilyClass::Beta(b) => write!(f, "beta:{b}"),
        }
    }
}

impl Serialize for FamilyClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IterationCheck {
    pub index: usize,
    pub cores: usize,
    /// `Σ_C d_J(C)` with `J` the final solution.
    pub degree_sum: usize,
    #[serde(with = "crate::rational::serde_pair")]
    pub bound: Rational,
    pub holds: bool,
    /// Whether the sharper shortcut-tree bound also holds (informational).
    pub within_tree_bound: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub digest: String,
    pub class: FamilyClass,
    #[serde(with = "crate::rational::serde_pair")]
    pub rho: Rational,
    #[serde(with = "crate::rational::serde_pair")]
    pub cost: Rational,
    #[serde(with = "crate::rational::serde_pair")]
    pub dual: Rational,
    #[serde(with = "crate::rational::serde_pair_opt")]
    pub opt: Option<Rational>,
    pub iterations: Vec<IterationCheck>,
    /// Largest `Σ_C d_J(C) / |C|` over iterations.
    #[serde(with = "crate::rational::serde_pair_opt")]
    pub max_iteration_ratio: Option<Rational>,
    pub checks: Vec<Check>,
    pub verdict: bool,
}

impl Certificate {
    pub fn failures(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .checks
            .iter()
            .filter(|c| !c.holds)
            .map(|c| match &c.detail {
                Some(d) => format!("{}: {d}", c.name),
                None => c.name.to_string(),
            })
            .collect();
        out.extend(
            self.iterations
                .iter()
                .filter(|it| !it.holds)
                .map(|it| format!("iteration {}: degree sum {} above bound", it.index, it.degree_sum)),
        );
        out
    }
}

/// SHA-256 over the canonical JSON of the graph and the family description.
pub fn instance_digest(g: &CostedGraph, oracle: &dyn FamilyOracle) -> String {
    let doc = serde_json::json!({
        "n": g.n(),
        "edges": g.edges().iter().map(|e| {
            serde_json::json!([e.u, e.v, rational::pair(&e.cost)])
        }).collect::<Vec<_>>(),
        "family": oracle.describe(),
    });
    hex::encode(Sha256::digest(doc.to_string().as_bytes()))
}

fn check(name: &'static str, holds: bool, detail: impl FnOnce() -> String) -> Check {
    Check { name, holds, detail: (!holds).then(detail) }
}

/// Verifies a trace against the class's guarantees.
///
/// The per-iteration inequality uses the final solution measured against each
/// iteration's recorded cores; the oracle is only consulted to confirm that the
/// solution covers the family.
pub fn certify(
    g: &CostedGraph,
    oracle: &dyn FamilyOracle,
    trace: &RunTrace,
    class: FamilyClass,
    opt: Option<&Rational>,
) -> Result<Certificate> {
    let rho = class.rho();
    let mut checks = Vec::new();

    let mut y: BTreeMap<NodeSet, Rational> = BTreeMap::new();
    let mut eps_ok = true;
    for it in &trace.iterations {
        eps_ok &= rational::is_nonnegative(&it.eps);
        for c in &it.cores {
            *y.entry(c.clone()).or_insert_with(rational::zero) += &it.eps;
        }
    }
    y.retain(|_, v| *v != rational::zero());
    checks.push(check("eps_nonnegative", eps_ok, || "negative raise".into()));
    checks.push(check("dual_matches_iterations", y == trace.dual.y, || {
        "recorded duals differ from the sum of raises".into()
    }));

    let load = DualState::recompute_loads(&y, g);
    let over: Vec<usize> = (0..g.len()).filter(|&e| load[e] > g.edges()[e].cost).collect();
    checks.push(check("dual_feasible", over.is_empty(), || format!("edges {over:?} overloaded")));
    let slack: Vec<usize> =
        trace.solution.iter().copied().filter(|&e| load[e] != g.edges()[e].cost).collect();
    checks.push(check("solution_tight", slack.is_empty(), || format!("edges {slack:?} not tight")));

    let j = g.edge_set(&trace.solution);
    let covered = oracle.is_covered(&j)?;
    checks.push(check("solution_covers", covered, || "solution leaves a member uncovered".into()));

    let mut iterations = Vec::with_capacity(trace.iterations.len());
    let mut max_ratio: Option<Rational> = None;
    for (index, it) in trace.iterations.iter().enumerate() {
        let degree_sum: usize = it.cores.iter().map(|c| j.degree(c)).sum();
        let bound = class.iteration_bound(it.cores.len());
        let d = rational::int(degree_sum as i64);
        if !it.cores.is_empty() {
            let r = &d / rational::int(it.cores.len() as i64);
            if max_ratio.as_ref().is_none_or(|m| &r > m) {
                max_ratio = Some(r);
            }
        }
        iterations.push(IterationCheck {
            index,
            cores: it.cores.len(),
            degree_sum,
            holds: d <= bound,
            within_tree_bound: d <= class.tree_bound(it.cores.len()),
            bound,
        });
    }

    let cost = g.cost(&trace.solution);
    let dual = DualState { y, load }.objective();
    checks.push(check("cost_within_rho_dual", cost <= &rho * &dual, || {
        format!("cost {cost} exceeds {rho} x dual {dual}")
    }));
    if let Some(opt) = opt {
        checks.push(check("cost_within_rho_opt", cost <= &rho * opt, || {
            format!("cost {cost} exceeds {rho} x opt {opt}")
        }));
        checks.push(check("dual_below_opt", &dual <= opt, || format!("dual {dual} exceeds opt {opt}")));
    }
    let verdict = checks.iter().all(|c| c.holds) && iterations.iter().all(|i| i.holds);
    Ok(Certificate {
        digest: instance_digest(g, oracle),
        class,
        rho,
        cost,
        dual,
        opt: opt.cloned(),
        iterations,
        max_iteration_ratio: max_ratio,
        checks,
        verdict,
    })
}
