//! Two-phase primal-dual algorithm over any core oracle.
//!
//! Phase 1 raises the duals of all current cores uniformly until a candidate
//! edge becomes tight, adds it, and repeats until nothing is uncovered.
//! Phase 2 walks the additions backwards and drops every edge whose removal
//! keeps the family covered.

use std::collections::BTreeMap;

use num::traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, RatPair, Rational};
use crate::setfam::{EdgeSet, FamilyOracle, NodeSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostedEdge {
    pub u: usize,
    pub v: usize,
    #[serde(with = "crate::rational::serde_pair")]
    pub cost: Rational,
}

/// Candidate edges; an edge's id is its index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostedGraph {
    n: usize,
    edges: Vec<CostedEdge>,
}

impl CostedGraph {
    pub fn new(n: usize, edges: Vec<CostedEdge>) -> Result<Self> {
        for e in &edges {
            if e.u >= n || e.v >= n {
                return Err(Error::NodeOutOfRange { node: e.u.max(e.v), n });
            }
            if e.u == e.v {
                return Err(Error::InvalidInput(format!("self-loop at node {}", e.u)));
            }
            if !rational::is_nonnegative(&e.cost) {
                return Err(Error::InvalidInput(format!("negative cost on ({},{})", e.u, e.v)));
            }
        }
        Ok(CostedGraph { n, edges })
    }

    pub fn from_triples(n: usize, edges: &[(usize, usize, Rational)]) -> Result<Self> {
        Self::new(n, edges.iter().map(|(u, v, c)| CostedEdge { u: *u, v: *v, cost: c.clone() }).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[CostedEdge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// The listed edges as an [`EdgeSet`], in the given order.
    pub fn edge_set(&self, ids: &[usize]) -> EdgeSet {
        ids.iter().map(|&i| (self.edges[i].u, self.edges[i].v)).collect()
    }

    pub fn all_edges(&self) -> EdgeSet {
        self.edges.iter().map(|e| (e.u, e.v)).collect()
    }

    pub fn cost(&self, ids: &[usize]) -> Rational {
        ids.iter().fold(rational::zero(), |acc, &i| acc + &self.edges[i].cost)
    }

    fn separates(&self, id: usize, s: &NodeSet) -> bool {
        s.separates(self.edges[id].u, self.edges[id].v)
    }
}

/// Raised duals `y_S` and the per-edge loads they induce.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DualState {
    pub y: BTreeMap<NodeSet, Rational>,
    pub load: Vec<Rational>,
}

impl DualState {
    fn new(m: usize) -> Self {
        DualState { y: BTreeMap::new(), load: vec![rational::zero(); m] }
    }

    pub fn objective(&self) -> Rational {
        self.y.values().fold(rational::zero(), |acc, v| acc + v)
    }

    /// Loads recomputed from `y` alone.
    pub fn recompute_loads(y: &BTreeMap<NodeSet, Rational>, g: &CostedGraph) -> Vec<Rational> {
        (0..g.len())
            .map(|e| {
                y.iter()
                    .filter(|(s, _)| g.separates(e, s))
                    .fold(rational::zero(), |acc, (_, v)| acc + v)
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Iteration {
    pub cores: Vec<NodeSet>,
    pub eps: Rational,
    pub added: usize,
    /// Other edges that became tight together with `added`.
    pub tied: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunTrace {
    pub iterations: Vec<Iteration>,
    pub deleted: Vec<usize>,
    /// Surviving edge ids, ascending.
    pub solution: Vec<usize>,
    pub dual: DualState,
}

impl RunTrace {
    pub fn added(&self) -> Vec<usize> {
        self.iterations.iter().map(|it| it.added).collect()
    }

    pub fn dual_objective(&self) -> Rational {
        self.dual.objective()
    }

    pub fn to_json(&self) -> TraceJson {
        TraceJson {
            iterations: self
                .iterations
                .iter()
                .map(|it| IterationJson {
                    cores: it.cores.iter().map(NodeSet::to_vec).collect(),
                    eps: RatPair(it.eps.clone()),
                    added: it.added,
                    tied: it.tied.clone(),
                })
                .collect(),
            deleted: self.deleted.clone(),
            solution: self.solution.clone(),
            dual: self
                .dual
                .y
                .iter()
                .map(|(s, y)| DualJson { set: s.to_vec(), y: RatPair(y.clone()) })
                .collect(),
        }
    }

    /// Rebuilds a trace; loads are recomputed from the duals.
    pub fn from_json(g: &CostedGraph, j: &TraceJson) -> Result<Self> {
        let n = g.n();
        let set = |l: &[usize]| NodeSet::from_nodes(n, l.iter().copied());
        let check_id = |id: usize| {
            if id < g.len() {
                Ok(id)
            } else {
                Err(Error::InvalidInput(format!("edge id {id} out of range")))
            }
        };
        let mut iterations = Vec::with_capacity(j.iterations.len());
        for it in &j.iterations {
            iterations.push(Iteration {
                cores: it.cores.iter().map(|c| set(c)).collect::<Result<_>>()?,
                eps: it.eps.0.clone(),
                added: check_id(it.added)?,
                tied: it.tied.iter().map(|&e| check_id(e)).collect::<Result<_>>()?,
            });
        }
        let mut y = BTreeMap::new();
        for d in &j.dual {
            y.insert(set(&d.set)?, d.y.0.clone());
        }
        let load = DualState::recompute_loads(&y, g);
        Ok(RunTrace {
            iterations,
            deleted: j.deleted.iter().map(|&e| check_id(e)).collect::<Result<_>>()?,
            solution: j.solution.iter().map(|&e| check_id(e)).collect::<Result<_>>()?,
            dual: DualState { y, load },
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct IterationJson {
    pub cores: Vec<Vec<usize>>,
    pub eps: RatPair,
    pub added: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tied: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DualJson {
    pub set: Vec<usize>,
    pub y: RatPair,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TraceJson {
    pub iterations: Vec<IterationJson>,
    pub deleted: Vec<usize>,
    pub solution: Vec<usize>,
    pub dual: Vec<DualJson>,
}

fn check_universe(g: &CostedGraph, oracle: &dyn FamilyOracle) -> Result<()> {
    if g.n() != oracle.universe_size() {
        return Err(Error::UniverseMismatch(g.n(), oracle.universe_size()));
    }
    Ok(())
}

/// Raise-and-add loop. The returned trace has `solution` set to every added edge.
pub fn phase1(g: &CostedGraph, oracle: &dyn FamilyOracle) -> Result<RunTrace> {
    check_universe(g, oracle)?;
    let m = g.len();
    let mut dual = DualState::new(m);
    let mut in_j = vec![false; m];
    let mut added = Vec::new();
    let mut iterations = Vec::new();
    loop {
        let cores = oracle.cores(&g.edge_set(&added))?;
        if cores.is_empty() {
            break;
        }
        let cnt: Vec<usize> = (0..m)
            .map(|e| if in_j[e] { 0 } else { cores.iter().filter(|c| g.separates(e, c)).count() })
            .collect();
        if let Some(c) = cores.iter().find(|c| !(0..m).any(|e| !in_j[e] && g.separates(e, c))) {
            return Err(Error::Infeasible { core: c.clone() });
        }
        let eps = (0..m)
            .filter(|&e| cnt[e] > 0)
            .map(|e| (&g.edges[e].cost - &dual.load[e]) / rational::int(cnt[e] as i64))
            .min()
            .expect("every core has a candidate edge");
        for c in &cores {
            *dual.y.entry(c.clone()).or_insert_with(rational::zero) += &eps;
        }
        if !eps.is_zero() {
            for (load, &k) in dual.load.iter_mut().zip(&cnt) {
                if k > 0 {
                    *load += &eps * rational::int(k as i64);
                }
            }
        }
        let mut tight = (0..m).filter(|&e| cnt[e] > 0 && dual.load[e] == g.edges[e].cost);
        let first = tight.next().expect("the minimising edge is tight");
        in_j[first] = true;
        added.push(first);
        iterations.push(Iteration { cores, eps, added: first, tied: tight.collect() });
    }
    // Zero raises leave behind y entries of value 0; they carry no information.
    dual.y.retain(|_, v| !v.is_zero());
    Ok(RunTrace { iterations, deleted: Vec::new(), solution: added, dual })
}

/// Reverse delete over the additions of `trace`.
pub fn phase2(g: &CostedGraph, oracle: &dyn FamilyOracle, trace: RunTrace) -> Result<RunTrace> {
    check_universe(g, oracle)?;
    let added = trace.added();
    let mut keep = vec![true; added.len()];
    let mut deleted = Vec::new();
    for pos in (0..added.len()).rev() {
        keep[pos] = false;
        let rest: Vec<usize> = added.iter().zip(&keep).filter(|(_, &k)| k).map(|(&e, _)| e).collect();
        if oracle.is_covered(&g.edge_set(&rest))? {
            deleted.push(added[pos]);
        } else {
            keep[pos] = true;
        }
    }
    let mut solution: Vec<usize> = added.iter().zip(&keep).filter(|(_, &k)| k).map(|(&e, _)| e).collect();
    solution.sort_unstable();
    Ok(RunTrace { deleted, solution, ..trace })
}

pub fn solve(g: &CostedGraph, oracle: &dyn FamilyOracle) -> Result<(EdgeSet, RunTrace)> {
    let trace = phase2(g, oracle, phase1(g, oracle)?)?;
    Ok((g.edge_set(&trace.solution), trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::setfam::ExplicitFamily;
    use crate::smallcuts::{CapGraph, SmallCuts};

    fn fam(n: usize, lists: &[&[usize]]) -> ExplicitFamily {
        let lists: Vec<Vec<usize>> = lists.iter().map(|l| l.to_vec()).collect();
        ExplicitFamily::from_lists(n, &lists).unwrap()
    }

    fn graph(n: usize, edges: &[(usize, usize, i64)]) -> CostedGraph {
        let t: Vec<_> = edges.iter().map(|&(u, v, c)| (u, v, int(c))).collect();
        CostedGraph::from_triples(n, &t).unwrap()
    }

    #[test]
    fn single_set_single_edge() {
        let (sol, tr) = solve(&graph(2, &[(0, 1, 5)]), &fam(2, &[&[0]])).unwrap();
        assert_eq!(sol.edges(), &[(0, 1)]);
        assert_eq!(tr.iterations.len(), 1);
        assert_eq!(tr.iterations[0].eps, int(5));
        assert_eq!(tr.dual_objective(), int(5));
    }

    #[test]
    fn shared_edge_splits_slack() {
        let (_, tr) = solve(&graph(3, &[(0, 1, 4)]), &fam(3, &[&[0], &[1]])).unwrap();
        assert_eq!(tr.iterations[0].eps, int(2));
        assert_eq!(tr.solution, vec![0]);
        assert_eq!(tr.dual_objective(), int(4));
    }

    #[test]
    fn empty_family() {
        let (sol, tr) = solve(&graph(3, &[(0, 1, 1)]), &ExplicitFamily::empty(3)).unwrap();
        assert!(sol.is_empty() && tr.iterations.is_empty());
    }

    #[test]
    fn infeasible_names_core() {
        let err = solve(&graph(3, &[(0, 1, 1)]), &fam(3, &[&[2]])).unwrap_err();
        match err {
            Error::Infeasible { core } => assert_eq!(core.to_vec(), vec![2]),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn zero_raise_adds_already_tight_edge() {
        // After (0,2) is added, {1} is the only core and (1,2) has zero slack left.
        let g = graph(3, &[(0, 2, 2), (1, 2, 0)]);
        let (_, tr) = solve(&g, &fam(3, &[&[0], &[1]])).unwrap();
        assert_eq!(tr.iterations[0].eps, int(0));
        assert_eq!(tr.iterations[0].added, 1);
        assert!(tr.dual.y.values().all(|v| !v.is_zero()));
    }

    #[test]
    fn reverse_delete_drops_redundant_edge() {
        // (0,1) is bought for {0}; (0,2) is then bought for {0,1} and covers {0} too.
        let f = fam(3, &[&[0], &[0, 1]]);
        let g = graph(3, &[(0, 1, 1), (0, 2, 2)]);
        let (_, tr) = solve(&g, &f).unwrap();
        assert_eq!(tr.added(), vec![0, 1]);
        assert_eq!(tr.deleted, vec![0]);
        assert_eq!(tr.solution, vec![1]);
    }

    #[test]
    fn minimal_phase_one_output_is_kept() {
        let f = fam(3, &[&[0], &[1], &[0, 1]]);
        let g = graph(3, &[(0, 2, 1), (1, 2, 1), (0, 1, 3)]);
        let (_, tr) = solve(&g, &f).unwrap();
        assert_eq!(tr.solution, vec![0, 1]);
        assert!(tr.deleted.is_empty());
    }

    #[test]
    fn triangle_small_cuts_costs_two() {
        let h = CapGraph::unit(3, &[(0, 1), (1, 2), (0, 2)], 3).unwrap();
        let g = graph(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 1)]);
        let (_, tr) = solve(&g, &SmallCuts::new(h)).unwrap();
        assert_eq!(g.cost(&tr.solution), int(2));
    }

    #[test]
    fn ties_are_logged_and_lowest_id_wins() {
        let g = graph(3, &[(0, 1, 1), (0, 2, 1)]);
        let (_, tr) = solve(&g, &fam(3, &[&[0]])).unwrap();
        assert_eq!(tr.iterations[0].added, 0);
        assert_eq!(tr.iterations[0].tied, vec![1]);
    }

    #[test]
    fn trace_json_round_trip() {
        let f = fam(3, &[&[0], &[1], &[0, 1]]);
        let g = graph(3, &[(0, 2, 1), (1, 2, 1), (0, 1, 3)]);
        let (_, tr) = solve(&g, &f).unwrap();
        let j = serde_json::to_string(&tr.to_json()).unwrap();
        let back = RunTrace::from_json(&g, &serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(back, tr);
    }
}
