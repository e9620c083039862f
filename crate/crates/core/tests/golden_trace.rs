//! The solver against a straight-line reference on a small Steiner-forest instance.

use famcover::rational::{frac, int, zero, Rational};
use famcover::setfam::{ExplicitFamily, NodeSet};
use famcover::wgmv::{solve, CostedGraph};

const N: usize = 5;
const DEMANDS: [(usize, usize); 2] = [(0, 3), (1, 4)];
const EDGES: [(usize, usize, i64, i64); 7] =
    [(0, 1, 1, 1), (1, 2, 2, 1), (2, 3, 1, 1), (3, 4, 3, 1), (0, 4, 4, 1), (1, 3, 5, 2), (0, 2, 3, 2)];

fn separates(mask: u32, u: usize, v: usize) -> bool {
    (mask >> u & 1) != (mask >> v & 1)
}

fn in_family(mask: u32) -> bool {
    DEMANDS.iter().any(|&(s, t)| separates(mask, s, t))
}

struct Reference {
    /// (cores, eps, added) per iteration.
    iterations: Vec<(Vec<u32>, Rational, usize)>,
    deleted: Vec<usize>,
    solution: Vec<usize>,
    dual: Rational,
}

fn covered(j: &[usize], mask: u32) -> bool {
    j.iter().any(|&e| separates(mask, EDGES[e].0, EDGES[e].1))
}

fn feasible(j: &[usize]) -> bool {
    (1..(1u32 << N) - 1).filter(|&m| in_family(m)).all(|m| covered(j, m))
}

fn reference() -> Reference {
    let cost: Vec<Rational> = EDGES.iter().map(|e| frac(e.2, e.3)).collect();
    let mut y: Vec<(u32, Rational)> = Vec::new();
    let mut j: Vec<usize> = Vec::new();
    let mut iterations = Vec::new();
    loop {
        let residual: Vec<u32> = (1..(1u32 << N) - 1).filter(|&m| in_family(m) && !covered(&j, m)).collect();
        if residual.is_empty() {
            break;
        }
        let cores: Vec<u32> =
            residual.iter().copied().filter(|&m| !residual.iter().any(|&s| s != m && s & m == s)).collect();
        let mut best: Option<(Rational, usize)> = None;
        for e in (0..EDGES.len()).filter(|e| !j.contains(e)) {
            let hits = cores.iter().filter(|&&c| separates(c, EDGES[e].0, EDGES[e].1)).count();
            if hits == 0 {
                continue;
            }
            let load: Rational = y
                .iter()
                .filter(|(s, _)| separates(*s, EDGES[e].0, EDGES[e].1))
                .map(|(_, v)| v.clone())
                .sum();
            let r = (&cost[e] - load) / int(hits as i64);
            if best.as_ref().is_none_or(|(b, _)| r < *b) {
                best = Some((r, e));
            }
        }
        let (eps, e) = best.expect("feasible");
        for &c in &cores {
            match y.iter_mut().find(|(s, _)| *s == c) {
                Some((_, v)) => *v += &eps,
                None => y.push((c, eps.clone())),
            }
        }
        j.push(e);
        iterations.push((cores, eps, e));
    }
    let mut keep = j.clone();
    let mut deleted = Vec::new();
    for &e in j.iter().rev() {
        let rest: Vec<usize> = keep.iter().copied().filter(|&x| x != e).collect();
        if feasible(&rest) {
            keep = rest;
            deleted.push(e);
        }
    }
    keep.sort();
    let dual = y.iter().map(|(_, v)| v.clone()).fold(zero(), |a, b| a + b);
    Reference { iterations, deleted, solution: keep, dual }
}

fn instance() -> (CostedGraph, ExplicitFamily) {
    let triples: Vec<_> = EDGES.iter().map(|&(u, v, p, q)| (u, v, frac(p, q))).collect();
    let g = CostedGraph::from_triples(N, &triples).unwrap();
    let sets = (1..(1u64 << N) - 1).filter(|&m| in_family(m as u32)).map(|m| NodeSet::from_mask(N, m));
    (g, ExplicitFamily::from_sets_dedup(N, sets).unwrap())
}

#[test]
fn solver_matches_reference() {
    let (g, f) = instance();
    let (_, trace) = solve(&g, &f).unwrap();
    let r = reference();
    assert_eq!(trace.iterations.len(), r.iterations.len());
    for (it, (cores, eps, added)) in trace.iterations.iter().zip(&r.iterations) {
        let mut want: Vec<NodeSet> = cores.iter().map(|&m| NodeSet::from_mask(N, m as u64)).collect();
        want.sort();
        assert_eq!(it.cores, want);
        assert_eq!(&it.eps, eps);
        assert_eq!(it.added, *added);
    }
    assert_eq!(trace.deleted, r.deleted);
    assert_eq!(trace.solution, r.solution);
    assert_eq!(trace.dual_objective(), r.dual);
}

#[test]
fn frozen_trace() {
    let (g, f) = instance();
    let (_, trace) = solve(&g, &f).unwrap();
    let got = serde_json::to_string(&trace.to_json()).unwrap();
    assert_eq!(got, GOLDEN);
}

/// Frozen from the reference above; edges 5 and 6 tie in the third iteration.
const GOLDEN: &str = r#"{"iterations":[{"cores":[[0],[1],[3],[4]],"eps":[1,2],"added":0},{"cores":[[3],[4],[0,1]],"eps":[1,2],"added":2},{"cores":[[4],[0,1],[2,3]],"eps":[1,4],"added":5,"tied":[6]},{"cores":[[4],[0,1,2,3]],"eps":[1,4],"added":3}],"deleted":[2],"solution":[0,3,5],"dual":[{"set":[0],"y":[1,2]},{"set":[1],"y":[1,2]},{"set":[3],"y":[1,1]},{"set":[4],"y":[3,2]},{"set":[0,1],"y":[3,4]},{"set":[2,3],"y":[1,4]},{"set":[0,1,2,3],"y":[1,4]}]}"#;
