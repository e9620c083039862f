//! Seeded random instances for each family class, gated by the exhaustive checkers.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::FamilyClass;
use crate::io::Instance;
use crate::rational::{frac, int, Rational};
use crate::setfam::{
    crossing_number, is_gamma_pliable, is_sparse, EdgeSet, ExplicitFamily, NodeSet,
};
use crate::smallcuts::{self, Augment, CapGraph};
use crate::wgmv::CostedGraph;

/// Most candidate edges a random instance carries.
pub const MAX_EDGES: usize = 24;
/// Draws allowed before a gated generator gives up.
const ATTEMPTS: usize = 200;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Which random family to draw.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RandomKind {
    /// Cuts separating a demand pair.
    Proper,
    /// Small cuts of a random capacitated graph.
    Sparse,
    /// Small cuts of a `λ`-connected integer graph with `k > λ`.
    Beta,
    /// A mixture, kept only if it passes the γ-pliability check.
    Gamma,
}

impl RandomKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "proper" | "uncrossable" => Some(RandomKind::Proper),
            "sparse" => Some(RandomKind::Sparse),
            "beta" => Some(RandomKind::Beta),
            "gamma" => Some(RandomKind::Gamma),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RandomInstance {
    pub instance: Instance,
    /// Explicit form of the family, used by the checkers and the analyzer.
    pub family: ExplicitFamily,
    pub class: FamilyClass,
}

fn cost(rng: &mut ChaCha8Rng) -> Rational {
    frac(rng.gen_range(0..=18), 2)
}

/// Random costed edges: each pair with probability `density`, then extra
/// edges until every member of `f` is covered.
pub fn random_graph(rng: &mut ChaCha8Rng, f: &ExplicitFamily, density: f64) -> Result<CostedGraph> {
    let n = f.universe();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(density) {
                pairs.push((u, v));
            }
        }
    }
    pairs.shuffle(rng);
    pairs.truncate(MAX_EDGES);
    for s in f.members() {
        let es = EdgeSet::new(n, pairs.clone())?;
        if es.covers(s) {
            continue;
        }
        let inside = s.to_vec();
        let outside = s.complement().to_vec();
        let (Some(&u), Some(&v)) = (inside.choose(rng), outside.choose(rng)) else {
            return Err(Error::InvalidInput(format!("member {s} cannot be covered")));
        };
        if pairs.len() == MAX_EDGES {
            return Err(Error::Guard("random graph needs more than the edge limit".into()));
        }
        pairs.push((u.min(v), u.max(v)));
    }
    let triples: Vec<_> = pairs.into_iter().map(|(u, v)| (u, v, cost(rng))).collect();
    CostedGraph::from_triples(n, &triples)
}

/// Sets separating at least one of 1–3 random demand pairs.
pub fn random_proper(rng: &mut ChaCha8Rng, n: usize) -> Result<ExplicitFamily> {
    let pairs: Vec<(usize, usize)> = (0..rng.gen_range(1..=3))
        .map(|_| {
            let u = rng.gen_range(0..n);
            let v = (u + rng.gen_range(1..n)) % n;
            (u, v)
        })
        .collect();
    let sets = (1..(1u64 << n) - 1)
        .map(|m| NodeSet::from_mask(n, m))
        .filter(|s| pairs.iter().any(|&(u, v)| s.separates(u, v)));
    ExplicitFamily::from_sets_dedup(n, sets)
}

/// Random capacitated graph; `integer` restricts capacities to 1–3.
pub fn random_capgraph(rng: &mut ChaCha8Rng, n: usize, integer: bool) -> Result<CapGraph> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(0.45) {
                let c = if integer { int(rng.gen_range(1..=3)) } else { frac(rng.gen_range(1..=6), 2) };
                edges.push((u, v, c));
            }
        }
    }
    let k = if integer { int(rng.gen_range(1..=4)) } else { frac(rng.gen_range(2..=8), 2) };
    CapGraph::new(n, edges, k)
}

/// Integer `H` with `λ < k ≤ λ + 4`, the setting of the crossing bound.
pub fn random_connected_capgraph(rng: &mut ChaCha8Rng, n: usize) -> Result<CapGraph> {
    let h = random_capgraph(rng, n, true)?;
    let lambda = smallcuts::edge_connectivity(&h)?;
    let k = lambda + int(rng.gen_range(1..=4));
    CapGraph::new(n, h.edges().to_vec(), k)
}

fn small_cuts_family(h: &CapGraph) -> Result<ExplicitFamily> {
    smallcuts::materialize(h, &EdgeSet::empty(), &Augment::Cover)
}

/// One random instance of the requested kind on `n` nodes.
///
/// Gated kinds redraw until the checker accepts, up to a fixed number of attempts.
pub fn random_instance(rng: &mut ChaCha8Rng, kind: RandomKind, n: usize) -> Result<RandomInstance> {
    if !(2..=8).contains(&n) {
        return Err(Error::InvalidInput(format!("random instances need 2 <= n <= 8, got {n}")));
    }
    for _ in 0..ATTEMPTS {
        let density = rng.gen_range(0.4..0.9);
        let (source, f, class) = match kind {
            RandomKind::Proper => {
                let f = random_proper(rng, n)?;
                (Source::Explicit, f, FamilyClass::Gamma)
            }
            RandomKind::Sparse => {
                let integer = rng.gen_bool(0.5);
                let h = random_capgraph(rng, n, integer)?;
                let f = small_cuts_family(&h)?;
                (Source::Cuts(h), f, FamilyClass::Sparse)
            }
            RandomKind::Beta => {
                let h = random_connected_capgraph(rng, n)?;
                let f = small_cuts_family(&h)?;
                (Source::Cuts(h), f, FamilyClass::Beta(0))
            }
            RandomKind::Gamma => {
                let f = mixture(rng, n)?;
                (Source::Explicit, f, FamilyClass::Gamma)
            }
        };
        if f.is_empty() {
            continue;
        }
        let g = match random_graph(rng, &f, density) {
            Ok(g) => g,
            Err(e) if e.is_guard() => continue,
            Err(e) => return Err(e),
        };
        let universe = g.all_edges();
        let class = match class {
            FamilyClass::Gamma if !is_gamma_pliable(&f, &universe)? => continue,
            FamilyClass::Sparse if !is_sparse(&f, &universe)? => continue,
            FamilyClass::Beta(_) => FamilyClass::Beta(crossing_number(&f, &universe)?.beta.max(1)),
            c => c,
        };
        let instance = match source {
            Source::Explicit => Instance::explicit(g, f.clone()),
            Source::Cuts(h) => Instance::small_cuts(g, h),
        };
        return Ok(RandomInstance { instance, family: f, class });
    }
    Err(Error::Guard(format!("no {kind:?} instance accepted after {ATTEMPTS} draws")))
}

enum Source {
    Explicit,
    Cuts(CapGraph),
}

/// Small cuts, proper families, cut families restricted to a demand pair, or a
/// residual of one of these by a few random edges.
fn mixture(rng: &mut ChaCha8Rng, n: usize) -> Result<ExplicitFamily> {
    let base = match rng.gen_range(0..3) {
        0 => {
            let integer = rng.gen_bool(0.5);
            small_cuts_family(&random_capgraph(rng, n, integer)?)?
        }
        1 => random_proper(rng, n)?,
        _ => {
            let f = small_cuts_family(&random_capgraph(rng, n, true)?)?;
            let u = rng.gen_range(0..n);
            let v = (u + rng.gen_range(1..n)) % n;
            let kept: Vec<NodeSet> = f.members().iter().filter(|s| s.separates(u, v)).cloned().collect();
            ExplicitFamily::from_sets_dedup(n, kept)?
        }
    };
    if rng.gen_bool(0.3) {
        let j: Vec<(usize, usize)> = (0..rng.gen_range(1..=2))
            .map(|_| {
                let u = rng.gen_range(0..n);
                (u, (u + rng.gen_range(1..n)) % n)
            })
            .collect();
        return Ok(base.residual(&EdgeSet::new(n, j)?));
    }
    Ok(base)
}
