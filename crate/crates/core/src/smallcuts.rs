//! The family of cuts of capacity below `k` in a capacitated graph `H`.
//!
//! All cut enumeration runs over integer capacities obtained by clearing
//! denominators, visiting subsets in Gray-code order so each step updates the
//! cut value by the edges at one node.

use num::bigint::BigInt;
use num::integer::Integer;
use num::traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::setfam::{verify_disjoint, EdgeSet, ExplicitFamily, FamilyOracle, NodeSet};

/// Largest universe the subset enumeration accepts.
pub const ENUM_MAX_NODES: usize = 22;
/// Largest universe for which the family is listed explicitly.
pub const MATERIALIZE_MAX_NODES: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CapGraph {
    n: usize,
    edges: Vec<(usize, usize, Rational)>,
    k: Rational,
}

impl CapGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize, Rational)>, k: Rational) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput("capacitated graph needs at least 2 nodes".into()));
        }
        for (u, v, c) in &edges {
            if *u >= n || *v >= n {
                return Err(Error::NodeOutOfRange { node: (*u).max(*v), n });
            }
            if u == v {
                return Err(Error::InvalidInput(format!("self-loop at node {u}")));
            }
            if c.is_negative() {
                return Err(Error::InvalidInput(format!("negative capacity on ({u},{v})")));
            }
        }
        if !k.is_positive() {
            return Err(Error::InvalidInput("threshold k must be positive".into()));
        }
        Ok(CapGraph { n, edges, k })
    }

    /// Unit capacities on every listed edge.
    pub fn unit(n: usize, edges: &[(usize, usize)], k: i64) -> Result<Self> {
        Self::new(n, edges.iter().map(|&(u, v)| (u, v, rational::one())).collect(), rational::int(k))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, Rational)] {
        &self.edges
    }

    pub fn k(&self) -> &Rational {
        &self.k
    }

    pub fn to_json(&self) -> CapGraphJson {
        let wire = |r: &Rational| (r.numer().to_i64().unwrap_or(i64::MAX), r.denom().to_i64().unwrap_or(1));
        CapGraphJson {
            n: self.n,
            edges: self
                .edges
                .iter()
                .map(|(u, v, c)| {
                    let (a, b) = wire(c);
                    (*u, *v, a, b)
                })
                .collect(),
            k: wire(&self.k),
        }
    }

    pub fn from_json(j: &CapGraphJson) -> Result<Self> {
        let rat = |a: i64, b: i64| {
            if b == 0 {
                Err(Error::InvalidInput("zero denominator".into()))
            } else {
                Ok(rational::frac(a, b))
            }
        };
        let edges = j
            .edges
            .iter()
            .map(|&(u, v, a, b)| Ok((u, v, rat(a, b)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(j.n, edges, rat(j.k.0, j.k.1)?)
    }
}

/// Wire form `{"n", "edges": [[u, v, num, den], ...], "k": [num, den]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CapGraphJson {
    pub n: usize,
    pub edges: Vec<(usize, usize, i64, i64)>,
    pub k: (i64, i64),
}

/// How the edges of `J` enter `H ∪ J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Augment {
    /// A set stays in the family only if no edge of `J` leaves it.
    Cover,
    /// Each edge of `J` adds this capacity to `H`.
    Capacity(Rational),
}

pub fn cut_value(h: &CapGraph, s: &NodeSet) -> Result<Rational> {
    if s.universe() != h.n {
        return Err(Error::UniverseMismatch(h.n, s.universe()));
    }
    if s.is_empty() || s.is_full() {
        return Err(Error::InvalidInput("cut side must be nonempty and proper".into()));
    }
    Ok(h.edges
        .iter()
        .filter(|(u, v, _)| s.separates(*u, *v))
        .fold(rational::zero(), |acc, (_, _, c)| acc + c))
}

/// Integer image of a capacitated graph plus a threshold.
struct Scaled {
    n: usize,
    adj: Vec<Vec<(usize, i128)>>,
    k: i128,
}

fn scale(n: usize, caps: &[(usize, usize, Rational)], k: &Rational) -> Result<Scaled> {
    let mut l = BigInt::one();
    for r in caps.iter().map(|e| &e.2).chain(std::iter::once(k)) {
        l = l.lcm(r.denom());
    }
    let to_int = |r: &Rational| -> Result<i128> {
        (r * Rational::from_integer(l.clone()))
            .to_integer()
            .to_i128()
            .ok_or_else(|| Error::Guard("capacities too large for exact cut enumeration".into()))
    };
    let mut adj = vec![Vec::new(); n];
    let mut total: i128 = 0;
    for (u, v, c) in caps {
        let c = to_int(c)?;
        total = total
            .checked_add(c)
            .ok_or_else(|| Error::Guard("capacities too large for exact cut enumeration".into()))?;
        adj[*u].push((*v, c));
        adj[*v].push((*u, c));
    }
    Ok(Scaled { n, adj, k: to_int(k)? })
}

fn enum_guard(n: usize) -> Result<()> {
    if n > ENUM_MAX_NODES {
        return Err(Error::Guard(format!(
            "instance too large for cut enumeration (n = {n} > {ENUM_MAX_NODES})"
        )));
    }
    Ok(())
}

impl Scaled {
    /// Calls `visit(mask, cut)` for every nonempty proper subset.
    fn for_each_cut(&self, mut visit: impl FnMut(usize, i128)) {
        let full = (1usize << self.n) - 1;
        let mut mask = 0usize;
        let mut cut: i128 = 0;
        for g in 1..(1usize << self.n) {
            let v = g.trailing_zeros() as usize;
            let entering = mask >> v & 1 == 0;
            for &(w, c) in &self.adj[v] {
                let w_in = mask >> w & 1 == 1;
                if entering != w_in {
                    cut += c;
                } else {
                    cut -= c;
                }
            }
            mask ^= 1 << v;
            if mask != full {
                visit(mask, cut);
            }
        }
    }
}

fn augmented(h: &CapGraph, j: &EdgeSet, aug: &Augment) -> Vec<(usize, usize, Rational)> {
    let mut caps = h.edges.clone();
    // Capacity k on a J edge is exactly "covered": every set it leaves has cut >= k.
    let extra = match aug {
        Augment::Cover => h.k.clone(),
        Augment::Capacity(c) => c.clone(),
    };
    caps.extend(j.edges().iter().map(|&(u, v)| (u, v, extra.clone())));
    caps
}

/// Indicator over masks of `cut(H ∪ J, S) < k`.
fn small_masks(h: &CapGraph, j: &EdgeSet, aug: &Augment) -> Result<Vec<bool>> {
    enum_guard(h.n)?;
    let s = scale(h.n, &augmented(h, j, aug), &h.k)?;
    let mut small = vec![false; 1 << h.n];
    s.for_each_cut(|m, c| small[m] = c < s.k);
    Ok(small)
}

pub fn small_cut_cores(h: &CapGraph, j: &EdgeSet, aug: &Augment) -> Result<Vec<NodeSet>> {
    let small = small_masks(h, j, aug)?;
    let n = h.n;
    // below[m]: some nonempty subset of m (m included) is small.
    let mut below = small.clone();
    for i in 0..n {
        for m in 0..below.len() {
            if m >> i & 1 == 1 && below[m ^ (1 << i)] {
                below[m] = true;
            }
        }
    }
    let mut cores: Vec<NodeSet> = (1..small.len())
        .filter(|&m| small[m] && (0..n).all(|i| m >> i & 1 == 0 || !below[m ^ (1 << i)]))
        .map(|m| NodeSet::from_mask(n, m as u64))
        .collect();
    cores.sort();
    verify_disjoint(&cores)?;
    Ok(cores)
}

/// The explicit residual small-cuts family.
pub fn materialize(h: &CapGraph, j: &EdgeSet, aug: &Augment) -> Result<ExplicitFamily> {
    if h.n > MATERIALIZE_MAX_NODES {
        return Err(Error::Guard(format!(
            "instance too large to materialize (n = {} > {MATERIALIZE_MAX_NODES})",
            h.n
        )));
    }
    let small = small_masks(h, j, aug)?;
    let sets = (1..small.len()).filter(|&m| small[m]).map(|m| NodeSet::from_mask(h.n, m as u64));
    ExplicitFamily::from_sets_dedup(h.n, sets)
}

/// `λ`: the minimum cut value of `H`.
pub fn edge_connectivity(h: &CapGraph) -> Result<Rational> {
    enum_guard(h.n)?;
    let mut l = BigInt::one();
    for (_, _, c) in &h.edges {
        l = l.lcm(c.denom());
    }
    let s = scale(h.n, &h.edges, &rational::one())?;
    let mut best = i128::MAX;
    s.for_each_cut(|_, c| best = best.min(c));
    Ok(Rational::new(BigInt::from(best), l))
}

/// `max(1, ⌊(k−1)/⌈(λ+1)/2⌉⌋)` for integer `k` and `λ`.
pub fn beta_bound(h: &CapGraph) -> Result<usize> {
    let lambda = edge_connectivity(h)?;
    if !rational::is_integer(&h.k) || !rational::is_integer(&lambda) {
        return Err(Error::InvalidInput("beta bound needs integer k and edge connectivity".into()));
    }
    let k = h.k.to_integer().to_i64().unwrap_or(i64::MAX);
    let lambda = lambda.to_integer().to_i64().unwrap_or(i64::MAX);
    let p = (lambda + 2) / 2;
    Ok(((k - 1) / p).max(1) as usize)
}

/// Small-cuts family oracle.
#[derive(Clone, Debug)]
pub struct SmallCuts {
    pub graph: CapGraph,
    pub augment: Augment,
}

impl SmallCuts {
    pub fn new(graph: CapGraph) -> Self {
        SmallCuts { graph, augment: Augment::Cover }
    }
}

impl FamilyOracle for SmallCuts {
    fn universe_size(&self) -> usize {
        self.graph.n
    }

    fn cores(&self, j: &EdgeSet) -> Result<Vec<NodeSet>> {
        small_cut_cores(&self.graph, j, &self.augment)
    }

    fn describe(&self) -> serde_json::Value {
        serde_json::json!({ "smallcuts": self.graph.to_json() })
    }
}
