//! Brute-force classifiers for the family properties.
//!
//! Property (γ), sparseness and the crossing number quantify over every edge
//! set `I` drawn from an edge universe. Each violation is witnessed by a few
//! members that must stay uncovered while some other members must be covered.
//! Covering more never hurts the second requirement, so it suffices to test the
//! largest `I` that avoids covering the witnesses: all universe edges that
//! separate none of them. This makes the exhaustive checks exact and
//! polynomial in `|F|`.

use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::family::{minimal_members, ExplicitFamily};
use super::nodeset::{EdgeSet, NodeSet};
use crate::error::{Error, Result};

/// Largest family the exhaustive property scans accept.
pub const EXHAUSTIVE_MAX_MEMBERS: usize = 512;
/// Universe limit for the packed (64-bit mask) scans.
pub const EXHAUSTIVE_MAX_NODES: usize = 64;
/// Pairwise scans (`isPliable`, `isUncrossable`).
pub const PAIRWISE_MAX_MEMBERS: usize = 4096;
/// Subset scans of each member (`isProper`).
pub const PROPER_MAX_NODES: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Property {
    Pliable,
    Gamma,
    Sparse,
    Crossing,
    Uncrossable,
    Proper,
}

impl Property {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "pliable" => Property::Pliable,
            "gamma" => Property::Gamma,
            "sparse" => Property::Sparse,
            "crossing" => Property::Crossing,
            "uncrossable" => Property::Uncrossable,
            "proper" => Property::Proper,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Counterexample {
    /// Two members violating a pairwise closure rule.
    Pair { a: NodeSet, b: NodeSet },
    /// Disjoint `a`, `b` whose union is a member while neither is.
    Split { union: NodeSet, a: NodeSet, b: NodeSet },
    Complement { set: NodeSet },
    Gamma {
        i: Vec<(usize, usize)>,
        s1: NodeSet,
        s2: NodeSet,
        core: NodeSet,
        d: NodeSet,
    },
    Sparse {
        i: Vec<(usize, usize)>,
        set: NodeSet,
        cores: [NodeSet; 2],
    },
}

/// Outcome of one property check.
///
/// `holds` is `Some(true)` only for exhaustive passes; a sampled run without a
/// counterexample reports `None`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub property: Property,
    pub holds: Option<bool>,
    pub counterexample: Option<Counterexample>,
    pub mode: Mode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

impl CheckResult {
    fn exhaustive(property: Property, cex: Option<Counterexample>) -> Self {
        CheckResult {
            property,
            holds: Some(cex.is_none()),
            counterexample: cex,
            mode: Mode::Exhaustive,
            samples: None,
        }
    }

    pub fn holds(&self) -> bool {
        self.holds == Some(true)
    }

    pub fn failed(&self) -> bool {
        self.holds == Some(false)
    }
}

/// A dense bitset over edge indices.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn zeros(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64).max(1)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn or(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a | b).collect())
    }
    fn or_assign(&mut self, o: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&o.0) {
            *a |= b;
        }
    }
    /// Any bit of `self` outside `forbidden`.
    fn escapes(&self, forbidden: &Bits) -> bool {
        self.0.iter().zip(&forbidden.0).any(|(a, f)| a & !f != 0)
    }
}

/// Members packed as 64-bit masks with their separating-edge sets.
struct Packed {
    n: usize,
    masks: Vec<u64>,
    index: HashMap<u64, usize>,
    edges: Vec<(usize, usize)>,
    sep: Vec<Bits>,
    sub: Vec<Vec<usize>>,
}

impl Packed {
    fn new(f: &ExplicitFamily, universe: &EdgeSet, what: &str) -> Result<Self> {
        let n = f.universe();
        if n > EXHAUSTIVE_MAX_NODES || f.len() > EXHAUSTIVE_MAX_MEMBERS {
            return Err(Error::Guard(format!("instance too large for exhaustive {what} check")));
        }
        let masks: Vec<u64> = f.members().iter().map(|s| s.mask64().unwrap_or(0)).collect();
        let index = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let mut edges: Vec<(usize, usize)> =
            universe.edges().iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
        edges.sort_unstable();
        edges.dedup();
        let sep = masks
            .iter()
            .map(|&m| {
                let mut b = Bits::zeros(edges.len());
                for (k, &(u, v)) in edges.iter().enumerate() {
                    if (m >> u & 1) != (m >> v & 1) {
                        b.set(k);
                    }
                }
                b
            })
            .collect();
        let sub = masks
            .iter()
            .map(|&m| {
                (0..masks.len()).filter(|&t| masks[t] != m && masks[t] & !m == 0).collect()
            })
            .collect();
        Ok(Packed { n, masks, index, edges, sep, sub })
    }

    fn full(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    fn crosses(&self, a: u64, b: u64) -> bool {
        a & b != 0 && a & !b != 0 && b & !a != 0 && !(a | b) & self.full() != 0
    }

    fn set(&self, m: u64) -> NodeSet {
        NodeSet::from_mask(self.n, m)
    }

    /// Every proper sub-member of `c` is covered by some edge outside `forbidden`.
    fn minimal_under(&self, c: usize, forbidden: &Bits) -> bool {
        self.sub[c].iter().all(|&t| self.sep[t].escapes(forbidden))
    }

    fn allowed_edges(&self, forbidden: &Bits) -> Vec<(usize, usize)> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(k, _)| forbidden.0[k / 64] >> (k % 64) & 1 == 0)
            .map(|(_, &e)| e)
            .collect()
    }
}

fn pairwise_guard(f: &ExplicitFamily, what: &str) -> Result<()> {
    if f.len() > PAIRWISE_MAX_MEMBERS {
        return Err(Error::Guard(format!("instance too large for pairwise {what} check")));
    }
    Ok(())
}

fn member_or_absent(present: &HashSet<&NodeSet>, s: &NodeSet) -> bool {
    !s.is_empty() && !s.is_full() && present.contains(s)
}

/// Pliability witness: a pair of members yielding fewer than two of
/// `A∩B, A∪B, A∖B, B∖A` as members.
pub fn pliability_counterexample(f: &ExplicitFamily) -> Result<Option<(NodeSet, NodeSet)>> {
    pairwise_guard(f, "pliability")?;
    let present: HashSet<&NodeSet> = f.members().iter().collect();
    let m = f.members();
    for (i, a) in m.iter().enumerate() {
        for b in &m[i + 1..] {
            let derived = [a.intersection(b), a.union(b), a.difference(b), b.difference(a)];
            let hits = derived.iter().filter(|s| member_or_absent(&present, s)).count();
            if hits < 2 {
                return Ok(Some((a.clone(), b.clone())));
            }
        }
    }
    Ok(None)
}

pub fn is_pliable(f: &ExplicitFamily) -> Result<bool> {
    Ok(pliability_counterexample(f)?.is_none())
}

pub fn check_pliable(f: &ExplicitFamily) -> Result<CheckResult> {
    let cex = pliability_counterexample(f)?.map(|(a, b)| Counterexample::Pair { a, b });
    Ok(CheckResult::exhaustive(Property::Pliable, cex))
}

pub fn check_uncrossable(f: &ExplicitFamily) -> Result<CheckResult> {
    pairwise_guard(f, "uncrossability")?;
    let present: HashSet<&NodeSet> = f.members().iter().collect();
    let m = f.members();
    for (i, a) in m.iter().enumerate() {
        for b in &m[i + 1..] {
            let meet_join = member_or_absent(&present, &a.intersection(b))
                && member_or_absent(&present, &a.union(b));
            let diffs = member_or_absent(&present, &a.difference(b))
                && member_or_absent(&present, &b.difference(a));
            if !meet_join && !diffs {
                let cex = Counterexample::Pair { a: a.clone(), b: b.clone() };
                return Ok(CheckResult::exhaustive(Property::Uncrossable, Some(cex)));
            }
        }
    }
    Ok(CheckResult::exhaustive(Property::Uncrossable, None))
}

/// Symmetric and with the disjointness property.
pub fn check_proper(f: &ExplicitFamily) -> Result<CheckResult> {
    if f.universe() > PROPER_MAX_NODES {
        return Err(Error::Guard("instance too large for exhaustive properness check".into()));
    }
    let present: HashSet<&NodeSet> = f.members().iter().collect();
    for s in f.members() {
        let c = s.complement();
        if !present.contains(&c) {
            return Ok(CheckResult::exhaustive(
                Property::Proper,
                Some(Counterexample::Complement { set: s.clone() }),
            ));
        }
        let elems = s.to_vec();
        let k = elems.len();
        for bits in 1..(1u64 << k) - 1 {
            let a = NodeSet::from_nodes(
                f.universe(),
                (0..k).filter(|i| bits >> i & 1 == 1).map(|i| elems[i]),
            )?;
            let b = s.difference(&a);
            if !present.contains(&a) && !present.contains(&b) {
                return Ok(CheckResult::exhaustive(
                    Property::Proper,
                    Some(Counterexample::Split { union: s.clone(), a, b }),
                ));
            }
        }
    }
    Ok(CheckResult::exhaustive(Property::Proper, None))
}

/// Property (γ) alone, quantified over subsets of `universe`.
pub fn gamma_counterexample(f: &ExplicitFamily, universe: &EdgeSet) -> Result<Option<Counterexample>> {
    let p = Packed::new(f, universe, "Property (γ)")?;
    let m = p.masks.len();
    for c in 0..m {
        let cm = p.masks[c];
        let crossing: Vec<usize> = (0..m).filter(|&s| p.crosses(cm, p.masks[s])).collect();
        for &s1 in &crossing {
            for &s2 in &crossing {
                let (a, b) = (p.masks[s1], p.masks[s2]);
                if a == b || a & !b != 0 {
                    continue;
                }
                let d = b & !(a | cm);
                if d == 0 {
                    continue;
                }
                let forbidden = p.sep[s1].or(&p.sep[s2]).or(&p.sep[c]);
                if !p.minimal_under(c, &forbidden) {
                    continue;
                }
                let d_survives = match p.index.get(&d) {
                    Some(&di) => !p.sep[di].escapes(&forbidden),
                    None => false,
                };
                if !d_survives {
                    return Ok(Some(Counterexample::Gamma {
                        i: p.allowed_edges(&forbidden),
                        s1: p.set(a),
                        s2: p.set(b),
                        core: p.set(cm),
                        d: p.set(d),
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// γ-pliable: pliable and Property (γ).
pub fn check_gamma_pliable(f: &ExplicitFamily, universe: &EdgeSet) -> Result<CheckResult> {
    if let Some((a, b)) = pliability_counterexample(f)? {
        return Ok(CheckResult::exhaustive(Property::Gamma, Some(Counterexample::Pair { a, b })));
    }
    Ok(CheckResult::exhaustive(Property::Gamma, gamma_counterexample(f, universe)?))
}

pub fn is_gamma_pliable(f: &ExplicitFamily, universe: &EdgeSet) -> Result<bool> {
    Ok(check_gamma_pliable(f, universe)?.holds())
}

pub fn check_sparse(f: &ExplicitFamily, universe: &EdgeSet) -> Result<CheckResult> {
    let p = Packed::new(f, universe, "sparseness")?;
    let m = p.masks.len();
    for s in 0..m {
        let sm = p.masks[s];
        let crossing: Vec<usize> = (0..m).filter(|&c| p.crosses(sm, p.masks[c])).collect();
        for (x, &c1) in crossing.iter().enumerate() {
            let f1 = p.sep[s].or(&p.sep[c1]);
            for &c2 in &crossing[x + 1..] {
                let forbidden = f1.or(&p.sep[c2]);
                if p.minimal_under(c1, &forbidden) && p.minimal_under(c2, &forbidden) {
                    let cex = Counterexample::Sparse {
                        i: p.allowed_edges(&forbidden),
                        set: p.set(sm),
                        cores: [p.set(p.masks[c1]), p.set(p.masks[c2])],
                    };
                    return Ok(CheckResult::exhaustive(Property::Sparse, Some(cex)));
                }
            }
        }
    }
    Ok(CheckResult::exhaustive(Property::Sparse, None))
}

pub fn is_sparse(f: &ExplicitFamily, universe: &EdgeSet) -> Result<bool> {
    Ok(check_sparse(f, universe)?.holds())
}

/// Witness for the crossing number: a residual core crossed by `sets`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossingWitness {
    pub i: Vec<(usize, usize)>,
    pub core: NodeSet,
    pub sets: Vec<NodeSet>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossingNumber {
    /// Least `β ≥ 1` for which the family is β-crossing.
    pub beta: usize,
    /// Largest packing found (may be 0 or 1 when `beta` is clamped).
    pub packing: usize,
    pub witness: Option<CrossingWitness>,
}

pub fn crossing_number(f: &ExplicitFamily, universe: &EdgeSet) -> Result<CrossingNumber> {
    let p = Packed::new(f, universe, "crossing-number")?;
    let m = p.masks.len();
    let mut best = 0usize;
    let mut witness = None;
    for c in 0..m {
        let cm = p.masks[c];
        if !p.minimal_under(c, &p.sep[c]) {
            continue;
        }
        let crossing: Vec<usize> = (0..m).filter(|&s| p.crosses(cm, p.masks[s])).collect();
        let cap = (cm.count_ones() as usize).min(p.n - cm.count_ones() as usize);
        if crossing.is_empty() || cap <= best {
            continue;
        }
        let mut search = Packing { p: &p, core: c, cands: &crossing, cap, best, chosen: vec![], best_set: None };
        search.run(0, 0, p.sep[c].clone());
        if let Some(sets) = search.best_set {
            best = sets.len();
            let mut forbidden = p.sep[c].clone();
            for &s in &sets {
                forbidden.or_assign(&p.sep[s]);
            }
            witness = Some(CrossingWitness {
                i: p.allowed_edges(&forbidden),
                core: p.set(cm),
                sets: sets.iter().map(|&s| p.set(p.masks[s])).collect(),
            });
        }
    }
    Ok(CrossingNumber { beta: best.max(1), packing: best, witness })
}

struct Packing<'a> {
    p: &'a Packed,
    core: usize,
    cands: &'a [usize],
    cap: usize,
    best: usize,
    chosen: Vec<usize>,
    best_set: Option<Vec<usize>>,
}

impl Packing<'_> {
    fn run(&mut self, from: usize, used: u64, forbidden: Bits) {
        if self.chosen.len() > self.best {
            self.best = self.chosen.len();
            self.best_set = Some(self.chosen.clone());
        }
        if self.best >= self.cap {
            return;
        }
        for k in from..self.cands.len() {
            if self.chosen.len() + (self.cands.len() - k) <= self.best {
                return;
            }
            let s = self.cands[k];
            let sm = self.p.masks[s];
            if sm & used != 0 {
                continue;
            }
            let next = forbidden.or(&self.p.sep[s]);
            if !self.p.minimal_under(self.core, &next) {
                continue;
            }
            self.chosen.push(s);
            self.run(k + 1, used | sm, next);
            self.chosen.pop();
            if self.best >= self.cap {
                return;
            }
        }
    }
}

/// Residual-family sampling for families beyond the exhaustive guards.
///
/// Never reports that a property holds; only finds counterexamples.
pub fn sample_check(
    f: &ExplicitFamily,
    universe: &EdgeSet,
    property: Property,
    samples: usize,
    seed: u64,
) -> Result<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cex = None;
    for _ in 0..samples {
        let i: EdgeSet = universe.edges().iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        let res = f.residual(&i);
        let cores = minimal_members(res.members());
        cex = match property {
            Property::Gamma => sampled_gamma(&res, &cores, &i),
            Property::Sparse => sampled_sparse(&res, &cores, &i),
            _ => return Err(Error::InvalidInput(format!("{property:?} has no sampled mode"))),
        };
        if cex.is_some() {
            break;
        }
    }
    Ok(CheckResult {
        property,
        holds: cex.as_ref().map(|_| false),
        counterexample: cex,
        mode: Mode::Sampled,
        samples: Some(samples),
    })
}

fn sampled_gamma(res: &ExplicitFamily, cores: &[NodeSet], i: &EdgeSet) -> Option<Counterexample> {
    for c in cores {
        let crossing: Vec<&NodeSet> = res.members().iter().filter(|s| c.crosses_unchecked(s)).collect();
        for s1 in &crossing {
            for s2 in &crossing {
                if !s1.is_proper_subset(s2) {
                    continue;
                }
                let d = s2.difference(&s1.union(c));
                if !d.is_empty() && !res.contains(&d) {
                    return Some(Counterexample::Gamma {
                        i: i.edges().to_vec(),
                        s1: (*s1).clone(),
                        s2: (*s2).clone(),
                        core: c.clone(),
                        d,
                    });
                }
            }
        }
    }
    None
}

fn sampled_sparse(res: &ExplicitFamily, cores: &[NodeSet], i: &EdgeSet) -> Option<Counterexample> {
    for s in res.members() {
        let hit: Vec<&NodeSet> = cores.iter().filter(|c| s.crosses_unchecked(c)).collect();
        if hit.len() >= 2 {
            return Some(Counterexample::Sparse {
                i: i.edges().to_vec(),
                set: s.clone(),
                cores: [hit[0].clone(), hit[1].clone()],
            });
        }
    }
    None
}
