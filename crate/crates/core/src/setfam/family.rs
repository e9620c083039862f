use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::nodeset::{EdgeSet, NodeSet};
use crate::error::{Error, Result};

/// An explicitly listed set family on `{0, .., n-1}`.
///
/// Members are nonempty, proper, distinct, and kept in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitFamily {
    n: usize,
    members: Vec<NodeSet>,
}

impl ExplicitFamily {
    /// Strict constructor: rejects empty, full and duplicate members.
    pub fn new(n: usize, members: Vec<NodeSet>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(members.len());
        for s in &members {
            check_member(n, s)?;
            if !seen.insert(s.clone()) {
                return Err(Error::InvalidInput(format!("duplicate member {s}")));
            }
        }
        let mut members = members;
        members.sort();
        Ok(ExplicitFamily { n, members })
    }

    /// Like [`ExplicitFamily::new`] but silently merges duplicates.
    pub fn from_sets_dedup(n: usize, members: impl IntoIterator<Item = NodeSet>) -> Result<Self> {
        let mut members: Vec<NodeSet> = members.into_iter().collect();
        for s in &members {
            check_member(n, s)?;
        }
        members.sort();
        members.dedup();
        Ok(ExplicitFamily { n, members })
    }

    pub fn from_lists(n: usize, lists: &[Vec<usize>]) -> Result<Self> {
        let members = lists
            .iter()
            .map(|l| NodeSet::from_nodes(n, l.iter().copied()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, members)
    }

    pub fn empty(n: usize) -> Self {
        ExplicitFamily { n, members: Vec::new() }
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[NodeSet] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, s: &NodeSet) -> bool {
        self.members.binary_search(s).is_ok()
    }

    /// `F^J`: the members `j` leaves uncovered.
    pub fn residual(&self, j: &EdgeSet) -> ExplicitFamily {
        ExplicitFamily {
            n: self.n,
            members: self.members.iter().filter(|s| !j.covers(s)).cloned().collect(),
        }
    }

    pub fn to_json(&self) -> FamilyJson {
        FamilyJson { n: self.n, sets: self.members.iter().map(NodeSet::to_vec).collect() }
    }

    pub fn from_json(j: &FamilyJson) -> Result<Self> {
        for s in &j.sets {
            if s.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidInput(format!("set {s:?} is not strictly increasing")));
            }
        }
        Self::from_lists(j.n, &j.sets)
    }
}

fn check_member(n: usize, s: &NodeSet) -> Result<()> {
    if s.universe() != n {
        return Err(Error::UniverseMismatch(n, s.universe()));
    }
    if s.is_empty() || s.is_full() {
        return Err(Error::InvalidInput(format!("member {s} is empty or the whole universe")));
    }
    Ok(())
}

/// Wire form `{"n": int, "sets": [[int, ...], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FamilyJson {
    pub n: usize,
    pub sets: Vec<Vec<usize>>,
}

/// The inclusion-minimal members of `sets`, in input order.
pub fn minimal_members(sets: &[NodeSet]) -> Vec<NodeSet> {
    sets.iter()
        .filter(|s| !sets.iter().any(|t| t.is_proper_subset(s)))
        .cloned()
        .collect()
}

/// Cores of the residual family `F^J`.
pub fn residual_cores(f: &ExplicitFamily, j: &EdgeSet) -> Vec<NodeSet> {
    let uncovered: Vec<NodeSet> = f.members.iter().filter(|s| !j.covers(s)).cloned().collect();
    minimal_members(&uncovered)
}

/// Answers "what are the cores of `F^J`" for an implicitly or explicitly given family.
pub trait FamilyOracle {
    fn universe_size(&self) -> usize;

    /// Cores of the residual family, pairwise disjoint, in canonical order.
    fn cores(&self, j: &EdgeSet) -> Result<Vec<NodeSet>>;

    fn is_covered(&self, j: &EdgeSet) -> Result<bool> {
        Ok(self.cores(j)?.is_empty())
    }

    /// Canonical description used for instance digests.
    fn describe(&self) -> serde_json::Value {
        serde_json::Value::Null
    }
}

pub fn verify_disjoint(cores: &[NodeSet]) -> Result<()> {
    for (i, a) in cores.iter().enumerate() {
        for b in &cores[i + 1..] {
            if a.intersects(b) {
                return Err(Error::OverlappingCores(a.clone(), b.clone()));
            }
        }
    }
    Ok(())
}

impl FamilyOracle for ExplicitFamily {
    fn universe_size(&self) -> usize {
        self.n
    }

    fn cores(&self, j: &EdgeSet) -> Result<Vec<NodeSet>> {
        let cores = residual_cores(self, j);
        if cfg!(debug_assertions) {
            verify_disjoint(&cores)?;
        }
        Ok(cores)
    }

    fn describe(&self) -> serde_json::Value {
        serde_json::json!({ "explicit": self.to_json() })
    }
}

/// Wraps an oracle so that core disjointness is checked on every call, in any build.
pub struct Strict<O>(pub O);

impl<O: FamilyOracle> FamilyOracle for Strict<O> {
    fn universe_size(&self) -> usize {
        self.0.universe_size()
    }

    fn cores(&self, j: &EdgeSet) -> Result<Vec<NodeSet>> {
        let cores = self.0.cores(j)?;
        verify_disjoint(&cores)?;
        Ok(cores)
    }

    fn describe(&self) -> serde_json::Value {
        self.0.describe()
    }
}
