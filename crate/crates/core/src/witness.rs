//! Witness sets for minimal covers and the search for a laminar choice of them.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::setfam::{EdgeSet, ExplicitFamily, NodeSet};

/// Search nodes `laminar_witness` may expand before giving up.
pub const SEARCH_NODE_BUDGET: usize = 5_000_000;

/// One witness set per cover edge, indexed like the cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessAssignment {
    pub sets: Vec<NodeSet>,
    pub laminar: bool,
}

#[derive(Serialize)]
struct EntryJson<'a> {
    id: usize,
    set: &'a NodeSet,
}

#[derive(Serialize)]
struct AssignmentJson<'a> {
    edges: Vec<EntryJson<'a>>,
    laminar: bool,
}

impl WitnessAssignment {
    /// `{"edges": [{"id", "set"}], "laminar"}`, with ids mapped through `ids`.
    pub fn to_json(&self, ids: &[usize]) -> serde_json::Value {
        let doc = AssignmentJson {
            edges: self.sets.iter().zip(ids).map(|(s, &id)| EntryJson { id, set: s }).collect(),
            laminar: self.laminar,
        };
        serde_json::to_value(doc).expect("assignment serializes")
    }

    /// Checks the definition: `δ_I(S_e) = {e}` for every edge, plus laminarity if claimed.
    pub fn validate(&self, i: &EdgeSet) -> Result<()> {
        if self.sets.len() != i.len() {
            return Err(Error::Precondition("assignment size differs from the cover".into()));
        }
        for (idx, s) in self.sets.iter().enumerate() {
            if covering_edges(i, s).collect::<Vec<_>>() != [idx] {
                return Err(Error::Precondition(format!("{s} is not a witness for edge {idx}")));
            }
        }
        if self.laminar && !is_laminar(&self.sets) {
            return Err(Error::Precondition("assignment is not laminar".into()));
        }
        Ok(())
    }
}

pub fn is_laminar(sets: &[NodeSet]) -> bool {
    sets.iter().enumerate().all(|(i, a)| sets[i + 1..].iter().all(|b| a.laminar_with(b)))
}

fn covering_edges<'a>(i: &'a EdgeSet, s: &'a NodeSet) -> impl Iterator<Item = usize> + 'a {
    i.edges().iter().enumerate().filter(|(_, &(u, v))| s.separates(u, v)).map(|(k, _)| k)
}

/// For every edge of `i`, the members it alone covers, in canonical order.
pub fn witness_candidates(f: &ExplicitFamily, i: &EdgeSet) -> Result<Vec<Vec<NodeSet>>> {
    let mut cands = vec![Vec::new(); i.len()];
    for s in f.members() {
        let mut hit = covering_edges(i, s);
        match (hit.next(), hit.next()) {
            (None, _) => return Err(Error::Precondition(format!("edge set does not cover {s}"))),
            (Some(e), None) => cands[e].push(s.clone()),
            _ => {}
        }
    }
    if let Some(edge) = cands.iter().position(Vec::is_empty) {
        return Err(Error::CoverNotMinimal { edge });
    }
    Ok(cands)
}

/// Lexicographically least laminar witness family, by backtracking.
///
/// Edges are assigned in cover order and candidates tried in canonical order, so
/// the first complete assignment found is the least one. After each choice every
/// unassigned edge must keep a candidate compatible with all choices so far.
pub fn laminar_witness(f: &ExplicitFamily, i: &EdgeSet) -> Result<WitnessAssignment> {
    let cands = witness_candidates(f, i)?;
    let mut search = Search { cands: &cands, chosen: Vec::new(), nodes: 0 };
    match search.run()? {
        true => Ok(WitnessAssignment { sets: search.chosen, laminar: true }),
        false => Err(Error::NoLaminarWitness),
    }
}

struct Search<'a> {
    cands: &'a [Vec<NodeSet>],
    chosen: Vec<NodeSet>,
    nodes: usize,
}

impl Search<'_> {
    fn run(&mut self) -> Result<bool> {
        let k = self.chosen.len();
        if k == self.cands.len() {
            return Ok(true);
        }
        for s in &self.cands[k] {
            self.nodes += 1;
            if self.nodes > SEARCH_NODE_BUDGET {
                return Err(Error::Guard("laminar witness search exceeded its node budget".into()));
            }
            if !self.chosen.iter().all(|c| c.laminar_with(s)) {
                continue;
            }
            self.chosen.push(s.clone());
            let viable = self.cands[k + 1..]
                .iter()
                .all(|list| list.iter().any(|t| self.chosen.iter().all(|c| c.laminar_with(t))));
            if viable && self.run()? {
                return Ok(true);
            }
            self.chosen.pop();
        }
        Ok(false)
    }
}
