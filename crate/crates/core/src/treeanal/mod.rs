//! Shortcut trees of laminar witness families and the weight bounds on them.
//!
//! The laminar family plus `V` forms a rooted tree. A set is black when it is
//! the smallest member containing some core. Maximal runs of white non-root
//! sets with a single child are contracted into one edge carrying their total
//! core-degree; everything else keeps its own cover edge.

mod bounds;
mod chains;
mod pipeline;

pub use bounds::{find_bad_pairs, verify_bounds, BadPair, BoundCheck, BoundsReport};
pub use chains::{classify_chain, ChainCase};
pub use pipeline::{analyze_cover, analyze_run, CoverAnalysis, IterationAnalysis, RunAnalysis};

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::setfam::{verify_disjoint, EdgeSet, NodeSet};
use crate::witness::WitnessAssignment;

/// The contracted path below one shortcut edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainRecord {
    /// `S_0, .., S_ℓ`; `S_0` is the lower tree node.
    pub sets: Vec<NodeSet>,
    /// Cover-edge index of each `S_i`.
    pub edges: Vec<usize>,
    /// `a_0, .., a_ℓ` with `a_i ∈ S_i`.
    pub a: Vec<usize>,
    /// `b_1, .., b_{ℓ+1}` with `b_{i+1} ∈ S_{i+1} ∖ S_i` (the last one lies in the upper node).
    pub b: Vec<usize>,
    pub a_in_u: Vec<bool>,
    pub b_in_u: Vec<bool>,
    pub length: usize,
    pub weight: usize,
    /// For each `b_{i+1}`, the index of its core if any; `a` likewise.
    #[serde(skip)]
    pub a_core: Vec<Option<usize>>,
    #[serde(skip)]
    pub b_core: Vec<Option<usize>>,
    pub case: ChainCase,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeNode {
    pub set: NodeSet,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub black: bool,
    /// Cores owned by this set.
    pub owned: Vec<usize>,
    pub depth: usize,
    /// The edge to the parent; `None` only at the root.
    pub edge: Option<ChainRecord>,
}

/// Nodes are kept in canonical set order, so the root `V` is last.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortcutTree {
    pub n: usize,
    pub nodes: Vec<TreeNode>,
    pub root: usize,
    pub cores: Vec<NodeSet>,
    pub cover: EdgeSet,
}

impl ShortcutTree {
    pub fn weight(&self, v: usize) -> usize {
        self.nodes[v].edge.as_ref().map_or(0, |e| e.weight)
    }

    pub fn total_weight(&self) -> usize {
        (0..self.nodes.len()).map(|v| self.weight(v)).sum()
    }

    pub fn edge_count(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn black_count(&self) -> usize {
        self.nodes.iter().filter(|x| x.black).count()
    }

    pub fn white_count(&self) -> usize {
        self.nodes.len() - self.black_count()
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&v| self.nodes[v].children.is_empty()).collect()
    }

    /// Non-root nodes, each standing for its parent edge.
    pub fn edge_ids(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(move |&v| v != self.root)
    }

    pub fn upper(&self, v: usize) -> usize {
        self.nodes[v].parent.expect("non-root node")
    }

    /// `Σ_C d_I(C)` computed straight from the cover.
    pub fn direct_degree_sum(&self) -> usize {
        self.cores.iter().map(|c| self.cover.degree(c)).sum()
    }

    pub fn is_ancestor(&self, anc: usize, mut v: usize) -> bool {
        loop {
            if v == anc {
                return true;
            }
            match self.nodes[v].parent {
                Some(p) => v = p,
                None => return false,
            }
        }
    }

    pub fn shape(&self) -> TreeShape {
        TreeShape {
            nodes: self
                .nodes
                .iter()
                .map(|x| ShapeNode {
                    set: x.set.to_vec(),
                    black: x.black,
                    parent: x.parent,
                    weight: x.edge.as_ref().map(|e| e.weight),
                    length: x.edge.as_ref().map(|e| e.length),
                })
                .collect(),
        }
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph shortcut {\n  node [shape=circle, style=filled];\n");
        for (v, x) in self.nodes.iter().enumerate() {
            let (fill, font) = if x.black { ("black", "white") } else { ("white", "black") };
            let _ = writeln!(s, "  n{v} [label=\"{}\", fillcolor={fill}, fontcolor={font}];", x.set);
        }
        for v in self.edge_ids() {
            let e = self.nodes[v].edge.as_ref().expect("edge");
            let _ = writeln!(s, "  n{} -> n{v} [label=\"{}\"];", self.upper(v), e.weight);
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        let nodes: Vec<_> = self
            .nodes
            .iter()
            .map(|x| {
                serde_json::json!({
                    "set": x.set,
                    "parent": x.parent,
                    "color": if x.black { "black" } else { "white" },
                    "owned": x.owned,
                    "edge": x.edge,
                })
            })
            .collect();
        serde_json::json!({ "root": self.root, "nodes": nodes })
    }
}

/// Parent pointers, colors and edge weights in canonical node order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeShape {
    pub nodes: Vec<ShapeNode>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShapeNode {
    pub set: Vec<usize>,
    pub black: bool,
    pub parent: Option<usize>,
    pub weight: Option<usize>,
    pub length: Option<usize>,
}

fn invariant(name: &'static str, detail: impl Into<String>) -> Error {
    Error::TreeInvariant { name, detail: detail.into() }
}

/// Builds the shortcut tree of a laminar witness assignment for `cover`.
pub fn build_tree(
    n: usize,
    cover: &EdgeSet,
    assignment: &WitnessAssignment,
    cores: &[NodeSet],
) -> Result<ShortcutTree> {
    let m = cover.len();
    let sets = &assignment.sets;
    if sets.len() != m {
        return Err(Error::Precondition("assignment size differs from the cover".into()));
    }
    if let Some(s) = sets.iter().chain(cores).find(|s| s.universe() != n) {
        return Err(Error::UniverseMismatch(n, s.universe()));
    }
    verify_disjoint(cores)?;
    assignment.validate(cover)?;
    if !assignment.laminar || !crate::witness::is_laminar(sets) {
        return Err(Error::Precondition("witness family is not laminar".into()));
    }
    for (k, &(u, v)) in cover.edges().iter().enumerate() {
        if !cores.iter().any(|c| c.separates(u, v)) {
            return Err(Error::Precondition(format!("cover edge {k} ({u},{v}) covers no core")));
        }
    }

    // Original laminar tree over L ∪ {V}; index m is V.
    let mut all: Vec<NodeSet> = sets.clone();
    all.push(NodeSet::full(n));
    let smallest_superset = |s: &NodeSet, skip: usize| {
        (0..=m)
            .filter(|&t| t != skip && s.is_proper_subset(&all[t]))
            .min_by_key(|&t| all[t].len())
            .expect("V contains every member")
    };
    let parent: Vec<Option<usize>> =
        (0..=m).map(|k| (k < m).then(|| smallest_superset(&all[k], k))).collect();
    let mut owned = vec![Vec::new(); m + 1];
    for (ci, c) in cores.iter().enumerate() {
        let owner = (0..=m)
            .filter(|&t| c.is_subset(&all[t]))
            .min_by_key(|&t| all[t].len())
            .expect("V contains every core");
        owned[owner].push(ci);
    }
    let mut nchildren = vec![0usize; m + 1];
    for p in parent.iter().flatten() {
        nchildren[*p] += 1;
    }
    let in_chain: Vec<bool> = (0..=m).map(|k| k < m && owned[k].is_empty() && nchildren[k] == 1).collect();

    let core_of = |x: usize| cores.iter().position(|c| c.contains(x));
    let separated = |e: usize| {
        let (u, v) = cover.edges()[e];
        cores.iter().filter(|c| c.separates(u, v)).count()
    };

    // Shortcut nodes in canonical order.
    let mut keep: Vec<usize> = (0..=m).filter(|&k| !in_chain[k]).collect();
    keep.sort_by(|&x, &y| all[x].cmp(&all[y]));
    let mut pos = vec![usize::MAX; m + 1];
    for (i, &k) in keep.iter().enumerate() {
        pos[k] = i;
    }

    let mut nodes: Vec<TreeNode> = keep
        .iter()
        .map(|&k| TreeNode {
            set: all[k].clone(),
            parent: None,
            children: Vec::new(),
            black: !owned[k].is_empty(),
            owned: owned[k].clone(),
            depth: 0,
            edge: None,
        })
        .collect();

    for (i, &k) in keep.iter().enumerate() {
        if k == m {
            continue;
        }
        let mut chain = vec![k];
        let mut p = parent[k].expect("non-root");
        while in_chain[p] {
            chain.push(p);
            p = parent[p].expect("chain sets are not the root");
        }
        let mut rec = ChainRecord {
            sets: chain.iter().map(|&x| all[x].clone()).collect(),
            edges: chain.clone(),
            a: Vec::new(),
            b: Vec::new(),
            a_in_u: Vec::new(),
            b_in_u: Vec::new(),
            length: chain.len() - 1,
            weight: chain.iter().map(|&e| separated(e)).sum(),
            a_core: Vec::new(),
            b_core: Vec::new(),
            case: ChainCase::Light,
        };
        for &e in &chain {
            let (u, v) = cover.edges()[e];
            let (a, b) = if all[e].contains(u) { (u, v) } else { (v, u) };
            rec.a.push(a);
            rec.b.push(b);
            rec.a_core.push(core_of(a));
            rec.b_core.push(core_of(b));
        }
        rec.a_in_u = rec.a_core.iter().map(Option::is_some).collect();
        rec.b_in_u = rec.b_core.iter().map(Option::is_some).collect();
        rec.case = classify_chain(&rec);
        nodes[i].parent = Some(pos[p]);
        nodes[pos[p]].children.push(i);
        nodes[i].edge = Some(rec);
    }

    let root = pos[m];
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        let d = nodes[v].depth;
        for c in nodes[v].children.clone() {
            nodes[c].depth = d + 1;
            stack.push(c);
        }
    }
    let tree = ShortcutTree { n, nodes, root, cores: cores.to_vec(), cover: cover.clone() };
    if tree.total_weight() != tree.direct_degree_sum() {
        return Err(invariant(
            "weight_sum",
            format!("{} vs {}", tree.total_weight(), tree.direct_degree_sum()),
        ));
    }
    Ok(tree)
}
