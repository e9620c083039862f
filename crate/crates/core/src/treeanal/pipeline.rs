//! Runs the tree analysis on a single cover or on every iteration of a solver run.

use serde::Serialize;

use super::{build_tree, verify_bounds, BoundsReport, ShortcutTree};
use crate::error::{Error, Result};
use crate::exact::FamilyClass;
use crate::setfam::{residual_cores, EdgeSet, ExplicitFamily, NodeSet};
use crate::wgmv::{CostedGraph, RunTrace};
use crate::witness::{laminar_witness, WitnessAssignment};

#[derive(Clone, Debug)]
pub struct CoverAnalysis {
    pub assignment: WitnessAssignment,
    pub tree: ShortcutTree,
    pub report: BoundsReport,
}

impl CoverAnalysis {
    pub fn to_json(&self, ids: &[usize]) -> serde_json::Value {
        serde_json::json!({
            "assignment": self.assignment.to_json(ids),
            "tree": self.tree.to_json(),
            "report": self.report,
        })
    }
}

/// Laminar witness, shortcut tree and bounds for a minimal cover.
///
/// `cores` defaults to the cores of `f` itself.
pub fn analyze_cover(
    f: &ExplicitFamily,
    cover: &EdgeSet,
    cores: Option<Vec<NodeSet>>,
    class: FamilyClass,
) -> Result<CoverAnalysis> {
    let cores = cores.unwrap_or_else(|| residual_cores(f, &EdgeSet::empty()));
    let assignment = laminar_witness(f, cover)?;
    let tree = build_tree(f.universe(), cover, &assignment, &cores)?;
    let report = verify_bounds(&tree, class);
    Ok(CoverAnalysis { assignment, tree, report })
}

#[derive(Clone, Debug, Serialize)]
pub struct IterationAnalysis {
    pub index: usize,
    /// Final-solution edges added at or after this iteration that cover one of its cores.
    pub cover: Vec<usize>,
    pub witness: Vec<NodeSet>,
    pub report: BoundsReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunAnalysis {
    pub iterations: Vec<IterationAnalysis>,
    pub ok: bool,
}

/// Reduces every iteration to a minimal cover of a residual family and analyzes it.
///
/// For iteration `t`, let `J0` be the edges added before `t`, `I'` the final
/// edges added from `t` on, and `I ⊆ I'` those covering a core of iteration `t`.
/// The residual of `f` by `J0 ∪ (I' ∖ I)` must have exactly the iteration's
/// cores, and `I` must be a minimal cover of it.
pub fn analyze_run(
    f: &ExplicitFamily,
    g: &CostedGraph,
    trace: &RunTrace,
    class: FamilyClass,
) -> Result<RunAnalysis> {
    let added = trace.added();
    let in_solution = |e: &usize| trace.solution.contains(e);
    let mut iterations = Vec::with_capacity(added.len());
    for (t, it) in trace.iterations.iter().enumerate() {
        let later: Vec<usize> = added[t..].iter().copied().filter(in_solution).collect();
        let covers_core = |&e: &usize| {
            let (u, v) = (g.edges()[e].u, g.edges()[e].v);
            it.cores.iter().any(|c| c.separates(u, v))
        };
        let (i, rest): (Vec<usize>, Vec<usize>) = later.iter().partition(|e| covers_core(e));
        let mut removed = added[..t].to_vec();
        removed.extend(&rest);
        let residual = f.residual(&g.edge_set(&removed));
        let mut expect = it.cores.clone();
        expect.sort();
        if residual_cores(&residual, &EdgeSet::empty()) != expect {
            return Err(Error::TreeInvariant {
                name: "iteration_cores",
                detail: format!("iteration {t}: residual cores differ from the trace"),
            });
        }
        let analysis = analyze_cover(&residual, &g.edge_set(&i), Some(it.cores.clone()), class)?;
        iterations.push(IterationAnalysis {
            index: t,
            cover: i,
            witness: analysis.assignment.sets,
            report: analysis.report,
        });
    }
    let ok = iterations.iter().all(|it| it.report.ok);
    Ok(RunAnalysis { iterations, ok })
}
