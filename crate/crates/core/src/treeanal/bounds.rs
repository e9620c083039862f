use std::collections::BTreeSet;

use serde::Serialize;

use super::{ChainCase, ShortcutTree};
use crate::exact::FamilyClass;

const HEAVY: usize = 3;
/// Largest shortcut-edge weight.
const MAX_WEIGHT: usize = 5;

/// Heavy edges `lower ≺ upper` with only white nodes between them.
///
/// Edges are named by their lower tree node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BadPair {
    pub lower: usize,
    pub upper: usize,
    /// Nodes from the upper end of `lower` to the lower end of `upper`.
    pub path: Vec<usize>,
    pub weights: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub name: &'static str,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub class: FamilyClass,
    pub total_weight: usize,
    pub direct_weight: usize,
    pub cores: usize,
    pub black: usize,
    pub white: usize,
    pub leaves: usize,
    pub edges: usize,
    pub bad_pairs: Vec<BadPair>,
    /// Weights after moving each chosen upper edge's excess onto its lower edge.
    pub reassigned: Vec<usize>,
    /// `b_e` for each heavy edge that is not an upper edge (sparse classes).
    pub b_star: Vec<(usize, usize)>,
    pub checks: Vec<BoundCheck>,
    pub ok: bool,
}

impl BoundsReport {
    pub fn failures(&self) -> Vec<&BoundCheck> {
        self.checks.iter().filter(|c| !c.holds).collect()
    }

    pub fn check(&self, name: &str) -> Option<&BoundCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn weights(t: &ShortcutTree) -> Vec<usize> {
    (0..t.nodes.len()).map(|v| t.weight(v)).collect()
}

fn bad_pairs_with(t: &ShortcutTree, w: &[usize]) -> Vec<BadPair> {
    let mut out = Vec::new();
    for e in t.edge_ids().filter(|&e| w[e] >= HEAVY) {
        let mut path = Vec::new();
        let mut x = t.upper(e);
        while !t.nodes[x].black && x != t.root {
            path.push(x);
            if w[x] >= HEAVY {
                out.push(BadPair { lower: e, upper: x, path: path.clone(), weights: (w[e], w[x]) });
            }
            x = t.upper(x);
        }
    }
    out.sort_by_key(|p| (p.upper, p.lower));
    out
}

pub fn find_bad_pairs(t: &ShortcutTree) -> Vec<BadPair> {
    bad_pairs_with(t, &weights(t))
}

struct Checks(Vec<BoundCheck>);

impl Checks {
    fn add(&mut self, name: &'static str, failures: Vec<String>) {
        let holds = failures.is_empty();
        let detail = (!holds).then(|| failures.join("; "));
        self.0.push(BoundCheck { name, holds, detail });
    }

    fn ok(&mut self, name: &'static str, holds: bool, detail: impl FnOnce() -> String) {
        self.0.push(BoundCheck { name, holds, detail: (!holds).then(detail) });
    }
}

fn closest_black(t: &ShortcutTree, from: usize, may_descend: impl Fn(usize) -> bool) -> Vec<usize> {
    let mut found = Vec::new();
    let mut stack = vec![from];
    while let Some(x) = stack.pop() {
        if t.nodes[x].black {
            found.push(x);
        }
        stack.extend(t.nodes[x].children.iter().copied().filter(|&c| may_descend(c)));
    }
    found.sort_by_key(|&x| (t.nodes[x].depth, x));
    found
}

/// Runs every weight-bound check that applies to `class`.
pub fn verify_bounds(t: &ShortcutTree, class: FamilyClass) -> BoundsReport {
    let sparse = !matches!(class, FamilyClass::Gamma);
    let w = weights(t);
    let total = t.total_weight();
    let direct = t.direct_degree_sum();
    let nb = t.black_count();
    let nw = t.white_count();
    let leaves = t.leaves();
    let nl = leaves.len();
    let nc = t.cores.len();
    let m = t.edge_count();
    let root = t.root;
    let root_rich = t.nodes[root].black || t.nodes[root].children.len() >= 2;
    let nonempty = m > 0;
    let (total_i, nb_i, nl_i) = (total as i64, nb as i64, nl as i64);
    let mut ck = Checks(Vec::new());

    // Structure of the tree itself.
    ck.ok("weight_sum", total == direct, || format!("tree {total} vs direct {direct}"));
    ck.add(
        "black_white",
        t.edge_ids()
            .filter(|&v| !t.nodes[v].black && t.nodes[v].children.len() <= 1)
            .map(|v| format!("node {v} white with {} children", t.nodes[v].children.len()))
            .collect(),
    );
    ck.ok("edge_count", m + 1 == nw + nb && (!nonempty || m < 2 * nb), || {
        format!("|I|={m}, |W|={nw}, |B|={nb}")
    });
    ck.ok("white_leaf_black", nw <= nl && nl <= nb, || format!("|W|={nw}, |L|={nl}, |B|={nb}"));
    ck.ok("root_white_bound", !root_rich || nw < nb, || format!("|W|={nw}, |B|={nb}"));
    ck.ok("black_le_cores", nb <= nc, || format!("|B|={nb}, |C|={nc}"));
    let chain = |v: usize| t.nodes[v].edge.as_ref().expect("edge");
    ck.add(
        "chain_length",
        t.edge_ids().filter(|&v| chain(v).length > 3).map(|v| format!("edge {v}: length {}", chain(v).length)).collect(),
    );
    ck.add(
        "chain_weight",
        t.edge_ids()
            .filter(|&v| chain(v).weight > 2 * (chain(v).length + 1))
            .map(|v| format!("edge {v}"))
            .collect(),
    );
    ck.add(
        "chain_classified",
        t.edge_ids().filter(|&v| chain(v).case == ChainCase::Unclassified).map(|v| format!("edge {v}")).collect(),
    );

    // Weight caps.
    ck.add("max_weight", t.edge_ids().filter(|&v| w[v] > MAX_WEIGHT).map(|v| format!("edge {v}: {}", w[v])).collect());
    ck.add(
        "weight5_lower_black",
        t.edge_ids().filter(|&v| w[v] == 5 && !t.nodes[v].black).map(|v| format!("edge {v}")).collect(),
    );
    if sparse {
        ck.add(
            "weight5_both_black",
            t.edge_ids()
                .filter(|&v| w[v] == 5 && !(t.nodes[v].black && t.nodes[t.upper(v)].black))
                .map(|v| format!("edge {v}"))
                .collect(),
        );
        ck.add(
            "weight4_one_black",
            t.edge_ids()
                .filter(|&v| w[v] == 4 && !(t.nodes[v].black || t.nodes[t.upper(v)].black))
                .map(|v| format!("edge {v}"))
                .collect(),
        );
    }

    // Bad pairs.
    let pairs = bad_pairs_with(t, &w);
    ck.add(
        "bad_pair_sum",
        pairs.iter().filter(|p| p.weights.0 + p.weights.1 > 7).map(|p| format!("{}->{}", p.lower, p.upper)).collect(),
    );
    ck.add(
        "bad_pair_no_heavy_between",
        pairs
            .iter()
            .filter(|p| p.path[..p.path.len() - 1].iter().any(|&x| w[x] >= HEAVY))
            .map(|p| format!("{}->{}", p.lower, p.upper))
            .collect(),
    );
    ck.add(
        "bad_pair_shape",
        pairs
            .iter()
            .filter(|p| {
                let (lo, up) = (chain(p.lower), chain(p.upper));
                let upper_ok = up.weight == 3 && up.length == 1 && !up.a_in_u[0];
                let lower_ok = lo.weight <= 4 && (lo.length != 1 || lo.a_in_u[0]);
                !(upper_ok && lower_ok)
            })
            .map(|p| format!("{}->{}", p.lower, p.upper))
            .collect(),
    );
    let lowers: Vec<usize> = pairs.iter().map(|p| p.lower).collect();
    let uniq: BTreeSet<usize> = lowers.iter().copied().collect();
    ck.ok("bad_pair_lower_unique", uniq.len() == lowers.len(), || format!("lower edges {lowers:?}"));
    if sparse {
        ck.add(
            "bad_pair_upper_black",
            pairs
                .iter()
                .filter(|p| !t.nodes[t.upper(p.upper)].black)
                .map(|p| format!("{}->{}", p.lower, p.upper))
                .collect(),
        );
    }

    // Reassignment: one chosen pair per upper edge, least lower edge first.
    let mut w2 = w.clone();
    let uppers: BTreeSet<usize> = pairs.iter().map(|p| p.upper).collect();
    for &up in &uppers {
        let p = pairs.iter().filter(|p| p.upper == up).min_by_key(|p| p.lower).expect("pair");
        w2[p.lower] += w[up];
        w2[p.lower] -= 2;
        w2[up] = 2;
    }
    let max2 = w2.iter().copied().max().unwrap_or(0);
    ck.ok("reassign_preserves", w2.iter().sum::<usize>() == total && max2 <= MAX_WEIGHT, || {
        format!("total {} -> {}, max weight {max2}", total, w2.iter().sum::<usize>())
    });
    let left = bad_pairs_with(t, &w2);
    ck.ok("reassign_clears", left.is_empty(), || format!("{} bad pairs remain", left.len()));
    let mut assigned = BTreeSet::new();
    let mut clash = Vec::new();
    for e in t.edge_ids().filter(|&e| w2[e] >= HEAVY) {
        match closest_black(t, e, |_| true).first() {
            Some(&b) if assigned.insert(b) => {}
            Some(&b) => clash.push(format!("edge {e} -> node {b}")),
            None => clash.push(format!("edge {e} has no black descendant")),
        }
    }
    ck.add("heavy_injective", clash);
    ck.ok("bound_7b", !nonempty || total_i <= 7 * nb_i - 2, || format!("{total} > 7*{nb}-2"));

    let mut b_star = Vec::new();
    if sparse {
        let heavy: Vec<usize> = t.edge_ids().filter(|&e| w[e] >= HEAVY).collect();
        let b_sets: Vec<(usize, Vec<usize>)> =
            heavy.iter().map(|&e| (e, closest_black(t, e, |c| w[c] < HEAVY))).collect();
        ck.add(
            "b_e_empty_iff_upper",
            b_sets
                .iter()
                .filter(|(e, b)| b.is_empty() != uppers.contains(e))
                .map(|(e, b)| format!("edge {e}: |B_e|={}", b.len()))
                .collect(),
        );
        let mut seen = BTreeSet::new();
        let mut overlap = Vec::new();
        for (e, b) in &b_sets {
            for x in b {
                if !seen.insert(*x) {
                    overlap.push(format!("node {x} (edge {e})"));
                }
            }
        }
        ck.add("b_e_disjoint", overlap);
        b_star = b_sets.iter().filter(|(e, b)| !uppers.contains(e) && !b.is_empty()).map(|(e, b)| (*e, b[0])).collect();

        let mut w3 = w.clone();
        for &(e, _) in &b_star {
            w3[e] = w3[e].saturating_sub(2);
        }
        ck.add(
            "reduced_weights",
            t.edge_ids()
                .filter(|&e| w3[e] > 3 || (w3[e] == 3 && !t.nodes[t.upper(e)].black))
                .map(|e| format!("edge {e}: {}", w3[e]))
                .collect(),
        );
        let surplus = token_surplus(t, &w3);
        let mut short = Vec::new();
        for (v, &have) in surplus.iter().enumerate() {
            let need = if v != root || root_rich { 4 } else { 2 };
            if nonempty && have < need {
                short.push(format!("node {v}: {have} < {need}"));
            }
        }
        ck.add("token_surplus", short);
        let nbs = b_star.len() as i64;
        let slack = if root_rich { 4 } else { 2 };
        ck.ok("token_bound", !nonempty || total_i <= 3 * nb_i + nl_i + 2 * nbs - slack, || {
            format!("{total} > 3*{nb}+{nl}+2*{nbs}-{slack}")
        });
        ck.ok("bound_6b", !nonempty || total_i <= 6 * nb_i - 2, || format!("{total} > 6*{nb}-2"));
    }

    if let FamilyClass::Beta(beta) = class {
        let i_star: Vec<usize> =
            b_star.iter().filter(|(_, b)| t.nodes[*b].children.is_empty()).map(|(e, _)| *e).collect();
        let mut nested = Vec::new();
        for &e in &i_star {
            for &f in &i_star {
                if e != f && t.is_ancestor(e, f) {
                    nested.push(format!("{f} below {e}"));
                }
            }
        }
        ck.add("i_star_antichain", nested);
        let crossing_all = |e: usize, c: usize| {
            chain(e).sets[1..].iter().all(|s| s.crosses_unchecked(&t.cores[c]))
        };
        ck.add(
            "c_e_exists",
            i_star
                .iter()
                .filter(|&&e| !(0..nc).any(|c| crossing_all(e, c)))
                .map(|e| format!("edge {e}"))
                .collect(),
        );
        ck.add(
            "c_e_multiplicity",
            (0..nc)
                .filter_map(|c| {
                    let k = i_star.iter().filter(|&&e| crossing_all(e, c)).count();
                    (k > beta).then(|| format!("core {c} crosses {k} chains"))
                })
                .collect(),
        );
        let (b, nis) = (beta as i64, i_star.len() as i64);
        ck.ok("core_count", (nc as i64) * b >= nl_i * b + nis, || {
            format!("|C|={nc} < |L|={nl} + |I*|={nis}/{beta}")
        });
        ck.ok("bound_beta", total_i * (b + 1) <= (6 * b + 5) * nc as i64, || {
            format!("{total} > (6-1/{})*{nc}", beta + 1)
        });
    }

    let ok = ck.0.iter().all(|c| c.holds);
    BoundsReport {
        class,
        total_weight: total,
        direct_weight: direct,
        cores: nc,
        black: nb,
        white: nw,
        leaves: nl,
        edges: m,
        bad_pairs: pairs,
        reassigned: w2,
        b_star,
        checks: ck.0,
        ok,
    }
}

/// Tokens left at each node after paying for every edge below it.
fn token_surplus(t: &ShortcutTree, w: &[usize]) -> Vec<i64> {
    let mut order: Vec<usize> = (0..t.nodes.len()).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(t.nodes[v].depth));
    let mut s = vec![0i64; t.nodes.len()];
    for v in order {
        let node = &t.nodes[v];
        let base = if node.children.is_empty() {
            4
        } else if node.black {
            3
        } else {
            0
        };
        s[v] = base + node.children.iter().map(|&c| s[c] - w[c] as i64).sum::<i64>();
    }
    s
}
