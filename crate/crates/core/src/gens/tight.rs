//! Families whose minimal covers reach the per-iteration degree bounds.
//!
//! Each generator fixes a laminar skeleton, gives every skeleton set a few
//! private nodes, and wires one cover edge per set. The family is the witness
//! sets plus the cores, so the cover is minimal and its witnesses are forced.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::setfam::{EdgeSet, ExplicitFamily, FamilyJson, NodeSet};
use crate::treeanal::{ShapeNode, TreeShape};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Expected {
    pub weight: usize,
    pub cores: usize,
}

#[derive(Clone, Debug)]
pub struct TightInstance {
    pub family: ExplicitFamily,
    pub cover: EdgeSet,
    pub cores: Vec<NodeSet>,
    /// Intended witness set of each cover edge.
    pub witnesses: Vec<NodeSet>,
    pub expected: Expected,
    /// Intended shortcut tree, in the same layout as `ShortcutTree::shape`.
    pub shape: TreeShape,
}

/// `{family, cover, cores, expected}` as emitted by `famcover gen`.
#[derive(Clone, Debug, Serialize, serde::Deserialize)]
pub struct BundleJson {
    pub family: FamilyJson,
    pub cover: Vec<(usize, usize)>,
    pub cores: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<ExpectedJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct ExpectedJson {
    pub weight: usize,
    pub cores: usize,
}

impl TightInstance {
    pub fn n(&self) -> usize {
        self.family.universe()
    }

    pub fn bundle(&self) -> BundleJson {
        BundleJson {
            family: self.family.to_json(),
            cover: self.cover.edges().to_vec(),
            cores: self.cores.iter().map(NodeSet::to_vec).collect(),
            expected: Some(ExpectedJson {
                weight: self.expected.weight,
                cores: self.expected.cores,
            }),
        }
    }
}

/// Skeleton node waiting for its final position in canonical order.
struct Planned {
    members: Vec<usize>,
    black: bool,
    parent: Option<usize>,
    weight: Option<usize>,
    length: Option<usize>,
}

#[derive(Default)]
struct Builder {
    n: usize,
    cover: Vec<(usize, usize)>,
    witnesses: Vec<Vec<usize>>,
    /// Core id per node; reds and colors share one id space.
    core_of: Vec<Option<usize>>,
    ncores: usize,
    planned: Vec<Planned>,
}

impl Builder {
    fn node(&mut self, core: Option<usize>) -> usize {
        self.core_of.push(core);
        self.n += 1;
        self.n - 1
    }

    fn core(&mut self) -> usize {
        self.ncores += 1;
        self.ncores - 1
    }

    fn edge(&mut self, u: usize, v: usize, witness: &[usize]) {
        self.cover.push((u, v));
        self.witnesses.push(witness.to_vec());
    }

    fn plan(&mut self, members: &[usize], black: bool, weight: usize, length: usize) -> usize {
        self.planned.push(Planned {
            members: members.to_vec(),
            black,
            parent: None,
            weight: Some(weight),
            length: Some(length),
        });
        self.planned.len() - 1
    }

    fn finish(mut self, root_black: bool, expected: Expected) -> Result<TightInstance> {
        let n = self.n;
        let root = self.planned.len();
        self.planned.push(Planned {
            members: (0..n).collect(),
            black: root_black,
            parent: None,
            weight: None,
            length: None,
        });
        let mut cores = vec![Vec::new(); self.ncores];
        for (v, c) in self.core_of.iter().enumerate() {
            if let Some(c) = c {
                cores[*c].push(v);
            }
        }
        let cores: Vec<NodeSet> =
            cores.into_iter().map(|c| NodeSet::from_nodes(n, c)).collect::<Result<_>>()?;
        let witnesses: Vec<NodeSet> = self
            .witnesses
            .iter()
            .map(|w| NodeSet::from_nodes(n, w.iter().copied()))
            .collect::<Result<_>>()?;
        let family = ExplicitFamily::from_sets_dedup(n, witnesses.iter().chain(&cores).cloned())?;
        let cover = EdgeSet::new(n, self.cover)?;

        let sets: Vec<NodeSet> = self
            .planned
            .iter()
            .map(|p| NodeSet::from_nodes(n, p.members.iter().copied()))
            .collect::<Result<_>>()?;
        let mut order: Vec<usize> = (0..sets.len()).collect();
        order.sort_by(|&a, &b| sets[a].cmp(&sets[b]));
        let mut pos = vec![0; sets.len()];
        for (i, &k) in order.iter().enumerate() {
            pos[k] = i;
        }
        let nodes = order
            .iter()
            .map(|&k| {
                let p = &self.planned[k];
                ShapeNode {
                    set: sets[k].to_vec(),
                    black: p.black,
                    parent: if k == root { None } else { Some(pos[p.parent.unwrap_or(root)]) },
                    weight: p.weight,
                    length: p.length,
                }
            })
            .collect();
        Ok(TightInstance { family, cover, cores, witnesses, expected, shape: TreeShape { nodes } })
    }
}

fn leaf_count(leaves: usize) -> Result<usize> {
    if leaves < 2 || !leaves.is_power_of_two() {
        return Err(Error::InvalidInput(format!("leaves must be a power of two >= 2, got {leaves}")));
    }
    Ok(leaves)
}

/// Leaf chain `S0 ⊂ S1 ⊂ S2` hanging below a set whose private node is `up`.
///
/// Edges `(r,b1)`, `(a1,b2)`, `(b2,up)`; `b1`, `b2` lie in core `color`.
fn leaf_gadget(b: &mut Builder, up: usize, color: usize, red_weight: usize) -> (usize, Vec<usize>) {
    let red = b.core();
    let r = b.node(Some(red));
    let b1 = b.node(Some(color));
    let a1 = b.node(None);
    let b2 = b.node(Some(color));
    b.edge(r, b1, &[r]);
    b.edge(a1, b2, &[r, b1, a1]);
    b.edge(b2, up, &[r, b1, a1, b2]);
    let id = b.plan(&[r], true, red_weight, 2);
    (id, vec![r, b1, a1, b2])
}

/// Weight `7L - 2` with `L + 2` cores: leaf edges of weight 5, the rest of weight 2.
pub fn tight7(leaves: usize) -> Result<TightInstance> {
    let leaves = leaf_count(leaves)?;
    let mut b = Builder::default();
    let (kc, qc) = (b.core(), b.core());
    let q_root = b.node(Some(qc));
    b.node(Some(kc));
    branch7(&mut b, leaves, q_root, kc, qc);
    b.finish(true, Expected { weight: 7 * leaves - 2, cores: leaves + 2 })
}

/// Returns the planned id and members of the subtree with `leaves` leaves.
fn branch7(b: &mut Builder, leaves: usize, q_up: usize, kc: usize, qc: usize) -> (usize, Vec<usize>) {
    if leaves == 1 {
        return leaf_gadget(b, q_up, kc, 5);
    }
    let k = b.node(Some(kc));
    let q = b.node(Some(qc));
    let (l, lm) = branch7(b, leaves / 2, q, kc, qc);
    let (r, rm) = branch7(b, leaves / 2, q, kc, qc);
    let mut members = vec![k, q];
    members.extend(lm);
    members.extend(rm);
    b.edge(k, q_up, &members);
    let id = b.plan(&members, false, 2, 0);
    b.planned[l].parent = Some(id);
    b.planned[r].parent = Some(id);
    (id, members)
}

/// Weight `6L - 2` with `L + 1` cores: leaf edges of weight 4, chains of weight 2.
pub fn tight6(leaves: usize) -> Result<TightInstance> {
    let leaves = leaf_count(leaves)?;
    colored(leaves, leaves, Expected { weight: 6 * leaves - 2, cores: leaves + 1 })
}

/// The weight-6 skeleton with `2^i` leaves where every subtree of height `j`
/// gets its own color core; weight `6·2^i - 2` with `2^i + 2^(i-j)` cores.
pub fn tight_beta(i: u32, j: u32) -> Result<TightInstance> {
    if j >= i || i >= 16 {
        return Err(Error::InvalidInput(format!("need 0 <= j < i < 16, got i={i} j={j}")));
    }
    let leaves = 1usize << i;
    let block = 1usize << j;
    colored(leaves, block, Expected { weight: 6 * leaves - 2, cores: leaves + (leaves / block) })
}

fn colored(leaves: usize, block: usize, expected: Expected) -> Result<TightInstance> {
    let mut b = Builder::default();
    let ncolors = leaves / block;
    let colors: Vec<usize> = (0..ncolors).map(|_| b.core()).collect();
    let z_root = b.node(None);
    for &c in &colors {
        b.node(Some(c));
    }
    let mut next = colors.iter().copied();
    branch6(&mut b, leaves, block, z_root, None, &mut next);
    b.finish(true, expected)
}

/// Builds `Y ⊃ X ⊃ children`; returns the planned id of `X`, the members of
/// `Y` (or of the leaf chain top) and the subtree color.
fn branch6(
    b: &mut Builder,
    leaves: usize,
    block: usize,
    z_up: usize,
    color: Option<usize>,
    next: &mut impl Iterator<Item = usize>,
) -> (usize, Vec<usize>, usize) {
    let color = match color {
        None if leaves == block => Some(next.next().expect("one color per block")),
        c => c,
    };
    if leaves == 1 {
        let c = color.expect("leaves sit inside a colored block");
        let (id, members) = leaf_gadget(b, z_up, c, 4);
        return (id, members, c);
    }
    let z = b.node(None);
    let (l, lm, lc) = branch6(b, leaves / 2, block, z, color, next);
    let (r, rm, _) = branch6(b, leaves / 2, block, z, color, next);
    let c_color = color.unwrap_or(lc);
    let mut x = vec![z];
    x.extend(lm);
    x.extend(rm);
    let c = b.node(Some(c_color));
    b.edge(z, c, &x);
    let mut y = x.clone();
    y.push(c);
    b.edge(c, z_up, &y);
    let id = b.plan(&x, false, 2, 1);
    b.planned[l].parent = Some(id);
    b.planned[r].parent = Some(id);
    (id, y, c_color)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::FamilyClass;
    use crate::treeanal::analyze_cover;

    fn round_trip(t: &TightInstance, class: FamilyClass) {
        let a = analyze_cover(&t.family, &t.cover, Some(t.cores.clone()), class).unwrap();
        assert_eq!(a.assignment.sets, t.witnesses);
        assert_eq!(a.tree.total_weight(), t.expected.weight);
        assert_eq!(t.cores.len(), t.expected.cores);
        assert_eq!(
            serde_json::to_string(&a.tree.shape()).unwrap(),
            serde_json::to_string(&t.shape).unwrap()
        );
    }

    #[test]
    fn tight7_small() {
        for l in [2, 4, 8] {
            let t = tight7(l).unwrap();
            assert_eq!(t.n(), 6 * l);
            round_trip(&t, FamilyClass::Gamma);
        }
    }

    #[test]
    fn tight6_small() {
        for l in [2, 4, 8] {
            round_trip(&tight6(l).unwrap(), FamilyClass::Sparse);
        }
    }

    #[test]
    fn tight_beta_small() {
        let t = tight_beta(2, 1).unwrap();
        assert_eq!((t.expected.weight, t.expected.cores), (22, 6));
        round_trip(&t, FamilyClass::Beta(2));
    }

    #[test]
    fn bad_sizes_rejected() {
        assert!(tight7(3).is_err());
        assert!(tight6(1).is_err());
        assert!(tight_beta(2, 2).is_err());
    }
}
