use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};
use smallvec::SmallVec;

use crate::error::{Error, Result};

type Words = SmallVec<[u64; 2]>;

/// A subset of the universe `{0, .., n-1}`.
///
/// Equality is extensional. The total order is the canonical family order:
/// smaller sets first, then lexicographic on the ascending element lists.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NodeSet {
    n: usize,
    words: Words,
}

fn word_count(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

impl NodeSet {
    pub fn empty(n: usize) -> Self {
        NodeSet { n, words: SmallVec::from_elem(0, word_count(n)) }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for i in 0..n {
            s.insert(i);
        }
        s
    }

    pub fn from_nodes<I: IntoIterator<Item = usize>>(n: usize, nodes: I) -> Result<Self> {
        let mut s = Self::empty(n);
        for v in nodes {
            if v >= n {
                return Err(Error::NodeOutOfRange { node: v, n });
            }
            s.insert(v);
        }
        Ok(s)
    }

    /// Low 64 nodes as a mask; only meaningful when `n <= 64`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        debug_assert!(n <= 64 && (n == 64 || mask >> n == 0));
        let mut s = Self::empty(n);
        s.words[0] = mask;
        s
    }

    pub fn mask64(&self) -> Option<u64> {
        (self.n <= 64).then(|| self.words[0])
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, v: usize) {
        assert!(v < self.n, "node {v} outside universe {}", self.n);
        self.words[v / 64] |= 1 << (v % 64);
    }

    pub fn remove(&mut self, v: usize) {
        if v < self.n {
            self.words[v / 64] &= !(1 << (v % 64));
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.n && self.words[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.n
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    fn zip_with(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Self {
        debug_assert_eq!(self.n, other.n, "universe mismatch");
        NodeSet {
            n: self.n,
            words: self.words.iter().zip(&other.words).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> Self {
        let mut c = NodeSet { n: self.n, words: self.words.iter().map(|w| !w).collect() };
        let tail = self.n % 64;
        if tail != 0 {
            let last = c.words.len() - 1;
            c.words[last] &= (1u64 << tail) - 1;
        }
        if self.n == 0 {
            c.words[0] = 0;
        }
        c
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).all(|(&a, &b)| a & !b == 0)
    }

    pub fn is_proper_subset(&self, other: &Self) -> bool {
        self.is_subset(other) && self != other
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).all(|(&a, &b)| a & b == 0)
    }

    pub fn intersects(&self, other: &Self) -> bool {
        !self.is_disjoint(other)
    }

    /// Exactly one endpoint inside.
    pub fn separates(&self, u: usize, v: usize) -> bool {
        self.contains(u) != self.contains(v)
    }

    /// Disjoint or nested.
    pub fn laminar_with(&self, other: &Self) -> bool {
        self.is_disjoint(other) || self.is_subset(other) || other.is_subset(self)
    }

    /// Unchecked crossing test; universes must agree.
    pub fn crosses_unchecked(&self, other: &Self) -> bool {
        let mut inter = false;
        let mut outside = false;
        let mut a_only = false;
        let mut b_only = false;
        let full_words = self.n / 64;
        for (i, (&a, &b)) in self.words.iter().zip(&other.words).enumerate() {
            let valid = if i < full_words { u64::MAX } else { (1u64 << (self.n % 64)) - 1 };
            inter |= a & b != 0;
            outside |= !(a | b) & valid != 0;
            a_only |= a & !b != 0;
            b_only |= b & !a != 0;
        }
        inter && outside && a_only && b_only
    }
}

/// Two sets cross when `A∩B`, `A∖B`, `B∖A` and the complement of `A∪B` are all nonempty.
pub fn crosses(a: &NodeSet, b: &NodeSet) -> Result<bool> {
    if a.n != b.n {
        return Err(Error::UniverseMismatch(a.n, b.n));
    }
    Ok(a.crosses_unchecked(b))
}

impl Ord for NodeSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.iter().cmp(other.iter()))
            .then_with(|| self.n.cmp(&other.n))
    }
}

impl PartialOrd for NodeSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for NodeSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

/// An edge list over the universe; parallel edges are kept and counted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EdgeSet {
    edges: Vec<(usize, usize)>,
}

impl EdgeSet {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        for &(u, v) in &edges {
            if u >= n || v >= n {
                return Err(Error::NodeOutOfRange { node: u.max(v), n });
            }
            if u == v {
                return Err(Error::InvalidInput(format!("self-loop at node {u}")));
            }
        }
        Ok(EdgeSet { edges })
    }

    pub fn empty() -> Self {
        EdgeSet::default()
    }

    /// All unordered pairs of `0..n`.
    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        EdgeSet { edges }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn push(&mut self, e: (usize, usize)) {
        assert_ne!(e.0, e.1);
        self.edges.push(e);
    }

    /// `d_J(S)`: number of edges with exactly one end in `s`, with multiplicity.
    pub fn degree(&self, s: &NodeSet) -> usize {
        self.edges.iter().filter(|&&(u, v)| s.separates(u, v)).count()
    }

    pub fn covers(&self, s: &NodeSet) -> bool {
        self.edges.iter().any(|&(u, v)| s.separates(u, v))
    }

    pub fn without(&self, idx: usize) -> Self {
        let mut edges = self.edges.clone();
        edges.remove(idx);
        EdgeSet { edges }
    }

    pub fn extended(&self, more: &[(usize, usize)]) -> Self {
        let mut edges = self.edges.clone();
        edges.extend_from_slice(more);
        EdgeSet { edges }
    }
}

impl FromIterator<(usize, usize)> for EdgeSet {
    fn from_iter<T: IntoIterator<Item = (usize, usize)>>(iter: T) -> Self {
        EdgeSet { edges: iter.into_iter().collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, xs: &[usize]) -> NodeSet {
        NodeSet::from_nodes(n, xs.iter().copied()).unwrap()
    }

    #[test]
    fn crossing_examples() {
        assert!(crosses(&set(4, &[0, 1]), &set(4, &[1, 2])).unwrap());
        assert!(!crosses(&set(3, &[0]), &set(3, &[0, 1])).unwrap());
        assert!(!crosses(&set(3, &[0, 1]), &set(3, &[2])).unwrap());
    }

    #[test]
    fn crossing_rejects_mismatched_universes() {
        assert!(matches!(
            crosses(&set(3, &[0]), &set(4, &[0])),
            Err(Error::UniverseMismatch(3, 4))
        ));
    }

    #[test]
    fn complement_stays_in_universe() {
        let s = set(70, &[0, 65]);
        let c = s.complement();
        assert_eq!(c.len(), 68);
        assert!(!c.contains(65) && c.contains(69));
        assert_eq!(c.complement(), s);
        assert!(NodeSet::empty(0).complement().is_empty());
    }

    #[test]
    fn crossing_near_word_boundary() {
        let a = set(65, &[0, 64]);
        let b = set(65, &[64, 1]);
        assert!(a.crosses_unchecked(&b));
        let everything_else = set(65, &(1..64).collect::<Vec<_>>());
        assert!(!a.crosses_unchecked(&everything_else));
    }

    #[test]
    fn canonical_order_is_size_then_lex() {
        let mut v = [set(4, &[1]), set(4, &[0, 1]), set(4, &[0]), set(4, &[0, 2]), set(4, &[3])];
        v.sort();
        let lists: Vec<Vec<usize>> = v.iter().map(NodeSet::to_vec).collect();
        assert_eq!(lists, vec![vec![0], vec![1], vec![3], vec![0, 1], vec![0, 2]]);
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(NodeSet::from_nodes(3, [3]).is_err());
        assert!(EdgeSet::new(3, vec![(0, 3)]).is_err());
        assert!(EdgeSet::new(3, vec![(1, 1)]).is_err());
    }

    #[test]
    fn degree_counts_parallel_edges() {
        let j = EdgeSet::new(3, vec![(0, 1), (0, 1), (1, 2)]).unwrap();
        assert_eq!(j.degree(&set(3, &[0])), 2);
        assert_eq!(j.degree(&set(3, &[0, 1])), 1);
    }
}
