//! Hand-built families with known structure.

use famcover::exact::FamilyClass;
use famcover::setfam::{
    check_gamma_pliable, check_sparse, is_pliable, Counterexample, EdgeSet, ExplicitFamily, NodeSet,
};
use famcover::treeanal::{build_tree, verify_bounds, ChainCase};
use famcover::witness::{laminar_witness, WitnessAssignment};
use famcover::Error;

fn set(n: usize, xs: &[usize]) -> NodeSet {
    NodeSet::from_nodes(n, xs.iter().copied()).unwrap()
}

fn family(n: usize, lists: &[&[usize]]) -> ExplicitFamily {
    let lists: Vec<Vec<usize>> = lists.iter().map(|l| l.to_vec()).collect();
    ExplicitFamily::from_lists(n, &lists).unwrap()
}

/// A weight-4 chain of length 2 directly below a weight-3 chain of length 1.
///
/// Nodes: 0 r, 1 b1, 2 a1, 3 b2, 4 z, 5 x, 6 c1, 7 d, 8 outside.
#[test]
fn single_bad_pair() {
    let n = 9;
    let cores = vec![set(n, &[0]), set(n, &[5]), set(n, &[1, 3, 6, 8]), set(n, &[7])];
    let sets = vec![
        set(n, &[0]),
        set(n, &[0, 1, 2]),
        set(n, &[0, 1, 2, 3]),
        set(n, &[5]),
        set(n, &[0, 1, 2, 3, 4, 5]),
        set(n, &[0, 1, 2, 3, 4, 5, 6]),
    ];
    let cover = EdgeSet::new(n, vec![(0, 1), (2, 3), (3, 4), (5, 4), (4, 6), (6, 7)]).unwrap();
    let a = WitnessAssignment { sets, laminar: true };
    let t = build_tree(n, &cover, &a, &cores).unwrap();
    assert_eq!(t.total_weight(), 8);
    assert_eq!(t.nodes.len(), 4);
    assert!(t.nodes[t.root].black);

    let r = verify_bounds(&t, FamilyClass::Gamma);
    assert!(r.ok, "{:?}", r.failures());
    assert_eq!(r.bad_pairs.len(), 1);
    let bp = &r.bad_pairs[0];
    assert_eq!(bp.weights, (4, 3));
    let lower = t.nodes[bp.lower].edge.as_ref().unwrap();
    let upper = t.nodes[bp.upper].edge.as_ref().unwrap();
    assert_eq!((lower.length, upper.length), (2, 1));
    assert_eq!(lower.case, ChainCase::Case2a);
    assert_eq!(r.reassigned.iter().sum::<usize>(), 8);
}

#[test]
fn crossing_witnesses_only() {
    let f = family(4, &[&[0, 1], &[1, 2]]);
    assert!(!is_pliable(&f).unwrap());
    let i = EdgeSet::new(4, vec![(0, 3), (2, 3)]).unwrap();
    assert!(matches!(laminar_witness(&f, &i), Err(Error::NoLaminarWitness)));
}

#[test]
fn set_crossing_two_cores_is_not_sparse() {
    let f = family(6, &[&[4], &[0, 1], &[2, 3], &[1, 2, 4]]);
    let r = check_sparse(&f, &EdgeSet::complete(6)).unwrap();
    assert_eq!(r.holds, Some(false));
    match r.counterexample {
        Some(Counterexample::Sparse { set: s, cores, .. }) => {
            assert_eq!(s, set(6, &[1, 2, 4]));
            assert_eq!(cores, [set(6, &[0, 1]), set(6, &[2, 3])]);
        }
        other => panic!("unexpected {other:?}"),
    }
}

/// Core {0,1} crosses {1,2} ⊂ {1,2,3}, but {3} is missing.
#[test]
fn pliable_without_gamma() {
    let f = family(5, &[&[0, 1], &[1, 2], &[1, 2, 3], &[0, 1, 2], &[2], &[0, 1, 2, 3], &[2, 3]]);
    assert!(is_pliable(&f).unwrap());
    let r = check_gamma_pliable(&f, &EdgeSet::complete(5)).unwrap();
    assert_eq!(r.holds, Some(false));
    match r.counterexample {
        Some(Counterexample::Gamma { core, d, .. }) => {
            assert_eq!(core, set(5, &[0, 1]));
            assert_eq!(d, set(5, &[3]));
        }
        other => panic!("unexpected {other:?}"),
    }
}
