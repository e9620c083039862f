use famcover::exact::FamilyClass;
use famcover::gens::{tight6, tight7, tight_beta, BundleJson};
use famcover::setfam::{check_sparse, crossing_number, is_pliable, ExplicitFamily};
use famcover::treeanal::analyze_cover;

#[test]
fn tight_beta_respects_its_crossing_bound() {
    for (i, j) in [(2u32, 0u32), (2, 1), (3, 0), (3, 1), (3, 2)] {
        let t = tight_beta(i, j).unwrap();
        let c = crossing_number(&t.family, &t.cover).unwrap();
        assert_eq!(c.beta, 1 << j, "i={i} j={j}");
    }
}

#[test]
fn tight6_is_sparse_over_its_cover() {
    for l in [2, 4] {
        let t = tight6(l).unwrap();
        assert_eq!(check_sparse(&t.family, &t.cover).unwrap().holds, Some(true));
    }
}

#[test]
fn tight7_families_are_not_pliable() {
    // The bound is about the tree of one cover; the family is only its witnesses and cores.
    let t = tight7(2).unwrap();
    assert!(!is_pliable(&t.family).unwrap());
    assert_eq!(check_sparse(&t.family, &t.cover).unwrap().holds, Some(false));
}

#[test]
fn tight7_bad_pairs_and_black_nodes() {
    let t = tight7(8).unwrap();
    let a = analyze_cover(&t.family, &t.cover, Some(t.cores.clone()), FamilyClass::Gamma).unwrap();
    let r = &a.report;
    assert!(r.ok);
    assert_eq!((r.black, r.cores, r.leaves), (9, 10, 8));
    assert!(r.black < r.cores);
    assert!(r.bad_pairs.is_empty());
    assert_eq!(r.total_weight, 54);
}

#[test]
fn bundle_round_trip() {
    let t = tight7(2).unwrap();
    let text = serde_json::to_string(&t.bundle()).unwrap();
    assert_eq!(text, FROZEN_TIGHT7_2);
    let back: BundleJson = serde_json::from_str(&text).unwrap();
    assert_eq!(ExplicitFamily::from_json(&back.family).unwrap(), t.family);
    assert_eq!(back.cover, t.cover.edges());
}

/// Nodes 0 and 3 form one global core; 1, 2 and the b-nodes the other.
const FROZEN_TIGHT7_2: &str = r#"{"family":{"n":12,"sets":[[4],[8],[0,3],[4,5,6],[8,9,10],[4,5,6,7],[8,9,10,11],[1,2,5,7,9,11],[2,3,4,5,6,7,8,9,10,11]]},"cover":[[4,5],[6,7],[7,3],[8,9],[10,11],[11,3],[2,0]],"cores":[[1,2,5,7,9,11],[0,3],[4],[8]],"expected":{"weight":12,"cores":4}}"#;
