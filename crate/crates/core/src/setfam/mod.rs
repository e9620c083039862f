//! Node sets, explicit families, the core-oracle contract and property checkers.

mod checks;
mod family;
mod nodeset;

pub use checks::*;
pub use family::{
    minimal_members, residual_cores, verify_disjoint, ExplicitFamily, FamilyJson, FamilyOracle,
    Strict,
};
pub use nodeset::{crosses, EdgeSet, NodeSet};
