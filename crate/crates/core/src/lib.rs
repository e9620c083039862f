//! Primal-dual covering of pliable set families with exact certification.

pub mod error;
pub mod exact;
pub mod gens;
pub mod io;
pub mod rational;
pub mod setfam;
pub mod smallcuts;
pub mod treeanal;
pub mod wgmv;
pub mod witness;

pub use error::{Error, Result};
pub use rational::Rational;
pub use setfam::{EdgeSet, ExplicitFamily, FamilyOracle, NodeSet};
