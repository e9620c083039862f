//! Instance generators: extremal covers and seeded random instances.

pub mod random;
pub mod tight;

pub use random::{random_instance, rng, RandomInstance, RandomKind};
pub use tight::{tight6, tight7, tight_beta, BundleJson, Expected, ExpectedJson, TightInstance};
