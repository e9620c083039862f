//! Instance files: a costed graph plus an explicit and/or small-cuts family.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::RatPair;
use crate::setfam::{ExplicitFamily, FamilyJson, FamilyOracle};
use crate::smallcuts::{self, Augment, CapGraph, CapGraphJson, SmallCuts};
use crate::wgmv::{CostedEdge, CostedGraph};

/// Version of every JSON layout this crate reads and writes.
pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Debug)]
pub struct Instance {
    pub graph: CostedGraph,
    pub explicit: Option<ExplicitFamily>,
    pub smallcuts: Option<CapGraph>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceJson {
    pub n: usize,
    /// `[u, v, [num, den]]` per candidate edge; the position is the edge id.
    pub edges: Vec<(usize, usize, RatPair)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub explicit: Option<FamilyJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub smallcuts: Option<CapGraphJson>,
}

/// Which family description to use when an instance carries both.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    Explicit,
    SmallCuts,
}

impl Instance {
    pub fn explicit(graph: CostedGraph, f: ExplicitFamily) -> Self {
        Instance { graph, explicit: Some(f), smallcuts: None }
    }

    pub fn small_cuts(graph: CostedGraph, h: CapGraph) -> Self {
        Instance { graph, explicit: None, smallcuts: Some(h) }
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn oracle(&self, kind: Option<FamilyKind>) -> Result<Box<dyn FamilyOracle + '_>> {
        let kind = kind.unwrap_or(if self.explicit.is_some() {
            FamilyKind::Explicit
        } else {
            FamilyKind::SmallCuts
        });
        match kind {
            FamilyKind::Explicit => match &self.explicit {
                Some(f) => Ok(Box::new(f.clone())),
                None => Err(Error::InvalidInput("instance has no explicit family".into())),
            },
            FamilyKind::SmallCuts => match &self.smallcuts {
                Some(h) => Ok(Box::new(SmallCuts::new(h.clone()))),
                None => Err(Error::InvalidInput("instance has no small-cuts family".into())),
            },
        }
    }

    /// The family as an explicit list, materializing small cuts if needed.
    pub fn explicit_family(&self) -> Result<ExplicitFamily> {
        match (&self.explicit, &self.smallcuts) {
            (Some(f), _) => Ok(f.clone()),
            (None, Some(h)) => {
                smallcuts::materialize(h, &crate::setfam::EdgeSet::empty(), &Augment::Cover)
            }
            (None, None) => Err(Error::InvalidInput("instance has no family".into())),
        }
    }

    pub fn to_json(&self) -> InstanceJson {
        InstanceJson {
            n: self.graph.n(),
            edges: self.graph.edges().iter().map(|e| (e.u, e.v, RatPair(e.cost.clone()))).collect(),
            explicit: self.explicit.as_ref().map(ExplicitFamily::to_json),
            smallcuts: self.smallcuts.as_ref().map(CapGraph::to_json),
        }
    }

    pub fn from_json(j: &InstanceJson) -> Result<Self> {
        let edges =
            j.edges.iter().map(|(u, v, c)| CostedEdge { u: *u, v: *v, cost: c.0.clone() }).collect();
        let graph = CostedGraph::new(j.n, edges)?;
        let explicit = j.explicit.as_ref().map(ExplicitFamily::from_json).transpose()?;
        let smallcuts = j.smallcuts.as_ref().map(CapGraph::from_json).transpose()?;
        for m in explicit.iter().map(|f| f.universe()).chain(smallcuts.iter().map(|h| h.n())) {
            if m != j.n {
                return Err(Error::UniverseMismatch(j.n, m));
            }
        }
        if explicit.is_none() && smallcuts.is_none() {
            return Err(Error::InvalidInput("instance needs an explicit or small-cuts family".into()));
        }
        Ok(Instance { graph, explicit, smallcuts })
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::from_json(&serde_json::from_str(s)?)
    }
}

/// Compact instance JSON.
impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_string(&self.to_json()).map_err(|_| fmt::Error)?;
        f.write_str(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn round_trip_both_families() {
        let g = CostedGraph::from_triples(3, &[(0, 1, frac(3, 2)), (1, 2, int(1))]).unwrap();
        let f = ExplicitFamily::from_lists(3, &[vec![0], vec![1]]).unwrap();
        let h = CapGraph::unit(3, &[(0, 1)], 2).unwrap();
        let inst = Instance { graph: g, explicit: Some(f), smallcuts: Some(h) };
        let s = inst.to_string();
        assert!(s.starts_with(r#"{"n":3,"edges":[[0,1,[3,2]],[1,2,[1,1]]]"#));
        let back = Instance::parse(&s).unwrap();
        assert_eq!(back.to_string(), s);
        assert!(back.oracle(Some(FamilyKind::SmallCuts)).is_ok());
    }

    #[test]
    fn rejects_missing_family_and_mismatch() {
        assert!(Instance::parse(r#"{"n":2,"edges":[]}"#).is_err());
        assert!(Instance::parse(r#"{"n":2,"edges":[],"explicit":{"n":3,"sets":[[0]]}}"#).is_err());
    }
}
