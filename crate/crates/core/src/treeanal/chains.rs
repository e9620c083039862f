use serde::Serialize;

use super::ChainRecord;

/// Shape of a shortcut edge's chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ChainCase {
    #[serde(rename = "1")]
    Case1,
    #[serde(rename = "2a")]
    Case2a,
    #[serde(rename = "2b")]
    Case2b,
    #[serde(rename = "3")]
    Case3,
    /// Weight at most 2.
    #[serde(rename = "light")]
    Light,
    /// Heavy but matching no known case; reported as a finding.
    #[serde(rename = "none")]
    Unclassified,
}

/// Cases for heavy chains, by length and which endpoints lie in cores.
pub fn classify_chain(c: &ChainRecord) -> ChainCase {
    if c.weight < 3 {
        return ChainCase::Light;
    }
    let in_u_a = |i: usize| c.a_in_u[i];
    // b is stored from b_1, so b_i lives at index i-1.
    let in_u_b = |i: usize| c.b_in_u[i - 1];
    let same_core = |xs: &[Option<usize>]| xs[0].is_some() && xs.iter().all(|x| *x == xs[0]);
    match c.length {
        1 => {
            let hits = [in_u_a(0), in_u_b(1), in_u_a(1), in_u_b(2)].iter().filter(|&&x| x).count();
            if hits >= 3 {
                ChainCase::Case1
            } else {
                ChainCase::Unclassified
            }
        }
        2 if !in_u_a(1) => {
            if same_core(&[c.b_core[0], c.b_core[1], c.a_core[2]]) {
                ChainCase::Case2a
            } else if !in_u_b(1) && in_u_a(0) && in_u_b(2) && (in_u_a(2) || in_u_b(3)) {
                ChainCase::Case2b
            } else {
                ChainCase::Unclassified
            }
        }
        3 if !in_u_a(1) && !in_u_b(1) && same_core(&[c.b_core[1], c.b_core[2], c.a_core[3]]) => {
            ChainCase::Case3
        }
        _ => ChainCase::Unclassified,
    }
}
