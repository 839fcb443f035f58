//! The set-theoretic side at finite scale: hereditarily finite sets,
//! definable subsets, the stages `L_n`, `α*`, and σ-codes.
//!
//! Everything here is classical: on hereditarily finite inputs the
//! intuitionistic and classical readings of "ordinal" coincide.

pub mod def;
pub mod hf;
pub mod sigma;

use std::collections::BTreeSet;

use thiserror::Error;

pub use def::{def_subsets, def_subsets_by_formulas, def_subsets_by_powerset, FOFormula, FOTerm};
pub use hf::HFSet;
pub use sigma::{decode_sigma, encode_sigma, SigmaCode};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LworldError {
    #[error("{what} has size {size}, above the bound {bound}")]
    BoundExceeded {
        what: &'static str,
        size: usize,
        bound: usize,
    },
    #[error("formula route found {formulas} definable sets, powerset route {powerset}")]
    RouteMismatch { formulas: usize, powerset: usize },
    #[error("{0} is not an ordinal")]
    NotAnOrdinal(HFSet),
    #[error("invalid enumeration: {0}")]
    BadEnumeration(String),
    #[error("invalid σ-code: {0}")]
    InvalidCode(String),
    #[error("σ-code is ill-founded: {0} depends on itself")]
    IllFounded(u64),
    #[error("index too large to pair")]
    TooLarge,
}

/// Highest stage computed.
pub const MAX_STAGE: usize = 5;

/// `L_n = ⋃_{m < n} Def(L_m)`.
pub fn l_stage(n: usize) -> Result<BTreeSet<HFSet>, LworldError> {
    if n > MAX_STAGE {
        return Err(LworldError::BoundExceeded {
            what: "stage index",
            size: n,
            bound: MAX_STAGE,
        });
    }
    let mut stages: Vec<BTreeSet<HFSet>> = vec![BTreeSet::new()];
    for m in 0..n {
        let domain: Vec<HFSet> = stages[m].iter().cloned().collect();
        let mut next = BTreeSet::new();
        for s in &stages {
            next.extend(s.iter().cloned());
        }
        next.extend(def_subsets(&domain)?);
        stages.push(next);
    }
    Ok(stages.pop().expect("stage list is nonempty"))
}

/// `S ∩ Ord`
pub fn ordinals_of<'a>(s: impl IntoIterator<Item = &'a HFSet>) -> BTreeSet<HFSet> {
    s.into_iter().filter(|x| x.is_ordinal()).cloned().collect()
}

/// `α* = ⋃_{β ∈ α} β⁺⁺`
pub fn alpha_star(alpha: &HFSet) -> Result<HFSet, LworldError> {
    if !alpha.is_ordinal() {
        return Err(LworldError::NotAnOrdinal(alpha.clone()));
    }
    Ok(HFSet::new(alpha.iter().map(|b| b.succ().succ())).big_union())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(s: &str) -> HFSet {
        s.parse().unwrap()
    }

    #[test]
    fn first_stages() {
        assert!(l_stage(0).unwrap().is_empty());
        assert_eq!(l_stage(2).unwrap(), BTreeSet::from([set("{}"), set("{{}}")]));
        assert_eq!(l_stage(3).unwrap().len(), 4);
        assert!(l_stage(6).is_err());
    }

    #[test]
    fn ordinal_filter() {
        let s = [set("{}"), set("{{}}"), set("{{{}}}")];
        assert_eq!(ordinals_of(&s), BTreeSet::from([set("{}"), set("{{}}")]));
        assert!(ordinals_of(&[]).is_empty());
        let l4 = l_stage(4).unwrap();
        assert_eq!(ordinals_of(&l4), (0..4).map(HFSet::ordinal).collect());
    }

    #[test]
    fn alpha_star_display() {
        assert_eq!(alpha_star(&HFSet::empty()).unwrap(), HFSet::empty());
        assert_eq!(alpha_star(&HFSet::ordinal(3)).unwrap(), HFSet::ordinal(4));
        assert_eq!(alpha_star(&HFSet::ordinal(3)).unwrap().big_union(), HFSet::ordinal(3));
        let gap = HFSet::new([HFSet::ordinal(0), HFSet::ordinal(2)]);
        assert!(alpha_star(&gap).is_err());
    }
}
