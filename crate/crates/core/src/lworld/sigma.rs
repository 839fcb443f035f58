//! Coding hereditarily finite sets by sets of naturals.
//!
//! Given a surjection `f : u → trcl({s})` with `u ⊆ ω` and `f(0) = s`,
//! `σ_s = {pair(i, j) : i, j ∈ u, f(i) ∈ f(j)}`. The set is recovered by
//! `g(n) = {g(m) : m ∈ u, pair(m, n) ∈ σ_s}` and `s = g(0)`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::hf::HFSet;
use super::LworldError;
use crate::code::{pair_u64, unpair_u64};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaCode {
    pub u: BTreeSet<u64>,
    pub sigma: BTreeSet<u64>,
}

impl SigmaCode {
    /// The index decoded as the set itself.
    pub const ROOT: u64 = 0;
}

/// `σ_s` for the breadth-first enumeration of `trcl({s})` (or the given
/// one, which must list `s` first and cover `trcl({s})`; repetitions are
/// allowed).
pub fn encode_sigma(s: &HFSet, enumeration: Option<&[HFSet]>) -> Result<SigmaCode, LworldError> {
    let closure = s.closure_bfs();
    let f: Vec<HFSet> = match enumeration {
        None => closure.clone(),
        Some(e) => {
            if e.first() != Some(s) {
                return Err(LworldError::BadEnumeration("0 is not mapped to s".into()));
            }
            let members: BTreeSet<&HFSet> = closure.iter().collect();
            if let Some(x) = e.iter().find(|x| !members.contains(x)) {
                return Err(LworldError::BadEnumeration(format!(
                    "{x} is not in the transitive closure"
                )));
            }
            let image: BTreeSet<&HFSet> = e.iter().collect();
            if image.len() != members.len() {
                return Err(LworldError::BadEnumeration("not surjective".into()));
            }
            e.to_vec()
        }
    };
    let index = |k: usize| k as u64;
    let mut sigma = BTreeSet::new();
    for (i, x) in f.iter().enumerate() {
        for (j, y) in f.iter().enumerate() {
            if y.contains(x) {
                let p = pair_u64(index(i), index(j)).ok_or(LworldError::TooLarge)?;
                sigma.insert(p);
            }
        }
    }
    Ok(SigmaCode {
        u: (0..f.len()).map(index).collect(),
        sigma,
    })
}

/// `g(0)`, computed along the relation coded by `σ`.
pub fn decode_sigma(code: &SigmaCode) -> Result<HFSet, LworldError> {
    if !code.u.contains(&SigmaCode::ROOT) {
        return Err(LworldError::InvalidCode("0 is not in u".into()));
    }
    let mut below: BTreeMap<u64, Vec<u64>> = code.u.iter().map(|&n| (n, Vec::new())).collect();
    for &p in &code.sigma {
        let (m, n) = unpair_u64(p);
        if !code.u.contains(&m) || !code.u.contains(&n) {
            return Err(LworldError::InvalidCode(format!(
                "{p} = pair({m}, {n}) leaves u"
            )));
        }
        below.get_mut(&n).expect("n ∈ u").push(m);
    }
    // iterative depth-first evaluation with cycle detection
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Open,
        Done,
    }
    let mut marks: BTreeMap<u64, Mark> = BTreeMap::new();
    let mut value: BTreeMap<u64, HFSet> = BTreeMap::new();
    let mut stack = vec![(SigmaCode::ROOT, false)];
    while let Some((n, expanded)) = stack.pop() {
        if expanded {
            let elems = below[&n].iter().map(|m| value[m].clone());
            value.insert(n, HFSet::new(elems));
            marks.insert(n, Mark::Done);
            continue;
        }
        match marks.get(&n) {
            Some(Mark::Done) => continue,
            Some(Mark::Open) => {
                return Err(LworldError::IllFounded(n));
            }
            None => {}
        }
        marks.insert(n, Mark::Open);
        stack.push((n, true));
        for &m in &below[&n] {
            match marks.get(&m) {
                Some(Mark::Open) => return Err(LworldError::IllFounded(m)),
                Some(Mark::Done) => {}
                None => stack.push((m, false)),
            }
        }
    }
    Ok(value[&SigmaCode::ROOT].clone())
}
