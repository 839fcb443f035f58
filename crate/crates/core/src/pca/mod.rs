//! The partial combinatory algebra on ℕ.
//!
//! Application `pq` runs the coded term `p` on the value `q` (see
//! [`machine`]). The pairing function is the parity-alternating square
//! enumeration `pair(a, b) = m(m+1) - a + b` for even `m = max(a, b)` and
//! `m(m+1) + a - b` for odd `m`.

pub mod lambda;
pub mod library;
pub mod machine;
pub mod term;

use thiserror::Error;

pub use crate::code::Code;
pub use machine::{apply, apply_all, AppResult, Fuel, Outcome};
pub use term::{decode, encode, Prim, Term};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PcaError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("indices must differ (got {0} twice)")]
    SameIndices(Code),
}

pub fn pair(a: &Code, b: &Code) -> Code {
    Code::pair(a.clone(), b.clone())
}

pub fn unpair0(c: &Code) -> Code {
    c.left()
}

pub fn unpair1(c: &Code) -> Code {
    c.right()
}

/// A code `e` with `e x ≃ f e x` for all `x`.
pub fn fixpoint(f: &Code) -> Code {
    term::app_code(Prim::Fix.code(), term::lit_code(f.clone()))
}

/// Least `n > max(lower, i, j)` with `pair(i, n) < pair(j, n)`, by search.
pub fn incomparable_witness(i: &Code, j: &Code, lower: &Code) -> Result<Code, PcaError> {
    if i == j {
        return Err(PcaError::SameIndices(i.clone()));
    }
    let start = [i, j, lower].into_iter().max().expect("nonempty").clone();
    let mut n = start.succ();
    loop {
        if pair(i, &n) < pair(j, &n) {
            return Ok(n);
        }
        n = n.succ();
    }
}
