//! The universes `U` of type codes and `V` of set codes, together with the
//! membership relations `∈̇` / `∉̇`, decided relative to a finite truncation.
//!
//! Type codes are read through [`TypeView`]:
//!
//! | view            | code                 |
//! |-----------------|----------------------|
//! | `Fin(n)`        | `pair(0, n)`         |
//! | `Nat`           | `pair(1, 0)`         |
//! | `Dist`          | `pair(1, 1)`         |
//! | `Sigma(n, e)`   | `pair(2, pair(n, e))`|
//! | `Pi(n, e)`      | `pair(3, pair(n, e))`|
//!
//! Every answer is a [`Verdict`]. `Realized` and `Refuted` are only issued
//! when the corresponding rule instance has been derived; anything that
//! depends on unexplored parts of an infinite type or on a computation that
//! ran out of fuel is `Unknown`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use parking_lot::Mutex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::Code;
use crate::diagonal::seq::{x_membership, SeqCode, XMembership};
use crate::pca::library::library;
use crate::pca::machine::{run, run_opaque, Outcome};
use crate::pca::Fuel;

/// Finite approximation of the infinite base types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Truncation {
    /// Longest `h`-segment enumerated for the distinguished type.
    pub segment_bound: u64,
    /// Largest natural enumerated for `ℕ̄`.
    pub nat_bound: u64,
    pub fuel: Fuel,
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation {
            segment_bound: 16,
            nat_bound: 16,
            fuel: Fuel::DEFAULT,
        }
    }
}

impl Truncation {
    pub fn new(segment_bound: u64, nat_bound: u64, fuel: Fuel) -> Truncation {
        Truncation {
            segment_bound,
            nat_bound,
            fuel,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "reason", rename_all = "snake_case")]
pub enum Verdict {
    Realized,
    Refuted,
    Unknown(String),
}

impl Verdict {
    pub fn unknown(reason: impl Into<String>) -> Verdict {
        Verdict::Unknown(reason.into())
    }

    pub fn from_bool(b: bool) -> Verdict {
        if b {
            Verdict::Realized
        } else {
            Verdict::Refuted
        }
    }

    pub fn is_realized(&self) -> bool {
        matches!(self, Verdict::Realized)
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted)
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown(_))
    }

    /// `true` / `false` for decided verdicts.
    pub fn decided(&self) -> Option<bool> {
        match self {
            Verdict::Realized => Some(true),
            Verdict::Refuted => Some(false),
            Verdict::Unknown(_) => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Realized => f.write_str("realized"),
            Verdict::Refuted => f.write_str("refuted"),
            Verdict::Unknown(r) => write!(f, "unknown ({r})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UniverseError {
    #[error("{0} is not a type code")]
    NotAType(Code),
    #[error("family {family} diverges at index {index}")]
    FamilyDiverges { family: Code, index: Code },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TypeView {
    Fin(Code),
    Nat,
    Dist,
    Sigma { index: Code, family: Code },
    Pi { index: Code, family: Code },
}

impl TypeView {
    pub fn of(code: &Code) -> Option<TypeView> {
        let (tag, payload) = code.unpair();
        match tag.as_u64()? {
            0 => Some(TypeView::Fin(payload)),
            1 => match payload.as_u64()? {
                0 => Some(TypeView::Nat),
                1 => Some(TypeView::Dist),
                _ => None,
            },
            2 => {
                let (index, family) = payload.unpair();
                Some(TypeView::Sigma { index, family })
            }
            3 => {
                let (index, family) = payload.unpair();
                Some(TypeView::Pi { index, family })
            }
            _ => None,
        }
    }

    pub fn code(&self) -> Code {
        let s = Code::small;
        match self {
            TypeView::Fin(n) => Code::pair(s(0), n.clone()),
            TypeView::Nat => Code::pair(s(1), s(0)),
            TypeView::Dist => Code::pair(s(1), s(1)),
            TypeView::Sigma { index, family } => {
                Code::pair(s(2), Code::pair(index.clone(), family.clone()))
            }
            TypeView::Pi { index, family } => {
                Code::pair(s(3), Code::pair(index.clone(), family.clone()))
            }
        }
    }
}

/// A type code together with its structural view.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TypeCode {
    pub code: Code,
    pub view: TypeView,
}

impl TypeCode {
    pub fn parse(code: &Code) -> Option<TypeCode> {
        TypeView::of(code).map(|view| TypeCode {
            code: code.clone(),
            view,
        })
    }

    fn from_view(view: TypeView) -> TypeCode {
        TypeCode {
            code: view.code(),
            view,
        }
    }

    pub fn fin(n: impl Into<Code>) -> TypeCode {
        TypeCode::from_view(TypeView::Fin(n.into()))
    }

    pub fn nat() -> TypeCode {
        TypeCode::from_view(TypeView::Nat)
    }

    pub fn dist() -> TypeCode {
        TypeCode::from_view(TypeView::Dist)
    }

    pub fn sigma(index: &Code, family: &Code) -> TypeCode {
        TypeCode::from_view(TypeView::Sigma {
            index: index.clone(),
            family: family.clone(),
        })
    }

    pub fn pi(index: &Code, family: &Code) -> TypeCode {
        TypeCode::from_view(TypeView::Pi {
            index: index.clone(),
            family: family.clone(),
        })
    }
}

/// How completely [`Universe::members`] enumerated a type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coverage {
    /// Every `k ∈̇ t` is listed, and every other `k` satisfies `k ∉̇ t`.
    Exhaustive,
    /// An initial part of an infinite base type (or a type built over one).
    Truncated,
    /// Not enumerable at all (function types), or a family application ran
    /// out of fuel.
    Opaque,
}

impl Coverage {
    fn meet(self, other: Coverage) -> Coverage {
        use Coverage::*;
        match (self, other) {
            (Opaque, _) | (_, Opaque) => Opaque,
            (Truncated, _) | (_, Truncated) => Truncated,
            _ => Exhaustive,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Members {
    /// Codes `k` with `k ∈̇ t` derived.
    pub items: Vec<Code>,
    pub coverage: Coverage,
}

/// Argument standing for "any code" in parametric runs; it is far outside
/// the range of codes the library computes with.
pub static OPAQUE_MARKER: once_cell::sync::Lazy<Code> = once_cell::sync::Lazy::new(|| {
    Code::pair(
        Code::pair(Code::small(u64::MAX), Code::small(u64::MAX - 1)),
        Code::small(0x5e_ed0f_0a9a),
    )
});

/// Largest finite type enumerated member by member.
pub const MAX_FIN_ENUMERATION: u64 = 1 << 16;

/// Result of applying a family to an index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Fiber {
    Value(Code),
    OutOfFuel,
    Diverges,
}

/// A truncated model of `U`, `V`, `∈̇` and `∉̇`, optionally equipped with a
/// finite prefix of the distinguished path `h` (which determines `X̄`).
///
/// Queries are memoized; a `Universe` can be shared between threads.
pub struct Universe {
    truncation: Truncation,
    path: Option<Arc<SeqCode>>,
    din_memo: Mutex<HashMap<(Code, Code), Verdict>>,
    in_u_memo: Mutex<HashMap<Code, Verdict>>,
    in_v_memo: Mutex<HashMap<Code, Verdict>>,
    fiber_memo: Mutex<HashMap<(Code, Code), Fiber>>,
    empty_memo: Mutex<HashMap<Code, bool>>,
}

impl fmt::Debug for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Universe")
            .field("truncation", &self.truncation)
            .field("path_len", &self.path.as_ref().map(|p| p.len()))
            .finish()
    }
}

impl Universe {
    pub fn new(truncation: Truncation) -> Universe {
        Universe {
            truncation,
            path: None,
            din_memo: Mutex::new(HashMap::new()),
            in_u_memo: Mutex::new(HashMap::new()),
            in_v_memo: Mutex::new(HashMap::new()),
            fiber_memo: Mutex::new(HashMap::new()),
            empty_memo: Mutex::new(HashMap::new()),
        }
    }

    /// Supplies the known prefix of `h`.
    pub fn with_path(mut self, h_prefix: Arc<SeqCode>) -> Universe {
        self.path = Some(h_prefix);
        self
    }

    pub fn truncation(&self) -> &Truncation {
        &self.truncation
    }

    pub fn path(&self) -> Option<&Arc<SeqCode>> {
        self.path.as_ref()
    }

    pub fn fuel(&self) -> Fuel {
        self.truncation.fuel
    }

    fn view(&self, t: &Code) -> Result<TypeView, UniverseError> {
        TypeView::of(t).ok_or_else(|| UniverseError::NotAType(t.clone()))
    }

    /// `e k`, memoized.
    pub fn fiber(&self, family: &Code, k: &Code) -> Fiber {
        let key = (family.clone(), k.clone());
        if let Some(f) = self.fiber_memo.lock().get(&key) {
            return f.clone();
        }
        let out = match run(family, std::slice::from_ref(k), self.fuel()).outcome {
            Outcome::Value(v) => Fiber::Value(v),
            Outcome::Diverges => Fiber::Diverges,
            Outcome::OutOfFuel | Outcome::Inspected => Fiber::OutOfFuel,
        };
        self.fiber_memo.lock().insert(key, out.clone());
        out
    }

    /// The fiber at an index known to satisfy `k ∈̇ n`: must converge to a
    /// type code for the Σ/Π code to be well formed.
    fn type_fiber(&self, family: &Code, k: &Code) -> Result<Option<Code>, UniverseError> {
        match self.fiber(family, k) {
            Fiber::Value(t) => {
                self.view(&t)?;
                Ok(Some(t))
            }
            Fiber::OutOfFuel => Ok(None),
            Fiber::Diverges => Err(UniverseError::FamilyDiverges {
                family: family.clone(),
                index: k.clone(),
            }),
        }
    }

    /// `k ∈̇ t` (rules 0′–3′) versus `k ∉̇ t`.
    pub fn din(&self, k: &Code, t: &Code) -> Result<Verdict, UniverseError> {
        let key = (k.clone(), t.clone());
        if let Some(v) = self.din_memo.lock().get(&key) {
            return Ok(v.clone());
        }
        let v = self.din_uncached(k, t)?;
        self.din_memo.lock().insert(key, v.clone());
        Ok(v)
    }

    fn din_uncached(&self, k: &Code, t: &Code) -> Result<Verdict, UniverseError> {
        Ok(match self.view(t)? {
            TypeView::Fin(n) => Verdict::from_bool(*k < n),
            TypeView::Nat => Verdict::Realized,
            TypeView::Dist => match &self.path {
                None => Verdict::unknown("no prefix of h available"),
                Some(h) => match x_membership(k, h) {
                    XMembership::Member => Verdict::Realized,
                    XMembership::Nonmember => Verdict::Refuted,
                    XMembership::BeyondTruncation => {
                        Verdict::unknown("segment longer than the known prefix of h")
                    }
                },
            },
            TypeView::Sigma { index, family } => {
                let (k0, u) = k.unpair();
                match self.din(&k0, &index)? {
                    Verdict::Realized => match self.type_fiber(&family, &k0)? {
                        Some(fiber) => self.din(&u, &fiber)?,
                        None => Verdict::unknown("family application out of fuel"),
                    },
                    other => other,
                }
            }
            TypeView::Pi { index, family } => self.din_pi(k, &index, &family)?,
        })
    }

    fn din_pi(&self, d: &Code, index: &Code, family: &Code) -> Result<Verdict, UniverseError> {
        let members = self.members(index)?;
        let mut pending: Option<String> = None;
        for k in &members.items {
            let Some(fiber) = self.type_fiber(family, k)? else {
                pending.get_or_insert_with(|| "family application out of fuel".into());
                continue;
            };
            match self.fiber(d, k) {
                Fiber::Diverges => return Ok(Verdict::Refuted),
                Fiber::OutOfFuel => {
                    if self.provably_empty(&fiber)? {
                        return Ok(Verdict::Refuted);
                    }
                    pending.get_or_insert_with(|| format!("application to {k} out of fuel"));
                }
                Fiber::Value(v) => match self.din(&v, &fiber)? {
                    Verdict::Refuted => return Ok(Verdict::Refuted),
                    Verdict::Unknown(r) => {
                        pending.get_or_insert(r);
                    }
                    Verdict::Realized => {}
                },
            }
        }
        Ok(match (pending, members.coverage) {
            (Some(r), _) => Verdict::Unknown(r),
            (None, Coverage::Exhaustive) => Verdict::Realized,
            (None, Coverage::Truncated) => {
                Verdict::unknown("no counterexample within the truncation of the index type")
            }
            (None, Coverage::Opaque) => Verdict::unknown("index type is not enumerable"),
        })
    }

    /// Codes `k` with `k ∈̇ t`, as far as the truncation reaches.
    pub fn members(&self, t: &Code) -> Result<Members, UniverseError> {
        Ok(match self.view(t)? {
            TypeView::Fin(n) => match n.as_u64() {
                Some(n) if n <= MAX_FIN_ENUMERATION => Members {
                    items: (0..n).map(Code::small).collect(),
                    coverage: Coverage::Exhaustive,
                },
                _ => Members {
                    items: (0..MAX_FIN_ENUMERATION).map(Code::small).collect(),
                    coverage: Coverage::Truncated,
                },
            },
            TypeView::Nat => Members {
                items: (0..=self.truncation.nat_bound).map(Code::small).collect(),
                coverage: Coverage::Truncated,
            },
            TypeView::Dist => match &self.path {
                None => Members {
                    items: Vec::new(),
                    coverage: Coverage::Opaque,
                },
                Some(h) => {
                    let top = (self.truncation.segment_bound as usize).min(h.len());
                    Members {
                        items: (0..=top).map(|m| h.prefix_code(m)).collect(),
                        coverage: Coverage::Truncated,
                    }
                }
            },
            TypeView::Sigma { index, family } => {
                let outer = self.members(&index)?;
                let mut coverage = outer.coverage;
                let mut items = Vec::new();
                for k in &outer.items {
                    match self.type_fiber(&family, k)? {
                        Some(fiber) => {
                            let inner = self.members(&fiber)?;
                            coverage = coverage.meet(inner.coverage);
                            items.extend(inner.items.into_iter().map(|u| Code::pair(k.clone(), u)));
                        }
                        None => coverage = Coverage::Opaque,
                    }
                }
                Members { items, coverage }
            }
            TypeView::Pi { .. } => Members {
                items: Vec::new(),
                coverage: Coverage::Opaque,
            },
        })
    }

    /// `true` only if every `k` provably satisfies `k ∉̇ t`.
    pub fn provably_empty(&self, t: &Code) -> Result<bool, UniverseError> {
        if let Some(&b) = self.empty_memo.lock().get(t) {
            return Ok(b);
        }
        let b = self.provably_empty_uncached(t)?;
        self.empty_memo.lock().insert(t.clone(), b);
        Ok(b)
    }

    fn provably_empty_uncached(&self, t: &Code) -> Result<bool, UniverseError> {
        Ok(match self.view(t)? {
            TypeView::Fin(n) => n.is_zero(),
            // 0 ∈̇ ℕ̄, and the empty sequence is an initial segment of h.
            TypeView::Nat | TypeView::Dist => false,
            TypeView::Sigma { index, family } => {
                if self.provably_empty(&index)? {
                    return Ok(true);
                }
                let outer = self.members(&index)?;
                if outer.coverage == Coverage::Exhaustive {
                    for k in &outer.items {
                        match self.type_fiber(&family, k)? {
                            Some(fiber) if self.provably_empty(&fiber)? => {}
                            _ => return Ok(false),
                        }
                    }
                    return Ok(true);
                }
                // a family that ignores its argument has a single fiber,
                // and the index is inhabited by now
                match self.constant_fiber(&family) {
                    Some(fiber) if TypeView::of(&fiber).is_some() => self.provably_empty(&fiber)?,
                    _ => false,
                }
            }
            TypeView::Pi { index, family } => {
                for k in &self.members(&index)?.items {
                    if let Some(fiber) = self.type_fiber(&family, k)? {
                        if self.provably_empty(&fiber)? {
                            return Ok(true);
                        }
                    }
                }
                false
            }
        })
    }

    /// The value of `family` on every argument, if a parametric run shows
    /// that it never looks at its argument.
    pub fn constant_fiber(&self, family: &Code) -> Option<Code> {
        match run_opaque(family, &OPAQUE_MARKER, self.fuel()).outcome {
            Outcome::Value(v) if !v.contains(&OPAQUE_MARKER) => Some(v),
            _ => None,
        }
    }

    /// Constructs some `k` with `k ∈̇ t` (verified by [`Universe::din`]).
    pub fn find_member(&self, t: &Code) -> Result<Option<Code>, UniverseError> {
        let candidate = match self.view(t)? {
            TypeView::Fin(n) => (!n.is_zero()).then(Code::zero),
            TypeView::Nat => Some(Code::zero()),
            TypeView::Dist => self.path.as_ref().map(|_| Code::zero()),
            TypeView::Sigma { index, family } => {
                let mut candidates = self.members(&index)?.items;
                if candidates.is_empty() {
                    // function types are not enumerable, but may have a
                    // constructible member
                    candidates.extend(self.find_member(&index)?);
                }
                let mut found = None;
                for k in &candidates {
                    if let Some(fiber) = self.type_fiber(&family, k)? {
                        if let Some(u) = self.find_member(&fiber)? {
                            found = Some(Code::pair(k.clone(), u));
                            break;
                        }
                    }
                }
                found
            }
            TypeView::Pi { index, family } => {
                let members = self.members(&index)?;
                if members.coverage != Coverage::Exhaustive {
                    return Ok(None);
                }
                let mut entries = Vec::with_capacity(members.items.len());
                for k in &members.items {
                    let Some(fiber) = self.type_fiber(&family, k)? else {
                        return Ok(None);
                    };
                    let Some(u) = self.find_member(&fiber)? else {
                        return Ok(None);
                    };
                    entries.push((k.clone(), u));
                }
                Some(crate::pca::library::table(&entries, &Code::zero()))
            }
        };
        Ok(match candidate {
            Some(k) if self.din(&k, t)?.is_realized() => Some(k),
            _ => None,
        })
    }

    /// Rules 0–3: `t ∈ U`.
    pub fn check_in_u(&self, t: &Code) -> Verdict {
        if let Some(v) = self.in_u_memo.lock().get(t) {
            return v.clone();
        }
        let v = self.check_in_u_uncached(t);
        self.in_u_memo.lock().insert(t.clone(), v.clone());
        v
    }

    fn check_in_u_uncached(&self, t: &Code) -> Verdict {
        let (index, family) = match TypeView::of(t) {
            None => return Verdict::Refuted,
            Some(TypeView::Fin(_) | TypeView::Nat | TypeView::Dist) => return Verdict::Realized,
            Some(TypeView::Sigma { index, family } | TypeView::Pi { index, family }) => {
                (index, family)
            }
        };
        match self.check_in_u(&index) {
            Verdict::Realized => {}
            other => return other,
        }
        self.family_clause(&index, &family, |fiber| self.check_in_u(fiber))
    }

    /// `∀k (k ∉̇ n ∨ (ek ↓ ∧ check(ek)))` over the enumerable part of `n`.
    fn family_clause(
        &self,
        index: &Code,
        family: &Code,
        check: impl Fn(&Code) -> Verdict,
    ) -> Verdict {
        let members = match self.members(index) {
            Ok(m) => m,
            Err(e) => return Verdict::unknown(e.to_string()),
        };
        let mut pending: Option<String> = None;
        for k in &members.items {
            match self.fiber(family, k) {
                Fiber::Diverges => return Verdict::Refuted,
                Fiber::OutOfFuel => {
                    pending.get_or_insert_with(|| format!("family out of fuel at {k}"));
                }
                Fiber::Value(v) => match check(&v) {
                    Verdict::Refuted => return Verdict::Refuted,
                    Verdict::Unknown(r) => {
                        pending.get_or_insert(r);
                    }
                    Verdict::Realized => {}
                },
            }
        }
        match (pending, members.coverage) {
            (Some(r), _) => Verdict::Unknown(r),
            (None, Coverage::Exhaustive) => Verdict::Realized,
            (None, _) => Verdict::unknown("index type not exhausted by the truncation"),
        }
    }

    /// Rule 4: `a ∈ V`.
    ///
    /// Element maps among the library's numeral-producing programs
    /// (`x ↦ x^V`, `t ↦ (l_s t)^V`, the graph of the internal pairing) are
    /// V-valued on every argument by construction, so the element clause is
    /// accepted for them without enumerating the index type.
    pub fn check_in_v(&self, a: &Code) -> Verdict {
        if let Some(v) = self.in_v_memo.lock().get(a) {
            return v.clone();
        }
        let v = self.check_in_v_uncached(a);
        self.in_v_memo.lock().insert(a.clone(), v.clone());
        v
    }

    fn check_in_v_uncached(&self, a: &Code) -> Verdict {
        let (index, map) = a.unpair();
        match self.check_in_u(&index) {
            Verdict::Realized => {}
            other => return other,
        }
        let lib = library();
        if map == lib.numeral_map || map == lib.alpha0_map || map == lib.pbar_map {
            return Verdict::Realized;
        }
        self.family_clause(&index, &map, |elem| self.check_in_v(elem))
    }
}
