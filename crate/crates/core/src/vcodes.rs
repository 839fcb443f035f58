//! Canonical set codes: numerals, `ω`, pairs, the equality types `≐` / `⊆̇`,
//! the internal pairing function `p̄`, `α₀` and the family `f₀`.
//!
//! Every builder here assembles the code natively; the same codes are
//! produced by running the library programs in the pca (the `*_via_pca`
//! functions), which the tests compare bit for bit.

use std::fmt;

use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::Code;
use crate::diagonal::seq::SeqCode;
use crate::pca::lambda::{app, apps, closure, compile, lam, lit, pr, prim, var, Expr};
use crate::pca::library::{library, table};
use crate::pca::machine::apply_all;
use crate::pca::term::{closure_code, encode};
use crate::pca::{apply, AppResult, Fuel, Prim};
use crate::universe::{TypeCode, Universe};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VCodeError {
    #[error("computation ran out of fuel")]
    OutOfFuel,
    #[error("segment of length {needed} requested, but only {available} components of h are known")]
    PathUnavailable { needed: u64, available: u64 },
    #[error("no prefix of h is available")]
    NoPath,
}

/// A set code `p n e`: index type `n`, element map `e`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VCode(pub Code);

impl VCode {
    pub fn new(index: &Code, map: &Code) -> VCode {
        VCode(Code::pair(index.clone(), map.clone()))
    }

    pub fn code(&self) -> &Code {
        &self.0
    }

    pub fn index(&self) -> Code {
        self.0.left()
    }

    pub fn map(&self) -> Code {
        self.0.right()
    }

    /// `p₁ α k`
    pub fn element(&self, k: &Code, fuel: Fuel) -> Result<VCode, VCodeError> {
        match apply(&self.map(), k, fuel) {
            AppResult::Value(v) => Ok(VCode(v)),
            AppResult::OutOfFuel => Err(VCodeError::OutOfFuel),
        }
    }
}

impl fmt::Debug for VCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VCode({})", self.0)
    }
}

impl fmt::Display for VCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<VCode> for Code {
    fn from(v: VCode) -> Code {
        v.0
    }
}

/// `n^V = p n̄ (λx. x^V)`
pub fn v_numeral(n: u64) -> VCode {
    v_numeral_code(&Code::small(n))
}

pub fn v_numeral_code(n: &Code) -> VCode {
    VCode::new(&TypeCode::fin(n.clone()).code, &library().numeral_map)
}

/// `ω^V = p ℕ̄ (λx. x^V)`
pub fn v_omega() -> VCode {
    VCode::new(&TypeCode::nat().code, &library().numeral_map)
}

/// `{a, b}^V = p 2̄ (λx. d a b x 0)`
pub fn v_upair(a: &VCode, b: &VCode) -> VCode {
    let map = closure_code(&library().upair_select, &[a.0.clone(), b.0.clone()]);
    VCode::new(&TypeCode::fin(2u64).code, &map)
}

/// `⟨a, b⟩^V = {{a, a}^V, {a, b}^V}^V`
pub fn v_opair(a: &VCode, b: &VCode) -> VCode {
    v_upair(&v_upair(a, a), &v_upair(a, b))
}

/// `{e₀, ..., e_{n-1}}` indexed by `Fin(n)` through a lookup table.
pub fn v_finite(elements: &[VCode]) -> VCode {
    let entries: Vec<(Code, Code)> = elements
        .iter()
        .enumerate()
        .map(|(k, e)| (Code::from(k), e.0.clone()))
        .collect();
    let map = table(&entries, &Code::zero());
    VCode::new(&TypeCode::fin(elements.len()).code, &map)
}

/// `p̄ = p ℕ̄ (λx. ⟨⟨(p₀x)^V, (p₁x)^V⟩^V, x^V⟩^V)`
pub fn internal_pair_fn() -> VCode {
    VCode::new(&TypeCode::nat().code, &library().pbar_map)
}

/// `α₀ = p X̄ (λt. (l_s t)^V)`
pub fn alpha0() -> VCode {
    VCode::new(&TypeCode::dist().code, &library().alpha0_map)
}

/// [`alpha0`], provided the universe knows a prefix of `h` reaching the
/// segment bound.
pub fn alpha0_in(universe: &Universe) -> Result<VCode, VCodeError> {
    let h = universe.path().ok_or(VCodeError::NoPath)?;
    let needed = universe.truncation().segment_bound;
    if (h.len() as u64) < needed {
        return Err(VCodeError::PathUnavailable {
            needed,
            available: h.len() as u64,
        });
    }
    Ok(alpha0())
}

/// `α ⊆̇ β = π (p₀α) (λx. σ (p₀β) (λy. p₁αx ≐ p₁βy))`
pub fn subeq_type(a: &VCode, b: &VCode) -> Code {
    let lib = library();
    let family = closure_code(&lib.eq_family_x, &[lib.eq.clone(), a.0.clone(), b.0.clone()]);
    TypeCode::pi(&a.index(), &family).code
}

/// `α ≐ β = σ (α ⊆̇ β) (λx. β ⊆̇ α)`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EqType {
    pub lhs: VCode,
    pub rhs: VCode,
    pub code: Code,
}

pub fn eq_type(a: &VCode, b: &VCode) -> EqType {
    let lib = library();
    let family = closure_code(&lib.eq_family_sym, &[lib.eq.clone(), a.0.clone(), b.0.clone()]);
    EqType {
        lhs: a.clone(),
        rhs: b.clone(),
        code: TypeCode::sigma(&subeq_type(a, b), &family).code,
    }
}

/// `α ≐ β` computed by running the fixpoint program.
pub fn eq_type_via_pca(a: &VCode, b: &VCode, fuel: Fuel) -> Result<Code, VCodeError> {
    apply_all(&library().eq, &[a.0.clone(), b.0.clone()], fuel)
        .value()
        .ok_or(VCodeError::OutOfFuel)
}

/// `α ⊆̇ β` computed by running the library program.
pub fn subeq_type_via_pca(a: &VCode, b: &VCode, fuel: Fuel) -> Result<Code, VCodeError> {
    let lib = library();
    apply_all(&lib.subeq_body, &[lib.eq.clone(), a.0.clone(), b.0.clone()], fuel)
        .value()
        .ok_or(VCodeError::OutOfFuel)
}

fn compiled(e: &Expr) -> Code {
    encode(&compile(e).expect("closed program"))
}

struct F0Programs {
    symmetry: Code,
    member_eq: Code,
    member_t: Code,
    fiber_k: Code,
    fiber_n: Code,
    first_numeral: Code,
    equality: Code,
}

static F0: Lazy<F0Programs> = Lazy::new(|| {
    let lib = library();
    let l = |c: &Code| lit(c.clone());
    let v = var;
    let call = |f: &Code, args: Vec<Expr>| apps(l(f), args);
    let num = |e: Expr| call(&lib.numeral_map, vec![e]);
    let p0 = |e: Expr| app(prim(Prim::Proj0), e);
    let p1 = |e: Expr| app(prim(Prim::Proj1), e);
    let dist = TypeCode::dist().code;
    let nat = TypeCode::nat().code;

    let symmetry = compiled(&lam(&["e"], pr(p1(v("e")), p0(v("e")))));
    // i k a t ↦ p̄ a ≐ ⟨⟨i^V, k^V⟩^V, (l_s t)^V⟩^V
    let member_eq = compiled(&lam(
        &["i", "k", "a", "t"],
        call(
            &lib.eq,
            vec![
                apps(l(&lib.pbar_map), [v("a")]),
                call(
                    &lib.opair,
                    vec![
                        call(&lib.opair, vec![num(v("i")), num(v("k"))]),
                        num(p0(v("t"))),
                    ],
                ),
            ],
        ),
    ));
    // i k a ↦ σ X̄ (member_eq i k a)
    let member_t = compiled(&lam(
        &["i", "k", "a"],
        pr(
            lit(2u64),
            pr(l(&dist), closure(l(&member_eq), [v("i"), v("k"), v("a")])),
        ),
    ));
    // i n k ↦ σ ℕ̄ (member_t i k): realisers of "p̄(i^V, k^V) ∈ α₀"
    let fiber_k = compiled(&lam(
        &["i", "n", "k"],
        pr(lit(2u64), pr(l(&nat), closure(l(&member_t), [v("i"), v("k")]))),
    ));
    // i n ↦ π n̄ (fiber_k i n)
    let fiber_n = compiled(&lam(
        &["i", "n"],
        pr(
            lit(3u64),
            pr(pr(lit(0u64), v("n")), closure(l(&fiber_k), [v("i"), v("n")])),
        ),
    ));
    let first_numeral = compiled(&lam(&["z"], num(p0(v("z")))));
    let equality = compiled(&lam(&["i", "k"], l(&lib.iota)));
    F0Programs {
        equality,
        symmetry,
        member_eq,
        member_t,
        fiber_k,
        fiber_n,
        first_numeral,
    }
});

/// `λe. p (p₁e) (p₀e)`: turns realisers of `α = β` into realisers of `β = α`.
pub fn symmetry_realiser() -> Code {
    F0.symmetry.clone()
}

/// Type of realisers of `p̄(i^V, k^V) ∈ α₀` read as
/// `∃x ∈ p̄ ∃n ∈ α₀ x = ⟨⟨i^V, k^V⟩, n⟩`.
pub fn f0_membership_type(i: u64, k: u64) -> Code {
    let member_t = closure_code(&F0.member_t, &[Code::small(i), Code::small(k)]);
    TypeCode::sigma(&TypeCode::nat().code, &member_t).code
}

/// `f₀(i) = {n ∈ ω : ∀k ∈ n p̄(i^V, k^V) ∈ α₀}`, coded by separation: the
/// index type pairs `n` with a realiser of the defining condition.
pub fn f0(i: u64) -> VCode {
    let fiber_n = closure_code(&F0.fiber_n, &[Code::small(i)]);
    let index = TypeCode::sigma(&TypeCode::nat().code, &fiber_n).code;
    VCode::new(&index, &F0.first_numeral)
}

/// Realiser of `p̄(i^V, k^V) ∈ α₀`:
/// `p (p i k) (p (t_s h (p i k)) ι)`.
///
/// The `p̄` element at `pair(i, k)` and the ordered pair built from the
/// numerals are the same code, so `ι` realises the equality.
pub fn f0_membership_realiser(i: u64, k: u64, h: &SeqCode) -> Result<Code, VCodeError> {
    let ik = Code::pair(Code::small(i), Code::small(k));
    let needed = ik.as_u64().unwrap_or(u64::MAX);
    if needed > h.len() as u64 {
        return Err(VCodeError::PathUnavailable {
            needed,
            available: h.len() as u64,
        });
    }
    let segment = h.prefix_code(needed as usize);
    Ok(Code::pair(ik, Code::pair(segment, library().iota.clone())))
}

/// The program `q = λik. ι` giving the equality part of
/// [`f0_membership_realiser`].
pub fn f0_equality_realiser_program() -> Code {
    F0.equality.clone()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    UnorderedPair,
    OrderedPair,
    Numeral(u64),
    Omega,
    InternalPairFn,
    Alpha0,
    F0App(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalCode {
    pub role: Role,
    pub code: VCode,
}

/// The displayed codes, instantiated at small arguments.
pub fn canonical_codes() -> Vec<CanonicalCode> {
    let c = |role, code| CanonicalCode { role, code };
    let (zero, one) = (v_numeral(0), v_numeral(1));
    vec![
        c(Role::UnorderedPair, v_upair(&zero, &one)),
        c(Role::OrderedPair, v_opair(&zero, &one)),
        c(Role::Numeral(0), zero.clone()),
        c(Role::Numeral(1), one.clone()),
        c(Role::Numeral(2), v_numeral(2)),
        c(Role::Omega, v_omega()),
        c(Role::InternalPairFn, internal_pair_fn()),
        c(Role::Alpha0, alpha0()),
        c(Role::F0App(0), f0(0)),
        c(Role::F0App(1), f0(1)),
    ]
}

/// Program codes used by [`f0`], exposed for inspection.
pub fn f0_programs() -> [(&'static str, Code); 4] {
    [
        ("f0-member-eq", F0.member_eq.clone()),
        ("f0-member-t", F0.member_t.clone()),
        ("f0-fiber-k", F0.fiber_k.clone()),
        ("f0-fiber-n", F0.fiber_n.clone()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::universe::{Truncation, Verdict};

    fn u() -> Universe {
        Universe::new(Truncation::default())
    }

    #[test]
    fn numerals_and_omega() {
        assert_eq!(v_numeral(3).index(), Code::pair(Code::small(0), Code::small(3)));
        assert_eq!(v_omega().index(), Code::pair(Code::small(1), Code::small(0)));
        assert_eq!(v_omega().element(&Code::small(2), Fuel::DEFAULT), Ok(v_numeral(2)));
        assert_eq!(u().check_in_v(v_omega().code()), Verdict::Realized);
    }

    #[test]
    fn pairs_select_their_components() {
        let (a, b) = (v_numeral(3), v_numeral(5));
        let pair = v_upair(&a, &b);
        assert_eq!(pair.element(&Code::zero(), Fuel::DEFAULT), Ok(a.clone()));
        assert_eq!(pair.element(&Code::small(1), Fuel::DEFAULT), Ok(b.clone()));
        let via_pca = apply_all(&library().opair, &[a.0.clone(), b.0.clone()], Fuel::DEFAULT);
        assert_eq!(via_pca, AppResult::Value(v_opair(&a, &b).0));
    }

    #[test]
    fn internal_pairing_elements() {
        let at5 = internal_pair_fn().element(&Code::small(5), Fuel::DEFAULT).unwrap();
        let expected = v_opair(&v_opair(&v_numeral(2), &v_numeral(1)), &v_numeral(5));
        assert_eq!(at5, expected);
    }

    #[test]
    fn equality_types_agree_with_the_program() {
        let (a, b) = (v_numeral(2), v_upair(&v_numeral(0), &v_numeral(1)));
        assert_eq!(eq_type_via_pca(&a, &b, Fuel::DEFAULT).unwrap(), eq_type(&a, &b).code);
        assert_eq!(subeq_type_via_pca(&a, &b, Fuel::DEFAULT).unwrap(), subeq_type(&a, &b));
    }

    #[test]
    fn iota_realises_self_equality() {
        let u = u();
        let iota = &library().iota;
        let two = v_numeral(2);
        assert_eq!(u.din(iota, &eq_type(&two, &two).code).unwrap(), Verdict::Realized);
        let empty = eq_type(&v_numeral(0), &v_numeral(1)).code;
        assert_eq!(u.din(iota, &empty).unwrap(), Verdict::Refuted);
        assert_eq!(u.din(&Code::small(17), &empty).unwrap(), Verdict::Refuted);
    }

    #[test]
    fn symmetry_swaps_realisers() {
        let u = u();
        let a = v_numeral(2);
        let b = v_finite(&[v_numeral(1), v_numeral(0)]);
        let r = u.find_member(&eq_type(&a, &b).code).unwrap().expect("2 = {1, 0}");
        let swapped = apply(&symmetry_realiser(), &r, Fuel::DEFAULT).value().unwrap();
        assert_eq!(u.din(&swapped, &eq_type(&b, &a).code).unwrap(), Verdict::Realized);
    }

    #[test]
    fn f0_membership_realiser_layout() {
        let h = SeqCode::from_u64s(&[0; 8]);
        assert_eq!(f0_membership_realiser(0, 0, &h).unwrap().left(), Code::zero());
        assert_eq!(f0_membership_realiser(1, 1, &h).unwrap().left(), Code::small(2));
        assert!(f0_membership_realiser(3, 3, &h).is_err());
        let u = Universe::new(Truncation::default()).with_path(std::sync::Arc::new(h.clone()));
        let r = f0_membership_realiser(1, 1, &h).unwrap();
        assert_eq!(u.din(&r, &f0_membership_type(1, 1)).unwrap(), Verdict::Realized);
        assert_eq!(u.din(&r, &f0_membership_type(1, 0)).unwrap(), Verdict::Refuted);
    }
}
