//! The realisability relation `e ⊩ φ`, checked clause by clause relative to a
//! finite budget.
//!
//! ```text
//! e ⊩ α = β        ≔ e ∈̇ (α ≐ β)
//! e ⊩ α ∈ β        ≔ p₀e ∈̇ p₀β ∧ p₁e ⊩ α = p₁β(p₀e)
//! e ⊩ ¬φ           ≔ ∀d ¬(d ⊩ φ)
//! e ⊩ φ ∧ ψ        ≔ p₀e ⊩ φ ∧ p₁e ⊩ ψ
//! e ⊩ φ ∨ ψ        ≔ (p₀e = 0 ∧ p₁e ⊩ φ) ∨ (p₀e = 1 ∧ p₁e ⊩ ψ)
//! e ⊩ φ → ψ        ≔ ∀d (d ⊩ φ → ed↓ ∧ ed ⊩ ψ)
//! e ⊩ ∀x ∈ α φ(x)  ≔ ∀i ∈̇ p₀α (ei↓ ∧ ei ⊩ φ(p₁αi))
//! e ⊩ ∃x ∈ α φ(x)  ≔ p₀e ∈̇ p₀α ∧ p₁e ⊩ φ(p₁α(p₀e))
//! e ⊩ ∀x φ(x)      ≔ ∀α ∈ V (eα↓ ∧ eα ⊩ φ(α))
//! e ⊩ ∃x φ(x)      ≔ p₀e ∈ V ∧ p₁e ⊩ φ(p₀e)
//! ```
//!
//! Clauses quantifying over all realisers (`¬`, `→`) are decided only when
//! a structural argument settles them: the formula provably has no
//! realiser, a realiser is exhibited, or a parametric run shows that `e`
//! ignores its argument. Bounded quantifiers over truncated index types and
//! unbounded quantifiers are reported together with the assumptions they
//! rest on.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::Code;
use crate::diagonal::seq::SeqCode;
use crate::lworld::HFSet;
use crate::pca::lambda::{app, apps, compile, identity, lam, lit, pr, prim, var};
use crate::pca::library::{library, table};
use crate::pca::machine::{run, run_opaque, Outcome};
use crate::pca::term::{closure_code, encode};
use crate::pca::{Fuel, Prim};
use crate::universe::{
    Coverage, Truncation, TypeView, Universe, UniverseError, Verdict, OPAQUE_MARKER,
};
use crate::vcodes::{
    alpha0, eq_type, f0, internal_pair_fn, v_finite, v_numeral, v_omega, v_opair, v_upair, VCode,
    VCodeError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealizabilityError {
    #[error("variable {0} is not bound")]
    Unbound(String),
    #[error("{0} is not a numeral code")]
    NotANumeral(VCode),
    #[error(transparent)]
    Universe(#[from] UniverseError),
    #[error(transparent)]
    VCode(#[from] VCodeError),
    #[error("{0} is not indexed by a finite type")]
    NotFinitelyIndexed(VCode),
    #[error("denotation deeper than {0} levels")]
    TooDeep(usize),
    #[error("{0} has no hereditarily finite denotation")]
    NotHereditarilyFinite(String),
    #[error("unbounded quantifiers have no native truth value")]
    Unbounded,
    #[error("no realiser found for {0}")]
    NoRealiser(String),
}

type Result<T> = std::result::Result<T, RealizabilityError>;

/// Terms denoting set codes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SetTerm {
    Var(String),
    /// `n^V`
    Numeral(u64),
    /// `ω^V`
    Omega,
    /// `α₀`
    Alpha0,
    /// `p̄`
    PBar,
    /// `f₀(t)` for a numeral `t`
    F0(Box<SetTerm>),
    /// `{a, b}^V`
    UPair(Box<SetTerm>, Box<SetTerm>),
    /// `⟨a, b⟩^V`
    OPair(Box<SetTerm>, Box<SetTerm>),
    /// `{a₀, ..., a_{n-1}}` indexed by `Fin(n)`
    Finite(Vec<SetTerm>),
    /// A V-code given directly.
    Code(Code),
}

impl SetTerm {
    pub fn var(name: &str) -> SetTerm {
        SetTerm::Var(name.to_owned())
    }

    pub fn upair(a: SetTerm, b: SetTerm) -> SetTerm {
        SetTerm::UPair(Box::new(a), Box::new(b))
    }

    pub fn opair(a: SetTerm, b: SetTerm) -> SetTerm {
        SetTerm::OPair(Box::new(a), Box::new(b))
    }

    pub fn f0(t: SetTerm) -> SetTerm {
        SetTerm::F0(Box::new(t))
    }

    pub fn code(v: &VCode) -> SetTerm {
        SetTerm::Code(v.0.clone())
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            SetTerm::Var(x) => {
                out.insert(x.clone());
            }
            SetTerm::F0(t) => t.collect_vars(out),
            SetTerm::UPair(a, b) | SetTerm::OPair(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            SetTerm::Finite(ts) => ts.iter().for_each(|t| t.collect_vars(out)),
            _ => {}
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    /// The V-code denoted under `env`.
    pub fn eval(&self, env: &Env) -> Result<VCode> {
        Ok(match self {
            SetTerm::Var(x) => env
                .get(x)
                .cloned()
                .ok_or_else(|| RealizabilityError::Unbound(x.clone()))?,
            SetTerm::Numeral(n) => v_numeral(*n),
            SetTerm::Omega => v_omega(),
            SetTerm::Alpha0 => alpha0(),
            SetTerm::PBar => internal_pair_fn(),
            SetTerm::F0(t) => f0(numeral_value(&t.eval(env)?)?),
            SetTerm::UPair(a, b) => v_upair(&a.eval(env)?, &b.eval(env)?),
            SetTerm::OPair(a, b) => v_opair(&a.eval(env)?, &b.eval(env)?),
            SetTerm::Finite(ts) => {
                let elems = ts.iter().map(|t| t.eval(env)).collect::<Result<Vec<_>>>()?;
                v_finite(&elems)
            }
            SetTerm::Code(c) => VCode(c.clone()),
        })
    }
}

/// `n` for a canonical numeral code `n^V`.
pub fn numeral_value(v: &VCode) -> Result<u64> {
    if v.map() == library().numeral_map {
        if let Some(TypeView::Fin(n)) = TypeView::of(&v.index()) {
            if let Some(n) = n.as_u64() {
                return Ok(n);
            }
        }
    }
    Err(RealizabilityError::NotANumeral(v.clone()))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Eq(SetTerm, SetTerm),
    In(SetTerm, SetTerm),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    /// `∀x ∈ bound φ`
    BAll(String, SetTerm, Box<Formula>),
    /// `∃x ∈ bound φ`
    BEx(String, SetTerm, Box<Formula>),
    All(String, Box<Formula>),
    Ex(String, Box<Formula>),
}

impl Formula {
    pub fn eq(a: SetTerm, b: SetTerm) -> Formula {
        Formula::Eq(a, b)
    }

    pub fn member(a: SetTerm, b: SetTerm) -> Formula {
        Formula::In(a, b)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, other: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Formula) -> Formula {
        Formula::Or(Box::new(self), Box::new(other))
    }

    pub fn implies(self, other: Formula) -> Formula {
        Formula::Implies(Box::new(self), Box::new(other))
    }

    pub fn ball(x: &str, bound: SetTerm, body: Formula) -> Formula {
        Formula::BAll(x.to_owned(), bound, Box::new(body))
    }

    pub fn bex(x: &str, bound: SetTerm, body: Formula) -> Formula {
        Formula::BEx(x.to_owned(), bound, Box::new(body))
    }

    pub fn all(x: &str, body: Formula) -> Formula {
        Formula::All(x.to_owned(), Box::new(body))
    }

    pub fn ex(x: &str, body: Formula) -> Formula {
        Formula::Ex(x.to_owned(), Box::new(body))
    }

    /// `a ⊆ b` as `∀z ∈ a z ∈ b`, with `z` fresh for `b`.
    pub fn subset(a: SetTerm, b: SetTerm) -> Formula {
        let taken = b.free_vars();
        let z = (0..)
            .map(|k| if k == 0 { "z".to_owned() } else { format!("z{k}") })
            .find(|z| !taken.contains(z))
            .expect("infinitely many names");
        Formula::BAll(z.clone(), a, Box::new(Formula::In(SetTerm::Var(z), b)))
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let term = |t: &SetTerm, bound: &Vec<String>, out: &mut BTreeSet<String>| {
            for x in t.free_vars() {
                if !bound.contains(&x) {
                    out.insert(x);
                }
            }
        };
        match self {
            Formula::Eq(a, b) | Formula::In(a, b) => {
                term(a, bound, out);
                term(b, bound, out);
            }
            Formula::Not(p) => p.collect_free(bound, out),
            Formula::And(p, q) | Formula::Or(p, q) | Formula::Implies(p, q) => {
                p.collect_free(bound, out);
                q.collect_free(bound, out);
            }
            Formula::BAll(x, t, p) | Formula::BEx(x, t, p) => {
                term(t, bound, out);
                bound.push(x.clone());
                p.collect_free(bound, out);
                bound.pop();
            }
            Formula::All(x, p) | Formula::Ex(x, p) => {
                bound.push(x.clone());
                p.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    /// Connective and quantifier nesting depth.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Eq(..) | Formula::In(..) => 0,
            Formula::Not(p)
            | Formula::BAll(_, _, p)
            | Formula::BEx(_, _, p)
            | Formula::All(_, p)
            | Formula::Ex(_, p) => 1 + p.depth(),
            Formula::And(p, q) | Formula::Or(p, q) | Formula::Implies(p, q) => {
                1 + p.depth().max(q.depth())
            }
        }
    }

    /// No unbounded quantifiers.
    pub fn is_delta0(&self) -> bool {
        match self {
            Formula::Eq(..) | Formula::In(..) => true,
            Formula::Not(p) | Formula::BAll(_, _, p) | Formula::BEx(_, _, p) => p.is_delta0(),
            Formula::And(p, q) | Formula::Or(p, q) | Formula::Implies(p, q) => {
                p.is_delta0() && q.is_delta0()
            }
            Formula::All(..) | Formula::Ex(..) => false,
        }
    }

    /// Replaces every term not mentioning a locally bound variable by the
    /// code it denotes under `env`.
    pub fn instantiate(&self, env: &Env) -> Result<Formula> {
        self.instantiate_under(env, &mut Vec::new())
    }

    fn instantiate_under(&self, env: &Env, bound: &mut Vec<String>) -> Result<Formula> {
        let t = |t: &SetTerm, bound: &Vec<String>| resolve_term(t, env, bound);
        Ok(match self {
            Formula::Eq(a, b) => Formula::Eq(t(a, bound)?, t(b, bound)?),
            Formula::In(a, b) => Formula::In(t(a, bound)?, t(b, bound)?),
            Formula::Not(p) => p.instantiate_under(env, bound)?.not(),
            Formula::And(p, q) => {
                p.instantiate_under(env, bound)?.and(q.instantiate_under(env, bound)?)
            }
            Formula::Or(p, q) => p.instantiate_under(env, bound)?.or(q.instantiate_under(env, bound)?),
            Formula::Implies(p, q) => {
                p.instantiate_under(env, bound)?.implies(q.instantiate_under(env, bound)?)
            }
            Formula::BAll(x, b, p) | Formula::BEx(x, b, p) => {
                let b = t(b, bound)?;
                bound.push(x.clone());
                let p = p.instantiate_under(env, bound);
                bound.pop();
                let p = Box::new(p?);
                match self {
                    Formula::BAll(..) => Formula::BAll(x.clone(), b, p),
                    _ => Formula::BEx(x.clone(), b, p),
                }
            }
            Formula::All(x, p) | Formula::Ex(x, p) => {
                bound.push(x.clone());
                let p = p.instantiate_under(env, bound);
                bound.pop();
                let p = Box::new(p?);
                match self {
                    Formula::All(..) => Formula::All(x.clone(), p),
                    _ => Formula::Ex(x.clone(), p),
                }
            }
        })
    }
}

fn resolve_term(t: &SetTerm, env: &Env, bound: &[String]) -> Result<SetTerm> {
    if t.free_vars().iter().all(|x| !bound.contains(x)) {
        return Ok(SetTerm::Code(t.eval(env)?.0));
    }
    let r = |t: &SetTerm| resolve_term(t, env, bound).map(Box::new);
    Ok(match t {
        SetTerm::F0(a) => SetTerm::F0(r(a)?),
        SetTerm::UPair(a, b) => SetTerm::UPair(r(a)?, r(b)?),
        SetTerm::OPair(a, b) => SetTerm::OPair(r(a)?, r(b)?),
        SetTerm::Finite(ts) => SetTerm::Finite(
            ts.iter()
                .map(|t| resolve_term(t, env, bound))
                .collect::<Result<_>>()?,
        ),
        other => other.clone(),
    })
}

impl fmt::Display for SetTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetTerm::Var(x) => f.write_str(x),
            SetTerm::Numeral(n) => write!(f, "{n}"),
            SetTerm::Omega => f.write_str("omega"),
            SetTerm::Alpha0 => f.write_str("alpha0"),
            SetTerm::PBar => f.write_str("pbar"),
            SetTerm::F0(t) => write!(f, "(f0 {t})"),
            SetTerm::UPair(a, b) => write!(f, "(upair {a} {b})"),
            SetTerm::OPair(a, b) => write!(f, "(opair {a} {b})"),
            SetTerm::Finite(ts) => {
                f.write_str("(set")?;
                for t in ts {
                    write!(f, " {t}")?;
                }
                f.write_str(")")
            }
            SetTerm::Code(c) => write!(f, "(code {c})"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Eq(a, b) => write!(f, "(= {a} {b})"),
            Formula::In(a, b) => write!(f, "(in {a} {b})"),
            Formula::Not(p) => write!(f, "(not {p})"),
            Formula::And(p, q) => write!(f, "(and {p} {q})"),
            Formula::Or(p, q) => write!(f, "(or {p} {q})"),
            Formula::Implies(p, q) => write!(f, "(-> {p} {q})"),
            Formula::BAll(x, t, p) => write!(f, "(all {x} {t} {p})"),
            Formula::BEx(x, t, p) => write!(f, "(ex {x} {t} {p})"),
            Formula::All(x, p) => write!(f, "(ALL {x} {p})"),
            Formula::Ex(x, p) => write!(f, "(EX {x} {p})"),
        }
    }
}

pub type Env = BTreeMap<String, VCode>;

fn extend(env: &Env, x: &str, v: VCode) -> Env {
    let mut env = env.clone();
    env.insert(x.to_owned(), v);
    env
}

/// Declares instantiated formulas unrealisable on grounds established
/// elsewhere (for instance by the diagonal construction). Returns the
/// justification to report.
#[derive(Clone)]
pub struct AntecedentOracle(Arc<OracleFn>);

type OracleFn = dyn Fn(&Formula) -> Option<String> + Send + Sync;

impl AntecedentOracle {
    pub fn new(f: impl Fn(&Formula) -> Option<String> + Send + Sync + 'static) -> Self {
        AntecedentOracle(Arc::new(f))
    }

    pub fn consult(&self, phi: &Formula) -> Option<String> {
        (self.0)(phi)
    }
}

impl fmt::Debug for AntecedentOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("AntecedentOracle(..)")
    }
}

#[derive(Debug, Clone)]
pub struct CheckBudget {
    pub truncation: Truncation,
    /// Codes `0..antecedent_search` are tried as antecedent realisers when
    /// looking for a counterexample to an implication.
    pub antecedent_search: u64,
    /// Stand-in for `V` in unbounded quantifier clauses.
    pub family: Vec<VCode>,
    pub oracle: Option<AntecedentOracle>,
}

impl Default for CheckBudget {
    fn default() -> Self {
        CheckBudget {
            truncation: Truncation::default(),
            antecedent_search: 32,
            family: vec![v_numeral(0), v_numeral(1), v_numeral(2), v_omega()],
            oracle: None,
        }
    }
}

impl CheckBudget {
    pub fn with_truncation(truncation: Truncation) -> Self {
        CheckBudget {
            truncation,
            ..CheckBudget::default()
        }
    }
}

/// A verdict together with the assumptions it is relative to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    #[serde(flatten)]
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

impl Report {
    /// Decided without relying on a truncation, family or oracle.
    pub fn is_absolute(&self) -> bool {
        self.notes.is_empty()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.verdict)?;
        for n in &self.notes {
            write!(f, "\n  relative to: {n}")?;
        }
        Ok(())
    }
}

type Notes = BTreeSet<String>;

fn and3(a: Verdict, b: impl FnOnce() -> Result<Verdict>) -> Result<Verdict> {
    if a.is_refuted() {
        return Ok(a);
    }
    let b = b()?;
    Ok(match (a, b) {
        (_, Verdict::Refuted) => Verdict::Refuted,
        (Verdict::Realized, Verdict::Realized) => Verdict::Realized,
        (Verdict::Unknown(r), _) | (_, Verdict::Unknown(r)) => Verdict::Unknown(r),
        _ => unreachable!("all combinations covered"),
    })
}

fn unknown_from(e: RealizabilityError) -> Result<Verdict> {
    match e {
        RealizabilityError::Unbound(_) => Err(e),
        other => Ok(Verdict::unknown(other.to_string())),
    }
}

/// A code `c` with `c d = r` for every `d`.
pub fn constant_program(r: &Code) -> Code {
    closure_code(&Prim::K.code(), std::slice::from_ref(r))
}

/// Clause-by-clause checker over a shared, memoizing [`Universe`].
#[derive(Debug, Clone)]
pub struct Checker {
    budget: CheckBudget,
    universe: Arc<Universe>,
}

impl Checker {
    pub fn new(budget: CheckBudget) -> Checker {
        let universe = Arc::new(Universe::new(budget.truncation));
        Checker { budget, universe }
    }

    /// A checker whose distinguished type is the given prefix of `h`.
    pub fn with_path(budget: CheckBudget, h: Arc<SeqCode>) -> Checker {
        let universe = Arc::new(Universe::new(budget.truncation).with_path(h));
        Checker { budget, universe }
    }

    pub fn budget(&self) -> &CheckBudget {
        &self.budget
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    fn fuel(&self) -> Fuel {
        self.budget.truncation.fuel
    }

    fn scoped(&self, phi: &Formula, env: &Env) -> Result<()> {
        match phi.free_vars().into_iter().find(|x| !env.contains_key(x)) {
            Some(x) => Err(RealizabilityError::Unbound(x)),
            None => Ok(()),
        }
    }

    /// Does `e ⊩ φ` hold under `env`?
    pub fn check(&self, e: &Code, phi: &Formula, env: &Env) -> Result<Report> {
        self.scoped(phi, env)?;
        let mut notes = Notes::new();
        let verdict = self.check_in(e, phi, env, &mut notes)?;
        Ok(Report {
            verdict,
            notes: notes.into_iter().collect(),
        })
    }

    /// Is `φ` realised by anything? `Realized` comes with a verified
    /// realiser, `Refuted` means no code realises `φ`.
    pub fn inhabited(&self, phi: &Formula, env: &Env) -> Result<Report> {
        self.scoped(phi, env)?;
        if let Some(r) = self.find_realiser(phi, env)? {
            return self.check(&r, phi, env);
        }
        let verdict = if self.refutes_all(phi, env)? {
            Verdict::Refuted
        } else {
            Verdict::unknown("no realiser constructed and none excluded")
        };
        Ok(Report {
            verdict,
            notes: Vec::new(),
        })
    }

    /// A realiser of `φ`, built from the structure of the formula and
    /// accepted by [`Checker::check`] without further assumptions.
    pub fn find_realiser(&self, phi: &Formula, env: &Env) -> Result<Option<Code>> {
        self.scoped(phi, env)?;
        let Some(r) = self.construct(phi, env)? else {
            return Ok(None);
        };
        let mut notes = Notes::new();
        let ok = self.check_in(&r, phi, env, &mut notes)?.is_realized() && notes.is_empty();
        Ok(ok.then_some(r))
    }

    fn din(&self, k: &Code, t: &Code) -> Result<Verdict> {
        match self.universe.din(k, t) {
            Ok(v) => Ok(v),
            Err(e) => unknown_from(e.into()),
        }
    }

    fn check_in(&self, e: &Code, phi: &Formula, env: &Env, notes: &mut Notes) -> Result<Verdict> {
        match phi {
            Formula::Eq(a, b) => {
                let (a, b) = (a.eval(env)?, b.eval(env)?);
                self.din(e, &eq_type(&a, &b).code)
            }
            Formula::In(a, b) => {
                let (a, b) = (a.eval(env)?, b.eval(env)?);
                let (i, r) = e.unpair();
                let first = self.din(&i, &b.index())?;
                and3(first, || match b.element(&i, self.fuel()) {
                    Ok(bi) => self.din(&r, &eq_type(&a, &bi).code),
                    Err(err) => unknown_from(err.into()),
                })
            }
            Formula::Not(p) => {
                if self.refutes_all(p, env)? {
                    Ok(Verdict::Realized)
                } else if self.find_realiser(p, env)?.is_some() {
                    Ok(Verdict::Refuted)
                } else {
                    Ok(Verdict::unknown(
                        "negated formula neither refuted nor realised",
                    ))
                }
            }
            Formula::And(p, q) => {
                let (l, r) = e.unpair();
                let first = self.check_in(&l, p, env, notes)?;
                and3(first, || self.check_in(&r, q, env, notes))
            }
            Formula::Or(p, q) => {
                let (tag, r) = e.unpair();
                match tag.as_u64() {
                    Some(0) => self.check_in(&r, p, env, notes),
                    Some(1) => self.check_in(&r, q, env, notes),
                    _ => Ok(Verdict::Refuted),
                }
            }
            Formula::Implies(p, q) => self.check_implies(e, p, q, env, notes),
            Formula::BAll(x, t, p) => {
                let alpha = t.eval(env)?;
                let members = match self.universe.members(&alpha.index()) {
                    Ok(m) => m,
                    Err(err) => return unknown_from(err.into()),
                };
                let mut pending: Option<String> = None;
                for i in &members.items {
                    let v = match run(e, std::slice::from_ref(i), self.fuel()).outcome {
                        Outcome::Value(v) => v,
                        Outcome::Diverges => return Ok(Verdict::Refuted),
                        _ => {
                            pending.get_or_insert_with(|| format!("application to {i} out of fuel"));
                            continue;
                        }
                    };
                    let elem = match alpha.element(i, self.fuel()) {
                        Ok(a) => a,
                        Err(err) => {
                            pending.get_or_insert(err.to_string());
                            continue;
                        }
                    };
                    match self.check_in(&v, p, &extend(env, x, elem), notes)? {
                        Verdict::Refuted => return Ok(Verdict::Refuted),
                        Verdict::Unknown(r) => {
                            pending.get_or_insert(r);
                        }
                        Verdict::Realized => {}
                    }
                }
                Ok(match (pending, members.coverage) {
                    (Some(r), _) => Verdict::Unknown(r),
                    (None, Coverage::Exhaustive) => Verdict::Realized,
                    (None, Coverage::Truncated) => {
                        notes.insert(format!(
                            "∀{x} ∈ {t} checked on the {} members within the truncation",
                            members.items.len()
                        ));
                        Verdict::Realized
                    }
                    (None, Coverage::Opaque) => {
                        Verdict::unknown(format!("index type of {t} is not enumerable"))
                    }
                })
            }
            Formula::BEx(x, t, p) => {
                let alpha = t.eval(env)?;
                let (i, r) = e.unpair();
                let first = self.din(&i, &alpha.index())?;
                and3(first, || match alpha.element(&i, self.fuel()) {
                    Ok(elem) => self.check_in(&r, p, &extend(env, x, elem), notes),
                    Err(err) => unknown_from(err.into()),
                })
            }
            Formula::All(x, p) => {
                let mut pending = None;
                for alpha in &self.budget.family {
                    if !self.universe.check_in_v(&alpha.0).is_realized() {
                        continue;
                    }
                    let v = match run(e, std::slice::from_ref(&alpha.0), self.fuel()).outcome {
                        Outcome::Value(v) => v,
                        Outcome::Diverges => return Ok(Verdict::Refuted),
                        _ => {
                            pending.get_or_insert_with(|| format!("application to {alpha} out of fuel"));
                            continue;
                        }
                    };
                    match self.check_in(&v, p, &extend(env, x, alpha.clone()), notes)? {
                        Verdict::Refuted => return Ok(Verdict::Refuted),
                        Verdict::Unknown(r) => {
                            pending.get_or_insert(r);
                        }
                        Verdict::Realized => {}
                    }
                }
                Ok(Verdict::Unknown(pending.unwrap_or_else(|| {
                    format!(
                        "∀{x} holds relative to a family of {} codes only",
                        self.budget.family.len()
                    )
                })))
            }
            Formula::Ex(x, p) => {
                let (a, r) = e.unpair();
                let first = self.universe.check_in_v(&a);
                and3(first, || self.check_in(&r, p, &extend(env, x, VCode(a.clone())), notes))
            }
        }
    }

    fn check_implies(
        &self,
        e: &Code,
        p: &Formula,
        q: &Formula,
        env: &Env,
        notes: &mut Notes,
    ) -> Result<Verdict> {
        if self.refutes_all(p, env)? {
            return Ok(Verdict::Realized);
        }
        if let Some(oracle) = &self.budget.oracle {
            if let Some(why) = oracle.consult(&p.instantiate(env)?) {
                notes.insert(why);
                return Ok(Verdict::Realized);
            }
        }
        let antecedent_realised = |this: &Self| this.find_realiser(p, env).map(|r| r.is_some());
        match run_opaque(e, &OPAQUE_MARKER, self.fuel()).outcome {
            // e d = v for every d
            Outcome::Value(v) if !v.contains(&OPAQUE_MARKER) => {
                return match self.check_in(&v, q, env, notes)? {
                    Verdict::Refuted if antecedent_realised(self)? => Ok(Verdict::Refuted),
                    Verdict::Refuted => Ok(Verdict::unknown(
                        "constant consequent fails, antecedent not shown realisable",
                    )),
                    other => Ok(other),
                };
            }
            // e d = d for every d
            Outcome::Value(v) if v == *OPAQUE_MARKER => {
                if p.instantiate(env)? == q.instantiate(env)? {
                    return Ok(Verdict::Realized);
                }
            }
            Outcome::Diverges => {
                return Ok(if antecedent_realised(self)? {
                    Verdict::Refuted
                } else {
                    Verdict::unknown("diverges everywhere, antecedent not shown realisable")
                });
            }
            _ => {}
        }
        // look for a realised antecedent that e mishandles
        let mut candidates: Vec<Code> = self.construct(p, env)?.into_iter().collect();
        candidates.extend((0..self.budget.antecedent_search).map(Code::small));
        let mut tried = 0usize;
        for d in candidates {
            let mut scratch = Notes::new();
            if !(self.check_in(&d, p, env, &mut scratch)?.is_realized() && scratch.is_empty()) {
                continue;
            }
            tried += 1;
            match run(e, std::slice::from_ref(&d), self.fuel()).outcome {
                Outcome::Diverges => return Ok(Verdict::Refuted),
                Outcome::Value(v) => {
                    let mut scratch = Notes::new();
                    let verdict = self.check_in(&v, q, env, &mut scratch)?;
                    if verdict.is_refuted() && scratch.is_empty() {
                        return Ok(Verdict::Refuted);
                    }
                }
                _ => {}
            }
        }
        Ok(Verdict::unknown(format!(
            "no counterexample among {tried} antecedent realisers"
        )))
    }

    /// A candidate realiser, following the structure of `φ`.
    fn construct(&self, phi: &Formula, env: &Env) -> Result<Option<Code>> {
        let fuel = self.fuel();
        Ok(match phi {
            Formula::Eq(a, b) => {
                let (a, b) = (a.eval(env)?, b.eval(env)?);
                self.universe.find_member(&eq_type(&a, &b).code).ok().flatten()
            }
            Formula::In(a, b) => {
                let (a, b) = (a.eval(env)?, b.eval(env)?);
                let Ok(members) = self.universe.members(&b.index()) else {
                    return Ok(None);
                };
                let mut found = None;
                for i in &members.items {
                    let Ok(bi) = b.element(i, fuel) else { continue };
                    let t = eq_type(&a, &bi).code;
                    if let Ok(Some(r)) = self.universe.find_member(&t) {
                        found = Some(Code::pair(i.clone(), r));
                        break;
                    }
                }
                found
            }
            Formula::Not(p) => self.refutes_all(p, env)?.then(Code::zero),
            Formula::And(p, q) => match (self.construct(p, env)?, self.construct(q, env)?) {
                (Some(l), Some(r)) => Some(Code::pair(l, r)),
                _ => None,
            },
            Formula::Or(p, q) => match self.construct(p, env)? {
                Some(l) => Some(Code::pair(Code::zero(), l)),
                None => self
                    .construct(q, env)?
                    .map(|r| Code::pair(Code::small(1), r)),
            },
            Formula::Implies(p, q) => {
                if self.refutes_all(p, env)? {
                    Some(Code::zero())
                } else if let Some(r) = self.construct(q, env)? {
                    Some(constant_program(&r))
                } else if p.instantiate(env)? == q.instantiate(env)? {
                    Some(encode(&identity()))
                } else {
                    None
                }
            }
            Formula::BAll(x, t, p) => {
                let alpha = t.eval(env)?;
                let Ok(members) = self.universe.members(&alpha.index()) else {
                    return Ok(None);
                };
                if members.coverage != Coverage::Exhaustive {
                    return Ok(None);
                }
                let mut entries = Vec::with_capacity(members.items.len());
                for i in members.items {
                    let Ok(elem) = alpha.element(&i, fuel) else {
                        return Ok(None);
                    };
                    let Some(r) = self.construct(p, &extend(env, x, elem))? else {
                        return Ok(None);
                    };
                    entries.push((i, r));
                }
                Some(table(&entries, &Code::zero()))
            }
            Formula::BEx(x, t, p) => {
                let alpha = t.eval(env)?;
                let Ok(members) = self.universe.members(&alpha.index()) else {
                    return Ok(None);
                };
                let mut found = None;
                for i in members.items {
                    let Ok(elem) = alpha.element(&i, fuel) else { continue };
                    if let Some(r) = self.construct(p, &extend(env, x, elem))? {
                        found = Some(Code::pair(i, r));
                        break;
                    }
                }
                found
            }
            Formula::All(..) => None,
            Formula::Ex(x, p) => {
                let mut found = None;
                for alpha in &self.budget.family {
                    if !self.universe.check_in_v(&alpha.0).is_realized() {
                        continue;
                    }
                    if let Some(r) = self.construct(p, &extend(env, x, alpha.clone()))? {
                        found = Some(Code::pair(alpha.0.clone(), r));
                        break;
                    }
                }
                found
            }
        })
    }

    /// `true` only if no code realises `φ`.
    pub fn refutes_all(&self, phi: &Formula, env: &Env) -> Result<bool> {
        let fuel = self.fuel();
        let empty = |t: &Code| self.universe.provably_empty(t).unwrap_or(false);
        Ok(match phi {
            Formula::Eq(a, b) => empty(&eq_type(&a.eval(env)?, &b.eval(env)?).code),
            Formula::In(a, b) => {
                let (a, b) = (a.eval(env)?, b.eval(env)?);
                if empty(&b.index()) {
                    return Ok(true);
                }
                let Ok(members) = self.universe.members(&b.index()) else {
                    return Ok(false);
                };
                members.coverage == Coverage::Exhaustive
                    && members.items.iter().all(|i| match b.element(i, fuel) {
                        Ok(bi) => empty(&eq_type(&a, &bi).code),
                        Err(_) => false,
                    })
            }
            Formula::Not(p) => self.find_realiser(p, env)?.is_some(),
            Formula::And(p, q) => self.refutes_all(p, env)? || self.refutes_all(q, env)?,
            Formula::Or(p, q) => self.refutes_all(p, env)? && self.refutes_all(q, env)?,
            Formula::Implies(p, q) => {
                self.refutes_all(q, env)? && self.find_realiser(p, env)?.is_some()
            }
            Formula::BAll(x, t, p) => {
                let alpha = t.eval(env)?;
                let Ok(members) = self.universe.members(&alpha.index()) else {
                    return Ok(false);
                };
                for i in &members.items {
                    let Ok(elem) = alpha.element(i, fuel) else { continue };
                    if self.refutes_all(p, &extend(env, x, elem))? {
                        return Ok(true);
                    }
                }
                false
            }
            Formula::BEx(x, t, p) => {
                let alpha = t.eval(env)?;
                if empty(&alpha.index()) {
                    return Ok(true);
                }
                let Ok(members) = self.universe.members(&alpha.index()) else {
                    return Ok(false);
                };
                if members.coverage != Coverage::Exhaustive {
                    return Ok(false);
                }
                for i in &members.items {
                    let Ok(elem) = alpha.element(i, fuel) else {
                        return Ok(false);
                    };
                    if !self.refutes_all(p, &extend(env, x, elem))? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::All(x, p) => {
                for alpha in &self.budget.family {
                    if self.universe.check_in_v(&alpha.0).is_realized()
                        && self.refutes_all(p, &extend(env, x, alpha.clone()))?
                    {
                        return Ok(true);
                    }
                }
                false
            }
            Formula::Ex(..) => false,
        })
    }
}

/// Deepest code unfolded by [`denotation`].
pub const MAX_DENOTATION_DEPTH: usize = 32;

/// The hereditarily finite set coded by a V-code all of whose index types
/// (hereditarily) are `Fin(n)`.
pub fn denotation(a: &VCode, fuel: Fuel) -> Result<HFSet> {
    denote(a, fuel, 0, &mut HashMap::new())
}

// Codes memoise an ordering lazily; it never affects hashing or equality.
#[allow(clippy::mutable_key_type)]
fn denote(a: &VCode, fuel: Fuel, depth: usize, memo: &mut HashMap<Code, HFSet>) -> Result<HFSet> {
    if let Some(s) = memo.get(&a.0) {
        return Ok(s.clone());
    }
    if depth > MAX_DENOTATION_DEPTH {
        return Err(RealizabilityError::TooDeep(MAX_DENOTATION_DEPTH));
    }
    let n = match TypeView::of(&a.index()) {
        Some(TypeView::Fin(n)) => n
            .as_u64()
            .filter(|&n| n <= crate::universe::MAX_FIN_ENUMERATION)
            .ok_or_else(|| RealizabilityError::NotFinitelyIndexed(a.clone()))?,
        _ => return Err(RealizabilityError::NotFinitelyIndexed(a.clone())),
    };
    let mut elems = Vec::with_capacity(n as usize);
    for k in 0..n {
        let e = a.element(&Code::small(k), fuel)?;
        elems.push(denote(&e, fuel, depth + 1, memo)?);
    }
    let s = HFSet::new(elems);
    memo.insert(a.0.clone(), s.clone());
    Ok(s)
}

fn hf_term(t: &SetTerm, env: &BTreeMap<String, HFSet>, fuel: Fuel) -> Result<HFSet> {
    Ok(match t {
        SetTerm::Var(x) => env
            .get(x)
            .cloned()
            .ok_or_else(|| RealizabilityError::Unbound(x.clone()))?,
        SetTerm::Numeral(n) => HFSet::ordinal(*n as usize),
        SetTerm::UPair(a, b) => HFSet::new([hf_term(a, env, fuel)?, hf_term(b, env, fuel)?]),
        SetTerm::OPair(a, b) => {
            let (a, b) = (hf_term(a, env, fuel)?, hf_term(b, env, fuel)?);
            HFSet::new([HFSet::singleton(a.clone()), HFSet::new([a, b])])
        }
        SetTerm::Finite(ts) => HFSet::new(
            ts.iter()
                .map(|t| hf_term(t, env, fuel))
                .collect::<Result<Vec<_>>>()?,
        ),
        SetTerm::Code(c) => denotation(&VCode(c.clone()), fuel)?,
        SetTerm::Omega | SetTerm::Alpha0 | SetTerm::PBar | SetTerm::F0(_) => {
            return Err(RealizabilityError::NotHereditarilyFinite(t.to_string()))
        }
    })
}

/// Classical truth of a Δ₀ formula in the hereditarily finite sets, with
/// the free variables interpreted by the denotations of their codes.
pub fn native_truth(phi: &Formula, env: &Env, fuel: Fuel) -> Result<bool> {
    let henv = env
        .iter()
        .map(|(x, v)| Ok((x.clone(), denotation(v, fuel)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    truth(phi, &henv, fuel)
}

fn truth(phi: &Formula, env: &BTreeMap<String, HFSet>, fuel: Fuel) -> Result<bool> {
    let bind = |x: &str, v: &HFSet| {
        let mut env = env.clone();
        env.insert(x.to_owned(), v.clone());
        env
    };
    Ok(match phi {
        Formula::Eq(a, b) => hf_term(a, env, fuel)? == hf_term(b, env, fuel)?,
        Formula::In(a, b) => hf_term(b, env, fuel)?.contains(&hf_term(a, env, fuel)?),
        Formula::Not(p) => !truth(p, env, fuel)?,
        Formula::And(p, q) => truth(p, env, fuel)? && truth(q, env, fuel)?,
        Formula::Or(p, q) => truth(p, env, fuel)? || truth(q, env, fuel)?,
        Formula::Implies(p, q) => !truth(p, env, fuel)? || truth(q, env, fuel)?,
        Formula::BAll(x, t, p) => {
            let bound = hf_term(t, env, fuel)?;
            for v in bound.iter() {
                if !truth(p, &bind(x, v), fuel)? {
                    return Ok(false);
                }
            }
            true
        }
        Formula::BEx(x, t, p) => {
            let bound = hf_term(t, env, fuel)?;
            for v in bound.iter() {
                if truth(p, &bind(x, v), fuel)? {
                    return Ok(true);
                }
            }
            false
        }
        Formula::All(..) | Formula::Ex(..) => return Err(RealizabilityError::Unbounded),
    })
}

struct Programs {
    /// `λa x. ⟨x^V, p₁ a x⟩^V`
    graph_map: Code,
    /// `λi. p i ι`
    omega_inclusion: Code,
}

static PROGRAMS: Lazy<Programs> = Lazy::new(|| {
    let lib = library();
    let compiled = |e| encode(&compile(&e).expect("closed program"));
    let graph_map = compiled(lam(
        &["a", "x"],
        apps(
            lit(lib.opair.clone()),
            [
                app(lit(lib.numeral_map.clone()), var("x")),
                app(app(prim(Prim::Proj1), var("a")), var("x")),
            ],
        ),
    ));
    let omega_inclusion = compiled(lam(&["i"], pr(var("i"), lit(lib.iota.clone()))));
    Programs {
        graph_map,
        omega_inclusion,
    }
});

/// `u ⊆ ω`
pub fn subset_of_omega_formula() -> Formula {
    Formula::subset(SetTerm::var("u"), SetTerm::Omega)
}

/// "`f` is a surjection from `u` onto `x`": `f ⊆ u × x`, total on `u`,
/// single-valued, and onto `x`.
pub fn surjection_formula() -> Formula {
    let v = SetTerm::var;
    let pair = |a: &str, b: &str| SetTerm::opair(v(a), v(b));
    let relation = Formula::ball(
        "z",
        v("f"),
        Formula::bex("a", v("u"), Formula::bex("b", v("x"), Formula::eq(v("z"), pair("a", "b")))),
    );
    let total = Formula::ball(
        "a",
        v("u"),
        Formula::bex("b", v("x"), Formula::member(pair("a", "b"), v("f"))),
    );
    let single_valued = Formula::ball(
        "z",
        v("f"),
        Formula::ball(
            "w",
            v("f"),
            Formula::ball(
                "a",
                v("u"),
                Formula::ball(
                    "b",
                    v("x"),
                    Formula::ball(
                        "c",
                        v("x"),
                        Formula::eq(v("z"), pair("a", "b"))
                            .and(Formula::eq(v("w"), pair("a", "c")))
                            .implies(Formula::eq(v("b"), v("c"))),
                    ),
                ),
            ),
        ),
    );
    let onto = Formula::ball(
        "b",
        v("x"),
        Formula::bex("a", v("u"), Formula::member(pair("a", "b"), v("f"))),
    );
    relation.and(total).and(single_valued.and(onto))
}

/// `u ⊆ ω ∧ f is a surjection from u onto x`
pub fn subcountability_formula() -> Formula {
    subset_of_omega_formula().and(surjection_formula())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubcountabilityWitness {
    pub u: VCode,
    pub f: VCode,
    /// Realises [`subcountability_formula`] with `x ↦ α`.
    pub realiser: Code,
}

impl SubcountabilityWitness {
    pub fn env(&self, alpha: &VCode) -> Env {
        Env::from([
            ("u".to_owned(), self.u.clone()),
            ("f".to_owned(), self.f.clone()),
            ("x".to_owned(), alpha.clone()),
        ])
    }
}

/// `u = p (p₀α) (λx. x^V)`, `f = p (p₀α) (λx. ⟨x^V, p₁αx⟩^V)`, and a
/// realiser of the two conjuncts. `u ⊆ ω` is realised uniformly by
/// `λi. p i ι`; the surjection conjunct is realised by a table built
/// over the (finite) index of `α`.
pub fn subcountability_witness(
    alpha: &VCode,
    checker: &Checker,
) -> Result<SubcountabilityWitness> {
    let lib = library();
    let u = VCode::new(&alpha.index(), &lib.numeral_map);
    let f = VCode::new(
        &alpha.index(),
        &closure_code(&PROGRAMS.graph_map, std::slice::from_ref(&alpha.0)),
    );
    let mut w = SubcountabilityWitness {
        u,
        f,
        realiser: Code::zero(),
    };
    let surj = surjection_formula();
    let r = checker
        .find_realiser(&surj, &w.env(alpha))?
        .ok_or_else(|| RealizabilityError::NoRealiser(surj.to_string()))?;
    w.realiser = Code::pair(PROGRAMS.omega_inclusion.clone(), r);
    Ok(w)
}

/// `λijx. ι`
pub fn incomparability_statement_realiser() -> Code {
    library().incomparability.clone()
}

/// `∀i, j ∈ ω (f₀(i) ⊆ f₀(j) → i = j)`
pub fn incomparability_statement() -> Formula {
    let v = SetTerm::var;
    Formula::ball(
        "i",
        SetTerm::Omega,
        Formula::ball(
            "j",
            SetTerm::Omega,
            Formula::subset(SetTerm::f0(v("i")), SetTerm::f0(v("j")))
                .implies(Formula::eq(v("i"), v("j"))),
        ),
    )
}

/// Declares `f₀(i) ⊆ f₀(j)` unrealisable for the listed pairs `i ≠ j`,
/// citing `basis` (typically the outcome of the diagonal refutation).
#[allow(clippy::mutable_key_type)]
pub fn incomparability_oracle(pairs: BTreeSet<(u64, u64)>, basis: String) -> AntecedentOracle {
    let codes: HashMap<Code, u64> = pairs
        .iter()
        .flat_map(|&(i, j)| [i, j])
        .map(|n| (f0(n).0, n))
        .collect();
    AntecedentOracle::new(move |phi| {
        let Formula::BAll(z, SetTerm::Code(a), body) = phi else {
            return None;
        };
        let Formula::In(SetTerm::Var(y), SetTerm::Code(b)) = body.as_ref() else {
            return None;
        };
        if y != z {
            return None;
        }
        let (i, j) = (*codes.get(a)?, *codes.get(b)?);
        (i != j && pairs.contains(&(i, j)))
            .then(|| format!("f0({i}) ⊆ f0({j}) has no realiser: {basis}"))
    })
}

/// `λt. p (l_s t) ι`, the realiser of `∀α ∈ α₀ α ∈ ω^V`.
pub fn alpha0_in_omega_realiser() -> Code {
    library().alpha0_in_omega.clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vcodes::v_numeral;

    fn n(k: u64) -> SetTerm {
        SetTerm::Numeral(k)
    }

    fn checker() -> Checker {
        Checker::new(CheckBudget::default())
    }

    fn iota() -> Code {
        library().iota.clone()
    }

    #[test]
    fn membership_clause() {
        let c = checker();
        let e = Code::pair(Code::zero(), iota());
        let phi = Formula::member(n(0), n(1));
        assert_eq!(c.check(&e, &phi, &Env::new()).unwrap().verdict, Verdict::Realized);
        let bad_index = Code::pair(Code::small(1), iota());
        assert!(c.check(&bad_index, &phi, &Env::new()).unwrap().verdict.is_refuted());
        for e in [Code::zero(), e.clone(), Code::small(12345)] {
            let phi = Formula::member(n(0), n(0));
            assert!(c.check(&e, &phi, &Env::new()).unwrap().verdict.is_refuted());
        }
    }

    #[test]
    fn upair_membership() {
        let c = checker();
        let phi = Formula::member(n(1), SetTerm::upair(n(1), n(3)));
        let e = Code::pair(Code::zero(), iota());
        assert!(c.check(&e, &phi, &Env::new()).unwrap().verdict.is_realized());
    }

    #[test]
    fn one_in_two() {
        let c = checker();
        let phi = Formula::member(n(1), n(2));
        assert!(c
            .check(&Code::pair(Code::small(1), iota()), &phi, &Env::new())
            .unwrap()
            .verdict
            .is_realized());
    }

    #[test]
    fn identity_realises_self_implication() {
        let c = checker();
        let phi = Formula::member(n(0), n(1));
        let e = encode(&identity());
        let imp = phi.clone().implies(phi);
        assert!(c.check(&e, &imp, &Env::new()).unwrap().verdict.is_realized());
    }

    #[test]
    fn connective_clauses() {
        let c = checker();
        let env = Env::new();
        let yes = Formula::eq(n(2), n(2));
        let no = Formula::eq(n(1), n(2));
        let i = iota();
        let and = yes.clone().and(yes.clone());
        assert!(c.check(&Code::pair(i.clone(), i.clone()), &and, &env).unwrap().verdict.is_realized());
        let or = no.clone().or(yes.clone());
        assert!(c.check(&Code::pair(Code::small(1), i.clone()), &or, &env).unwrap().verdict.is_realized());
        assert!(c.check(&Code::pair(Code::zero(), i.clone()), &or, &env).unwrap().verdict.is_refuted());
        // the tag must be exactly 0 or 1
        assert!(c.check(&Code::pair(Code::small(2), i.clone()), &or, &env).unwrap().verdict.is_refuted());
        let neg = no.clone().not();
        assert!(c.check(&Code::small(77), &neg, &env).unwrap().verdict.is_realized());
        assert!(c.check(&Code::small(77), &yes.clone().not(), &env).unwrap().verdict.is_refuted());
        // vacuous implication
        let imp = no.implies(Formula::eq(n(0), n(3)));
        assert!(c.check(&Code::small(5), &imp, &env).unwrap().verdict.is_realized());
    }

    #[test]
    fn bounded_quantifiers() {
        let c = checker();
        let env = Env::new();
        // ∀x ∈ 3 x ∈ ω
        let phi = Formula::ball("x", n(3), Formula::member(SetTerm::var("x"), SetTerm::Omega));
        let e = alpha_like_realiser();
        assert!(c.check(&e, &phi, &env).unwrap().verdict.is_realized());
        // ∃x ∈ 3 x = 2
        let phi = Formula::bex("x", n(3), Formula::eq(SetTerm::var("x"), n(2)));
        assert!(c.check(&Code::pair(Code::small(2), iota()), &phi, &env).unwrap().verdict.is_realized());
        assert!(c.check(&Code::pair(Code::small(1), iota()), &phi, &env).unwrap().verdict.is_refuted());
    }

    fn alpha_like_realiser() -> Code {
        PROGRAMS.omega_inclusion.clone()
    }

    #[test]
    fn unbounded_forall_is_never_realized() {
        let c = checker();
        let phi = Formula::all("x", Formula::eq(SetTerm::var("x"), SetTerm::var("x")));
        let e = constant_program(&iota());
        let r = c.check(&e, &phi, &Env::new()).unwrap();
        assert!(r.verdict.is_unknown());
        let phi = Formula::all("x", Formula::eq(SetTerm::var("x"), n(0)));
        assert!(c.check(&e, &phi, &Env::new()).unwrap().verdict.is_refuted());
    }

    #[test]
    fn unbounded_exists() {
        let c = checker();
        let phi = Formula::ex("x", Formula::member(n(0), SetTerm::var("x")));
        let e = Code::pair(v_numeral(1).0, Code::pair(Code::zero(), iota()));
        assert!(c.check(&e, &phi, &Env::new()).unwrap().verdict.is_realized());
        assert!(c.inhabited(&phi, &Env::new()).unwrap().verdict.is_realized());
    }

    #[test]
    fn scoping_errors() {
        let c = checker();
        let phi = Formula::eq(SetTerm::var("y"), n(0));
        assert_eq!(
            c.check(&Code::zero(), &phi, &Env::new()),
            Err(RealizabilityError::Unbound("y".into()))
        );
    }

    #[test]
    fn realisers_are_found_and_verified() {
        let c = checker();
        let env = Env::new();
        let phi = Formula::ball(
            "x",
            n(2),
            Formula::bex("y", n(3), Formula::member(SetTerm::var("x"), SetTerm::var("y"))),
        );
        let r = c.find_realiser(&phi, &env).unwrap().expect("true formula");
        assert!(c.check(&r, &phi, &env).unwrap().verdict.is_realized());
        assert!(native_truth(&phi, &env, Fuel::DEFAULT).unwrap());
        let psi = Formula::bex("y", n(2), Formula::member(n(2), SetTerm::var("y")));
        assert!(c.refutes_all(&psi, &env).unwrap());
        assert!(!native_truth(&psi, &env, Fuel::DEFAULT).unwrap());
    }

    #[test]
    fn denotations() {
        let f = Fuel::DEFAULT;
        assert_eq!(denotation(&v_numeral(3), f).unwrap(), HFSet::ordinal(3));
        let p = v_opair(&v_numeral(0), &v_numeral(1));
        assert_eq!(denotation(&p, f).unwrap().to_string(), "{{{}},{{},{{}}}}");
        assert!(denotation(&v_omega(), f).is_err());
    }

    #[test]
    fn subcountability_small_cases() {
        let c = checker();
        for alpha in [v_numeral(0), v_numeral(2), v_finite(&[v_numeral(3), v_numeral(5)])] {
            let w = subcountability_witness(&alpha, &c).unwrap();
            let r = c.check(&w.realiser, &subcountability_formula(), &w.env(&alpha)).unwrap();
            assert_eq!(r.verdict, Verdict::Realized, "{alpha:?}");
            assert!(r.is_absolute());
        }
        let alpha = v_finite(&[v_numeral(3), v_numeral(5)]);
        let w = subcountability_witness(&alpha, &c).unwrap();
        let first = w.f.element(&Code::zero(), Fuel::DEFAULT).unwrap();
        assert_eq!(first, v_opair(&v_numeral(0), &v_numeral(3)));
    }

    #[test]
    fn incomparability_realiser_is_constant() {
        let e = incomparability_statement_realiser();
        let out = run(&e, &[Code::small(3), Code::small(1), Code::small(9)], Fuel::DEFAULT);
        assert_eq!(out.outcome, Outcome::Value(iota()));
    }

    #[test]
    fn incomparability_relative_to_oracle() {
        let tr = Truncation::new(4, 3, Fuel::DEFAULT);
        let pairs: BTreeSet<(u64, u64)> =
            (0..=3).flat_map(|i| (0..=3).map(move |j| (i, j))).filter(|(i, j)| i != j).collect();
        let budget = CheckBudget {
            oracle: Some(incomparability_oracle(pairs, "test".into())),
            ..CheckBudget::with_truncation(tr)
        };
        let c = Checker::new(budget);
        let r = c
            .check(&incomparability_statement_realiser(), &incomparability_statement(), &Env::new())
            .unwrap();
        assert_eq!(r.verdict, Verdict::Realized, "{r}");
        assert!(!r.is_absolute());
        // without the oracle, i ≠ j stays open
        let c = Checker::new(CheckBudget::with_truncation(tr));
        let r = c
            .check(&incomparability_statement_realiser(), &incomparability_statement(), &Env::new())
            .unwrap();
        assert!(r.verdict.is_unknown(), "{r}");
    }

    #[test]
    fn alpha0_is_contained_in_omega_at_truncation() {
        let h = Arc::new(SeqCode::from_u64s(&[3, 1, 4, 1, 5, 9, 2, 6]));
        let c = Checker::with_path(CheckBudget::with_truncation(Truncation::new(6, 8, Fuel::DEFAULT)), h);
        let phi = Formula::ball("a", SetTerm::Alpha0, Formula::member(SetTerm::var("a"), SetTerm::Omega));
        let r = c.check(&alpha0_in_omega_realiser(), &phi, &Env::new()).unwrap();
        assert_eq!(r.verdict, Verdict::Realized);
        assert_eq!(r.notes.len(), 1, "{r}");
        // a realiser pairing lengths with the wrong index is caught
        let wrong = constant_program(&Code::pair(Code::small(1), iota()));
        assert!(c.check(&wrong, &phi, &Env::new()).unwrap().verdict.is_refuted());
    }

    #[test]
    fn display_uses_surface_syntax() {
        let phi = Formula::subset(SetTerm::var("a"), SetTerm::Omega).implies(Formula::eq(n(1), n(1)));
        assert_eq!(phi.to_string(), "(-> (all z a (in z omega)) (= 1 1))");
    }
}
