//! First-order definability over finite `⟨X; ∈⟩`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::hf::HFSet;
use super::LworldError;

/// A variable (de Bruijn-free, by name index) or a parameter from `X`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FOTerm {
    Var(usize),
    Param(HFSet),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FOFormula {
    In(FOTerm, FOTerm),
    Eq(FOTerm, FOTerm),
    Not(Box<FOFormula>),
    And(Box<FOFormula>, Box<FOFormula>),
    Or(Box<FOFormula>, Box<FOFormula>),
    /// `∃v ∈ X`
    Exists(usize, Box<FOFormula>),
    /// `∀v ∈ X`
    Forall(usize, Box<FOFormula>),
}

impl FOFormula {
    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> FOFormula {
        FOFormula::Not(Box::new(self))
    }

    pub fn and(self, other: FOFormula) -> FOFormula {
        FOFormula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: FOFormula) -> FOFormula {
        FOFormula::Or(Box::new(self), Box::new(other))
    }

    /// Truth in `⟨domain; ∈⟩` under `env` (indexed by variable number).
    /// Parameters must be drawn from the domain.
    pub fn holds(&self, domain: &[HFSet], env: &mut Vec<Option<HFSet>>) -> bool {
        let val = |t: &FOTerm, env: &Vec<Option<HFSet>>| -> HFSet {
            match t {
                FOTerm::Var(v) => env[*v].clone().expect("variable in scope"),
                FOTerm::Param(p) => p.clone(),
            }
        };
        match self {
            FOFormula::In(a, b) => val(b, env).contains(&val(a, env)),
            FOFormula::Eq(a, b) => val(a, env) == val(b, env),
            FOFormula::Not(f) => !f.holds(domain, env),
            FOFormula::And(f, g) => f.holds(domain, env) && g.holds(domain, env),
            FOFormula::Or(f, g) => f.holds(domain, env) || g.holds(domain, env),
            FOFormula::Exists(v, f) | FOFormula::Forall(v, f) => {
                let exists = matches!(self, FOFormula::Exists(..));
                if env.len() <= *v {
                    env.resize(*v + 1, None);
                }
                let saved = env[*v].take();
                let mut result = !exists;
                for a in domain {
                    env[*v] = Some(a.clone());
                    if f.holds(domain, env) == exists {
                        result = exists;
                        break;
                    }
                }
                env[*v] = saved;
                result
            }
        }
    }

    /// `{a ∈ X : X ⊨ φ(a)}` for a formula whose only free variable is 0.
    pub fn extension(&self, domain: &[HFSet]) -> HFSet {
        let mut env = vec![None];
        HFSet::new(domain.iter().filter(|a| {
            env[0] = Some((*a).clone());
            self.holds(domain, &mut env)
        }).cloned())
    }
}

impl fmt::Display for FOTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FOTerm::Var(v) => write!(f, "v{v}"),
            FOTerm::Param(p) => write!(f, "{p}"),
        }
    }
}

impl fmt::Display for FOFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FOFormula::In(a, b) => write!(f, "({a} ∈ {b})"),
            FOFormula::Eq(a, b) => write!(f, "({a} = {b})"),
            FOFormula::Not(g) => write!(f, "¬{g}"),
            FOFormula::And(g, h) => write!(f, "({g} ∧ {h})"),
            FOFormula::Or(g, h) => write!(f, "({g} ∨ {h})"),
            FOFormula::Exists(v, g) => write!(f, "∃v{v} {g}"),
            FOFormula::Forall(v, g) => write!(f, "∀v{v} {g}"),
        }
    }
}

/// Largest domain accepted by the formula route.
pub const FORMULA_ROUTE_BOUND: usize = 6;

/// Definable subsets found by enumerating formulas in one free variable
/// (`v0`) with parameters, keyed by extension, each with the first formula
/// found defining it.
///
/// Atoms are `v0 ∈ p`, `p ∈ v0`, `v0 = p`, `v0 ∈ v0` and a few quantified
/// shapes (`∃v1 (v1 ∈ v0)`, `∃v1 (v0 ∈ v1)`, `∀v1 (v1 ∈ v0 → v1 ∈ p)`);
/// each round closes the current stock under `¬`, `∧`, `∨`, until nothing
/// new appears or `rounds` is reached.
pub fn definable_by_formulas(
    domain: &[HFSet],
    rounds: usize,
) -> Result<BTreeMap<HFSet, FOFormula>, LworldError> {
    if domain.len() > FORMULA_ROUTE_BOUND {
        return Err(LworldError::BoundExceeded {
            what: "domain for formula enumeration",
            size: domain.len(),
            bound: FORMULA_ROUTE_BOUND,
        });
    }
    let x = || FOTerm::Var(0);
    let y = || FOTerm::Var(1);
    let mut atoms = vec![
        FOFormula::In(x(), x()),
        FOFormula::Exists(1, Box::new(FOFormula::In(y(), x()))),
        FOFormula::Exists(1, Box::new(FOFormula::In(x(), y()))),
    ];
    for p in domain {
        let p = || FOTerm::Param(p.clone());
        atoms.push(FOFormula::In(x(), p()));
        atoms.push(FOFormula::In(p(), x()));
        atoms.push(FOFormula::Eq(x(), p()));
        atoms.push(FOFormula::Forall(
            1,
            Box::new(FOFormula::In(y(), x()).not().or(FOFormula::In(y(), p()))),
        ));
    }
    let mut found: BTreeMap<HFSet, FOFormula> = BTreeMap::new();
    for a in atoms {
        found.entry(a.extension(domain)).or_insert(a);
    }
    for _ in 0..rounds {
        let stock: Vec<(HFSet, FOFormula)> =
            found.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        let mut added = false;
        let mut offer = |f: FOFormula, found: &mut BTreeMap<HFSet, FOFormula>| {
            let ext = f.extension(domain);
            if let std::collections::btree_map::Entry::Vacant(slot) = found.entry(ext) {
                slot.insert(f);
                added = true;
            }
        };
        for (_, f) in &stock {
            offer(f.clone().not(), &mut found);
        }
        for (i, (_, f)) in stock.iter().enumerate() {
            for (_, g) in &stock[i + 1..] {
                offer(f.clone().and(g.clone()), &mut found);
                offer(f.clone().or(g.clone()), &mut found);
            }
        }
        if !added {
            break;
        }
    }
    Ok(found)
}

/// `Def(X)` through formula enumeration.
pub fn def_subsets_by_formulas(domain: &[HFSet]) -> Result<BTreeSet<HFSet>, LworldError> {
    Ok(definable_by_formulas(domain, domain.len() + 2)?
        .into_keys()
        .collect())
}

/// Largest domain whose powerset is built.
pub const POWERSET_BOUND: usize = 16;

/// Every subset of the domain (each is definable by a disjunction of
/// equalities with parameters).
pub fn def_subsets_by_powerset(domain: &[HFSet]) -> Result<BTreeSet<HFSet>, LworldError> {
    if domain.len() > POWERSET_BOUND {
        return Err(LworldError::BoundExceeded {
            what: "domain for the powerset route",
            size: domain.len(),
            bound: POWERSET_BOUND,
        });
    }
    Ok((0u32..1 << domain.len())
        .map(|mask| {
            HFSet::new(
                domain
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask >> k & 1 == 1)
                    .map(|(_, a)| a.clone()),
            )
        })
        .collect())
}

/// `Def(X)`: both routes when the domain is small enough for formulas
/// (and they must agree), the powerset route otherwise.
pub fn def_subsets(domain: &[HFSet]) -> Result<BTreeSet<HFSet>, LworldError> {
    let by_powerset = def_subsets_by_powerset(domain)?;
    if domain.len() <= FORMULA_ROUTE_BOUND {
        let by_formulas = def_subsets_by_formulas(domain)?;
        if by_formulas != by_powerset {
            return Err(LworldError::RouteMismatch {
                formulas: by_formulas.len(),
                powerset: by_powerset.len(),
            });
        }
    }
    Ok(by_powerset)
}
