//! The diagonal construction of the path `h`.
//!
//! A requirement `(i, j, f)` with `i ≠ j` asks for some `n > i, j` with
//! `pair(i, n), pair(j, n) ≤ l_s t` such that machine `f`, given the first
//! `pair(i, n)` components of `t`, does not produce the first `pair(j, n)`
//! components (divergence counts as not producing them). Requirements are
//! met one at a time by extending a finite sequence; the machines come from
//! a [`Catalogue`] whose members declare step bounds, so "diverges" and
//! "did not halt within its declared bound" coincide.

pub mod machines;
pub mod seq;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::Code;
use crate::pca::lambda::{app, apps, compile, lam, lit, pr, prim, var};
use crate::pca::library::library;
use crate::pca::machine::{run, Outcome};
use crate::pca::term::encode;
use crate::pca::{incomparable_witness, pair, Fuel, PcaError, Prim};
use crate::vcodes::f0_equality_realiser_program;

pub use machines::{Catalogue, Machine, StepBound};
pub use seq::{x_membership, SeqCode, XMembership};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagonalError {
    #[error("requirement needs distinct indices, got i = j = {0}")]
    SameIndices(u64),
    #[error("catalogue has no machine {0}")]
    UnknownMachine(usize),
    #[error(transparent)]
    Pca(#[from] PcaError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Requirement {
    pub i: u64,
    pub j: u64,
    /// Position of the machine `f` in the catalogue.
    pub f: usize,
}

impl Requirement {
    pub fn new(i: u64, j: u64, f: usize) -> Result<Requirement, DiagonalError> {
        if i == j {
            return Err(DiagonalError::SameIndices(i));
        }
        Ok(Requirement { i, j, f })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "n", rename_all = "snake_case")]
pub enum Satisfaction {
    Yes(u64),
    No,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witnessed {
    pub requirement: Requirement,
    pub n: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage {
    pub t: SeqCode,
    pub satisfied: Vec<Witnessed>,
}

/// What a machine does with a prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Prediction {
    Output(Code),
    /// Diverged, or exceeded its declared step bound.
    NoOutput,
    /// Undeclared machine that ran out of fuel.
    Undetermined,
}

/// Runs catalogue machine `f` on a sequence code.
pub fn predict(machine: &Machine, input: &SeqCode, fuel: Fuel) -> Prediction {
    let budget = match machine.step_bound {
        Some(b) => b.fuel_for(input.len() as u64),
        None => fuel,
    };
    match run(&machine.code, &[input.code()], budget).outcome {
        Outcome::Value(v) => Prediction::Output(v),
        Outcome::Diverges => Prediction::NoOutput,
        Outcome::OutOfFuel | Outcome::Inspected if machine.step_bound.is_some() => {
            Prediction::NoOutput
        }
        Outcome::OutOfFuel | Outcome::Inspected => Prediction::Undetermined,
    }
}

fn as_index(c: &Code) -> Option<usize> {
    c.as_u64().and_then(|v| usize::try_from(v).ok())
}

/// Admissible `n` for `(i, j)` on a sequence of length `len`, ascending.
fn admissible(i: u64, j: u64, len: usize) -> impl Iterator<Item = (u64, usize, usize)> {
    (i.max(j) + 1..)
        .map(move |n| {
            let a = as_index(&pair(&Code::small(i), &Code::small(n)));
            let b = as_index(&pair(&Code::small(j), &Code::small(n)));
            (n, a, b)
        })
        // both positions grow past n², so stop once n² exceeds the length
        .take_while(move |&(n, _, _)| (n as u128) * (n as u128) <= len as u128)
        .filter_map(move |(n, a, b)| match (a, b) {
            (Some(a), Some(b)) if a <= len && b <= len => Some((n, a, b)),
            _ => None,
        })
}

fn fails_at(
    t: &SeqCode,
    machine: &Machine,
    a: usize,
    b: usize,
    fuel: Fuel,
) -> Option<bool> {
    match predict(machine, &t.prefix(a), fuel) {
        Prediction::Output(v) => Some(v != t.prefix_code(b)),
        Prediction::NoOutput => Some(true),
        Prediction::Undetermined => None,
    }
}

/// Decides the requirement on `t` by searching all admissible `n`.
pub fn requirement_satisfied(
    t: &SeqCode,
    r: &Requirement,
    catalogue: &Catalogue,
    fuel: Fuel,
) -> Result<Satisfaction, DiagonalError> {
    requirement_satisfied_from(t, r, catalogue, fuel, None)
}

/// As [`requirement_satisfied`], trying `hint` (e.g. a recorded witness)
/// before the ascending search. The answer does not depend on the hint.
pub fn requirement_satisfied_from(
    t: &SeqCode,
    r: &Requirement,
    catalogue: &Catalogue,
    fuel: Fuel,
    hint: Option<u64>,
) -> Result<Satisfaction, DiagonalError> {
    if r.i == r.j {
        return Err(DiagonalError::SameIndices(r.i));
    }
    let machine = catalogue.get(r.f).ok_or(DiagonalError::UnknownMachine(r.f))?;
    if let Some(n) = hint {
        if let Some((n, a, b)) = admissible(r.i, r.j, t.len()).find(|&(m, _, _)| m == n) {
            if fails_at(t, machine, a, b, fuel) == Some(true) {
                return Ok(Satisfaction::Yes(n));
            }
        }
    }
    let mut undetermined = false;
    for (n, a, b) in admissible(r.i, r.j, t.len()) {
        match fails_at(t, machine, a, b, fuel) {
            Some(true) => return Ok(Satisfaction::Yes(n)),
            Some(false) => {}
            None => undetermined = true,
        }
    }
    Ok(if undetermined {
        Satisfaction::Unknown
    } else {
        Satisfaction::No
    })
}

/// Least `n > i, j` with `pair(i, n) < pair(j, n)` and `pair(j, n) > l_s t`.
pub fn extension_witness(i: u64, j: u64, len: usize) -> Result<u64, DiagonalError> {
    let (ci, cj) = (Code::small(i), Code::small(j));
    let mut lower = Code::small(i.max(j));
    loop {
        let n = incomparable_witness(&ci, &cj, &lower)?;
        let b = pair(&cj, &n);
        if as_index(&b).is_none_or(|b| b > len) {
            return Ok(n.as_u64().expect("witness is small"));
        }
        lower = n;
    }
}

/// Extends `t` so that `r` is met, without first checking whether `t`
/// already meets it. Returns the extension and the witness `n`, or `None`
/// for the witness when an undeclared machine ran out of fuel (the sequence
/// is then padded with zeros and the requirement stays open).
pub fn extend_fresh(
    t: &SeqCode,
    r: &Requirement,
    catalogue: &Catalogue,
    fuel: Fuel,
) -> Result<(SeqCode, Option<u64>), DiagonalError> {
    if r.i == r.j {
        return Err(DiagonalError::SameIndices(r.i));
    }
    let machine = catalogue.get(r.f).ok_or(DiagonalError::UnknownMachine(r.f))?;
    let n = extension_witness(r.i, r.j, t.len())?;
    let a = as_index(&pair(&Code::small(r.i), &Code::small(n))).expect("desk-scale length");
    let b = as_index(&pair(&Code::small(r.j), &Code::small(n))).expect("desk-scale length");
    let mut out = t.clone();
    while out.len() < a {
        out.push(Code::zero());
    }
    let prediction = predict(machine, &out.prefix(a), fuel);
    while out.len() < b - 1 {
        out.push(Code::zero());
    }
    let (last, witness) = match &prediction {
        Prediction::Output(v) => {
            let flipped = SeqCode::from_code(v)
                .filter(|s| s.len() == b)
                .map(|s| s.components()[b - 1].succ())
                .unwrap_or_else(Code::zero);
            (flipped, Some(n))
        }
        Prediction::NoOutput => (Code::zero(), Some(n)),
        Prediction::Undetermined => (Code::zero(), None),
    };
    out.push(last);
    Ok((out, witness))
}

/// Upward closure first: a `t` that already meets `r` is returned
/// unchanged with its witness; otherwise [`extend_fresh`].
pub fn extend_for_requirement(
    t: &SeqCode,
    r: &Requirement,
    catalogue: &Catalogue,
    fuel: Fuel,
) -> Result<Stage, DiagonalError> {
    if let Satisfaction::Yes(n) = requirement_satisfied(t, r, catalogue, fuel)? {
        return Ok(Stage {
            t: t.clone(),
            satisfied: vec![Witnessed { requirement: *r, n }],
        });
    }
    let (t, witness) = extend_fresh(t, r, catalogue, fuel)?;
    Ok(Stage {
        t,
        satisfied: witness
            .map(|n| Witnessed { requirement: *r, n })
            .into_iter()
            .collect(),
    })
}

/// Requirements over a catalogue of `machines` entries, ordered
/// lexicographically by `(max(i, j, f), i, j, f)`.
pub fn requirement_order(machines: usize) -> impl Iterator<Item = Requirement> {
    (0u64..).flat_map(move |m| {
        let mut level = Vec::new();
        for i in 0..=m {
            for j in 0..=m {
                for f in 0..=(m as usize).min(machines.saturating_sub(1)) {
                    if i != j && machines > 0 && i.max(j).max(f as u64) == m {
                        level.push(Requirement { i, j, f });
                    }
                }
            }
        }
        level
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildResult {
    pub h_prefix: SeqCode,
    pub log: Vec<Stage>,
    /// Requirements left open by undeclared machines that ran out of fuel.
    pub unresolved: Vec<Requirement>,
}

impl BuildResult {
    pub fn witnesses(&self) -> Vec<Witnessed> {
        self.log.last().map(|s| s.satisfied.clone()).unwrap_or_default()
    }
}

/// Meets the first `stages` requirements of [`requirement_order`].
pub fn build_h(catalogue: &Catalogue, stages: usize, fuel: Fuel) -> Result<BuildResult, DiagonalError> {
    let schedule: Vec<Requirement> = if catalogue.is_empty() {
        Vec::new()
    } else {
        requirement_order(catalogue.len()).take(stages).collect()
    };
    build_h_for(catalogue, &schedule, fuel)
}

/// Meets the given requirements in order. Each scheduled requirement is
/// addressed once by a fresh extension; open ones are retried once at the
/// end with a larger budget.
pub fn build_h_for(
    catalogue: &Catalogue,
    schedule: &[Requirement],
    fuel: Fuel,
) -> Result<BuildResult, DiagonalError> {
    let mut t = SeqCode::empty();
    let mut satisfied: Vec<Witnessed> = Vec::new();
    let mut log = Vec::with_capacity(schedule.len());
    let mut open = Vec::new();
    let mut step = |r: &Requirement, fuel: Fuel, t: &mut SeqCode, open: &mut Vec<Requirement>| {
        let (next, witness) = extend_fresh(t, r, catalogue, fuel)?;
        *t = next;
        match witness {
            Some(n) => satisfied.push(Witnessed { requirement: *r, n }),
            None => open.push(*r),
        }
        log.push(Stage {
            t: t.clone(),
            satisfied: satisfied.clone(),
        });
        Ok::<_, DiagonalError>(())
    };
    for r in schedule {
        step(r, fuel, &mut t, &mut open)?;
    }
    let retry = std::mem::take(&mut open);
    let bigger = Fuel(fuel.0.saturating_mul(4));
    for r in &retry {
        step(r, bigger, &mut t, &mut open)?;
    }
    Ok(BuildResult {
        h_prefix: t,
        log,
        unresolved: open,
    })
}

/// Re-checks every witnessed requirement against `h`, in parallel.
pub fn verify(
    h: &SeqCode,
    witnessed: &[Witnessed],
    catalogue: &Catalogue,
    fuel: Fuel,
) -> Vec<(Requirement, Satisfaction)> {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(8);
    let chunk = witnessed.len().div_ceil(threads).max(1);
    std::thread::scope(|scope| {
        let handles: Vec<_> = witnessed
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    part.iter()
                        .map(|w| {
                            let s = requirement_satisfied_from(
                                h,
                                &w.requirement,
                                catalogue,
                                fuel,
                                Some(w.n),
                            )
                            .unwrap_or(Satisfaction::Unknown);
                            (w.requirement, s)
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("verification thread"))
            .collect()
    })
}

/// The extraction `g = λs. p₀(p₁(f (p₁(l_s s)) s))` with
/// `f = λnt. d (s_N n) (λk. p (p i k) (p (t_s t (p i k)) (q i k))) n`:
/// from a purported realiser `d` of `f₀(i) ⊆ f₀(j)`, a machine predicting
/// the first `pair(j, n)` components of `h` from the first `pair(i, n)`.
pub fn extract_g(d: &Code, i: u64, j: u64) -> Result<Code, DiagonalError> {
    if i == j {
        return Err(DiagonalError::SameIndices(i));
    }
    let lib = library();
    let q = f0_equality_realiser_program();
    let v = var;
    let p0 = |e| app(prim(Prim::Proj0), e);
    let p1 = |e| app(prim(Prim::Proj1), e);
    let ik = || pr(lit(i), v("k"));
    let membership = lam(
        &["k"],
        pr(
            ik(),
            pr(
                apps(lit(lib.seq_truncate.clone()), [v("t"), ik()]),
                apps(lit(q), [lit(i), v("k")]),
            ),
        ),
    );
    let f = lam(
        &["n", "t"],
        apps(
            lit(d.clone()),
            [app(prim(Prim::SuccN), v("n")), membership, v("n")],
        ),
    );
    let g = lam(
        &["s"],
        p0(p1(apps(f, [p1(p0(v("s"))), v("s")]))),
    );
    Ok(encode(&compile(&g)?))
}

/// How an extracted machine `g` behaved on the witnessing prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GBehaviour {
    /// Halted with something other than the next segment of `h`.
    WrongOutput,
    /// Diverged: it predicts nothing.
    Diverged,
    /// Ran out of fuel; the requirement is open.
    Undetermined,
    /// Produced the true segment (a realiser would survive).
    Correct,
}

/// The outcome for one purported realiser `d` and one pair `i ≠ j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefutationCase {
    pub realiser: String,
    pub i: u64,
    pub j: u64,
    pub requirement: Requirement,
    /// `n` at which `g` fails, if the requirement was met.
    pub witness: Option<u64>,
    pub satisfaction: Satisfaction,
    pub behaviour: GBehaviour,
}

impl RefutationCase {
    pub fn refuted(&self) -> bool {
        matches!(self.satisfaction, Satisfaction::Yes(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refutation {
    pub h_prefix: SeqCode,
    pub cases: Vec<RefutationCase>,
}

impl Refutation {
    /// Cases in which `g` was not shown to mispredict `h`.
    pub fn survivors(&self) -> Vec<&RefutationCase> {
        self.cases.iter().filter(|c| !c.refuted()).collect()
    }

    pub fn count(&self, b: GBehaviour) -> usize {
        self.cases.iter().filter(|c| c.behaviour == b).count()
    }
}

/// Desk-scale run of the incomparability argument: for every candidate
/// `d` and every `i ≠ j ≤ max_index`, the extracted `g` joins the
/// catalogue (fuel-bounded, no declared bound), `h` is built to defeat
/// all of them, and each requirement is re-checked on the final prefix.
pub fn refute_realisers(
    candidates: &[(String, Code)],
    max_index: u64,
    fuel: Fuel,
) -> Result<Refutation, DiagonalError> {
    let mut catalogue = Catalogue::default();
    let mut cases = Vec::new();
    let mut schedule = Vec::new();
    for (name, d) in candidates {
        for i in 0..=max_index {
            for j in (0..=max_index).filter(|&j| j != i) {
                let g = extract_g(d, i, j)?;
                let f = catalogue.push(Machine::new(format!("g[{name}; {i}, {j}]"), g, None));
                let r = Requirement::new(i, j, f)?;
                schedule.push(r);
                cases.push((name.clone(), r));
            }
        }
    }
    let built = build_h_for(&catalogue, &schedule, fuel)?;
    let h = built.h_prefix;
    let witnesses: HashMap<Requirement, u64> = built
        .log
        .last()
        .map(|s| s.satisfied.iter().map(|w| (w.requirement, w.n)).collect())
        .unwrap_or_default();
    let to_check: Vec<Witnessed> = schedule
        .iter()
        .map(|r| Witnessed {
            requirement: *r,
            n: witnesses.get(r).copied().unwrap_or(0),
        })
        .collect();
    let verdicts: HashMap<Requirement, Satisfaction> =
        verify(&h, &to_check, &catalogue, fuel).into_iter().collect();
    let cases = cases
        .into_iter()
        .map(|(realiser, r)| {
            let satisfaction = verdicts.get(&r).copied().unwrap_or(Satisfaction::Unknown);
            let witness = match satisfaction {
                Satisfaction::Yes(n) => Some(n),
                _ => None,
            };
            let n = witness.or_else(|| witnesses.get(&r).copied());
            let behaviour = match n {
                Some(n) => g_behaviour(&h, &r, n, &catalogue, fuel),
                None => GBehaviour::Undetermined,
            };
            RefutationCase {
                realiser,
                i: r.i,
                j: r.j,
                requirement: r,
                witness,
                satisfaction,
                behaviour,
            }
        })
        .collect();
    Ok(Refutation { h_prefix: h, cases })
}

fn g_behaviour(h: &SeqCode, r: &Requirement, n: u64, catalogue: &Catalogue, fuel: Fuel) -> GBehaviour {
    let position = |k: u64| as_index(&pair(&Code::small(k), &Code::small(n)));
    let (Some(a), Some(b)) = (position(r.i), position(r.j)) else {
        return GBehaviour::Undetermined;
    };
    if a > h.len() || b > h.len() {
        return GBehaviour::Undetermined;
    }
    let machine = &catalogue.machines[r.f];
    match run(&machine.code, &[h.prefix_code(a)], fuel).outcome {
        Outcome::Value(v) if v == h.prefix_code(b) => GBehaviour::Correct,
        Outcome::Value(_) => GBehaviour::WrongOutput,
        Outcome::Diverges => GBehaviour::Diverged,
        Outcome::OutOfFuel | Outcome::Inspected => GBehaviour::Undetermined,
    }
}
