//! Machines whose predictions the construction defeats.

use serde::{Deserialize, Serialize};

use crate::code::Code;
use crate::pca::lambda::{app, apps, compile, lam, lit, pr, prim, var, Expr};
use crate::pca::library::library;
use crate::pca::term::{encode, Term};
use crate::pca::{Fuel, Prim};

/// Declared running time: at most `base + per_component · l_s s` steps on
/// input `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StepBound {
    pub base: u64,
    pub per_component: u64,
}

impl StepBound {
    pub const fn new(base: u64, per_component: u64) -> StepBound {
        StepBound {
            base,
            per_component,
        }
    }

    pub fn fuel_for(&self, len: u64) -> Fuel {
        Fuel(self.base.saturating_add(self.per_component.saturating_mul(len)))
    }
}

/// Bound used for the standard machines.
pub const STANDARD_BOUND: StepBound = StepBound::new(60_000, 4_000);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Machine {
    pub name: String,
    pub code: Code,
    /// `None` for arbitrary machines, which run under the caller's fuel.
    pub step_bound: Option<StepBound>,
}

impl Machine {
    pub fn new(name: impl Into<String>, code: Code, step_bound: Option<StepBound>) -> Machine {
        Machine {
            name: name.into(),
            code,
            step_bound,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Catalogue {
    pub machines: Vec<Machine>,
}

fn compiled(e: &Expr) -> Code {
    encode(&compile(e).expect("closed program"))
}

fn l(c: &Code) -> Expr {
    lit(c.clone())
}

fn len_of(s: Expr) -> Expr {
    app(prim(Prim::Proj0), s)
}

/// `n` recovered from an input of length `pair(i, n)`.
fn n_of(s: Expr) -> Expr {
    app(prim(Prim::Proj1), len_of(s))
}

fn pad_to(s: Expr, m: Expr) -> Expr {
    apps(l(&library().seq_pad_to), [s, m])
}

fn snoc(s: Expr, x: Expr) -> Expr {
    apps(l(&library().seq_snoc), [s, x])
}

fn truncate(s: Expr, m: Expr) -> Expr {
    apps(l(&library().seq_truncate), [s, m])
}

impl Catalogue {
    pub fn new(machines: Vec<Machine>) -> Catalogue {
        Catalogue { machines }
    }

    /// Twelve total machines with declared bounds, plus one that diverges.
    pub fn standard() -> Catalogue {
        let s = || var("s");
        let seq = |xs: &[u64]| crate::diagonal::SeqCode::from_u64s(xs).code();
        let total = |name: &str, body: Expr| {
            Machine::new(name, compiled(&lam(&["s"], body)), Some(STANDARD_BOUND))
        };
        let mut machines = vec![
            total("copy", s()),
            total("empty", lit(0u64)),
            total("const-one", l(&seq(&[1]))),
            total("const-zeros", l(&seq(&[0, 0, 0]))),
            total(
                "drop-last",
                truncate(s(), app(prim(Prim::PredN), len_of(s()))),
            ),
            total("append-zero", snoc(s(), lit(0u64))),
            total("append-one", snoc(s(), lit(1u64))),
        ];
        for j in 0..4u64 {
            machines.push(total(
                &format!("pad-j{j}"),
                pad_to(s(), pr(lit(j), n_of(s()))),
            ));
        }
        machines.push(total(
            "pad-j1-off-by-one",
            pad_to(s(), app(prim(Prim::SuccN), pr(lit(1u64), n_of(s())))),
        ));
        machines.push(Machine::new(
            "diverge",
            encode(&Term::Diverge),
            Some(StepBound::new(10, 0)),
        ));
        Catalogue { machines }
    }

    pub fn len(&self) -> usize {
        self.machines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.machines.is_empty()
    }

    pub fn get(&self, f: usize) -> Option<&Machine> {
        self.machines.get(f)
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.machines.iter().position(|m| m.name == name)
    }

    pub fn push(&mut self, m: Machine) -> usize {
        self.machines.push(m);
        self.machines.len() - 1
    }

    /// Number of machines with declared step bounds.
    pub fn declared(&self) -> usize {
        self.machines.iter().filter(|m| m.step_bound.is_some()).count()
    }
}

/// Programs `d` posing as realisers of `f₀(i) ⊆ f₀(j)`, called as
/// `d (n + 1) r n` with `r k` a realiser of `p̄(i^V, k^V) ∈ α₀`.
pub fn impostors() -> Vec<(String, Code)> {
    let v = var;
    let lib = library();
    let segment = |r: Expr| app(prim(Prim::Proj0), app(prim(Prim::Proj1), r));
    let answer = |seg: Expr| pr(lit(0u64), pr(seg, l(&lib.iota)));
    let mut out = vec![
        (
            "constant-iota".to_string(),
            compiled(&lam(&["x"], l(&lib.iota))),
        ),
        (
            "transfer".to_string(),
            compiled(&lam(&["m", "r", "n"], app(v("r"), v("n")))),
        ),
        (
            "shift".to_string(),
            compiled(&lam(
                &["m", "r", "n"],
                answer(snoc(segment(app(v("r"), v("n"))), lit(0u64))),
            )),
        ),
    ];
    for j in [0u64, 2, 5] {
        out.push((
            format!("pad-to-j{j}"),
            compiled(&lam(
                &["m", "r", "n"],
                answer(pad_to(segment(app(v("r"), v("n"))), pr(lit(j), v("n")))),
            )),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagonal::SeqCode;
    use crate::pca::machine::{run, Outcome};

    #[test]
    fn declared_bounds_are_honoured() {
        let cat = Catalogue::standard();
        assert!(cat.declared() >= 10);
        for len in [0usize, 1, 5, 30, 101, 200] {
            let xs: Vec<u64> = (0..len as u64).map(|k| k % 3).collect();
            let s = SeqCode::from_u64s(&xs);
            for m in &cat.machines {
                let bound = m.step_bound.unwrap().fuel_for(len as u64);
                let r = run(&m.code, &[s.code()], bound);
                match r.outcome {
                    Outcome::Value(_) => assert!(r.steps <= bound.0),
                    Outcome::Diverges => assert_eq!(m.name, "diverge"),
                    other => panic!("{} on length {len}: {other:?}", m.name),
                }
            }
        }
    }

    #[test]
    fn padders_predict_zero_prefixes() {
        let cat = Catalogue::standard();
        let m = &cat.machines[cat.position("pad-j2").unwrap()];
        // input of length pair(0, 3) = 9
        let s = SeqCode::from_u64s(&[0; 9]);
        let expected = SeqCode::from_u64s(&[0; 11]); // pair(2, 3) = 11
        let out = run(&m.code, &[s.code()], Fuel::DEFAULT).outcome;
        assert_eq!(out, Outcome::Value(expected.code()));
    }
}
