//! Fuel-bounded call-by-value reduction of coded terms.

use serde::{Deserialize, Serialize};

use super::term::{app_code, decode_node, encode, lit_code, Node, Prim, Term, TAG_APP};
use crate::code::Code;

/// Reduction budget; one unit per machine step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Fuel(pub u64);

impl Fuel {
    pub const DEFAULT: Fuel = Fuel(1_000_000);
}

impl Default for Fuel {
    fn default() -> Self {
        Fuel::DEFAULT
    }
}

/// Result of `pq` under a budget. `OutOfFuel` means "not converged yet",
/// never "diverges".
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AppResult {
    Value(Code),
    OutOfFuel,
}

impl AppResult {
    pub fn value(self) -> Option<Code> {
        match self {
            AppResult::Value(c) => Some(c),
            AppResult::OutOfFuel => None,
        }
    }
}

/// Detailed outcome of a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Value(Code),
    OutOfFuel,
    /// The run reached the diverging term (or a literal that reduces to
    /// itself); no amount of fuel converges.
    Diverges,
    /// Parametric runs only: the opaque argument was inspected.
    Inspected,
}

impl Outcome {
    pub fn value(&self) -> Option<&Code> {
        match self {
            Outcome::Value(c) => Some(c),
            _ => None,
        }
    }

    pub fn into_app_result(self) -> AppResult {
        match self {
            Outcome::Value(c) => AppResult::Value(c),
            _ => AppResult::OutOfFuel,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub outcome: Outcome,
    pub steps: u64,
}

struct Frame {
    head: Code,
    stack: Vec<Code>,
}

/// `f a` under `fuel`.
pub fn apply(f: &Code, a: &Code, fuel: Fuel) -> AppResult {
    run(f, std::slice::from_ref(a), fuel).outcome.into_app_result()
}

/// `f a1 ... an` under `fuel`.
pub fn apply_all(f: &Code, args: &[Code], fuel: Fuel) -> AppResult {
    run(f, args, fuel).outcome.into_app_result()
}

pub fn run(f: &Code, args: &[Code], fuel: Fuel) -> Run {
    execute(f.clone(), args.iter().rev().cloned().collect(), fuel, None)
}

pub fn eval(t: &Term, fuel: Fuel) -> Run {
    execute(encode(t), Vec::new(), fuel, None)
}

/// Runs `f x` where `x` is an opaque marker that must only be copied.
/// Returns `Outcome::Inspected` as soon as the computation depends on the
/// marker's value.
pub fn run_opaque(f: &Code, marker: &Code, fuel: Fuel) -> Run {
    execute(f.clone(), vec![marker.clone()], fuel, Some(marker))
}

fn partial_value(p: Prim, stack: &[Code]) -> Code {
    stack
        .iter()
        .rev()
        .fold(p.code(), |acc, a| app_code(acc, lit_code(a.clone())))
}

fn execute(mut head: Code, mut stack: Vec<Code>, fuel: Fuel, opaque: Option<&Code>) -> Run {
    let mut frames: Vec<Frame> = Vec::new();
    let mut steps = 0u64;
    let done = |outcome, steps| Run { outcome, steps };
    let touches = |c: &Code| opaque.is_some_and(|o| c.contains(o));

    loop {
        if steps >= fuel.0 {
            return done(Outcome::OutOfFuel, steps);
        }
        steps += 1;

        if let Some(o) = opaque {
            if head == *o {
                return done(Outcome::Inspected, steps);
            }
            let (tag, payload) = head.unpair();
            if touches(&tag) {
                return done(Outcome::Inspected, steps);
            }
            let app = tag.as_u64() == Some(TAG_APP);
            if (app && payload == *o) || (!app && tag.as_u64() != Some(0) && touches(&payload)) {
                return done(Outcome::Inspected, steps);
            }
        }

        let value = match decode_node(&head) {
            Node::Lit(v) => {
                if stack.is_empty() {
                    Some(v)
                } else {
                    if v == head {
                        return done(Outcome::Diverges, steps);
                    }
                    head = v;
                    None
                }
            }
            Node::App(f, a) => {
                match decode_node(&a) {
                    Node::Lit(v) if opaque.is_none_or(|o| a != *o) => {
                        stack.push(v);
                        head = f;
                    }
                    _ => {
                        frames.push(Frame {
                            head: f,
                            stack: std::mem::take(&mut stack),
                        });
                        head = a;
                    }
                }
                None
            }
            Node::Diverge => return done(Outcome::Diverges, steps),
            Node::Prim(p) if stack.len() < p.arity() => Some(partial_value(p, &stack)),
            Node::Prim(p) => {
                let mut arg = || stack.pop().expect("arity checked");
                head = match p {
                    Prim::K => {
                        let a = arg();
                        let _ = arg();
                        lit_code(a)
                    }
                    Prim::S => {
                        let (a, b, c) = (arg(), arg(), arg());
                        let ac = app_code(lit_code(a), lit_code(c.clone()));
                        let bc = app_code(lit_code(b), lit_code(c));
                        app_code(ac, bc)
                    }
                    Prim::SuccN | Prim::PredN => {
                        let a = arg();
                        if touches(&a) {
                            return done(Outcome::Inspected, steps);
                        }
                        lit_code(if p == Prim::SuccN { a.succ() } else { a.pred() })
                    }
                    Prim::D => {
                        let (a, b, c1, c2) = (arg(), arg(), arg(), arg());
                        if touches(&c1) || touches(&c2) {
                            return done(Outcome::Inspected, steps);
                        }
                        lit_code(if c1 == c2 { a } else { b })
                    }
                    Prim::Pair => {
                        let (a, b) = (arg(), arg());
                        lit_code(Code::pair(a, b))
                    }
                    Prim::Proj0 | Prim::Proj1 => {
                        let a = arg();
                        if opaque.is_some_and(|o| a == *o) {
                            return done(Outcome::Inspected, steps);
                        }
                        let (l, r) = a.unpair();
                        lit_code(if p == Prim::Proj0 { l } else { r })
                    }
                    Prim::Fix => {
                        let (f, x) = (arg(), arg());
                        let this = partial_value(Prim::Fix, std::slice::from_ref(&f));
                        app_code(app_code(lit_code(f), lit_code(this)), lit_code(x))
                    }
                };
                None
            }
        };

        if let Some(v) = value {
            match frames.pop() {
                Some(frame) => {
                    head = frame.head;
                    stack = frame.stack;
                    stack.push(v);
                }
                None => return done(Outcome::Value(v), steps),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: u64) -> Code {
        Code::small(v)
    }

    #[test]
    fn k_returns_first_argument() {
        let k3 = apply(&Prim::K.code(), &c(3), Fuel::DEFAULT).value().unwrap();
        assert_eq!(apply(&k3, &c(5), Fuel::DEFAULT), AppResult::Value(c(3)));
    }

    #[test]
    fn arithmetic_primitives() {
        assert_eq!(apply(&Prim::SuccN.code(), &c(4), Fuel::DEFAULT), AppResult::Value(c(5)));
        assert_eq!(apply(&Prim::PredN.code(), &c(0), Fuel::DEFAULT), AppResult::Value(c(0)));
        let d = Prim::D.code();
        assert_eq!(apply_all(&d, &[c(8), c(9), c(2), c(2)], Fuel::DEFAULT), AppResult::Value(c(8)));
        assert_eq!(apply_all(&d, &[c(8), c(9), c(2), c(3)], Fuel::DEFAULT), AppResult::Value(c(9)));
    }

    #[test]
    fn zero_applied_is_a_detected_self_loop() {
        assert_eq!(run(&c(0), &[c(1)], Fuel::DEFAULT).outcome, Outcome::Diverges);
    }

    #[test]
    fn fuel_exhaustion_is_reported() {
        // fix k x = k (fix k) x = fix k : a value, but (fix (s (k k)) ...) loops.
        let t = encode(&Term::Diverge);
        assert_eq!(run(&t, &[c(1)], Fuel::DEFAULT).outcome, Outcome::Diverges);
        assert_eq!(apply(&Prim::K.code(), &c(1), Fuel(0)), AppResult::OutOfFuel);
    }

    #[test]
    fn opaque_copy_is_not_inspection() {
        let i = encode(&Term::apps(Term::Prim(Prim::S), [Term::Prim(Prim::K), Term::Prim(Prim::K)]));
        let marker = Code::pair(Code::small(u64::MAX), Code::small(12345));
        assert_eq!(run_opaque(&i, &marker, Fuel::DEFAULT).outcome, Outcome::Value(marker.clone()));
        let succ = Prim::SuccN.code();
        assert_eq!(run_opaque(&succ, &marker, Fuel::DEFAULT).outcome, Outcome::Inspected);
    }
}
