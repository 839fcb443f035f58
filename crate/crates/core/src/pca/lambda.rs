//! λ-expressions over the combinators, compiled by bracket abstraction.
//!
//! Abstraction is Curry's algorithm restricted so that abstracting over a
//! variable never evaluates anything early: `[x]x = s k k`, `[x]a = k a` and
//! `[x](a x) = a` for value forms `a` not mentioning `x` (variables,
//! literals, under-applied primitives over value forms), and otherwise
//! `[x](m n) = s ([x]m) ([x]n)`. Every abstraction is itself a value form, so
//! nested abstractions do not re-traverse inner ones.
//! Under call-by-value application, `(λx. t) v` then reduces to `t[v/x]`
//! and `λx. t` applied to fewer arguments is always a value.

use std::collections::BTreeSet;

use super::term::{Prim, Term};
use super::PcaError;
use crate::code::Code;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Var(String),
    Term(Term),
    App(Box<Expr>, Box<Expr>),
    Lam(String, Box<Expr>),
}

pub fn var(name: &str) -> Expr {
    Expr::Var(name.to_string())
}

pub fn prim(p: Prim) -> Expr {
    Expr::Term(Term::Prim(p))
}

pub fn lit(c: impl Into<Code>) -> Expr {
    Expr::Term(Term::Lit(c.into()))
}

pub fn app(f: Expr, a: Expr) -> Expr {
    Expr::App(Box::new(f), Box::new(a))
}

pub fn apps(f: Expr, args: impl IntoIterator<Item = Expr>) -> Expr {
    args.into_iter().fold(f, app)
}

/// `λx1 ... xn. body`
pub fn lam(vars: &[&str], body: Expr) -> Expr {
    vars.iter()
        .rev()
        .fold(body, |b, v| Expr::Lam(v.to_string(), Box::new(b)))
}

/// `p a b`
pub fn pr(a: Expr, b: Expr) -> Expr {
    apps(prim(Prim::Pair), [a, b])
}

/// Builds, at run time, the code of the delayed application
/// `Lit(f) Lit(a1) ... Lit(an)` (see [`super::term::closure_code`]).
pub fn closure(f: Expr, args: impl IntoIterator<Item = Expr>) -> Expr {
    let lit_of = |e: Expr| pr(lit(0u64), e);
    args.into_iter()
        .fold(lit_of(f), |acc, a| pr(lit(1u64), pr(acc, lit_of(a))))
}

/// `s k k`
pub fn identity() -> Term {
    Term::apps(Term::Prim(Prim::S), [Term::Prim(Prim::K), Term::Prim(Prim::K)])
}

impl Expr {
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Expr::Var(v) if !bound.contains(v) => {
                out.insert(v.clone());
            }
            Expr::Var(_) | Expr::Term(_) => {}
            Expr::App(f, a) => {
                f.collect_free(bound, out);
                a.collect_free(bound, out);
            }
            Expr::Lam(v, b) => {
                bound.push(v.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    fn mentions(&self, x: &str) -> bool {
        match self {
            Expr::Var(v) => v == x,
            Expr::Term(_) => false,
            Expr::App(f, a) => f.mentions(x) || a.mentions(x),
            Expr::Lam(v, b) => v != x && b.mentions(x),
        }
    }

    /// Variables, literals and under-applied primitives over value forms:
    /// expressions whose evaluation (after substituting values for the
    /// variables) takes no steps.
    fn is_value_form(&self) -> bool {
        let mut head = self;
        let mut args = 0;
        loop {
            match head {
                Expr::App(f, a) => {
                    if !a.is_value_form() {
                        return false;
                    }
                    args += 1;
                    head = f;
                }
                Expr::Var(_) | Expr::Term(Term::Lit(_)) => return args == 0,
                Expr::Term(Term::Prim(p)) => return args < p.arity(),
                Expr::Term(t @ Term::App(..)) => return args == 0 && term_is_value(t),
                Expr::Term(Term::Diverge) | Expr::Lam(..) => return false,
            }
        }
    }
}

fn term_is_value(t: &Term) -> bool {
    let mut head = t;
    let mut args = 0;
    loop {
        match head {
            Term::App(f, a) => {
                if !term_is_value(a) {
                    return false;
                }
                args += 1;
                head = f;
            }
            Term::Lit(_) => return args == 0,
            Term::Prim(p) => return args < p.arity(),
            Term::Diverge => return false,
        }
    }
}

fn eliminate(e: &Expr) -> Expr {
    match e {
        Expr::Lam(x, body) => abstract_lam_free(&eliminate(body), x),
        Expr::App(f, a) => app(eliminate(f), eliminate(a)),
        other => other.clone(),
    }
}

fn abstract_lam_free(body: &Expr, x: &str) -> Expr {
    match body {
        Expr::Var(v) if v == x => Expr::Term(identity()),
        b if !b.mentions(x) && b.is_value_form() => app(prim(Prim::K), b.clone()),
        Expr::App(m, n) => {
            if matches!(n.as_ref(), Expr::Var(v) if v == x) && m.is_value_form() && !m.mentions(x)
            {
                return (**m).clone();
            }
            apps(
                prim(Prim::S),
                [abstract_lam_free(m, x), abstract_lam_free(n, x)],
            )
        }
        // A closed compound term: abstract through its structure.
        Expr::Term(Term::App(f, a)) => abstract_lam_free(
            &app(Expr::Term((**f).clone()), Expr::Term((**a).clone())),
            x,
        ),
        other => app(prim(Prim::K), other.clone()),
    }
}

/// `[var] body`. Other free variables stay free.
pub fn bracket_abstract(body: &Expr, var: &str) -> Expr {
    abstract_lam_free(&eliminate(body), var)
}

/// Compiles a closed expression to a term.
pub fn compile(e: &Expr) -> Result<Term, PcaError> {
    if let Some(v) = e.free_vars().into_iter().next() {
        return Err(PcaError::UnboundVariable(v));
    }
    Ok(to_term(&eliminate(e)))
}

fn to_term(e: &Expr) -> Term {
    match e {
        Expr::Term(t) => t.clone(),
        Expr::App(f, a) => Term::app(to_term(f), to_term(a)),
        Expr::Var(_) | Expr::Lam(..) => unreachable!("checked closed and eliminated"),
    }
}
