//! Combinatory terms and their Gödel coding.
//!
//! Every term is coded as `pair(tag, payload)`:
//!
//! | tag | term            | payload                    |
//! |-----|-----------------|----------------------------|
//! | 0   | `Lit(n)`        | `n`                        |
//! | 1   | `App(f, a)`     | `pair(code f, code a)`     |
//! | 2   | `k`             | 0                          |
//! | 3   | `s`             | 0                          |
//! | 4   | `sN`            | 0                          |
//! | 5   | `pN`            | 0                          |
//! | 6   | `d`             | 0                          |
//! | 7   | `p`             | 0                          |
//! | 8   | `p0`            | 0                          |
//! | 9   | `p1`            | 0                          |
//! | 10  | `fix`           | 0                          |
//! | 11  | diverging term  | 0                          |
//!
//! Decoding is total: any other tag, or a primitive tag with a nonzero
//! payload, decodes to the diverging term.

use std::fmt;

use crate::code::Code;

pub const TAG_LIT: u64 = 0;
pub const TAG_APP: u64 = 1;
pub const TAG_DIVERGE: u64 = 11;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Prim {
    K,
    S,
    SuccN,
    PredN,
    D,
    Pair,
    Proj0,
    Proj1,
    Fix,
}

impl Prim {
    pub const ALL: [Prim; 9] = [
        Prim::K,
        Prim::S,
        Prim::SuccN,
        Prim::PredN,
        Prim::D,
        Prim::Pair,
        Prim::Proj0,
        Prim::Proj1,
        Prim::Fix,
    ];

    pub fn tag(self) -> u64 {
        match self {
            Prim::K => 2,
            Prim::S => 3,
            Prim::SuccN => 4,
            Prim::PredN => 5,
            Prim::D => 6,
            Prim::Pair => 7,
            Prim::Proj0 => 8,
            Prim::Proj1 => 9,
            Prim::Fix => 10,
        }
    }

    fn from_tag(tag: u64) -> Option<Prim> {
        Prim::ALL.into_iter().find(|p| p.tag() == tag)
    }

    /// Number of arguments consumed by one reduction.
    pub fn arity(self) -> usize {
        match self {
            Prim::SuccN | Prim::PredN | Prim::Proj0 | Prim::Proj1 => 1,
            Prim::K | Prim::Pair | Prim::Fix => 2,
            Prim::S => 3,
            Prim::D => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Prim::K => "k",
            Prim::S => "s",
            Prim::SuccN => "sN",
            Prim::PredN => "pN",
            Prim::D => "d",
            Prim::Pair => "p",
            Prim::Proj0 => "p0",
            Prim::Proj1 => "p1",
            Prim::Fix => "fix",
        }
    }

    pub fn from_name(name: &str) -> Option<Prim> {
        Prim::ALL.into_iter().find(|p| p.name() == name)
    }

    pub fn code(self) -> Code {
        Code::pair(Code::small(self.tag()), Code::zero())
    }
}

/// A closed combinatory term.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Prim(Prim),
    Lit(Code),
    App(Box<Term>, Box<Term>),
    Diverge,
}

impl Term {
    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    /// `f a1 a2 ...`, left-associated.
    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub fn lit(c: impl Into<Code>) -> Term {
        Term::Lit(c.into())
    }

    pub fn size(&self) -> usize {
        match self {
            Term::App(f, a) => 1 + f.size() + a.size(),
            _ => 1,
        }
    }
}

pub fn encode(t: &Term) -> Code {
    match t {
        Term::Prim(p) => p.code(),
        Term::Lit(c) => lit_code(c.clone()),
        Term::App(f, a) => app_code(encode(f), encode(a)),
        Term::Diverge => Code::pair(Code::small(TAG_DIVERGE), Code::zero()),
    }
}

/// Full decoding. Total on `Code`.
pub fn decode(c: &Code) -> Term {
    match decode_node(c) {
        Node::Lit(v) => Term::Lit(v),
        Node::App(f, a) => Term::app(decode(&f), decode(&a)),
        Node::Prim(p) => Term::Prim(p),
        Node::Diverge => Term::Diverge,
    }
}

/// Whether `encode(decode(c)) == c`.
pub fn is_canonical(c: &Code) -> bool {
    match decode_node(c) {
        Node::Lit(_) => true,
        Node::App(f, a) => is_canonical(&f) && is_canonical(&a),
        Node::Prim(_) => true,
        Node::Diverge => c.unpair() == (Code::small(TAG_DIVERGE), Code::zero()),
    }
}

/// One level of decoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Node {
    Lit(Code),
    App(Code, Code),
    Prim(Prim),
    Diverge,
}

pub(crate) fn decode_node(c: &Code) -> Node {
    let (tag, payload) = c.unpair();
    match tag.as_u64() {
        Some(TAG_LIT) => Node::Lit(payload),
        Some(TAG_APP) => {
            let (f, a) = payload.unpair();
            Node::App(f, a)
        }
        Some(t) => match Prim::from_tag(t) {
            Some(p) if payload.is_zero() => Node::Prim(p),
            _ => Node::Diverge,
        },
        None => Node::Diverge,
    }
}

pub fn lit_code(v: Code) -> Code {
    Code::pair(Code::small(TAG_LIT), v)
}

pub fn app_code(f: Code, a: Code) -> Code {
    Code::pair(Code::small(TAG_APP), Code::pair(f, a))
}

/// Code of the term `Lit(f) Lit(a1) ... Lit(an)`: a delayed application.
/// Applying the result to `x` behaves as `f a1 ... an x`.
pub fn closure_code(f: &Code, args: &[Code]) -> Code {
    args.iter()
        .fold(lit_code(f.clone()), |acc, a| app_code(acc, lit_code(a.clone())))
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Prim(p) => write!(f, "{}", p.name()),
            Term::Lit(c) => write!(f, "{c}"),
            Term::App(g, a) => write!(f, "(app {g} {a})"),
            Term::Diverge => write!(f, "diverge"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_codes() {
        assert_eq!(Prim::K.code(), Code::small(4));
        assert_eq!(Prim::SuccN.code(), Code::small(16));
        for p in Prim::ALL {
            assert_eq!(decode(&p.code()), Term::Prim(p));
        }
    }

    #[test]
    fn unknown_tags_diverge() {
        assert_eq!(decode(&Code::pair(Code::small(99), Code::zero())), Term::Diverge);
        assert_eq!(decode(&Code::pair(Code::small(2), Code::small(1))), Term::Diverge);
        assert!(!is_canonical(&Code::pair(Code::small(2), Code::small(1))));
    }

    #[test]
    fn encode_decode_roundtrip() {
        let t = Term::apps(Term::Prim(Prim::S), [Term::Prim(Prim::K), Term::lit(7u64)]);
        let c = encode(&t);
        assert_eq!(decode(&c), t);
        assert!(is_canonical(&c));
    }
}
