//! Generators shared by the integration and acceptance suites.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;

use realizer::lworld::HFSet;
use realizer::pca::lambda::Expr;
use realizer::pca::library::library;
use realizer::pca::{Prim, Term};
use realizer::realizability::{Formula, SetTerm};
use realizer::vcodes::{v_finite, v_numeral, v_opair, v_upair, VCode};
use realizer::Code;

/// Fin-indexed set codes of depth ≤ `depth`, at most `width` elements per
/// level.
pub fn random_fin_vcode(rng: &mut impl Rng, depth: u32, width: usize) -> VCode {
    if depth == 0 {
        return v_finite(&[]);
    }
    match rng.gen_range(0..6) {
        0 => v_numeral(rng.gen_range(0..=width.min(depth as usize + 1)) as u64),
        1 => {
            let a = random_fin_vcode(rng, depth - 1, width);
            let b = random_fin_vcode(rng, depth - 1, width);
            v_upair(&a, &b)
        }
        2 if depth >= 3 => {
            let a = random_fin_vcode(rng, depth - 2, width);
            let b = random_fin_vcode(rng, depth - 2, width);
            v_opair(&a, &b)
        }
        _ => {
            let n = rng.gen_range(0..=width);
            let elems: Vec<VCode> = (0..n)
                .map(|_| random_fin_vcode(rng, depth - 1, width))
                .collect();
            v_finite(&elems)
        }
    }
}

/// Every list of length ≤ `max_len` over `pool`, in length-lexicographic
/// order.
pub fn lists_over<T: Clone>(pool: &[T], max_len: usize) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for l in &frontier {
            for x in pool {
                let mut l2: Vec<T> = l.clone();
                l2.push(x.clone());
                next.push(l2);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// The enumerated family of Fin-indexed codes of depth ≤ 3 with indices
/// ≤ 4: every table code of depth ≤ 2, and at depth 3 every list of
/// length ≤ 4 over a fixed pool of six depth-≤2 codes, plus numerals
/// `0..=4`.
pub fn fin_vcode_family() -> Vec<VCode> {
    let empty = v_finite(&[]);
    let depth1: Vec<VCode> = lists_over(std::slice::from_ref(&empty), 4)
        .iter()
        .map(|l| v_finite(l))
        .collect();
    let depth2: Vec<VCode> = lists_over(&depth1[..3], 4)
        .iter()
        .map(|l| v_finite(l))
        .collect();
    let pool3 = [
        empty.clone(),
        depth1[1].clone(),
        v_numeral(2),
        depth2[7].clone(),
        v_upair(&v_numeral(1), &empty),
        depth2[depth2.len() - 1].clone(),
    ];
    let depth3: Vec<VCode> = lists_over(&pool3, 4).iter().map(|l| v_finite(l)).collect();
    let mut all = Vec::new();
    all.extend(depth1);
    all.extend(depth2);
    all.extend(depth3);
    all.extend((0..=4).map(v_numeral));
    all
}

/// Total programs: applying any of them to any code converges quickly.
pub fn total_programs() -> Vec<Code> {
    let c = |v: u64| Code::small(v);
    let part = |p: Prim, a: Code| realizer::pca::encode(&Term::app(Term::Prim(p), Term::Lit(a)));
    vec![
        Prim::SuccN.code(),
        Prim::PredN.code(),
        Prim::Proj0.code(),
        Prim::Proj1.code(),
        Prim::K.code(),
        Prim::Pair.code(),
        part(Prim::K, c(7)),
        part(Prim::Pair, c(3)),
        part(Prim::K, Code::pair(c(1_000_000_007), c(u64::MAX))),
        library().id.clone(),
    ]
}

/// A random code, sometimes beyond `u64`.
pub fn random_code(rng: &mut impl Rng) -> Code {
    match rng.gen_range(0..4) {
        0 => Code::small(rng.gen_range(0..16)),
        1 => Code::small(rng.gen()),
        2 => Code::pair(Code::small(rng.gen()), Code::small(rng.gen())),
        _ => Code::pair(random_small_pair(rng), Code::small(rng.gen_range(0..1000))),
    }
}

fn random_small_pair(rng: &mut impl Rng) -> Code {
    Code::pair(Code::small(rng.gen()), Code::small(rng.gen()))
}

/// Random closed-or-open λ-expressions over the primitives, small literals
/// and the variables `x`, `y`, `z`.
pub fn random_expr(rng: &mut impl Rng, depth: u32) -> Expr {
    let leaf = |rng: &mut dyn rand::RngCore| -> Expr {
        match rng.gen_range(0..4) {
            0 => Expr::Term(Term::Prim(*Prim::ALL.choose(rng).expect("nonempty"))),
            1 => Expr::Term(Term::Lit(Code::small(rng.gen_range(0..100)))),
            2 => Expr::Term(Term::Diverge),
            _ => Expr::Var(["x", "y", "z"].choose(rng).expect("nonempty").to_string()),
        }
    };
    if depth == 0 {
        return leaf(rng);
    }
    match rng.gen_range(0..4) {
        0 => leaf(rng),
        1 => Expr::Lam(
            ["x", "y", "z"].choose(rng).expect("nonempty").to_string(),
            Box::new(random_expr(rng, depth - 1)),
        ),
        _ => Expr::App(
            Box::new(random_expr(rng, depth - 1)),
            Box::new(random_expr(rng, depth - 1)),
        ),
    }
}

pub fn random_set_term(rng: &mut impl Rng, depth: u32, vars: &[&str]) -> SetTerm {
    let leaf = |rng: &mut dyn rand::RngCore| -> SetTerm {
        match rng.gen_range(0..5) {
            0 => SetTerm::Numeral(rng.gen_range(0..10)),
            1 => SetTerm::Omega,
            2 => SetTerm::Alpha0,
            3 => SetTerm::PBar,
            _ if vars.is_empty() => SetTerm::Code(Code::small(rng.gen_range(0..1000))),
            _ => SetTerm::var(vars.choose(rng).expect("nonempty")),
        }
    };
    if depth == 0 {
        return leaf(rng);
    }
    macro_rules! sub {
        () => {
            Box::new(random_set_term(rng, depth - 1, vars))
        };
    }
    match rng.gen_range(0..6) {
        0 => SetTerm::F0(sub!()),
        1 => SetTerm::UPair(sub!(), sub!()),
        2 => SetTerm::OPair(sub!(), sub!()),
        3 => {
            let n = rng.gen_range(0..3);
            SetTerm::Finite((0..n).map(|_| *sub!()).collect())
        }
        _ => leaf(rng),
    }
}

pub fn random_formula(rng: &mut impl Rng, depth: u32) -> Formula {
    const VARS: [&str; 3] = ["a", "b", "c"];
    if depth == 0 {
        let a = random_set_term(rng, 1, &VARS);
        let b = random_set_term(rng, 1, &VARS);
        return if rng.gen() {
            Formula::eq(a, b)
        } else {
            Formula::member(a, b)
        };
    }
    macro_rules! sub {
        () => {
            random_formula(rng, depth - 1)
        };
    }
    let x = VARS.choose(rng).expect("nonempty").to_string();
    match rng.gen_range(0..9) {
        0 => sub!().not(),
        1 => sub!().and(sub!()),
        2 => sub!().or(sub!()),
        3 => sub!().implies(sub!()),
        4 => Formula::BAll(x, random_set_term(rng, 1, &VARS), Box::new(sub!())),
        5 => Formula::BEx(x, random_set_term(rng, 1, &VARS), Box::new(sub!())),
        6 => Formula::All(x, Box::new(sub!())),
        7 => Formula::Ex(x, Box::new(sub!())),
        _ => random_formula(rng, 0),
    }
}

/// A random hereditarily finite set of rank exactly `rank`.
pub fn random_hfset(rng: &mut impl Rng, rank: u32) -> HFSet {
    realizer::frontend::random_hfset(rng, rank)
}

/// All hereditarily finite sets of rank < `n` (the elements of `V_n`).
pub fn v_stage(n: usize) -> Vec<HFSet> {
    let mut stage = vec![];
    for _ in 0..n {
        let k = stage.len();
        assert!(k <= 16, "V_n grows too fast beyond n = 5");
        stage = (0u32..(1 << k))
            .map(|mask| {
                HFSet::new(
                    stage
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, s)| HFSet::clone(s)),
                )
            })
            .collect();
    }
    stage
}
