//! Equational laws of the combinators and of compiled λ-terms.

mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use realizer::pca::lambda::{app, apps, compile, lam, lit, pr, prim, var};
use realizer::pca::machine::{apply, apply_all, run, AppResult, Fuel, Outcome};
use realizer::pca::{decode, encode, fixpoint, pair, Prim};
use realizer::Code;

fn code() -> impl Strategy<Value = Code> {
    any::<u64>().prop_map(|seed| common::random_code(&mut ChaCha8Rng::seed_from_u64(seed)))
}

fn program() -> impl Strategy<Value = Code> {
    let pool = common::total_programs();
    (0..pool.len()).prop_map(move |i| pool[i].clone())
}

const FUEL: Fuel = Fuel(100_000);

proptest! {
    #[test]
    fn k_returns_its_first_argument(a in code(), b in code()) {
        prop_assert_eq!(apply_all(&Prim::K.code(), &[a.clone(), b], FUEL), AppResult::Value(a));
    }

    #[test]
    fn s_distributes(f in program(), g in program(), x in code()) {
        let lhs = run(&Prim::S.code(), &[f.clone(), g.clone(), x.clone()], FUEL).outcome;
        let fx = apply(&f, &x, FUEL).value().unwrap();
        let gx = apply(&g, &x, FUEL).value().unwrap();
        prop_assert_eq!(lhs, run(&fx, &[gx], FUEL).outcome);
    }

    #[test]
    fn d_decides_equality(a in code(), b in code(), x in code(), y in code()) {
        let d = Prim::D.code();
        prop_assert_eq!(apply_all(&d, &[a.clone(), b.clone(), x.clone(), x.clone()], FUEL), AppResult::Value(a.clone()));
        let expected = if x == y { a.clone() } else { b.clone() };
        prop_assert_eq!(apply_all(&d, &[a, b, x, y], FUEL), AppResult::Value(expected));
    }

    #[test]
    fn pairing_combinators(a in code(), b in code()) {
        let p = apply_all(&Prim::Pair.code(), &[a.clone(), b.clone()], FUEL).value().unwrap();
        prop_assert_eq!(&p, &pair(&a, &b));
        prop_assert_eq!(apply(&Prim::Proj0.code(), &p, FUEL), AppResult::Value(a));
        prop_assert_eq!(apply(&Prim::Proj1.code(), &p, FUEL), AppResult::Value(b));
    }

    #[test]
    fn compiled_lambdas_beta_reduce(a in code(), b in code()) {
        // λx y. p y (p x y)
        let e = lam(&["x", "y"], pr(var("y"), pr(var("x"), var("y"))));
        let f = encode(&compile(&e).unwrap());
        let got = apply_all(&f, &[a.clone(), b.clone()], FUEL).value().unwrap();
        prop_assert_eq!(got, pair(&b, &pair(&a, &b)));
    }

    #[test]
    fn abstraction_does_not_evaluate_early(a in code()) {
        // λx. diverge-in-body is still a value; applying it diverges
        let e = lam(&["x"], app(prim(Prim::Proj0), app(lit(0u64), var("x"))));
        let f = encode(&compile(&e).unwrap());
        prop_assert_eq!(run(&f, &[a], FUEL).outcome, Outcome::Diverges);
    }

    #[test]
    fn fixpoint_unfolds(x in code()) {
        // f = λe x. p e x, so fix f x = p (fix f) x
        let f = encode(&compile(&lam(&["e", "x"], pr(var("e"), var("x")))).unwrap());
        let e = fixpoint(&f);
        let got = apply(&e, &x, FUEL).value().unwrap();
        prop_assert_eq!(got, pair(&e, &x));
    }

    #[test]
    fn term_codes_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = common::random_expr(&mut rng, 5);
        if let Ok(t) = compile(&e) {
            prop_assert_eq!(decode(&encode(&t)), t);
        }
    }

    #[test]
    fn application_is_deterministic(f in program(), x in code()) {
        let first = run(&f, std::slice::from_ref(&x), FUEL);
        prop_assert_eq!(first, run(&f, &[x], FUEL));
    }
}

#[test]
fn multi_argument_application_curries() {
    let add3 = encode(&compile(&lam(&["a", "b", "c"], apps(prim(Prim::Pair), [var("a"), pr(var("b"), var("c"))]))).unwrap());
    let c = Code::small;
    let partial = apply(&add3, &c(1), FUEL).value().unwrap();
    let partial = apply(&partial, &c(2), FUEL).value().unwrap();
    assert_eq!(apply(&partial, &c(3), FUEL), apply_all(&add3, &[c(1), c(2), c(3)], FUEL));
}
