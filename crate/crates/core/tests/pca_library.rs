use realizer::pca::lambda::{app, apps, compile, lam, lit, prim, var};
use realizer::pca::library::library;
use realizer::pca::machine::{apply, apply_all, run, AppResult, Fuel, Outcome};
use realizer::pca::{encode, fixpoint, pair, unpair0, Prim};
use realizer::Code;

fn c(v: u64) -> Code {
    Code::small(v)
}

fn compiled(e: &realizer::pca::lambda::Expr) -> Code {
    encode(&compile(e).unwrap())
}

#[test]
fn identity_lambda() {
    let id = compiled(&lam(&["x"], var("x")));
    assert_eq!(apply(&id, &c(7), Fuel::DEFAULT), AppResult::Value(c(7)));
}

#[test]
fn sigma_builds_tagged_pair() {
    let lib = library();
    let got = apply_all(&lib.sigma, &[c(4), c(9)], Fuel::DEFAULT).value().unwrap();
    assert_eq!(got, pair(&c(2), &pair(&c(4), &c(9))));
}

#[test]
fn constant_composition() {
    // (λx.k) applied to anything, then to (a, b), gives a
    let f = compiled(&lam(&["x"], prim(Prim::K)));
    let k = apply(&f, &c(123), Fuel::DEFAULT).value().unwrap();
    assert_eq!(apply_all(&k, &[c(3), c(8)], Fuel::DEFAULT), AppResult::Value(c(3)));
}

#[test]
fn fixpoint_of_constant_identity() {
    let f = compiled(&lam(&["e", "x"], var("x")));
    let e = fixpoint(&f);
    for x in 0..3 {
        assert_eq!(apply(&e, &c(x), Fuel::DEFAULT), AppResult::Value(c(x)));
    }
}

#[test]
fn fixpoint_equation_holds() {
    let f = compiled(&lam(&["e", "x"], apps(prim(Prim::Pair), [var("x"), lit(1u64)])));
    let e = fixpoint(&f);
    let fe = apply(&f, &e, Fuel::DEFAULT).value().unwrap();
    for x in 0..5 {
        assert_eq!(apply(&e, &c(x), Fuel::DEFAULT), apply(&fe, &c(x), Fuel::DEFAULT));
    }
}

#[test]
fn delta_and_iota() {
    let lib = library();
    assert_eq!(unpair0(&lib.iota), lib.delta);
    assert_eq!(
        apply(&lib.delta, &c(4), Fuel::DEFAULT),
        AppResult::Value(pair(&c(4), &lib.iota))
    );
}

#[test]
fn factorial_of_three() {
    let lib = library();
    assert_eq!(apply(&lib.factorial, &c(3), Fuel::DEFAULT), AppResult::Value(c(6)));
    assert_eq!(apply(&lib.factorial, &c(0), Fuel::DEFAULT), AppResult::Value(c(1)));
    assert_eq!(apply_all(&lib.minus, &[c(9), c(4)], Fuel::DEFAULT), AppResult::Value(c(5)));
    assert_eq!(apply_all(&lib.minus, &[c(2), c(4)], Fuel::DEFAULT), AppResult::Value(c(0)));
}

#[test]
fn self_application_diverges_out_of_fuel() {
    let omega = compiled(&lam(&["x"], app(var("x"), var("x"))));
    let r = run(&omega, std::slice::from_ref(&omega), Fuel(10_000));
    assert_eq!(r.outcome, Outcome::OutOfFuel);
}
