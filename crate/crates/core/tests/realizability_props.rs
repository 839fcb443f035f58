//! Soundness of the realisability checker against native truth.

mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use realizer::pca::library::library;
use realizer::pca::Fuel;
use realizer::realizability::{
    denotation, native_truth, CheckBudget, Checker, Env, Formula, SetTerm,
};
use realizer::universe::Truncation;
use realizer::vcodes::VCode;

fn checker() -> Checker {
    Checker::new(CheckBudget::with_truncation(Truncation::new(4, 8, Fuel(400_000))))
}

fn fin_vcode() -> impl Strategy<Value = VCode> {
    any::<u64>().prop_map(|s| common::random_fin_vcode(&mut ChaCha8Rng::seed_from_u64(s), 2, 3))
}

fn env(pairs: &[(&str, &VCode)]) -> Env {
    pairs.iter().map(|(x, v)| (x.to_string(), (*v).clone())).collect()
}

fn atoms() -> Vec<Formula> {
    let (a, b) = (SetTerm::var("a"), SetTerm::var("b"));
    vec![
        Formula::member(a.clone(), b.clone()),
        Formula::eq(a.clone(), b.clone()),
        Formula::subset(a.clone(), b.clone()),
        Formula::bex("x", a.clone(), Formula::member(SetTerm::var("x"), b.clone())),
        Formula::member(a.clone(), b.clone()).not(),
        Formula::member(a.clone(), b.clone()).or(Formula::eq(a.clone(), b.clone())),
        Formula::subset(a.clone(), b.clone()).implies(Formula::eq(a, b)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decided_inhabitation_matches_native_truth(a in fin_vcode(), b in fin_vcode()) {
        let ch = checker();
        let env = env(&[("a", &a), ("b", &b)]);
        for phi in atoms() {
            let truth = native_truth(&phi, &env, Fuel::DEFAULT).unwrap();
            let report = ch.inhabited(&phi, &env).unwrap();
            if let Some(decided) = report.verdict.decided() {
                prop_assert_eq!(decided, truth, "{}", phi);
            }
        }
    }

    #[test]
    fn realised_formulas_are_true(a in fin_vcode(), b in fin_vcode(), seed in any::<u64>()) {
        let ch = checker();
        let env = env(&[("a", &a), ("b", &b)]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for phi in atoms() {
            let e = common::random_code(&mut rng);
            if ch.check(&e, &phi, &env).unwrap().verdict.is_realized() {
                prop_assert!(native_truth(&phi, &env, Fuel::DEFAULT).unwrap());
            }
        }
    }

    #[test]
    fn iota_realises_reflexivity(a in fin_vcode()) {
        let env = env(&[("a", &a)]);
        let phi = Formula::eq(SetTerm::var("a"), SetTerm::var("a"));
        let r = checker().check(&library().iota, &phi, &env).unwrap();
        prop_assert!(r.verdict.is_realized() && r.is_absolute());
    }

    #[test]
    fn found_realisers_check(a in fin_vcode(), b in fin_vcode()) {
        let ch = checker();
        let env = env(&[("a", &a), ("b", &b)]);
        for phi in atoms() {
            if let Some(e) = ch.find_realiser(&phi, &env).unwrap() {
                prop_assert!(ch.check(&e, &phi, &env).unwrap().verdict.is_realized());
            }
        }
    }

    #[test]
    fn denotations_are_extensional(a in fin_vcode()) {
        // a and the table of its elements denote the same set
        let set = denotation(&a, Fuel::DEFAULT).unwrap();
        let u = realizer::universe::Universe::new(Truncation::new(4, 8, Fuel::DEFAULT));
        let members = u.members(&a.index()).unwrap();
        let elems: Vec<VCode> = members.items.iter().map(|k| a.element(k, Fuel::DEFAULT).unwrap()).collect();
        let rebuilt = realizer::vcodes::v_finite(&elems);
        prop_assert_eq!(denotation(&rebuilt, Fuel::DEFAULT).unwrap(), set);
    }

    #[test]
    fn printed_formulas_instantiate_stably(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = common::random_formula(&mut rng, 3);
        prop_assert!(phi.depth() <= 3);
        let empty = Env::new();
        if phi.free_vars().is_empty() {
            if let Ok(inst) = phi.instantiate(&empty) {
                prop_assert_eq!(inst.free_vars(), phi.free_vars());
            }
        }
    }
}

#[test]
fn unbounded_universal_statements_are_never_realised() {
    let ch = checker();
    let phi = Formula::all("x", Formula::eq(SetTerm::var("x"), SetTerm::var("x")));
    let constant = realizer::realizability::constant_program(&library().iota);
    let r = ch.check(&constant, &phi, &Env::new()).unwrap();
    assert!(r.verdict.is_unknown(), "{r}");
    // ι itself maps a to something that is not a realiser of a = a
    let r = ch.check(&library().iota, &phi, &Env::new()).unwrap();
    assert!(r.verdict.is_refuted(), "{r}");
}
