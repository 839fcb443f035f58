//! The type universe and its membership relation.

mod common;

use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use realizer::diagonal::{self, Catalogue};
use realizer::pca::Fuel;
use realizer::realizability::{constant_program, denotation};
use realizer::universe::{Coverage, Truncation, TypeCode, Universe, Verdict};
use realizer::vcodes::{eq_type, VCode};
use realizer::Code;

fn universe() -> Universe {
    Universe::new(Truncation::new(4, 8, Fuel(400_000)))
}

fn fin_vcode() -> impl Strategy<Value = VCode> {
    any::<u64>().prop_map(|s| common::random_fin_vcode(&mut ChaCha8Rng::seed_from_u64(s), 2, 3))
}

proptest! {
    #[test]
    fn fin_membership_is_less_than(k in 0u64..500, n in 0u64..500) {
        let v = universe().din(&Code::small(k), &TypeCode::fin(n).code).unwrap();
        prop_assert_eq!(v, Verdict::from_bool(k < n));
    }

    #[test]
    fn exhaustive_members_are_exactly_the_realised(n in 0u64..6, m in 0u64..6) {
        let u = universe();
        let t = TypeCode::sigma(&TypeCode::fin(n).code, &constant_program(&TypeCode::fin(m).code)).code;
        let members = u.members(&t).unwrap();
        prop_assert_eq!(members.coverage, Coverage::Exhaustive);
        prop_assert_eq!(members.items.len() as u64, n * m);
        for k in &members.items {
            prop_assert_eq!(u.din(k, &t).unwrap(), Verdict::Realized);
        }
        prop_assert_eq!(u.provably_empty(&t).unwrap(), n * m == 0);
    }

    #[test]
    fn empty_types_have_no_realised_members(a in fin_vcode(), b in fin_vcode(), seed in any::<u64>()) {
        let u = universe();
        let t = eq_type(&a, &b).code;
        if u.provably_empty(&t).unwrap() {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..8 {
                let k = common::random_code(&mut rng);
                prop_assert!(!u.din(&k, &t).unwrap().is_realized());
            }
        }
    }

    #[test]
    fn equality_types_are_inhabited_iff_the_sets_are_equal(a in fin_vcode(), b in fin_vcode()) {
        let u = universe();
        let t = eq_type(&a, &b).code;
        let equal = denotation(&a, Fuel::DEFAULT).unwrap() == denotation(&b, Fuel::DEFAULT).unwrap();
        prop_assert_eq!(!u.provably_empty(&t).unwrap(), equal);
    }

    #[test]
    fn fin_indexed_codes_are_in_v(a in fin_vcode()) {
        prop_assert_eq!(universe().check_in_v(a.code()), Verdict::Realized);
    }
}

#[test]
fn verdicts_persist_along_truncations() {
    let h = Arc::new(diagonal::build_h(&Catalogue::standard(), 8, Fuel::DEFAULT).unwrap().h_prefix);
    let small = Universe::new(Truncation::new(2, 4, Fuel(50_000))).with_path(h.clone());
    let large = Universe::new(Truncation::new(6, 10, Fuel(1_000_000))).with_path(h);
    let types = [TypeCode::nat().code, TypeCode::dist().code, TypeCode::fin(4u64).code];
    for t in &types {
        for k in 0..64u64 {
            let k = Code::small(k);
            if let Some(b) = small.din(&k, t).unwrap().decided() {
                assert_eq!(large.din(&k, t).unwrap().decided(), Some(b), "{k} in {t}");
            }
        }
    }
}

#[test]
fn non_types_are_rejected() {
    let u = universe();
    assert!(u.din(&Code::small(0), &Code::small(10)).is_err());
    assert!(u.check_in_u(&Code::small(10)).is_refuted());
}
