//! Pairing and the code representation.

mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use realizer::code::{pair_u64, unpair_u64};
use realizer::pca::{pair, unpair0, unpair1};
use realizer::Code;

fn code() -> impl Strategy<Value = Code> {
    any::<u64>().prop_map(|seed| common::random_code(&mut ChaCha8Rng::seed_from_u64(seed)))
}

proptest! {
    #[test]
    fn projections_invert_pair(a in code(), b in code()) {
        let p = pair(&a, &b);
        prop_assert_eq!(unpair0(&p), a);
        prop_assert_eq!(unpair1(&p), b);
    }

    #[test]
    fn pair_of_projections_is_identity(c in code()) {
        prop_assert_eq!(pair(&unpair0(&c), &unpair1(&c)), c);
    }

    #[test]
    fn u64_pairing_agrees_with_codes(a in 0u64..1 << 31, b in 0u64..1 << 31) {
        let p = pair_u64(a, b).expect("fits in u64");
        prop_assert_eq!(Code::small(p), pair(&Code::small(a), &Code::small(b)));
        prop_assert_eq!(unpair_u64(p), (a, b));
    }

    #[test]
    fn pair_is_bracketed_by_squares(a in 0u64..1 << 20, b in 0u64..1 << 20) {
        let m = a.max(b);
        let p = pair_u64(a, b).unwrap();
        prop_assert!(m * m <= p && p < (m + 1) * (m + 1));
    }

    #[test]
    fn successor_and_predecessor(c in code()) {
        prop_assert_eq!(c.succ().pred(), c.clone());
        prop_assert!(c.succ() > c);
    }

    #[test]
    fn display_parses_back(c in code()) {
        let text = c.to_string();
        prop_assert_eq!(text.parse::<Code>().unwrap(), c);
    }

    #[test]
    fn big_integer_view_round_trips(c in code()) {
        prop_assert_eq!(Code::from_biguint(&c.to_biguint()), c);
    }

    #[test]
    fn order_agrees_with_numeric_value(a in code(), b in code()) {
        prop_assert_eq!(a.cmp(&b), a.to_biguint().cmp(&b.to_biguint()));
    }
}
