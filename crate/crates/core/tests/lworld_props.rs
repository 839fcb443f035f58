//! Hereditarily finite sets, definable subsets, L-stages and σ-codes.

mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use realizer::lworld::{
    alpha_star, decode_sigma, def_subsets, encode_sigma, l_stage, ordinals_of, HFSet, SigmaCode,
};

fn hfset(max_rank: u32) -> impl Strategy<Value = HFSet> {
    (any::<u64>(), 0..=max_rank)
        .prop_map(|(s, r)| common::random_hfset(&mut ChaCha8Rng::seed_from_u64(s), r))
}

proptest! {
    #[test]
    fn sigma_round_trips(s in hfset(5)) {
        let code = encode_sigma(&s, None).unwrap();
        prop_assert_eq!(decode_sigma(&code).unwrap(), s);
    }

    #[test]
    fn sigma_codes_serialize(s in hfset(4)) {
        let code = encode_sigma(&s, None).unwrap();
        let back: SigmaCode = serde_json::from_str(&serde_json::to_string(&code).unwrap()).unwrap();
        prop_assert_eq!(back, code);
    }

    #[test]
    fn any_surjective_enumeration_decodes_the_same(s in hfset(4), rot in 0usize..8) {
        let mut rest: Vec<HFSet> = s.closure_bfs().into_iter().skip(1).collect();
        if !rest.is_empty() {
            let k = rot % rest.len();
            rest.rotate_left(k);
        }
        let mut f = vec![s.clone()];
        f.extend(rest);
        let code = encode_sigma(&s, Some(&f)).unwrap();
        prop_assert_eq!(decode_sigma(&code).unwrap(), s);
    }

    #[test]
    fn display_parses_back(s in hfset(5)) {
        prop_assert_eq!(s.to_string().parse::<HFSet>().unwrap(), s);
    }

    #[test]
    fn def_contains_the_trivial_subsets(x in hfset(3)) {
        prop_assume!(x.len() <= 4);
        let subsets = def_subsets(x.elements()).unwrap();
        prop_assert!(subsets.contains(&HFSet::empty()));
        prop_assert!(subsets.contains(&x));
        for s in &subsets {
            prop_assert!(s.is_subset(&x));
        }
    }

    #[test]
    fn alpha_star_unions_to_alpha(n in 0usize..40) {
        let alpha = HFSet::ordinal(n);
        prop_assert_eq!(alpha_star(&alpha).unwrap().big_union(), alpha);
    }
}

#[test]
fn stages_are_cumulative_and_transitive() {
    let mut previous = l_stage(0).unwrap();
    for n in 1..=4 {
        let stage = l_stage(n).unwrap();
        assert!(previous.is_subset(&stage));
        let as_set = HFSet::new(stage.iter().cloned());
        assert!(as_set.is_transitive(), "L_{n} is transitive");
        assert_eq!(ordinals_of(&stage).len(), n);
        previous = stage;
    }
}

#[test]
fn ill_founded_codes_are_rejected() {
    let code = SigmaCode {
        u: [0, 1].into(),
        sigma: [realizer::code::pair_u64(0, 1).unwrap(), realizer::code::pair_u64(1, 0).unwrap()].into(),
    };
    assert!(decode_sigma(&code).is_err());
}
