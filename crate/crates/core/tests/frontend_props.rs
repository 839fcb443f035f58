//! The surface syntax and the command-line binary.

mod common;

use std::process::Command;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use realizer::frontend::{normalize, parse_formula, parse_set_term, parse_term, print_term};

proptest! {
    #[test]
    fn terms_round_trip(seed in any::<u64>()) {
        let e = normalize(&common::random_expr(&mut ChaCha8Rng::seed_from_u64(seed), 6));
        let text = print_term(&e);
        prop_assert_eq!(parse_term(&text).unwrap(), e);
    }

    #[test]
    fn formulas_round_trip(seed in any::<u64>()) {
        let phi = common::random_formula(&mut ChaCha8Rng::seed_from_u64(seed), 4);
        prop_assert_eq!(parse_formula(&phi.to_string()).unwrap(), phi);
    }

    #[test]
    fn set_terms_round_trip(seed in any::<u64>()) {
        let t = common::random_set_term(&mut ChaCha8Rng::seed_from_u64(seed), 3, &["u", "v"]);
        prop_assert_eq!(parse_set_term(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn garbage_is_rejected_without_panicking(text in "[()a-z0-9 =<>,-]{0,40}") {
        let _ = parse_term(&text);
        let _ = parse_formula(&text);
        let _ = parse_set_term(&text);
    }
}

fn realizer(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_realizer"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn binary_pairs_and_decodes() {
    assert_eq!(realizer(&["pca", "pair", "2", "1"]), (0, "5\n".into(), String::new()));
    let (code, out, _) = realizer(&["lworld", "decode", "{0,1,2}", "{3,4,7}"]);
    assert_eq!((code, out.as_str()), (0, "{{},{{}}}\n"));
}

#[test]
fn binary_exit_codes() {
    assert_eq!(realizer(&["pca", "compile", "(app k"]).0, 2);
    assert_eq!(realizer(&["no-such-command"]).0, 2);
    assert_eq!(realizer(&["lworld", "lstage", "9"]).0, 1);
    assert_eq!(realizer(&["--help"]).0, 0);
}

#[test]
fn binary_json_is_stable() {
    let args = ["--json", "diagonal", "build", "--stages", "6"];
    let first = realizer(&args);
    assert_eq!(first.0, 0);
    assert_eq!(first, realizer(&args));
    let v: serde_json::Value = serde_json::from_str(&first.1).unwrap();
    assert_eq!(v["satisfied"], 6);
}
