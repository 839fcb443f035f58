//! Compiled constants are pinned bit for bit.

use realizer::frontend::{run_cli, Cli};

use clap::Parser;

fn json_of(args: &[&str]) -> serde_json::Value {
    let mut argv = vec!["realizer", "--json"];
    argv.extend_from_slice(args);
    run_cli(&Cli::parse_from(argv)).unwrap().json
}

#[test]
fn library_codes_match_golden() {
    let golden: serde_json::Value = serde_json::from_str(include_str!("golden/library.json")).unwrap();
    assert_eq!(json_of(&["pca", "library"]), golden);
}

#[test]
fn canonical_codes_match_golden() {
    let golden: serde_json::Value = serde_json::from_str(include_str!("golden/canonical.json")).unwrap();
    assert_eq!(json_of(&["vcode", "canonical"]), golden);
}
