//! A workbench for a Kleene-style number realisability model of
//! constructive set theory.
//!
//! The crate is organised bottom-up:
//!
//! * [`code`]: naturals with a pair-tree representation for large values;
//! * [`pca`]: combinators, coding of terms, fuel-bounded application,
//!   bracket abstraction and the compiled program library;
//! * [`universe`]: the type universe `U`, the set universe `V` and the
//!   membership relations on types;
//! * [`vcodes`]: canonical set codes (numerals, ω, pairs, equality types,
//!   the internal pairing function, α₀);
//! * [`realizability`]: formulas and the three-valued realisability checker;
//! * [`diagonal`]: sequences, requirements and the construction of a
//!   non-computable path `h`;
//! * [`lworld`]: hereditarily finite sets, definable subsets, finite
//!   constructible stages and σ-coding;
//! * [`frontend`]: s-expression syntax and the command-line driver.

pub mod code;
pub mod diagonal;
pub mod frontend;
pub mod lworld;
pub mod pca;
pub mod realizability;
pub mod universe;
pub mod vcodes;

pub use code::Code;
