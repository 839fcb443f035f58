//! Surface syntax and the command-line interface.
//!
//! Terms, set terms and formulas are written as s-expressions:
//!
//! ```text
//! term     := nat | prim | library-name | diverge | var
//!           | (app term term ...) | (lam var ... term)
//! set-term := nat | omega | alpha0 | pbar | var | (f0 set-term)
//!           | (upair set-term set-term) | (opair set-term set-term)
//!           | (set set-term ...) | (code nat)
//! formula  := (= s t) | (in s t) | (not φ) | (and φ ψ) | (or φ ψ) | (-> φ ψ)
//!           | (all x s φ) | (ex x s φ) | (ALL x φ) | (EX x φ)
//! ```
//!
//! A bare natural is a literal code in terms and the numeral `n^V` in set
//! terms. Codes too large for decimal are written as pair trees `<a,b>`.

use std::collections::BTreeSet;
use std::fmt;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::code::Code;
use crate::diagonal::machines::impostors;
use crate::diagonal::{self, Catalogue, Machine, StepBound};
use crate::lworld::{self, HFSet, SigmaCode};
use crate::pca::lambda::{compile, Expr};
use crate::pca::library::library;
use crate::pca::machine::{run, Outcome};
use crate::pca::term::{decode, encode, Term};
use crate::pca::{self, Fuel, Prim};
use crate::realizability::{
    self, incomparability_oracle, CheckBudget, Checker, Env, Formula, SetTerm,
};
use crate::universe::{Truncation, Universe};
use crate::vcodes::{self, VCode};

// ---------------------------------------------------------------- s-expressions

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl ParseError {
    fn new(pos: usize, msg: impl Into<String>) -> ParseError {
        ParseError {
            pos,
            msg: msg.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sexp {
    Atom(String, usize),
    List(Vec<Sexp>, usize),
}

impl Sexp {
    fn pos(&self) -> usize {
        match self {
            Sexp::Atom(_, p) | Sexp::List(_, p) => *p,
        }
    }
}

/// Parses exactly one s-expression.
pub fn parse_sexp(text: &str) -> Result<Sexp, ParseError> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let skip = |pos: &mut usize| {
        while *pos < bytes.len() && (bytes[*pos] as char).is_ascii_whitespace() {
            *pos += 1;
        }
    };
    let mut stack: Vec<(Vec<Sexp>, usize)> = Vec::new();
    let mut result = None;
    loop {
        skip(&mut pos);
        if pos >= bytes.len() {
            break;
        }
        if result.is_some() {
            return Err(ParseError::new(pos, "trailing input"));
        }
        let item = match bytes[pos] {
            b'(' => {
                stack.push((Vec::new(), pos));
                pos += 1;
                continue;
            }
            b')' => {
                let Some((items, start)) = stack.pop() else {
                    return Err(ParseError::new(pos, "unbalanced ')'"));
                };
                pos += 1;
                Sexp::List(items, start)
            }
            _ => {
                let start = pos;
                while pos < bytes.len()
                    && !(bytes[pos] as char).is_ascii_whitespace()
                    && bytes[pos] != b'('
                    && bytes[pos] != b')'
                {
                    pos += 1;
                }
                Sexp::Atom(text[start..pos].to_owned(), start)
            }
        };
        match stack.last_mut() {
            Some((items, _)) => items.push(item),
            None => result = Some(item),
        }
    }
    if let Some((_, start)) = stack.last() {
        return Err(ParseError::new(*start, "unclosed '('"));
    }
    result.ok_or_else(|| ParseError::new(pos, "empty input"))
}

fn is_nat(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

/// A decimal natural or a pair-tree literal `<a,b>`.
fn is_code_literal(s: &str) -> bool {
    is_nat(s) || s.starts_with('<')
}

fn parse_code(s: &str, pos: usize) -> Result<Code, ParseError> {
    s.parse()
        .map_err(|_| ParseError::new(pos, format!("bad natural {s:?}")))
}

fn identifier(s: &Sexp, reserved: impl Fn(&str) -> bool) -> Result<String, ParseError> {
    match s {
        Sexp::Atom(a, p) => {
            let ok = a
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && a.chars()
                    .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '\''));
            if !ok {
                Err(ParseError::new(*p, format!("{a:?} is not an identifier")))
            } else if reserved(a) {
                Err(ParseError::new(*p, format!("{a:?} is reserved")))
            } else {
                Ok(a.clone())
            }
        }
        Sexp::List(_, p) => Err(ParseError::new(*p, "expected an identifier")),
    }
}

fn head(items: &[Sexp], pos: usize) -> Result<&str, ParseError> {
    match items.first() {
        Some(Sexp::Atom(a, _)) => Ok(a),
        Some(other) => Err(ParseError::new(other.pos(), "expected a keyword")),
        None => Err(ParseError::new(pos, "empty list")),
    }
}

fn arity(items: &[Sexp], n: usize, pos: usize, what: &str) -> Result<(), ParseError> {
    if items.len() != n + 1 {
        return Err(ParseError::new(
            pos,
            format!("{what} takes {n} arguments, got {}", items.len() - 1),
        ));
    }
    Ok(())
}

// ---------------------------------------------------------------- terms

const TERM_KEYWORDS: [&str; 3] = ["app", "lam", "diverge"];

fn term_reserved(name: &str) -> bool {
    TERM_KEYWORDS.contains(&name) || Prim::from_name(name).is_some()
}

/// Merges applications of closed terms into [`Term::App`], the form the
/// parser produces.
pub fn normalize(e: &Expr) -> Expr {
    match e {
        Expr::App(f, a) => match (normalize(f), normalize(a)) {
            (Expr::Term(f), Expr::Term(a)) => Expr::Term(Term::app(f, a)),
            (f, a) => Expr::App(Box::new(f), Box::new(a)),
        },
        Expr::Lam(x, b) => Expr::Lam(x.clone(), Box::new(normalize(b))),
        other => other.clone(),
    }
}

pub fn parse_term(text: &str) -> Result<Expr, ParseError> {
    term_from(&parse_sexp(text)?, &mut Vec::new())
}

/// Parses and compiles a closed term to its code.
pub fn parse_program(text: &str) -> Result<Code, FrontendError> {
    let e = parse_term(text)?;
    Ok(encode(&compile(&e).map_err(|e| FrontendError::Usage(e.to_string()))?))
}

fn term_from(s: &Sexp, scope: &mut Vec<String>) -> Result<Expr, ParseError> {
    match s {
        Sexp::Atom(a, p) => {
            if is_code_literal(a) {
                return Ok(Expr::Term(Term::Lit(parse_code(a, *p)?)));
            }
            if scope.contains(a) {
                return Ok(Expr::Var(a.clone()));
            }
            if a == "diverge" {
                return Ok(Expr::Term(Term::Diverge));
            }
            if let Some(prim) = Prim::from_name(a) {
                return Ok(Expr::Term(Term::Prim(prim)));
            }
            if let Some(c) = library().lookup(a) {
                return Ok(Expr::Term(Term::Lit(c)));
            }
            Ok(Expr::Var(identifier(s, term_reserved)?))
        }
        Sexp::List(items, p) => match head(items, *p)? {
            "app" => {
                if items.len() < 3 {
                    return Err(ParseError::new(*p, "app needs a function and an argument"));
                }
                let mut acc = term_from(&items[1], scope)?;
                for a in &items[2..] {
                    let a = term_from(a, scope)?;
                    acc = match (acc, a) {
                        (Expr::Term(f), Expr::Term(a)) => Expr::Term(Term::app(f, a)),
                        (f, a) => Expr::App(Box::new(f), Box::new(a)),
                    };
                }
                Ok(acc)
            }
            "lam" => {
                if items.len() < 3 {
                    return Err(ParseError::new(*p, "lam needs a variable and a body"));
                }
                let vars = items[1..items.len() - 1]
                    .iter()
                    .map(|v| identifier(v, term_reserved))
                    .collect::<Result<Vec<_>, _>>()?;
                let depth = scope.len();
                scope.extend(vars.iter().cloned());
                let body = term_from(&items[items.len() - 1], scope);
                scope.truncate(depth);
                Ok(vars
                    .into_iter()
                    .rev()
                    .fold(body?, |b, v| Expr::Lam(v, Box::new(b))))
            }
            other => Err(ParseError::new(*p, format!("unknown term form {other:?}"))),
        },
    }
}

/// Prints a term in the syntax accepted by [`parse_term`].
pub struct TermSyntax<'a>(pub &'a Expr);

impl fmt::Display for TermSyntax<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn term(t: &Term, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match t {
                Term::Prim(p) => f.write_str(p.name()),
                Term::Lit(c) => write!(f, "{c}"),
                Term::Diverge => f.write_str("diverge"),
                Term::App(a, b) => {
                    f.write_str("(app ")?;
                    term(a, f)?;
                    f.write_str(" ")?;
                    term(b, f)?;
                    f.write_str(")")
                }
            }
        }
        match self.0 {
            Expr::Var(x) => f.write_str(x),
            Expr::Term(t) => term(t, f),
            Expr::App(a, b) => write!(f, "(app {} {})", TermSyntax(a), TermSyntax(b)),
            Expr::Lam(x, b) => write!(f, "(lam {x} {})", TermSyntax(b)),
        }
    }
}

pub fn print_term(e: &Expr) -> String {
    TermSyntax(e).to_string()
}

// ---------------------------------------------------------------- formulas

const SET_KEYWORDS: [&str; 8] = ["omega", "alpha0", "pbar", "f0", "upair", "opair", "set", "code"];
const FORMULA_KEYWORDS: [&str; 10] = ["=", "in", "not", "and", "or", "->", "all", "ex", "ALL", "EX"];

fn formula_reserved(name: &str) -> bool {
    SET_KEYWORDS.contains(&name) || FORMULA_KEYWORDS.contains(&name)
}

pub fn parse_set_term(text: &str) -> Result<SetTerm, ParseError> {
    set_term_from(&parse_sexp(text)?)
}

fn set_term_from(s: &Sexp) -> Result<SetTerm, ParseError> {
    match s {
        Sexp::Atom(a, p) => Ok(match a.as_str() {
            n if is_nat(n) => SetTerm::Numeral(
                n.parse()
                    .map_err(|_| ParseError::new(*p, "numeral out of range"))?,
            ),
            "omega" => SetTerm::Omega,
            "alpha0" => SetTerm::Alpha0,
            "pbar" => SetTerm::PBar,
            _ => SetTerm::Var(identifier(s, formula_reserved)?),
        }),
        Sexp::List(items, p) => {
            let sub = |k: usize| set_term_from(&items[k]).map(Box::new);
            Ok(match head(items, *p)? {
                "f0" => {
                    arity(items, 1, *p, "f0")?;
                    SetTerm::F0(sub(1)?)
                }
                "upair" => {
                    arity(items, 2, *p, "upair")?;
                    SetTerm::UPair(sub(1)?, sub(2)?)
                }
                "opair" => {
                    arity(items, 2, *p, "opair")?;
                    SetTerm::OPair(sub(1)?, sub(2)?)
                }
                "set" => SetTerm::Finite(
                    items[1..]
                        .iter()
                        .map(set_term_from)
                        .collect::<Result<_, _>>()?,
                ),
                "code" => {
                    arity(items, 1, *p, "code")?;
                    match &items[1] {
                        Sexp::Atom(a, q) if is_code_literal(a) => SetTerm::Code(parse_code(a, *q)?),
                        other => return Err(ParseError::new(other.pos(), "code takes a natural")),
                    }
                }
                other => return Err(ParseError::new(*p, format!("unknown set term {other:?}"))),
            })
        }
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    formula_from(&parse_sexp(text)?)
}

fn formula_from(s: &Sexp) -> Result<Formula, ParseError> {
    let Sexp::List(items, p) = s else {
        return Err(ParseError::new(s.pos(), "expected a formula"));
    };
    let p = *p;
    let f = |k: usize| formula_from(&items[k]);
    let t = |k: usize| set_term_from(&items[k]);
    let x = |k: usize| identifier(&items[k], formula_reserved);
    Ok(match head(items, p)? {
        "=" => {
            arity(items, 2, p, "=")?;
            Formula::Eq(t(1)?, t(2)?)
        }
        "in" => {
            arity(items, 2, p, "in")?;
            Formula::In(t(1)?, t(2)?)
        }
        "not" => {
            arity(items, 1, p, "not")?;
            f(1)?.not()
        }
        "and" => {
            arity(items, 2, p, "and")?;
            f(1)?.and(f(2)?)
        }
        "or" => {
            arity(items, 2, p, "or")?;
            f(1)?.or(f(2)?)
        }
        "->" => {
            arity(items, 2, p, "->")?;
            f(1)?.implies(f(2)?)
        }
        "all" => {
            arity(items, 3, p, "all")?;
            Formula::BAll(x(1)?, t(2)?, Box::new(f(3)?))
        }
        "ex" => {
            arity(items, 3, p, "ex")?;
            Formula::BEx(x(1)?, t(2)?, Box::new(f(3)?))
        }
        "ALL" => {
            arity(items, 2, p, "ALL")?;
            Formula::All(x(1)?, Box::new(f(2)?))
        }
        "EX" => {
            arity(items, 2, p, "EX")?;
            Formula::Ex(x(1)?, Box::new(f(2)?))
        }
        other => return Err(ParseError::new(p, format!("unknown connective {other:?}"))),
    })
}

/// `{0,1,2}`
pub fn parse_nat_set(text: &str) -> Result<BTreeSet<u64>, ParseError> {
    let t = text.trim();
    let inner = t
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(|| ParseError::new(0, "expected {n, ...}"))?;
    if inner.trim().is_empty() {
        return Ok(BTreeSet::new());
    }
    inner
        .split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| ParseError::new(0, format!("bad natural {:?}", s.trim())))
        })
        .collect()
}

fn nat_set_string(s: &BTreeSet<u64>) -> String {
    let items: Vec<String> = s.iter().map(|n| n.to_string()).collect();
    format!("{{{}}}", items.join(","))
}

// ---------------------------------------------------------------- catalogue files

/// One machine in a catalogue file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogueEntry {
    pub name: String,
    /// The machine as a term s-expression.
    pub term: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step_bound: Option<StepBound>,
}

pub fn catalogue_to_entries(c: &Catalogue) -> Vec<CatalogueEntry> {
    c.machines
        .iter()
        .map(|m| CatalogueEntry {
            name: m.name.clone(),
            term: print_term(&Expr::Term(decode(&m.code))),
            step_bound: m.step_bound,
        })
        .collect()
}

pub fn catalogue_from_entries(entries: &[CatalogueEntry]) -> Result<Catalogue, FrontendError> {
    let machines = entries
        .iter()
        .map(|e| Ok(Machine::new(e.name.clone(), parse_program(&e.term)?, e.step_bound)))
        .collect::<Result<Vec<_>, FrontendError>>()?;
    Ok(Catalogue::new(machines))
}

// ---------------------------------------------------------------- commands

#[derive(Debug, Error)]
pub enum FrontendError {
    #[error("parse error {0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Realizability(#[from] realizability::RealizabilityError),
    #[error(transparent)]
    Diagonal(#[from] diagonal::DiagonalError),
    #[error(transparent)]
    Lworld(#[from] lworld::LworldError),
    #[error(transparent)]
    Universe(#[from] crate::universe::UniverseError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
}

impl FrontendError {
    /// 2 for malformed input, 1 for failures while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            FrontendError::Parse(_) | FrontendError::Usage(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "realizer", version, about = "Number-realisability workbench")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Step budget for each application
    #[arg(long, global = true, default_value_t = Fuel::DEFAULT.0)]
    pub fuel: u64,
    /// Longest h-segment enumerated for the distinguished type
    #[arg(long, global = true, default_value_t = 16)]
    pub segment_bound: u64,
    /// Largest natural enumerated for the type of naturals
    #[arg(long, global = true, default_value_t = 16)]
    pub nat_bound: u64,
    /// Print machine-readable JSON
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for commands that sample
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

impl GlobalOpts {
    fn truncation(&self) -> Truncation {
        Truncation::new(self.segment_bound, self.nat_bound, Fuel(self.fuel))
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pairing, combinators and compiled programs
    #[command(subcommand)]
    Pca(PcaCmd),
    /// Type codes and the membership relation
    #[command(subcommand)]
    Universe(UniverseCmd),
    /// Canonical set codes
    #[command(subcommand)]
    Vcode(VcodeCmd),
    /// Check a realiser against a formula (`?` searches for one)
    Check(CheckCmd),
    /// The diagonal construction of h
    #[command(subcommand)]
    Diagonal(DiagonalCmd),
    /// Hereditarily finite sets, L-stages and σ-codes
    #[command(subcommand)]
    Lworld(LworldCmd),
}

#[derive(Debug, Subcommand)]
pub enum PcaCmd {
    /// pair(a, b)
    Pair { a: Code, b: Code },
    /// (p0 n, p1 n)
    Unpair { n: Code },
    /// Compile a term to its code
    Compile { term: String },
    /// Print the term a code decodes to
    Decode { code: Code },
    /// Apply a term to argument terms
    Apply { term: String, args: Vec<String> },
    /// Named library constants
    Library,
}

#[derive(Debug, Subcommand)]
pub enum UniverseCmd {
    /// k ∈̇ t
    Din { k: Code, t: Code },
    /// t ∈ U
    InU { t: Code },
    /// a ∈ V
    InV { a: Code },
    /// Members of t within the truncation
    Members { t: Code },
}

#[derive(Debug, Subcommand)]
pub enum VcodeCmd {
    /// The code denoted by a set term
    Show { term: String },
    /// The hereditarily finite set a set term denotes
    Denote { term: String },
    /// The type a ≐ b
    Eq { a: String, b: String },
    /// The displayed canonical codes
    Canonical,
    /// u, f and a realiser for the subcountability of a set
    Subcount { term: String },
}

#[derive(Debug, Args)]
pub struct CheckCmd {
    /// Realiser term, or `?` to search for one
    pub realiser: String,
    pub formula: String,
    /// Bind a free variable: x=<set-term>
    #[arg(long = "bind", value_name = "X=TERM")]
    pub binds: Vec<String>,
    /// Supply h from a diagonal build with this many stages
    #[arg(long)]
    pub path_stages: Option<usize>,
    /// Treat f0(i) ⊆ f0(j) as refuted for i ≠ j ≤ this index after
    /// running the desk-scale diagonal refutation
    #[arg(long)]
    pub diagonal_oracle: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum DiagonalCmd {
    /// Build a prefix of h meeting the first N requirements
    Build {
        /// Catalogue file (JSON); the standard catalogue by default
        #[arg(long)]
        catalogue: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        stages: usize,
        /// Write the prefix and stage log here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the standard catalogue as a catalogue file
    Catalogue,
    /// Re-check the witnesses recorded in a build file
    Verify {
        build: PathBuf,
        #[arg(long)]
        catalogue: Option<PathBuf>,
    },
    /// Extract g from each purported ⊆-realiser and check that h defeats it
    Refute {
        #[arg(long, default_value_t = 5)]
        max_index: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum LworldCmd {
    /// L_n
    Lstage { n: usize },
    /// σ-code of a set, optionally along an explicit enumeration
    Encode {
        set: String,
        /// Enumeration as a set-list literal: f(0), f(1), ...
        #[arg(long)]
        enumeration: Option<String>,
    },
    /// Decode a σ-code
    Decode { u: String, sigma: String },
    /// Def(X) for the elements of the given set
    Defsub { set: String },
    /// α* and its union
    AlphaStar { n: usize },
    /// Random sets of the given rank
    Sample {
        rank: u32,
        #[arg(long, default_value_t = 5)]
        count: usize,
    },
}

/// What a command prints: human-readable text and the JSON equivalent.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub text: String,
    pub json: Value,
}

impl Output {
    fn new(text: impl Into<String>, json: Value) -> Output {
        Output {
            text: text.into(),
            json,
        }
    }

    /// The rendering selected by `--json`.
    pub fn render(&self, json: bool) -> String {
        if json {
            serde_json::to_string_pretty(&self.json).expect("JSON values serialize")
        } else {
            self.text.clone()
        }
    }
}

pub fn run_cli(cli: &Cli) -> Result<Output, FrontendError> {
    let g = &cli.global;
    match &cli.command {
        Command::Pca(c) => run_pca(c, g),
        Command::Universe(c) => run_universe(c, g),
        Command::Vcode(c) => run_vcode(c, g),
        Command::Check(c) => run_check(c, g),
        Command::Diagonal(c) => run_diagonal(c, g),
        Command::Lworld(c) => run_lworld(c, g),
    }
}

fn outcome_json(o: &Outcome, steps: u64) -> (String, Value) {
    match o {
        Outcome::Value(v) => (v.to_string(), json!({"outcome": "value", "value": v.to_string(), "steps": steps})),
        Outcome::Diverges => ("diverges".into(), json!({"outcome": "diverges", "steps": steps})),
        Outcome::OutOfFuel => ("out of fuel".into(), json!({"outcome": "out_of_fuel", "steps": steps})),
        Outcome::Inspected => ("inspected".into(), json!({"outcome": "inspected", "steps": steps})),
    }
}

fn run_pca(c: &PcaCmd, g: &GlobalOpts) -> Result<Output, FrontendError> {
    Ok(match c {
        PcaCmd::Pair { a, b } => {
            let p = pca::pair(a, b);
            Output::new(p.to_string(), json!({"pair": p.to_string()}))
        }
        PcaCmd::Unpair { n } => {
            let (a, b) = n.unpair();
            Output::new(format!("{a} {b}"), json!({"p0": a.to_string(), "p1": b.to_string()}))
        }
        PcaCmd::Compile { term } => {
            let code = parse_program(term)?;
            Output::new(code.to_string(), json!({"code": code.to_string()}))
        }
        PcaCmd::Decode { code } => {
            let t = print_term(&Expr::Term(decode(code)));
            Output::new(t.clone(), json!({"term": t}))
        }
        PcaCmd::Apply { term, args } => {
            let f = parse_program(term)?;
            let args = args
                .iter()
                .map(|a| parse_program(a))
                .collect::<Result<Vec<_>, _>>()?;
            let r = run(&f, &args, Fuel(g.fuel));
            let (text, json) = outcome_json(&r.outcome, r.steps);
            Output::new(text, json)
        }
        PcaCmd::Library => {
            let named = library().named();
            let text = named
                .iter()
                .map(|(n, c)| format!("{n} = {c}"))
                .collect::<Vec<_>>()
                .join("\n");
            let map: serde_json::Map<String, Value> = named
                .iter()
                .map(|(n, c)| (n.to_string(), Value::String(c.to_string())))
                .collect();
            Output::new(text, Value::Object(map))
        }
    })
}

fn run_universe(c: &UniverseCmd, g: &GlobalOpts) -> Result<Output, FrontendError> {
    let u = Universe::new(g.truncation());
    let verdict = |v: crate::universe::Verdict| {
        Output::new(v.to_string(), serde_json::to_value(&v).expect("verdicts serialize"))
    };
    Ok(match c {
        UniverseCmd::Din { k, t } => verdict(u.din(k, t)?),
        UniverseCmd::InU { t } => verdict(u.check_in_u(t)),
        UniverseCmd::InV { a } => verdict(u.check_in_v(a)),
        UniverseCmd::Members { t } => {
            let m = u.members(t)?;
            let items: Vec<String> = m.items.iter().map(|c| c.to_string()).collect();
            Output::new(
                format!("{} ({:?})", items.join(" "), m.coverage).trim().to_string(),
                json!({"members": items, "coverage": m.coverage}),
            )
        }
    })
}

fn eval_set_term(text: &str) -> Result<(SetTerm, VCode), FrontendError> {
    let t = parse_set_term(text)?;
    let v = t.eval(&Env::new())?;
    Ok((t, v))
}

fn run_vcode(c: &VcodeCmd, g: &GlobalOpts) -> Result<Output, FrontendError> {
    let fuel = Fuel(g.fuel);
    Ok(match c {
        VcodeCmd::Show { term } => {
            let (_, v) = eval_set_term(term)?;
            Output::new(
                v.to_string(),
                json!({"code": v.to_string(), "index": v.index().to_string(), "map": v.map().to_string()}),
            )
        }
        VcodeCmd::Denote { term } => {
            let (_, v) = eval_set_term(term)?;
            let s = realizability::denotation(&v, fuel)?;
            Output::new(s.to_string(), json!({"set": s.to_string()}))
        }
        VcodeCmd::Eq { a, b } => {
            let (_, a) = eval_set_term(a)?;
            let (_, b) = eval_set_term(b)?;
            let e = vcodes::eq_type(&a, &b);
            Output::new(e.code.to_string(), json!({"type": e.code.to_string()}))
        }
        VcodeCmd::Canonical => {
            let codes = vcodes::canonical_codes();
            let text = codes
                .iter()
                .map(|c| format!("{:?} = {}", c.role, c.code))
                .collect::<Vec<_>>()
                .join("\n");
            Output::new(text, serde_json::to_value(&codes)?)
        }
        VcodeCmd::Subcount { term } => {
            let (_, alpha) = eval_set_term(term)?;
            let checker = Checker::new(CheckBudget::with_truncation(g.truncation()));
            let w = realizability::subcountability_witness(&alpha, &checker)?;
            let report = checker.check(
                &w.realiser,
                &realizability::subcountability_formula(),
                &w.env(&alpha),
            )?;
            Output::new(
                format!("u = {}\nf = {}\nrealiser = {}\n{report}", w.u, w.f, w.realiser),
                json!({"u": w.u.to_string(), "f": w.f.to_string(),
                       "realiser": w.realiser.to_string(), "report": report}),
            )
        }
    })
}

fn run_check(c: &CheckCmd, g: &GlobalOpts) -> Result<Output, FrontendError> {
    let phi = parse_formula(&c.formula)?;
    let mut env = Env::new();
    for b in &c.binds {
        let (x, t) = b
            .split_once('=')
            .ok_or_else(|| FrontendError::Usage(format!("--bind expects x=<set-term>, got {b:?}")))?;
        let (_, v) = eval_set_term(t)?;
        env.insert(x.trim().to_owned(), v);
    }
    let mut budget = CheckBudget::with_truncation(g.truncation());
    let mut notes = Vec::new();
    if let Some(k) = c.diagonal_oracle {
        let mut candidates = impostors();
        candidates.extend(
            Catalogue::standard()
                .machines
                .into_iter()
                .map(|m| (m.name, m.code)),
        );
        let refutation = diagonal::refute_realisers(&candidates, k, Fuel(g.fuel))?;
        let survivors = refutation.survivors().len();
        let pairs: BTreeSet<(u64, u64)> = (0..=k)
            .flat_map(|i| (0..=k).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .collect();
        let basis = format!(
            "diagonal refutation of {} candidate realisers for all i ≠ j ≤ {k}, {survivors} surviving",
            candidates.len()
        );
        notes.push(basis.clone());
        if survivors == 0 {
            budget.oracle = Some(incomparability_oracle(pairs, basis));
        }
    }
    let checker = match c.path_stages {
        Some(stages) => {
            let built = diagonal::build_h(&Catalogue::standard(), stages, Fuel(g.fuel))?;
            Checker::with_path(budget, Arc::new(built.h_prefix))
        }
        None => Checker::new(budget),
    };
    let realiser = if c.realiser.trim() == "?" {
        checker.find_realiser(&phi, &env)?
    } else {
        Some(parse_program(&c.realiser)?)
    };
    let Some(e) = realiser else {
        let report = checker.inhabited(&phi, &env)?;
        return Ok(Output::new(
            format!("no realiser found\n{report}"),
            json!({"formula": phi.to_string(), "realiser": null, "report": report}),
        ));
    };
    let report = checker.check(&e, &phi, &env)?;
    let mut text = format!("{report}");
    if c.realiser.trim() == "?" {
        text = format!("realiser = {e}\n{text}");
    }
    Ok(Output::new(
        text,
        json!({"formula": phi.to_string(), "realiser": e.to_string(), "report": report,
               "oracle": notes}),
    ))
}

fn load_catalogue(path: &Option<PathBuf>) -> Result<Catalogue, FrontendError> {
    match path {
        None => Ok(Catalogue::standard()),
        Some(p) => {
            let entries: Vec<CatalogueEntry> = serde_json::from_str(&std::fs::read_to_string(p)?)?;
            catalogue_from_entries(&entries)
        }
    }
}

fn run_diagonal(c: &DiagonalCmd, g: &GlobalOpts) -> Result<Output, FrontendError> {
    let fuel = Fuel(g.fuel);
    Ok(match c {
        DiagonalCmd::Build {
            catalogue,
            stages,
            out,
        } => {
            let cat = load_catalogue(catalogue)?;
            let built = diagonal::build_h(&cat, *stages, fuel)?;
            let witnesses = built.witnesses();
            let checks = diagonal::verify(&built.h_prefix, &witnesses, &cat, fuel);
            let confirmed = checks
                .iter()
                .filter(|(_, s)| matches!(s, diagonal::Satisfaction::Yes(_)))
                .count();
            if let Some(path) = out {
                std::fs::write(path, serde_json::to_string(&built)?)?;
            }
            let summary = json!({
                "machines": cat.len(),
                "stages": built.log.len(),
                "length": built.h_prefix.len(),
                "satisfied": witnesses.len(),
                "confirmed": confirmed,
                "unresolved": built.unresolved,
            });
            Output::new(
                format!(
                    "h prefix of length {} meets {} requirements ({} confirmed, {} unresolved)",
                    built.h_prefix.len(),
                    witnesses.len(),
                    confirmed,
                    built.unresolved.len()
                ),
                summary,
            )
        }
        DiagonalCmd::Catalogue => {
            let entries = catalogue_to_entries(&Catalogue::standard());
            let text = serde_json::to_string_pretty(&entries)?;
            Output::new(text, serde_json::to_value(&entries)?)
        }
        DiagonalCmd::Verify { build, catalogue } => {
            let cat = load_catalogue(catalogue)?;
            let built: diagonal::BuildResult = serde_json::from_str(&std::fs::read_to_string(build)?)?;
            let checks = diagonal::verify(&built.h_prefix, &built.witnesses(), &cat, fuel);
            let failed: Vec<_> = checks
                .iter()
                .filter(|(_, s)| !matches!(s, diagonal::Satisfaction::Yes(_)))
                .map(|(r, _)| *r)
                .collect();
            Output::new(
                format!("{} of {} witnesses confirmed", checks.len() - failed.len(), checks.len()),
                json!({"checked": checks.len(), "failed": failed}),
            )
        }
        DiagonalCmd::Refute { max_index } => {
            let mut candidates = impostors();
            candidates.extend(
                Catalogue::standard()
                    .machines
                    .into_iter()
                    .map(|m| (m.name, m.code)),
            );
            let r = diagonal::refute_realisers(&candidates, *max_index, fuel)?;
            use diagonal::GBehaviour::*;
            let counts = json!({
                "wrong_output": r.count(WrongOutput),
                "diverged": r.count(Diverged),
                "undetermined": r.count(Undetermined),
                "correct": r.count(Correct),
            });
            Output::new(
                format!(
                    "{} cases, {} surviving; g mispredicts {} times and diverges {} times; h prefix length {}",
                    r.cases.len(),
                    r.survivors().len(),
                    r.count(WrongOutput),
                    r.count(Diverged),
                    r.h_prefix.len()
                ),
                json!({"cases": r.cases.len(), "surviving": r.survivors().len(),
                       "behaviour": counts, "length": r.h_prefix.len()}),
            )
        }
    })
}

fn parse_set(text: &str) -> Result<HFSet, FrontendError> {
    text.parse::<HFSet>()
        .map_err(|e| FrontendError::Parse(ParseError::new(e.pos, e.msg)))
}

fn sets_json(sets: &BTreeSet<HFSet>) -> Value {
    Value::Array(sets.iter().map(|s| Value::String(s.to_string())).collect())
}

/// A uniformly shaped random set of rank exactly `rank` (for `rank > 0`).
pub fn random_hfset(rng: &mut impl Rng, rank: u32) -> HFSet {
    if rank == 0 {
        return HFSet::empty();
    }
    let width = rng.gen_range(1..=3);
    let mut elems = vec![random_hfset(rng, rank - 1)];
    for _ in 1..width {
        let r = rng.gen_range(0..rank);
        elems.push(random_hfset(rng, r));
    }
    HFSet::new(elems)
}

fn run_lworld(c: &LworldCmd, g: &GlobalOpts) -> Result<Output, FrontendError> {
    Ok(match c {
        LworldCmd::Lstage { n } => {
            let stage = lworld::l_stage(*n)?;
            let ords = lworld::ordinals_of(&stage);
            Output::new(
                format!(
                    "|L_{n}| = {}, L_{n} ∩ Ord = {}",
                    stage.len(),
                    HFSet::new(ords.iter().cloned())
                ),
                json!({"size": stage.len(), "ordinals": sets_json(&ords),
                       "elements": if stage.len() <= 64 { sets_json(&stage) } else { Value::Null }}),
            )
        }
        LworldCmd::Encode { set, enumeration } => {
            let s = parse_set(set)?;
            let f = match enumeration {
                Some(e) => {
                    let list = parse_set_list(e)?;
                    Some(list)
                }
                None => None,
            };
            let code = lworld::encode_sigma(&s, f.as_deref())?;
            Output::new(
                format!("u = {}\nsigma = {}", nat_set_string(&code.u), nat_set_string(&code.sigma)),
                serde_json::to_value(&code)?,
            )
        }
        LworldCmd::Decode { u, sigma } => {
            let code = SigmaCode {
                u: parse_nat_set(u)?,
                sigma: parse_nat_set(sigma)?,
            };
            let s = lworld::decode_sigma(&code)?;
            Output::new(s.to_string(), json!({"set": s.to_string()}))
        }
        LworldCmd::Defsub { set } => {
            let x = parse_set(set)?;
            let subsets = lworld::def_subsets(x.elements())?;
            Output::new(
                format!("|Def(X)| = {}\n{}", subsets.len(), HFSet::new(subsets.iter().cloned())),
                json!({"size": subsets.len(), "subsets": sets_json(&subsets)}),
            )
        }
        LworldCmd::AlphaStar { n } => {
            let alpha = HFSet::ordinal(*n);
            let star = lworld::alpha_star(&alpha)?;
            let union = star.big_union();
            Output::new(
                format!("α* = {star}\n⋃α* = {union}"),
                json!({"alpha_star": star.to_string(), "union": union.to_string(),
                       "union_is_alpha": union == alpha}),
            )
        }
        LworldCmd::Sample { rank, count } => {
            let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
            let sets: Vec<String> = (0..*count)
                .map(|_| random_hfset(&mut rng, *rank).to_string())
                .collect();
            Output::new(sets.join("\n"), json!({"seed": g.seed, "sets": sets}))
        }
    })
}

/// `[s₀, s₁, ...]` or `s₀ s₁ ...`: a list of set literals, duplicates kept.
pub fn parse_set_list(text: &str) -> Result<Vec<HFSet>, FrontendError> {
    let t = text.trim();
    let t = t
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .unwrap_or(t);
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = None;
    for (i, ch) in t.char_indices() {
        match ch {
            '{' => {
                if depth == 0 {
                    start = Some(i);
                }
                depth += 1;
            }
            '}' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| ParseError::new(i, "unbalanced '}'"))?;
                if depth == 0 {
                    let s = start.take().expect("opened");
                    out.push(parse_set(&t[s..=i])?);
                }
            }
            c if depth == 0 && !(c.is_whitespace() || c == ',') => {
                return Err(ParseError::new(i, format!("unexpected {c:?}")).into())
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(ParseError::new(t.len(), "unclosed '{'").into());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pca::lambda::{app, lam, var};

    fn cli(args: &[&str]) -> Output {
        let mut argv = vec!["realizer"];
        argv.extend_from_slice(args);
        run_cli(&Cli::parse_from(argv)).unwrap()
    }

    #[test]
    fn term_examples() {
        assert_eq!(
            parse_term("(app k 3)").unwrap(),
            Expr::Term(Term::app(Term::Prim(Prim::K), Term::lit(3u64)))
        );
        let e = parse_term("(lam x (app x x))").unwrap();
        assert_eq!(e, lam(&["x"], app(var("x"), var("x"))));
        assert!(compile(&e).is_ok());
        assert_eq!(parse_term("(lam x y x)").unwrap(), lam(&["x", "y"], var("x")));
        assert_eq!(
            parse_term("iota").unwrap(),
            Expr::Term(Term::Lit(library().iota.clone()))
        );
    }

    #[test]
    fn syntax_errors_carry_positions() {
        assert_eq!(parse_term("(app k").unwrap_err().pos, 0);
        assert_eq!(parse_term("(app k 3))").unwrap_err().pos, 9);
        assert_eq!(parse_formula("(in a)").unwrap_err().pos, 0);
        assert_eq!(parse_formula("(all omega 1 (= 1 1))").unwrap_err().pos, 5);
        assert!(parse_term("").is_err());
        assert!(parse_term("(lam k k)").is_err());
    }

    #[test]
    fn formula_examples() {
        let phi = parse_formula("(in a b)").unwrap();
        assert_eq!(phi, Formula::In(SetTerm::var("a"), SetTerm::var("b")));
        let text = "(all i omega (all j omega (-> (all z (f0 i) (in z (f0 j))) (= i j))))";
        let phi = parse_formula(text).unwrap();
        assert_eq!(phi, realizability::incomparability_statement());
        assert_eq!(phi.to_string(), text);
    }

    #[test]
    fn catalogue_file_round_trip() {
        let cat = Catalogue::standard();
        let entries = catalogue_to_entries(&cat);
        let back = catalogue_from_entries(&entries).unwrap();
        assert_eq!(back, cat);
    }

    #[test]
    fn cli_examples() {
        assert_eq!(cli(&["pca", "pair", "2", "1"]).text, "5");
        assert_eq!(cli(&["lworld", "decode", "{0,1,2}", "{3,4,7}"]).text, "{{},{{}}}");
        let out = cli(&["check", "(lam i (lam j (lam x iota)))",
            "(all i omega (all j omega (-> (all z (f0 i) (in z (f0 j))) (= i j))))",
            "--nat-bound", "2", "--diagonal-oracle", "2"]);
        assert_eq!(out.json["report"]["verdict"], "realized", "{}", out.text);
        assert!(!out.json["report"]["notes"].as_array().unwrap().is_empty());
    }

    #[test]
    fn json_is_deterministic() {
        let args = ["lworld", "encode", "{{},{{}},{{{}}}}", "--json"];
        assert_eq!(cli(&args).render(true), cli(&args).render(true));
        let out = cli(&["lworld", "encode", "{{},{{}}}", "--enumeration", "[{{},{{}}}, {}, {{}}]"]);
        assert_eq!(out.json["sigma"], json!([3, 4, 7]));
    }
}
