//! Fixed programs used throughout the model, compiled once.
//!
//! Every family of types or sets that must be "a code in the pca" is built
//! from these constants with [`closure`] / [`super::term::closure_code`],
//! so the codes computed by running the programs coincide bit for bit with
//! the codes assembled natively in Rust.

use once_cell::sync::Lazy;

use super::lambda::{app, apps, closure, compile, identity, lam, lit, pr, prim, var, Expr};
use super::term::{encode, Prim};
use super::{fixpoint, pair};
use crate::code::Code;

pub struct Library {
    /// `s k k`
    pub id: Code,
    /// `x ↦ x^V`
    pub numeral_map: Code,
    /// `a b x ↦ d a b x 0`
    pub upair_select: Code,
    /// `a b ↦ {a, b}^V`
    pub upair: Code,
    /// `a b ↦ ⟨a, b⟩^V`
    pub opair: Code,
    /// element map of the internal pairing function
    pub pbar_map: Code,
    pub eq_family_y: Code,
    pub eq_family_x: Code,
    /// `e a b ↦ a ⊆̇ b`, with `e` the equality program
    pub subeq_body: Code,
    pub eq_family_sym: Code,
    pub eq_body: Code,
    /// `a b ↦ a ≐ b`
    pub eq: Code,
    pub delta: Code,
    pub iota: Code,
    pub sigma: Code,
    pub pi: Code,
    /// `a b ↦ max(a - b, 0)`
    pub minus: Code,
    /// `l k ↦ l` with the outer `k` cells removed
    pub drop: Code,
    /// sequence length
    pub seq_len: Code,
    /// `t m ↦` first `m` components of `t` (all of `t` if `m > l_s t`)
    pub seq_truncate: Code,
    /// `t x ↦ t` extended by `x`
    pub seq_snoc: Code,
    /// `t m ↦ t` padded with zeros (or truncated) to length `m`
    pub seq_pad_to: Code,
    pub add: Code,
    pub mul: Code,
    pub factorial: Code,
    /// `a x ↦ ⟨x^V, p1 a x⟩^V`
    pub subcount_map: Code,
    /// `t ↦ (l_s t)^V`
    pub alpha0_map: Code,
    /// `t ↦ p (l_s t) ι`
    pub alpha0_in_omega: Code,
    /// `t x ↦ p (t_s t x) ι`
    pub alpha0_transitive: Code,
    /// `i j x ↦ ι`
    pub incomparability: Code,
}

fn code_of(e: &Expr) -> Code {
    encode(&compile(e).expect("library programs are closed"))
}

fn fix_of(e: &Expr) -> Code {
    fixpoint(&code_of(e))
}

fn c(v: u64) -> Expr {
    lit(v)
}

fn l(code: &Code) -> Expr {
    lit(code.clone())
}

fn p0(e: Expr) -> Expr {
    app(prim(Prim::Proj0), e)
}

fn p1(e: Expr) -> Expr {
    app(prim(Prim::Proj1), e)
}

fn succ(e: Expr) -> Expr {
    app(prim(Prim::SuccN), e)
}

fn pred(e: Expr) -> Expr {
    app(prim(Prim::PredN), e)
}

/// `if c1 = c2 then yes else no`, with both branches delayed.
pub fn cond(c1: Expr, c2: Expr, yes: Expr, no: Expr) -> Expr {
    apps(
        prim(Prim::D),
        [lam(&["_z"], yes), lam(&["_z"], no), c1, c2, c(0)],
    )
}

fn call(f: &Code, args: impl IntoIterator<Item = Expr>) -> Expr {
    apps(l(f), args)
}

impl Library {
    fn build() -> Library {
        let v = var;
        let id = encode(&identity());
        let numeral_map = fix_of(&lam(&["e", "x"], pr(pr(c(0), v("x")), v("e"))));
        let upair_select = code_of(&lam(
            &["a", "b", "x"],
            apps(prim(Prim::D), [v("a"), v("b"), v("x"), c(0)]),
        ));
        let upair = code_of(&lam(
            &["a", "b"],
            pr(pr(c(0), c(2)), closure(l(&upair_select), [v("a"), v("b")])),
        ));
        let opair = code_of(&lam(
            &["a", "b"],
            call(
                &upair,
                [call(&upair, [v("a"), v("a")]), call(&upair, [v("a"), v("b")])],
            ),
        ));
        let num = |e: Expr| call(&numeral_map, [e]);
        let pbar_map = code_of(&lam(
            &["x"],
            call(
                &opair,
                [
                    call(&opair, [num(p0(v("x"))), num(p1(v("x")))]),
                    num(v("x")),
                ],
            ),
        ));

        let eq_family_y = code_of(&lam(
            &["e", "a", "b", "x", "y"],
            apps(
                v("e"),
                [apps(p1(v("a")), [v("x")]), apps(p1(v("b")), [v("y")])],
            ),
        ));
        let eq_family_x = code_of(&lam(
            &["e", "a", "b", "x"],
            pr(
                c(2),
                pr(
                    p0(v("b")),
                    closure(l(&eq_family_y), [v("e"), v("a"), v("b"), v("x")]),
                ),
            ),
        ));
        let subeq_body = code_of(&lam(
            &["e", "a", "b"],
            pr(
                c(3),
                pr(
                    p0(v("a")),
                    closure(l(&eq_family_x), [v("e"), v("a"), v("b")]),
                ),
            ),
        ));
        let eq_family_sym = code_of(&lam(
            &["e", "a", "b", "x"],
            call(&subeq_body, [v("e"), v("b"), v("a")]),
        ));
        let eq_body = code_of(&lam(
            &["e", "a", "b"],
            pr(
                c(2),
                pr(
                    call(&subeq_body, [v("e"), v("a"), v("b")]),
                    closure(l(&eq_family_sym), [v("e"), v("a"), v("b")]),
                ),
            ),
        ));
        let eq = fixpoint(&eq_body);

        let delta = fix_of(&lam(&["e", "n"], pr(v("n"), pr(v("e"), v("e")))));
        let iota = pair(&delta, &delta);

        let sigma = code_of(&lam(&["n", "m"], pr(c(2), pr(v("n"), v("m")))));
        let pi = code_of(&lam(&["n", "m"], pr(c(3), pr(v("n"), v("m")))));

        let minus = fix_of(&lam(
            &["e", "a", "b"],
            cond(
                v("b"),
                c(0),
                v("a"),
                apps(v("e"), [pred(v("a")), pred(v("b"))]),
            ),
        ));
        let drop = fix_of(&lam(
            &["e", "l", "k"],
            cond(
                v("k"),
                c(0),
                v("l"),
                apps(v("e"), [p1(v("l")), pred(v("k"))]),
            ),
        ));
        let seq_len = Prim::Proj0.code();
        // drop outer cells until the length is `m` (or nothing is left)
        let seq_truncate = fix_of(&lam(
            &["e", "t", "m"],
            cond(
                p0(v("t")),
                v("m"),
                v("t"),
                cond(
                    p0(v("t")),
                    c(0),
                    v("t"),
                    apps(
                        v("e"),
                        [pr(pred(p0(v("t"))), p1(p1(v("t")))), v("m")],
                    ),
                ),
            ),
        ));
        let seq_snoc = code_of(&lam(
            &["t", "x"],
            pr(succ(p0(v("t"))), pr(v("x"), p1(v("t")))),
        ));
        let pad_rec = fix_of(&lam(
            &["e", "t", "m"],
            cond(
                p0(v("t")),
                v("m"),
                v("t"),
                apps(v("e"), [call(&seq_snoc, [v("t"), c(0)]), v("m")]),
            ),
        ));
        // 0 if m ≥ l, 1 if m < l, in O(|m - l|) steps: count up and down
        // from l at once until one side meets m
        let race = fix_of(&lam(
            &["e", "up", "down", "m"],
            cond(
                v("up"),
                v("m"),
                c(0),
                cond(
                    v("down"),
                    v("m"),
                    c(1),
                    apps(v("e"), [succ(v("up")), pred(v("down")), v("m")]),
                ),
            ),
        ));
        let seq_pad_to = code_of(&lam(
            &["t", "m"],
            cond(
                call(&race, [p0(v("t")), p0(v("t")), v("m")]),
                c(0),
                call(&pad_rec, [v("t"), v("m")]),
                call(&seq_truncate, [v("t"), v("m")]),
            ),
        ));

        let add = fix_of(&lam(
            &["e", "a", "b"],
            cond(
                v("b"),
                c(0),
                v("a"),
                succ(apps(v("e"), [v("a"), pred(v("b"))])),
            ),
        ));
        let mul = fix_of(&lam(
            &["e", "a", "b"],
            cond(
                v("b"),
                c(0),
                c(0),
                call(&add, [v("a"), apps(v("e"), [v("a"), pred(v("b"))])]),
            ),
        ));
        let factorial = fix_of(&lam(
            &["e", "n"],
            cond(
                v("n"),
                c(0),
                c(1),
                call(&mul, [v("n"), apps(v("e"), [pred(v("n"))])]),
            ),
        ));

        let subcount_map = code_of(&lam(
            &["a", "x"],
            call(&opair, [num(v("x")), apps(p1(v("a")), [v("x")])]),
        ));
        let alpha0_map = code_of(&lam(&["t"], num(p0(v("t")))));
        let alpha0_in_omega = code_of(&lam(&["t"], pr(p0(v("t")), l(&iota))));
        let alpha0_transitive = code_of(&lam(
            &["t", "x"],
            pr(call(&seq_truncate, [v("t"), v("x")]), l(&iota)),
        ));
        let incomparability = code_of(&lam(&["i", "j", "x"], l(&iota)));

        Library {
            id,
            numeral_map,
            upair_select,
            upair,
            opair,
            pbar_map,
            eq_family_y,
            eq_family_x,
            subeq_body,
            eq_family_sym,
            eq_body,
            eq,
            delta,
            iota,
            sigma,
            pi,
            minus,
            drop,
            seq_len,
            seq_truncate,
            seq_snoc,
            seq_pad_to,
            add,
            mul,
            factorial,
            subcount_map,
            alpha0_map,
            alpha0_in_omega,
            alpha0_transitive,
            incomparability,
        }
    }

    /// Named constants, in a fixed order (used for golden values and the
    /// term surface syntax).
    pub fn named(&self) -> Vec<(&'static str, &Code)> {
        vec![
            ("id", &self.id),
            ("numeral-map", &self.numeral_map),
            ("upair-select", &self.upair_select),
            ("upair", &self.upair),
            ("opair", &self.opair),
            ("pbar-map", &self.pbar_map),
            ("eq-family-y", &self.eq_family_y),
            ("eq-family-x", &self.eq_family_x),
            ("subeq-body", &self.subeq_body),
            ("eq-family-sym", &self.eq_family_sym),
            ("eq-body", &self.eq_body),
            ("eq", &self.eq),
            ("delta", &self.delta),
            ("iota", &self.iota),
            ("sigma", &self.sigma),
            ("pi", &self.pi),
            ("minus", &self.minus),
            ("drop", &self.drop),
            ("seq-len", &self.seq_len),
            ("seq-truncate", &self.seq_truncate),
            ("seq-snoc", &self.seq_snoc),
            ("seq-pad-to", &self.seq_pad_to),
            ("add", &self.add),
            ("mul", &self.mul),
            ("factorial", &self.factorial),
            ("subcount-map", &self.subcount_map),
            ("alpha0-map", &self.alpha0_map),
            ("alpha0-in-omega", &self.alpha0_in_omega),
            ("alpha0-transitive", &self.alpha0_transitive),
            ("incomparability", &self.incomparability),
        ]
    }

    pub fn lookup(&self, name: &str) -> Option<Code> {
        self.named()
            .into_iter()
            .find(|(n, _)| *n == name)
            .map(|(_, c)| c.clone())
    }
}

static LIBRARY: Lazy<Library> = Lazy::new(Library::build);

pub fn library() -> &'static Library {
    &LIBRARY
}

/// Code of a finite lookup table `x ↦ v` for the listed `(x, v)` entries and
/// `default` elsewhere, built as a chain of `d` tests.
pub fn table(entries: &[(Code, Code)], default: &Code) -> Code {
    let body = entries.iter().rev().fold(lit(default.clone()), |acc, (k, v)| {
        apps(prim(Prim::D), [lit(v.clone()), acc, var("x"), lit(k.clone())])
    });
    code_of(&lam(&["x"], body))
}
