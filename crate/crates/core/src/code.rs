//! Natural numbers in the pca carrier.
//!
//! A [`Code`] is an arbitrary natural number. Values that fit in a `u64` are
//! stored directly; larger values are stored as the pair tree given by the
//! pairing bijection `pair(a, b)`, so nested pairing (which roughly squares
//! the value per level) never has to be materialised in decimal. The
//! representation is canonical: a value is `Small` iff it is at most
//! `u64::MAX`, and otherwise it is the node of its two unpair components.
//! Structural equality is therefore numeric equality.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Values whose estimated bit length exceeds this are printed as `<a,b>`.
const DECIMAL_BITS: u64 = 256;

#[derive(Clone)]
pub struct Code(Repr);

#[derive(Clone)]
enum Repr {
    Small(u64),
    Pair(Arc<Node>),
}

struct Node {
    left: Code,
    right: Code,
    hash: u64,
    odd: bool,
    bits: u64,
    depth: u32,
    /// `left.cmp(&right)`, computed on first use.
    order: OnceLock<Ordering>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseCodeError {
    #[error("empty code literal")]
    Empty,
    #[error("invalid code literal `{0}`")]
    Invalid(String),
}

fn mix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// The pairing function on machine words, or `None` when the result does not
/// fit in a `u64`.
pub fn pair_u64(a: u64, b: u64) -> Option<u64> {
    let (a, b) = (a as u128, b as u128);
    let m = a.max(b);
    let base = m * (m + 1);
    let v = if m % 2 == 0 { base - a + b } else { base + a - b };
    u64::try_from(v).ok()
}

/// Inverse of [`pair_u64`]; total on `u64`.
pub fn unpair_u64(v: u64) -> (u64, u64) {
    let m = v.isqrt();
    let r = v - m * m;
    if m.is_multiple_of(2) {
        if r <= m {
            (m, r)
        } else {
            (2 * m - r, m)
        }
    } else if r <= m {
        (r, m)
    } else {
        (m, 2 * m - r)
    }
}

fn unpair_big(v: &BigUint) -> (BigUint, BigUint) {
    let m = v.sqrt();
    let r = v - &m * &m;
    let two_m = &m * 2u32;
    let even = !m.bit(0);
    if even {
        if r <= m {
            (m, r)
        } else {
            (two_m - r, m)
        }
    } else if r <= m {
        (r, m)
    } else {
        (m.clone(), two_m - r)
    }
}

impl Code {
    pub const fn zero() -> Self {
        Code(Repr::Small(0))
    }

    pub const fn small(v: u64) -> Self {
        Code(Repr::Small(v))
    }

    /// The canonical code of `pair(a, b)`.
    pub fn pair(a: Code, b: Code) -> Code {
        if let (Repr::Small(x), Repr::Small(y)) = (&a.0, &b.0) {
            if let Some(v) = pair_u64(*x, *y) {
                return Code(Repr::Small(v));
            }
        }
        let hash = mix(a.hash64().rotate_left(23) ^ mix(b.hash64() ^ 0x51_7c_c1_b7));
        let odd = a.is_odd() ^ b.is_odd();
        let bits = a.approx_bits().max(b.approx_bits()).saturating_mul(2).saturating_add(2);
        let depth = 1 + a.depth().max(b.depth());
        Code(Repr::Pair(Arc::new(Node {
            left: a,
            right: b,
            hash,
            odd,
            bits,
            depth,
            order: OnceLock::new(),
        })))
    }

    /// `(p0 c, p1 c)`. Every natural is a pair code.
    pub fn unpair(&self) -> (Code, Code) {
        match &self.0 {
            Repr::Small(v) => {
                let (a, b) = unpair_u64(*v);
                (Code::small(a), Code::small(b))
            }
            Repr::Pair(n) => (n.left.clone(), n.right.clone()),
        }
    }

    pub fn left(&self) -> Code {
        self.unpair().0
    }

    pub fn right(&self) -> Code {
        self.unpair().1
    }

    pub fn as_u64(&self) -> Option<u64> {
        match self.0 {
            Repr::Small(v) => Some(v),
            Repr::Pair(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0))
    }

    pub fn is_odd(&self) -> bool {
        match &self.0 {
            Repr::Small(v) => v & 1 == 1,
            Repr::Pair(n) => n.odd,
        }
    }

    /// Upper estimate of the bit length; exact for small values.
    pub fn approx_bits(&self) -> u64 {
        match &self.0 {
            Repr::Small(v) => 64 - u64::from(v.leading_zeros()),
            Repr::Pair(n) => n.bits,
        }
    }

    /// Height of the pair tree (0 for machine words).
    pub fn depth(&self) -> u32 {
        match &self.0 {
            Repr::Small(_) => 0,
            Repr::Pair(n) => n.depth,
        }
    }

    pub fn hash64(&self) -> u64 {
        match &self.0 {
            Repr::Small(v) => mix(*v),
            Repr::Pair(n) => n.hash,
        }
    }

    fn node(&self) -> Option<&Node> {
        match &self.0 {
            Repr::Small(_) => None,
            Repr::Pair(n) => Some(n),
        }
    }

    /// Whether `needle` occurs as a node of this code's pair tree.
    pub fn contains(&self, needle: &Code) -> bool {
        let mut stack = vec![self];
        while let Some(c) = stack.pop() {
            if c == needle {
                return true;
            }
            if c.depth() > needle.depth() {
                if let Some(n) = c.node() {
                    stack.push(&n.left);
                    stack.push(&n.right);
                }
            }
        }
        false
    }

    fn node_order(n: &Node) -> Ordering {
        *n.order.get_or_init(|| n.left.cmp(&n.right))
    }

    /// `a + 1`, computed on the pair tree without materialising the value.
    pub fn succ(&self) -> Code {
        match &self.0 {
            Repr::Small(v) if *v < u64::MAX => Code::small(v + 1),
            Repr::Small(v) => Code::from_biguint(&(BigUint::from(*v) + 1u32)),
            Repr::Pair(n) => {
                let (a, b) = (&n.left, &n.right);
                let a_is_max = Self::node_order(n) != Ordering::Less;
                let b_is_max = Self::node_order(n) != Ordering::Greater;
                let m = if a_is_max { a } else { b };
                if !m.is_odd() {
                    if a_is_max {
                        if b != m {
                            Code::pair(a.clone(), b.succ())
                        } else {
                            Code::pair(m.pred(), m.clone())
                        }
                    } else if !a.is_zero() {
                        Code::pair(a.pred(), m.clone())
                    } else {
                        Code::pair(Code::zero(), m.succ())
                    }
                } else if b_is_max {
                    if a != m {
                        Code::pair(a.succ(), m.clone())
                    } else {
                        Code::pair(m.clone(), m.pred())
                    }
                } else if !b.is_zero() {
                    Code::pair(m.clone(), b.pred())
                } else {
                    Code::pair(m.succ(), Code::zero())
                }
            }
        }
    }

    /// `max(a - 1, 0)`.
    pub fn pred(&self) -> Code {
        match &self.0 {
            Repr::Small(v) => Code::small(v.saturating_sub(1)),
            Repr::Pair(n) => {
                let (a, b) = (&n.left, &n.right);
                let a_is_max = Self::node_order(n) != Ordering::Less;
                let b_is_max = Self::node_order(n) != Ordering::Greater;
                let m = if a_is_max { a } else { b };
                if !m.is_odd() {
                    if a_is_max {
                        if !b.is_zero() {
                            Code::pair(m.clone(), b.pred())
                        } else {
                            Code::pair(m.pred(), Code::zero())
                        }
                    } else {
                        Code::pair(a.succ(), m.clone())
                    }
                } else if b_is_max {
                    if !a.is_zero() {
                        Code::pair(a.pred(), m.clone())
                    } else {
                        Code::pair(Code::zero(), m.pred())
                    }
                } else {
                    Code::pair(m.clone(), b.succ())
                }
            }
        }
    }

    pub fn from_biguint(v: &BigUint) -> Code {
        if let Some(x) = v.to_u64() {
            return Code::small(x);
        }
        let (a, b) = unpair_big(v);
        Code::pair(Code::from_biguint(&a), Code::from_biguint(&b))
    }

    /// Materialises the value. The result has roughly [`Code::approx_bits`]
    /// bits, which can be astronomically large for deep trees.
    pub fn to_biguint(&self) -> BigUint {
        match &self.0 {
            Repr::Small(v) => BigUint::from(*v),
            Repr::Pair(n) => {
                let a = n.left.to_biguint();
                let b = n.right.to_biguint();
                let m = if a >= b { a.clone() } else { b.clone() };
                let base = &m * (&m + BigUint::one());
                if m.bit(0) {
                    base + a - b
                } else {
                    base + b - a
                }
            }
        }
    }
}

impl Default for Code {
    fn default() -> Self {
        Code::zero()
    }
}

impl From<u64> for Code {
    fn from(v: u64) -> Self {
        Code::small(v)
    }
}

impl From<u32> for Code {
    fn from(v: u32) -> Self {
        Code::small(u64::from(v))
    }
}

impl From<usize> for Code {
    fn from(v: usize) -> Self {
        Code::small(v as u64)
    }
}

impl PartialEq for Code {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a == b,
            (Repr::Pair(a), Repr::Pair(b)) => {
                if Arc::ptr_eq(a, b) {
                    return true;
                }
                if a.hash != b.hash || a.depth != b.depth {
                    return false;
                }
                a.left == b.left && a.right == b.right
            }
            _ => false,
        }
    }
}

impl Eq for Code {}

impl Hash for Code {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.hash64());
    }
}

impl Ord for Code {
    /// Numeric order, decided on the pair trees. Values `m² + r` with
    /// `0 <= r <= 2m` live in shell `m = max(a, b)`; within a shell the
    /// offset `r` is read off the parity-dependent branch of `pair`.
    fn cmp(&self, other: &Self) -> Ordering {
        let (x, y) = match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => return a.cmp(b),
            (Repr::Small(_), Repr::Pair(_)) => return Ordering::Less,
            (Repr::Pair(_), Repr::Small(_)) => return Ordering::Greater,
            (Repr::Pair(x), Repr::Pair(y)) => (x, y),
        };
        if Arc::ptr_eq(x, y) {
            return Ordering::Equal;
        }
        let ox = Code::node_order(x);
        let oy = Code::node_order(y);
        let mx = if ox != Ordering::Less { &x.left } else { &x.right };
        let my = if oy != Ordering::Less { &y.left } else { &y.right };
        if mx != my {
            return mx.cmp(my);
        }
        // Same shell: (segment, offset, offset ascending?)
        let even = !mx.is_odd();
        let key = |n: &Node, o: Ordering| -> (u8, Code, bool) {
            if even {
                if o != Ordering::Less {
                    (0, n.right.clone(), true)
                } else {
                    (1, n.left.clone(), false)
                }
            } else if o != Ordering::Greater {
                (0, n.left.clone(), true)
            } else {
                (1, n.right.clone(), false)
            }
        };
        let (sx, vx, ascending) = key(x, ox);
        let (sy, vy, _) = key(y, oy);
        match sx.cmp(&sy) {
            Ordering::Equal if ascending => vx.cmp(&vy),
            Ordering::Equal => vy.cmp(&vx),
            o => o,
        }
    }
}

impl PartialOrd for Code {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Drop for Node {
    fn drop(&mut self) {
        // Long right-nested lists would otherwise recurse once per cell.
        let mut pending = Vec::new();
        for child in [&mut self.left, &mut self.right] {
            if let Repr::Pair(arc) = std::mem::take(child).0 {
                pending.push(arc);
            }
        }
        while let Some(arc) = pending.pop() {
            if let Some(mut node) = Arc::into_inner(arc) {
                for child in [&mut node.left, &mut node.right] {
                    if let Repr::Pair(inner) = std::mem::take(child).0 {
                        pending.push(inner);
                    }
                }
            }
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(v) => write!(f, "{v}"),
            Repr::Pair(n) if n.bits <= DECIMAL_BITS => write!(f, "{}", self.to_biguint()),
            Repr::Pair(n) => write!(f, "<{},{}>", n.left, n.right),
        }
    }
}

impl fmt::Debug for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Code {
    type Err = ParseCodeError;

    /// Accepts a decimal natural or a pair literal `<a,b>` (nested freely).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseCodeError::Empty);
        }
        let mut parser = LiteralParser { src: s.as_bytes(), pos: 0 };
        let code = parser.code().ok_or_else(|| ParseCodeError::Invalid(s.to_string()))?;
        parser.skip_ws();
        if parser.pos != s.len() {
            return Err(ParseCodeError::Invalid(s.to_string()));
        }
        Ok(code)
    }
}

struct LiteralParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl LiteralParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, b: u8) -> bool {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn code(&mut self) -> Option<Code> {
        if self.eat(b'<') {
            let a = self.code()?;
            if !self.eat(b',') {
                return None;
            }
            let b = self.code()?;
            if !self.eat(b'>') {
                return None;
            }
            return Some(Code::pair(a, b));
        }
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).ok()?;
        let v = BigUint::parse_bytes(digits.as_bytes(), 10)?;
        Some(Code::from_biguint(&v))
    }
}

impl Serialize for Code {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self.as_u64() {
            Some(v) => serializer.serialize_u64(v),
            None => serializer.serialize_str(&self.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Code {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Num(v) => Ok(Code::small(v)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl Zero for Code {
    fn zero() -> Self {
        Code::zero()
    }

    fn is_zero(&self) -> bool {
        Code::is_zero(self)
    }
}

impl std::ops::Add for Code {
    type Output = Code;

    fn add(self, rhs: Code) -> Code {
        match (self.as_u64(), rhs.as_u64()) {
            (Some(a), Some(b)) if a.checked_add(b).is_some() => Code::small(a + b),
            _ => Code::from_biguint(&(self.to_biguint() + rhs.to_biguint())),
        }
    }
}
