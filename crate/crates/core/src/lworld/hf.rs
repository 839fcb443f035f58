//! Hereditarily finite sets, hash-consed.
//!
//! Every [`HFSet`] is interned: two sets are extensionally equal iff they
//! are the same node, so equality and hashing are O(1). Elements are kept
//! sorted in a canonical order (rank, then size, then elements
//! lexicographically), which also fixes the printed form.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::Arc;

use once_cell::sync::Lazy;
use parking_lot::Mutex;
use thiserror::Error;

struct Node {
    id: u64,
    elems: Box<[HFSet]>,
    rank: u32,
}

#[derive(Clone)]
pub struct HFSet(Arc<Node>);

struct Interner {
    table: HashMap<Box<[u64]>, HFSet>,
    next: u64,
}

static INTERNER: Lazy<Mutex<Interner>> = Lazy::new(|| {
    Mutex::new(Interner {
        table: HashMap::new(),
        next: 0,
    })
});

impl HFSet {
    /// The set of the given elements (duplicates removed).
    pub fn new(elems: impl IntoIterator<Item = HFSet>) -> HFSet {
        let mut v: Vec<HFSet> = elems.into_iter().collect();
        v.sort();
        v.dedup();
        let key: Box<[u64]> = v.iter().map(|e| e.0.id).collect();
        let mut interner = INTERNER.lock();
        if let Some(s) = interner.table.get(&key) {
            return s.clone();
        }
        let rank = v.iter().map(|e| e.0.rank + 1).max().unwrap_or(0);
        let id = interner.next;
        interner.next += 1;
        let s = HFSet(Arc::new(Node {
            id,
            elems: v.into_boxed_slice(),
            rank,
        }));
        interner.table.insert(key, s.clone());
        s
    }

    pub fn empty() -> HFSet {
        HFSet::new([])
    }

    pub fn singleton(x: HFSet) -> HFSet {
        HFSet::new([x])
    }

    /// The von Neumann ordinal `n`.
    pub fn ordinal(n: usize) -> HFSet {
        let mut s = HFSet::empty();
        for _ in 0..n {
            s = s.succ();
        }
        s
    }

    /// `x ∪ {x}`
    pub fn succ(&self) -> HFSet {
        HFSet::new(self.iter().cloned().chain([self.clone()]))
    }

    pub fn elements(&self) -> &[HFSet] {
        &self.0.elems
    }

    pub fn iter(&self) -> std::slice::Iter<'_, HFSet> {
        self.0.elems.iter()
    }

    pub fn len(&self) -> usize {
        self.0.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.elems.is_empty()
    }

    pub fn rank(&self) -> u32 {
        self.0.rank
    }

    pub fn contains(&self, x: &HFSet) -> bool {
        self.0.elems.binary_search(x).is_ok()
    }

    pub fn is_subset(&self, other: &HFSet) -> bool {
        self.iter().all(|x| other.contains(x))
    }

    pub fn union(&self, other: &HFSet) -> HFSet {
        HFSet::new(self.iter().chain(other.iter()).cloned())
    }

    /// `⋃ x`
    pub fn big_union(&self) -> HFSet {
        HFSet::new(self.iter().flat_map(|y| y.iter().cloned()))
    }

    pub fn is_transitive(&self) -> bool {
        self.iter().all(|y| y.is_subset(self))
    }

    /// A transitive set of transitive sets; for hereditarily finite sets
    /// these are exactly the natural numbers.
    pub fn is_ordinal(&self) -> bool {
        self.is_transitive() && self.iter().all(HFSet::is_transitive)
    }

    /// The natural number this set is, if it is an ordinal.
    pub fn as_ordinal(&self) -> Option<usize> {
        self.is_ordinal().then(|| self.len())
    }

    /// `trcl({x})`, listed breadth first from `x` without repetitions.
    pub fn closure_bfs(&self) -> Vec<HFSet> {
        let mut seen = BTreeSet::new();
        let mut order = Vec::new();
        let mut queue = VecDeque::from([self.clone()]);
        while let Some(x) = queue.pop_front() {
            if seen.insert(x.clone()) {
                queue.extend(x.iter().cloned());
                order.push(x);
            }
        }
        order
    }

    /// `trcl(x)`
    pub fn transitive_closure(&self) -> HFSet {
        HFSet::new(self.iter().flat_map(|y| y.closure_bfs()))
    }

    /// Identity of the interned node (stable within one process only).
    pub fn id(&self) -> u64 {
        self.0.id
    }
}

impl PartialEq for HFSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for HFSet {}

impl Hash for HFSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.id.hash(state)
    }
}

impl Ord for HFSet {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        self.rank()
            .cmp(&other.rank())
            .then(self.len().cmp(&other.len()))
            .then_with(|| self.0.elems.iter().cmp(other.0.elems.iter()))
    }
}

impl PartialOrd for HFSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for HFSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, e) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for HFSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("bad set literal at byte {pos}: {msg}")]
pub struct ParseSetError {
    pub pos: usize,
    pub msg: String,
}

impl FromStr for HFSet {
    type Err = ParseSetError;

    fn from_str(s: &str) -> Result<HFSet, ParseSetError> {
        let bytes = s.as_bytes();
        let err = |pos: usize, msg: &str| ParseSetError {
            pos,
            msg: msg.to_string(),
        };
        let skip = |mut pos: usize| {
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            pos
        };
        // explicit stack of partially read sets
        let mut stack: Vec<Vec<HFSet>> = Vec::new();
        let mut pos = skip(0);
        let mut done: Option<HFSet> = None;
        loop {
            if pos >= bytes.len() {
                return match (done, stack.is_empty()) {
                    (Some(s), true) => Ok(s),
                    _ => Err(err(pos, "unexpected end of input")),
                };
            }
            if done.is_some() && stack.is_empty() {
                return Err(err(pos, "trailing input"));
            }
            match bytes[pos] {
                b'{' => {
                    if done.is_some() {
                        return Err(err(pos, "expected ',' or '}'"));
                    }
                    stack.push(Vec::new());
                }
                b'}' => {
                    let mut elems = stack.pop().ok_or_else(|| err(pos, "unbalanced '}'"))?;
                    if let Some(d) = done.take() {
                        elems.push(d);
                    } else if !elems.is_empty() {
                        return Err(err(pos, "expected a set after ','"));
                    }
                    done = Some(HFSet::new(elems));
                }
                b',' => {
                    let d = done.take().ok_or_else(|| err(pos, "expected a set before ','"))?;
                    stack.last_mut().ok_or_else(|| err(pos, "',' outside braces"))?.push(d);
                }
                _ => return Err(err(pos, "unexpected character")),
            }
            pos = skip(pos + 1);
        }
    }
}
