//! Finite ℕ-sequences coded as naturals.
//!
//! `[x0, ..., x(n-1)]` is coded as `pair(n, L)` where `L` is the snoc list
//! `pair(x(n-1), pair(x(n-2), ... pair(x0, 0)))`. The length is therefore
//! `p0 t` and the first `m` components are `pair(m, L')` with `L'` obtained by
//! dropping `n - m` outer cells, both computed by programs in the library.
//! The empty sequence is `pair(0, 0) = 0`.

use serde::{Deserialize, Serialize};

use crate::code::Code;

#[derive(Clone, PartialEq, Eq)]
pub struct SeqCode {
    components: Vec<Code>,
    /// `lists[m]` is the list cell of the length-`m` prefix.
    lists: Vec<Code>,
}

/// Longest sequence accepted when decoding arbitrary codes.
pub const MAX_DECODE_LEN: u64 = 1 << 24;

impl SeqCode {
    pub fn empty() -> SeqCode {
        SeqCode {
            components: Vec::new(),
            lists: vec![Code::zero()],
        }
    }

    pub fn new(components: impl IntoIterator<Item = Code>) -> SeqCode {
        let mut s = SeqCode::empty();
        for c in components {
            s.push(c);
        }
        s
    }

    pub fn from_u64s(xs: &[u64]) -> SeqCode {
        SeqCode::new(xs.iter().map(|&x| Code::small(x)))
    }

    pub fn push(&mut self, x: Code) {
        let last = self.lists.last().expect("nonempty").clone();
        self.lists.push(Code::pair(x.clone(), last));
        self.components.push(x);
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> &[Code] {
        &self.components
    }

    pub fn code(&self) -> Code {
        self.prefix_code(self.len())
    }

    /// Code of the first `m` components; `m` must not exceed the length.
    pub fn prefix_code(&self, m: usize) -> Code {
        Code::pair(Code::from(m), self.lists[m].clone())
    }

    pub fn prefix(&self, m: usize) -> SeqCode {
        SeqCode {
            components: self.components[..m].to_vec(),
            lists: self.lists[..=m].to_vec(),
        }
    }

    pub fn is_prefix_of(&self, other: &SeqCode) -> bool {
        self.len() <= other.len() && self.lists[self.len()] == other.lists[self.len()]
    }

    /// Decodes a sequence code; `None` if `c` codes no sequence.
    pub fn from_code(c: &Code) -> Option<SeqCode> {
        let (len, mut list) = c.unpair();
        let len = len.as_u64().filter(|&n| n <= MAX_DECODE_LEN)?;
        let mut rev = Vec::with_capacity(len as usize);
        for _ in 0..len {
            let (x, rest) = list.unpair();
            rev.push(x);
            list = rest;
        }
        if !list.is_zero() {
            return None;
        }
        rev.reverse();
        Some(SeqCode::new(rev))
    }

    /// `p0 t` read off a code without decoding the list.
    pub fn length_of(c: &Code) -> Code {
        c.left()
    }
}

impl std::fmt::Debug for SeqCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(&self.components).finish()
    }
}

impl Serialize for SeqCode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.components.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SeqCode {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(SeqCode::new(Vec::<Code>::deserialize(d)?))
    }
}

/// Membership of a code in `X = {t : t ⊑ h}` relative to a finite prefix of `h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum XMembership {
    Member,
    Nonmember,
    BeyondTruncation,
}

pub fn x_membership(t: &Code, h_prefix: &SeqCode) -> XMembership {
    match SeqCode::length_of(t).as_u64() {
        Some(n) if n as usize <= h_prefix.len() => {
            if *t == h_prefix.prefix_code(n as usize) {
                XMembership::Member
            } else {
                XMembership::Nonmember
            }
        }
        _ => XMembership::BeyondTruncation,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_sequence_is_zero() {
        assert_eq!(SeqCode::empty().code(), Code::zero());
        assert_eq!(SeqCode::from_code(&Code::zero()), Some(SeqCode::empty()));
    }

    #[test]
    fn decode_inverts_encode() {
        let s = SeqCode::from_u64s(&[0, 0, 3, 1, 0]);
        assert_eq!(SeqCode::from_code(&s.code()), Some(s.clone()));
        assert_eq!(s.prefix(2).code(), s.prefix_code(2));
        assert!(s.prefix(3).is_prefix_of(&s));
        // length 1 with a nonzero tail codes nothing
        let bad = Code::pair(Code::small(1), Code::pair(Code::small(4), Code::small(9)));
        assert_eq!(SeqCode::from_code(&bad), None);
    }

    #[test]
    fn membership_in_x() {
        let h = SeqCode::from_u64s(&[0, 2, 0, 1]);
        assert_eq!(x_membership(&Code::zero(), &h), XMembership::Member);
        assert_eq!(x_membership(&h.code(), &h), XMembership::Member);
        let altered = SeqCode::from_u64s(&[0, 2, 0, 2]);
        assert_eq!(x_membership(&altered.code(), &h), XMembership::Nonmember);
        let longer = SeqCode::from_u64s(&[0, 2, 0, 1, 5]);
        assert_eq!(x_membership(&longer.code(), &h), XMembership::BeyondTruncation);
    }
}
