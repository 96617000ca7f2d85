use std::fmt;

use crate::error::{Error, Result};

/// Agents supported by the bitmask representation.
pub const MAX_AGENTS: usize = 63;

/// A subset of the agents `{1, …, n}`, stored as a bitmask where bit `i`
/// stands for agent `i + 1`.
///
/// Ordering is by bitmask first, which is the order every enumeration in
/// this crate uses.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coalition {
    bits: u64,
    n: usize,
}

impl Coalition {
    pub fn new(bits: u64, n: usize) -> Result<Self> {
        if n > MAX_AGENTS || bits >= (1u64 << n) {
            return Err(Error::CoalitionOutOfRange { bits, n });
        }
        Ok(Self { bits, n })
    }

    pub(crate) fn from_bits(bits: u64, n: usize) -> Self {
        debug_assert!(bits < (1u64 << n));
        Self { bits, n }
    }

    pub fn empty(n: usize) -> Self {
        Self { bits: 0, n }
    }

    pub fn grand(n: usize) -> Self {
        Self {
            bits: full_mask(n),
            n,
        }
    }

    /// Coalition from zero-based agent indices.
    pub fn from_agents(n: usize, agents: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut bits = 0u64;
        for a in agents {
            if a >= n {
                return Err(Error::CoalitionOutOfRange {
                    bits: 1u64.checked_shl(a as u32).unwrap_or(u64::MAX),
                    n,
                });
            }
            bits |= 1 << a;
        }
        Self::new(bits, n)
    }

    pub fn singleton(n: usize, agent: usize) -> Result<Self> {
        Self::from_agents(n, [agent])
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn n(self) -> usize {
        self.n
    }

    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn is_grand(self) -> bool {
        self.bits == full_mask(self.n)
    }

    /// Nonempty and not the grand coalition.
    pub fn is_proper(self) -> bool {
        !self.is_empty() && !self.is_grand()
    }

    pub fn contains(self, agent: usize) -> bool {
        agent < self.n && self.bits >> agent & 1 == 1
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn union(self, other: Self) -> Self {
        Self::from_bits(self.bits | other.bits, self.n)
    }

    pub fn intersection(self, other: Self) -> Self {
        Self::from_bits(self.bits & other.bits, self.n)
    }

    pub fn complement(self) -> Self {
        Self::from_bits(!self.bits & full_mask(self.n), self.n)
    }

    pub fn with(self, agent: usize) -> Self {
        Self::from_bits(self.bits | 1 << agent, self.n)
    }

    pub fn without(self, agent: usize) -> Self {
        Self::from_bits(self.bits & !(1 << agent), self.n)
    }

    /// Zero-based member indices in increasing order.
    pub fn members(self) -> Members {
        Members { rest: self.bits }
    }

    /// All `2^n` coalitions in increasing bitmask order, starting with ∅.
    pub fn all(n: usize) -> impl Iterator<Item = Coalition> {
        (0..=full_mask(n)).map(move |bits| Coalition { bits, n })
    }

    /// Nonempty coalitions other than the grand coalition, ascending.
    pub fn proper(n: usize) -> impl Iterator<Item = Coalition> {
        Self::all(n).filter(|s| s.is_proper())
    }

    /// Nonempty coalitions including the grand coalition, ascending.
    pub fn nonempty(n: usize) -> impl Iterator<Item = Coalition> {
        Self::all(n).skip(1)
    }

    /// Subsets of `self` in increasing bitmask order, starting with ∅.
    pub fn subsets(self) -> Subsets {
        Subsets {
            set: self.bits,
            next: Some(0),
            n: self.n,
        }
    }

    /// Comma separated one-based agent list, e.g. `"1,3"`; empty for ∅.
    pub fn to_key(self) -> String {
        self.members()
            .map(|a| (a + 1).to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.to_key())
    }
}

impl fmt::Debug for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Coalition{self}")
    }
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[derive(Debug, Clone)]
pub struct Members {
    rest: u64,
}

impl Iterator for Members {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.rest == 0 {
            return None;
        }
        let i = self.rest.trailing_zeros() as usize;
        self.rest &= self.rest - 1;
        Some(i)
    }
}

/// Carry-rippler enumeration of submasks, which visits them in increasing
/// numeric order.
#[derive(Debug, Clone)]
pub struct Subsets {
    set: u64,
    next: Option<u64>,
    n: usize,
}

impl Iterator for Subsets {
    type Item = Coalition;

    fn next(&mut self) -> Option<Coalition> {
        let cur = self.next?;
        let succ = cur.wrapping_sub(self.set) & self.set;
        self.next = (succ != 0).then_some(succ);
        Some(Coalition::from_bits(cur, self.n))
    }
}
