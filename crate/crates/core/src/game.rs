//! TU games `(N, c)`, allocations and brute-force structural checks.

use std::fmt;
use std::ops::Index;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::coalition::{full_mask, Coalition};
use crate::error::{check_limit, Error, Result};
use crate::mst::{self, GraphInstance};
use crate::rational::Rational;

/// Whether the characteristic function is a cost (agents want to pay
/// little, stability is `x(S) ≤ c(S)`) or a profit (`x(S) ≥ v(S)`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Cost,
    Profit,
}

#[derive(Clone)]
enum Evaluator {
    Table(Arc<[Rational]>),
    Mst(Arc<GraphInstance>),
}

/// A characteristic function on the coalitions of `n` agents.
///
/// Explicit games hold the full `2^n` table. MST-backed games evaluate
/// spanning trees on demand; monotonized MST games are materialized as a
/// table when they are built because `c̄(S)` needs every superset anyway.
#[derive(Clone)]
pub struct Game {
    n: usize,
    sense: Sense,
    eval: Evaluator,
}

impl fmt::Debug for Game {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.eval {
            Evaluator::Table(_) => "table",
            Evaluator::Mst(_) => "mst",
        };
        f.debug_struct("Game")
            .field("n", &self.n)
            .field("sense", &self.sense)
            .field("kind", &kind)
            .finish()
    }
}

impl Game {
    /// Cost game from a table indexed by coalition bitmask. Rejects
    /// `c(∅) ≠ 0` and negative entries.
    pub fn explicit(n: usize, table: Vec<Rational>) -> Result<Self> {
        check_limit("explicit game", n)?;
        if table.len() != 1 << n {
            return Err(Error::InvalidGame(format!(
                "table for {n} agents needs {} entries, got {}",
                1usize << n,
                table.len()
            )));
        }
        if !table[0].is_zero() {
            return Err(Error::InvalidGame(format!(
                "c(empty set) must be 0, got {}",
                table[0]
            )));
        }
        if let Some(bits) = table.iter().position(|v| v.is_negative()) {
            let s = Coalition::from_bits(bits as u64, n);
            return Err(Error::InvalidGame(format!(
                "c({s}) = {} is negative",
                table[bits]
            )));
        }
        Ok(Self::from_table(n, Sense::Cost, table))
    }

    /// Explicit cost game from a function of the coalition.
    pub fn from_fn(n: usize, mut f: impl FnMut(Coalition) -> Rational) -> Result<Self> {
        check_limit("explicit game", n)?;
        Self::explicit(n, Coalition::all(n).map(&mut f).collect())
    }

    pub(crate) fn from_table(n: usize, sense: Sense, table: Vec<Rational>) -> Self {
        Self {
            n,
            sense,
            eval: Evaluator::Table(table.into()),
        }
    }

    /// MST game over `graph`, evaluated lazily.
    pub fn mst(graph: GraphInstance) -> Self {
        Self {
            n: graph.n(),
            sense: Sense::Cost,
            eval: Evaluator::Mst(Arc::new(graph)),
        }
    }

    /// Monotonized MST game `c̄(S) = min_{R ⊇ S} c(R)`.
    pub fn mst_monotonized(graph: &GraphInstance) -> Result<Self> {
        Ok(Self::from_table(
            graph.n(),
            Sense::Cost,
            mst::monotonized_table(graph)?,
        ))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    /// The underlying graph for lazily evaluated MST games.
    pub fn graph(&self) -> Option<&GraphInstance> {
        match &self.eval {
            Evaluator::Mst(g) => Some(g),
            Evaluator::Table(_) => None,
        }
    }

    pub fn evaluate(&self, s: Coalition) -> Result<Rational> {
        if s.n() != self.n {
            return Err(Error::CoalitionOutOfRange {
                bits: s.bits(),
                n: self.n,
            });
        }
        Ok(self.value(s.bits()))
    }

    pub(crate) fn value(&self, bits: u64) -> Rational {
        match &self.eval {
            Evaluator::Table(t) => t[bits as usize].clone(),
            Evaluator::Mst(g) => mst::mst_cost(g, Coalition::from_bits(bits, self.n)),
        }
    }

    pub fn grand_value(&self) -> Rational {
        self.value(full_mask(self.n))
    }

    pub fn singleton_values(&self) -> Vec<Rational> {
        (0..self.n).map(|i| self.value(1 << i)).collect()
    }

    /// The full table indexed by bitmask.
    pub fn table(&self) -> Result<Vec<Rational>> {
        check_limit("coalition table", self.n)?;
        Ok(match &self.eval {
            Evaluator::Table(t) => t.to_vec(),
            Evaluator::Mst(g) => mst::cost_table(g)?,
        })
    }

    /// Same game with the full table materialized.
    pub fn to_explicit(&self) -> Result<Self> {
        Ok(Self::from_table(self.n, self.sense, self.table()?))
    }

    /// `c̄(S) = min_{R ⊇ S} c(R)` for any cost game.
    pub fn monotonized(&self) -> Result<Self> {
        let mut t = self.table()?;
        superset_min(&mut t, self.n);
        Ok(Self::from_table(self.n, self.sense, t))
    }

    /// `c(S ∪ T) ≤ c(S) + c(T)` for disjoint nonempty `S, T`.
    pub fn is_subadditive(&self) -> Result<Verdict<(Coalition, Coalition)>> {
        let t = self.table()?;
        let n = self.n;
        for s in Coalition::nonempty(n) {
            for u in s.complement().subsets().skip(1) {
                if t[(s.bits() | u.bits()) as usize] > &t[s.bits() as usize] + &t[u.bits() as usize]
                {
                    return Ok(Verdict::Violated((s, u)));
                }
            }
        }
        Ok(Verdict::Holds)
    }

    /// `c(S) + c(T) ≥ c(S ∪ T) + c(S ∩ T)` for all `S, T`.
    pub fn is_submodular(&self) -> Result<Verdict<(Coalition, Coalition)>> {
        let t = self.table()?;
        let n = self.n;
        // Diminishing marginal costs on single elements is equivalent; only
        // fall back to the quadratic scan to find the smallest witness.
        let local_ok = Coalition::all(n).all(|s| {
            let free: Vec<usize> = s.complement().members().collect();
            free.iter().enumerate().all(|(a, &i)| {
                free[a + 1..].iter().all(|&j| {
                    let si = s.with(i).bits() as usize;
                    let sj = s.with(j).bits() as usize;
                    let sij = s.with(i).with(j).bits() as usize;
                    &t[si] + &t[sj] >= &t[sij] + &t[s.bits() as usize]
                })
            })
        });
        if local_ok {
            return Ok(Verdict::Holds);
        }
        for s in Coalition::all(n) {
            for u in Coalition::all(n) {
                let lhs = &t[s.bits() as usize] + &t[u.bits() as usize];
                let rhs = &t[s.union(u).bits() as usize] + &t[s.intersection(u).bits() as usize];
                if lhs < rhs {
                    return Ok(Verdict::Violated((s, u)));
                }
            }
        }
        unreachable!("local submodularity failure implies a global witness")
    }

    /// `c(S) ≤ c(T)` whenever `S ⊆ T`; the witness is `(S, T)`.
    pub fn is_monotone(&self) -> Result<Verdict<(Coalition, Coalition)>> {
        let t = self.table()?;
        let n = self.n;
        let local_ok = Coalition::all(n)
            .all(|s| s.complement().members().all(|i| t[s.bits() as usize] <= t[s.with(i).bits() as usize]));
        if local_ok {
            return Ok(Verdict::Holds);
        }
        for s in Coalition::all(n) {
            let cs = &t[s.bits() as usize];
            for extra in s.complement().subsets() {
                let sup = s.union(extra);
                if &t[sup.bits() as usize] < cs {
                    return Ok(Verdict::Violated((s, sup)));
                }
            }
        }
        unreachable!("local monotonicity failure implies a global witness")
    }

    /// `c(N ∖ {k}) ≤ c(N)` for every agent; the witness is the smallest
    /// zero-based `k` that fails.
    pub fn satisfies_last_monotone(&self) -> Verdict<usize> {
        let grand = Coalition::grand(self.n);
        let cn = self.grand_value();
        (0..self.n)
            .find(|&k| self.value(grand.without(k).bits()) > cn)
            .map_or(Verdict::Holds, Verdict::Violated)
    }

    /// Savings game `v(S) = Σ_{i∈S} c({i}) − c(S)`.
    pub fn to_profit_game(&self) -> Result<Self> {
        let t = self.table()?;
        let singles = self.singleton_values();
        let v = Coalition::all(self.n)
            .map(|s| {
                let stand_alone: Rational = s.members().map(|i| &singles[i]).sum();
                stand_alone - &t[s.bits() as usize]
            })
            .collect();
        Ok(Self::from_table(self.n, Sense::Profit, v))
    }

    /// `x^v_i = c({i}) − x_i`; applying it twice gives back `x`.
    pub fn profit_transform_allocation(&self, x: &Allocation) -> Result<Allocation> {
        if x.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(Allocation::new(
            self.singleton_values()
                .into_iter()
                .zip(x.shares())
                .map(|(c, xi)| c - xi)
                .collect(),
        ))
    }

    /// Brute-force `x(S) ≤ c(S)` for all proper coalitions.
    pub fn in_almost_core(&self, x: &Allocation) -> Result<bool> {
        Ok(self.first_violation(x, false)?.is_none())
    }

    /// Smallest coalition (bitmask order) with `x(S) > c(S)`, over the proper
    /// coalitions or, with `include_grand`, over all nonempty ones.
    pub fn first_violation(&self, x: &Allocation, include_grand: bool) -> Result<Option<Coalition>> {
        if x.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: x.len(),
            });
        }
        check_limit("coalition enumeration", self.n)?;
        Ok(Coalition::nonempty(self.n)
            .filter(|s| include_grand || !s.is_grand())
            .find(|&s| x.sum_over(s) > self.value(s.bits())))
    }
}

/// In-place `t[S] = min_{R ⊇ S} t[R]`, one sweep per agent.
pub(crate) fn superset_min(t: &mut [Rational], n: usize) {
    for i in 0..n {
        let bit = 1usize << i;
        for s in 0..t.len() {
            if s & bit == 0 && t[s | bit] < t[s] {
                t[s] = t[s | bit].clone();
            }
        }
    }
}

/// Outcome of a structural check; `Violated` carries the smallest witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<W> {
    Holds,
    Violated(W),
}

impl<W> Verdict<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Holds => None,
            Verdict::Violated(w) => Some(w),
        }
    }
}

/// Cost shares `x_1, …, x_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Allocation(Vec<Rational>);

impl Allocation {
    pub fn new(shares: Vec<Rational>) -> Self {
        Self(shares)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![Rational::zero(); n])
    }

    pub fn shares(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_shares(self) -> Vec<Rational> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `x(S)`.
    pub fn sum_over(&self, s: Coalition) -> Rational {
        s.members().map(|i| &self.0[i]).sum()
    }

    /// `x(N)`.
    pub fn total(&self) -> Rational {
        self.0.iter().sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|v| !v.is_negative())
    }
}

impl Index<usize> for Allocation {
    type Output = Rational;

    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl From<Vec<Rational>> for Allocation {
    fn from(v: Vec<Rational>) -> Self {
        Self(v)
    }
}

impl fmt::Display for Allocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}
