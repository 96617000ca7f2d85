//! Separation over the almost core reduced to separation over
//! `P_core = {x : x(S) ≤ c(S) ∀ S ⊆ N}`.
//!
//! For a query `x̂` the reduction builds `n` points `x̂^k` that copy `x̂`
//! except `x̂^k_k = min(x̂_k, c(N) − x̂(N ∖ {k}))`. Each satisfies
//! `x̂^k ≤ x̂` and `x̂^k(N) ≤ c(N)`, so any violated inequality the `P_core`
//! oracle reports is a proper coalition that `x̂` violates too. If none of
//! them is violated, `x̂` is in the almost core: a proper `S` violated by
//! `x̂` misses some `k`, and `x̂^k` agrees with `x̂` on `S`.

use num_traits::Signed;

use crate::coalition::Coalition;
use crate::error::{check_limit, Error, Result};
use crate::game::{Allocation, Game};
use crate::rational::{self, Rational};

/// A coalition with `x(S) > c(S)` and the excess `x(S) − c(S)` at the
/// queried point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub coalition: Coalition,
    pub amount: Rational,
}

/// Exact separation for `P_core`; `Ok(None)` means the point is inside.
pub trait CoreSeparationOracle {
    /// Number of agents the oracle expects.
    fn dimension(&self) -> usize;

    fn separate(&self, x: &Allocation) -> Result<Option<Violation>>;
}

/// Enumerates every nonempty coalition and reports the first violated one
/// in bitmask order.
#[derive(Debug, Clone)]
pub struct BruteForceOracle {
    n: usize,
    table: Vec<Rational>,
}

impl BruteForceOracle {
    pub fn new(game: &Game) -> Result<Self> {
        check_limit("brute-force separation", game.n())?;
        Ok(Self {
            n: game.n(),
            table: game.table()?,
        })
    }
}

impl CoreSeparationOracle for BruteForceOracle {
    fn dimension(&self) -> usize {
        self.n
    }

    fn separate(&self, x: &Allocation) -> Result<Option<Violation>> {
        if x.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(Coalition::nonempty(self.n).find_map(|s| {
            let amount = x.sum_over(s) - &self.table[s.bits() as usize];
            amount.is_positive().then_some(Violation {
                coalition: s,
                amount,
            })
        }))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeparationResult {
    Member,
    /// A proper coalition with `x̂(S) > c(S)`; `amount` is measured at `x̂`.
    Violated(Violation),
    /// `x̂_agent < 0` in the nonnegative variant.
    NegativeShare { agent: usize, value: Rational },
}

impl SeparationResult {
    pub fn is_member(&self) -> bool {
        matches!(self, SeparationResult::Member)
    }
}

/// Lifts a violation found at `x̂^k` back to `x̂`; the two points differ only
/// in coordinate `k`.
fn lift(v: Violation, x: &Allocation, xk: &Allocation, k: usize) -> Result<Violation> {
    if v.coalition.is_grand() {
        return Err(Error::OracleMisbehaved(v.coalition));
    }
    let mut amount = v.amount;
    if v.coalition.contains(k) {
        amount += &x[k] - &xk[k];
    }
    Ok(Violation {
        coalition: v.coalition,
        amount,
    })
}

fn probe(x: &Allocation, k: usize, cn: &Rational, rest: &Rational) -> Allocation {
    let mut shares = x.shares().to_vec();
    shares[k] = rational::min(&x[k], &(cn - rest));
    Allocation::new(shares)
}

/// Almost-core separation with `n` queries to a `P_core` oracle.
pub fn separate_almost_core(
    x: &Allocation,
    oracle: &impl CoreSeparationOracle,
    grand_cost: &Rational,
) -> Result<SeparationResult> {
    if x.len() != oracle.dimension() {
        return Err(Error::Dimension {
            expected: oracle.dimension(),
            got: x.len(),
        });
    }
    let total = x.total();
    for k in 0..x.len() {
        let rest = &total - &x[k];
        let xk = probe(x, k, grand_cost, &rest);
        if let Some(v) = oracle.separate(&xk)? {
            return Ok(SeparationResult::Violated(lift(v, x, &xk, k)?));
        }
    }
    Ok(SeparationResult::Member)
}

/// Separation for the almost core intersected with `x ≥ 0`, for games with
/// `c(N ∖ {k}) ≤ c(N)` for all `k`.
///
/// Negative coordinates are reported first. When `x̂(N ∖ {k}) > c(N)` the
/// coalition `N ∖ {k}` itself is violated by the condition above; otherwise
/// `x̂^k` is nonnegative and the plain reduction applies.
pub fn separate_almost_core_nonneg(
    x: &Allocation,
    oracle: &impl CoreSeparationOracle,
    game: &Game,
) -> Result<SeparationResult> {
    let n = game.n();
    if x.len() != n {
        return Err(Error::Dimension {
            expected: n,
            got: x.len(),
        });
    }
    if let Some(k) = game.satisfies_last_monotone().witness() {
        return Err(Error::Precondition(format!(
            "c(N \\ {{{}}}) > c(N), the nonnegative reduction does not apply",
            k + 1
        )));
    }
    if let Some(agent) = x.shares().iter().position(|v| v.is_negative()) {
        return Ok(SeparationResult::NegativeShare {
            agent,
            value: x[agent].clone(),
        });
    }
    let grand = Coalition::grand(n);
    let cn = game.grand_value();
    let total = x.total();
    for k in 0..n {
        let rest = &total - &x[k];
        if rest > cn {
            let s = grand.without(k);
            return Ok(SeparationResult::Violated(Violation {
                coalition: s,
                amount: rest - game.evaluate(s)?,
            }));
        }
        let xk = probe(x, k, &cn, &rest);
        debug_assert!(xk.is_nonnegative());
        if let Some(v) = oracle.separate(&xk)? {
            return Ok(SeparationResult::Violated(lift(v, x, &xk, k)?));
        }
    }
    Ok(SeparationResult::Member)
}

/// Direct membership check against every proper coalition, independent of
/// the reduction.
pub fn brute_force_almost_core(game: &Game, x: &Allocation, nonneg: bool) -> Result<SeparationResult> {
    if nonneg {
        if let Some(agent) = x.shares().iter().position(|v| v.is_negative()) {
            return Ok(SeparationResult::NegativeShare {
                agent,
                value: x[agent].clone(),
            });
        }
    }
    Ok(match game.first_violation(x, false)? {
        None => SeparationResult::Member,
        Some(s) => SeparationResult::Violated(Violation {
            coalition: s,
            amount: x.sum_over(s) - game.evaluate(s)?,
        }),
    })
}
