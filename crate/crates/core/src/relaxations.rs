//! The almost core, the core and the standard core relaxations, each as one
//! exact LP over the coalition constraints.
//!
//! Rows are always emitted in ascending bitmask order so that solver output
//! is reproducible.

use num_traits::{One, Signed, Zero};

use crate::coalition::Coalition;
use crate::error::{check_limit, Error, Result};
use crate::game::{Allocation, Game, Sense};
use crate::lp::{solve, LpProblem, LpSolution, Relation};
use crate::rational::{int, Rational};

fn require_sense(game: &Game, sense: Sense) -> Result<()> {
    if game.sense() != sense {
        return Err(Error::InvalidGame(format!(
            "expected a {sense:?} game, got a {:?} game",
            game.sense()
        )));
    }
    Ok(())
}

fn cost_table(game: &Game, what: &'static str) -> Result<Vec<Rational>> {
    require_sense(game, Sense::Cost)?;
    check_limit(what, game.n())?;
    game.table()
}

/// Indicator of `s` over `width` columns.
fn indicator(s: Coalition, width: usize) -> Vec<Rational> {
    let mut row = vec![Rational::zero(); width];
    for i in s.members() {
        row[i] = Rational::one();
    }
    row
}

fn ones(n: usize) -> Vec<Rational> {
    vec![Rational::one(); n]
}

fn split(point: Vec<Rational>, n: usize) -> (Allocation, Vec<Rational>) {
    let mut head = point;
    let tail = head.split_off(n);
    (Allocation::new(head), tail)
}

/// `max x(N)` s.t. `x(S) ≤ c(S)` for every proper nonempty `S`, plus
/// `x ≥ 0` when `nonneg`.
pub fn almost_core_lp(game: &Game, nonneg: bool) -> Result<LpProblem> {
    let n = game.n();
    let t = cost_table(game, "almost core LP")?;
    let mut p = LpProblem::maximize(ones(n));
    for s in Coalition::proper(n) {
        p.add_constraint(indicator(s, n), Relation::Le, t[s.bits() as usize].clone())?;
    }
    if nonneg {
        p.set_all_lower_bounds(int(0));
    }
    Ok(p)
}

/// `P_core`: `x(S) ≤ c(S)` for every nonempty `S ⊆ N`, grand coalition
/// included.
pub fn core_polytope_lp(game: &Game, objective: Vec<Rational>) -> Result<LpProblem> {
    let n = game.n();
    if objective.len() != n {
        return Err(Error::Dimension {
            expected: n,
            got: objective.len(),
        });
    }
    let t = cost_table(game, "core LP")?;
    let mut p = LpProblem::maximize(objective);
    for s in Coalition::nonempty(n) {
        p.add_constraint(indicator(s, n), Relation::Le, t[s.bits() as usize].clone())?;
    }
    Ok(p)
}

/// Variables `(x, t)`: `min t(N)` s.t. `x(N) = c(N)`,
/// `(x − t)(S) ≤ c(S)` for proper `S`, `t ≥ 0`.
pub fn extended_core_lp(game: &Game) -> Result<LpProblem> {
    let n = game.n();
    let t = cost_table(game, "extended core LP")?;
    let mut objective = vec![Rational::zero(); n];
    objective.extend(vec![-Rational::one(); n]);
    let mut p = LpProblem::maximize(objective);
    let mut budget = ones(n);
    budget.extend(vec![Rational::zero(); n]);
    p.add_constraint(budget, Relation::Eq, game.grand_value())?;
    for s in Coalition::proper(n) {
        let mut row = indicator(s, 2 * n);
        for i in s.members() {
            row[n + i] = -Rational::one();
        }
        p.add_constraint(row, Relation::Le, t[s.bits() as usize].clone())?;
    }
    for i in n..2 * n {
        p.set_lower_bound(i, Some(int(0)))?;
    }
    Ok(p)
}

/// Largest total cost that can be shared with no proper coalition paying
/// more than its stand-alone cost.
pub fn almost_core_optimum(game: &Game, require_nonneg: bool) -> Result<(Rational, Allocation)> {
    let (value, point) = solve(&almost_core_lp(game, require_nonneg)?).into_optimal()?;
    Ok((value, Allocation::new(point)))
}

pub fn core_optimum(game: &Game, objective: &[Rational]) -> Result<LpSolution> {
    Ok(solve(&core_polytope_lp(game, objective.to_vec())?))
}

/// `max x(N)` over `P_core` and a maximizer.
fn core_max_total(game: &Game) -> Result<(Rational, Allocation)> {
    let (value, point) = core_optimum(game, &ones(game.n()))?.into_optimal()?;
    Ok((value, Allocation::new(point)))
}

/// A budget-balanced stable allocation, or `None` when the core is empty.
pub fn core_nonempty(game: &Game) -> Result<Option<Allocation>> {
    let (value, x) = core_max_total(game)?;
    Ok((value == game.grand_value()).then_some(x))
}

/// `min ε ≥ 0` such that `x(S) ≤ c(S) + ε·weight(S)` for proper `S` and
/// `x(N) = c(N)` is feasible.
fn additive_relaxation(
    game: &Game,
    weight: impl Fn(Coalition) -> Rational,
) -> Result<(Rational, Allocation)> {
    let n = game.n();
    let t = cost_table(game, "epsilon-core LP")?;
    let mut objective = vec![Rational::zero(); n];
    objective.push(-Rational::one());
    let mut p = LpProblem::maximize(objective);
    for s in Coalition::proper(n) {
        let mut row = indicator(s, n + 1);
        row[n] = -weight(s);
        p.add_constraint(row, Relation::Le, t[s.bits() as usize].clone())?;
    }
    let mut budget = ones(n);
    budget.push(Rational::zero());
    p.add_constraint(budget, Relation::Eq, game.grand_value())?;
    p.set_lower_bound(n, Some(int(0)))?;
    let (_, point) = solve(&p).into_optimal()?;
    let (x, eps) = split(point, n);
    Ok((eps[0].clone(), x))
}

/// Least-core value `ε_s★` and an allocation in the least core.
pub fn least_core_eps(game: &Game) -> Result<(Rational, Allocation)> {
    additive_relaxation(game, |_| Rational::one())
}

/// Smallest weak ε-core parameter `ε_w★` (relaxation `ε·|S|`).
pub fn weak_core_eps(game: &Game) -> Result<(Rational, Allocation)> {
    additive_relaxation(game, |s| int(s.len() as i64))
}

/// `γ_a★ = max{x(N) : x ∈ P_core} / c(N)` with a maximizer. Undefined when
/// `c(N) = 0`.
pub fn gamma_approx(game: &Game) -> Result<(Rational, Allocation)> {
    require_sense(game, Sense::Cost)?;
    let cn = game.grand_value();
    if cn.is_zero() {
        return Err(Error::UndefinedRatio);
    }
    let (value, x) = core_max_total(game)?;
    let gamma = &value / &cn;
    Ok((if gamma > Rational::one() { Rational::one() } else { gamma }, x))
}

/// Smallest multiplicative ε-core parameter `ε_m★`, obtained from
/// `γ_a★ = 1 / (1 + ε_m★)`. `None` when no finite ε works (`γ_a★ ≤ 0`).
///
/// With `c(N) = 0` the zero allocation is always a witness for `ε = 0`.
pub fn mult_core_eps(game: &Game) -> Result<Option<(Rational, Allocation)>> {
    require_sense(game, Sense::Cost)?;
    check_limit("multiplicative epsilon-core", game.n())?;
    if game.grand_value().is_zero() {
        return Ok(Some((Rational::zero(), Allocation::zeros(game.n()))));
    }
    let (gamma, x) = gamma_approx(game)?;
    if !gamma.is_positive() {
        return Ok(None);
    }
    let scale = gamma.recip();
    let eps = &scale - Rational::one();
    let witness = Allocation::new(x.shares().iter().map(|v| v * &scale).collect());
    Ok(Some((eps, witness)))
}

/// `δ★_CoS = c(N) − max{x(N) : x(S) ≤ c(S) ∀ S ⊆ N}` with a maximizer.
pub fn cost_of_stability_with_witness(game: &Game) -> Result<(Rational, Allocation)> {
    let (value, x) = core_max_total(game)?;
    Ok((game.grand_value() - value, x))
}

pub fn cost_of_stability(game: &Game) -> Result<Rational> {
    Ok(cost_of_stability_with_witness(game)?.0)
}

/// Minimum total subsidy `δ★_ec` with a witness `(x, t)`.
pub fn extended_core_delta(game: &Game) -> Result<(Rational, Allocation, Allocation)> {
    let n = game.n();
    let (value, point) = solve(&extended_core_lp(game)?).into_optimal()?;
    let (x, t) = split(point, n);
    Ok((-value, x, Allocation::new(t)))
}

/// For a profit game `v`: `min x(N)` s.t. `x(S) ≥ v(S)` for proper `S`.
pub fn min_stable_profit(game: &Game) -> Result<(Rational, Allocation)> {
    require_sense(game, Sense::Profit)?;
    let n = game.n();
    check_limit("stable profit LP", n)?;
    let t = game.table()?;
    let mut p = LpProblem::maximize(vec![-Rational::one(); n]);
    for s in Coalition::proper(n) {
        p.add_constraint(indicator(s, n), Relation::Ge, t[s.bits() as usize].clone())?;
    }
    let (value, point) = solve(&p).into_optimal()?;
    Ok((-value, Allocation::new(point)))
}

/// Every relaxation value of one game, each computed by its own LP.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelaxationReport {
    pub n: usize,
    pub grand_cost: Rational,
    pub core_nonempty: bool,
    pub core_element: Option<Allocation>,
    pub ac_opt: Rational,
    pub ac_allocation: Allocation,
    pub ac_opt_nonneg: Rational,
    pub ac_nonneg_allocation: Allocation,
    pub eps_strong: Rational,
    pub strong_witness: Allocation,
    pub eps_weak: Rational,
    pub weak_witness: Allocation,
    /// `None` when no finite multiplicative relaxation exists.
    pub eps_mult: Option<Rational>,
    pub mult_witness: Option<Allocation>,
    /// `None` when `c(N) = 0`.
    pub gamma_approx: Option<Rational>,
    pub gamma_witness: Option<Allocation>,
    pub cos_delta: Rational,
    pub cos_witness: Allocation,
    pub ext_core_delta: Rational,
    pub ext_core_witness: (Allocation, Allocation),
}

impl RelaxationReport {
    /// Names of the equalities and inequalities tying the quantities
    /// together that fail on this report; empty when all hold.
    pub fn identity_failures(&self) -> Vec<String> {
        let mut bad = Vec::new();
        let mut check = |ok: bool, name: &str| {
            if !ok {
                bad.push(name.to_string());
            }
        };
        let cn = &self.grand_cost;
        let n = int(self.n as i64);

        check(
            self.core_nonempty == (self.ac_opt >= *cn),
            "core nonempty iff ac_opt >= c(N)",
        );
        check(self.eps_weak <= self.eps_strong, "eps_weak <= eps_strong");
        if self.n >= 2 {
            check(
                self.eps_strong <= &self.eps_weak * (&n - int(1)),
                "eps_strong <= (n-1) eps_weak",
            );
        }
        if self.core_nonempty {
            check(self.cos_delta.is_zero(), "cos_delta = 0 on a balanced game");
            check(self.ext_core_delta.is_zero(), "ext_core_delta = 0 on a balanced game");
            check(self.eps_weak.is_zero(), "eps_weak = 0 on a balanced game");
            check(self.eps_strong.is_zero(), "eps_strong = 0 on a balanced game");
            check(
                self.eps_mult.as_ref().is_some_and(Zero::is_zero),
                "eps_mult = 0 on a balanced game",
            );
            if let Some(g) = &self.gamma_approx {
                check(g.is_one(), "gamma = 1 on a balanced game");
            }
        } else {
            let cos = &self.cos_delta;
            check(self.ext_core_delta == *cos, "ext_core_delta = cos_delta");
            check(&self.eps_weak * &n == *cos, "eps_weak * n = cos_delta");
            match &self.gamma_approx {
                Some(g) => check((Rational::one() - g) * cn == *cos, "(1 - gamma) c(N) = cos_delta"),
                None => check(false, "gamma defined on an unbalanced game"),
            }
            // An absent ε_m★ means ε/(1+ε) → 1.
            let mult_ratio = match &self.eps_mult {
                Some(e) => e / (e + Rational::one()),
                None => Rational::one(),
            };
            check(mult_ratio * cn == *cos, "eps_mult/(1+eps_mult) c(N) = cos_delta");
        }
        bad
    }
}

/// Computes every quantity independently and fails if any of the identities
/// in [`RelaxationReport::identity_failures`] does not hold exactly.
pub fn full_report(game: &Game) -> Result<RelaxationReport> {
    let n = game.n();
    check_limit("relaxation report", n)?;
    let game = game.to_explicit()?;
    let core_element = core_nonempty(&game)?;
    let (ac_opt, ac_allocation) = almost_core_optimum(&game, false)?;
    let (ac_opt_nonneg, ac_nonneg_allocation) = almost_core_optimum(&game, true)?;
    let (eps_strong, strong_witness) = least_core_eps(&game)?;
    let (eps_weak, weak_witness) = weak_core_eps(&game)?;
    let mult = mult_core_eps(&game)?;
    let gamma = match gamma_approx(&game) {
        Ok(g) => Some(g),
        Err(Error::UndefinedRatio) => None,
        Err(e) => return Err(e),
    };
    let (cos_delta, cos_witness) = cost_of_stability_with_witness(&game)?;
    let (ext_core_delta, ext_x, ext_t) = extended_core_delta(&game)?;

    let (eps_mult, mult_witness) = match mult {
        Some((e, w)) => (Some(e), Some(w)),
        None => (None, None),
    };
    let (gamma_approx, gamma_witness) = match gamma {
        Some((g, w)) => (Some(g), Some(w)),
        None => (None, None),
    };
    let report = RelaxationReport {
        n,
        grand_cost: game.grand_value(),
        core_nonempty: core_element.is_some(),
        core_element,
        ac_opt,
        ac_allocation,
        ac_opt_nonneg,
        ac_nonneg_allocation,
        eps_strong,
        strong_witness,
        eps_weak,
        weak_witness,
        eps_mult,
        mult_witness,
        gamma_approx,
        gamma_witness,
        cos_delta,
        cos_witness,
        ext_core_delta,
        ext_core_witness: (ext_x, ext_t),
    };
    let bad = report.identity_failures();
    if !bad.is_empty() {
        return Err(Error::IdentityViolated(bad.join("; ")));
    }
    Ok(report)
}
