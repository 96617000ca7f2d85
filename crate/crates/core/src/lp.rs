//! Dense linear programming over exact rationals.
//!
//! Problems are maximizations with `≤`, `=` and `≥` rows and optional
//! per-variable lower bounds; variables without a lower bound are free.
//! Internally every variable is shifted or split into nonnegative parts,
//! every row becomes `a·y ≤ b` with a slack, and the dictionary form of the
//! simplex method is run with Bland's rule. A single artificial variable
//! handles phase one when the origin is infeasible.

use std::cmp::Ordering;
use std::mem;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn lhs(&self, point: &[Rational]) -> Rational {
        dot(&self.coeffs, point)
    }
}

/// `max objective·x` subject to the constraints and lower bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpProblem {
    objective: Vec<Rational>,
    constraints: Vec<Constraint>,
    lower_bounds: Vec<Option<Rational>>,
}

impl LpProblem {
    /// A problem with the given objective and all variables free.
    pub fn maximize(objective: Vec<Rational>) -> Self {
        let n = objective.len();
        Self {
            objective,
            constraints: Vec::new(),
            lower_bounds: vec![None; n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn lower_bounds(&self) -> &[Option<Rational>] {
        &self.lower_bounds
    }

    /// Appends a row and returns its index.
    pub fn add_constraint(
        &mut self,
        coeffs: Vec<Rational>,
        relation: Relation,
        rhs: Rational,
    ) -> Result<usize> {
        if coeffs.len() != self.num_vars() {
            return Err(Error::MalformedLp(format!(
                "constraint {} has {} coefficients for {} variables",
                self.constraints.len(),
                coeffs.len(),
                self.num_vars()
            )));
        }
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        Ok(self.constraints.len() - 1)
    }

    pub fn set_lower_bound(&mut self, var: usize, bound: Option<Rational>) -> Result<()> {
        let n = self.num_vars();
        let slot = self.lower_bounds.get_mut(var).ok_or_else(|| {
            Error::MalformedLp(format!("variable {var} out of range for {n} variables"))
        })?;
        *slot = bound;
        Ok(())
    }

    pub fn set_all_lower_bounds(&mut self, bound: Rational) {
        for slot in &mut self.lower_bounds {
            *slot = Some(bound.clone());
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpSolution {
    Optimal {
        value: Rational,
        point: Vec<Rational>,
    },
    Infeasible,
    Unbounded,
}

impl LpSolution {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpSolution::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn point(&self) -> Option<&[Rational]> {
        match self {
            LpSolution::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }

    /// Turns non-optimal outcomes into errors.
    pub fn into_optimal(self) -> Result<(Rational, Vec<Rational>)> {
        match self {
            LpSolution::Optimal { value, point } => Ok((value, point)),
            LpSolution::Infeasible => Err(Error::Infeasible),
            LpSolution::Unbounded => Err(Error::Unbounded),
        }
    }
}

/// Exact feasibility audit of a point.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Feasibility {
    pub violated_constraints: Vec<usize>,
    pub violated_bounds: Vec<usize>,
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        self.violated_constraints.is_empty() && self.violated_bounds.is_empty()
    }
}

pub fn verify_point(p: &LpProblem, point: &[Rational]) -> Result<Feasibility> {
    if point.len() != p.num_vars() {
        return Err(Error::Dimension {
            expected: p.num_vars(),
            got: point.len(),
        });
    }
    let violated_constraints = p
        .constraints
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.relation.holds(&c.lhs(point), &c.rhs))
        .map(|(i, _)| i)
        .collect();
    let violated_bounds = p
        .lower_bounds
        .iter()
        .zip(point)
        .enumerate()
        .filter(|(_, (lb, x))| lb.as_ref().is_some_and(|lb| *x < lb))
        .map(|(i, _)| i)
        .collect();
    Ok(Feasibility {
        violated_constraints,
        violated_bounds,
    })
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// How an original variable maps onto nonnegative columns.
enum Column {
    Shifted { col: usize, lower: Rational },
    Split { pos: usize, neg: usize },
}

pub fn solve(p: &LpProblem) -> LpSolution {
    let mut columns = Vec::with_capacity(p.num_vars());
    let mut width = 0;
    for lb in &p.lower_bounds {
        match lb {
            Some(lower) => {
                columns.push(Column::Shifted {
                    col: width,
                    lower: lower.clone(),
                });
                width += 1;
            }
            None => {
                columns.push(Column::Split {
                    pos: width,
                    neg: width + 1,
                });
                width += 2;
            }
        }
    }

    let lift = |coeffs: &[Rational]| -> (Vec<Rational>, Rational) {
        let mut row = vec![Rational::zero(); width];
        let mut shift = Rational::zero();
        for (a, col) in coeffs.iter().zip(&columns) {
            if a.is_zero() {
                continue;
            }
            match col {
                Column::Shifted { col, lower } => {
                    row[*col] = a.clone();
                    if !lower.is_zero() {
                        shift += a * lower;
                    }
                }
                Column::Split { pos, neg } => {
                    row[*pos] = a.clone();
                    row[*neg] = -a;
                }
            }
        }
        (row, shift)
    };

    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for c in &p.constraints {
        let (row, shift) = lift(&c.coeffs);
        let b = &c.rhs - shift;
        if matches!(c.relation, Relation::Le | Relation::Eq) {
            rows.push(row.clone());
            rhs.push(b.clone());
        }
        if matches!(c.relation, Relation::Ge | Relation::Eq) {
            rows.push(row.into_iter().map(|a| -a).collect());
            rhs.push(-b);
        }
    }
    let (objective, _) = lift(&p.objective);

    let mut dict = Dictionary::new(rows, rhs, width);
    if dict.b.iter().any(|b| b.is_negative()) && !dict.phase_one() {
        return LpSolution::Infeasible;
    }
    dict.set_objective(&objective);
    if !dict.optimize() {
        return LpSolution::Unbounded;
    }

    let y = dict.values(width);
    let point: Vec<Rational> = columns
        .iter()
        .map(|col| match col {
            Column::Shifted { col, lower } => lower + &y[*col],
            Column::Split { pos, neg } => &y[*pos] - &y[*neg],
        })
        .collect();
    let value = dot(&p.objective, &point);
    LpSolution::Optimal { value, point }
}

/// Basic variable `basis[r] = b[r] − Σ_c a[r][c]·nonbasis[c]`, objective
/// `z = z0 + Σ_c obj[c]·nonbasis[c]`. Variable ids fix Bland's ordering:
/// structural columns first, then one slack per row, then the artificial.
struct Dictionary {
    a: Vec<Vec<Rational>>,
    b: Vec<Rational>,
    basis: Vec<usize>,
    nonbasis: Vec<usize>,
    obj: Vec<Rational>,
    z0: Rational,
}

impl Dictionary {
    fn new(a: Vec<Vec<Rational>>, b: Vec<Rational>, width: usize) -> Self {
        let m = a.len();
        Self {
            a,
            b,
            basis: (width..width + m).collect(),
            nonbasis: (0..width).collect(),
            obj: vec![Rational::zero(); width],
            z0: Rational::zero(),
        }
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let inv = self.a[r][e].recip();
        let mut prow = mem::take(&mut self.a[r]);
        for (c, v) in prow.iter_mut().enumerate() {
            if c == e {
                *v = inv.clone();
            } else if !v.is_zero() {
                *v *= &inv;
            }
        }
        self.b[r] *= &inv;
        let pb = self.b[r].clone();

        for (i, row) in self.a.iter_mut().enumerate() {
            if i == r || row[e].is_zero() {
                continue;
            }
            let f = mem::take(&mut row[e]);
            eliminate(row, &prow, &f, e);
            self.b[i] -= &f * &pb;
        }
        if !self.obj[e].is_zero() {
            let g = mem::take(&mut self.obj[e]);
            self.z0 += &g * &pb;
            eliminate(&mut self.obj, &prow, &g, e);
        }

        self.a[r] = prow;
        mem::swap(&mut self.basis[r], &mut self.nonbasis[e]);
    }

    /// Bland: lowest-id improving column, then lowest-id basic variable
    /// among the minimum-ratio rows.
    fn choose_leaving(&self, e: usize) -> Option<usize> {
        let mut best: Option<(usize, Rational)> = None;
        for (r, row) in self.a.iter().enumerate() {
            if !row[e].is_positive() {
                continue;
            }
            let ratio = &self.b[r] / &row[e];
            let better = match &best {
                None => true,
                Some((br, bratio)) => match ratio.cmp(bratio) {
                    Ordering::Less => true,
                    Ordering::Equal => self.basis[r] < self.basis[*br],
                    Ordering::Greater => false,
                },
            };
            if better {
                best = Some((r, ratio));
            }
        }
        best.map(|(r, _)| r)
    }

    fn choose_entering(&self) -> Option<usize> {
        self.obj
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_positive())
            .min_by_key(|(c, _)| self.nonbasis[*c])
            .map(|(c, _)| c)
    }

    /// Runs to optimality; false when unbounded.
    fn optimize(&mut self) -> bool {
        while let Some(e) = self.choose_entering() {
            match self.choose_leaving(e) {
                Some(r) => self.pivot(r, e),
                None => return false,
            }
        }
        true
    }

    /// Finds a feasible dictionary; false when the system is infeasible.
    fn phase_one(&mut self) -> bool {
        let art = self.nonbasis.len() + self.basis.len();
        for row in &mut self.a {
            row.push(-Rational::one());
        }
        self.nonbasis.push(art);
        let art_col = self.nonbasis.len() - 1;
        self.obj = vec![Rational::zero(); self.nonbasis.len()];
        self.obj[art_col] = -Rational::one();
        self.z0 = Rational::zero();

        let start = (0..self.b.len())
            .min_by(|&i, &j| {
                self.b[i]
                    .cmp(&self.b[j])
                    .then(self.basis[i].cmp(&self.basis[j]))
            })
            .expect("phase one needs a negative row");
        self.pivot(start, art_col);
        let bounded = self.optimize();
        debug_assert!(bounded);
        if self.z0.is_negative() {
            return false;
        }

        if let Some(r) = self.basis.iter().position(|&v| v == art) {
            let col = (0..self.nonbasis.len())
                .filter(|&c| !self.a[r][c].is_zero())
                .min_by_key(|&c| self.nonbasis[c]);
            match col {
                Some(c) => self.pivot(r, c),
                None => {
                    // Row is identically zero: a redundant constraint.
                    self.a.remove(r);
                    self.b.remove(r);
                    self.basis.remove(r);
                }
            }
        }
        let c = self
            .nonbasis
            .iter()
            .position(|&v| v == art)
            .expect("artificial variable is nonbasic after phase one");
        self.nonbasis.remove(c);
        for row in &mut self.a {
            row.remove(c);
        }
        true
    }

    /// Rewrites `Σ objective[j]·y_j` in terms of the current nonbasis.
    fn set_objective(&mut self, objective: &[Rational]) {
        self.obj = vec![Rational::zero(); self.nonbasis.len()];
        self.z0 = Rational::zero();
        for (c, &v) in self.nonbasis.iter().enumerate() {
            if v < objective.len() {
                self.obj[c] += &objective[v];
            }
        }
        for (r, &v) in self.basis.iter().enumerate() {
            if v >= objective.len() || objective[v].is_zero() {
                continue;
            }
            let cj = &objective[v];
            self.z0 += cj * &self.b[r];
            for (o, a) in self.obj.iter_mut().zip(&self.a[r]) {
                if !a.is_zero() {
                    *o -= cj * a;
                }
            }
        }
    }

    fn values(&self, width: usize) -> Vec<Rational> {
        let mut y = vec![Rational::zero(); width];
        for (r, &v) in self.basis.iter().enumerate() {
            if v < width {
                y[v] = self.b[r].clone();
            }
        }
        y
    }
}

/// `row[c] -= f·prow[c]` for `c ≠ e`, and `row[e] = −f·prow[e]`.
fn eliminate(row: &mut [Rational], prow: &[Rational], f: &Rational, e: usize) {
    for (c, (v, pv)) in row.iter_mut().zip(prow).enumerate() {
        if c == e {
            *v = -(f * pv);
        } else if !pv.is_zero() {
            *v -= f * pv;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn unit(n: usize, i: usize) -> Vec<Rational> {
        (0..n).map(|j| int((i == j) as i64)).collect()
    }

    #[test]
    fn pair_constraint_binds() {
        let mut p = LpProblem::maximize(vec![int(1), int(1)]);
        p.add_constraint(unit(2, 0), Relation::Le, int(1)).unwrap();
        p.add_constraint(unit(2, 1), Relation::Le, int(1)).unwrap();
        p.add_constraint(vec![int(1), int(1)], Relation::Le, int(1))
            .unwrap();
        p.set_all_lower_bounds(int(0));
        let sol = solve(&p);
        assert_eq!(sol.value(), Some(&int(1)));
        assert!(verify_point(&p, sol.point().unwrap()).unwrap().is_feasible());
    }

    #[test]
    fn unconstrained_is_unbounded() {
        let p = LpProblem::maximize(vec![int(1)]);
        assert_eq!(solve(&p), LpSolution::Unbounded);
    }

    #[test]
    fn contradictory_bounds_are_infeasible() {
        let mut p = LpProblem::maximize(vec![int(1)]);
        p.add_constraint(vec![int(1)], Relation::Le, int(0)).unwrap();
        p.add_constraint(vec![int(1)], Relation::Ge, int(1)).unwrap();
        assert_eq!(solve(&p), LpSolution::Infeasible);
    }

    #[test]
    fn rejects_wrong_width() {
        let mut p = LpProblem::maximize(vec![int(1), int(2)]);
        assert!(p.add_constraint(vec![int(1)], Relation::Le, int(0)).is_err());
        assert!(verify_point(&p, &[int(0)]).is_err());
        assert!(p.set_lower_bound(2, None).is_err());
    }

    #[test]
    fn equality_and_negative_shift() {
        // max x - y, x + y = 3, x <= 5/2, y >= -1/2 (bound), x free
        let mut p = LpProblem::maximize(vec![int(1), int(-1)]);
        p.add_constraint(vec![int(1), int(1)], Relation::Eq, int(3))
            .unwrap();
        p.add_constraint(unit(2, 0), Relation::Le, frac(5, 2)).unwrap();
        p.set_lower_bound(1, Some(frac(-1, 2))).unwrap();
        let (value, point) = solve(&p).into_optimal().unwrap();
        assert_eq!(point, vec![frac(5, 2), frac(1, 2)]);
        assert_eq!(value, int(2));
    }

    #[test]
    fn redundant_equalities_are_tolerated() {
        let mut p = LpProblem::maximize(vec![int(1), int(0)]);
        p.add_constraint(vec![int(1), int(1)], Relation::Eq, int(2))
            .unwrap();
        p.add_constraint(vec![int(2), int(2)], Relation::Eq, int(4))
            .unwrap();
        p.add_constraint(unit(2, 1), Relation::Ge, int(-1)).unwrap();
        let (value, _) = solve(&p).into_optimal().unwrap();
        assert_eq!(value, int(3));
    }

    #[test]
    fn empty_problem_has_value_zero() {
        let p = LpProblem::maximize(vec![]);
        assert_eq!(solve(&p).value(), Some(&int(0)));
    }

    #[test]
    fn verify_reports_indices() {
        let mut p = LpProblem::maximize(vec![int(1), int(1)]);
        p.add_constraint(vec![int(1), int(1)], Relation::Le, int(1))
            .unwrap();
        p.add_constraint(unit(2, 0), Relation::Ge, int(0)).unwrap();
        p.set_lower_bound(1, Some(int(0))).unwrap();
        let f = verify_point(&p, &[int(-1), int(-1)]).unwrap();
        assert_eq!(f.violated_constraints, vec![1]);
        assert_eq!(f.violated_bounds, vec![1]);
    }
}
