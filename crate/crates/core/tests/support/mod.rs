//! Oracles that share no code path with the library routines they check.
#![allow(dead_code)]

use almost_core::lp::{LpProblem, Relation};
use almost_core::{Coalition, GraphInstance, Rational};
use num_traits::{One, Zero};

/// Solves the square system `a·x = b` by Gauss–Jordan elimination; `None`
/// when singular.
pub fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip();
        for v in a[col].iter_mut() {
            *v *= &inv;
        }
        b[col] *= &inv;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..n {
                    let d = &f * &a[col][c];
                    a[r][c] -= d;
                }
                let d = &f * &b[col];
                b[r] -= d;
            }
        }
    }
    Some(b)
}

fn feasible(p: &LpProblem, x: &[Rational]) -> bool {
    p.constraints().iter().all(|c| {
        let lhs: Rational = c.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
        c.relation.holds(&lhs, &c.rhs)
    }) && p
        .lower_bounds()
        .iter()
        .zip(x)
        .all(|(lb, v)| lb.as_ref().is_none_or(|lb| v >= lb))
}

fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, k, &mut Vec::new(), &mut out);
    out
}

/// Maximum of the objective over all vertices of the feasible region and
/// every vertex attaining it. Only meaningful for pointed, bounded-optimum
/// problems with a handful of variables.
pub fn vertex_optimum(p: &LpProblem) -> Option<(Rational, Vec<Vec<Rational>>)> {
    let n = p.num_vars();
    // Every constraint and lower bound as a hyperplane a·x = b.
    let mut planes: Vec<(Vec<Rational>, Rational)> = p
        .constraints()
        .iter()
        .map(|c| (c.coeffs.clone(), c.rhs.clone()))
        .collect();
    for (i, lb) in p.lower_bounds().iter().enumerate() {
        if let Some(lb) = lb {
            let mut row = vec![Rational::zero(); n];
            row[i] = Rational::one();
            planes.push((row, lb.clone()));
        }
    }
    let mut best: Option<(Rational, Vec<Vec<Rational>>)> = None;
    for idx in combinations(planes.len(), n) {
        let a = idx.iter().map(|&i| planes[i].0.clone()).collect();
        let b = idx.iter().map(|&i| planes[i].1.clone()).collect();
        let Some(x) = solve_square(a, b) else { continue };
        if !feasible(p, &x) {
            continue;
        }
        let value: Rational = p.objective().iter().zip(&x).map(|(c, v)| c * v).sum();
        match &mut best {
            Some((bv, pts)) if value == *bv => {
                if !pts.contains(&x) {
                    pts.push(x);
                }
            }
            Some((bv, _)) if value < *bv => {}
            _ => best = Some((value, vec![x])),
        }
    }
    best
}

/// Kruskal over the induced subgraph on `S ∪ {0}`, weights sorted
/// independently of any tie-breaking used by the library.
pub fn kruskal_cost(g: &GraphInstance, s: Coalition) -> Rational {
    let mut nodes = vec![0];
    nodes.extend(s.members().map(|a| a + 1));
    let mut edges: Vec<(Rational, usize, usize)> = Vec::new();
    for (a, &u) in nodes.iter().enumerate() {
        for &v in &nodes[a + 1..] {
            edges.push((g.weight(u, v).clone(), u, v));
        }
    }
    edges.sort();
    let mut parent: Vec<usize> = (0..=g.n()).collect();
    fn find(p: &mut [usize], mut v: usize) -> usize {
        while p[v] != v {
            p[v] = p[p[v]];
            v = p[v];
        }
        v
    }
    let mut total = Rational::zero();
    for (w, u, v) in edges {
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            parent[ru] = rv;
            total += w;
        }
    }
    total
}

/// Dual of `max c·x, A x ≤ b, x free` with only `≤` rows: `min b·y`,
/// `Aᵀ y = c`, `y ≥ 0`, written as a maximization of `−b·y`.
pub fn dual_of_free_le(p: &LpProblem) -> LpProblem {
    let m = p.constraints().len();
    let n = p.num_vars();
    assert!(p.lower_bounds().iter().all(Option::is_none));
    assert!(p.constraints().iter().all(|c| c.relation == Relation::Le));
    let mut d = LpProblem::maximize(p.constraints().iter().map(|c| -c.rhs.clone()).collect());
    for j in 0..n {
        let col = p.constraints().iter().map(|c| c.coeffs[j].clone()).collect();
        d.add_constraint(col, Relation::Eq, p.objective()[j].clone()).unwrap();
    }
    for i in 0..m {
        d.set_lower_bound(i, Some(Rational::zero())).unwrap();
    }
    d
}
