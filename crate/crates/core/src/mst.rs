//! Minimum cost spanning tree games.
//!
//! Node `0` is the supplier; agent `a` (zero-based) is node `a + 1`.

use num_traits::{Signed, Zero};

use crate::coalition::{Coalition, MAX_AGENTS};
use crate::error::{check_limit, Error, Result};
use crate::game::{superset_min, Allocation, Game};
use crate::rational::{int, Rational};

/// Complete graph on `{0, 1, …, n}` with symmetric nonnegative weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphInstance {
    n: usize,
    w: Vec<Rational>,
}

impl GraphInstance {
    /// From a full `(n+1) × (n+1)` matrix; the diagonal is ignored.
    pub fn from_matrix(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let size = rows.len();
        if size < 2 {
            return Err(Error::InvalidGraph("need at least one agent".into()));
        }
        let n = size - 1;
        check_agents(n)?;
        let mut w = Vec::with_capacity(size * size);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != size {
                return Err(Error::InvalidGraph(format!(
                    "row {i} has {} entries, expected {size}",
                    row.len()
                )));
            }
            for (j, v) in row.iter().enumerate() {
                if i == j {
                    w.push(Rational::zero());
                    continue;
                }
                if v.is_negative() {
                    return Err(Error::InvalidGraph(format!("w({i},{j}) = {v} is negative")));
                }
                if *v != rows[j][i] {
                    return Err(Error::InvalidGraph(format!(
                        "w({i},{j}) = {v} but w({j},{i}) = {}",
                        rows[j][i]
                    )));
                }
                w.push(v.clone());
            }
        }
        Ok(Self { n, w })
    }

    /// From an edge list over nodes `0..=n`. Missing edges get weight
    /// `1 + Σ w`, which no minimum spanning tree of a connected instance
    /// ever uses; disconnected inputs are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize, Rational)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("need at least one agent".into()));
        }
        check_agents(n)?;
        let size = n + 1;
        let mut w: Vec<Option<Rational>> = vec![None; size * size];
        let mut parent: Vec<usize> = (0..size).collect();
        fn find(parent: &mut [usize], mut v: usize) -> usize {
            while parent[v] != v {
                parent[v] = parent[parent[v]];
                v = parent[v];
            }
            v
        }
        let mut total = Rational::zero();
        for (i, j, weight) in edges {
            let (i, j) = (*i, *j);
            if i > n || j > n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({i},{j}) names a node outside 0..={n}"
                )));
            }
            if i == j {
                return Err(Error::InvalidGraph(format!("self loop at node {i}")));
            }
            if weight.is_negative() {
                return Err(Error::InvalidGraph(format!(
                    "w({i},{j}) = {weight} is negative"
                )));
            }
            if w[i * size + j].is_some() {
                return Err(Error::InvalidGraph(format!("edge ({i},{j}) given twice")));
            }
            w[i * size + j] = Some(weight.clone());
            w[j * size + i] = Some(weight.clone());
            total += weight;
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            parent[ri] = rj;
        }
        let root = find(&mut parent, 0);
        if let Some(v) = (1..size).find(|&v| find(&mut parent, v) != root) {
            return Err(Error::InvalidGraph(format!(
                "node {v} is not connected to the supplier"
            )));
        }
        let filler = total + int(1);
        let w = w
            .into_iter()
            .enumerate()
            .map(|(idx, v)| match v {
                Some(v) => v,
                None if idx / size == idx % size => Rational::zero(),
                None => filler.clone(),
            })
            .collect();
        Ok(Self { n, w })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Weight between nodes `i` and `j` (node 0 is the supplier).
    pub fn weight(&self, i: usize, j: usize) -> &Rational {
        &self.w[i * (self.n + 1) + j]
    }

    /// Every edge `(i, j, w)` with `i < j`, lexicographically.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, &Rational)> + '_ {
        let size = self.n + 1;
        (0..size).flat_map(move |i| (i + 1..size).map(move |j| (i, j, self.weight(i, j))))
    }

    /// `w'(e) = w(e) + M` on every edge. Without an explicit `M` this uses
    /// `Σ_j c({j}) = Σ_j w(0, j)`.
    pub fn shift_weights(&self, m: Option<Rational>) -> Result<Self> {
        let m = match m {
            Some(m) if m.is_negative() => {
                return Err(Error::Precondition(format!("weight shift {m} is negative")))
            }
            Some(m) => m,
            None => self.default_shift(),
        };
        let size = self.n + 1;
        let w = self
            .w
            .iter()
            .enumerate()
            .map(|(idx, v)| {
                if idx / size == idx % size {
                    v.clone()
                } else {
                    v + &m
                }
            })
            .collect();
        Ok(Self { n: self.n, w })
    }

    pub fn default_shift(&self) -> Rational {
        (1..=self.n).map(|j| self.weight(0, j)).sum()
    }
}

fn check_agents(n: usize) -> Result<()> {
    if n > MAX_AGENTS {
        return Err(Error::LimitExceeded {
            what: "graph instance",
            n,
            limit: MAX_AGENTS,
        });
    }
    Ok(())
}

/// Which of several minimum-weight candidate edges Prim's algorithm takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    /// Smallest new node, then smallest tree node.
    #[default]
    LowestIndex,
    /// Largest new node, then largest tree node.
    HighestIndex,
}

impl TieBreak {
    fn prefers(self, a: usize, b: usize) -> bool {
        match self {
            TieBreak::LowestIndex => a < b,
            TieBreak::HighestIndex => a > b,
        }
    }
}

/// One run of Prim's algorithm from the supplier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimRun {
    /// Zero-based agents in insertion order.
    pub order: Vec<usize>,
    /// `(tree node, new node)` per insertion, as graph nodes.
    pub edges: Vec<(usize, usize)>,
    /// Weight of the connecting edge per insertion.
    pub weights: Vec<Rational>,
}

impl PrimRun {
    pub fn cost(&self) -> Rational {
        self.weights.iter().sum()
    }
}

pub fn prim(g: &GraphInstance, s: Coalition, tie: TieBreak) -> PrimRun {
    let nodes: Vec<usize> = s.members().map(|a| a + 1).collect();
    // best[k] = (weight, tree node) of the cheapest link from nodes[k].
    let mut best: Vec<Option<(Rational, usize)>> = nodes
        .iter()
        .map(|&v| Some((g.weight(0, v).clone(), 0)))
        .collect();
    let mut run = PrimRun {
        order: Vec::with_capacity(nodes.len()),
        edges: Vec::with_capacity(nodes.len()),
        weights: Vec::with_capacity(nodes.len()),
    };
    for _ in 0..nodes.len() {
        let mut pick: Option<usize> = None;
        for (k, cand) in best.iter().enumerate() {
            let Some((w, _)) = cand else { continue };
            let better = match pick {
                None => true,
                Some(p) => {
                    let pw = &best[p].as_ref().unwrap().0;
                    w < pw || (w == pw && tie.prefers(nodes[k], nodes[p]))
                }
            };
            if better {
                pick = Some(k);
            }
        }
        let k = pick.expect("a node remains outside the tree");
        let (w, from) = best[k].take().unwrap();
        let u = nodes[k];
        run.order.push(u - 1);
        run.edges.push((from, u));
        run.weights.push(w);
        for (k2, cand) in best.iter_mut().enumerate() {
            let Some((w2, from2)) = cand else { continue };
            let wu = g.weight(u, nodes[k2]);
            if wu < w2 || (wu == w2 && tie.prefers(u, *from2)) {
                *cand = Some((wu.clone(), u));
            }
        }
    }
    run
}

/// `c(S)`: minimum spanning tree weight on `S ∪ {0}`.
pub fn mst_cost(g: &GraphInstance, s: Coalition) -> Rational {
    prim(g, s, TieBreak::LowestIndex).cost()
}

/// `c(S)` for every coalition, indexed by bitmask.
pub fn cost_table(g: &GraphInstance) -> Result<Vec<Rational>> {
    check_limit("MST cost table", g.n)?;
    Ok(Coalition::all(g.n).map(|s| mst_cost(g, s)).collect())
}

/// `c̄(S) = min_{R ⊇ S} c(R)` for every coalition, indexed by bitmask.
pub fn monotonized_table(g: &GraphInstance) -> Result<Vec<Rational>> {
    let mut t = cost_table(g)?;
    superset_min(&mut t, g.n);
    Ok(t)
}

/// Single `c̄(S)` query. Builds the whole table; use
/// [`Game::mst_monotonized`] for repeated queries.
pub fn monotonized_cost(g: &GraphInstance, s: Coalition) -> Result<Rational> {
    if s.n() != g.n {
        return Err(Error::CoalitionOutOfRange {
            bits: s.bits(),
            n: g.n,
        });
    }
    Ok(monotonized_table(g)?.swap_remove(s.bits() as usize))
}

/// Charges each agent the edge that connects it in Prim's run, i.e. the
/// first edge on its tree path to the supplier.
pub fn granot_huberman(g: &GraphInstance) -> Allocation {
    let run = prim(g, Coalition::grand(g.n), TieBreak::LowestIndex);
    let mut x = vec![Rational::zero(); g.n];
    for (a, w) in run.order.iter().zip(run.weights) {
        x[*a] = w;
    }
    Allocation::new(x)
}

/// Everything the 2-approximation computed on its way to `x^ALG`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgRunTrace {
    /// Zero-based agents in Prim order; prefix `k` is `I_k`.
    pub insertion_order: Vec<usize>,
    pub tree_edges: Vec<(usize, usize)>,
    /// Shares before the last agent's update; they sum to `c(N)`.
    pub pre_update_shares: Allocation,
    pub last_agent: usize,
    /// `(k, c(N₋k) − x(N ∖ {k, ℓ}))` for every `k ≠ ℓ`, ascending `k`.
    pub candidates: Vec<(usize, Rational)>,
    /// Smallest `k` attaining the minimum.
    pub argmin_k: usize,
    pub final_shares: Allocation,
}

/// Prim order cost shares, then the last agent `ℓ` is raised to
/// `min_{k ≠ ℓ} c(N₋k) − x(N ∖ {k, ℓ})`.
pub fn algorithm1(g: &GraphInstance) -> Result<(Allocation, AlgRunTrace)> {
    algorithm1_with(g, TieBreak::LowestIndex)
}

pub fn algorithm1_with(g: &GraphInstance, tie: TieBreak) -> Result<(Allocation, AlgRunTrace)> {
    let n = g.n;
    if n < 2 {
        return Err(Error::Precondition(format!(
            "the approximation needs at least two agents, got {n}"
        )));
    }
    let grand = Coalition::grand(n);
    let run = prim(g, grand, tie);
    let mut x = vec![Rational::zero(); n];
    for (a, w) in run.order.iter().zip(&run.weights) {
        x[*a] = w.clone();
    }
    let pre = Allocation::new(x.clone());
    let last = *run.order.last().unwrap();

    let candidates: Vec<(usize, Rational)> = (0..n)
        .filter(|&k| k != last)
        .map(|k| {
            let others = grand.without(k).without(last);
            (k, mst_cost(g, grand.without(k)) - pre.sum_over(others))
        })
        .collect();
    let (argmin_k, best) = candidates
        .iter()
        .min_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)))
        .cloned()
        .unwrap();
    x[last] = best;
    let out = Allocation::new(x);

    let trace = AlgRunTrace {
        insertion_order: run.order,
        tree_edges: run.edges,
        pre_update_shares: pre,
        last_agent: last,
        candidates,
        argmin_k,
        final_shares: out.clone(),
    };
    Ok((out, trace))
}

/// Full table of `c` or, with `monotonize`, of `c̄`.
pub fn explicit_from_graph(g: &GraphInstance, monotonize: bool) -> Result<Game> {
    if monotonize {
        Game::mst_monotonized(g)
    } else {
        Game::mst(g.clone()).to_explicit()
    }
}
