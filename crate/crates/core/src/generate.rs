//! Seeded random instances for property suites and benchmarks.

use rand::Rng;

use crate::game::Game;
use crate::mst::GraphInstance;
use crate::rational::{frac, Rational};
use crate::relaxations::core_nonempty;
use crate::error::Result;

/// Rational in `[0, max]` with denominator at most 4.
pub fn small_rational(rng: &mut impl Rng, max: i64) -> Rational {
    let q = rng.gen_range(1..=4);
    frac(rng.gen_range(0..=max * q), q)
}

/// Explicit cost game with independent costs in `[0, max]` on nonempty
/// coalitions.
pub fn random_game(rng: &mut impl Rng, n: usize, max: i64) -> Result<Game> {
    Game::from_fn(n, |s| {
        if s.is_empty() {
            Rational::from_integer(0.into())
        } else {
            small_rational(rng, max)
        }
    })
}

/// Rejection-samples [`random_game`] until the core is empty. Returns the
/// game and the number of rejected draws.
pub fn random_empty_core_game(rng: &mut impl Rng, n: usize, max: i64) -> Result<(Game, usize)> {
    let mut rejected = 0;
    loop {
        let g = random_game(rng, n, max)?;
        if core_nonempty(&g)?.is_none() {
            return Ok((g, rejected));
        }
        rejected += 1;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightModel {
    /// Independent rational weights in `[0, max]`.
    Uniform { max: i64 },
    /// Squared Euclidean distances between integer points in a square grid
    /// of side `side`; the supplier is a random point too.
    EuclideanSquared { side: i64 },
    /// A cheap random Hamiltonian path from the supplier, every other edge
    /// expensive.
    NearPath { max: i64 },
}

pub fn random_graph(rng: &mut impl Rng, n: usize, model: WeightModel) -> Result<GraphInstance> {
    let size = n + 1;
    let mut w = vec![vec![Rational::from_integer(0.into()); size]; size];
    match model {
        WeightModel::Uniform { max } => {
            for i in 0..size {
                for j in i + 1..size {
                    let v = small_rational(rng, max);
                    w[i][j] = v.clone();
                    w[j][i] = v;
                }
            }
        }
        WeightModel::EuclideanSquared { side } => {
            let pts: Vec<(i64, i64)> = (0..size)
                .map(|_| (rng.gen_range(0..=side), rng.gen_range(0..=side)))
                .collect();
            for i in 0..size {
                for j in i + 1..size {
                    let (dx, dy) = (pts[i].0 - pts[j].0, pts[i].1 - pts[j].1);
                    let v = Rational::from_integer((dx * dx + dy * dy).into());
                    w[i][j] = v.clone();
                    w[j][i] = v;
                }
            }
        }
        WeightModel::NearPath { max } => {
            let mut order: Vec<usize> = (1..size).collect();
            for i in (1..order.len()).rev() {
                order.swap(i, rng.gen_range(0..=i));
            }
            let mut path = vec![0];
            path.extend(order);
            for i in 0..size {
                for j in i + 1..size {
                    let v = small_rational(rng, max) + Rational::from_integer(max.into());
                    w[i][j] = v.clone();
                    w[j][i] = v;
                }
            }
            for pair in path.windows(2) {
                let v = small_rational(rng, max / 4 + 1);
                w[pair[0]][pair[1]] = v.clone();
                w[pair[1]][pair[0]] = v;
            }
        }
    }
    GraphInstance::from_matrix(w)
}
