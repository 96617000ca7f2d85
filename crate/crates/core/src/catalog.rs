//! The small named instances used throughout the tests, fixtures and docs.
//! All have three agents; in the MST graphs agent `i` is node `i`.

use crate::game::Game;
use crate::mst::GraphInstance;
use crate::rational::{int, Rational};

fn triangle(w01: Rational, w02: Rational, w03: Rational, w12: Rational, w13: Rational, w23: Rational) -> GraphInstance {
    GraphInstance::from_edges(
        3,
        &[(0, 1, w01), (0, 2, w02), (0, 3, w03), (1, 2, w12), (1, 3, w13), (2, 3, w23)],
    )
    .expect("catalog graphs are valid")
}

/// `c(N) = 0` but the nonnegative almost-core optimum is `k`.
pub fn large_gap_graph(k: Rational) -> GraphInstance {
    let two_k = &k * int(2);
    triangle(int(0), two_k.clone(), two_k, int(0), k, int(0))
}

pub fn large_gap(k: Rational) -> Game {
    Game::mst(large_gap_graph(k))
}

/// The unique almost-core optimum is `(−k, k, k)`.
pub fn subsidy_graph(k: Rational) -> GraphInstance {
    let two_k = &k * int(2);
    triangle(int(0), two_k.clone(), two_k, int(0), int(0), int(0))
}

pub fn subsidy(k: Rational) -> Game {
    Game::mst(subsidy_graph(k))
}

/// Instance on which the 2-approximation returns `1 + ε`.
pub fn tight_bound_graph(eps: Rational) -> GraphInstance {
    triangle(int(1), int(2), int(2), int(0), eps, int(0))
}

pub fn tight_bound(eps: Rational) -> Game {
    Game::mst(tight_bound_graph(eps))
}

/// `c ≡ 1` on nonempty coalitions except `c({2,3}) = 2`; its
/// monotonization is `1` everywhere.
pub fn steiner_triangle_graph() -> GraphInstance {
    triangle(int(1), int(1), int(1), int(0), int(0), int(1))
}

pub fn steiner_triangle() -> Game {
    Game::mst(steiner_triangle_graph())
}

/// Explicit empty-core game: `c = 1` on proper nonempty coalitions and
/// `c(N) = 2`.
pub fn unbalanced_triple() -> Game {
    Game::from_fn(3, |s| {
        if s.is_empty() {
            int(0)
        } else if s.is_grand() {
            int(2)
        } else {
            int(1)
        }
    })
    .expect("valid table")
}
