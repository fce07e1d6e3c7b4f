//! Seeded random graphs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{connected_components, Graph};

/// Erdős–Rényi `G(n, p)` from a ChaCha8 stream seeded with `seed`.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p.clamp(0.0, 1.0)) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges).expect("generated pairs are distinct and in range")
}

/// [`random_graph`] made nice: every `K2` component gets an edge from its
/// smaller end to the lowest-id vertex outside it. With `n = 2` the edge is
/// dropped instead.
pub fn random_nice_graph(n: usize, p: f64, seed: u64) -> Graph {
    let g = random_graph(n, p, seed);
    if n == 2 {
        return Graph::edgeless(2);
    }
    let mut edges = g.edges().to_vec();
    let mut current = g;
    loop {
        let Some(pair) = connected_components(&current)
            .into_iter()
            .find(|c| c.len() == 2)
        else {
            return current;
        };
        let (a, b) = (pair[0], pair[1]);
        let target = (0..n)
            .find(|&v| v != a && v != b)
            .expect("n >= 3 leaves a vertex outside the pair");
        edges.push((a.min(target), a.max(target)));
        current = Graph::new(n, edges.clone()).expect("target lies outside the pair");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_nice;

    #[test]
    fn small_cases() {
        assert_eq!(random_nice_graph(1, 0.5, 3).vertex_count(), 1);
        assert_eq!(random_nice_graph(2, 1.0, 3).edge_count(), 0);
        assert_eq!(
            random_nice_graph(5, 1.0, 9).edges(),
            Graph::complete(5).edges()
        );
        assert_eq!(random_nice_graph(0, 0.5, 1).vertex_count(), 0);
    }

    #[test]
    fn deterministic_and_nice() {
        for seed in 0..200 {
            let g = random_nice_graph(12, 0.12, seed);
            assert!(is_nice(&g), "seed {seed}");
            assert_eq!(g.edges(), random_nice_graph(12, 0.12, seed).edges());
        }
    }

    #[test]
    fn pair_gets_attached() {
        // 4 vertices, a single edge 2-3: 0 is the lowest vertex outside
        let mut seed = 0;
        let g = loop {
            let g = random_graph(4, 0.2, seed);
            if g.edges() == [(2, 3)] {
                break g;
            }
            seed += 1;
        };
        let nice = random_nice_graph(4, 0.2, seed);
        assert_eq!(g.edge_count() + 1, nice.edge_count());
        assert!(nice.adjacent(0, 2));
    }
}
