//! Exhaustive search for the smallest label count admitting a
//! product-proper labelling.

use thiserror::Error;

use crate::graph::Graph;

/// Largest edge count the search accepts.
pub const MAX_ORACLE_EDGES: usize = 16;
/// Largest label count the search accepts.
pub const MAX_ORACLE_K: usize = 16;

const PRIMES: [u32; 6] = [2, 3, 5, 7, 11, 13];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("graph has {0} edges, the search handles at most {MAX_ORACLE_EDGES}")]
    TooManyEdges(usize),
    #[error("k_max must lie in 1..={MAX_ORACLE_K}, got {0}")]
    KOutOfRange(usize),
}

type Exponents = [u32; PRIMES.len()];

fn factor(mut label: u32) -> Exponents {
    let mut out = [0; PRIMES.len()];
    for (slot, &p) in out.iter_mut().zip(&PRIMES) {
        while label.is_multiple_of(p) {
            label /= p;
            *slot += 1;
        }
    }
    out
}

struct Search<'a> {
    g: &'a Graph,
    k: usize,
    /// Prime exponents of labels `1..=k`.
    factors: Vec<Exponents>,
    /// Vertices whose last incident edge (in index order) is `e`.
    closing: Vec<Vec<usize>>,
    last_edge: Vec<usize>,
    keys: Vec<Exponents>,
}

impl Search<'_> {
    fn add(&mut self, e: usize, label: usize, sign: bool) {
        let (a, b) = self.g.edge(e);
        let f = self.factors[label - 1];
        for v in [a, b] {
            for (k, x) in self.keys[v].iter_mut().zip(f) {
                if sign {
                    *k += x;
                } else {
                    *k -= x;
                }
            }
        }
    }

    fn closed_ok(&self, e: usize) -> bool {
        self.closing[e].iter().all(|&v| {
            self.g
                .neighbours(v)
                .iter()
                .all(|&(w, _)| self.last_edge[w] > e || self.keys[v] != self.keys[w])
        })
    }

    fn run(&mut self, e: usize) -> bool {
        if e == self.g.edge_count() {
            return true;
        }
        for label in 1..=self.k {
            self.add(e, label, true);
            if self.closed_ok(e) && self.run(e + 1) {
                return true;
            }
            self.add(e, label, false);
        }
        false
    }
}

/// Whether some labelling with labels `1..=k` is product-proper.
pub fn has_proper_labelling(g: &Graph, k: usize) -> Result<bool, OracleError> {
    if g.edge_count() > MAX_ORACLE_EDGES {
        return Err(OracleError::TooManyEdges(g.edge_count()));
    }
    if k == 0 || k > MAX_ORACLE_K {
        return Err(OracleError::KOutOfRange(k));
    }
    let n = g.vertex_count();
    let mut last_edge = vec![0; n];
    let mut closing = vec![Vec::new(); g.edge_count()];
    for (v, last) in last_edge.iter_mut().enumerate() {
        if let Some(e) = g.neighbours(v).iter().map(|&(_, e)| e).max() {
            *last = e;
            closing[e].push(v);
        }
    }
    let mut search = Search {
        g,
        k,
        factors: (1..=k as u32).map(factor).collect(),
        closing,
        last_edge,
        keys: vec![[0; PRIMES.len()]; n],
    };
    Ok(search.run(0))
}

/// Smallest `k <= k_max` with a product-proper `k`-labelling, or `None`.
/// An edgeless graph gets 1.
pub fn brute_force_min_k(g: &Graph, k_max: usize) -> Result<Option<usize>, OracleError> {
    if g.edge_count() > MAX_ORACLE_EDGES {
        return Err(OracleError::TooManyEdges(g.edge_count()));
    }
    if k_max == 0 || k_max > MAX_ORACLE_K {
        return Err(OracleError::KOutOfRange(k_max));
    }
    for k in 1..=k_max {
        if has_proper_labelling(g, k)? {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_graphs() {
        assert_eq!(brute_force_min_k(&Graph::path(3), 3), Ok(Some(2)));
        assert_eq!(brute_force_min_k(&Graph::complete(3), 3), Ok(Some(3)));
        assert_eq!(brute_force_min_k(&Graph::complete(4), 3), Ok(Some(3)));
        assert_eq!(brute_force_min_k(&Graph::path(2), 3), Ok(None));
        assert_eq!(brute_force_min_k(&Graph::edgeless(4), 3), Ok(Some(1)));
        assert_eq!(brute_force_min_k(&Graph::star(3), 3), Ok(Some(2)));
    }

    #[test]
    fn label_four_counts_as_two_twos() {
        assert_eq!(factor(4), [2, 0, 0, 0, 0, 0]);
        assert_eq!(factor(12), [2, 1, 0, 0, 0, 0]);
        assert_eq!(factor(1), [0; 6]);
    }

    #[test]
    fn bounds() {
        let big = Graph::complete(7);
        assert_eq!(
            brute_force_min_k(&big, 3),
            Err(OracleError::TooManyEdges(21))
        );
        assert_eq!(
            brute_force_min_k(&Graph::path(3), 0),
            Err(OracleError::KOutOfRange(0))
        );
        assert_eq!(
            brute_force_min_k(&Graph::path(3), 17),
            Err(OracleError::KOutOfRange(17))
        );
    }
}
