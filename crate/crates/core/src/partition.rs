//! Ordered partitions into independent parts and the local search that makes
//! them valid: every vertex of a deeper part sees every shallower part, and
//! this survives any combination of swaps of the isolated edges of
//! `G[V1 ∪ V2]`.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

use crate::graph::{self, Graph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("graph is not nice")]
    NotNice,
    #[error("graph is not connected")]
    NotConnected,
    #[error("graph has no vertices")]
    Empty,
    #[error("order is not a permutation of the vertices")]
    BadOrder,
    #[error("edge {0} is not an isolated edge of G[V1 ∪ V2]")]
    NotInM0(usize),
    #[error("partition is not independent: edge {0} lies inside a part")]
    NotIndependent(usize),
    #[error("vertex {vertex} has no neighbour in part {part}")]
    MissingUpwardNeighbour { vertex: usize, part: usize },
    #[error("part assignment does not match the graph")]
    Malformed,
}

/// `(V1, …, Vt)`, with 1-based part indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    part_of: Vec<usize>,
    parts: Vec<BTreeSet<usize>>,
}

impl Partition {
    /// Builds from a vertex → part map (1-based). Parts may not be empty.
    pub fn from_assignment(part_of: Vec<usize>) -> Result<Self, PartitionError> {
        let t = part_of.iter().copied().max().unwrap_or(0);
        if part_of.contains(&0) {
            return Err(PartitionError::Malformed);
        }
        let mut parts = vec![BTreeSet::new(); t];
        for (v, &p) in part_of.iter().enumerate() {
            parts[p - 1].insert(v);
        }
        if parts.iter().any(BTreeSet::is_empty) {
            return Err(PartitionError::Malformed);
        }
        Ok(Partition { part_of, parts })
    }

    /// Builds from explicit parts `V1, V2, …`.
    pub fn from_parts(n: usize, parts: &[Vec<usize>]) -> Result<Self, PartitionError> {
        let mut part_of = vec![0; n];
        for (i, part) in parts.iter().enumerate() {
            for &v in part {
                if v >= n || part_of[v] != 0 {
                    return Err(PartitionError::Malformed);
                }
                part_of[v] = i + 1;
            }
        }
        if part_of.len() != n {
            return Err(PartitionError::Malformed);
        }
        Self::from_assignment(part_of)
    }

    pub fn part_count(&self) -> usize {
        self.parts.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.part_of.len()
    }

    /// 1-based part index of `v`.
    pub fn part_of(&self, v: usize) -> usize {
        self.part_of[v]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.part_of
    }

    /// Vertices of part `i` (1-based), ascending.
    pub fn part(&self, i: usize) -> &BTreeSet<usize> {
        &self.parts[i - 1]
    }

    pub fn parts(&self) -> &[BTreeSet<usize>] {
        &self.parts
    }

    pub fn in_bottom_pair(&self, v: usize) -> bool {
        self.part_of[v] <= 2
    }

    fn move_vertex(&mut self, v: usize, to: usize) {
        let from = self.part_of[v];
        self.parts[from - 1].remove(&v);
        while self.parts.len() < to {
            self.parts.push(BTreeSet::new());
        }
        self.parts[to - 1].insert(v);
        self.part_of[v] = to;
    }

    pub(crate) fn swap_unchecked(&mut self, g: &Graph, e: usize) {
        let (a, b) = g.edge(e);
        let (pa, pb) = (self.part_of[a], self.part_of[b]);
        debug_assert!((pa, pb) == (1, 2) || (pa, pb) == (2, 1));
        self.move_vertex(a, pb);
        self.move_vertex(b, pa);
    }

    fn drop_trailing_empty(&mut self) {
        while self.parts.last().is_some_and(BTreeSet::is_empty) {
            self.parts.pop();
        }
    }

    /// Sum of `k * |V_k|`.
    pub fn potential(&self) -> u64 {
        self.parts
            .iter()
            .enumerate()
            .map(|(i, p)| (i as u64 + 1) * p.len() as u64)
            .sum()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, part) in self.parts.iter().enumerate() {
            write!(f, "V{}:", i + 1)?;
            for v in part {
                write!(f, " {v}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

pub fn potential(p: &Partition) -> u64 {
    p.potential()
}

/// Descending degree, ties broken by ascending id.
pub fn degree_order(g: &Graph) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.vertex_count()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    order
}

/// First-fit colouring along `order`.
pub fn greedy_partition(g: &Graph, order: &[usize]) -> Result<Partition, PartitionError> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(PartitionError::Empty);
    }
    let distinct: HashSet<usize> = order.iter().copied().collect();
    if order.len() != n || distinct.len() != n || order.iter().any(|&v| v >= n) {
        return Err(PartitionError::BadOrder);
    }
    let mut part_of = vec![0usize; n];
    let mut taken = Vec::new();
    for &v in order {
        taken.clear();
        taken.extend(
            g.neighbours(v)
                .iter()
                .map(|&(w, _)| part_of[w])
                .filter(|&p| p != 0),
        );
        taken.sort_unstable();
        taken.dedup();
        let mut colour = 1;
        for &p in &taken {
            if p == colour {
                colour += 1;
            } else if p > colour {
                break;
            }
        }
        part_of[v] = colour;
    }
    Partition::from_assignment(part_of)
}

/// The isolated edges of `G[V1 ∪ V2]`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct M0Set(pub BTreeSet<usize>);

impl M0Set {
    pub fn contains(&self, e: usize) -> bool {
        self.0.contains(&e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    /// For each vertex, the M0 edge it is an endpoint of (if any).
    pub fn endpoint_map(&self, g: &Graph) -> Vec<Option<usize>> {
        let mut map = vec![None; g.vertex_count()];
        for e in self.iter() {
            let (a, b) = g.edge(e);
            map[a] = Some(e);
            map[b] = Some(e);
        }
        map
    }
}

fn bottom_degree(g: &Graph, p: &Partition, v: usize) -> usize {
    g.neighbours(v)
        .iter()
        .filter(|&&(w, _)| p.in_bottom_pair(w))
        .count()
}

pub fn compute_m0(g: &Graph, p: &Partition) -> M0Set {
    if p.part_count() < 2 {
        return M0Set::default();
    }
    let set = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, &(u, v))| {
            let pair = (p.part_of(u), p.part_of(v));
            (pair == (1, 2) || pair == (2, 1))
                && bottom_degree(g, p, u) == 1
                && bottom_degree(g, p, v) == 1
        })
        .map(|(e, _)| e)
        .collect();
    M0Set(set)
}

/// Exchanges the parts of the two ends of an M0 edge.
pub fn swap_edge(g: &Graph, p: &Partition, e: usize) -> Result<Partition, PartitionError> {
    if e >= g.edge_count() || !compute_m0(g, p).contains(e) {
        return Err(PartitionError::NotInM0(e));
    }
    let mut out = p.clone();
    out.swap_unchecked(g, e);
    Ok(out)
}

/// Edges lying inside a single part, ascending.
pub fn independence_violations(g: &Graph, p: &Partition) -> Vec<usize> {
    g.edges()
        .iter()
        .enumerate()
        .filter(|(_, &(u, v))| p.part_of(u) == p.part_of(v))
        .map(|(e, _)| e)
        .collect()
}

/// Every `(v, j)` with `j < part(v)` and no neighbour of `v` in `V_j`,
/// ordered by vertex then part.
pub fn check_p1(g: &Graph, p: &Partition) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut seen = Vec::new();
    for v in 0..g.vertex_count() {
        let i = p.part_of(v);
        if i < 2 {
            continue;
        }
        seen.clear();
        seen.resize(i, false);
        for &(w, _) in g.neighbours(v) {
            let j = p.part_of(w);
            if j < i {
                seen[j] = true;
            }
        }
        out.extend((1..i).filter(|&j| !seen[j]).map(|j| (v, j)));
    }
    out
}

/// Certificate that swap-robustness fails: swapping exactly `edges` leaves
/// `vertex` without a neighbour in `V_part`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SWitness {
    pub vertex: usize,
    pub part: usize,
    pub edges: Vec<usize>,
}

/// Swap-robustness check without enumerating swap subsets.
///
/// Swaps of distinct M0 edges act independently, and a vertex outside the
/// M0 endpoints can only lose a neighbour in `V_j` (j ∈ {1,2}) through M0
/// edges it touches at exactly one end. So `w` is safe for `j` iff it has a
/// non-M0 neighbour in `V_j` or it touches both ends of some M0 edge.
pub fn check_s(g: &Graph, p: &Partition) -> Result<Option<SWitness>, PartitionError> {
    if let Some(&e) = independence_violations(g, p).first() {
        return Err(PartitionError::NotIndependent(e));
    }
    if let Some(&(vertex, part)) = check_p1(g, p).first() {
        return Err(PartitionError::MissingUpwardNeighbour { vertex, part });
    }
    Ok(find_s_witness(g, p))
}

fn find_s_witness(g: &Graph, p: &Partition) -> Option<SWitness> {
    let m0 = compute_m0(g, p);
    if m0.is_empty() {
        return None;
    }
    let endpoint = m0.endpoint_map(g);
    for w in 0..g.vertex_count() {
        let i = p.part_of(w);
        if i < 2 || endpoint[w].is_some() {
            continue;
        }
        let sides: &[usize] = if i == 2 { &[1] } else { &[1, 2] };
        for &j in sides {
            let mut stable = false;
            let mut touched: BTreeSet<usize> = BTreeSet::new();
            let mut exposed = Vec::new();
            for &(x, _) in g.neighbours(w) {
                match endpoint[x] {
                    None if p.part_of(x) == j => stable = true,
                    None => {}
                    Some(e) => {
                        if !touched.insert(e) {
                            // w sees both ends of e
                            stable = true;
                        } else if p.part_of(x) == j {
                            exposed.push(e);
                        }
                    }
                }
            }
            if !stable {
                exposed.sort_unstable();
                return Some(SWitness {
                    vertex: w,
                    part: j,
                    edges: exposed,
                });
            }
        }
    }
    None
}

/// Statistics from [`build_valid_partition_with_stats`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RepairStats {
    pub moves: usize,
    pub swap_repairs: usize,
    pub potentials: Vec<u64>,
}

pub fn build_valid_partition(
    g: &Graph,
    initial: Option<Partition>,
) -> Result<Partition, PartitionError> {
    build_valid_partition_with_stats(g, initial).map(|(p, _)| p)
}

/// Local search from `initial` (or the degree-ordered greedy colouring).
///
/// Each iteration either moves a vertex lacking a neighbour in some shallower
/// part into the shallowest such part, or performs the swaps named by an
/// [`SWitness`] and then moves the stranded vertex. Both strictly decrease
/// the potential.
pub fn build_valid_partition_with_stats(
    g: &Graph,
    initial: Option<Partition>,
) -> Result<(Partition, RepairStats), PartitionError> {
    if g.vertex_count() == 0 {
        return Err(PartitionError::Empty);
    }
    if !graph::is_connected(g) {
        return Err(PartitionError::NotConnected);
    }
    if !graph::is_nice(g) {
        return Err(PartitionError::NotNice);
    }
    let mut p = match initial {
        Some(p) => {
            if p.vertex_count() != g.vertex_count() {
                return Err(PartitionError::Malformed);
            }
            if let Some(&e) = independence_violations(g, &p).first() {
                return Err(PartitionError::NotIndependent(e));
            }
            p
        }
        None => greedy_partition(g, &degree_order(g))?,
    };

    let mut stats = RepairStats {
        potentials: vec![p.potential()],
        ..RepairStats::default()
    };
    loop {
        if let Some(&(v, _)) = check_p1(g, &p).first() {
            move_down(g, &mut p, v);
            stats.moves += 1;
        } else if let Some(witness) = find_s_witness(g, &p) {
            for &e in &witness.edges {
                p.swap_unchecked(g, e);
            }
            move_down(g, &mut p, witness.vertex);
            stats.swap_repairs += 1;
        } else {
            break;
        }
        let f = p.potential();
        debug_assert!(f < *stats.potentials.last().unwrap());
        stats.potentials.push(f);
    }
    p.drop_trailing_empty();
    debug_assert!(p.parts.iter().all(|part| !part.is_empty()));
    Ok((p, stats))
}

/// Moves `v` to the shallowest part where it has no neighbour.
fn move_down(g: &Graph, p: &mut Partition, v: usize) {
    let i = p.part_of(v);
    let mut seen = vec![false; i];
    for &(w, _) in g.neighbours(v) {
        let j = p.part_of(w);
        if j < i {
            seen[j] = true;
        }
    }
    let target = (1..i)
        .find(|&j| !seen[j])
        .expect("move_down called on a vertex with every upward neighbour");
    p.move_vertex(v, target);
}

#[cfg(test)]
mod tests {
    use super::*;

    // y–x–w–z–p labelled y=0, x=1, w=2, z=3, p=4
    fn p5() -> Graph {
        Graph::path(5)
    }

    fn p5_seed() -> Partition {
        Partition::from_parts(5, &[vec![1, 4], vec![0, 3], vec![2]]).unwrap()
    }

    #[test]
    fn greedy_examples() {
        let k3 = Graph::complete(3);
        let p = greedy_partition(&k3, &[0, 1, 2]).unwrap();
        assert_eq!(p.assignment(), &[1, 2, 3]);
        let p3 = Graph::path(3);
        let p = greedy_partition(&p3, &[0, 1, 2]).unwrap();
        assert_eq!(p.assignment(), &[1, 2, 1]);
        let e3 = Graph::edgeless(3);
        let p = greedy_partition(&e3, &[0, 1, 2]).unwrap();
        assert_eq!(p.assignment(), &[1, 1, 1]);
        assert_eq!(
            greedy_partition(&e3, &[0, 1]),
            Err(PartitionError::BadOrder)
        );
        assert_eq!(
            greedy_partition(&e3, &[0, 1, 1]),
            Err(PartitionError::BadOrder)
        );
    }

    #[test]
    fn greedy_fills_gaps() {
        // 3 is adjacent to vertices coloured 1 and 3 but not 2
        let g = Graph::new(4, vec![(0, 1), (1, 2), (0, 2), (3, 0), (3, 2)]).unwrap();
        let p = greedy_partition(&g, &[0, 1, 2, 3]).unwrap();
        assert_eq!(p.assignment(), &[1, 2, 3, 2]);
    }

    #[test]
    fn potential_examples() {
        let k3 = Partition::from_assignment(vec![1, 2, 3]).unwrap();
        assert_eq!(potential(&k3), 6);
        let p3 = Partition::from_assignment(vec![1, 2, 1]).unwrap();
        assert_eq!(potential(&p3), 4);
        let single = Partition::from_assignment(vec![1; 7]).unwrap();
        assert_eq!(potential(&single), 7);
    }

    #[test]
    fn m0_examples() {
        let got = compute_m0(&p5(), &p5_seed());
        assert_eq!(got.0, BTreeSet::from([0, 3])); // yx, zp
        let k3 = Graph::complete(3);
        let p = Partition::from_assignment(vec![1, 2, 3]).unwrap();
        assert_eq!(compute_m0(&k3, &p).0, BTreeSet::from([0]));
        let star = Graph::star(3);
        let p = Partition::from_assignment(vec![2, 1, 1, 1]).unwrap();
        assert!(compute_m0(&star, &p).is_empty());
        let single = Partition::from_assignment(vec![1; 4]).unwrap();
        assert!(compute_m0(&Graph::edgeless(4), &single).is_empty());
    }

    #[test]
    fn swap_examples() {
        let k3 = Graph::complete(3);
        let p = Partition::from_assignment(vec![1, 2, 3]).unwrap();
        let q = swap_edge(&k3, &p, 0).unwrap();
        assert_eq!(q.assignment(), &[2, 1, 3]);
        assert_eq!(swap_edge(&k3, &q, 0).unwrap(), p);
        assert_eq!(swap_edge(&k3, &p, 1), Err(PartitionError::NotInM0(1)));

        let q = swap_edge(&p5(), &p5_seed(), 0).unwrap();
        assert_eq!(q.part(1), &BTreeSet::from([0, 4]));
        assert_eq!(q.part(2), &BTreeSet::from([1, 3]));
        assert_eq!(q.part(3), &BTreeSet::from([2]));
        assert_eq!(q.potential(), p5_seed().potential());
        assert_eq!(compute_m0(&p5(), &q), compute_m0(&p5(), &p5_seed()));
    }

    #[test]
    fn p1_examples() {
        let k3 = Graph::complete(3);
        let p = greedy_partition(&k3, &[0, 1, 2]).unwrap();
        assert!(check_p1(&k3, &p).is_empty());
        let p3 = Graph::path(3);
        let p = Partition::from_assignment(vec![1, 2, 1]).unwrap();
        assert!(check_p1(&p3, &p).is_empty());
        let swapped = swap_edge(&p5(), &p5_seed(), 0).unwrap();
        assert_eq!(check_p1(&p5(), &swapped), vec![(2, 1)]);
    }

    #[test]
    fn s_examples() {
        assert_eq!(
            check_s(&p5(), &p5_seed()).unwrap(),
            Some(SWitness {
                vertex: 2,
                part: 1,
                edges: vec![0]
            })
        );
        let k3 = Graph::complete(3);
        let p = greedy_partition(&k3, &[0, 1, 2]).unwrap();
        assert_eq!(check_s(&k3, &p).unwrap(), None);
        let p3 = Graph::path(3);
        let p = Partition::from_assignment(vec![1, 2, 1]).unwrap();
        assert_eq!(check_s(&p3, &p).unwrap(), None);
        let bad = Partition::from_assignment(vec![1, 1, 2]).unwrap();
        assert_eq!(check_s(&p3, &bad), Err(PartitionError::NotIndependent(0)));
    }

    #[test]
    fn build_examples() {
        let k3 = Graph::complete(3);
        let p = build_valid_partition(&k3, None).unwrap();
        assert_eq!(p.assignment(), &[1, 2, 3]);

        let (p, stats) = build_valid_partition_with_stats(&p5(), Some(p5_seed())).unwrap();
        assert_eq!(p.part_count(), 2);
        assert_eq!(p.part(1), &BTreeSet::from([0, 2, 4]));
        assert_eq!(p.part(2), &BTreeSet::from([1, 3]));
        assert_eq!(stats.potentials, vec![9, 7]);
        assert_eq!(stats.swap_repairs, 1);

        // the degree order places the centre first
        let star = Graph::star(3);
        let p = build_valid_partition(&star, None).unwrap();
        assert_eq!(p.assignment(), &[1, 2, 2, 2]);
        assert_eq!(check_s(&star, &p).unwrap(), None);
        // seeded with the leaves first, the leaves stay in V1
        let seed = greedy_partition(&star, &[1, 2, 3, 0]).unwrap();
        let p = build_valid_partition(&star, Some(seed)).unwrap();
        assert_eq!(p.assignment(), &[2, 1, 1, 1]);
    }

    #[test]
    fn build_rejects_bad_graphs() {
        assert_eq!(
            build_valid_partition(&Graph::complete(2), None),
            Err(PartitionError::NotNice)
        );
        let two = Graph::new(6, vec![(0, 1), (1, 2), (3, 4), (4, 5)]).unwrap();
        assert_eq!(
            build_valid_partition(&two, None),
            Err(PartitionError::NotConnected)
        );
    }

    #[test]
    fn empty_lower_part_is_refilled() {
        // V1 empty: everything must drift down by one
        let p3 = Graph::path(3);
        let p = Partition {
            part_of: vec![2, 3, 2],
            parts: vec![BTreeSet::new(), BTreeSet::from([0, 2]), BTreeSet::from([1])],
        };
        let q = build_valid_partition(&p3, Some(p)).unwrap();
        assert_eq!(q.part_count(), 2);
        assert!(check_p1(&p3, &q).is_empty());
    }

    #[test]
    fn display_dump() {
        let p = Partition::from_assignment(vec![1, 2, 1, 3]).unwrap();
        assert_eq!(p.to_string(), "V1: 0 2\nV2: 1\nV3: 3\n");
    }
}
