//! Simple undirected graphs, induced views and the two text input formats.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

/// Errors raised while building a [`Graph`] from an explicit edge list.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("vertex {id} out of range for {n} vertices")]
    VertexOutOfRange { id: usize, n: usize },
}

/// Errors raised by the text parsers. Line numbers are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("malformed token {token:?} at line {line}")]
    MalformedToken { line: usize, token: String },
    #[error("malformed line at line {line}")]
    MalformedLine { line: usize },
    #[error("self-loop at line {line}")]
    SelfLoop { line: usize },
    #[error("duplicate edge at line {line}")]
    DuplicateEdge { line: usize },
    #[error("vertex id {id} out of range at line {line}")]
    VertexOutOfRange { line: usize, id: usize },
    #[error("missing problem line")]
    MissingProblemLine,
    #[error("duplicate problem line at line {line}")]
    DuplicateProblemLine { line: usize },
    #[error("edge count mismatch: header says {expected}, found {found}")]
    EdgeCountMismatch { expected: usize, found: usize },
}

/// An immutable simple undirected graph on vertices `0..vertex_count`.
///
/// Edges keep the orientation and order they were given in; the edge index
/// is the position in that list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<(usize, usize)>>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        let mut seen = HashSet::with_capacity(edges.len());
        for &(u, v) in &edges {
            for id in [u, v] {
                if id >= n {
                    return Err(GraphError::VertexOutOfRange { id, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if !seen.insert(normalise(u, v)) {
                return Err(GraphError::DuplicateEdge(u, v));
            }
        }
        Ok(Self::from_checked(n, edges))
    }

    fn from_checked(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for (e, &(u, v)) in edges.iter().enumerate() {
            adj[u].push((v, e));
            adj[v].push((u, e));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { n, edges, adj }
    }

    pub fn edgeless(n: usize) -> Self {
        Self::from_checked(n, Vec::new())
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Self::from_checked(n, edges)
    }

    pub fn path(n: usize) -> Self {
        Self::from_checked(n, (1..n).map(|v| (v - 1, v)).collect())
    }

    /// Star with centre 0 and leaves `1..=leaves`.
    pub fn star(leaves: usize) -> Self {
        Self::from_checked(leaves + 1, (1..=leaves).map(|v| (0, v)).collect())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    /// The endpoint of `e` that is not `v`.
    pub fn other_end(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            debug_assert_eq!(b, v);
            a
        }
    }

    /// `(neighbour, edge index)` pairs, sorted by neighbour id.
    pub fn neighbours(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        self.adj[u]
            .binary_search_by_key(&v, |&(w, _)| w)
            .ok()
            .map(|i| self.adj[u][i].1)
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.edge_between(u, v).is_some()
    }

    /// Serialises to the edge-list format with an explicit `n` header.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("n {}\n", self.n);
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

fn normalise(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_edge_list())
    }
}

fn parse_id(token: &str, line: usize) -> Result<usize, ParseError> {
    token.parse().map_err(|_| ParseError::MalformedToken {
        line,
        token: token.to_string(),
    })
}

/// Parses `u v` lines of 0-based ids. `#` comments and blank lines are
/// skipped; an optional `n <count>` line fixes the vertex count.
pub fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut declared: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut lines = Vec::new();
    let mut seen = HashSet::new();
    let mut max_id: Option<usize> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens[0] == "n" {
            if tokens.len() != 2 {
                return Err(ParseError::MalformedLine { line });
            }
            if declared.is_some() {
                return Err(ParseError::DuplicateProblemLine { line });
            }
            declared = Some((parse_id(tokens[1], line)?, line));
            continue;
        }
        if tokens.len() != 2 {
            return Err(ParseError::MalformedLine { line });
        }
        let u = parse_id(tokens[0], line)?;
        let v = parse_id(tokens[1], line)?;
        if u == v {
            return Err(ParseError::SelfLoop { line });
        }
        if !seen.insert(normalise(u, v)) {
            return Err(ParseError::DuplicateEdge { line });
        }
        max_id = Some(max_id.map_or(u.max(v), |m| m.max(u).max(v)));
        edges.push((u, v));
        lines.push(line);
    }

    let n = match declared {
        Some((count, _)) => {
            for (&(u, v), &line) in edges.iter().zip(&lines) {
                let id = u.max(v);
                if id >= count {
                    return Err(ParseError::VertexOutOfRange { line, id });
                }
            }
            count
        }
        None => max_id.map_or(0, |m| m + 1),
    };
    Ok(Graph::from_checked(n, edges))
}

/// Parses DIMACS `p edge n m` / `e u v` text with 1-based ids.
pub fn parse_dimacs(text: &str) -> Result<Graph, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut seen = HashSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        match tokens[0] {
            "c" => continue,
            "p" => {
                if header.is_some() {
                    return Err(ParseError::DuplicateProblemLine { line });
                }
                if tokens.len() != 4 || tokens[1] != "edge" {
                    return Err(ParseError::MalformedLine { line });
                }
                header = Some((parse_id(tokens[2], line)?, parse_id(tokens[3], line)?));
            }
            "e" => {
                let (n, _) = header.ok_or(ParseError::MissingProblemLine)?;
                if tokens.len() != 3 {
                    return Err(ParseError::MalformedLine { line });
                }
                let u = parse_id(tokens[1], line)?;
                let v = parse_id(tokens[2], line)?;
                for id in [u, v] {
                    if id == 0 || id > n {
                        return Err(ParseError::VertexOutOfRange { line, id });
                    }
                }
                if u == v {
                    return Err(ParseError::SelfLoop { line });
                }
                let (u, v) = (u - 1, v - 1);
                if !seen.insert(normalise(u, v)) {
                    return Err(ParseError::DuplicateEdge { line });
                }
                edges.push((u, v));
            }
            other => {
                return Err(ParseError::MalformedToken {
                    line,
                    token: other.to_string(),
                })
            }
        }
    }

    let (n, m) = header.ok_or(ParseError::MissingProblemLine)?;
    if edges.len() != m {
        return Err(ParseError::EdgeCountMismatch {
            expected: m,
            found: edges.len(),
        });
    }
    Ok(Graph::from_checked(n, edges))
}

/// Connected components, each sorted, ordered by smallest vertex id.
pub fn connected_components(g: &Graph) -> Vec<Vec<usize>> {
    let mut seen = vec![false; g.vertex_count()];
    let mut out = Vec::new();
    for start in 0..g.vertex_count() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &(w, _) in g.neighbours(v) {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                    queue.push_back(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// True iff no connected component is a single edge.
pub fn is_nice(g: &Graph) -> bool {
    connected_components(g)
        .iter()
        .all(|c| !(c.len() == 2 && g.adjacent(c[0], c[1])))
}

pub fn is_connected(g: &Graph) -> bool {
    connected_components(g).len() <= 1
}

/// The subgraph of a parent graph induced by a vertex subset.
///
/// Vertices and edges are reported with their parent (global) indices;
/// local indices are the positions in [`ComponentView::vertices`].
#[derive(Debug, Clone)]
pub struct ComponentView<'g> {
    parent: &'g Graph,
    vertices: Vec<usize>,
    edges: Vec<usize>,
    local: HashMap<usize, usize>,
    adj: Vec<Vec<(usize, usize)>>,
}

impl<'g> ComponentView<'g> {
    pub fn induced(parent: &'g Graph, subset: &[usize]) -> Self {
        let mut vertices = subset.to_vec();
        vertices.sort_unstable();
        vertices.dedup();
        let local: HashMap<usize, usize> =
            vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut edges = Vec::new();
        let mut adj = vec![Vec::new(); vertices.len()];
        for (i, &v) in vertices.iter().enumerate() {
            for &(w, e) in parent.neighbours(v) {
                if local.contains_key(&w) {
                    adj[i].push((w, e));
                    if v < w {
                        edges.push(e);
                    }
                }
            }
        }
        edges.sort_unstable();
        ComponentView {
            parent,
            vertices,
            edges,
            local,
            adj,
        }
    }

    pub fn parent(&self) -> &'g Graph {
        self.parent
    }

    /// Global ids, ascending.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Global edge indices, ascending.
    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn contains(&self, v: usize) -> bool {
        self.local.contains_key(&v)
    }

    pub fn contains_edge(&self, e: usize) -> bool {
        let (u, v) = self.parent.edge(e);
        self.contains(u) && self.contains(v)
    }

    pub fn local_index(&self, v: usize) -> Option<usize> {
        self.local.get(&v).copied()
    }

    pub fn global_index(&self, i: usize) -> usize {
        self.vertices[i]
    }

    /// `(global neighbour, global edge)` pairs inside the view.
    pub fn neighbours(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[self.local[&v]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbours(v).len()
    }

    /// Connected components of the view (global ids), ordered by smallest id.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.vertices.len()];
        let mut out = Vec::new();
        for start in 0..self.vertices.len() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![self.vertices[start]];
            let mut queue = VecDeque::from([start]);
            while let Some(i) = queue.pop_front() {
                for &(w, _) in &self.adj[i] {
                    let j = self.local[&w];
                    if !seen[j] {
                        seen[j] = true;
                        comp.push(w);
                        queue.push_back(j);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Standalone copy with vertices renumbered `0..len` in ascending global
    /// order and edges in ascending global index order.
    pub fn to_graph(&self) -> Graph {
        let edges = self
            .edges
            .iter()
            .map(|&e| {
                let (u, v) = self.parent.edge(e);
                (self.local[&u], self.local[&v])
            })
            .collect();
        Graph::from_checked(self.vertices.len(), edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_basic() {
        let g = parse_edge_list("0 1\n1 2").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn edge_list_errors() {
        assert_eq!(
            parse_edge_list("0 0").unwrap_err(),
            ParseError::SelfLoop { line: 1 }
        );
        assert_eq!(
            parse_edge_list("0 1\n0 1").unwrap_err(),
            ParseError::DuplicateEdge { line: 2 }
        );
        assert_eq!(
            parse_edge_list("0 1\n1 0").unwrap_err(),
            ParseError::DuplicateEdge { line: 2 }
        );
        assert!(matches!(
            parse_edge_list("0 x").unwrap_err(),
            ParseError::MalformedToken { line: 1, .. }
        ));
        assert_eq!(
            parse_edge_list("0 1 2").unwrap_err(),
            ParseError::MalformedLine { line: 1 }
        );
        assert_eq!(
            parse_edge_list("n 2\n0 1\n1 2").unwrap_err(),
            ParseError::VertexOutOfRange { line: 3, id: 2 }
        );
    }

    #[test]
    fn edge_list_comments_and_header() {
        let g = parse_edge_list("# a comment\n\nn 5\n0 1\n  \n# x\n3 2\n").unwrap();
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.degree(4), 0);
    }

    #[test]
    fn dimacs_basic() {
        let g = parse_dimacs("c hello\np edge 3 2\ne 1 2\ne 2 3").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn dimacs_errors() {
        assert_eq!(
            parse_dimacs("p edge 2 1\ne 1 3").unwrap_err(),
            ParseError::VertexOutOfRange { line: 2, id: 3 }
        );
        assert_eq!(
            parse_dimacs("p edge 3 3\ne 1 2\ne 2 3").unwrap_err(),
            ParseError::EdgeCountMismatch {
                expected: 3,
                found: 2
            }
        );
        assert_eq!(
            parse_dimacs("e 1 2").unwrap_err(),
            ParseError::MissingProblemLine
        );
        assert_eq!(
            parse_dimacs("").unwrap_err(),
            ParseError::MissingProblemLine
        );
        assert_eq!(
            parse_dimacs("p edge 3 1\np edge 3 1\ne 1 2").unwrap_err(),
            ParseError::DuplicateProblemLine { line: 2 }
        );
        assert_eq!(
            parse_dimacs("p edge 3 1\ne 0 2").unwrap_err(),
            ParseError::VertexOutOfRange { line: 2, id: 0 }
        );
    }

    #[test]
    fn components_examples() {
        let path = Graph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        assert_eq!(connected_components(&path), vec![vec![0, 1, 2]]);
        let two = Graph::new(4, vec![(0, 1), (2, 3)]).unwrap();
        assert_eq!(connected_components(&two), vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(
            connected_components(&Graph::edgeless(2)),
            vec![vec![0], vec![1]]
        );
    }

    #[test]
    fn niceness() {
        assert!(!is_nice(&Graph::complete(2)));
        assert!(is_nice(&Graph::path(3)));
        let k2_k3 = Graph::new(5, vec![(0, 1), (2, 3), (3, 4), (2, 4)]).unwrap();
        assert!(!is_nice(&k2_k3));
        assert!(is_nice(&Graph::edgeless(2)));
        assert!(is_nice(&Graph::edgeless(0)));
    }

    #[test]
    fn graph_new_rejects_bad_input() {
        assert_eq!(Graph::new(2, vec![(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert_eq!(
            Graph::new(2, vec![(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge(1, 0))
        );
        assert_eq!(
            Graph::new(2, vec![(0, 2)]),
            Err(GraphError::VertexOutOfRange { id: 2, n: 2 })
        );
    }

    #[test]
    fn induced_view() {
        // 0-1-2-3 path plus chord 0-2
        let g = Graph::new(4, vec![(0, 1), (1, 2), (2, 3), (0, 2)]).unwrap();
        let view = ComponentView::induced(&g, &[2, 0, 3]);
        assert_eq!(view.vertices(), &[0, 2, 3]);
        assert_eq!(view.edges(), &[2, 3]);
        assert_eq!(view.components(), vec![vec![0, 2, 3]]);
        let sub = view.to_graph();
        assert_eq!(sub.vertex_count(), 3);
        assert_eq!(sub.edges(), &[(1, 2), (0, 1)]);
        for (i, &v) in view.vertices().iter().enumerate() {
            assert_eq!(view.local_index(v), Some(i));
            assert_eq!(view.global_index(i), v);
        }
        let split = ComponentView::induced(&g, &[0, 3]);
        assert_eq!(split.components(), vec![vec![0], vec![3]]);
        assert!(!split.is_connected());
    }
}
