//! Edge labellings with labels 1, 2, 3 and the per-vertex product keys they
//! induce.
//!
//! The product at a vertex is `2^d2 * 3^d3`, which is never materialised:
//! since 2 and 3 are coprime, the pair `(d2, d3)` identifies it exactly.

use std::fmt;

use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    One = 1,
    Two = 2,
    Three = 3,
}

impl Label {
    pub fn value(self) -> u8 {
        self as u8
    }

    pub fn from_value(value: u8) -> Option<Label> {
        match value {
            1 => Some(Label::One),
            2 => Some(Label::Two),
            3 => Some(Label::Three),
            _ => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// A total map from edge index to [`Label`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Labelling {
    labels: Vec<Label>,
}

impl Labelling {
    pub fn uniform(g: &Graph, label: Label) -> Self {
        Labelling {
            labels: vec![label; g.edge_count()],
        }
    }

    pub fn all_ones(g: &Graph) -> Self {
        Self::uniform(g, Label::One)
    }

    pub fn from_labels(labels: Vec<Label>) -> Self {
        Labelling { labels }
    }

    pub fn get(&self, e: usize) -> Label {
        self.labels[e]
    }

    pub fn set(&mut self, e: usize, label: Label) {
        self.labels[e] = label;
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    /// One `u v label` line per edge, in edge-index order.
    pub fn to_text(&self, g: &Graph) -> String {
        let mut out = String::new();
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            out.push_str(&format!("{u} {v} {}\n", self.labels[e]));
        }
        out
    }
}

/// Counts of incident edges carrying each label.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct VertexProfile {
    pub d1: u32,
    pub d2: u32,
    pub d3: u32,
}

/// Exponents of 2 and 3 in the product of incident labels.
pub type ProductKey = (u32, u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexClass {
    Mono1,
    Mono2,
    Mono3,
    Bichromatic,
}

impl VertexProfile {
    pub fn key(&self) -> ProductKey {
        (self.d2, self.d3)
    }

    /// The {2,3}-degree.
    pub fn heavy_degree(&self) -> u32 {
        self.d2 + self.d3
    }

    pub fn degree(&self) -> u32 {
        self.d1 + self.d2 + self.d3
    }

    pub fn count(&self, label: Label) -> u32 {
        match label {
            Label::One => self.d1,
            Label::Two => self.d2,
            Label::Three => self.d3,
        }
    }

    pub fn class(&self) -> VertexClass {
        match (self.d2 > 0, self.d3 > 0) {
            (false, false) => VertexClass::Mono1,
            (true, false) => VertexClass::Mono2,
            (false, true) => VertexClass::Mono3,
            (true, true) => VertexClass::Bichromatic,
        }
    }

    pub fn is_monochromatic(&self) -> bool {
        self.class() != VertexClass::Bichromatic
    }

    pub fn is_special(&self) -> bool {
        self.d3 == 1 && self.d2 >= 2 && self.heavy_degree() % 2 == 1
    }

    fn add(&mut self, label: Label) {
        match label {
            Label::One => self.d1 += 1,
            Label::Two => self.d2 += 1,
            Label::Three => self.d3 += 1,
        }
    }

    fn remove(&mut self, label: Label) {
        match label {
            Label::One => self.d1 -= 1,
            Label::Two => self.d2 -= 1,
            Label::Three => self.d3 -= 1,
        }
    }
}

/// Class and special flag of a profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub class: VertexClass,
    pub special: bool,
}

pub fn classify(p: &VertexProfile) -> Classification {
    Classification {
        class: p.class(),
        special: p.is_special(),
    }
}

pub fn profile(g: &Graph, l: &Labelling, v: usize) -> VertexProfile {
    let mut p = VertexProfile::default();
    for &(_, e) in g.neighbours(v) {
        p.add(l.get(e));
    }
    p
}

pub fn profiles(g: &Graph, l: &Labelling) -> Vec<VertexProfile> {
    (0..g.vertex_count()).map(|v| profile(g, l, v)).collect()
}

/// Edges whose endpoints have equal products, ascending. Profiles are
/// recomputed from scratch.
pub fn find_conflicts(g: &Graph, l: &Labelling) -> Vec<usize> {
    let keys: Vec<ProductKey> = profiles(g, l).iter().map(VertexProfile::key).collect();
    g.edges()
        .iter()
        .enumerate()
        .filter(|(_, &(u, v))| keys[u] == keys[v])
        .map(|(e, _)| e)
        .collect()
}

pub fn is_product_proper(g: &Graph, l: &Labelling) -> bool {
    l.len() == g.edge_count() && find_conflicts(g, l).is_empty()
}

/// `v d2 d3` per vertex.
pub fn product_report(g: &Graph, l: &Labelling) -> String {
    let mut out = String::new();
    for (v, p) in profiles(g, l).iter().enumerate() {
        out.push_str(&format!("{v} {} {}\n", p.d2, p.d3));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabellingParseError {
    #[error("line {line}: expected `u v label`")]
    MalformedLine { line: usize },
    #[error("line {line}: label must be 1, 2 or 3")]
    BadLabel { line: usize },
    #[error("line {line}: {u} {v} is not an edge of the graph")]
    UnknownEdge { line: usize, u: usize, v: usize },
    #[error("line {line}: edge {u} {v} labelled twice")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("no label for edge {u} {v}")]
    MissingEdge { u: usize, v: usize },
}

/// Reads `u v label` lines for the edges of `g`. `#` starts a comment and
/// the first blank line ends the labelling, so the output of
/// [`Labelling::to_text`] followed by a blank line and a product report
/// reads back as the labelling alone.
pub fn parse_labelling(g: &Graph, text: &str) -> Result<Labelling, LabellingParseError> {
    let mut labels: Vec<Option<Label>> = vec![None; g.edge_count()];
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        if raw.trim().is_empty() {
            break;
        }
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        let [u, v, l] = fields.as_slice() else {
            return Err(LabellingParseError::MalformedLine { line });
        };
        let (Ok(u), Ok(v)) = (u.parse::<usize>(), v.parse::<usize>()) else {
            return Err(LabellingParseError::MalformedLine { line });
        };
        let label = l
            .parse::<u8>()
            .ok()
            .and_then(Label::from_value)
            .ok_or(LabellingParseError::BadLabel { line })?;
        let e = (u < g.vertex_count() && v < g.vertex_count())
            .then(|| g.edge_between(u, v))
            .flatten()
            .ok_or(LabellingParseError::UnknownEdge { line, u, v })?;
        if labels[e].replace(label).is_some() {
            return Err(LabellingParseError::DuplicateEdge { line, u, v });
        }
    }
    labels
        .into_iter()
        .enumerate()
        .map(|(e, l)| {
            let (u, v) = g.edge(e);
            l.ok_or(LabellingParseError::MissingEdge { u, v })
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Labelling::from_labels)
}

/// A labelling together with incrementally maintained profiles.
#[derive(Debug, Clone)]
pub struct LabelState<'g> {
    graph: &'g Graph,
    labelling: Labelling,
    profiles: Vec<VertexProfile>,
}

impl<'g> LabelState<'g> {
    pub fn new(graph: &'g Graph, labelling: Labelling) -> Self {
        assert_eq!(labelling.len(), graph.edge_count());
        let profiles = profiles(graph, &labelling);
        LabelState {
            graph,
            labelling,
            profiles,
        }
    }

    pub fn all_ones(graph: &'g Graph) -> Self {
        Self::new(graph, Labelling::all_ones(graph))
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn label(&self, e: usize) -> Label {
        self.labelling.get(e)
    }

    /// Relabels `e`, updating both endpoint profiles. Returns the old label.
    pub fn set(&mut self, e: usize, label: Label) -> Label {
        let old = self.labelling.get(e);
        if old != label {
            let (u, v) = self.graph.edge(e);
            self.profiles[u].remove(old);
            self.profiles[v].remove(old);
            self.profiles[u].add(label);
            self.profiles[v].add(label);
            self.labelling.set(e, label);
        }
        old
    }

    pub fn profile(&self, v: usize) -> VertexProfile {
        self.profiles[v]
    }

    pub fn key(&self, v: usize) -> ProductKey {
        self.profiles[v].key()
    }

    pub fn in_conflict(&self, u: usize, v: usize) -> bool {
        self.key(u) == self.key(v)
    }

    pub fn labelling(&self) -> &Labelling {
        &self.labelling
    }

    pub fn into_labelling(self) -> Labelling {
        self.labelling
    }
}
