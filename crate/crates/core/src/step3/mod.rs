//! Removing the remaining conflicts inside `G[V1 ∪ V2]`.
//!
//! After step 2 the only conflicts are between adjacent 1-monochromatic
//! vertices of `V1` and `V2`. Each connected component of `G[V1 ∪ V2]` that
//! holds such a pair is fixed on its own, relabelling only its edges, until
//! it has no internal conflict and every vertex in it is monochromatic or
//! special. Vertices of `V3 ∪ … ∪ Vt` are bichromatic and never special, so
//! they cannot conflict with anything inside a fixed component.

mod last_case;
mod noblue;
pub mod nullstellensatz;
pub mod parity;
mod two_neighbours;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::graph::{ComponentView, Graph};
use crate::labelling::{Label, LabelState, Labelling};
use crate::partition::Partition;

pub use last_case::fix_last_case;
pub use noblue::fix_noblue;
pub use nullstellensatz::{nullstellensatz_assign, NullstellensatzInstance};
pub use parity::{parity_relabel, parity_relabel_global, ParityMode};
pub use two_neighbours::fix_two_neighbours;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Step3Error {
    #[error("conflict component around edge {0} has a single edge")]
    SingleEdgeComponent(usize),
    #[error("edge {0} of a conflict component is not labelled 1 on entry")]
    NotAllOnes(usize),
    #[error("edge {edge} carries a label other than 1 and {s}")]
    LabelOutsidePair { edge: usize, s: Label },
    #[error("subgraph is not connected")]
    Disconnected,
    #[error("exempt vertex {0} is not in the subgraph")]
    ExemptOutsideView(usize),
    #[error("Nullstellensatz instance needs r >= 2, got {0}")]
    InstanceTooSmall(usize),
    #[error("no 0/1 assignment avoids {0:?}")]
    NullstellensatzExhausted(Vec<u32>),
    #[error("trigger of {0} is absent")]
    TriggerAbsent(&'static str),
    #[error("unreachable configuration in {claim}: {reason}")]
    Unreachable { claim: &'static str, reason: String },
    #[error("component still violates the target property after {claim}: {violation}")]
    NotFixed {
        claim: Claim,
        violation: P3Violation,
    },
}

pub(crate) fn unreachable(claim: &'static str, reason: impl Into<String>) -> Step3Error {
    Step3Error::Unreachable {
        claim,
        reason: reason.into(),
    }
}

/// A connected component of `G[V1 ∪ V2]` holding a conflict.
#[derive(Debug, Clone)]
pub struct ConflictComponent<'g> {
    pub view: ComponentView<'g>,
    first_side: BTreeSet<usize>,
}

impl<'g> ConflictComponent<'g> {
    /// Wraps the component of `G[V1 ∪ V2]` spanned by `vertices`.
    pub fn new(g: &'g Graph, p: &Partition, vertices: &[usize]) -> Self {
        let view = ComponentView::induced(g, vertices);
        let first_side = view
            .vertices()
            .iter()
            .copied()
            .filter(|&v| p.part_of(v) == 1)
            .collect();
        ConflictComponent { view, first_side }
    }

    pub fn graph(&self) -> &'g Graph {
        self.view.parent()
    }

    pub fn vertices(&self) -> &[usize] {
        self.view.vertices()
    }

    pub fn edges(&self) -> &[usize] {
        self.view.edges()
    }

    pub fn in_v1(&self, v: usize) -> bool {
        self.first_side.contains(&v)
    }

    pub fn in_v2(&self, v: usize) -> bool {
        self.view.contains(v) && !self.in_v1(v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.view.degree(v)
    }

    pub fn neighbours(&self, v: usize) -> &[(usize, usize)] {
        self.view.neighbours(v)
    }

    /// Component edges whose endpoints currently share a product.
    pub fn conflicts(&self, state: &LabelState<'_>) -> Vec<usize> {
        let g = self.graph();
        self.edges()
            .iter()
            .copied()
            .filter(|&e| {
                let (a, b) = g.edge(e);
                state.in_conflict(a, b)
            })
            .collect()
    }

    /// Sub-view induced by a subset of this component's vertices.
    pub fn sub_view(&self, vertices: &[usize]) -> ComponentView<'g> {
        ComponentView::induced(self.graph(), vertices)
    }
}

/// Why a component fails the target property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum P3Violation {
    Conflict(usize),
    NotMonochromaticOrSpecial(usize),
}

impl fmt::Display for P3Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            P3Violation::Conflict(e) => write!(f, "conflict on edge {e}"),
            P3Violation::NotMonochromaticOrSpecial(v) => {
                write!(f, "vertex {v} is bichromatic and not special")
            }
        }
    }
}

/// No conflict between component vertices, and every component vertex is
/// monochromatic or special.
pub fn check_p3(c: &ConflictComponent<'_>, state: &LabelState<'_>) -> Result<(), P3Violation> {
    if let Some(&e) = c.conflicts(state).first() {
        return Err(P3Violation::Conflict(e));
    }
    for &v in c.vertices() {
        let p = state.profile(v);
        if !p.is_monochromatic() && !p.is_special() {
            return Err(P3Violation::NotMonochromaticOrSpecial(v));
        }
    }
    Ok(())
}

/// Components of `G[V1 ∪ V2]` containing an adjacent equal-product pair.
pub fn conflict_components<'g>(
    g: &'g Graph,
    p: &Partition,
    l: &Labelling,
) -> Result<Vec<ConflictComponent<'g>>, Step3Error> {
    let state = LabelState::new(g, l.clone());
    let bottom: Vec<usize> = (0..g.vertex_count())
        .filter(|&v| p.part_of(v) <= 2)
        .collect();
    let view = ComponentView::induced(g, &bottom);
    let mut out = Vec::new();
    for comp in view.components() {
        let c = ConflictComponent::new(g, p, &comp);
        let conflicts = c.conflicts(&state);
        if conflicts.is_empty() {
            continue;
        }
        if c.edges().len() < 2 {
            return Err(Step3Error::SingleEdgeComponent(conflicts[0]));
        }
        out.push(c);
    }
    Ok(out)
}

/// Cases of the fixer for a 1-monochromatic `V2` vertex with two or more
/// neighbours in the component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TwoNeighboursCase {
    /// Some branch around the vertex is tricky.
    Tricky,
    /// Every branch is bad.
    AllBad,
    /// Bad and nice branches mixed.
    MixedBad,
    /// A single, nice branch.
    SingleNice,
    /// A nice branch whose root has 3-degree at least 2 and a second
    /// neighbour of the vertex.
    NiceCycle,
    /// Several nice branches, settled by the 0/1 assignment.
    Nullstellensatz,
}

impl TwoNeighboursCase {
    pub fn number(self) -> u8 {
        self as u8 + 1
    }
}

/// Which fixer settled a component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Claim {
    NoBlue,
    TwoNeighbours(TwoNeighboursCase),
    LastCase,
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Claim::NoBlue => f.write_str("noblue"),
            Claim::TwoNeighbours(case) => write!(f, "2neigh/case{}", case.number()),
            Claim::LastCase => f.write_str("lastcase"),
        }
    }
}

/// Result of one fixer run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixOutcome {
    pub claim: Claim,
    /// Final labels of the edges that changed, ascending.
    pub relabelled: Vec<(usize, Label)>,
    /// Free-form audit notes (parity passes and their modes, choices made).
    pub notes: Vec<String>,
}

/// Snapshot helper turning before/after labels into a delta.
pub(crate) struct Recorder {
    before: Vec<(usize, Label)>,
    pub notes: Vec<String>,
}

impl Recorder {
    pub fn start(c: &ConflictComponent<'_>, state: &LabelState<'_>) -> Self {
        Recorder {
            before: c.edges().iter().map(|&e| (e, state.label(e))).collect(),
            notes: Vec::new(),
        }
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn finish(self, claim: Claim, state: &LabelState<'_>) -> FixOutcome {
        let relabelled = self
            .before
            .iter()
            .filter(|&&(e, l)| state.label(e) != l)
            .map(|&(e, _)| (e, state.label(e)))
            .collect();
        FixOutcome {
            claim,
            relabelled,
            notes: self.notes,
        }
    }
}

pub(crate) fn check_entry(
    c: &ConflictComponent<'_>,
    state: &LabelState<'_>,
) -> Result<(), Step3Error> {
    match c.edges().iter().find(|&&e| state.label(e) != Label::One) {
        Some(&e) => Err(Step3Error::NotAllOnes(e)),
        None => Ok(()),
    }
}

/// Picks and runs the fixer for `c`, then checks the result.
pub fn fix_component(
    c: &ConflictComponent<'_>,
    state: &mut LabelState<'_>,
) -> Result<FixOutcome, Step3Error> {
    check_entry(c, state)?;
    let outcome = if noblue::trigger(c, state) {
        fix_noblue(c, state)?
    } else if two_neighbours::trigger(c, state).is_some() {
        fix_two_neighbours(c, state)?
    } else {
        fix_last_case(c, state)?
    };
    check_p3(c, state).map_err(|violation| Step3Error::NotFixed {
        claim: outcome.claim,
        violation,
    })?;
    Ok(outcome)
}

/// One fixed component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixRecord {
    pub vertices: Vec<usize>,
    pub outcome: FixOutcome,
}

impl fmt::Display for FixRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "step3 component={:?} claim={} relabel=[",
            self.vertices, self.outcome.claim
        )?;
        for (k, (e, l)) in self.outcome.relabelled.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}:{l}")?;
        }
        write!(f, "]")?;
        for note in &self.outcome.notes {
            write!(f, " ; {note}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Step3Outcome {
    pub labelling: Labelling,
    pub fixes: Vec<FixRecord>,
}

/// Fixes every conflict component in turn.
pub fn run_step3(g: &Graph, p: &Partition, l: &Labelling) -> Result<Step3Outcome, Step3Error> {
    let components = conflict_components(g, p, l)?;
    let mut state = LabelState::new(g, l.clone());
    let mut fixes = Vec::with_capacity(components.len());
    for c in &components {
        let outcome = fix_component(c, &mut state)?;
        fixes.push(FixRecord {
            vertices: c.vertices().to_vec(),
            outcome,
        });
    }
    Ok(Step3Outcome {
        labelling: state.into_labelling(),
        fixes,
    })
}
