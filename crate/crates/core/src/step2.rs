//! Labelling the upward edges of `V3, …, Vt`.
//!
//! Starting from the all-1 labelling, vertices are processed from the
//! deepest part up. A vertex `u ∈ V_i` only relabels its upward edges, and
//! uses label 3 towards odd parts and label 2 towards even parts, so every
//! vertex in an odd (even) part only ever receives 3s (2s) on its downward
//! edges. Once processed, `u` carries the product type of its part:
//!
//! | part            | type                                      |
//! |-----------------|-------------------------------------------|
//! | `V1`            | 1- or 3-monochromatic                     |
//! | `V2`            | 1- or 2-monochromatic                     |
//! | `V_{2n+1}`, n≥1 | `d2 = n`, even {2,3}-degree, bichromatic  |
//! | `V_{2n}`, n≥2   | `d3 = n`, odd {2,3}-degree, bichromatic   |
//!
//! Isolated edges of `G[V1 ∪ V2]` whose ends are both still 1-monochromatic
//! are tracked in `M`; each processed vertex makes sure every such edge it
//! sees loses that status, swapping edges between `V1` and `V2` when needed.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::graph::Graph;
use crate::labelling::{Label, LabelState, Labelling, VertexClass, VertexProfile};
use crate::partition::{self, Partition};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Step2Error {
    #[error("part index {i} out of range 1..={t}")]
    PartOutOfRange { i: usize, t: usize },
    #[error("partition is not valid: {0}")]
    InvalidPartition(String),
    #[error("vertex {vertex} in V{part} has no neighbour in V{missing}")]
    MissingUpwardNeighbour {
        vertex: usize,
        part: usize,
        missing: usize,
    },
    #[error("unreachable branch at vertex {vertex} in V{part}: {reason}")]
    Unreachable {
        vertex: usize,
        part: usize,
        reason: &'static str,
    },
    #[error("vertex {vertex} in V{part} ended with profile {profile:?}, expected {target}")]
    TargetMissed {
        vertex: usize,
        part: usize,
        profile: VertexProfile,
        target: TargetProfile,
    },
}

/// The product type required of a vertex in a given part.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetProfile {
    /// `V1`: 1- or 3-monochromatic.
    MonoOneOrThree,
    /// `V2`: 1- or 2-monochromatic.
    MonoOneOrTwo,
    /// Odd part `2n+1`: bichromatic, `d2 = n`, even {2,3}-degree.
    TwoDegree(u32),
    /// Even part `2n`: bichromatic, `d3 = n`, odd {2,3}-degree.
    ThreeDegree(u32),
}

impl TargetProfile {
    pub fn matches(&self, p: &VertexProfile) -> bool {
        match *self {
            TargetProfile::MonoOneOrThree => {
                matches!(p.class(), VertexClass::Mono1 | VertexClass::Mono3)
            }
            TargetProfile::MonoOneOrTwo => {
                matches!(p.class(), VertexClass::Mono1 | VertexClass::Mono2)
            }
            TargetProfile::TwoDegree(n) => {
                p.class() == VertexClass::Bichromatic
                    && p.d2 == n
                    && p.heavy_degree().is_multiple_of(2)
            }
            TargetProfile::ThreeDegree(n) => {
                p.class() == VertexClass::Bichromatic && p.d3 == n && p.heavy_degree() % 2 == 1
            }
        }
    }
}

impl fmt::Display for TargetProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetProfile::MonoOneOrThree => write!(f, "1- or 3-monochromatic"),
            TargetProfile::MonoOneOrTwo => write!(f, "1- or 2-monochromatic"),
            TargetProfile::TwoDegree(n) => write!(f, "bichromatic, d2={n}, even total"),
            TargetProfile::ThreeDegree(n) => write!(f, "bichromatic, d3={n}, odd total"),
        }
    }
}

pub fn target_profile(i: usize, t: usize) -> Result<TargetProfile, Step2Error> {
    if i == 0 || i > t {
        return Err(Step2Error::PartOutOfRange { i, t });
    }
    Ok(match i {
        1 => TargetProfile::MonoOneOrThree,
        2 => TargetProfile::MonoOneOrTwo,
        _ if i % 2 == 1 => TargetProfile::TwoDegree((i as u32 - 1) / 2),
        _ => TargetProfile::ThreeDegree(i as u32 / 2),
    })
}

/// The label an upward edge into part `j` may carry besides 1.
fn label_towards(j: usize) -> Label {
    if j % 2 == 1 {
        Label::Three
    } else {
        Label::Two
    }
}

/// How a vertex was finished.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Step2Branch {
    /// No pending isolated edge next to the vertex.
    Unmatched,
    /// Pending edges, parity already right: `z` labelled towards its side.
    MatchedDirect,
    /// Pending edges, parity off: the edge of `z` swapped and `uz` labelled
    /// with the target label.
    MatchedSwap,
    /// Pending edges, parity off and no secondary label yet: `u x_{i-2}`
    /// labelled first, then as [`Step2Branch::MatchedDirect`].
    MatchedFallback,
}

impl fmt::Display for Step2Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Step2Branch::Unmatched => "unmatched",
            Step2Branch::MatchedDirect => "matched-direct",
            Step2Branch::MatchedSwap => "matched-swap",
            Step2Branch::MatchedFallback => "matched-fallback",
        };
        f.write_str(s)
    }
}

/// One processed vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step2Event {
    pub vertex: usize,
    pub part: usize,
    pub branch: Step2Branch,
    pub relabelled: Vec<(usize, Label)>,
    pub swaps: Vec<usize>,
}

impl fmt::Display for Step2Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "step2 v={} part={} branch={}",
            self.vertex, self.part, self.branch
        )?;
        write!(f, " relabel=[")?;
        for (k, (e, l)) in self.relabelled.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}:{l}")?;
        }
        write!(f, "] swaps={:?}", self.swaps)
    }
}

#[derive(Debug, Clone)]
pub struct Step2Outcome {
    pub labelling: Labelling,
    pub partition: Partition,
    pub events: Vec<Step2Event>,
}

impl Step2Outcome {
    pub fn swap_count(&self) -> usize {
        self.events.iter().map(|ev| ev.swaps.len()).sum()
    }
}

struct Step2Run<'g> {
    g: &'g Graph,
    state: LabelState<'g>,
    partition: Partition,
    /// M0 edges whose ends are both still 1-monochromatic.
    pending: BTreeSet<usize>,
    m0_of: Vec<Option<usize>>,
    m0: partition::M0Set,
}

/// Runs step 2 on a valid partition of a connected nice graph.
pub fn run_step2(g: &Graph, p: &Partition) -> Result<Step2Outcome, Step2Error> {
    if p.vertex_count() != g.vertex_count() {
        return Err(Step2Error::InvalidPartition("size mismatch".into()));
    }
    match partition::check_s(g, p) {
        Ok(None) => {}
        Ok(Some(w)) => {
            return Err(Step2Error::InvalidPartition(format!(
                "swap-robustness fails at vertex {} for V{}",
                w.vertex, w.part
            )))
        }
        Err(e) => return Err(Step2Error::InvalidPartition(e.to_string())),
    }

    let m0 = partition::compute_m0(g, p);
    let mut run = Step2Run {
        g,
        state: LabelState::all_ones(g),
        partition: p.clone(),
        pending: m0.0.clone(),
        m0_of: m0.endpoint_map(g),
        m0,
    };
    let mut events = Vec::new();
    let t = p.part_count();
    for i in (3..=t).rev() {
        let members: Vec<usize> = run.partition.part(i).iter().copied().collect();
        for u in members {
            events.push(run.process(u, i)?);
        }
    }
    Ok(Step2Outcome {
        labelling: run.state.into_labelling(),
        partition: run.partition,
        events,
    })
}

impl<'g> Step2Run<'g> {
    fn relabel(&mut self, relabelled: &mut Vec<(usize, Label)>, e: usize, label: Label) {
        self.state.set(e, label);
        relabelled.push((e, label));
    }

    fn swap(&mut self, swaps: &mut Vec<usize>, e: usize) {
        debug_assert!(self.m0.contains(e));
        self.partition.swap_unchecked(self.g, e);
        swaps.push(e);
    }

    /// Smallest-id neighbour of `u` in `V_j` outside `exclude`, with its edge.
    fn upward_neighbour(
        &self,
        u: usize,
        i: usize,
        j: usize,
        exclude: &BTreeSet<usize>,
    ) -> Result<(usize, usize), Step2Error> {
        self.g
            .neighbours(u)
            .iter()
            .copied()
            .find(|&(w, _)| self.partition.part_of(w) == j && !exclude.contains(&w))
            .ok_or(Step2Error::MissingUpwardNeighbour {
                vertex: u,
                part: i,
                missing: j,
            })
    }

    fn process(&mut self, u: usize, i: usize) -> Result<Step2Event, Step2Error> {
        let g = self.g;
        let even = i.is_multiple_of(2);
        // `main` reaches the target count; `other` makes u bichromatic.
        let (main, other) = if even {
            (Label::Three, Label::Two)
        } else {
            (Label::Two, Label::Three)
        };
        // S_u is gathered on this side; the main-label bottom neighbour sits
        // on the opposite one.
        let (s_side, main_side) = if even { (2, 1) } else { (1, 2) };

        let mut relabelled = Vec::new();
        let mut swaps = Vec::new();

        // M_u and the chosen S_u ends, keyed by edge.
        let mut chosen: Vec<(usize, usize)> = Vec::new();
        let mut seen_edges = BTreeSet::new();
        for &(w, _) in g.neighbours(u) {
            let Some(e) = self.m0_of[w] else { continue };
            if !self.pending.contains(&e) || !seen_edges.insert(e) {
                continue;
            }
            let other_end = g.other_end(e, w);
            let end = if g.adjacent(u, other_end) {
                if self.partition.part_of(w) == s_side {
                    w
                } else {
                    other_end
                }
            } else {
                w
            };
            chosen.push((e, end));
        }
        for &(e, end) in &chosen {
            if self.partition.part_of(end) != s_side {
                self.swap(&mut swaps, e);
            }
        }
        let s_u: BTreeSet<usize> = chosen.iter().map(|&(_, end)| end).collect();

        // x_j for every shallower part; only the bottom pair needs the
        // exclusion, which the swaps above already guarantee.
        let mut x = vec![(usize::MAX, usize::MAX); i];
        let none = BTreeSet::new();
        for (j, slot) in x.iter_mut().enumerate().skip(1) {
            let exclude = if j == main_side { &s_u } else { &none };
            *slot = self.upward_neighbour(u, i, j, exclude)?;
        }
        let edge_to = |j: usize| x[j].1;

        // ux_3, ux_5, … (even i) or ux_4, ux_6, … (odd i) get the main label.
        let first = if even { 3 } else { 4 };
        for j in (first..i).step_by(2) {
            debug_assert_eq!(label_towards(j), main);
            self.relabel(&mut relabelled, edge_to(j), main);
        }

        let total_ok = |p: VertexProfile| (p.heavy_degree() % 2 == 1) == even;
        let other_count = |p: VertexProfile| p.count(other);

        let branch;
        if chosen.is_empty() {
            branch = Step2Branch::Unmatched;
            self.relabel(&mut relabelled, edge_to(main_side), main);
            if i > 3 {
                self.relabel(&mut relabelled, edge_to(i - 2), other);
                if !total_ok(self.state.profile(u)) {
                    // For i = 4, x_{i-2} = x_2 already carries the secondary
                    // label; dropping it back to 1 fixes the parity, and u
                    // stays bichromatic because its downward 2-degree is odd.
                    let fix = if even { 2 } else { 1 };
                    let e = edge_to(fix);
                    let flipped = if self.state.label(e) == label_towards(fix) {
                        Label::One
                    } else {
                        label_towards(fix)
                    };
                    self.relabel(&mut relabelled, e, flipped);
                }
            } else if !total_ok(self.state.profile(u)) {
                self.relabel(&mut relabelled, edge_to(1), Label::Three);
            }
        } else {
            let z = *s_u.iter().next().unwrap();
            let (e_z, _) = *chosen.iter().find(|&&(_, end)| end == z).unwrap();
            for &w in s_u.iter().skip(1) {
                let e = g.edge_between(u, w).unwrap();
                self.relabel(&mut relabelled, e, other);
            }
            let uz = g.edge_between(u, z).unwrap();

            let mut fallback = false;
            loop {
                let p = self.state.profile(u);
                // uz and the bottom edge both add to the total, so the
                // current parity must already be the target one
                let direct = (p.heavy_degree() % 2 == 1) == even;
                if direct {
                    self.relabel(&mut relabelled, uz, other);
                    self.relabel(&mut relabelled, edge_to(main_side), main);
                    branch = if fallback {
                        Step2Branch::MatchedFallback
                    } else {
                        Step2Branch::MatchedDirect
                    };
                    break;
                }
                if other_count(p) > 0 {
                    self.swap(&mut swaps, e_z);
                    self.relabel(&mut relabelled, uz, main);
                    branch = Step2Branch::MatchedSwap;
                    break;
                }
                if fallback {
                    return Err(Step2Error::Unreachable {
                        vertex: u,
                        part: i,
                        reason: "fallback did not restore the direct case",
                    });
                }
                if i > 4 {
                    self.relabel(&mut relabelled, edge_to(i - 2), other);
                    fallback = true;
                    continue;
                }
                return Err(Step2Error::Unreachable {
                    vertex: u,
                    part: i,
                    reason: if i == 4 {
                        "V4 vertex with no 2 and even total"
                    } else {
                        "V3 vertex with no 3 and odd total"
                    },
                });
            }

            for &(e, _) in &chosen {
                self.pending.remove(&e);
            }
        }

        let target = target_profile(i, self.partition.part_count()).expect("i in range");
        let profile = self.state.profile(u);
        if !target.matches(&profile) {
            return Err(Step2Error::TargetMissed {
                vertex: u,
                part: i,
                profile,
                target,
            });
        }
        Ok(Step2Event {
            vertex: u,
            part: i,
            branch,
            relabelled,
            swaps,
        })
    }
}

/// Violations of the step-2 postconditions, one message each. Empty means
/// every item holds.
pub fn step2_violations(g: &Graph, p: &Partition, l: &Labelling) -> Vec<String> {
    let state = LabelState::new(g, l.clone());
    let t = p.part_count();
    let mut out = Vec::new();
    for v in 0..g.vertex_count() {
        let prof = state.profile(v);
        let i = p.part_of(v);
        let target = target_profile(i, t).expect("part in range");
        if !target.matches(&prof) {
            out.push(format!("vertex {v} in V{i}: {prof:?} is not {target}"));
        }
        if prof.is_special() {
            out.push(format!("vertex {v} is special"));
        }
        for &(w, e) in g.neighbours(v) {
            let j = p.part_of(w);
            if j > i && l.get(e) != Label::One && l.get(e) != label_towards(i) {
                out.push(format!("downward edge {e} of {v} carries {}", l.get(e)));
            }
        }
    }
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        let (pa, pb) = (p.part_of(a), p.part_of(b));
        if pa <= 2 && pb <= 2 && l.get(e) != Label::One {
            out.push(format!("edge {e} inside V1 ∪ V2 carries {}", l.get(e)));
        }
        if state.in_conflict(a, b) {
            let across = (pa, pb) == (1, 2) || (pa, pb) == (2, 1);
            let extra = |x: usize, y: usize| {
                g.neighbours(x)
                    .iter()
                    .any(|&(w, _)| w != y && p.part_of(w) <= 2)
            };
            if !across || !(extra(a, b) || extra(b, a)) {
                out.push(format!("conflict on edge {e} not covered by item 6"));
            }
        }
    }
    out
}
