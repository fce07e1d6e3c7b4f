//! Components with a 1-monochromatic `V2` vertex `u` of component degree at
//! least 2. The branches of `H - u` are treated one by one, then the
//! conflicts left around `u` are settled by one of six cases.

use std::collections::{HashMap, VecDeque};

use crate::graph::ComponentView;
use crate::labelling::{Label, LabelState, VertexClass};

use super::nullstellensatz::{nullstellensatz_assign, NullstellensatzInstance};
use super::parity::{apply, parity_relabel_global, ParityMode};
use super::{
    check_entry, noblue, unreachable, Claim, ConflictComponent, FixOutcome, Recorder, Step3Error,
    TwoNeighboursCase,
};

const NAME: &str = "2neigh";

/// Smallest 1-monochromatic `V2` vertex with two or more component
/// neighbours.
pub(super) fn trigger(c: &ConflictComponent<'_>, state: &LabelState<'_>) -> Option<usize> {
    c.vertices()
        .iter()
        .copied()
        .find(|&u| c.in_v2(u) && c.degree(u) >= 2 && state.profile(u).class() == VertexClass::Mono1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Nice,
    Bad { w: usize },
    Tricky { w: usize, y: usize },
}

#[derive(Debug)]
struct Branch<'g> {
    view: ComponentView<'g>,
    /// Smallest neighbour of `u` in the branch.
    v: usize,
    kind: Kind,
}

fn edge(c: &ConflictComponent<'_>, a: usize, b: usize) -> usize {
    c.graph()
        .edge_between(a, b)
        .expect("fixer only relabels component edges")
}

fn set(state: &mut LabelState<'_>, c: &ConflictComponent<'_>, a: usize, b: usize, l: Label) {
    state.set(edge(c, a, b), l);
}

/// Parity pass on every piece of the branch minus its root, then the nice
/// repair if it applies.
fn prepare_branch<'g>(
    c: &ConflictComponent<'g>,
    state: &mut LabelState<'_>,
    rec: &mut Recorder,
    u: usize,
    vertices: Vec<usize>,
) -> Result<Branch<'g>, Step3Error> {
    let view = c.sub_view(&vertices);
    let v = c
        .neighbours(u)
        .iter()
        .map(|&(v, _)| v)
        .find(|&v| view.contains(v))
        .ok_or_else(|| unreachable(NAME, "branch without a neighbour of u"))?;
    let without_root: Vec<usize> = vertices.iter().copied().filter(|&z| z != v).collect();
    let mut roots = Vec::new();
    for piece in c.sub_view(&without_root).components() {
        let j = c.sub_view(&piece);
        let x = view
            .neighbours(v)
            .iter()
            .map(|&(x, _)| x)
            .find(|&x| j.contains(x))
            .ok_or_else(|| unreachable(NAME, "piece not attached to the branch root"))?;
        let delta = parity_relabel_global(&j, state, Label::Two, x, ParityMode::OddOnExemptSide)?;
        apply(state, &delta);
        rec.note(format!("parity s=2 exempt={x} mode=odd-on-exempt-side"));
        roots.push(x);
    }
    let even: Vec<usize> = roots
        .into_iter()
        .filter(|&x| state.profile(x).d2.is_multiple_of(2))
        .collect();
    let kind = match even.as_slice() {
        [] => Kind::Nice,
        [w] if state.profile(*w).d2 >= 1 => {
            set(state, c, v, *w, Label::Three);
            Kind::Nice
        }
        [w] => {
            let y = view
                .neighbours(*w)
                .iter()
                .map(|&(y, _)| y)
                .find(|&y| y != v && state.profile(y).class() == VertexClass::Mono1);
            match y {
                Some(y) => Kind::Tricky { w: *w, y },
                None => Kind::Bad { w: *w },
            }
        }
        many => {
            for &z in many {
                set(state, c, v, z, Label::Three);
            }
            Kind::Nice
        }
    };
    Ok(Branch { view, v, kind })
}

/// Edges of a shortest path from `from` to `to` inside `view`.
fn shortest_path(view: &ComponentView<'_>, from: usize, to: usize) -> Option<Vec<usize>> {
    let mut prev: HashMap<usize, (usize, usize)> = HashMap::new();
    let mut queue = VecDeque::from([from]);
    prev.insert(from, (from, usize::MAX));
    while let Some(a) = queue.pop_front() {
        if a == to {
            let mut path = Vec::new();
            let mut cur = to;
            while cur != from {
                let (p, e) = prev[&cur];
                path.push(e);
                cur = p;
            }
            path.reverse();
            return Some(path);
        }
        for &(b, e) in view.neighbours(a) {
            if let std::collections::hash_map::Entry::Vacant(slot) = prev.entry(b) {
                slot.insert((a, e));
                queue.push_back(b);
            }
        }
    }
    None
}

pub fn fix_two_neighbours(
    c: &ConflictComponent<'_>,
    state: &mut LabelState<'_>,
) -> Result<FixOutcome, Step3Error> {
    check_entry(c, state)?;
    let u = trigger(c, state).ok_or(Step3Error::TriggerAbsent(NAME))?;
    if noblue::trigger(c, state) {
        return Err(unreachable(NAME, "the noblue trigger also holds"));
    }
    if let Some(&v) = c.vertices().iter().find(|&&v| state.profile(v).d3 > 0) {
        return Err(unreachable(
            NAME,
            format!("vertex {v} has non-zero 3-degree"),
        ));
    }
    let mut rec = Recorder::start(c, state);
    rec.note(format!("u={u}"));

    let rest: Vec<usize> = c.vertices().iter().copied().filter(|&z| z != u).collect();
    let mut branches = Vec::new();
    for comp in c.sub_view(&rest).components() {
        branches.push(prepare_branch(c, state, &mut rec, u, comp)?);
    }

    let case = settle(c, state, &mut rec, u, &branches)?;
    Ok(rec.finish(Claim::TwoNeighbours(case), state))
}

fn settle(
    c: &ConflictComponent<'_>,
    state: &mut LabelState<'_>,
    rec: &mut Recorder,
    u: usize,
    branches: &[Branch<'_>],
) -> Result<TwoNeighboursCase, Step3Error> {
    let nice: Vec<&Branch<'_>> = branches.iter().filter(|b| b.kind == Kind::Nice).collect();
    let bad: Vec<&Branch<'_>> = branches
        .iter()
        .filter(|b| matches!(b.kind, Kind::Bad { .. }))
        .collect();

    if let Some(ti) = branches
        .iter()
        .position(|b| matches!(b.kind, Kind::Tricky { .. }))
    {
        for (j, b) in branches.iter().enumerate() {
            match b.kind {
                Kind::Bad { w } | Kind::Tricky { w, .. } if j != ti => {
                    set(state, c, b.v, w, Label::Two);
                    set(state, c, u, b.v, Label::Two);
                }
                _ => {}
            }
        }
        let b = &branches[ti];
        let Kind::Tricky { w, y } = b.kind else {
            unreachable!("position matched a tricky branch")
        };
        if state.profile(u).d2.is_multiple_of(2) {
            set(state, c, b.v, w, Label::Two);
            set(state, c, u, b.v, Label::Two);
        } else {
            set(state, c, b.v, w, Label::Three);
            set(state, c, w, y, Label::Three);
        }
        rec.note(format!("tricky branch root={} w={w} y={y}", b.v));
        return Ok(TwoNeighboursCase::Tricky);
    }

    if nice.is_empty() {
        if let [only] = bad.as_slice() {
            let Kind::Bad { w } = only.kind else {
                unreachable!()
            };
            set(state, c, only.v, w, Label::Two);
            set(state, c, u, only.v, Label::Two);
        } else {
            for b in &bad {
                set(state, c, u, b.v, Label::Three);
            }
        }
        return Ok(TwoNeighboursCase::AllBad);
    }

    if !bad.is_empty() {
        for b in &bad {
            let Kind::Bad { w } = b.kind else {
                unreachable!()
            };
            set(state, c, b.v, w, Label::Two);
            set(state, c, u, b.v, Label::Two);
        }
        if state.profile(u).d2.is_multiple_of(2) {
            set(state, c, u, nice[0].v, Label::Three);
        }
        return Ok(TwoNeighboursCase::MixedBad);
    }

    if let [only] = nice.as_slice() {
        let v2 = c
            .neighbours(u)
            .iter()
            .map(|&(v, _)| v)
            .find(|&v| v != only.v)
            .ok_or_else(|| unreachable(NAME, "u has a single neighbour"))?;
        match state.profile(only.v).class() {
            VertexClass::Mono1 => {
                set(state, c, u, only.v, Label::Three);
                set(state, c, u, v2, Label::Three);
            }
            VertexClass::Mono3 => set(state, c, u, only.v, Label::Three),
            other => {
                return Err(unreachable(
                    NAME,
                    format!("root {} of the single branch is {other:?}", only.v),
                ))
            }
        }
        return Ok(TwoNeighboursCase::SingleNice);
    }

    let cycle_branch = nice.iter().position(|b| {
        state.profile(b.v).d3 >= 2
            && c.neighbours(u)
                .iter()
                .any(|&(x, _)| x != b.v && b.view.contains(x))
    });
    if let Some(i) = cycle_branch {
        let b = nice[i];
        let x = c
            .neighbours(u)
            .iter()
            .map(|&(x, _)| x)
            .find(|&x| x != b.v && b.view.contains(x))
            .expect("checked above");
        let threes: Vec<usize> = c
            .neighbours(b.v)
            .iter()
            .map(|&(_, e)| e)
            .filter(|&e| state.label(e) == Label::Three)
            .collect();
        for e in threes {
            state.set(e, Label::Two);
        }
        if state.profile(b.v).d2 % 2 == 1 {
            set(state, c, u, b.v, Label::Two);
        } else {
            let path = shortest_path(&b.view, b.v, x)
                .ok_or_else(|| unreachable(NAME, "branch is not connected"))?;
            let mut cycle = vec![edge(c, u, b.v), edge(c, x, u)];
            cycle.extend(path);
            for e in cycle {
                let flipped = match state.label(e) {
                    Label::One => Label::Two,
                    Label::Two => Label::One,
                    Label::Three => {
                        return Err(unreachable(NAME, format!("cycle edge {e} is labelled 3")))
                    }
                };
                state.set(e, flipped);
            }
            if !c.conflicts(state).is_empty() {
                let other = nice
                    .iter()
                    .enumerate()
                    .find(|&(j, _)| j != i)
                    .map(|(_, b)| b.v)
                    .expect("at least two nice branches");
                set(state, c, u, other, Label::Three);
                rec.note(format!("u made special via {other}"));
            }
        }
        rec.note(format!("cycle through root={} x={x}", b.v));
        return Ok(TwoNeighboursCase::NiceCycle);
    }

    let a: Vec<usize> = c
        .neighbours(u)
        .iter()
        .map(|&(a, _)| a)
        .filter(|&a| state.profile(a).d2 == 0)
        .collect();
    let n: Vec<u32> = a.iter().map(|&v| state.profile(v).d3).collect();
    let inst = NullstellensatzInstance::new(n.clone())?;
    let z = nullstellensatz_assign(&inst)?;
    for (&ai, &zi) in a.iter().zip(&z) {
        if zi {
            set(state, c, u, ai, Label::Three);
        }
    }
    rec.note(format!(
        "nullstellensatz A={a:?} n={n:?} z={:?}",
        z.iter().map(|&b| b as u8).collect::<Vec<_>>()
    ));
    Ok(TwoNeighboursCase::Nullstellensatz)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::labelling::Labelling;
    use crate::partition::Partition;
    use crate::step3::check_p3;

    fn run(g: &Graph, parts: Vec<usize>, l: Labelling) -> (FixOutcome, Vec<(u32, u32)>) {
        let p = Partition::from_assignment(parts).unwrap();
        let inside: Vec<usize> = (0..g.vertex_count())
            .filter(|&v| p.part_of(v) <= 2)
            .collect();
        let c = ConflictComponent::new(g, &p, &inside);
        let mut st = LabelState::new(g, l);
        let out = fix_two_neighbours(&c, &mut st).unwrap();
        assert!(check_p3(&c, &st).is_ok(), "{out:?}");
        let keys = (0..g.vertex_count()).map(|v| st.key(v)).collect();
        (out, keys)
    }

    #[test]
    fn star_uses_the_assignment() {
        let g = Graph::star(3);
        let (out, keys) = run(&g, vec![2, 1, 1, 1], Labelling::all_ones(&g));
        assert_eq!(
            out.claim,
            Claim::TwoNeighbours(TwoNeighboursCase::Nullstellensatz)
        );
        assert_eq!(keys, vec![(0, 2), (0, 1), (0, 1), (0, 0)]);
    }

    #[test]
    fn single_bad_branch() {
        // u=0 (V2) with neighbours 1 and 3 (V1); w=2 hangs off 1; 4 (V2)
        // joins 1 and 3 and has a downward 2-edge to 5 (V3)
        let g = Graph::new(6, vec![(0, 1), (1, 2), (0, 3), (1, 4), (3, 4), (4, 5)]).unwrap();
        let p = Partition::from_assignment(vec![2, 1, 2, 1, 2, 3]).unwrap();
        let c = ConflictComponent::new(&g, &p, &[0, 1, 2, 3, 4]);
        let mut l = Labelling::all_ones(&g);
        l.set(5, Label::Two);
        let mut st = LabelState::new(&g, l);
        let out = fix_two_neighbours(&c, &mut st).unwrap();
        assert!(check_p3(&c, &st).is_ok());
        assert_eq!(out.claim, Claim::TwoNeighbours(TwoNeighboursCase::AllBad));
        assert_eq!(st.profile(2).d2, 1);
        assert_eq!(st.profile(1).d2, 2);
        assert_eq!(st.profile(0).d2, 1);
    }

    #[test]
    fn tricky_branch() {
        let g = Graph::new(4, vec![(0, 1), (1, 2), (0, 3), (3, 2)]).unwrap();
        let p = Partition::from_assignment(vec![2, 1, 2, 1]).unwrap();
        let c = ConflictComponent::new(&g, &p, &[0, 1, 2, 3]);
        let mut st = LabelState::all_ones(&g);
        let out = fix_two_neighbours(&c, &mut st).unwrap();
        assert!(check_p3(&c, &st).is_ok());
        assert_eq!(out.claim, Claim::TwoNeighbours(TwoNeighboursCase::Tricky));
    }

    #[test]
    fn path_of_five() {
        // l1=0 - u=1 - v=2 - x=3 - y=4
        let g = Graph::path(5);
        let (out, _) = run(&g, vec![1, 2, 1, 2, 1], Labelling::all_ones(&g));
        assert!(matches!(out.claim, Claim::TwoNeighbours(_)));
    }

    #[test]
    fn shortest_path_in_a_cycle() {
        let g = Graph::new(5, (0..5).map(|i| (i, (i + 1) % 5)).collect()).unwrap();
        let view = ComponentView::induced(&g, &[0, 1, 2, 3, 4]);
        assert_eq!(shortest_path(&view, 0, 3), Some(vec![4, 3]));
        assert_eq!(shortest_path(&view, 2, 2), Some(vec![]));
    }
}
