//! Parity relabelling of a connected bipartite subgraph with labels `1`/`s`.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};

use crate::graph::ComponentView;
use crate::labelling::{Label, LabelState, Labelling};

use super::Step3Error;

/// Which parity the exempt vertex's side receives; the other side gets the
/// opposite one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParityMode {
    OddOnExemptSide,
    EvenOnExemptSide,
}

impl ParityMode {
    fn wants_odd(self, on_exempt_side: bool) -> bool {
        match self {
            ParityMode::OddOnExemptSide => on_exempt_side,
            ParityMode::EvenOnExemptSide => !on_exempt_side,
        }
    }
}

struct SpanningTree {
    /// Vertices in BFS order, root first.
    order: Vec<usize>,
    parent_edge: HashMap<usize, usize>,
    depth: HashMap<usize, usize>,
}

fn bfs_tree(h: &ComponentView<'_>, root: usize) -> SpanningTree {
    let mut order = vec![root];
    let mut parent_edge = HashMap::new();
    let mut depth = HashMap::from([(root, 0)]);
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        let d = depth[&v];
        for &(w, e) in h.neighbours(v) {
            if let Entry::Vacant(slot) = depth.entry(w) {
                slot.insert(d + 1);
                parent_edge.insert(w, e);
                order.push(w);
                queue.push_back(w);
            }
        }
    }
    SpanningTree {
        order,
        parent_edge,
        depth,
    }
}

/// Leaf-to-root sweep over a BFS spanning tree rooted at `exempt`: each
/// non-root vertex fixes its own parity through its tree-parent edge.
/// `wants_odd(v, on_exempt_side)` gives the required parity of the number of
/// `s`-labelled view edges at `v`. Non-tree edges keep their label.
fn sweep(
    h: &ComponentView<'_>,
    current: impl Fn(usize) -> Label,
    s: Label,
    exempt: usize,
    wants_odd: impl Fn(usize, bool) -> bool,
) -> Result<Vec<(usize, Label)>, Step3Error> {
    if !h.contains(exempt) {
        return Err(Step3Error::ExemptOutsideView(exempt));
    }
    if !h.is_connected() {
        return Err(Step3Error::Disconnected);
    }
    let mut labels: HashMap<usize, Label> = HashMap::with_capacity(h.edges().len());
    for &e in h.edges() {
        let l = current(e);
        if l != Label::One && l != s {
            return Err(Step3Error::LabelOutsidePair { edge: e, s });
        }
        labels.insert(e, l);
    }
    let tree = bfs_tree(h, exempt);
    for &v in tree.order.iter().skip(1).rev() {
        let parent = tree.parent_edge[&v];
        let count = h
            .neighbours(v)
            .iter()
            .filter(|&&(_, e)| e != parent && labels[&e] == s)
            .count();
        let want = wants_odd(v, tree.depth[&v].is_multiple_of(2));
        let label = if (count % 2 == 1) != want {
            s
        } else {
            Label::One
        };
        labels.insert(parent, label);
    }
    Ok(h.edges()
        .iter()
        .filter(|&&e| labels[&e] != current(e))
        .map(|&e| (e, labels[&e]))
        .collect())
}

/// Relabels the edges of `h` with `1` and `s` so that, counting only edges
/// of `h`, every vertex except `exempt` gets the `s`-degree parity `mode`
/// assigns to its side. Returns the changed edges.
pub fn parity_relabel(
    h: &ComponentView<'_>,
    labelling: &Labelling,
    s: Label,
    exempt: usize,
    mode: ParityMode,
) -> Result<Vec<(usize, Label)>, Step3Error> {
    sweep(
        h,
        |e| labelling.get(e),
        s,
        exempt,
        |_, side| mode.wants_odd(side),
    )
}

/// As [`parity_relabel`], but the parity targets apply to the full-graph
/// `s`-degree, so edges outside `h` are counted too.
pub fn parity_relabel_global(
    h: &ComponentView<'_>,
    state: &LabelState<'_>,
    s: Label,
    exempt: usize,
    mode: ParityMode,
) -> Result<Vec<(usize, Label)>, Step3Error> {
    let outside = |v: usize| {
        let inside = h
            .neighbours(v)
            .iter()
            .filter(|&&(_, e)| state.label(e) == s)
            .count() as u32;
        state.profile(v).count(s) - inside
    };
    sweep(
        h,
        |e| state.label(e),
        s,
        exempt,
        |v, side| mode.wants_odd(side) != (outside(v) % 2 == 1),
    )
}

/// Applies a delta and returns it for the caller's record.
pub(crate) fn apply(state: &mut LabelState<'_>, delta: &[(usize, Label)]) {
    for &(e, l) in delta {
        state.set(e, l);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn within_count(h: &ComponentView<'_>, l: &Labelling, v: usize, s: Label) -> usize {
        h.neighbours(v)
            .iter()
            .filter(|&&(_, e)| l.get(e) == s)
            .count()
    }

    #[test]
    fn single_edge_exempt_end() {
        let g = Graph::path(2);
        let h = ComponentView::induced(&g, &[0, 1]);
        let l = Labelling::all_ones(&g);
        let delta = parity_relabel(&h, &l, Label::Two, 0, ParityMode::OddOnExemptSide).unwrap();
        assert!(delta.is_empty());
    }

    #[test]
    fn path_unique_solution() {
        // a=0, b=1, c=2
        let g = Graph::path(3);
        let h = ComponentView::induced(&g, &[0, 1, 2]);
        let l = Labelling::all_ones(&g);
        let delta = parity_relabel(&h, &l, Label::Two, 0, ParityMode::OddOnExemptSide).unwrap();
        assert_eq!(delta, vec![(0, Label::Two), (1, Label::Two)]);
    }

    #[test]
    fn cycle_keeps_targets() {
        let g = Graph::new(6, (0..6).map(|i| (i, (i + 1) % 6)).collect()).unwrap();
        let h = ComponentView::induced(&g, &[0, 1, 2, 3, 4, 5]);
        for s in [Label::Two, Label::Three] {
            for mode in [ParityMode::OddOnExemptSide, ParityMode::EvenOnExemptSide] {
                let mut l = Labelling::all_ones(&g);
                l.set(2, s);
                let delta = parity_relabel(&h, &l, s, 3, mode).unwrap();
                for (e, lab) in delta {
                    l.set(e, lab);
                }
                for v in 0..6 {
                    if v == 3 {
                        continue;
                    }
                    let same_side = v % 2 == 1;
                    let want_odd = mode.wants_odd(same_side);
                    assert_eq!(within_count(&h, &l, v, s) % 2 == 1, want_odd, "v={v}");
                }
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = Graph::new(4, vec![(0, 1), (2, 3)]).unwrap();
        let h = ComponentView::induced(&g, &[0, 1, 2, 3]);
        let l = Labelling::all_ones(&g);
        assert_eq!(
            parity_relabel(&h, &l, Label::Two, 0, ParityMode::OddOnExemptSide),
            Err(Step3Error::Disconnected)
        );
        let p = Graph::path(3);
        let h = ComponentView::induced(&p, &[0, 1, 2]);
        let mut l = Labelling::all_ones(&p);
        l.set(1, Label::Three);
        assert_eq!(
            parity_relabel(&h, &l, Label::Two, 0, ParityMode::OddOnExemptSide),
            Err(Step3Error::LabelOutsidePair {
                edge: 1,
                s: Label::Two
            })
        );
        assert_eq!(
            parity_relabel(&h, &l, Label::Three, 7, ParityMode::OddOnExemptSide),
            Err(Step3Error::ExemptOutsideView(7))
        );
    }

    #[test]
    fn global_targets_count_outside_edges() {
        // 0-1-2 path inside the view, 3 hangs off 1 outside it with label 2
        let g = Graph::new(4, vec![(0, 1), (1, 2), (1, 3)]).unwrap();
        let h = ComponentView::induced(&g, &[0, 1, 2]);
        let mut l = Labelling::all_ones(&g);
        l.set(2, Label::Two);
        let mut st = LabelState::new(&g, l);
        let delta =
            parity_relabel_global(&h, &st, Label::Two, 0, ParityMode::OddOnExemptSide).unwrap();
        apply(&mut st, &delta);
        // 2 on the exempt side: odd; 1 on the other side: even overall
        assert_eq!(st.profile(2).d2 % 2, 1);
        assert_eq!(st.profile(1).d2 % 2, 0);
    }
}
