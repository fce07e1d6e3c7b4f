//! Components with a 3-monochromatic `V1` vertex, or with a 1-monochromatic
//! `V1` vertex carrying two pendant 1-monochromatic `V2` neighbours.

use std::collections::BTreeSet;

use crate::labelling::{Label, LabelState, VertexClass};

use super::parity::{apply, parity_relabel_global, ParityMode};
use super::{
    check_entry, check_p3, unreachable, Claim, ConflictComponent, FixOutcome, Recorder, Step3Error,
};

const NAME: &str = "noblue";

fn class(state: &LabelState<'_>, v: usize) -> VertexClass {
    state.profile(v).class()
}

/// A 1-monochromatic `V1` vertex with two 1-monochromatic `V2` neighbours
/// of component degree 1, smallest ids first.
fn pendant_pair(
    c: &ConflictComponent<'_>,
    state: &LabelState<'_>,
) -> Option<(usize, usize, usize)> {
    c.vertices()
        .iter()
        .copied()
        .filter(|&v| c.in_v1(v) && class(state, v) == VertexClass::Mono1)
        .find_map(|v| {
            let mut leaves = c
                .neighbours(v)
                .iter()
                .map(|&(u, _)| u)
                .filter(|&u| c.degree(u) == 1 && class(state, u) == VertexClass::Mono1);
            match (leaves.next(), leaves.next()) {
                (Some(a), Some(b)) => Some((v, a, b)),
                _ => None,
            }
        })
}

pub(super) fn trigger(c: &ConflictComponent<'_>, state: &LabelState<'_>) -> bool {
    c.vertices()
        .iter()
        .any(|&v| c.in_v1(v) && class(state, v) == VertexClass::Mono3)
        || pendant_pair(c, state).is_some()
}

fn set(state: &mut LabelState<'_>, c: &ConflictComponent<'_>, a: usize, b: usize, l: Label) {
    let e = c
        .graph()
        .edge_between(a, b)
        .expect("fixer only relabels component edges");
    state.set(e, l);
}

pub fn fix_noblue(
    c: &ConflictComponent<'_>,
    state: &mut LabelState<'_>,
) -> Result<FixOutcome, Step3Error> {
    check_entry(c, state)?;
    if !trigger(c, state) {
        return Err(Step3Error::TriggerAbsent(NAME));
    }
    let mut rec = Recorder::start(c, state);

    let mut pendants = BTreeSet::new();
    if let Some((v1, u1, u2)) = pendant_pair(c, state) {
        set(state, c, v1, u1, Label::Three);
        set(state, c, v1, u2, Label::Three);
        pendants.extend([u1, u2]);
        rec.note(format!("pendants v1={v1} u1={u1} u2={u2}"));
        if check_p3(c, state).is_ok() {
            return Ok(rec.finish(Claim::NoBlue, state));
        }
    }

    let x_set: BTreeSet<usize> = c
        .vertices()
        .iter()
        .copied()
        .filter(|&v| c.in_v1(v) && class(state, v) == VertexClass::Mono3)
        .collect();
    let rest: Vec<usize> = c
        .vertices()
        .iter()
        .copied()
        .filter(|v| !x_set.contains(v))
        .collect();

    let mut y_set = BTreeSet::new();
    let mut partner = std::collections::BTreeMap::new();
    for comp in c.sub_view(&rest).components() {
        if comp.iter().any(|v| pendants.contains(v)) {
            continue;
        }
        let ci = c.sub_view(&comp);
        let (yi, xi) = comp
            .iter()
            .find_map(|&y| {
                c.neighbours(y)
                    .iter()
                    .map(|&(x, _)| x)
                    .find(|x| x_set.contains(x))
                    .map(|x| (y, x))
            })
            .ok_or_else(|| {
                unreachable(NAME, format!("component {comp:?} has no neighbour in X"))
            })?;
        if !c.in_v2(yi) {
            return Err(unreachable(NAME, format!("y={yi} is not in V2")));
        }
        let delta = parity_relabel_global(&ci, state, Label::Two, yi, ParityMode::OddOnExemptSide)?;
        apply(state, &delta);
        rec.note(format!("parity s=2 exempt={yi} mode=odd-on-exempt-side"));

        let p = state.profile(yi);
        if p.d2.is_multiple_of(2) && p.d2 > 0 {
            set(state, c, xi, yi, Label::Three);
            rec.note(format!("y={yi} made special via x={xi}"));
        } else if p.d2 == 0 {
            let w = ci
                .neighbours(yi)
                .iter()
                .map(|&(w, _)| w)
                .find(|&w| class(state, w) == VertexClass::Mono1);
            if let Some(w) = w {
                y_set.insert(yi);
                partner.insert(yi, w);
            }
        }
    }

    let h_prime: Vec<usize> = x_set.iter().chain(y_set.iter()).copied().collect();
    for comp in c.sub_view(&h_prime).components() {
        let qk = c.sub_view(&comp);
        let xk = comp
            .iter()
            .copied()
            .find(|v| x_set.contains(v))
            .ok_or_else(|| unreachable(NAME, "H' component without an X vertex"))?;
        let delta =
            parity_relabel_global(&qk, state, Label::Three, xk, ParityMode::EvenOnExemptSide)?;
        apply(state, &delta);
        rec.note(format!("parity s=3 exempt={xk} mode=even-on-exempt-side"));

        let clash = qk
            .neighbours(xk)
            .iter()
            .copied()
            .find(|&(y, _)| state.in_conflict(xk, y));
        if let Some((y, e)) = clash {
            let w = partner[&y];
            if state.label(e) == Label::Three {
                state.set(e, Label::One);
            } else {
                state.set(e, Label::Three);
            }
            set(state, c, y, w, Label::Three);
            rec.note(format!("x={xk} clash with y={y} resolved through w={w}"));
        }
    }
    Ok(rec.finish(Claim::NoBlue, state))
}
