//! Everything the other two fixers leave: a pendant 1-monochromatic `V2`
//! vertex `u` hanging off a 1-monochromatic `V1` vertex `v` whose other
//! neighbours are all 2-monochromatic.

use crate::labelling::{Label, LabelState, VertexClass};

use super::parity::{apply, parity_relabel_global, ParityMode};
use super::{
    check_entry, noblue, two_neighbours, unreachable, Claim, ConflictComponent, FixOutcome,
    Recorder, Step3Error,
};

const NAME: &str = "lastcase";

pub fn fix_last_case(
    c: &ConflictComponent<'_>,
    state: &mut LabelState<'_>,
) -> Result<FixOutcome, Step3Error> {
    check_entry(c, state)?;
    if noblue::trigger(c, state) {
        return Err(unreachable(NAME, "the noblue trigger holds"));
    }
    if two_neighbours::trigger(c, state).is_some() {
        return Err(unreachable(NAME, "the 2neigh trigger holds"));
    }
    let g = c.graph();
    let e = *c
        .conflicts(state)
        .first()
        .ok_or(Step3Error::TriggerAbsent(NAME))?;
    let (a, b) = g.edge(e);
    let (v, u) = if c.in_v1(a) { (a, b) } else { (b, a) };
    if c.degree(u) != 1 {
        return Err(unreachable(
            NAME,
            format!("u={u} has component degree {}", c.degree(u)),
        ));
    }
    let others: Vec<usize> = c
        .neighbours(v)
        .iter()
        .map(|&(x, _)| x)
        .filter(|&x| x != u)
        .collect();
    let Some(&x1) = others.first() else {
        return Err(unreachable(
            NAME,
            format!("v={v} has no neighbour besides u={u}"),
        ));
    };
    if let Some(&x) = others
        .iter()
        .find(|&&x| state.profile(x).class() != VertexClass::Mono2)
    {
        return Err(unreachable(
            NAME,
            format!("neighbour {x} of v={v} is not 2-monochromatic"),
        ));
    }

    let mut rec = Recorder::start(c, state);
    rec.note(format!("v={v} u={u}"));
    let rest: Vec<usize> = c.vertices().iter().copied().filter(|&z| z != u).collect();
    let h = c.sub_view(&rest);
    let delta = parity_relabel_global(&h, state, Label::Two, v, ParityMode::OddOnExemptSide)?;
    apply(state, &delta);
    rec.note(format!("parity s=2 exempt={v} mode=odd-on-exempt-side"));

    let d2 = state.profile(v).d2;
    if d2.is_multiple_of(2) {
        if d2 >= 2 {
            state.set(e, Label::Three);
            rec.note(format!("v={v} made special"));
        } else {
            let e1 = g.edge_between(v, x1).expect("x1 neighbours v");
            state.set(e1, Label::Three);
            rec.note(format!("x1={x1} made special"));
        }
    }
    Ok(rec.finish(Claim::LastCase, state))
}
