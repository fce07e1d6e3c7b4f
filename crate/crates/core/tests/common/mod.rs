//! Checks written from scratch, without the library's profile code.
#![allow(dead_code)]

use multlabel::graph::{connected_components, Graph};
use multlabel::labelling::{Label, Labelling};
use multlabel::partition::{compute_m0, Partition};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `(d2, d3)` per vertex, counted straight from the edge list.
pub fn raw_keys(g: &Graph, l: &Labelling) -> Vec<(u32, u32)> {
    let mut keys = vec![(0, 0); g.vertex_count()];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        for w in [u, v] {
            match l.get(e) {
                Label::One => {}
                Label::Two => keys[w].0 += 1,
                Label::Three => keys[w].1 += 1,
            }
        }
    }
    keys
}

/// Products as integers, or `None` on overflow.
pub fn integer_products(g: &Graph, l: &Labelling) -> Option<Vec<u128>> {
    let mut prod = vec![1u128; g.vertex_count()];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let x = l.get(e).value() as u128;
        prod[u] = prod[u].checked_mul(x)?;
        prod[v] = prod[v].checked_mul(x)?;
    }
    Some(prod)
}

/// Edges whose ends have equal integer products.
pub fn integer_conflicts(g: &Graph, l: &Labelling) -> Option<Vec<usize>> {
    let prod = integer_products(g, l)?;
    Some(
        g.edges()
            .iter()
            .enumerate()
            .filter(|(_, &(u, v))| prod[u] == prod[v])
            .map(|(e, _)| e)
            .collect(),
    )
}

pub fn is_special(k: (u32, u32)) -> bool {
    k.1 == 1 && k.0 >= 2 && (k.0 + k.1) % 2 == 1
}

/// Smallest `k <= 3` with a proper labelling, by plain enumeration of all
/// label vectors and integer products. Only for small edge counts.
pub fn naive_min_k(g: &Graph) -> Option<usize> {
    let m = g.edge_count();
    if m == 0 {
        return Some(1);
    }
    for k in 1..=3usize {
        let total = k.pow(m as u32);
        for code in 0..total {
            let mut c = code;
            let labels = (0..m)
                .map(|_| {
                    let l = Label::from_value((c % k) as u8 + 1).unwrap();
                    c /= k;
                    l
                })
                .collect();
            let l = Labelling::from_labels(labels);
            if integer_conflicts(g, &l).unwrap().is_empty() {
                return Some(k);
            }
        }
    }
    None
}

/// Random connected bipartite graph on `n` vertices with sides drawn at
/// random; components are chained by extra cross edges.
pub fn random_connected_bipartite(n: usize, p: f64, seed: u64) -> (Graph, Vec<bool>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut side: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    if n >= 2 && side.iter().all(|&s| s == side[0]) {
        side[n - 1] = !side[0];
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if side[u] != side[v] && rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    loop {
        let g = Graph::new(n, edges.clone()).unwrap();
        let comps = connected_components(&g);
        if comps.len() <= 1 {
            return (g, side);
        }
        let b = &comps[1];
        let (u, v) = b
            .iter()
            .flat_map(|&x| (0..n).map(move |y| (x, y)))
            .find(|&(x, y)| !b.contains(&y) && side[x] != side[y])
            .expect("both sides are non-empty");
        edges.push((u.min(v), u.max(v)));
    }
}

/// Violations of the step-2 postconditions, computed from scratch.
pub fn step2_problems(g: &Graph, p: &Partition, l: &Labelling) -> Vec<String> {
    let keys = raw_keys(g, l);
    let part = |v: usize| p.part_of(v);
    let mut out = Vec::new();
    for (v, &(d2, d3)) in keys.iter().enumerate() {
        let i = part(v);
        let ok = match i {
            1 => d2 == 0,
            2 => d3 == 0,
            _ if i % 2 == 1 => d3 > 0 && d2 as usize == (i - 1) / 2 && (d2 + d3) % 2 == 0,
            _ => d2 > 0 && d3 as usize == i / 2 && (d2 + d3) % 2 == 1,
        };
        if !ok {
            out.push(format!("vertex {v} in V{i} has key ({d2},{d3})"));
        }
        if is_special((d2, d3)) {
            out.push(format!("vertex {v} is special"));
        }
    }
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let (hi, lo) = if part(u) > part(v) {
            (part(u), part(v))
        } else {
            (part(v), part(u))
        };
        let lab = l.get(e);
        if hi <= 2 && lab != Label::One {
            out.push(format!("bottom edge {u} {v} labelled {lab}"));
        }
        let allowed = if lo % 2 == 1 {
            Label::Three
        } else {
            Label::Two
        };
        if hi > lo && lab != Label::One && lab != allowed {
            out.push(format!("edge {u} {v} into V{lo} labelled {lab}"));
        }
        if keys[u] == keys[v] {
            let bottom = |w: usize| part(w) <= 2;
            let another =
                |a: usize, b: usize| g.neighbours(a).iter().any(|&(x, _)| x != b && bottom(x));
            if !(bottom(u) && bottom(v) && (another(u, v) || another(v, u))) {
                out.push(format!("conflict {u} {v} outside the allowed shape"));
            }
        }
    }
    out
}

/// Whether `after` differs from `before` only by exchanging the ends of
/// some edges of `M0(before)`.
pub fn differs_by_m0_swaps(g: &Graph, before: &Partition, after: &Partition) -> bool {
    let m0 = compute_m0(g, before);
    let changed: Vec<usize> = (0..g.vertex_count())
        .filter(|&v| before.part_of(v) != after.part_of(v))
        .collect();
    changed.iter().all(|&v| {
        m0.iter().any(|e| {
            let (a, b) = g.edge(e);
            (a == v || b == v)
                && before.part_of(a) == after.part_of(b)
                && before.part_of(b) == after.part_of(a)
        })
    })
}
