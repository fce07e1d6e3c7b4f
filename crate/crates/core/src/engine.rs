//! The full pipeline: valid partition, step 2, step 3, independent check.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::graph::{connected_components, ComponentView, Graph};
use crate::labelling::{find_conflicts, Label, LabelState, Labelling, ProductKey};
use crate::partition::{build_valid_partition_with_stats, Partition, PartitionError};
use crate::step2::{run_step2, Step2Error};
use crate::step3::{run_step3, Claim, Step3Error};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("graph is not nice")]
    NotNice,
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Step2(#[from] Step2Error),
    #[error(transparent)]
    Step3(#[from] Step3Error),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PipelineStats {
    /// Vertex moves made while repairing the greedy partition.
    pub repair_moves: usize,
    /// Witness swaps made while repairing the greedy partition.
    pub repair_swaps: usize,
    /// Swaps made by step 2.
    pub step2_swaps: usize,
    pub components_fixed: usize,
    pub claims: BTreeMap<Claim, usize>,
}

#[derive(Debug, Clone)]
pub struct PipelineReport {
    pub labelling: Labelling,
    /// Union of the per-component partitions; isolated vertices sit in `V1`.
    pub partition: Partition,
    pub stats: PipelineStats,
    /// Conflicting edges found by the independent checker.
    pub conflicts: Vec<usize>,
    /// Vertices outside every fixed component whose product changed in
    /// step 3.
    pub locality_violations: Vec<usize>,
    /// One line per step-2 vertex and per fixed component.
    pub trace: Vec<String>,
}

impl PipelineReport {
    pub fn is_proper(&self) -> bool {
        self.conflicts.is_empty()
    }
}

/// Product keys of every vertex of `g` under `l`.
fn keys(g: &Graph, l: &Labelling) -> Vec<ProductKey> {
    let st = LabelState::new(g, l.clone());
    (0..g.vertex_count()).map(|v| st.key(v)).collect()
}

/// Labels a nice graph, component by component.
pub fn label_graph(g: &Graph) -> Result<PipelineReport, Error> {
    if !crate::graph::is_nice(g) {
        return Err(Error::NotNice);
    }
    let mut labels = vec![Label::One; g.edge_count()];
    let mut part_of = vec![1; g.vertex_count()];
    let mut stats = PipelineStats::default();
    let mut locality_violations = Vec::new();
    let mut trace = Vec::new();

    for comp in connected_components(g) {
        if comp.len() == 1 {
            continue;
        }
        let view = ComponentView::induced(g, &comp);
        let local = view.to_graph();

        let (p, repair) = build_valid_partition_with_stats(&local, None)?;
        stats.repair_moves += repair.moves;
        stats.repair_swaps += repair.swap_repairs;

        let s2 = run_step2(&local, &p)?;
        stats.step2_swaps += s2.swap_count();
        let before = keys(&local, &s2.labelling);

        let s3 = run_step3(&local, &s2.partition, &s2.labelling)?;
        let after = keys(&local, &s3.labelling);
        let touched: BTreeSet<usize> = s3
            .fixes
            .iter()
            .flat_map(|f| f.vertices.iter().copied())
            .collect();
        locality_violations.extend(
            (0..local.vertex_count())
                .filter(|v| !touched.contains(v) && before[*v] != after[*v])
                .map(|v| view.global_index(v)),
        );

        stats.components_fixed += s3.fixes.len();
        for fix in &s3.fixes {
            *stats.claims.entry(fix.outcome.claim).or_default() += 1;
        }
        trace.extend(s2.events.iter().map(|ev| format!("[{comp:?}] {ev}")));
        trace.extend(s3.fixes.iter().map(|f| format!("[{comp:?}] {f}")));

        for (le, &ge) in view.edges().iter().enumerate() {
            labels[ge] = s3.labelling.get(le);
        }
        for (lv, &gv) in comp.iter().enumerate() {
            part_of[gv] = s2.partition.part_of(lv);
        }
    }

    let labelling = Labelling::from_labels(labels);
    let conflicts = find_conflicts(g, &labelling);
    Ok(PipelineReport {
        partition: Partition::from_assignment(part_of)?,
        labelling,
        stats,
        conflicts,
        locality_violations,
        trace,
    })
}
