//! Product-proper edge labellings with labels 1, 2 and 3.
//!
//! A labelling is product-proper when adjacent vertices get different
//! products of incident labels. The pipeline in [`engine::label_graph`]
//! builds one for every graph without a `K2` component: a layered
//! partition of the vertices, a first labelling of the edges leaving the
//! two bottom layers, then local repairs inside the bottom two layers.

pub mod engine;
pub mod generate;
pub mod graph;
pub mod labelling;
pub mod oracle;
pub mod partition;
pub mod step2;
pub mod step3;

pub use engine::{label_graph, Error, PipelineReport, PipelineStats};
pub use graph::{parse_dimacs, parse_edge_list, Graph, GraphError, ParseError};
pub use labelling::{
    find_conflicts, is_product_proper, parse_labelling, product_report, Label, Labelling,
    LabellingParseError,
};
pub use oracle::{brute_force_min_k, OracleError};
