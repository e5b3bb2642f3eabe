//! Tree-graph bounds for sums over connected graphs.
//!
//! The quantity of interest is the connected-graph sum
//! `sum over connected g on n vertices of prod over edges ij in g of
//! (e^{-u_ij} - 1)` for a symmetric pair interaction u. This crate
//! provides:
//!
//! * exhaustive and tree-resummed evaluation of that sum,
//! * the Kruskal partition of connected graphs into intervals over
//!   spanning trees that makes the resummation an identity,
//! * stability checking and the improved upper bound
//!   `e^{sum b_i} * sum over trees of prod (1 - e^{-|u_ij|})`, with its
//!   complex-interaction variant and the weaker comparator that needs
//!   no stability hypothesis,
//! * instance file I/O, seeded instance generation, and JSON reports
//!   backing the `ursell` command-line tool.
//!
//! Everything is exact-enumeration based and sized for small vertex
//! counts; each operation documents its capacity limit.

pub mod bounds;
pub mod error;
pub mod graph;
pub mod instance;
pub mod potential;
pub mod report;
pub mod scheme;
pub mod sum;

pub use bounds::{
    connected_sum_direct, connected_sum_resummed, ensure_stable, evaluate_bound,
    key_inequality_gap, naive_tree_bound, tree_bound_complex, tree_bound_real, tree_majorant_term,
    tree_majorant_term_factored, BoundReport, EvalOptions, DEFAULT_REL_TOL,
};
pub use error::{Error, Result, VertexSubset};
pub use graph::{
    complete_edge_count, edge_index, enumerate_connected_graphs, enumerate_trees,
    labeled_tree_count, prufer_decode, tree_path, EdgeId, Graph, Tree,
};
pub use instance::{
    emit_instance, generate_instance, parse_instance, parse_instance_str, Distribution, Instance,
};
pub use potential::{
    check_stability, edge_order_from_potential, forest_decomposition, minimal_uniform_stability,
    negative_part, trick_factorization, Complex64, ForestDecomposition, Potential, PotentialKind,
    StabilityCertificate, StabilityOutcome, StabilityViolation,
};
pub use scheme::{boundary_edges, kruskal_map, verify_partition, EdgeOrder, PartitionReport};

/// How enumeration-heavy evaluations run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExecMode {
    /// Single-threaded streaming enumeration; bit-exact across runs.
    #[default]
    Sequential,
    /// Enumeration split into a fixed number of chunks on a thread
    /// pool; chunk results merge in index order, so output does not
    /// depend on the worker count, though it may differ from the
    /// sequential result within summation tolerance.
    Parallel,
}
