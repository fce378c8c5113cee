//! Chip-firing divisor theory on finite multigraphs.
//!
//! * [`graph`]: multigraphs, divisors, Laplacians, genus, canonical divisors.
//! * [`linear_system`]: chip-firing and exact enumeration of `|D|`.
//! * [`rank`]: Baker–Norine rank and the graph Riemann–Roch check.
//! * [`toric`]: toric rank on generic graph curves via node-constraint matrices.
//! * [`experiments`]: graph generators, sweep drivers and reports.

pub mod experiments;
pub mod fm;
pub mod graph;
pub mod linear_system;
pub mod rank;
pub mod seed;
pub mod toric;

pub use fm::{fm_bounds, FmError, Halfspace, HalfspaceSystem, Rational};
pub use graph::{is_connected, Divisor, GraphError, IntMatrix, Multigraph, PointPlacement};
pub use linear_system::{apply_firing, firing_polytope, is_effective_equivalent, linear_system, FiringError, FiringVector, LinearSystem};
pub use rank::{
    effective_divisors_of_degree, non_effective_divisors_of_degree, rank, rank_from_system, rr_residual, verify_rr_graph, RankError,
    RankResult,
};
pub use toric::{
    build_constraint_matrix, toric_effective_test, toric_rank, verify_rr_toric, NodeConstraintMatrix, PrimeField,
    ToricConfig, ToricError, ToricMode, ToricOutcome, ToricRanker,
};
pub use experiments::{
    evaluate_case, run, run_exhaustive, run_random_sweep, run_single, run_to_writer, CaseRecord, ExperimentConfig, ExperimentError,
    ExperimentReport, OutputFormat, ReportWriter, Summary, SweepMode,
};
