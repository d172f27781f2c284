//! Exact computations on circular planar electrical networks: the forward
//! map from conductances to response matrices, its inverse on each cell of
//! the strand-matching stratification, grove partition functions and their
//! Pfaffian formulas, Dyck-tiling standard networks, B variables, and
//! central-minor positivity with its Laurent-polynomial machinery.

pub mod bvars;
pub mod dyck;
pub mod error;
pub mod exactalg;
pub mod gen;
pub mod groves;
pub mod medial;
pub mod minors;
pub mod network;
pub mod reconstruct;

pub use bvars::{b_assignment, cube_site, left_region, BAssignment, CellKind, CellSign, CubeSite};
pub use dyck::{
    matching_to_tiling, standard_network, tiling_to_matching, DyckPath, DyckTiling,
    RectStrandDiagram,
};
pub use error::{CpnError, Result};
pub use exactalg::{det, pfaffian, rat, ratio, schur_complement, Rat, RatMatrix, SkewMatrix};
pub use groves::{
    dual_tripod_pf, dual_tripod_via_resistance, grove_count, grove_sum, partition_ratio, tripod_pf,
    uncrossing_sum, Evaluation, GroveTable, NodePartition, TripodKind, TripodSpec,
};
pub use medial::{is_minimal, medial_graph, strand_matching, MedialGraph, StrandMatching};
pub use minors::{
    central_minor, contiguous_minor, desnanot_jacobi, evaluate_tad, is_well_connected,
    jaw_identity, jaw_rewrite, locate_region, noninterlaced_minor, small_central_minors,
    LaurentPoly, MinorExpr, TadRegion,
};
pub use network::{Edge, Expansion, Network, ResponseMatrix, Transformation};
pub use reconstruct::{
    comb_partition, conductances_from_tripods, extend_response, reconstruct_standard,
    search_matching, tripod_variables, Comb, ExtensionStep, Reconstruction, TripodVariableSet,
};
