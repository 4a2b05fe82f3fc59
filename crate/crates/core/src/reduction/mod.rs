//! Tschirnhaus shift, reduction `P ↦ P_(r)`, cluster splitting and the
//! reduction tree with its combinatorics.

pub mod combinatorics;
pub mod lift;
pub mod local;
pub mod tree;

pub use combinatorics::{brute_force_d, d};
pub use lift::{split_clusters, Cluster, Factors};
pub use local::{reduce_once, reduce_side, LocalCurve, ReduceOutcome};
pub use tree::{build_tree, type_a_check, NodeKind, ReductionNode, ReductionTree, TreeSide};
