//! Constructive matching schemes: finite complete-graph groups, cone-forest
//! paths, degree-1 attachment by partial matching, and the mass inequality
//! check for their outputs.

mod cone;
mod connect;
mod finite;
mod mass;
mod partial;
mod path;
mod types;

pub use cone::{cone_forest, dfs_path_order, ConeForest};
pub use connect::{connectivity_scheme, ConnectivityOutput};
pub use finite::{finite_component_scheme, FiniteSchemeOutput};
pub use mass::{mass_bound_check, MassBoundReport};
pub use partial::{partial_matching, plan_partial_matching, PartialMatchingOutput, PartialMatchingPlan};
pub use path::{infinite_path_scheme, PathSchemeOutput};
pub use types::{partition_by_nn_rank, TypeAssignment};
