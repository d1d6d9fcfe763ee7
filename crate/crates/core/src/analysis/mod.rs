//! Component structure, edge statistics and percolation diagnostics.

mod components;
mod cubes;
mod edges;
mod sweep;
mod transport;

pub use components::{components, path_components, ComponentReport, UnionFind};
pub use cubes::{cube_diagnostic, reach_multiplier, CubeDiagnostic, CubeGrid};
pub use edges::{edge_length_stats, locally_maximal_edges, EdgeLengthStats, Histogram};
pub use sweep::{percolation_sweep, SweepConfig, SweepLaw, SweepRow};
pub use transport::{transport_balance, TransportLedger, TransportRule};
