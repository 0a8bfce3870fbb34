//! Maximal independent sets on graphs, with neighbor counting done as a
//! blocked sparse matrix-vector product over small dense 0/1 tiles.
//!
//! The pipeline: load a [`graph::Graph`], tile its adjacency with
//! [`tiling::tile_graph`], pick priorities from [`priorities`], and run the
//! iteration in [`engine`]. [`validator`] checks outputs independently.

pub mod cli;
pub mod engine;
pub mod generators;
pub mod graph;
pub mod io;
pub mod priorities;
pub mod spmv;
pub mod tiling;
pub mod validator;

pub use engine::{run_tc_mis, Algorithm, Heuristic, MisResult, TcMis, VertexState};
pub use graph::Graph;
pub use priorities::PriorityVector;
pub use tiling::{tile_graph, TiledAdjacency};
