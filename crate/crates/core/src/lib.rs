//! Motion planning for a snake of fixed length on an undirected graph.
//!
//! The crate decides whether a snake can move from one configuration to
//! another and returns shortest routes. It provides an exact breadth-first
//! oracle, a color-coding solver whose work is dominated by the snake length
//! rather than the graph size, a generator that composes Hamiltonian-cycle
//! instances on grid graphs into one snake instance, and a reduction that
//! contracts edges inside large walls.

pub mod cli;
pub mod fpt;
pub mod graph;
pub mod io;
pub mod reductions;
pub mod snake;
pub mod wall;
