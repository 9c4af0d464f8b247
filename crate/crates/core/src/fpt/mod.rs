//! Color-coding solver: coloring families, labeled paths, sparse
//! configuration graphs and shortest routes through them.

mod labeled;
pub mod permuter;
mod solve;
pub mod sparse;

pub use labeled::{find_labeled_path, triplet_order, TripletOrder};
pub use permuter::{build_permuter, check_permuter_property, Backend, PermuterError, PermuterFamily, PermuterOptions};
pub use solve::{solve_fpt, FptError, FptMetadata, FptOptions, FptSolution, FptSolver, DEVIATION_ZERO_MOVE_GOAL};
pub use sparse::{SparseArc, SparseConfigGraph, SparseContext};

/// Every deviation flag a solve can report, with a one-line description.
pub const DEVIATION_FLAGS: [(&str, &str); 4] = [
    (sparse::DEVIATION_ALL_PAIR_ARCS, "(k-1)-arcs tested between every pair of nodes, not only consecutive triplets"),
    (sparse::DEVIATION_FULL_TERMINAL_CHECK, "terminal arcs require the full s-transition check"),
    (sparse::DEVIATION_TERMINAL_INCOMING, "terminal nodes receive (k-1)-arcs from every node"),
    (DEVIATION_ZERO_MOVE_GOAL, "init = fin is answered Yes with a zero-move route"),
];
