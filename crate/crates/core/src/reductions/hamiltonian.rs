//! Backtracking Hamiltonian-cycle search for small graphs.

use thiserror::Error;

use crate::graph::{Graph, Vertex};

pub const HAMILTONIAN_MAX_VERTICES: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("Hamiltonian cycle search limited to {limit} vertices, graph has {n}")]
pub struct HamiltonianBudget {
    pub n: usize,
    pub limit: usize,
}

/// A Hamiltonian cycle as a vertex sequence starting at vertex 0 (the closing
/// edge back to the start is implicit), or `None` if there is none.
///
/// Branches follow sorted adjacency, so the witness is deterministic. Graphs
/// with fewer than three vertices have no cycle.
pub fn find_hamiltonian_cycle(g: &Graph) -> Result<Option<Vec<Vertex>>, HamiltonianBudget> {
    let n = g.n();
    if n > HAMILTONIAN_MAX_VERTICES {
        return Err(HamiltonianBudget { n, limit: HAMILTONIAN_MAX_VERTICES });
    }
    if n < 3 || g.vertices().any(|v| g.degree(v) < 2) || !g.is_connected() {
        return Ok(None);
    }
    let start = Vertex(0);
    let mut path = vec![start];
    let mut used = vec![false; n];
    used[0] = true;
    Ok(extend(g, &mut path, &mut used).then_some(path))
}

fn extend(g: &Graph, path: &mut Vec<Vertex>, used: &mut [bool]) -> bool {
    let last = *path.last().expect("non-empty");
    if path.len() == g.n() {
        return g.has_edge(last, path[0]);
    }
    for &w in g.neighbors(last) {
        if used[w.index()] {
            continue;
        }
        used[w.index()] = true;
        path.push(w);
        if !strands_a_vertex(g, used, path[0], w) && extend(g, path, used) {
            return true;
        }
        path.pop();
        used[w.index()] = false;
    }
    false
}

/// An unused vertex with fewer than two usable neighbors can never be closed
/// into the cycle.
fn strands_a_vertex(g: &Graph, used: &[bool], start: Vertex, head: Vertex) -> bool {
    g.vertices().filter(|v| !used[v.index()]).any(|v| {
        g.neighbors(v)
            .iter()
            .filter(|&&w| !used[w.index()] || w == start || w == head)
            .count()
            < 2
    })
}
