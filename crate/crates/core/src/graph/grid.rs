//! Grid graphs: vertices are lattice points `"r,c"`, edges join points at
//! Manhattan distance one.

use std::collections::BTreeSet;

use thiserror::Error;

use super::{Graph, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GridError {
    #[error("vertex `{0}` is not a coordinate token `r,c`")]
    NotCoordinate(String),
    #[error("grid graph is empty")]
    Empty,
    #[error("grid graph is not connected")]
    Disconnected,
    #[error("edge set differs from the Manhattan adjacency rule")]
    NotGrid,
}

pub fn parse_coord(token: &str) -> Option<(u32, u32)> {
    let (r, c) = token.split_once(',')?;
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) && (s == "0" || !s.starts_with('0'));
    if !digits(r) || !digits(c) {
        return None;
    }
    Some((r.parse().ok()?, c.parse().ok()?))
}

pub fn coord_token(r: u32, c: u32) -> String {
    format!("{r},{c}")
}

/// True iff the edge set of `g` is exactly the Manhattan rule on its vertices.
pub fn is_grid_graph(g: &Graph) -> Result<bool, GridError> {
    let coords = coords_of(g)?;
    let index: std::collections::BTreeMap<(u32, u32), Vertex> =
        coords.iter().enumerate().map(|(i, &p)| (p, Vertex(i as u32))).collect();
    let mut expected = 0usize;
    for (i, &(r, c)) in coords.iter().enumerate() {
        for q in [(r + 1, c), (r, c + 1)] {
            if let Some(&w) = index.get(&q) {
                expected += 1;
                if !g.has_edge(Vertex(i as u32), w) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(expected == g.edge_count())
}

fn coords_of(g: &Graph) -> Result<Vec<(u32, u32)>, GridError> {
    g.names()
        .iter()
        .map(|n| parse_coord(n).ok_or_else(|| GridError::NotCoordinate(n.clone())))
        .collect()
}

/// A graph whose vertices are lattice points with the induced Manhattan edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridGraph {
    graph: Graph,
    coords: Vec<(u32, u32)>,
}

impl GridGraph {
    pub fn from_cells<I: IntoIterator<Item = (u32, u32)>>(cells: I) -> GridGraph {
        let set: BTreeSet<(u32, u32)> = cells.into_iter().collect();
        let names: Vec<String> = set.iter().map(|&(r, c)| coord_token(r, c)).collect();
        let mut edges = Vec::new();
        for &(r, c) in &set {
            for q in [(r + 1, c), (r, c + 1)] {
                if set.contains(&q) {
                    edges.push((coord_token(r, c), coord_token(q.0, q.1)));
                }
            }
        }
        let graph = Graph::from_edges(&names, &edges).expect("lattice tokens are valid");
        GridGraph::from_graph_unchecked(graph)
    }

    /// Wraps a graph that already satisfies the grid rule.
    pub fn from_graph(graph: Graph) -> Result<GridGraph, GridError> {
        match is_grid_graph(&graph)? {
            true => Ok(GridGraph::from_graph_unchecked(graph)),
            false => Err(GridError::NotGrid),
        }
    }

    fn from_graph_unchecked(graph: Graph) -> GridGraph {
        let coords = coords_of(&graph).expect("coordinate names");
        GridGraph { graph, coords }
    }

    /// `rows × cols` rectangle with top-left corner at `(r0, c0)`.
    pub fn rectangle(r0: u32, c0: u32, rows: u32, cols: u32) -> GridGraph {
        GridGraph::from_cells((0..rows).flat_map(|i| (0..cols).map(move |j| (r0 + i, c0 + j))))
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn into_graph(self) -> Graph {
        self.graph
    }

    pub fn coord(&self, v: Vertex) -> (u32, u32) {
        self.coords[v.index()]
    }

    pub fn cells(&self) -> BTreeSet<(u32, u32)> {
        self.coords.iter().copied().collect()
    }

    pub fn vertex_at(&self, r: u32, c: u32) -> Option<Vertex> {
        self.graph.vertex(&coord_token(r, c))
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_is_grid() {
        let sq = GridGraph::rectangle(0, 0, 2, 2);
        assert_eq!(sq.graph().edge_count(), 4);
        assert_eq!(is_grid_graph(sq.graph()), Ok(true));
    }

    #[test]
    fn diagonal_breaks_grid() {
        let vs = ["0,0", "0,1", "1,0", "1,1"];
        let es = [("0,0", "0,1"), ("0,0", "1,0"), ("0,1", "1,1"), ("1,0", "1,1"), ("0,0", "1,1")];
        let g = Graph::from_edges(&vs, &es).unwrap();
        assert_eq!(is_grid_graph(&g), Ok(false));
    }

    #[test]
    fn far_points_without_edges() {
        let g = Graph::from_edges(&["0,0", "0,2"], &[] as &[(&str, &str)]).unwrap();
        assert_eq!(is_grid_graph(&g), Ok(true));
    }

    #[test]
    fn non_coordinates_rejected() {
        let g = Graph::from_edges(&["a", "0,1"], &[] as &[(&str, &str)]).unwrap();
        assert!(matches!(is_grid_graph(&g), Err(GridError::NotCoordinate(_))));
        assert_eq!(parse_coord("01,2"), None);
        assert_eq!(parse_coord("-1,2"), None);
        assert_eq!(parse_coord("10,0"), Some((10, 0)));
    }

    #[test]
    fn any_single_edge_flip_breaks_rectangles() {
        for (rows, cols) in [(1, 3), (2, 2), (2, 3), (3, 3)] {
            let rect = GridGraph::rectangle(0, 0, rows, cols);
            let g = rect.graph();
            let vs: Vec<&str> = g.names().iter().map(String::as_str).collect();
            let all: Vec<(usize, usize)> = (0..vs.len()).flat_map(|i| (i + 1..vs.len()).map(move |j| (i, j))).collect();
            for &(i, j) in &all {
                let mut es: Vec<(&str, &str)> = g.edge_names().collect();
                let pair = (vs[i], vs[j]);
                if let Some(pos) = es.iter().position(|&e| e == pair) {
                    es.remove(pos);
                } else {
                    es.push(pair);
                }
                let flipped = Graph::from_edges(&vs, &es).unwrap();
                assert_eq!(is_grid_graph(&flipped), Ok(false), "{rows}x{cols} flip {pair:?}");
            }
        }
    }
}
