//! Walls: the brick-pattern graphs, certificates of their presence in a host
//! graph, and strategies for finding them.

mod find;
mod longpath;
mod reduce;
mod tiles;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::graph::{coord_token, Graph};

pub use find::{find_wall, WallStrategy, DEFAULT_BRUTE_FORCE_BUDGET};
pub use longpath::{long_path_violations, LongPathFailure};
pub use reduce::{
    route_via_path, subwall_size, tw_reduce, tw_reduce_iter, wall_instance, Contraction, IterOutcome, PathRouteError,
    Termination, TwReport, WallLayout, NO_WALL_NOTE,
};
pub use tiles::{extract_clean_subwall, subwall_tiles, CleanSubwall};

/// Wall coordinates: row in `1..=r`, column in `1..=2r`.
pub type Cell = (u32, u32);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WallError {
    #[error("wall size must be at least 2, got {0}")]
    RTooSmall(usize),
    #[error("wall search budget of {limit} steps exhausted")]
    Budget { limit: u64 },
    #[error("invalid wall certificate: {0}")]
    InvalidCertificate(String),
    #[error("certificate is for a {got}-wall, expected a {expected}-wall")]
    WrongSize { expected: usize, got: usize },
    #[error("none of the {tiles} subwall tiles avoids init and fin")]
    NoCleanTile { tiles: usize },
}

/// Vertices and edges of the elementary `r`-wall, in lexicographic order.
pub fn wall_structure(r: usize) -> Result<(Vec<Cell>, Vec<(Cell, Cell)>), WallError> {
    if r < 2 {
        return Err(WallError::RTooSmall(r));
    }
    let (rows, cols) = (r as u32, 2 * r as u32);
    let mut edges: Vec<(Cell, Cell)> = Vec::new();
    for i in 1..=rows {
        for j in 1..=cols {
            if j < cols {
                edges.push(((i, j), (i, j + 1)));
            }
            // The deletion patterns leave a vertical edge exactly where i + j is odd.
            if i < rows && (i + j) % 2 == 1 {
                edges.push(((i, j), (i + 1, j)));
            }
        }
    }
    let mut degree: BTreeMap<Cell, usize> = BTreeMap::new();
    for &(a, b) in &edges {
        *degree.entry(a).or_default() += 1;
        *degree.entry(b).or_default() += 1;
    }
    let pendant: BTreeSet<Cell> = degree.iter().filter(|(_, &d)| d == 1).map(|(&c, _)| c).collect();
    assert_eq!(pendant.len(), 2, "the brick grid has two pendant corners");
    edges.retain(|(a, b)| !pendant.contains(a) && !pendant.contains(b));
    edges.sort();
    let cells = (1..=rows).flat_map(|i| (1..=cols).map(move |j| (i, j))).filter(|c| !pendant.contains(c)).collect();
    Ok((cells, edges))
}

/// The elementary `r`-wall with vertices named `"i,j"`.
pub fn elementary_wall(r: usize) -> Result<Graph, WallError> {
    let (cells, edges) = wall_structure(r)?;
    let names: Vec<String> = cells.iter().map(|&(i, j)| coord_token(i, j)).collect();
    let es: Vec<(String, String)> =
        edges.iter().map(|&((a, b), (c, d))| (coord_token(a, b), coord_token(c, d))).collect();
    Ok(Graph::from_edges(&names, &es).expect("coordinate tokens are valid"))
}

/// An `r`-wall inside a host graph: every wall vertex maps to a host vertex
/// and every wall edge to a host path between the mapped endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallCertificate {
    pub r: usize,
    pub branch: BTreeMap<Cell, String>,
    /// Keyed by wall edge `(a, b)` with `a < b`; paths run from `branch[a]` to `branch[b]`.
    pub paths: BTreeMap<(Cell, Cell), Vec<String>>,
}

impl WallCertificate {
    /// Certificate of an elementary wall inside a host that names its
    /// vertices `"i,j"`.
    pub fn identity(r: usize) -> Result<WallCertificate, WallError> {
        let (cells, edges) = wall_structure(r)?;
        Ok(WallCertificate::from_map(r, &cells, &edges, |(i, j)| coord_token(i, j)))
    }

    pub(crate) fn from_map(r: usize, cells: &[Cell], edges: &[(Cell, Cell)], f: impl Fn(Cell) -> String) -> WallCertificate {
        let branch: BTreeMap<Cell, String> = cells.iter().map(|&c| (c, f(c))).collect();
        let paths = edges.iter().map(|&(a, b)| ((a, b), vec![branch[&a].clone(), branch[&b].clone()])).collect();
        WallCertificate { r, branch, paths }
    }

    /// Every host vertex used by the certificate.
    pub fn host_vertices(&self) -> BTreeSet<&str> {
        self.branch
            .values()
            .map(String::as_str)
            .chain(self.paths.values().flat_map(|p| p.iter().map(String::as_str)))
            .collect()
    }

    /// Host edges on the certificate's paths, as `(min, max)` name pairs, sorted.
    pub fn host_edges(&self) -> Vec<(&str, &str)> {
        let mut out: Vec<(&str, &str)> = self
            .paths
            .values()
            .flat_map(|p| p.windows(2).map(|w| if w[0] <= w[1] { (w[0].as_str(), w[1].as_str()) } else { (w[1].as_str(), w[0].as_str()) }))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Checks every certificate invariant against `g`, naming the first failure.
    pub fn check(&self, g: &Graph) -> Result<(), String> {
        let (cells, edges) = wall_structure(self.r).map_err(|e| e.to_string())?;
        if self.branch.keys().copied().ne(cells.iter().copied()) {
            return Err("branch map does not cover exactly the wall vertices".into());
        }
        if self.paths.keys().copied().ne(edges.iter().copied()) {
            return Err("path map does not cover exactly the wall edges".into());
        }
        let mut owner: BTreeMap<&str, String> = BTreeMap::new();
        for (cell, name) in &self.branch {
            if g.vertex(name).is_none() {
                return Err(format!("branch vertex `{name}` is not in the graph"));
            }
            if let Some(prev) = owner.insert(name, format!("branch {cell:?}")) {
                return Err(format!("`{name}` used by {prev} and branch {cell:?}"));
            }
        }
        for (&(a, b), path) in &self.paths {
            if path.len() < 2 || path[0] != self.branch[&a] || path[path.len() - 1] != self.branch[&b] {
                return Err(format!("path for {a:?}-{b:?} does not join its branch vertices"));
            }
            for w in path.windows(2) {
                match (g.vertex(&w[0]), g.vertex(&w[1])) {
                    (Some(x), Some(y)) if g.has_edge(x, y) => {}
                    _ => return Err(format!("path for {a:?}-{b:?} uses a non-edge `{}`-`{}`", w[0], w[1])),
                }
            }
            for name in &path[1..path.len() - 1] {
                if let Some(prev) = owner.insert(name, format!("path {a:?}-{b:?}")) {
                    return Err(format!("`{name}` used by {prev} and path {a:?}-{b:?}"));
                }
            }
        }
        Ok(())
    }
}

pub fn verify_wall(g: &Graph, cert: &WallCertificate) -> bool {
    cert.check(g).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Literal construction: full grid, delete the two vertical ranges, then
    /// the degree-one vertices.
    fn literal_wall(r: u32) -> (BTreeSet<Cell>, BTreeSet<(Cell, Cell)>) {
        let mut edges = BTreeSet::new();
        for i in 1..=r {
            for j in 1..=2 * r {
                if j < 2 * r {
                    edges.insert(((i, j), (i, j + 1)));
                }
                if i < r {
                    edges.insert(((i, j), (i + 1, j)));
                }
            }
        }
        for i in 1..=r / 2 {
            for j in 1..=r {
                edges.remove(&((2 * i - 1, 2 * j - 1), (2 * i, 2 * j - 1)));
            }
        }
        for i in 1..=(r - 1) / 2 {
            for j in 1..=r {
                edges.remove(&((2 * i, 2 * j), (2 * i + 1, 2 * j)));
            }
        }
        let mut cells: BTreeSet<Cell> = (1..=r).flat_map(|i| (1..=2 * r).map(move |j| (i, j))).collect();
        let deg = |c: Cell, es: &BTreeSet<(Cell, Cell)>| es.iter().filter(|(a, b)| *a == c || *b == c).count();
        let ones: Vec<Cell> = cells.iter().copied().filter(|&c| deg(c, &edges) == 1).collect();
        assert_eq!(ones.len(), 2);
        for c in ones {
            cells.remove(&c);
            edges.retain(|(a, b)| *a != c && *b != c);
        }
        (cells, edges)
    }

    #[test]
    fn matches_literal_construction() {
        for r in 2..=9 {
            let (cells, edges) = wall_structure(r as usize).unwrap();
            let (lc, le) = literal_wall(r);
            assert_eq!(cells.into_iter().collect::<BTreeSet<_>>(), lc, "r={r}");
            assert_eq!(edges.into_iter().collect::<BTreeSet<_>>(), le, "r={r}");
        }
    }

    #[test]
    fn sizes() {
        let w4 = elementary_wall(4).unwrap();
        assert_eq!(w4.n(), 30);
        assert_eq!(w4.edge_count(), 38);
        for r in 2..=8 {
            let w = elementary_wall(r).unwrap();
            assert_eq!(w.n(), 2 * r * r - 2);
            assert!(w.vertices().all(|v| (2..=3).contains(&w.degree(v))));
            assert!(w.is_connected());
        }
        assert_eq!(elementary_wall(1), Err(WallError::RTooSmall(1)));
    }

    #[test]
    fn two_wall_is_a_hexagon() {
        let w = elementary_wall(2).unwrap();
        assert_eq!(w.n(), 6);
        assert_eq!(w.edge_count(), 6);
    }

    #[test]
    fn identity_certificates_verify() {
        for r in 2..=8 {
            let w = elementary_wall(r).unwrap();
            let cert = WallCertificate::identity(r).unwrap();
            assert_eq!(cert.check(&w), Ok(()), "r={r}");
        }
    }

    fn subdivide(g: &Graph, a: &str, b: &str, mid: &str) -> Graph {
        let mut names: Vec<String> = g.names().to_vec();
        names.push(mid.to_string());
        let mut es: Vec<(String, String)> = g
            .edge_names()
            .filter(|&(x, y)| !((x == a && y == b) || (x == b && y == a)))
            .map(|(x, y)| (x.to_string(), y.to_string()))
            .collect();
        es.push((a.to_string(), mid.to_string()));
        es.push((mid.to_string(), b.to_string()));
        Graph::from_edges(&names, &es).unwrap()
    }

    #[test]
    fn subdivided_wall_verifies() {
        let mut g = elementary_wall(4).unwrap();
        let mut cert = WallCertificate::identity(4).unwrap();
        let keys: Vec<(Cell, Cell)> = cert.paths.keys().copied().collect();
        for (n, idx) in [3usize, 17, 30].into_iter().enumerate() {
            let key = keys[idx];
            let path = cert.paths.get_mut(&key).unwrap();
            let mid = format!("s{n}");
            g = subdivide(&g, &path[0], &path[1], &mid);
            path.insert(1, mid);
        }
        assert_eq!(g.n(), 33);
        assert_eq!(cert.check(&g), Ok(()));
        assert!(!verify_wall(&elementary_wall(4).unwrap(), &cert));
    }

    #[test]
    fn reused_interior_rejected() {
        let mut g = elementary_wall(3).unwrap();
        let mut cert = WallCertificate::identity(3).unwrap();
        let keys: Vec<(Cell, Cell)> = cert.paths.keys().copied().collect();
        let (p, q) = (cert.paths[&keys[0]].clone(), cert.paths[&keys[5]].clone());
        let mut names = g.names().to_vec();
        names.push("x".into());
        let mut es: Vec<(String, String)> = g.edge_names().map(|(a, b)| (a.into(), b.into())).collect();
        for end in [&p[0], &p[1], &q[0], &q[1]] {
            es.push((end.clone(), "x".into()));
        }
        g = Graph::from_edges(&names, &es).unwrap();
        cert.paths.insert(keys[0], vec![p[0].clone(), "x".into(), p[1].clone()]);
        assert_eq!(cert.check(&g), Ok(()));
        cert.paths.insert(keys[5], vec![q[0].clone(), "x".into(), q[1].clone()]);
        let err = cert.check(&g).unwrap_err();
        assert!(err.contains("`x` used by"), "{err}");
    }

    #[test]
    fn host_edges_sorted() {
        let cert = WallCertificate::identity(2).unwrap();
        let es = cert.host_edges();
        assert_eq!(es.len(), 6);
        assert_eq!(es[0], ("1,2", "1,3"));
        assert!(es.windows(2).all(|w| w[0] < w[1]));
    }
}
