use std::collections::{BTreeMap, BTreeSet};

use super::{wall_structure, Cell, WallCertificate, WallError};
use crate::graph::Graph;

/// Offsets `(R, C)` of disjoint elementary `small`-subwalls of the elementary
/// `big`-wall, in row-major order. Subwall cell `(i, j)` sits at `(i+R, j+C)`.
///
/// Offsets stay even in both directions so the brick parity is preserved;
/// tiles touching a removed corner of the big wall are dropped.
pub fn subwall_tiles(big: usize, small: usize) -> Result<Vec<(u32, u32)>, WallError> {
    let (big_cells, big_edges) = wall_structure(big)?;
    let (cells, edges) = wall_structure(small)?;
    let big_cells: BTreeSet<Cell> = big_cells.into_iter().collect();
    let big_edges: BTreeSet<(Cell, Cell)> = big_edges.into_iter().collect();
    let (rows, cols) = (small as u32, 2 * small as u32);
    let row_stride = rows + rows % 2;
    let mut out = Vec::new();
    let mut r0 = 0;
    while r0 + rows <= big as u32 {
        let mut c0 = 0;
        while c0 + cols <= 2 * big as u32 {
            let shift = |c: Cell| (c.0 + r0, c.1 + c0);
            if cells.iter().all(|&c| big_cells.contains(&shift(c)))
                && edges.iter().all(|&(a, b)| big_edges.contains(&(shift(a), shift(b))))
            {
                out.push((r0, c0));
            }
            c0 += cols;
        }
        r0 += row_stride;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CleanSubwall {
    pub cert: WallCertificate,
    /// Offset of the chosen tile inside the big wall.
    pub offset: (u32, u32),
    /// Number of candidate tiles.
    pub tiles: usize,
}

/// The first tile of `cert` (a `7k`-wall in `g`) whose host image misses
/// every vertex in `avoid`, as a certificate for a `small`-wall.
pub fn extract_clean_subwall(
    g: &Graph,
    cert: &WallCertificate,
    avoid: &BTreeSet<&str>,
    k: usize,
    small: usize,
) -> Result<CleanSubwall, WallError> {
    if cert.r != 7 * k {
        return Err(WallError::WrongSize { expected: 7 * k, got: cert.r });
    }
    cert.check(g).map_err(WallError::InvalidCertificate)?;
    let tiles = subwall_tiles(cert.r, small)?;
    let (cells, edges) = wall_structure(small)?;
    for &(r0, c0) in &tiles {
        let shift = |c: Cell| (c.0 + r0, c.1 + c0);
        let branch: BTreeMap<Cell, String> = cells.iter().map(|&c| (c, cert.branch[&shift(c)].clone())).collect();
        let paths: BTreeMap<(Cell, Cell), Vec<String>> =
            edges.iter().map(|&(a, b)| ((a, b), cert.paths[&(shift(a), shift(b))].clone())).collect();
        let sub = WallCertificate { r: small, branch, paths };
        if sub.host_vertices().is_disjoint(avoid) {
            debug_assert_eq!(sub.check(g), Ok(()));
            return Ok(CleanSubwall { cert: sub, offset: (r0, c0), tiles: tiles.len() });
        }
    }
    Err(WallError::NoCleanTile { tiles: tiles.len() })
}
