use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{wall_structure, Cell, WallCertificate, WallError};
use crate::graph::{parse_coord, Graph, Vertex};

pub const DEFAULT_BRUTE_FORCE_BUDGET: u64 = 5_000_000;

#[derive(Clone, Debug)]
pub enum WallStrategy {
    /// Axis-aligned elementary walls among coordinate-named vertices, under
    /// all eight symmetries of the square lattice.
    GridPattern,
    /// Exhaustive embedding of the elementary wall as a subgraph (edges are
    /// not subdivided), limited to `budget` search steps.
    BruteForce { budget: u64 },
    /// A supplied certificate, verified against the host.
    External(WallCertificate),
}

/// Looks for an `r`-wall. `Ok(None)` means no strategy found one, which says
/// nothing about the treewidth of `g`.
pub fn find_wall(g: &Graph, r: usize, strategy: &WallStrategy) -> Result<Option<WallCertificate>, WallError> {
    let (cells, edges) = wall_structure(r)?;
    match strategy {
        WallStrategy::GridPattern => Ok(grid_pattern(g, r, &cells, &edges)),
        WallStrategy::BruteForce { budget } => brute_force(g, r, &cells, &edges, *budget),
        WallStrategy::External(cert) => {
            if cert.r != r {
                return Err(WallError::WrongSize { expected: r, got: cert.r });
            }
            cert.check(g).map_err(WallError::InvalidCertificate)?;
            Ok(Some(cert.clone()))
        }
    }
}

fn grid_pattern(g: &Graph, r: usize, cells: &[Cell], edges: &[(Cell, Cell)]) -> Option<WallCertificate> {
    let host: BTreeMap<(u32, u32), Vertex> =
        g.vertices().filter_map(|v| parse_coord(g.name(v)).map(|p| (p, v))).collect();
    if host.len() < cells.len() {
        return None;
    }
    let (h, w) = (r as i64 - 1, 2 * r as i64 - 1);
    // Local coordinates are 0-based; each symmetry keeps them non-negative.
    let syms: [fn(i64, i64, i64, i64) -> (i64, i64); 8] = [
        |i, j, _, _| (i, j),
        |i, j, _, w| (i, w - j),
        |i, j, h, _| (h - i, j),
        |i, j, h, w| (h - i, w - j),
        |i, j, _, _| (j, i),
        |i, j, _, w| (w - j, i),
        |i, j, h, _| (j, h - i),
        |i, j, h, w| (w - j, h - i),
    ];
    let (rmin, rmax) = (host.keys().map(|p| p.0).min()? as i64, host.keys().map(|p| p.0).max()? as i64);
    let (cmin, cmax) = (host.keys().map(|p| p.1).min()? as i64, host.keys().map(|p| p.1).max()? as i64);
    let mut anchors: Vec<(i64, i64, usize)> = Vec::new();
    for s in 0..syms.len() {
        let (eh, ew) = if s < 4 { (h, w) } else { (w, h) };
        for dr in rmin..=rmax - eh {
            for dc in cmin..=cmax - ew {
                anchors.push((dr, dc, s));
            }
        }
    }
    anchors.sort_unstable();
    let place = |c: Cell, dr: i64, dc: i64, s: usize| -> Option<Vertex> {
        let (a, b) = syms[s](c.0 as i64 - 1, c.1 as i64 - 1, h, w);
        host.get(&((a + dr) as u32, (b + dc) as u32)).copied()
    };
    let hit = anchors.par_iter().find_map_first(|&(dr, dc, s)| {
        let mut map: BTreeMap<Cell, Vertex> = BTreeMap::new();
        for &c in cells {
            map.insert(c, place(c, dr, dc, s)?);
        }
        edges.iter().all(|(a, b)| g.has_edge(map[a], map[b])).then_some(map)
    })?;
    Some(WallCertificate::from_map(r, cells, edges, |c| g.name(hit[&c]).to_string()))
}

fn brute_force(
    g: &Graph,
    r: usize,
    cells: &[Cell],
    edges: &[(Cell, Cell)],
    budget: u64,
) -> Result<Option<WallCertificate>, WallError> {
    let idx: BTreeMap<Cell, usize> = cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); cells.len()];
    for (a, b) in edges {
        nbrs[idx[a]].push(idx[b]);
        nbrs[idx[b]].push(idx[a]);
    }
    // Breadth-first order so every vertex after the first has a placed neighbor.
    let mut order = vec![0usize];
    let mut seen = vec![false; cells.len()];
    seen[0] = true;
    let mut at = 0;
    while at < order.len() {
        for &y in &nbrs[order[at]].clone() {
            if !std::mem::replace(&mut seen[y], true) {
                order.push(y);
            }
        }
        at += 1;
    }
    let mut search = Embed { g, nbrs: &nbrs, order: &order, map: vec![None; cells.len()], used: vec![false; g.n()], steps: 0, budget };
    if !search.run(0)? {
        return Ok(None);
    }
    let map = search.map;
    Ok(Some(WallCertificate::from_map(r, cells, edges, |c| g.name(map[idx[&c]].expect("placed")).to_string())))
}

struct Embed<'a> {
    g: &'a Graph,
    nbrs: &'a [Vec<usize>],
    order: &'a [usize],
    map: Vec<Option<Vertex>>,
    used: Vec<bool>,
    steps: u64,
    budget: u64,
}

impl Embed<'_> {
    fn run(&mut self, depth: usize) -> Result<bool, WallError> {
        if depth == self.order.len() {
            return Ok(true);
        }
        let x = self.order[depth];
        let placed: Vec<Vertex> = self.nbrs[x].iter().filter_map(|&y| self.map[y]).collect();
        let candidates: Vec<Vertex> = match placed.first() {
            Some(&p) => self.g.neighbors(p).to_vec(),
            None => self.g.vertices().collect(),
        };
        for v in candidates {
            self.steps += 1;
            if self.steps > self.budget {
                return Err(WallError::Budget { limit: self.budget });
            }
            if self.used[v.index()]
                || self.g.degree(v) < self.nbrs[x].len()
                || !placed.iter().all(|&p| self.g.has_edge(p, v))
            {
                continue;
            }
            self.used[v.index()] = true;
            self.map[x] = Some(v);
            if self.run(depth + 1)? {
                return Ok(true);
            }
            self.map[x] = None;
            self.used[v.index()] = false;
        }
        Ok(false)
    }
}
