//! Rerouting through a path, and the contraction loop driven by walls.

use std::collections::BTreeSet;

use thiserror::Error;

use super::{extract_clean_subwall, find_wall, wall_structure, Cell, WallError, WallStrategy};
use crate::graph::{coord_token, Graph, Vertex};
use crate::snake::{Configuration, Instance, Route};

/// Side of the wall whose edges are contracted for snakes of length `k`:
/// `⌈3√k⌉`.
pub fn subwall_size(k: usize) -> usize {
    let target = 9 * k;
    let mut r = 0;
    while r * r < target {
        r += 1;
    }
    r
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PathRouteError {
    #[error("configurations have different lengths")]
    LengthMismatch,
    #[error("path has {got} distinct vertices, needs at least {k}")]
    TooShort { got: usize, k: usize },
    #[error("path is not simple or uses a non-edge")]
    NotAPath,
    #[error("path must start at the head of the first configuration and end at the tail of the second")]
    Endpoints,
    #[error("path meets the body of the first configuration at `{0}`")]
    HitsFirst(String),
    #[error("path meets the second configuration before its tail at `{0}`")]
    HitsSecond(String),
    #[error("replay failed: {0}")]
    Replay(String),
}

/// Moves `c1` along `p` and then backwards along `c2`, ending exactly at `c2`.
///
/// `p = (v_1, …, v_ℓ)` starts at the head of `c1` and ends at the tail of
/// `c2`; it may close into a cycle (`v_1 = v_ℓ`). No vertex of `p` after
/// the first may lie in the body of `c1`, and no vertex before the last may
/// lie in `c2` apart from its tail.
pub fn route_via_path(g: &Graph, c1: &Configuration, p: &[Vertex], c2: &Configuration) -> Result<Route, PathRouteError> {
    let k = c1.k();
    if c2.k() != k {
        return Err(PathRouteError::LengthMismatch);
    }
    let l = p.len();
    let cycle = l > 1 && p[0] == p[l - 1];
    let distinct = if cycle { l - 1 } else { l };
    let body = if cycle { &p[..l - 1] } else { p };
    let unique: BTreeSet<Vertex> = body.iter().copied().collect();
    if unique.len() != body.len() || p.windows(2).any(|w| !g.has_edge(w[0], w[1])) {
        return Err(PathRouteError::NotAPath);
    }
    if distinct < k {
        return Err(PathRouteError::TooShort { got: distinct, k });
    }
    if p[0] != c1.head() || p[l - 1] != c2.tail() {
        return Err(PathRouteError::Endpoints);
    }
    let name = |v: Vertex| g.name(v).to_string();
    if let Some(&v) = p[1..].iter().find(|&&v| c1.vertices()[1..].contains(&v)) {
        return Err(PathRouteError::HitsFirst(name(v)));
    }
    if let Some(&v) = p[..l - 1].iter().find(|&&v| c2.vertices()[..k - 1].contains(&v)) {
        return Err(PathRouteError::HitsSecond(name(v)));
    }
    let mut heads: Vec<Vertex> = p[1..].to_vec();
    heads.extend(c2.vertices()[..k - 1].iter().rev());
    let route = Route { start: c1.clone(), heads };
    let confs = route.replay(g).map_err(|e| PathRouteError::Replay(e.to_string()))?;
    if confs.last() != Some(c2) {
        return Err(PathRouteError::Replay("route does not end at the second configuration".into()));
    }
    Ok(route)
}

/// Placement of `init` and `fin` on two pendant paths attached to a wall.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WallLayout {
    /// Snake leaves pendant `a` head first and parks head first in pendant `b`.
    Through,
    /// Snake must come back into pendant `a` pointing outward.
    Return,
    /// Goal has its tail at the dead end of `b`, which a snake of length at
    /// least 3 never reaches.
    Reversed,
    /// The head of `init` sits at a dead end; only a snake of length 2 can
    /// turn around there.
    Stuck,
    /// As `Through`, but pendant `b` is not attached to the wall.
    Detached,
}

impl WallLayout {
    pub const ALL: [WallLayout; 5] =
        [WallLayout::Through, WallLayout::Return, WallLayout::Reversed, WallLayout::Stuck, WallLayout::Detached];

    pub fn name(self) -> &'static str {
        match self {
            WallLayout::Through => "through",
            WallLayout::Return => "return",
            WallLayout::Reversed => "reversed",
            WallLayout::Stuck => "stuck",
            WallLayout::Detached => "detached",
        }
    }

    pub fn parse(s: &str) -> Option<WallLayout> {
        WallLayout::ALL.into_iter().find(|l| l.name() == s)
    }
}

/// An elementary `r`-wall with pendant paths `a1…ak` at `1,2` and `b1…bk`
/// at the opposite corner row, and `init`/`fin` on them.
pub fn wall_instance(r: usize, k: usize, layout: WallLayout) -> Result<Instance, WallError> {
    let (cells, edges) = wall_structure(r)?;
    let mut names: Vec<String> = cells.iter().map(|&(i, j)| coord_token(i, j)).collect();
    let mut es: Vec<(String, String)> =
        edges.iter().map(|&((a, b), (c, d))| (coord_token(a, b), coord_token(c, d))).collect();
    let far: Cell = *cells.iter().filter(|c| c.0 == r as u32).max().expect("bottom row");
    for (p, anchor) in [("a", (1, 2)), ("b", far)] {
        let pend: Vec<String> = (1..=k).map(|i| format!("{p}{i}")).collect();
        if !(p == "b" && layout == WallLayout::Detached) {
            es.push((coord_token(anchor.0, anchor.1), pend[0].clone()));
        }
        es.extend(pend.windows(2).map(|w| (w[0].clone(), w[1].clone())));
        names.extend(pend);
    }
    let g = Graph::from_edges(&names, &es).expect("fresh pendant names");
    let pend = |p: &str, rev: bool| -> Vec<String> {
        let mut v: Vec<String> = (1..=k).map(|i| format!("{p}{i}")).collect();
        if rev {
            v.reverse();
        }
        v
    };
    let (init, fin) = match layout {
        WallLayout::Through | WallLayout::Detached => (pend("a", false), pend("b", true)),
        WallLayout::Return => (pend("a", false), pend("a", true)),
        WallLayout::Reversed => (pend("a", false), pend("b", false)),
        WallLayout::Stuck => (pend("a", true), pend("b", true)),
    };
    Ok(Instance::from_names(g, &init, &fin).expect("pendant configurations"))
}

/// One contraction performed by the reduction loop.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contraction {
    pub edge: (String, String),
    pub merged: String,
    /// Offset of the clean subwall tile the edge came from.
    pub tile: (u32, u32),
    pub vertices_after: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IterOutcome {
    Reduced { instance: Instance, step: Contraction },
    NoWall,
    NoCleanTile { tiles: usize },
}

pub const NO_WALL_NOTE: &str =
    "no wall found by the available strategies; this outcome carries no treewidth certificate";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Termination {
    NoWall,
    NoCleanTile { tiles: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwReport {
    pub k: usize,
    pub wall_size: usize,
    pub subwall_size: usize,
    pub steps: Vec<Contraction>,
    pub termination: Termination,
}

impl TwReport {
    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![
            format!("k {}", self.k),
            format!("wall-size {}", self.wall_size),
            format!("subwall-size {}", self.subwall_size),
            format!("contractions {}", self.steps.len()),
        ];
        for (i, s) in self.steps.iter().enumerate() {
            out.push(format!(
                "step {} contract {} {} into {} tile {},{} vertices {}",
                i + 1,
                s.edge.0,
                s.edge.1,
                s.merged,
                s.tile.0,
                s.tile.1,
                s.vertices_after
            ));
        }
        out.push(match &self.termination {
            Termination::NoWall => format!("termination no-wall: {NO_WALL_NOTE}"),
            Termination::NoCleanTile { tiles } => {
                format!("termination no-clean-tile: all {tiles} subwall tiles meet init or fin")
            }
        });
        out
    }
}

/// One round: find a `7k`-wall, choose a clean subwall, contract the
/// smallest host edge on its paths.
pub fn tw_reduce_iter(inst: &Instance, strategy: &WallStrategy) -> Result<IterOutcome, WallError> {
    let k = inst.k;
    let g = &inst.graph;
    let Some(cert) = find_wall(g, 7 * k, strategy)? else {
        return Ok(IterOutcome::NoWall);
    };
    let avoid: BTreeSet<&str> = inst.init.names(g).into_iter().chain(inst.fin.names(g)).collect();
    let clean = match extract_clean_subwall(g, &cert, &avoid, k, subwall_size(k)) {
        Ok(c) => c,
        Err(WallError::NoCleanTile { tiles }) => return Ok(IterOutcome::NoCleanTile { tiles }),
        Err(e) => return Err(e),
    };
    let (a, b) = clean.cert.host_edges()[0];
    let contracted = g.contract_edge_by_name(a, b).expect("certificate edges exist");
    let merged = contracted.graph.name(contracted.new_vertex).to_string();
    let vertices_after = contracted.graph.n();
    let instance = inst.with_graph(contracted.graph).expect("clean subwall avoids init and fin");
    Ok(IterOutcome::Reduced {
        instance,
        step: Contraction { edge: (a.to_string(), b.to_string()), merged, tile: clean.offset, vertices_after },
    })
}

/// Repeats [`tw_reduce_iter`] until no wall (or no clean tile) is found.
///
/// A supplied certificate only describes the input graph, so with the
/// external strategy a certificate invalidated by an earlier contraction
/// ends the loop as if no wall were found.
pub fn tw_reduce(inst: &Instance, strategy: &WallStrategy) -> Result<(Instance, TwReport), WallError> {
    let mut cur = inst.clone();
    let mut steps = Vec::new();
    let termination = loop {
        assert!(steps.len() <= inst.graph.n(), "each contraction removes a vertex");
        let outcome = match tw_reduce_iter(&cur, strategy) {
            Err(WallError::InvalidCertificate(_)) if !steps.is_empty() => IterOutcome::NoWall,
            other => other?,
        };
        match outcome {
            IterOutcome::Reduced { instance, step } => {
                assert_eq!(instance.graph.n() + 1, cur.graph.n());
                cur = instance;
                steps.push(step);
            }
            IterOutcome::NoWall => break Termination::NoWall,
            IterOutcome::NoCleanTile { tiles } => break Termination::NoCleanTile { tiles },
        }
    };
    let report = TwReport { k: inst.k, wall_size: 7 * inst.k, subwall_size: subwall_size(inst.k), steps, termination };
    Ok((cur, report))
}
