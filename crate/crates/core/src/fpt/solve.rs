//! Shortest routes through the generalized sparse configuration graph.

use thiserror::Error;

use super::permuter::{build_permuter, Backend, PermuterError, PermuterFamily, PermuterOptions};
use super::sparse::{
    SparseConfigGraph, SparseContext, DEVIATION_ALL_PAIR_ARCS, DEVIATION_FULL_TERMINAL_CHECK,
    DEVIATION_TERMINAL_INCOMING,
};
use crate::graph::Graph;
use crate::snake::{expand_ell_arc, is_ell_transition, Configuration, Instance, Route, SnakeError, SolveResult};

pub const DEVIATION_ZERO_MOVE_GOAL: &str = "zero-move-goal";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FptOptions {
    pub backend: Backend,
    pub permuter: PermuterOptions,
    /// Worker threads for the family loop; `None` uses the global pool.
    pub workers: Option<usize>,
}

impl FptOptions {
    pub fn new(backend: Backend) -> FptOptions {
        FptOptions { backend, permuter: PermuterOptions::default(), workers: None }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FptError {
    #[error(transparent)]
    Permuter(#[from] PermuterError),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl From<SnakeError> for FptError {
    fn from(e: SnakeError) -> Self {
        FptError::Invariant(e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FptMetadata {
    pub backend: &'static str,
    pub seed: Option<u64>,
    pub family_size: u64,
    pub distinct_colorings: usize,
    pub nodes: usize,
    pub arcs: usize,
    pub terminal_arcs: usize,
    pub deviations: Vec<&'static str>,
    /// Chance that one given window assignment is missed by every member.
    pub miss_probability: f64,
    pub family_note: Option<&'static str>,
}

impl FptMetadata {
    /// `key value` lines, stable across runs.
    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![
            format!("backend {}", self.backend),
            format!("family-size {}", self.family_size),
            format!("distinct-colorings {}", self.distinct_colorings),
            format!("sparse-nodes {}", self.nodes),
            format!("sparse-arcs {}", self.arcs),
            format!("terminal-arcs {}", self.terminal_arcs),
            format!("deviations {}", self.deviations.join(",")),
            format!("miss-probability {:.6e}", self.miss_probability),
        ];
        if let Some(seed) = self.seed {
            out.insert(1, format!("seed {seed}"));
        }
        if let Some(note) = self.family_note {
            out.push(format!("family-note {note}"));
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct FptSolution {
    pub result: SolveResult,
    pub metadata: FptMetadata,
}

/// A family and its projections prepared once per graph; reusable for many
/// `(init, fin)` pairs with the same snake length.
pub struct FptSolver<'g> {
    ctx: SparseContext<'g>,
    backend: Backend,
    family_note: Option<&'static str>,
    miss_probability: f64,
}

impl<'g> FptSolver<'g> {
    pub fn new(graph: &'g Graph, k: usize, opts: &FptOptions) -> Result<FptSolver<'g>, FptError> {
        let fam = build_permuter(graph.n(), 3 * k - 2, opts.backend, &opts.permuter)?;
        Ok(FptSolver::with_family(graph, k, &fam, opts.workers))
    }

    pub fn with_family(graph: &'g Graph, k: usize, fam: &PermuterFamily, workers: Option<usize>) -> FptSolver<'g> {
        FptSolver {
            ctx: SparseContext::new(graph, k, fam, workers),
            backend: fam.backend(),
            family_note: fam.note(),
            miss_probability: fam.miss_probability(),
        }
    }

    pub fn context(&self) -> &SparseContext<'g> {
        &self.ctx
    }

    pub fn solve(&self, init: &Configuration, fin: &Configuration) -> Result<FptSolution, FptError> {
        let g = self.ctx.graph();
        let k = self.ctx.k();
        let sg = self.ctx.generalized_graph(init, fin);
        let mut deviations = vec![DEVIATION_ALL_PAIR_ARCS, DEVIATION_FULL_TERMINAL_CHECK, DEVIATION_TERMINAL_INCOMING];
        let result = if init == fin {
            deviations.push(DEVIATION_ZERO_MOVE_GOAL);
            SolveResult::yes(Route { start: init.clone(), heads: vec![] }, true)
        } else {
            let direct = (1..k).find(|&r| is_ell_transition(init, fin, r).unwrap_or(false));
            let graph_route = shortest_weighted(&sg);
            let route = match (direct, graph_route) {
                (Some(r), Some((d, _))) if r <= d => Some(Route { start: init.clone(), heads: expand_ell_arc(g, init, fin, r)? }),
                (Some(r), None) => Some(Route { start: init.clone(), heads: expand_ell_arc(g, init, fin, r)? }),
                (_, Some((_, arcs))) => Some(expand_path(g, &sg, &arcs)?),
                (None, None) => None,
            };
            match route {
                Some(route) => {
                    let inst = Instance { graph: g.clone(), k, init: init.clone(), fin: fin.clone() };
                    route
                        .check(&inst)
                        .map_err(|e| FptError::Invariant(format!("solver produced an invalid route: {e}")))?;
                    SolveResult::yes(route, false)
                }
                None => SolveResult::no(),
            }
        };
        let seed = match self.backend {
            Backend::MonteCarlo { seed, .. } => Some(seed),
            _ => None,
        };
        let metadata = FptMetadata {
            backend: self.backend.name(),
            seed,
            family_size: self.ctx.family_len(),
            distinct_colorings: self.ctx.distinct_colorings(),
            nodes: sg.nodes.len(),
            arcs: sg.arcs.len(),
            terminal_arcs: sg.terminal_arcs(),
            deviations,
            miss_probability: self.miss_probability,
            family_note: self.family_note,
        };
        Ok(FptSolution { result, metadata })
    }
}

/// Builds the family for `inst`, solves, and self-verifies any route.
pub fn solve_fpt(inst: &Instance, opts: &FptOptions) -> Result<FptSolution, FptError> {
    FptSolver::new(&inst.graph, inst.k, opts)?.solve(&inst.init, &inst.fin)
}

/// Bucket-queue shortest path from `init` to `fin`; returns the distance and
/// the arcs used.
fn shortest_weighted(sg: &SparseConfigGraph) -> Option<(usize, Vec<usize>)> {
    let n = sg.nodes.len();
    let mut out_start = vec![0usize; n + 1];
    for a in &sg.arcs {
        out_start[a.from + 1] += 1;
    }
    for i in 0..n {
        out_start[i + 1] += out_start[i];
    }
    let max_w = sg.arcs.iter().map(|a| a.weight).max().unwrap_or(1);
    let mut dist = vec![usize::MAX; n];
    let mut via = vec![usize::MAX; n];
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); max_w + 1];
    dist[sg.init] = 0;
    buckets[0].push(sg.init);
    let mut pending = 1usize;
    let mut d = 0usize;
    while pending > 0 {
        let slot = d % (max_w + 1);
        let mut frontier = std::mem::take(&mut buckets[slot]);
        frontier.sort_unstable();
        pending -= frontier.len();
        for x in frontier {
            if dist[x] != d {
                continue;
            }
            if x == sg.fin {
                let mut arcs = Vec::new();
                let mut cur = x;
                while via[cur] != usize::MAX {
                    arcs.push(via[cur]);
                    cur = sg.arcs[via[cur]].from;
                }
                arcs.reverse();
                return Some((d, arcs));
            }
            for ai in out_start[x]..out_start[x + 1] {
                let a = sg.arcs[ai];
                let nd = d + a.weight;
                if nd < dist[a.to] {
                    dist[a.to] = nd;
                    via[a.to] = ai;
                    buckets[nd % (max_w + 1)].push(a.to);
                    pending += 1;
                }
            }
        }
        d += 1;
    }
    None
}

fn expand_path(g: &Graph, sg: &SparseConfigGraph, arcs: &[usize]) -> Result<Route, SnakeError> {
    let mut heads = Vec::new();
    for &ai in arcs {
        let a = sg.arcs[ai];
        heads.extend(expand_ell_arc(g, &sg.nodes[a.from], &sg.nodes[a.to], a.weight)?);
    }
    Ok(Route { start: sg.nodes[sg.init].clone(), heads })
}
