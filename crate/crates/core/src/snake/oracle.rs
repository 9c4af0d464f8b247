//! Breadth-first search over the explicit configuration space.

use std::collections::HashMap;

use thiserror::Error;

use super::{Configuration, Instance, Route, SolveResult};
use crate::graph::Vertex;

pub const DEFAULT_MAX_STATES: usize = 20_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleOptions {
    /// Stop with [`OracleError::CapExceeded`] instead of searching deeper.
    pub step_cap: Option<usize>,
    pub max_states: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { step_cap: None, max_states: DEFAULT_MAX_STATES }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("step cap {cap} exceeded before the search finished")]
    CapExceeded { cap: usize },
    #[error("state budget of {limit} configurations exhausted")]
    StateBudget { limit: usize },
}

/// Exact shortest route from `init` to `fin`, or `No` if none exists.
pub fn solve_bfs_oracle(inst: &Instance, opts: &OracleOptions) -> Result<SolveResult, OracleError> {
    if inst.init == inst.fin {
        return Ok(SolveResult::yes(Route { start: inst.init.clone(), heads: vec![] }, true));
    }
    let g = &inst.graph;
    let k = inst.k;
    let mut arena: Vec<Vertex> = inst.init.vertices().to_vec();
    let mut parent: Vec<u32> = vec![u32::MAX];
    let mut index: HashMap<Box<[Vertex]>, u32> = HashMap::new();
    index.insert(inst.init.vertices().into(), 0);
    let target = inst.fin.vertices();

    let mut frontier_start = 0usize;
    let mut depth = 0usize;
    let mut next = vec![Vertex(0); k];
    loop {
        let frontier_end = parent.len();
        if frontier_start == frontier_end {
            return Ok(SolveResult::no());
        }
        if let Some(cap) = opts.step_cap {
            if depth >= cap {
                return Err(OracleError::CapExceeded { cap });
            }
        }
        for s in frontier_start..frontier_end {
            let head = arena[s * k];
            for &u in g.neighbors(head) {
                let cur = &arena[s * k..(s + 1) * k];
                if cur[..k - 1].contains(&u) {
                    continue;
                }
                next[0] = u;
                next[1..].copy_from_slice(&cur[..k - 1]);
                if index.contains_key(next.as_slice()) {
                    continue;
                }
                if parent.len() >= opts.max_states {
                    return Err(OracleError::StateBudget { limit: opts.max_states });
                }
                let id = parent.len() as u32;
                index.insert(next.as_slice().into(), id);
                arena.extend_from_slice(&next);
                parent.push(s as u32);
                if next.as_slice() == target {
                    return Ok(SolveResult::yes(reconstruct(&arena, &parent, k, id, &inst.init), false));
                }
            }
        }
        frontier_start = frontier_end;
        depth += 1;
    }
}

fn reconstruct(arena: &[Vertex], parent: &[u32], k: usize, last: u32, init: &Configuration) -> Route {
    let mut heads = Vec::new();
    let mut cur = last;
    while cur != 0 {
        heads.push(arena[cur as usize * k]);
        cur = parent[cur as usize];
    }
    heads.reverse();
    Route { start: init.clone(), heads }
}
