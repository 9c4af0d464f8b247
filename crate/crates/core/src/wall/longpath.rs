//! Exhaustive check that every vertex pair of a graph is joined by a long
//! simple path (a long cycle when both ends coincide).

use std::collections::VecDeque;

use rayon::prelude::*;

use crate::graph::{Graph, Vertex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LongPathFailure {
    pub s: String,
    pub t: String,
}

/// Pairs `(s, t)` with no simple `s`-`t` path on at least `k` vertices; for
/// `s = t` the requirement is a simple cycle through `s` on at least
/// `max(k, 3)` vertices. Sorted by `(s, t)` indices.
pub fn long_path_violations(g: &Graph, k: usize) -> Vec<LongPathFailure> {
    let n = g.n();
    let ok: Vec<Vec<bool>> = (0..n as u32).into_par_iter().map(|s| reach_from(g, Vertex(s), k)).collect();
    let mut out = Vec::new();
    for (s, row) in ok.iter().enumerate() {
        for (t, &good) in row.iter().enumerate() {
            if !good {
                out.push(LongPathFailure { s: g.name(Vertex(s as u32)).into(), t: g.name(Vertex(t as u32)).into() });
            }
        }
    }
    out
}

/// Marks every `t` that `s` reaches by a long path. A long path has a
/// prefix of exactly `m` vertices, and `t` is either that prefix's end or
/// reachable from it while avoiding the rest of the prefix; the same holds
/// for cycles with `t` replaced by any neighbor of `s`.
fn reach_from(g: &Graph, s: Vertex, k: usize) -> Vec<bool> {
    let n = g.n();
    let mut ok = vec![false; n];
    let mut on_path = vec![false; n];
    let mut prefix = vec![s];
    on_path[s.index()] = true;
    let (m, mc) = (k.max(1), k.max(3));
    let depth = m.max(mc);
    // stack[i] is the next neighbor of prefix[i] to try.
    let mut stack: Vec<usize> = vec![0];
    visit(g, m, mc, &prefix, &on_path, &mut ok);
    loop {
        let len = prefix.len();
        let nbrs = g.neighbors(prefix[len - 1]);
        let i = stack[len - 1];
        let next = if len < depth { nbrs[i..].iter().position(|w| !on_path[w.index()]).map(|p| i + p) } else { None };
        match next {
            Some(j) => {
                stack[len - 1] = j + 1;
                on_path[nbrs[j].index()] = true;
                prefix.push(nbrs[j]);
                stack.push(0);
                visit(g, m, mc, &prefix, &on_path, &mut ok);
            }
            None => {
                let w = prefix.pop().expect("non-empty");
                on_path[w.index()] = false;
                stack.pop();
                if prefix.is_empty() {
                    break;
                }
            }
        }
    }
    ok
}

fn visit(g: &Graph, m: usize, mc: usize, prefix: &[Vertex], on_path: &[bool], ok: &mut [bool]) {
    if prefix.len() == m {
        mark_paths(g, prefix, on_path, ok);
    }
    if prefix.len() == mc {
        mark_cycle(g, prefix, on_path, ok);
    }
}

fn mark_paths(g: &Graph, prefix: &[Vertex], on_path: &[bool], ok: &mut [bool]) {
    let end = *prefix.last().expect("non-empty");
    for v in bfs(g, end, on_path) {
        if v != prefix[0] {
            ok[v.index()] = true;
        }
    }
}

fn mark_cycle(g: &Graph, prefix: &[Vertex], on_path: &[bool], ok: &mut [bool]) {
    let s = prefix[0];
    if ok[s.index()] {
        return;
    }
    let end = *prefix.last().expect("non-empty");
    let reached = bfs(g, end, on_path);
    // The prefix has at least three vertices, so any reached neighbor of s closes a cycle.
    if reached.iter().any(|&v| g.has_edge(v, s)) {
        ok[s.index()] = true;
    }
}

/// Vertices reachable from `start` without entering `blocked`, including `start`.
fn bfs(g: &Graph, start: Vertex, blocked: &[bool]) -> Vec<Vertex> {
    let mut seen = vec![false; g.n()];
    seen[start.index()] = true;
    let mut out = vec![start];
    let mut q = VecDeque::from([start]);
    while let Some(x) = q.pop_front() {
        for &y in g.neighbors(x) {
            if !blocked[y.index()] && !seen[y.index()] {
                seen[y.index()] = true;
                out.push(y);
                q.push_back(y);
            }
        }
    }
    out
}
