//! Label-descending path search and the triplet order of three configurations.

use std::collections::VecDeque;

use crate::graph::{Graph, Vertex};
use crate::snake::Configuration;

/// Vertices of `c`, `c′`, `c″` listed as in the coloring argument:
/// each configuration reversed and concatenated, then the vertices of `c`
/// and `c″` shared with `c′` dropped, then those of `c` shared with `c″`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripletOrder(pub Vec<Vertex>);

pub fn triplet_order(c: &Configuration, c1: &Configuration, c2: &Configuration) -> TripletOrder {
    let mut w: Vec<Vertex> = c
        .vertices()
        .iter()
        .rev()
        .filter(|&&x| !c1.contains(x) && !c2.contains(x))
        .copied()
        .collect();
    w.extend(c1.vertices().iter().rev());
    w.extend(c2.vertices().iter().rev().filter(|&&x| !c1.contains(x)));
    TripletOrder(w)
}

/// Breadth-first search in the graph of edges `x → y` with `pos[y] = pos[x] + 1`.
///
/// `pos[v] = 0` marks vertices outside the label range. Reused across calls
/// so repeated searches allocate nothing.
pub(crate) struct DescentSearch {
    parent: Vec<u32>,
    stamp: Vec<u32>,
    epoch: u32,
    queue: VecDeque<Vertex>,
    pub(crate) leaves: Vec<Vertex>,
}

impl DescentSearch {
    pub(crate) fn new(n: usize) -> Self {
        DescentSearch { parent: vec![u32::MAX; n], stamp: vec![0; n], epoch: 0, queue: VecDeque::new(), leaves: Vec::new() }
    }

    /// Explores from `start`; afterwards `leaves` holds every reached vertex of
    /// position `last`, in discovery order.
    pub(crate) fn run(&mut self, g: &Graph, pos: &[u8], start: Vertex, last: u8) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        self.leaves.clear();
        self.queue.clear();
        self.stamp[start.index()] = self.epoch;
        self.parent[start.index()] = u32::MAX;
        if pos[start.index()] == last {
            self.leaves.push(start);
            return;
        }
        self.queue.push_back(start);
        while let Some(x) = self.queue.pop_front() {
            let want = pos[x.index()] + 1;
            for &y in g.neighbors(x) {
                if pos[y.index()] != want || self.stamp[y.index()] == self.epoch {
                    continue;
                }
                self.stamp[y.index()] = self.epoch;
                self.parent[y.index()] = x.0;
                if want == last {
                    self.leaves.push(y);
                } else {
                    self.queue.push_back(y);
                }
            }
        }
    }

    /// Appends the search-tree path from the start (exclusive) to `v` (inclusive).
    pub(crate) fn append_path(&self, v: Vertex, out: &mut Vec<Vertex>) {
        let from = out.len();
        let mut cur = v.0;
        while cur != u32::MAX {
            out.push(Vertex(cur));
            cur = self.parent[cur as usize];
        }
        out.pop();
        out[from..].reverse();
    }
}

/// A path `(u = w_1, …, w_k = v)` with `f(w_i) = r + k − i`, if one exists.
///
/// `f` holds one label per vertex. Among several such paths the one found
/// first by breadth-first search over sorted adjacency is returned.
pub fn find_labeled_path(g: &Graph, f: &[u16], r: usize, u: Vertex, v: Vertex, k: usize) -> Option<Vec<Vertex>> {
    if u == v || k == 0 || k > u8::MAX as usize {
        return None;
    }
    let top = r + k - 1;
    let pos: Vec<u8> = f
        .iter()
        .map(|&l| {
            let l = l as usize;
            if (r..=top).contains(&l) {
                (top - l + 1) as u8
            } else {
                0
            }
        })
        .collect();
    if pos[u.index()] != 1 || pos[v.index()] != k as u8 {
        return None;
    }
    let mut search = DescentSearch::new(g.n());
    search.run(g, &pos, u, k as u8);
    if !search.leaves.contains(&v) {
        return None;
    }
    let mut path = vec![u];
    search.append_path(v, &mut path);
    Some(path)
}
