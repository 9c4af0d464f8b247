//! Sparse configuration graphs built from a coloring family.
//!
//! Only labels `k..=2k-1` influence which labeled paths exist, so members are
//! first projected to a *position* per vertex (`2k - label`, or 0 outside the
//! range) and deduplicated. Distinct projections yield exactly the same node
//! and arc sets as iterating the raw family.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rayon::prelude::*;

use super::labeled::DescentSearch;
use super::permuter::PermuterFamily;
use crate::graph::{Graph, Vertex};
use crate::snake::{ell_transition_unchecked, is_km1_transition, Configuration};

/// Deviations from the literal construction, reported with every solve.
pub const DEVIATION_ALL_PAIR_ARCS: &str = "arc-pass-all-pairs";
pub const DEVIATION_FULL_TERMINAL_CHECK: &str = "terminal-arc-full-check";
pub const DEVIATION_TERMINAL_INCOMING: &str = "terminal-node-incoming-arcs";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SparseArc {
    pub from: usize,
    pub to: usize,
    /// Number of single moves the arc stands for.
    pub weight: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseConfigGraph {
    pub k: usize,
    /// Sorted and deduplicated; always contains `init` and `fin`.
    pub nodes: Vec<Configuration>,
    /// Sorted by `(from, to, weight)`.
    pub arcs: Vec<SparseArc>,
    pub init: usize,
    pub fin: usize,
}

impl SparseConfigGraph {
    pub fn terminal_arcs(&self) -> usize {
        self.arcs.iter().filter(|a| a.weight < self.k - 1).count()
    }

    /// Text dump used for golden comparisons between runs.
    pub fn render(&self, g: &Graph) -> String {
        let mut s = format!("k {}\nnodes {}\n", self.k, self.nodes.len());
        for c in &self.nodes {
            s.push_str(&c.names(g).join(" "));
            s.push('\n');
        }
        s.push_str(&format!("arcs {}\n", self.arcs.len()));
        for a in &self.arcs {
            s.push_str(&format!("{} {} {}\n", a.from, a.to, a.weight));
        }
        s
    }
}

/// Distinct position vectors of a family, restricted to useful ones.
#[derive(Clone, Debug)]
pub struct ProjectedColorings {
    n: usize,
    data: Vec<u8>,
}

impl ProjectedColorings {
    pub fn len(&self) -> usize {
        self.data.len().checked_div(self.n).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, i: usize) -> &[u8] {
        &self.data[i * self.n..(i + 1) * self.n]
    }
}

/// Runs `f` on a dedicated pool when a worker count is given.
pub(crate) fn with_workers<R: Send>(workers: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .expect("thread pool")
            .install(f),
        None => f(),
    }
}

/// Projects every member to positions and keeps the distinct useful ones,
/// sorted lexicographically.
pub fn project_family(fam: &PermuterFamily, k: usize) -> ProjectedColorings {
    let n = fam.domain();
    let chunk = fam.chunk_size();
    let chunks = fam.len().div_ceil(chunk);
    let hi = (2 * k - 1) as u16;
    let lo = k as u16;
    let useful = |p: &[u8]| p.contains(&1) && p.contains(&(k as u8));
    let sets: Vec<HashSet<Box<[u8]>>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut set: HashSet<Box<[u8]>> = HashSet::new();
            let mut pos = vec![0u8; n];
            fam.for_each(c * chunk..(c + 1) * chunk, |_, labels| {
                for (p, &l) in pos.iter_mut().zip(labels) {
                    *p = if (lo..=hi).contains(&l) { (2 * k as u16 - l) as u8 } else { 0 };
                }
                if useful(&pos) && !set.contains(pos.as_slice()) {
                    set.insert(pos.as_slice().into());
                }
            });
            set
        })
        .collect();
    let mut all: Vec<Box<[u8]>> = sets.into_iter().flatten().collect();
    all.sort_unstable();
    all.dedup();
    ProjectedColorings { n, data: all.concat() }
}

/// Coloring-dependent data shared by every `(init, fin)` pair on one graph.
#[derive(Debug)]
pub struct SparseContext<'g> {
    graph: &'g Graph,
    k: usize,
    family_len: u64,
    colorings: ProjectedColorings,
    /// Labeled paths found by the Algorithm-1 loop, sorted.
    paths: Vec<Configuration>,
    workers: Option<usize>,
}

impl<'g> SparseContext<'g> {
    pub fn new(graph: &'g Graph, k: usize, fam: &PermuterFamily, workers: Option<usize>) -> SparseContext<'g> {
        assert_eq!(fam.domain(), graph.n(), "family domain must match the graph");
        assert!(k >= 2 && k < u8::MAX as usize, "unsupported snake length {k}");
        with_workers(workers, || {
            let colorings = project_family(fam, k);
            let paths = labeled_paths(graph, k, &colorings);
            SparseContext { graph, k, family_len: fam.len(), colorings, paths, workers }
        })
    }

    pub fn distinct_colorings(&self) -> usize {
        self.colorings.len()
    }

    pub fn family_len(&self) -> u64 {
        self.family_len
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    /// Sparse graph: labeled paths plus `init` and `fin`, with every
    /// `(k-1)`-transition between them as an arc.
    pub fn sparse_graph(&self, init: &Configuration, fin: &Configuration) -> SparseConfigGraph {
        let base: BTreeSet<Configuration> =
            self.paths.iter().cloned().chain([init.clone(), fin.clone()]).collect();
        with_workers(self.workers, || self.assemble(base, BTreeMap::new(), init, fin))
    }

    /// Generalized graph: the sparse graph plus terminal nodes with weight-`s` arcs into `fin`.
    pub fn generalized_graph(&self, init: &Configuration, fin: &Configuration) -> SparseConfigGraph {
        let base: BTreeSet<Configuration> =
            self.paths.iter().cloned().chain([init.clone(), fin.clone()]).collect();
        with_workers(self.workers, || {
            let terminals = terminal_candidates(self.graph, self.k, &self.colorings, fin);
            self.assemble(base, terminals, init, fin)
        })
    }

    fn assemble(
        &self,
        base: BTreeSet<Configuration>,
        terminals: BTreeMap<Configuration, Vec<usize>>,
        init: &Configuration,
        fin: &Configuration,
    ) -> SparseConfigGraph {
        let k = self.k;
        let mut all = base.clone();
        all.extend(terminals.keys().cloned());
        let nodes: Vec<Configuration> = all.into_iter().collect();
        let id = |c: &Configuration| nodes.binary_search(c).expect("node present");
        let mut by_tail: BTreeMap<Vertex, Vec<usize>> = BTreeMap::new();
        for (i, c) in nodes.iter().enumerate() {
            by_tail.entry(c.tail()).or_default().push(i);
        }
        let in_base: Vec<bool> = nodes.iter().map(|c| base.contains(c)).collect();
        let fin_id = id(fin);
        let mut arcs: Vec<SparseArc> = (0..nodes.len())
            .into_par_iter()
            .flat_map_iter(|from| {
                let c = &nodes[from];
                let targets = by_tail.get(&c.head()).map(Vec::as_slice).unwrap_or(&[]);
                let mut out = Vec::new();
                for &to in targets {
                    // Base-to-base arcs, plus arcs from any node into a new terminal node.
                    let allowed = in_base[to] && in_base[from] || !in_base[to];
                    if allowed && is_km1_transition(c, &nodes[to]) {
                        out.push(SparseArc { from, to, weight: k - 1 });
                    }
                }
                if let Some(ss) = terminals.get(c) {
                    out.extend(ss.iter().map(|&s| SparseArc { from, to: fin_id, weight: s }));
                }
                out
            })
            .collect();
        arcs.sort_unstable();
        arcs.dedup();
        let graph = SparseConfigGraph { k, init: id(init), fin: fin_id, nodes, arcs };
        self.assert_size_bound(&graph);
        graph
    }

    fn assert_size_bound(&self, g: &SparseConfigGraph) {
        let n = self.graph.n() as u128;
        let bound = 2 + self.family_len as u128 * n * n.saturating_sub(1);
        assert!(
            g.nodes.len() as u128 <= bound,
            "sparse graph has {} nodes, above the bound {bound}",
            g.nodes.len()
        );
    }
}

/// One labeled path for every `(coloring, u, v)` with positions `1..=k`.
fn labeled_paths(g: &Graph, k: usize, colorings: &ProjectedColorings) -> Vec<Configuration> {
    let per_chunk: Vec<Vec<Configuration>> = (0..colorings.len())
        .collect::<Vec<_>>()
        .par_chunks(256)
        .map(|idx| {
            let mut search = DescentSearch::new(g.n());
            let mut out = Vec::new();
            for &i in idx {
                let pos = colorings.get(i);
                for u in g.vertices().filter(|u| pos[u.index()] == 1) {
                    search.run(g, pos, u, k as u8);
                    for &v in &search.leaves {
                        let mut path = Vec::with_capacity(k);
                        path.push(u);
                        search.append_path(v, &mut path);
                        out.push(Configuration::from_vertices_unchecked(path));
                    }
                }
            }
            out.sort_unstable();
            out.dedup();
            out
        })
        .collect();
    let set: BTreeSet<Configuration> = per_chunk.into_iter().flatten().collect();
    set.into_iter().collect()
}

/// Terminal paths whose first `k-s` vertices are `fin`'s last `k-s`
/// vertices and which reach `fin` in exactly `s` moves.
fn terminal_candidates(
    g: &Graph,
    k: usize,
    colorings: &ProjectedColorings,
    fin: &Configuration,
) -> BTreeMap<Configuration, Vec<usize>> {
    let f = fin.vertices();
    let found: Vec<(Configuration, usize)> = (0..colorings.len())
        .collect::<Vec<_>>()
        .par_chunks(256)
        .map(|idx| {
            let mut search = DescentSearch::new(g.n());
            let mut out = Vec::new();
            for &i in idx {
                let pos = colorings.get(i);
                for s in 1..k.saturating_sub(1) {
                    // w_a = f_{a+s} must carry position a, for a = 1..=k-s.
                    if !(s..k).all(|j| pos[f[j].index()] as usize == j - s + 1) {
                        continue;
                    }
                    search.run(g, pos, f[k - 1], k as u8);
                    for &v in &search.leaves {
                        let mut path: Vec<Vertex> = f[s..].to_vec();
                        search.append_path(v, &mut path);
                        if ell_transition_unchecked(&path, f, s) {
                            out.push((Configuration::from_vertices_unchecked(path), s));
                        }
                    }
                }
            }
            out
        })
        .flatten_iter()
        .collect();
    let mut map: BTreeMap<Configuration, Vec<usize>> = BTreeMap::new();
    for (c, s) in found {
        map.entry(c).or_default().push(s);
    }
    for ss in map.values_mut() {
        ss.sort_unstable();
        ss.dedup();
    }
    map
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpt::permuter::{build_permuter, Backend, PermuterOptions};
    use crate::snake::tests::{conf, graph, k4};
    use crate::snake::{all_configurations, is_ell_transition, validate_configuration};
    use proptest::prelude::*;

    fn exhaustive(g: &Graph, k: usize) -> PermuterFamily {
        build_permuter(g.n(), 3 * k - 2, Backend::Exhaustive, &PermuterOptions::default()).unwrap()
    }

    /// The sparse graph built literally over every raw family member, without projection.
    fn literal_paths(g: &Graph, k: usize, fam: &PermuterFamily) -> BTreeSet<Configuration> {
        let mut out = BTreeSet::new();
        fam.for_each(0..fam.len(), |_, f| {
            for u in g.vertices() {
                for v in g.vertices() {
                    if let Some(p) = crate::fpt::find_labeled_path(g, f, k, u, v, k) {
                        out.insert(Configuration::from_vertices_unchecked(p));
                    }
                }
            }
        });
        out
    }

    fn well_formed(g: &Graph, sg: &SparseConfigGraph, fin: &Configuration) {
        for c in &sg.nodes {
            assert!(validate_configuration(g, sg.k, c.vertices()));
        }
        for a in &sg.arcs {
            let (x, y) = (&sg.nodes[a.from], &sg.nodes[a.to]);
            if a.weight == sg.k - 1 {
                assert!(is_km1_transition(x, y));
            } else {
                assert_eq!(y, fin);
                assert!(is_ell_transition(x, y, a.weight).unwrap());
            }
        }
        assert!(sg.nodes.windows(2).all(|w| w[0] < w[1]));
        assert!(sg.arcs.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn single_edge_graph() {
        let g = graph(&["a", "b"], &[("a", "b")]);
        let fam = exhaustive(&g, 2);
        let ctx = SparseContext::new(&g, 2, &fam, None);
        let (i, f) = (conf(&g, &["a", "b"]), conf(&g, &["b", "a"]));
        let sg = ctx.sparse_graph(&i, &f);
        assert!(sg.arcs.contains(&SparseArc { from: sg.init, to: sg.fin, weight: 1 }));
        assert_eq!(ctx.generalized_graph(&i, &f), sg);
        well_formed(&g, &sg, &f);
    }

    #[test]
    fn k4_arc_through_shared_tail() {
        let g = k4();
        let fam = exhaustive(&g, 3);
        let ctx = SparseContext::new(&g, 3, &fam, None);
        let (x, y) = (conf(&g, &["a", "b", "c"]), conf(&g, &["c", "d", "a"]));
        let sg = ctx.sparse_graph(&x, &conf(&g, &["d", "c", "b"]));
        let (ix, iy) = (sg.nodes.binary_search(&x).unwrap(), sg.nodes.binary_search(&y).unwrap());
        assert!(sg.arcs.contains(&SparseArc { from: ix, to: iy, weight: 2 }));
        // All 24 configurations of K4 are labeled paths for some member.
        assert_eq!(sg.nodes.len(), 24);
    }

    /// Hand enumeration on the 4-cycle a-b-c-d-a with fin = (a, b, c):
    /// the only configuration one move before fin is (b, c, d), whose
    /// prefix (b, c) equals fin's suffix.
    #[test]
    fn four_cycle_terminal_arc() {
        let g = graph(&["a", "b", "c", "d"], &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")]);
        let fam = exhaustive(&g, 3);
        let ctx = SparseContext::new(&g, 3, &fam, None);
        let fin = conf(&g, &["a", "b", "c"]);
        let init = conf(&g, &["c", "d", "a"]);
        let sg = ctx.generalized_graph(&init, &fin);
        let p = conf(&g, &["b", "c", "d"]);
        let ip = sg.nodes.binary_search(&p).unwrap();
        assert!(sg.arcs.contains(&SparseArc { from: ip, to: sg.fin, weight: 1 }));
        assert_eq!(sg.terminal_arcs(), 1);
        well_formed(&g, &sg, &fin);
    }

    #[test]
    fn projection_matches_literal_loop() {
        let c4 = graph(&["a", "b", "c", "d"], &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")]);
        let paw = graph(&["a", "b", "c", "d"], &[("a", "b"), ("b", "c"), ("a", "c"), ("c", "d")]);
        for g in [k4(), c4, paw] {
            for k in [2, 3] {
                let fam = exhaustive(&g, k);
                let ctx = SparseContext::new(&g, k, &fam, None);
                let literal: Vec<Configuration> = literal_paths(&g, k, &fam).into_iter().collect();
                assert_eq!(ctx.paths, literal);
            }
        }
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let g = graph(
            &["a", "b", "c", "d", "e"],
            &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "a"), ("a", "c")],
        );
        let fam = build_permuter(5, 7, Backend::MonteCarlo { seed: 5, samples: Some(20_000) }, &PermuterOptions::default()).unwrap();
        let (i, f) = (conf(&g, &["a", "b", "c"]), conf(&g, &["c", "d", "e"]));
        let dumps: Vec<String> = [1, 2, 3]
            .iter()
            .map(|&w| SparseContext::new(&g, 3, &fam, Some(w)).generalized_graph(&i, &f).render(&g))
            .collect();
        assert_eq!(dumps[0], dumps[1]);
        assert_eq!(dumps[0], dumps[2]);
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (3usize..=5).prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
            proptest::collection::vec(proptest::bool::weighted(0.6), pairs.len()).prop_map(move |mask| {
                let vs: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
                let es: Vec<(String, String)> = pairs
                    .iter()
                    .zip(&mask)
                    .filter(|(_, &m)| m)
                    .map(|(&(i, j), _)| (vs[i].clone(), vs[j].clone()))
                    .collect();
                Graph::from_edges(&vs, &es).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn built_graphs_are_well_formed(g in arb_graph(), k in 2usize..=3, a in any::<usize>(), b in any::<usize>()) {
            let confs = all_configurations(&g, k);
            prop_assume!(!confs.is_empty());
            let (i, f) = (&confs[a % confs.len()], &confs[b % confs.len()]);
            let fam = exhaustive(&g, k);
            let ctx = SparseContext::new(&g, k, &fam, None);
            let sg = ctx.generalized_graph(i, f);
            well_formed(&g, &sg, f);
            // A rebuild reproduces the same graph.
            prop_assert_eq!(SparseContext::new(&g, k, &fam, None).generalized_graph(i, f), sg);
        }
    }
}
