//! Undirected simple graphs with string-named vertices.
//!
//! Vertices are stored in lexicographic order of their names, so a [`Vertex`]
//! index compares exactly like the underlying token. Every neighbor list is
//! sorted, which makes all traversal in the crate deterministic.

pub mod grid;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

pub use grid::{is_grid_graph, parse_coord, coord_token, GridError, GridGraph};

/// Index of a vertex inside a [`Graph`]. Ordering matches the name ordering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex(pub u32);

impl Vertex {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("self-loop at `{0}`")]
    SelfLoop(String),
    #[error("edge {{{0}, {1}}} is not present")]
    MissingEdge(String, String),
    #[error("invalid vertex token `{0}`")]
    InvalidToken(String),
    #[error("contracted vertex name `{0}` already exists")]
    NameCollision(String),
}

/// Checks that a token can be written in the line-oriented file formats.
pub fn valid_token(name: &str) -> bool {
    !name.is_empty() && !name.chars().any(|c| c.is_whitespace() || c == '#' || c == ':')
}

#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    names: Vec<String>,
    adj: Vec<Vec<Vertex>>,
    edge_count: usize,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("vertices", &self.names)
            .field("edges", &self.edge_names().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    /// Builds a graph from vertex names and edges given by name.
    ///
    /// Duplicate edges are collapsed; self-loops, unknown endpoints and
    /// duplicate vertex names are rejected.
    pub fn from_edges<S, T>(vertices: &[S], edges: &[(T, T)]) -> Result<Graph, GraphError>
    where
        S: AsRef<str>,
        T: AsRef<str>,
    {
        let mut names: Vec<String> = Vec::with_capacity(vertices.len());
        let mut seen = BTreeSet::new();
        for v in vertices {
            let v = v.as_ref();
            if !valid_token(v) {
                return Err(GraphError::InvalidToken(v.to_string()));
            }
            if !seen.insert(v.to_string()) {
                return Err(GraphError::DuplicateVertex(v.to_string()));
            }
            names.push(v.to_string());
        }
        names.sort();
        let mut builder = Builder::new(names);
        for (a, b) in edges {
            let (a, b) = (a.as_ref(), b.as_ref());
            let ia = builder.lookup(a)?;
            let ib = builder.lookup(b)?;
            if ia == ib {
                return Err(GraphError::SelfLoop(a.to_string()));
            }
            builder.add(ia, ib);
        }
        Ok(builder.finish())
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = Vertex> + '_ {
        (0..self.names.len() as u32).map(Vertex)
    }

    pub fn name(&self, v: Vertex) -> &str {
        &self.names[v.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex(&self, name: &str) -> Option<Vertex> {
        self.names
            .binary_search_by(|probe| probe.as_str().cmp(name))
            .ok()
            .map(|i| Vertex(i as u32))
    }

    pub fn require(&self, name: &str) -> Result<Vertex, GraphError> {
        self.vertex(name).ok_or_else(|| GraphError::UnknownVertex(name.to_string()))
    }

    #[inline]
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v.index()]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v.index()].len()
    }

    #[inline]
    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        let (a, b) = if self.adj[u.index()].len() <= self.adj[v.index()].len() {
            (u, v)
        } else {
            (v, u)
        };
        self.adj[a.index()].binary_search(&b).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.vertices()
            .flat_map(move |u| self.adj[u.index()].iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn edge_names(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.edges().map(move |(u, v)| (self.name(u), self.name(v)))
    }

    pub fn is_connected(&self) -> bool {
        if self.n() == 0 {
            return true;
        }
        let mut seen = vec![false; self.n()];
        let mut stack = vec![Vertex(0)];
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &y in self.neighbors(x) {
                if !seen[y.index()] {
                    seen[y.index()] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count == self.n()
    }

    /// Shortest `s`-`t` path; ties resolved by BFS over sorted adjacency.
    pub fn shortest_path_bfs(&self, s: Vertex, t: Vertex) -> Option<Vec<Vertex>> {
        let mut parent: Vec<Option<Vertex>> = vec![None; self.n()];
        let mut seen = vec![false; self.n()];
        seen[s.index()] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            if x == t {
                let mut path = vec![t];
                let mut cur = t;
                while let Some(p) = parent[cur.index()] {
                    path.push(p);
                    cur = p;
                }
                path.reverse();
                return Some(path);
            }
            for &y in self.neighbors(x) {
                if !seen[y.index()] {
                    seen[y.index()] = true;
                    parent[y.index()] = Some(x);
                    queue.push_back(y);
                }
            }
        }
        None
    }

    /// Name-based variant of [`Graph::shortest_path_bfs`].
    pub fn shortest_path_by_name(&self, s: &str, t: &str) -> Result<Option<Vec<String>>, GraphError> {
        let (s, t) = (self.require(s)?, self.require(t)?);
        Ok(self
            .shortest_path_bfs(s, t)
            .map(|p| p.into_iter().map(|v| self.name(v).to_string()).collect()))
    }

    /// Contracts the edge `{u, v}` into a fresh vertex named `⟨a+b⟩`, where
    /// `a < b` are the endpoint names.
    pub fn contract_edge(&self, u: Vertex, v: Vertex) -> Result<ContractionResult, GraphError> {
        if u == v || !self.has_edge(u, v) {
            return Err(GraphError::MissingEdge(self.name(u).to_string(), self.name(v).to_string()));
        }
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        let merged = format!("⟨{}+{}⟩", self.name(a), self.name(b));
        if self.vertex(&merged).is_some() {
            return Err(GraphError::NameCollision(merged));
        }
        let mut names: Vec<String> = self
            .vertices()
            .filter(|&x| x != a && x != b)
            .map(|x| self.name(x).to_string())
            .collect();
        names.push(merged.clone());
        names.sort();
        let remap = |x: Vertex| -> &str {
            if x == a || x == b {
                merged.as_str()
            } else {
                self.name(x)
            }
        };
        let mut builder = Builder::new(names);
        for (x, y) in self.edges() {
            let (nx, ny) = (remap(x), remap(y));
            if nx == ny {
                continue;
            }
            let ix = builder.lookup(nx).expect("remapped name present");
            let iy = builder.lookup(ny).expect("remapped name present");
            builder.add(ix, iy);
        }
        let graph = builder.finish();
        let new_vertex = graph.vertex(&merged).expect("merged vertex present");
        Ok(ContractionResult {
            graph,
            new_vertex,
            origin: (self.name(a).to_string(), self.name(b).to_string()),
        })
    }

    /// Name-based variant of [`Graph::contract_edge`].
    pub fn contract_edge_by_name(&self, u: &str, v: &str) -> Result<ContractionResult, GraphError> {
        let (iu, iv) = (self.require(u)?, self.require(v)?);
        self.contract_edge(iu, iv)
    }

    /// Adjacency keyed by name, used for comparisons across vertex renumbering.
    pub fn to_name_map(&self) -> BTreeMap<String, BTreeSet<String>> {
        self.vertices()
            .map(|v| {
                (
                    self.name(v).to_string(),
                    self.neighbors(v).iter().map(|&w| self.name(w).to_string()).collect(),
                )
            })
            .collect()
    }
}

/// The graph `G/e` together with the merged vertex and the contracted edge.
#[derive(Clone, Debug)]
pub struct ContractionResult {
    pub graph: Graph,
    pub new_vertex: Vertex,
    pub origin: (String, String),
}

struct Builder {
    names: Vec<String>,
    adj: Vec<Vec<Vertex>>,
}

impl Builder {
    fn new(sorted_names: Vec<String>) -> Self {
        let n = sorted_names.len();
        Builder { names: sorted_names, adj: vec![Vec::new(); n] }
    }

    fn lookup(&self, name: &str) -> Result<Vertex, GraphError> {
        self.names
            .binary_search_by(|p| p.as_str().cmp(name))
            .map(|i| Vertex(i as u32))
            .map_err(|_| GraphError::UnknownVertex(name.to_string()))
    }

    fn add(&mut self, a: Vertex, b: Vertex) {
        self.adj[a.index()].push(b);
        self.adj[b.index()].push(a);
    }

    fn finish(mut self) -> Graph {
        let mut twice = 0;
        for list in &mut self.adj {
            list.sort_unstable();
            list.dedup();
            twice += list.len();
        }
        Graph { names: self.names, adj: self.adj, edge_count: twice / 2 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(vs: &[&str], es: &[(&str, &str)]) -> Graph {
        Graph::from_edges(vs, es).unwrap()
    }

    fn names(gr: &Graph, p: &[Vertex]) -> Vec<String> {
        p.iter().map(|&v| gr.name(v).to_string()).collect()
    }

    #[test]
    fn contract_k4_gives_triangle() {
        let k4 = g(&["a", "b", "c", "d"], &[("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "d")]);
        let r = k4.contract_edge_by_name("a", "b").unwrap();
        assert_eq!(r.graph.n(), 3);
        assert_eq!(r.graph.edge_count(), 3);
        assert_eq!(r.graph.name(r.new_vertex), "⟨a+b⟩");
        assert_eq!(r.origin, ("a".to_string(), "b".to_string()));
    }

    #[test]
    fn contract_path_and_triangle() {
        let path = g(&["a", "b", "c"], &[("a", "b"), ("b", "c")]);
        let r = path.contract_edge_by_name("b", "a").unwrap();
        assert_eq!(r.graph.edge_names().collect::<Vec<_>>(), vec![("c", "⟨a+b⟩")]);

        let tri = g(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("a", "c")]);
        let r = tri.contract_edge_by_name("a", "b").unwrap();
        assert_eq!(r.graph.edge_count(), 1);
        assert_eq!(r.graph.neighbors(r.new_vertex).len(), 1);
    }

    #[test]
    fn contract_missing_edge_rejected() {
        let path = g(&["a", "b", "c"], &[("a", "b"), ("b", "c")]);
        assert!(matches!(path.contract_edge_by_name("a", "c"), Err(GraphError::MissingEdge(..))));
    }

    #[test]
    fn builder_rejects_bad_input() {
        assert!(matches!(Graph::from_edges(&["a", "a"], &[] as &[(&str, &str)]), Err(GraphError::DuplicateVertex(_))));
        assert!(matches!(Graph::from_edges(&["a"], &[("a", "a")]), Err(GraphError::SelfLoop(_))));
        assert!(matches!(Graph::from_edges(&["a"], &[("a", "z")]), Err(GraphError::UnknownVertex(_))));
        assert!(matches!(Graph::from_edges(&["a b"], &[] as &[(&str, &str)]), Err(GraphError::InvalidToken(_))));
        let dup = g(&["a", "b"], &[("a", "b"), ("b", "a")]);
        assert_eq!(dup.edge_count(), 1);
    }

    #[test]
    fn bfs_examples() {
        let path = g(&["a", "b", "c"], &[("a", "b"), ("b", "c")]);
        let p = path.shortest_path_by_name("a", "c").unwrap().unwrap();
        assert_eq!(p, ["a", "b", "c"]);

        let split = g(&["a", "b", "c", "d"], &[("a", "b"), ("c", "d")]);
        assert_eq!(split.shortest_path_by_name("a", "d").unwrap(), None);

        let c4 = g(&["a", "b", "c", "d"], &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")]);
        let (s, t) = (c4.vertex("a").unwrap(), c4.vertex("c").unwrap());
        assert_eq!(names(&c4, &c4.shortest_path_bfs(s, t).unwrap()), ["a", "b", "c"]);
        assert!(c4.shortest_path_by_name("a", "q").is_err());
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        arb_graph_min(2, max_n)
    }

    fn arb_graph_min(min_n: usize, max_n: usize) -> impl Strategy<Value = Graph> {
        (min_n..=max_n).prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
            proptest::collection::vec(proptest::bool::weighted(0.5), pairs.len()).prop_map(move |mask| {
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

    /// Brute-force canonical form: lexicographically least adjacency matrix
    /// over all vertex permutations.
    fn canonical(gr: &Graph) -> Vec<bool> {
        let n = gr.n();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut best: Option<Vec<bool>> = None;
        loop {
            let mut m = vec![false; n * n];
            for (u, v) in gr.edges() {
                let (pu, pv) = (perm[u.index()], perm[v.index()]);
                m[pu * n + pv] = true;
                m[pv * n + pu] = true;
            }
            if best.as_ref().map_or(true, |b| m < *b) {
                best = Some(m);
            }
            // next permutation
            let mut i = n.saturating_sub(1);
            while i > 0 && perm[i - 1] >= perm[i] {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            let mut j = n - 1;
            while perm[j] <= perm[i - 1] {
                j -= 1;
            }
            perm.swap(i - 1, j);
            perm[i..].reverse();
        }
        best.unwrap_or_default()
    }

    proptest! {
        #[test]
        fn contraction_shrinks(gr in arb_graph(8), pick in any::<usize>()) {
            let edges: Vec<_> = gr.edges().collect();
            prop_assume!(!edges.is_empty());
            let (u, v) = edges[pick % edges.len()];
            let r = gr.contract_edge(u, v).unwrap();
            prop_assert_eq!(r.graph.n(), gr.n() - 1);
            prop_assert!(r.graph.edge_count() < gr.edge_count());
            let mut expected: BTreeSet<String> = gr.neighbors(u).iter().chain(gr.neighbors(v))
                .map(|&w| gr.name(w).to_string()).collect();
            expected.remove(gr.name(u));
            expected.remove(gr.name(v));
            let got: BTreeSet<String> = r.graph.neighbors(r.new_vertex).iter()
                .map(|&w| r.graph.name(w).to_string()).collect();
            prop_assert_eq!(got, expected);
            prop_assert!(r.graph.vertex(gr.name(u)).is_none());
        }

        #[test]
        fn disjoint_contractions_commute(gr in arb_graph_min(4, 8), a in any::<usize>(), b in any::<usize>()) {
            let edges: Vec<_> = gr.edges().collect();
            prop_assume!(!edges.is_empty());
            let e1 = edges[a % edges.len()];
            let disjoint: Vec<_> = edges.iter().filter(|e| ![e.0, e.1].iter().any(|x| *x == e1.0 || *x == e1.1)).collect();
            prop_assume!(!disjoint.is_empty());
            let e2 = *disjoint[b % disjoint.len()];
            let n = |g: &Graph, v: Vertex| g.name(v).to_string();
            let first = gr.contract_edge(e1.0, e1.1).unwrap().graph;
            let x = first.contract_edge_by_name(&n(&gr, e2.0), &n(&gr, e2.1)).unwrap().graph;
            let second = gr.contract_edge(e2.0, e2.1).unwrap().graph;
            let y = second.contract_edge_by_name(&n(&gr, e1.0), &n(&gr, e1.1)).unwrap().graph;
            prop_assert_eq!(canonical(&x), canonical(&y));
        }

        #[test]
        fn adjacency_sorted_and_symmetric(gr in arb_graph(8)) {
            for v in gr.vertices() {
                let ns = gr.neighbors(v);
                prop_assert!(ns.windows(2).all(|w| w[0] < w[1]));
                for &w in ns {
                    prop_assert!(w != v);
                    prop_assert!(gr.has_edge(w, v));
                }
            }
        }
    }
}
