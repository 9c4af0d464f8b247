//! Snake configurations, transition predicates and routes.

mod oracle;

use std::fmt;

use thiserror::Error;

use crate::graph::{Graph, Vertex};

pub use oracle::{solve_bfs_oracle, OracleError, OracleOptions, DEFAULT_MAX_STATES};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SnakeError {
    #[error("snake length must be at least 2, got {0}")]
    KTooSmall(usize),
    #[error("configurations have different lengths ({0} and {1})")]
    LengthMismatch(usize, usize),
    #[error("transition length {ell} outside 1..={max}")]
    EllOutOfRange { ell: usize, max: usize },
    #[error("not a configuration: {0}")]
    Invalid(String),
    #[error("arc precondition failed: {0}")]
    NotATransition(String),
}

/// Head-first tuple of distinct vertices forming a path.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration(Vec<Vertex>);

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Conf{:?}", self.0.iter().map(|v| v.0).collect::<Vec<_>>())
    }
}

impl Configuration {
    /// Validated configuration of `g`.
    pub fn new(g: &Graph, vertices: Vec<Vertex>) -> Result<Configuration, SnakeError> {
        check_configuration(g, vertices.len(), &vertices)?;
        Ok(Configuration(vertices))
    }

    pub fn from_names<S: AsRef<str>>(g: &Graph, names: &[S]) -> Result<Configuration, SnakeError> {
        let vs = names
            .iter()
            .map(|n| g.vertex(n.as_ref()).ok_or_else(|| SnakeError::Invalid(format!("unknown vertex `{}`", n.as_ref()))))
            .collect::<Result<Vec<_>, _>>()?;
        Configuration::new(g, vs)
    }

    /// Wraps a tuple without checking it against any graph.
    pub fn from_vertices_unchecked(vertices: Vec<Vertex>) -> Configuration {
        Configuration(vertices)
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    pub fn head(&self) -> Vertex {
        self.0[0]
    }

    pub fn tail(&self) -> Vertex {
        self.0[self.0.len() - 1]
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.contains(&v)
    }

    pub fn names<'g>(&self, g: &'g Graph) -> Vec<&'g str> {
        self.0.iter().map(|&v| g.name(v)).collect()
    }

    /// The configuration after moving the head to `u`.
    pub fn step(&self, u: Vertex) -> Configuration {
        let mut next = Vec::with_capacity(self.0.len());
        next.push(u);
        next.extend_from_slice(&self.0[..self.0.len() - 1]);
        Configuration(next)
    }
}

fn check_configuration(g: &Graph, k: usize, seq: &[Vertex]) -> Result<(), SnakeError> {
    if seq.len() != k {
        return Err(SnakeError::Invalid(format!("expected {k} vertices, got {}", seq.len())));
    }
    if k == 0 {
        return Err(SnakeError::Invalid("empty tuple".into()));
    }
    for (i, &v) in seq.iter().enumerate() {
        if v.index() >= g.n() {
            return Err(SnakeError::Invalid(format!("vertex index {} out of range", v.0)));
        }
        if seq[..i].contains(&v) {
            return Err(SnakeError::Invalid(format!("vertex `{}` repeats", g.name(v))));
        }
        if i > 0 && !g.has_edge(seq[i - 1], v) {
            return Err(SnakeError::Invalid(format!("`{}` and `{}` are not adjacent", g.name(seq[i - 1]), g.name(v))));
        }
    }
    Ok(())
}

/// True iff `seq` has length `k`, distinct vertices and adjacent consecutive pairs.
pub fn validate_configuration(g: &Graph, k: usize, seq: &[Vertex]) -> bool {
    check_configuration(g, k, seq).is_ok()
}

fn same_k(c: &Configuration, d: &Configuration) -> Result<usize, SnakeError> {
    if c.k() != d.k() {
        return Err(SnakeError::LengthMismatch(c.k(), d.k()));
    }
    Ok(c.k())
}

/// A single head move from `c` to `d`.
pub fn is_one_transition(c: &Configuration, d: &Configuration) -> Result<bool, SnakeError> {
    let k = same_k(c, d)?;
    let (v, w) = (c.vertices(), d.vertices());
    Ok(!v[..k - 1].contains(&w[0]) && (1..k).all(|i| w[i] == v[i - 1]))
}

/// Whether `ell` consecutive head moves lead from `c` to `d`, for `1 <= ell <= k-1`.
pub fn is_ell_transition(c: &Configuration, d: &Configuration, ell: usize) -> Result<bool, SnakeError> {
    let k = same_k(c, d)?;
    if ell == 0 || ell >= k {
        return Err(SnakeError::EllOutOfRange { ell, max: k - 1 });
    }
    Ok(ell_transition_unchecked(c.vertices(), d.vertices(), ell))
}

#[inline]
pub(crate) fn ell_transition_unchecked(v: &[Vertex], w: &[Vertex], ell: usize) -> bool {
    let k = v.len();
    // 1-based: w_i not in v_1..v_{k+i-ell-1} for i <= ell; w_i = v_{i-ell} otherwise.
    (ell..k).all(|i| w[i] == v[i - ell]) && (0..ell).all(|i| !v[..k + i - ell].contains(&w[i]))
}

/// The `(k-1)`-step special case, checked without the length bookkeeping.
pub fn is_km1_transition(c: &Configuration, d: &Configuration) -> bool {
    if c.k() != d.k() || c.k() < 2 {
        return false;
    }
    let (v, w) = (c.vertices(), d.vertices());
    let k = v.len();
    w[k - 1] == v[0] && (0..k - 1).all(|i| !v[..=i].contains(&w[i]))
}

/// Every configuration of length `k` in `g`, in lexicographic order.
pub fn all_configurations(g: &Graph, k: usize) -> Vec<Configuration> {
    fn extend(g: &Graph, k: usize, cur: &mut Vec<Vertex>, out: &mut Vec<Configuration>) {
        if cur.len() == k {
            out.push(Configuration(cur.clone()));
            return;
        }
        let last = *cur.last().expect("non-empty prefix");
        for &w in g.neighbors(last) {
            if !cur.contains(&w) {
                cur.push(w);
                extend(g, k, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    if k == 0 {
        return out;
    }
    for v in g.vertices() {
        extend(g, k, &mut vec![v], &mut out);
    }
    out
}

/// Vertices the head may move to: `N(v_1)` minus `v_1..v_{k-1}`.
pub fn head_neighbors(g: &Graph, c: &Configuration) -> Vec<Vertex> {
    let body = &c.vertices()[..c.k() - 1];
    g.neighbors(c.head()).iter().copied().filter(|u| !body.contains(u)).collect()
}

pub fn successors(g: &Graph, c: &Configuration) -> Vec<Configuration> {
    head_neighbors(g, c).into_iter().map(|u| c.step(u)).collect()
}

/// Heads `(w_ell, ..., w_1)` that realize an `ell`-transition from `c` to `d`,
/// with every intermediate configuration checked against `g`.
pub fn expand_ell_arc(g: &Graph, c: &Configuration, d: &Configuration, ell: usize) -> Result<Vec<Vertex>, SnakeError> {
    if !is_ell_transition(c, d, ell)? {
        return Err(SnakeError::NotATransition(format!("not a {ell}-transition")));
    }
    let heads: Vec<Vertex> = d.vertices()[..ell].iter().rev().copied().collect();
    let mut cur = c.clone();
    for &h in &heads {
        let next = cur.step(h);
        if !is_one_transition(&cur, &next)? || !validate_configuration(g, next.k(), next.vertices()) {
            return Err(SnakeError::NotATransition("intermediate configuration invalid".into()));
        }
        cur = next;
    }
    if &cur != d {
        return Err(SnakeError::NotATransition("replay does not end at the target".into()));
    }
    Ok(heads)
}

/// Head sequence for a `(k-1)`-transition.
pub fn expand_km1_arc(g: &Graph, c: &Configuration, d: &Configuration) -> Result<Vec<Vertex>, SnakeError> {
    if !is_km1_transition(c, d) {
        return Err(SnakeError::NotATransition("not a (k-1)-transition".into()));
    }
    expand_ell_arc(g, c, d, c.k() - 1)
}

/// A solving problem: move the snake of length `k` from `init` to `fin`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub graph: Graph,
    pub k: usize,
    pub init: Configuration,
    pub fin: Configuration,
}

impl Instance {
    pub fn new(graph: Graph, k: usize, init: Configuration, fin: Configuration) -> Result<Instance, SnakeError> {
        if k < 2 {
            return Err(SnakeError::KTooSmall(k));
        }
        check_configuration(&graph, k, init.vertices()).map_err(|e| SnakeError::Invalid(format!("init: {e}")))?;
        check_configuration(&graph, k, fin.vertices()).map_err(|e| SnakeError::Invalid(format!("fin: {e}")))?;
        Ok(Instance { graph, k, init, fin })
    }

    pub fn from_names<S: AsRef<str>>(graph: Graph, init: &[S], fin: &[S]) -> Result<Instance, SnakeError> {
        let k = init.len();
        if k < 2 {
            return Err(SnakeError::KTooSmall(k));
        }
        let i = Configuration::from_names(&graph, init).map_err(|e| SnakeError::Invalid(format!("init: {e}")))?;
        let f = Configuration::from_names(&graph, fin).map_err(|e| SnakeError::Invalid(format!("fin: {e}")))?;
        Instance::new(graph, k, i, f)
    }

    /// Re-resolves `init` and `fin` by name in another graph (after contraction).
    pub fn with_graph(&self, graph: Graph) -> Result<Instance, SnakeError> {
        let init = self.init.names(&self.graph);
        let fin = self.fin.names(&self.graph);
        Instance::from_names(graph, &init, &fin)
    }
}

/// A start configuration and one head vertex per move.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Route {
    pub start: Configuration,
    pub heads: Vec<Vertex>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("step {step}: {reason}")]
pub struct RouteError {
    /// 1-based index of the failing move; 0 refers to the start configuration.
    pub step: usize,
    pub reason: String,
}

impl Route {
    pub fn len(&self) -> usize {
        self.heads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heads.is_empty()
    }

    /// Replays the route, returning every configuration visited.
    pub fn replay(&self, g: &Graph) -> Result<Vec<Configuration>, RouteError> {
        if !validate_configuration(g, self.start.k(), self.start.vertices()) {
            return Err(RouteError { step: 0, reason: "start is not a configuration".into() });
        }
        let mut out = vec![self.start.clone()];
        for (i, &h) in self.heads.iter().enumerate() {
            let cur = out.last().expect("non-empty");
            if h.index() >= g.n() {
                return Err(RouteError { step: i + 1, reason: format!("vertex {} out of range", h.0) });
            }
            if !g.has_edge(cur.head(), h) {
                return Err(RouteError {
                    step: i + 1,
                    reason: format!("`{}` is not adjacent to the head `{}`", g.name(h), g.name(cur.head())),
                });
            }
            if cur.vertices()[..cur.k() - 1].contains(&h) {
                return Err(RouteError { step: i + 1, reason: format!("`{}` is occupied by the body", g.name(h)) });
            }
            out.push(cur.step(h));
        }
        Ok(out)
    }

    /// Checks the route against an instance and reports the first failure.
    pub fn check(&self, inst: &Instance) -> Result<(), RouteError> {
        if self.start != inst.init {
            return Err(RouteError { step: 0, reason: "route does not start at init".into() });
        }
        let confs = self.replay(&inst.graph)?;
        if confs.last() != Some(&inst.fin) {
            return Err(RouteError { step: self.heads.len(), reason: "route does not end at fin".into() });
        }
        Ok(())
    }
}

/// True iff `r` starts at `init`, every move is legal and it ends at `fin`.
pub fn verify_route(inst: &Instance, r: &Route) -> bool {
    r.check(inst).is_ok()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    Yes,
    No,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    pub decision: Decision,
    pub shortest_length: Option<usize>,
    pub route: Option<Route>,
    /// Set when `init = fin`, answered with a zero-move route.
    pub zero_move_goal: bool,
}

impl SolveResult {
    pub fn yes(route: Route, zero_move_goal: bool) -> SolveResult {
        SolveResult { decision: Decision::Yes, shortest_length: Some(route.len()), route: Some(route), zero_move_goal }
    }

    pub fn no() -> SolveResult {
        SolveResult { decision: Decision::No, shortest_length: None, route: None, zero_move_goal: false }
    }

    pub fn is_yes(&self) -> bool {
        self.decision == Decision::Yes
    }
}
