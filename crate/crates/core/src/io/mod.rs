//! Line-oriented text formats: instances, routes, wall certificates and grid
//! inputs, plus frame rendering of routes on grid instances.

mod render;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::graph::{coord_token, is_grid_graph, parse_coord, valid_token, Graph, GraphError, GridGraph};
use crate::snake::{validate_configuration, Configuration, Instance, Route};
use crate::wall::{wall_structure, Cell, WallCertificate};

pub use render::{render_frames, Frame, RenderError, RenderFormat};

pub const INSTANCE_HEADER: &str = "snake-instance v1";
pub const ROUTE_HEADER: &str = "snake-route v1";
pub const CERTIFICATE_HEADER: &str = "wall-certificate v1";
pub const GRID_HEADER: &str = "snake-grid v1";

/// A diagnostic tied to a 1-based line number (0 when the file as a whole is at fault).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, message: message.into() })
}

/// Hex SHA-256 of `bytes`, used in provenance comments.
pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Non-blank, non-comment lines with their 1-based numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn expect_header<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>, header: &str) -> Result<(), ParseError> {
    match lines.next() {
        Some((_, l)) if l == header => Ok(()),
        Some((n, l)) => err(n, format!("expected header `{header}`, found `{l}`")),
        None => err(0, format!("empty file, expected header `{header}`")),
    }
}

/// A section line `key:` or `key: value`. Tokens never contain `:`.
fn section(line: &str) -> Option<(&str, &str)> {
    line.split_once(':').map(|(k, v)| (k.trim(), v.trim()))
}

#[derive(Default)]
struct InstanceParts<'a> {
    k: Option<(usize, usize)>,
    grid: bool,
    vertices: Vec<(usize, &'a str)>,
    edges: Vec<(usize, &'a str, &'a str)>,
    init: Option<(usize, Vec<&'a str>)>,
    fin: Option<(usize, Vec<&'a str>)>,
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut lines = content_lines(text);
    expect_header(&mut lines, INSTANCE_HEADER)?;
    let mut parts = InstanceParts::default();
    let mut current: Option<&str> = None;
    let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
    for (n, line) in lines {
        if let Some((key, value)) = section(line) {
            if let Some(prev) = seen.insert(key, n) {
                return err(n, format!("section `{key}` repeated (first at line {prev})"));
            }
            current = None;
            match key {
                "k" => {
                    let k: usize = value.parse().map_err(|_| ParseError { line: n, message: format!("bad k `{value}`") })?;
                    if k < 2 {
                        return err(n, format!("snake length must be at least 2, got {k}"));
                    }
                    parts.k = Some((n, k));
                }
                "vertices" => {
                    match value {
                        "" => {}
                        "grid" => parts.grid = true,
                        other => return err(n, format!("unknown vertices mode `{other}`")),
                    }
                    current = Some("vertices");
                }
                "edges" => {
                    if !value.is_empty() {
                        return err(n, "edges are listed one per line after `edges:`");
                    }
                    if parts.grid {
                        return err(n, "grid mode implies the edges; an `edges:` section is not allowed");
                    }
                    current = Some("edges");
                }
                "init" | "fin" => {
                    let toks: Vec<&str> = value.split_whitespace().collect();
                    if key == "init" {
                        parts.init = Some((n, toks));
                    } else {
                        parts.fin = Some((n, toks));
                    }
                }
                other => return err(n, format!("unknown section `{other}`")),
            }
            continue;
        }
        match current {
            Some("vertices") => {
                let toks: Vec<&str> = line.split_whitespace().collect();
                if toks.len() != 1 {
                    return err(n, "expected one vertex token per line");
                }
                parts.vertices.push((n, toks[0]));
            }
            Some("edges") => {
                let toks: Vec<&str> = line.split_whitespace().collect();
                if toks.len() != 2 {
                    return err(n, "expected an edge `u v`");
                }
                parts.edges.push((n, toks[0], toks[1]));
            }
            _ => return err(n, format!("unexpected line `{line}` outside a list section")),
        }
    }
    build_instance(parts)
}

fn build_instance(parts: InstanceParts<'_>) -> Result<Instance, ParseError> {
    let (kline, k) = parts.k.ok_or(ParseError { line: 0, message: "missing `k:`".into() })?;
    let mut names: BTreeMap<&str, usize> = BTreeMap::new();
    for &(n, v) in &parts.vertices {
        if !valid_token(v) {
            return err(n, format!("invalid vertex token `{v}`"));
        }
        if parts.grid && parse_coord(v).is_none() {
            return err(n, format!("grid vertex `{v}` is not a coordinate `r,c`"));
        }
        if let Some(prev) = names.insert(v, n) {
            return err(n, format!("duplicate vertex `{v}` (first at line {prev})"));
        }
    }
    let graph = if parts.grid {
        GridGraph::from_cells(parts.vertices.iter().map(|(_, v)| parse_coord(v).expect("checked"))).into_graph()
    } else {
        let mut es = Vec::with_capacity(parts.edges.len());
        for &(n, a, b) in &parts.edges {
            for x in [a, b] {
                if !names.contains_key(x) {
                    return err(n, format!("unknown vertex `{x}`"));
                }
            }
            if a == b {
                return err(n, format!("self-loop at `{a}`"));
            }
            es.push((a, b));
        }
        let vs: Vec<&str> = parts.vertices.iter().map(|&(_, v)| v).collect();
        Graph::from_edges(&vs, &es).map_err(|e: GraphError| ParseError { line: 0, message: e.to_string() })?
    };
    let conf = |which: &str, part: Option<(usize, Vec<&str>)>| -> Result<Configuration, ParseError> {
        let (n, toks) = part.ok_or(ParseError { line: 0, message: format!("missing `{which}:`") })?;
        if toks.len() != k {
            return err(n, format!("{which} has {} vertices, k is {k} (line {kline})", toks.len()));
        }
        let mut vs = Vec::with_capacity(k);
        for t in &toks {
            let v = graph.vertex(t).ok_or(ParseError { line: n, message: format!("{which}: unknown vertex `{t}`") })?;
            if vs.contains(&v) {
                return err(n, format!("{which}: vertex `{t}` repeats"));
            }
            vs.push(v);
        }
        if !validate_configuration(&graph, k, &vs) {
            return err(n, format!("{which} is not a path in the graph"));
        }
        Ok(Configuration::from_vertices_unchecked(vs))
    };
    let init = conf("init", parts.init)?;
    let fin = conf("fin", parts.fin)?;
    Ok(Instance::new(graph, k, init, fin).expect("validated above"))
}

/// Canonical text of an instance. Grid mode is used exactly when the graph
/// is a grid graph. Each comment line is written as `# line`.
pub fn write_instance(inst: &Instance, comments: &[String]) -> String {
    let g = &inst.graph;
    let mut s = String::new();
    s.push_str(INSTANCE_HEADER);
    s.push('\n');
    for c in comments {
        let _ = writeln!(s, "# {c}");
    }
    let _ = writeln!(s, "k: {}", inst.k);
    let grid = g.n() > 0 && is_grid_graph(g) == Ok(true);
    s.push_str(if grid { "vertices: grid\n" } else { "vertices:\n" });
    for name in g.names() {
        s.push_str(name);
        s.push('\n');
    }
    if !grid {
        s.push_str("edges:\n");
        for (a, b) in g.edge_names() {
            let _ = writeln!(s, "{a} {b}");
        }
    }
    let _ = writeln!(s, "init: {}", inst.init.names(g).join(" "));
    let _ = writeln!(s, "fin: {}", inst.fin.names(g).join(" "));
    s
}

pub fn write_route(route: &Route, g: &Graph) -> String {
    let mut s = format!("{ROUTE_HEADER}\nstart: {}\nheads:\n", route.start.names(g).join(" "));
    for &h in &route.heads {
        s.push_str(g.name(h));
        s.push('\n');
    }
    s
}

/// Parses a route against `g`. Legality of the moves is left to
/// [`Route::check`], so a corrupted route still parses and reports its step.
pub fn parse_route(text: &str, g: &Graph) -> Result<Route, ParseError> {
    let mut lines = content_lines(text);
    expect_header(&mut lines, ROUTE_HEADER)?;
    let lookup = |n: usize, t: &str| g.vertex(t).ok_or(ParseError { line: n, message: format!("unknown vertex `{t}`") });
    let (sn, first) = lines.next().ok_or(ParseError { line: 0, message: "missing `start:`".into() })?;
    let Some(("start", value)) = section(first) else {
        return err(sn, "expected `start:`");
    };
    let start: Vec<_> = value.split_whitespace().map(|t| lookup(sn, t)).collect::<Result<_, _>>()?;
    if start.is_empty() {
        return err(sn, "empty start configuration");
    }
    match lines.next() {
        Some((_, l)) if section(l) == Some(("heads", "")) => {}
        Some((n, _)) => return err(n, "expected `heads:`"),
        None => return err(0, "missing `heads:`"),
    }
    let mut heads = Vec::new();
    for (n, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 1 || section(l).is_some() {
            return err(n, "expected one head token per line");
        }
        heads.push(lookup(n, toks[0])?);
    }
    Ok(Route { start: Configuration::from_vertices_unchecked(start), heads })
}

pub fn write_grid(g: &GridGraph) -> String {
    let mut s = format!("{GRID_HEADER}\n");
    for (r, c) in g.cells() {
        let _ = writeln!(s, "{}", coord_token(r, c));
    }
    s
}

pub fn parse_grid(text: &str) -> Result<GridGraph, ParseError> {
    let mut lines = content_lines(text);
    expect_header(&mut lines, GRID_HEADER)?;
    let mut cells = BTreeMap::new();
    for (n, l) in lines {
        let p = parse_coord(l).ok_or(ParseError { line: n, message: format!("`{l}` is not a coordinate `r,c`") })?;
        if let Some(prev) = cells.insert(p, n) {
            return err(n, format!("duplicate cell `{l}` (first at line {prev})"));
        }
    }
    Ok(GridGraph::from_cells(cells.into_keys()))
}

fn cell_token(c: Cell) -> String {
    coord_token(c.0, c.1)
}

pub fn write_certificate(cert: &WallCertificate) -> String {
    let mut s = format!("{CERTIFICATE_HEADER}\nr: {}\nbranch:\n", cert.r);
    for (&c, host) in &cert.branch {
        let _ = writeln!(s, "{} = {host}", cell_token(c));
    }
    s.push_str("paths:\n");
    for (&(a, b), path) in &cert.paths {
        let _ = writeln!(s, "{} {} = {}", cell_token(a), cell_token(b), path.join(" "));
    }
    s
}

/// Parses a certificate. Structural checks against a host are done by
/// [`WallCertificate::check`]; this only requires the keys to be wall
/// vertices and wall edges of the stated size.
pub fn parse_certificate(text: &str) -> Result<WallCertificate, ParseError> {
    let mut lines = content_lines(text);
    expect_header(&mut lines, CERTIFICATE_HEADER)?;
    let (rn, rl) = lines.next().ok_or(ParseError { line: 0, message: "missing `r:`".into() })?;
    let r: usize = match section(rl) {
        Some(("r", v)) => v.parse().map_err(|_| ParseError { line: rn, message: format!("bad r `{v}`") })?,
        _ => return err(rn, "expected `r:`"),
    };
    let (cells, edges) = wall_structure(r).map_err(|e| ParseError { line: rn, message: e.to_string() })?;
    let cell = |n: usize, t: &str| -> Result<Cell, ParseError> {
        let c = parse_coord(t).ok_or(ParseError { line: n, message: format!("`{t}` is not a wall coordinate") })?;
        if cells.binary_search(&c).is_err() {
            return err(n, format!("`{t}` is not a vertex of the elementary {r}-wall"));
        }
        Ok(c)
    };
    let mut cert = WallCertificate { r, branch: BTreeMap::new(), paths: BTreeMap::new() };
    let mut mode = "";
    for (n, l) in lines {
        match section(l) {
            Some(("branch", "")) if mode.is_empty() => mode = "branch",
            Some(("paths", "")) if mode == "branch" => mode = "paths",
            Some(_) => return err(n, format!("unexpected section line `{l}`")),
            None => {
                let Some((lhs, rhs)) = l.split_once('=') else {
                    return err(n, "expected `key = value`");
                };
                let keys: Vec<&str> = lhs.split_whitespace().collect();
                let vals: Vec<String> = rhs.split_whitespace().map(String::from).collect();
                match (mode, keys.as_slice()) {
                    ("branch", [c]) if vals.len() == 1 => {
                        if cert.branch.insert(cell(n, c)?, vals[0].clone()).is_some() {
                            return err(n, format!("branch vertex `{c}` repeated"));
                        }
                    }
                    ("paths", [a, b]) => {
                        let (a, b) = (cell(n, a)?, cell(n, b)?);
                        let key = if a < b { (a, b) } else { (b, a) };
                        if edges.binary_search(&key).is_err() {
                            return err(n, "not an edge of the elementary wall");
                        }
                        let mut path = vals;
                        if key != (a, b) {
                            path.reverse();
                        }
                        if cert.paths.insert(key, path).is_some() {
                            return err(n, "wall edge repeated");
                        }
                    }
                    _ => return err(n, format!("malformed line `{l}`")),
                }
            }
        }
    }
    Ok(cert)
}
