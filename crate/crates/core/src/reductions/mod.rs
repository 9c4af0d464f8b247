//! OR-composition of Hamiltonian-cycle grid instances into one snake instance.

mod hamiltonian;

use rayon::prelude::*;
use thiserror::Error;

use crate::fpt::{solve_fpt, FptError, FptOptions};
use crate::graph::{coord_token, is_grid_graph, GridGraph};
use crate::snake::{solve_bfs_oracle, Decision, Instance, OracleError, OracleOptions, SnakeError};

pub use hamiltonian::{find_hamiltonian_cycle, HamiltonianBudget, HAMILTONIAN_MAX_VERTICES};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReductionError {
    #[error("grid graph is empty")]
    Empty,
    #[error("input {0} is not connected")]
    Disconnected(usize),
    #[error("no input instances")]
    NoInputs,
    #[error("inputs need at least 3 vertices, got {0}")]
    TooSmall(usize),
    #[error("input {index} has {got} vertices, expected {expected}")]
    SizeMismatch { index: usize, expected: usize, got: usize },
    #[error("input index must be at least 1")]
    ZeroIndex,
    #[error(transparent)]
    Hamiltonian(#[from] HamiltonianBudget),
    #[error("oracle: {0}")]
    Oracle(#[from] OracleError),
    #[error("fpt: {0}")]
    Fpt(#[from] FptError),
    #[error("composed instance invalid: {0}")]
    Snake(#[from] SnakeError),
}

/// Axis-aligned `n × n` square anchored at the coordinate minima.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundarySquare {
    pub r_min: u32,
    pub r_max: u32,
    pub c_min: u32,
    pub c_max: u32,
}

pub fn boundary_square(g: &GridGraph) -> Result<BoundarySquare, ReductionError> {
    let cells = g.cells();
    if cells.is_empty() {
        return Err(ReductionError::Empty);
    }
    if !g.graph().is_connected() {
        return Err(ReductionError::Disconnected(0));
    }
    let r_min = cells.iter().map(|p| p.0).min().expect("non-empty");
    let c_min = cells.iter().map(|p| p.1).min().expect("non-empty");
    let side = g.n() as u32 - 1;
    Ok(BoundarySquare { r_min, r_max: r_min + side, c_min, c_max: c_min + side })
}

/// Shifts input `i` (1-based) so its square starts at row `n+1`, column `i(n+1)`.
pub fn normalize_input(g: &GridGraph, i: usize, n: usize) -> Result<GridGraph, ReductionError> {
    if i == 0 {
        return Err(ReductionError::ZeroIndex);
    }
    if g.n() != n {
        return Err(ReductionError::SizeMismatch { index: i, expected: n, got: g.n() });
    }
    let sq = boundary_square(g).map_err(|e| match e {
        ReductionError::Disconnected(_) => ReductionError::Disconnected(i),
        e => e,
    })?;
    let (dr, dc) = (n as u32 + 1, (i * (n + 1)) as u32);
    Ok(GridGraph::from_cells(g.cells().into_iter().map(|(a, b)| (a - sq.r_min + dr, b - sq.c_min + dc))))
}

/// Output of the composer, with the top-row column chosen per input.
#[derive(Clone, Debug)]
pub struct Composition {
    pub instance: Instance,
    pub columns: Vec<u32>,
    pub normalized: Vec<GridGraph>,
}

impl Composition {
    /// The checkpoint configuration whose head enters input `i` (0-based)
    /// from its connector column.
    pub fn entry_configuration(&self, i: usize) -> Vec<String> {
        let n = self.instance.k as u32;
        let c = self.columns[i];
        let mut names = vec![coord_token(n + 1, c), coord_token(n, c)];
        names.extend((0..n - 2).map(|d| coord_token(n - 1, c - d)));
        names
    }
}

/// Builds the composed instance. Every input must be connected with the same
/// number `n ≥ 3` of vertices; the snake has length `n`.
pub fn ham_to_sna(inputs: &[GridGraph]) -> Result<Composition, ReductionError> {
    let first = inputs.first().ok_or(ReductionError::NoInputs)?;
    let n = first.n();
    if n < 3 {
        return Err(ReductionError::TooSmall(n));
    }
    let normalized: Vec<GridGraph> =
        inputs.iter().enumerate().map(|(i, g)| normalize_input(g, i + 1, n)).collect::<Result<_, _>>()?;
    let nn = n as u32;
    let columns: Vec<u32> = normalized
        .iter()
        .map(|g| g.cells().into_iter().filter(|p| p.0 == nn + 1).map(|p| p.1).min().expect("top row occupied"))
        .collect();
    let c_t = *columns.last().expect("non-empty");

    let mut cells: Vec<(u32, u32)> = Vec::new();
    cells.extend((0..nn).map(|j| (nn - 1, j)));
    cells.extend((0..nn).map(|i| (i, nn - 2)));
    cells.extend((nn..=c_t).map(|j| (nn - 1, j)));
    cells.extend(columns.iter().map(|&c| (nn, c)));
    for g in &normalized {
        for p in g.cells() {
            assert!(p.0 > nn, "input vertex {p:?} collides with the connector rows");
            cells.push(p);
        }
    }
    let grid = GridGraph::from_cells(cells);
    debug_assert_eq!(is_grid_graph(grid.graph()), Ok(true));

    let init: Vec<String> = (0..nn).rev().map(|j| coord_token(nn - 1, j)).collect();
    let fin: Vec<String> = (0..nn).map(|i| coord_token(i, nn - 2)).collect();
    let instance = Instance::from_names(grid.into_graph(), &init, &fin)?;
    Ok(Composition { instance, columns, normalized })
}

/// How the composed instance is decided.
#[derive(Clone, Debug)]
pub enum ComposedSolver {
    Oracle(OracleOptions),
    Fpt(FptOptions),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositionReport {
    /// Hamiltonicity of each input, in input order.
    pub inputs: Vec<bool>,
    pub composed: Decision,
    pub columns: Vec<u32>,
    /// Oracle verdict of the instance started at each input's entry checkpoint.
    pub checkpoints: Vec<Decision>,
    /// Composed verdict equals the OR of the input verdicts.
    pub agreement: bool,
}

impl CompositionReport {
    pub fn lines(&self) -> Vec<String> {
        let yn = |b: bool| if b { "yes" } else { "no" };
        let mut out = Vec::new();
        for (i, (&h, c)) in self.inputs.iter().zip(&self.checkpoints).enumerate() {
            out.push(format!(
                "input {} hamiltonian={} column={} checkpoint={}",
                i + 1,
                yn(h),
                self.columns[i],
                yn(*c == Decision::Yes)
            ));
        }
        out.push(format!("composed {}", yn(self.composed == Decision::Yes)));
        out.push(format!("agreement {}", self.agreement));
        out
    }
}

pub fn verify_cross_composition(inputs: &[GridGraph], solver: &ComposedSolver) -> Result<CompositionReport, ReductionError> {
    let comp = ham_to_sna(inputs)?;
    let hams: Vec<bool> = comp
        .normalized
        .par_iter()
        .map(|g| find_hamiltonian_cycle(g.graph()).map(|c| c.is_some()))
        .collect::<Result<_, _>>()?;
    let decide = |inst: &Instance| -> Result<Decision, ReductionError> {
        Ok(match solver {
            ComposedSolver::Oracle(o) => solve_bfs_oracle(inst, o)?.decision,
            ComposedSolver::Fpt(o) => solve_fpt(inst, o)?.result.decision,
        })
    };
    let composed = decide(&comp.instance)?;
    let checkpoints = (0..inputs.len())
        .map(|i| {
            let g = &comp.instance.graph;
            let fin: Vec<String> = comp.instance.fin.names(g).into_iter().map(String::from).collect();
            let inst = Instance::from_names(g.clone(), &comp.entry_configuration(i), &fin)?;
            decide(&inst)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let agreement = (composed == Decision::Yes) == hams.iter().any(|&h| h);
    Ok(CompositionReport { inputs: hams, composed, columns: comp.columns, checkpoints, agreement })
}
