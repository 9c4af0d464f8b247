use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::GridGraph;
use crate::snake::{Instance, Route, RouteError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenderFormat {
    Ascii,
    Svg,
}

impl RenderFormat {
    pub fn extension(self) -> &'static str {
        match self {
            RenderFormat::Ascii => "txt",
            RenderFormat::Svg => "svg",
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RenderError {
    #[error("rendering needs a grid instance")]
    NotGrid,
    #[error("route is invalid: {0}")]
    Route(#[from] RouteError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    /// 0-based move count.
    pub step: usize,
    pub body: String,
}

const CELL: u32 = 24;

/// One frame per configuration visited by `route`.
///
/// ASCII frames use `H` for the head, `o` for the rest of the body, `.` for
/// free cells and a blank for lattice points outside the graph.
pub fn render_frames(inst: &Instance, route: &Route, format: RenderFormat) -> Result<Vec<Frame>, RenderError> {
    let grid = GridGraph::from_graph(inst.graph.clone()).map_err(|_| RenderError::NotGrid)?;
    if grid.n() == 0 {
        return Err(RenderError::NotGrid);
    }
    route.check(inst)?;
    let confs = route.replay(&inst.graph)?;
    let cells = grid.cells();
    let rmin = cells.iter().map(|p| p.0).min().expect("non-empty");
    let rmax = cells.iter().map(|p| p.0).max().expect("non-empty");
    let cmin = cells.iter().map(|p| p.1).min().expect("non-empty");
    let cmax = cells.iter().map(|p| p.1).max().expect("non-empty");
    let frames = confs
        .iter()
        .enumerate()
        .map(|(step, conf)| {
            let pos: Vec<(u32, u32)> = conf.vertices().iter().map(|&v| grid.coord(v)).collect();
            let body = match format {
                RenderFormat::Ascii => {
                    let mut s = String::new();
                    for r in rmin..=rmax {
                        let line: String = (cmin..=cmax)
                            .map(|c| match pos.iter().position(|&p| p == (r, c)) {
                                Some(0) => 'H',
                                Some(_) => 'o',
                                None if cells.contains(&(r, c)) => '.',
                                None => ' ',
                            })
                            .collect();
                        s.push_str(line.trim_end());
                        s.push('\n');
                    }
                    s
                }
                RenderFormat::Svg => {
                    let (w, h) = ((cmax - cmin + 1) * CELL, (rmax - rmin + 1) * CELL);
                    let mut s = format!(
                        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n"
                    );
                    let origin = |(r, c): (u32, u32)| ((c - cmin) * CELL, (r - rmin) * CELL);
                    for &p in &cells {
                        let (x, y) = origin(p);
                        let _ = writeln!(
                            s,
                            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#eee\" stroke=\"#999\"/>",
                            x + 1,
                            y + 1,
                            CELL - 2,
                            CELL - 2
                        );
                    }
                    let centre = |p| {
                        let (x, y) = origin(p);
                        (x + CELL / 2, y + CELL / 2)
                    };
                    let points: Vec<String> = pos
                        .iter()
                        .map(|&p| {
                            let (x, y) = centre(p);
                            format!("{x},{y}")
                        })
                        .collect();
                    let _ = writeln!(
                        s,
                        "<polyline points=\"{}\" fill=\"none\" stroke=\"#2a7\" stroke-width=\"8\" stroke-linecap=\"round\"/>",
                        points.join(" ")
                    );
                    let (hx, hy) = centre(pos[0]);
                    let _ = writeln!(s, "<circle cx=\"{hx}\" cy=\"{hy}\" r=\"7\" fill=\"#c33\"/>");
                    let _ = writeln!(s, "<text x=\"2\" y=\"12\" font-size=\"10\">step {step}</text>");
                    s.push_str("</svg>\n");
                    s
                }
            };
            Frame { step, body }
        })
        .collect();
    Ok(frames)
}
