//! Text renderings of learned tables: per cell the best Q-value and its
//! action, with the greedy trajectory from the agent's start overlaid.

use std::fmt::Write as _;

use crate::learner::{greedy_trajectory, QTable};
use crate::maze::{Action, Cell, Maze};

fn arrow(a: Action) -> char {
    match a {
        Action::Up => '^',
        Action::Down => 'v',
        Action::Left => '<',
        Action::Right => '>',
    }
}

fn agent_label(i: usize) -> char {
    (b'A' + i as u8) as char
}

/// One block per agent. Cells read `<arrow><max Q>` with `*` marking the
/// greedy trajectory; walls are `#`, goals `G<k>`, and the start is
/// bracketed.
pub fn render_ascii(tables: &[QTable], maze: &Maze, max_step: u32) -> String {
    const W: usize = 8;
    let mut out = String::new();
    for (i, q) in tables.iter().enumerate() {
        let start = maze.starts()[i];
        let path = greedy_trajectory(q, maze, start, max_step);
        let _ = writeln!(out, "agent {} start {} path {} steps", agent_label(i), start, path.len() - 1);
        for row in 0..maze.height() {
            for col in 0..maze.width() {
                let c = Cell::new(row, col);
                let text = if maze.is_wall(c) {
                    "#".repeat(W - 1)
                } else if let Some(g) = maze.goal_at(c) {
                    let mark = if path.last() == Some(&c) { "*" } else { "" };
                    format!("{g}{mark}")
                } else {
                    let mark = if path.contains(&c) { "*" } else { "" };
                    let body = format!("{}{:.2}{mark}", arrow(q.greedy_action(c)), q.max_value(c));
                    if c == start {
                        format!("[{body}]")
                    } else {
                        body
                    }
                };
                let _ = write!(out, "{text:>W$}");
            }
            out.push('\n');
        }
        out.push('\n');
    }
    out
}

/// Deterministic SVG with one panel per agent stacked vertically.
pub fn render_svg(tables: &[QTable], maze: &Maze, max_step: u32) -> String {
    const CELL: usize = 48;
    const GAP: usize = 24;
    let panel_w = maze.width() * CELL;
    let panel_h = maze.height() * CELL + GAP;
    let total_h = panel_h * tables.len();
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{panel_w}" height="{total_h}" viewBox="0 0 {panel_w} {total_h}" font-family="monospace" font-size="10">"#
    );
    for (i, q) in tables.iter().enumerate() {
        let oy = i * panel_h + GAP;
        let start = maze.starts()[i];
        let _ = writeln!(out, r#"<g id="agent-{}">"#, agent_label(i));
        let _ = writeln!(out, r#"<text x="2" y="{}" font-size="14">agent {}</text>"#, oy - 6, agent_label(i));
        for c in maze.cells() {
            let (x, y) = (c.col * CELL, oy + c.row * CELL);
            let fill = if maze.is_wall(c) {
                "#333333"
            } else if maze.goal_at(c).is_some() {
                "#c9a0dc"
            } else if c == start {
                "#ffffff"
            } else {
                "#eeeeee"
            };
            let _ = writeln!(
                out,
                r##"<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="{fill}" stroke="#999999"/>"##
            );
            if maze.is_wall(c) {
                continue;
            }
            if let Some(g) = maze.goal_at(c) {
                let _ = writeln!(out, r#"<text x="{}" y="{}">{g}</text>"#, x + 16, y + 28);
                continue;
            }
            let _ =
                writeln!(out, r##"<text x="{}" y="{}" fill="#cc0000">{:.2}</text>"##, x + 3, y + 12, q.max_value(c));
            let (cx, cy) = (x + CELL / 2, y + CELL / 2 + 6);
            let (dx, dy): (i64, i64) = match q.greedy_action(c) {
                Action::Up => (0, -12),
                Action::Down => (0, 12),
                Action::Left => (-12, 0),
                Action::Right => (12, 0),
            };
            let _ = writeln!(
                out,
                r#"<line x1="{cx}" y1="{cy}" x2="{}" y2="{}" stroke="black" stroke-width="2"/>"#,
                cx as i64 + dx,
                cy as i64 + dy
            );
            let _ = writeln!(out, r#"<circle cx="{}" cy="{}" r="2.5" fill="black"/>"#, cx as i64 + dx, cy as i64 + dy);
        }
        let path = greedy_trajectory(q, maze, start, max_step);
        let points: Vec<String> =
            path.iter().map(|c| format!("{},{}", c.col * CELL + CELL / 2, oy + c.row * CELL + CELL / 2)).collect();
        let _ = writeln!(
            out,
            r##"<polyline points="{}" fill="none" stroke="#ff8800" stroke-width="3" stroke-opacity="0.8"/>"##,
            points.join(" ")
        );
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}
