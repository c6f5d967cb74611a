//! SVG drawings of instances and solutions.
//!
//! Hexagons are flat-topped. Axial `(u, w)` is drawn at
//! `x = 1.5 u`, `y = -(w - u/2) * sqrt(3)` (in hex radii), so direction 2
//! points up the page. Each line of a tile is a quadratic curve between the
//! midpoints of its two edges, bent through the hexagon centre.

use std::fmt::Write as _;

use thiserror::Error;

use crate::hexgrid::{Coord, Direction};
use crate::instance::{check_solution, Instance, InstanceError, Solution};
use crate::tiles::{Color, OrientedTile};

const RADIUS: f64 = 20.0;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("solution does not solve the instance")]
    InvalidSolution,
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

fn stroke(c: Color) -> &'static str {
    match c {
        Color::Blue => "#1f4fd8",
        Color::Green => "#1a9e3a",
        Color::Red => "#d62828",
        Color::Yellow => "#e6b800",
    }
}

fn centre(c: Coord) -> (f64, f64) {
    let (u, w) = (c.u as f64, c.w as f64);
    (1.5 * u * RADIUS, -(w - u / 2.0) * 3f64.sqrt() * RADIUS)
}

/// Unit vector from a hexagon centre towards the middle of edge `d`.
fn edge_dir(d: Direction) -> (f64, f64) {
    let angle = (30.0 - 60.0 * d.index() as f64).to_radians();
    (angle.cos(), angle.sin())
}

fn edge_mid(c: Coord, d: Direction) -> (f64, f64) {
    let (x, y) = centre(c);
    let (dx, dy) = edge_dir(d);
    let apothem = RADIUS * 3f64.sqrt() / 2.0;
    (x + dx * apothem, y + dy * apothem)
}

/// Draws `instance`; tiles take their rotation from `solution`, or
/// rotation 0 without one.
pub fn render_svg(instance: &Instance, solution: Option<&Solution>) -> Result<String, RenderError> {
    if let Some(s) = solution {
        if !check_solution(instance, s)? {
            return Err(RenderError::InvalidSolution);
        }
    }
    let centres: Vec<(f64, f64)> = instance.placements().keys().map(|&c| centre(c)).collect();
    let (mut x0, mut y0, mut x1, mut y1) = (0.0f64, 0.0f64, 1.0f64, 1.0f64);
    if !centres.is_empty() {
        x0 = centres.iter().map(|p| p.0).fold(f64::INFINITY, f64::min) - RADIUS - 2.0;
        y0 = centres.iter().map(|p| p.1).fold(f64::INFINITY, f64::min) - RADIUS - 2.0;
        x1 = centres.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max) + RADIUS + 2.0;
        y1 = centres.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max) + RADIUS + 2.0;
    }
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{:.2} {:.2} {:.2} {:.2}">"#,
        x0,
        y0,
        x1 - x0,
        y1 - y0
    );
    for (&cell, &code) in instance.placements() {
        let rotation = solution.and_then(|s| s.rotation(cell)).unwrap_or(0);
        let tile = OrientedTile::new(code, rotation);
        let (cx, cy) = centre(cell);
        let corners: Vec<String> = (0..6)
            .map(|k| {
                let a = (60.0 * k as f64).to_radians();
                format!("{:.2},{:.2}", cx + RADIUS * a.cos(), cy + RADIUS * a.sin())
            })
            .collect();
        let _ = writeln!(
            out,
            r##"<g data-cell="{} {}"><polygon points="{}" fill="#2b2b2b" stroke="#888"/>"##,
            cell.u,
            cell.w,
            corners.join(" ")
        );
        for color in Color::ALL {
            let ends: Vec<Direction> = Direction::ALL
                .into_iter()
                .filter(|&d| tile.color_at(d) == color)
                .collect();
            if let [a, b] = ends[..] {
                let (ax, ay) = edge_mid(cell, a);
                let (bx, by) = edge_mid(cell, b);
                let _ = writeln!(
                    out,
                    r#"<path d="M {ax:.2} {ay:.2} Q {cx:.2} {cy:.2} {bx:.2} {by:.2}" fill="none" stroke="{}" stroke-width="4"/>"#,
                    stroke(color)
                );
            }
        }
        out.push_str("</g>\n");
    }
    for (&(cell, edge), &color) in instance.clamps() {
        let (x, y) = edge_mid(cell, edge);
        let _ = writeln!(
            out,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="{}"/>"#,
            stroke(color)
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn one_tile() -> Instance {
        Instance::from_tiles(BTreeMap::from([(Coord::ORIGIN, "bggbrr".parse().unwrap())]))
    }

    #[test]
    fn empty_instance_has_no_hexagons() {
        let svg = render_svg(&Instance::empty(), None).unwrap();
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert!(!svg.contains("<polygon"));
    }

    #[test]
    fn rotation_changes_only_paths() {
        let i = one_tile();
        let s0 = render_svg(&i, Some(&Solution::new(BTreeMap::from([(Coord::ORIGIN, 0)])))).unwrap();
        let s1 = render_svg(&i, Some(&Solution::new(BTreeMap::from([(Coord::ORIGIN, 1)])))).unwrap();
        assert_ne!(s0, s1);
        let diff: Vec<(&str, &str)> = s0.lines().zip(s1.lines()).filter(|(a, b)| a != b).collect();
        assert!(!diff.is_empty());
        assert!(diff
            .iter()
            .all(|(a, b)| a.starts_with("<path") && b.starts_with("<path")));
        assert_eq!(s0.matches("<path").count(), 3);
    }

    #[test]
    fn invalid_solution_is_rejected() {
        let mut i = BTreeMap::new();
        i.insert(Coord::ORIGIN, "bbggrr".parse().unwrap());
        i.insert(Coord::new(1, 0), "bbggrr".parse().unwrap());
        let inst = Instance::from_tiles(i);
        let bad = Solution::new(BTreeMap::from([(Coord::ORIGIN, 0), (Coord::new(1, 0), 0)]));
        // edge 0 of the first tile is b, edge 3 of the second is g
        assert_eq!(render_svg(&inst, Some(&bad)), Err(RenderError::InvalidSolution));
    }

    #[test]
    fn edge_midpoints_are_shared_by_neighbours() {
        for d in Direction::ALL {
            let (ax, ay) = edge_mid(Coord::ORIGIN, d);
            let (bx, by) = edge_mid(Coord::ORIGIN.neighbor(d), d.opposite());
            assert!((ax - bx).abs() < 1e-9 && (ay - by).abs() < 1e-9, "direction {d}");
        }
    }
}
