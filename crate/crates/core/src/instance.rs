//! Rotation-puzzle instances and their solutions.
//!
//! Text formats (UTF-8, one record per line, single-space separated):
//!
//! ```text
//! # comment
//! u w WORD          placement of a tile at (u, w)
//! ! u w d c         boundary clamp: edge d of cell (u, w) must show color c
//! ```
//!
//! and for solutions `u w r` with `r` in `0..=5`. Serializers write cells in
//! `(u, w)` order with canonical tile words, then clamps in `(u, w, d)` order.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::hexgrid::{Coord, Direction};
use crate::tiles::{Color, OrientedTile, TileCode, TileError};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: cell {cell} appears more than once")]
    DuplicateCell { line: usize, cell: Coord },
    #[error("line {line}: clamp on {cell} edge {edge} appears more than once")]
    DuplicateClamp { line: usize, cell: Coord, edge: Direction },
    #[error("line {line}: {source}")]
    InvalidTile { line: usize, source: TileError },
    #[error("clamp on {cell} edge {edge} does not sit on a boundary edge of a placed cell")]
    DanglingClamp { cell: Coord, edge: Direction },
    #[error("solution does not cover exactly the placed cells: {0}")]
    DomainMismatch(String),
}

/// A finite partial map from cells to tiles, plus boundary clamps.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Instance {
    placements: BTreeMap<Coord, TileCode>,
    clamps: BTreeMap<(Coord, Direction), Color>,
}

impl Instance {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds an instance, rejecting clamps that are not on boundary edges.
    pub fn new(
        placements: BTreeMap<Coord, TileCode>,
        clamps: BTreeMap<(Coord, Direction), Color>,
    ) -> Result<Self, InstanceError> {
        for &(cell, edge) in clamps.keys() {
            if !placements.contains_key(&cell) || placements.contains_key(&cell.neighbor(edge)) {
                return Err(InstanceError::DanglingClamp { cell, edge });
            }
        }
        Ok(Instance { placements, clamps })
    }

    pub fn from_tiles(placements: BTreeMap<Coord, TileCode>) -> Self {
        Instance {
            placements,
            clamps: BTreeMap::new(),
        }
    }

    pub fn placements(&self) -> &BTreeMap<Coord, TileCode> {
        &self.placements
    }

    pub fn clamps(&self) -> &BTreeMap<(Coord, Direction), Color> {
        &self.clamps
    }

    pub fn tile(&self, c: Coord) -> Option<TileCode> {
        self.placements.get(&c).copied()
    }

    pub fn len(&self) -> usize {
        self.placements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.placements.is_empty()
    }

    /// Same instance with one more clamp.
    pub fn with_clamp(&self, cell: Coord, edge: Direction, color: Color) -> Result<Self, InstanceError> {
        let mut clamps = self.clamps.clone();
        clamps.insert((cell, edge), color);
        Instance::new(self.placements.clone(), clamps)
    }

    /// Same instance without the tile at `cell` (and without clamps on it).
    ///
    /// Clamps of neighboring cells facing the removed cell stay valid since
    /// the edge they sit on becomes a boundary edge; clamps on other cells
    /// are untouched.
    pub fn without_cell(&self, cell: Coord) -> Self {
        let mut out = self.clone();
        out.placements.remove(&cell);
        out.clamps.retain(|(c, _), _| *c != cell);
        out
    }

    /// Every pair of adjacent placed cells, each pair once, as `(a, d, b)`
    /// with `neighbor(a, d) == b` and `a < b`.
    pub fn joints(&self) -> Vec<(Coord, Direction, Coord)> {
        let mut out = Vec::new();
        for &a in self.placements.keys() {
            for (d, b) in a.neighbors() {
                if a < b && self.placements.contains_key(&b) {
                    out.push((a, d, b));
                }
            }
        }
        out
    }
}

/// A rotation for every placed cell.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Solution {
    pub rotations: BTreeMap<Coord, u8>,
}

impl Solution {
    pub fn new(rotations: BTreeMap<Coord, u8>) -> Self {
        Solution { rotations }
    }

    pub fn rotation(&self, c: Coord) -> Option<u8> {
        self.rotations.get(&c).copied()
    }

    /// Color shown at `edge` of `cell` when `instance` is rotated per this solution.
    pub fn color_at(&self, instance: &Instance, cell: Coord, edge: Direction) -> Option<Color> {
        let code = instance.tile(cell)?;
        let rotation = self.rotation(cell)?;
        Some(OrientedTile::new(code, rotation).color_at(edge))
    }
}

fn check_domain(i: &Instance, s: &Solution) -> Result<(), InstanceError> {
    if let Some(c) = s.rotations.keys().find(|c| !i.placements.contains_key(c)) {
        return Err(InstanceError::DomainMismatch(format!("{c} is not a placed cell")));
    }
    if let Some(c) = i.placements.keys().find(|c| !s.rotations.contains_key(c)) {
        return Err(InstanceError::DomainMismatch(format!("no rotation for {c}")));
    }
    if let Some((c, r)) = s.rotations.iter().find(|(_, &r)| r > 5) {
        return Err(InstanceError::DomainMismatch(format!(
            "rotation {r} at {c} is out of range"
        )));
    }
    Ok(())
}

/// True iff every joint edge matches in color and every clamp is honored.
pub fn check_solution(i: &Instance, s: &Solution) -> Result<bool, InstanceError> {
    check_domain(i, s)?;
    let oriented = |c: Coord| OrientedTile::new(i.placements[&c], s.rotations[&c]);
    for (a, d, b) in i.joints() {
        if oriented(a).color_at(d) != oriented(b).color_at(d.opposite()) {
            return Ok(false);
        }
    }
    for (&(c, d), &color) in &i.clamps {
        if oriented(c).color_at(d) != color {
            return Ok(false);
        }
    }
    Ok(true)
}

fn syntax(line: usize, message: impl Into<String>) -> InstanceError {
    InstanceError::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_int(field: &str, line: usize) -> Result<i64, InstanceError> {
    let digits = field.strip_prefix('-').unwrap_or(field);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(syntax(line, format!("expected an integer, found {field:?}")));
    }
    field
        .parse()
        .map_err(|_| syntax(line, format!("integer {field:?} out of range")))
}

/// Splits a record into single-space separated fields. Returns `None` for
/// blank and comment lines.
pub(crate) fn fields(raw: &str, line: usize) -> Result<Option<Vec<&str>>, InstanceError> {
    let text = raw.strip_suffix('\r').unwrap_or(raw);
    if text.is_empty() || text.starts_with('#') {
        return Ok(None);
    }
    let parts: Vec<&str> = text.split(' ').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(syntax(line, "fields must be separated by single spaces"));
    }
    Ok(Some(parts))
}

pub(crate) fn parse_coord(u: &str, w: &str, line: usize) -> Result<Coord, InstanceError> {
    Ok(Coord::new(parse_int(u, line)?, parse_int(w, line)?))
}

pub(crate) fn parse_direction(field: &str, line: usize) -> Result<Direction, InstanceError> {
    let d = parse_int(field, line)?;
    u8::try_from(d)
        .ok()
        .and_then(Direction::new)
        .ok_or_else(|| syntax(line, format!("direction must be 0..5, found {field}")))
}

pub(crate) fn parse_color(field: &str, line: usize) -> Result<Color, InstanceError> {
    let mut chars = field.chars();
    match (chars.next().and_then(Color::from_letter), chars.next()) {
        (Some(c), None) => Ok(c),
        _ => Err(syntax(
            line,
            format!("expected a color letter b/g/r/y, found {field:?}"),
        )),
    }
}

pub fn parse_instance(text: &str) -> Result<Instance, InstanceError> {
    let mut placements = BTreeMap::new();
    let mut clamps = BTreeMap::new();
    let mut clamp_lines = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let Some(parts) = fields(raw, line)? else { continue };
        match parts[..] {
            ["!", u, w, d, c] => {
                let cell = parse_coord(u, w, line)?;
                let edge = parse_direction(d, line)?;
                let color = parse_color(c, line)?;
                if clamps.insert((cell, edge), color).is_some() {
                    return Err(InstanceError::DuplicateClamp { line, cell, edge });
                }
                clamp_lines.push(line);
            }
            [u, w, word] => {
                let cell = parse_coord(u, w, line)?;
                let code: TileCode = word
                    .parse()
                    .map_err(|source| InstanceError::InvalidTile { line, source })?;
                if placements.insert(cell, code).is_some() {
                    return Err(InstanceError::DuplicateCell { line, cell });
                }
            }
            _ => return Err(syntax(line, "expected `u w WORD` or `! u w d c`")),
        }
    }
    Instance::new(placements, clamps)
}

pub fn serialize_instance(i: &Instance) -> String {
    let mut out = String::new();
    for (c, code) in &i.placements {
        out.push_str(&format!("{} {} {}\n", c.u, c.w, code));
    }
    for ((c, d), color) in &i.clamps {
        out.push_str(&format!("! {} {} {} {}\n", c.u, c.w, d, color));
    }
    out
}

pub fn parse_solution(text: &str, i: &Instance) -> Result<Solution, InstanceError> {
    let mut rotations = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let Some(parts) = fields(raw, line)? else { continue };
        let [u, w, r] = parts[..] else {
            return Err(syntax(line, "expected `u w r`"));
        };
        let cell = parse_coord(u, w, line)?;
        let rotation = parse_int(r, line)?;
        if !(0..=5).contains(&rotation) {
            return Err(syntax(line, format!("rotation must be 0..5, found {rotation}")));
        }
        if rotations.insert(cell, rotation as u8).is_some() {
            return Err(InstanceError::DuplicateCell { line, cell });
        }
    }
    let s = Solution { rotations };
    check_domain(i, &s)?;
    Ok(s)
}

pub fn serialize_solution(s: &Solution) -> String {
    s.rotations
        .iter()
        .map(|(c, r)| format!("{} {} {}\n", c.u, c.w, r))
        .collect()
}
