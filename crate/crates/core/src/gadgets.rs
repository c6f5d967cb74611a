//! Gadget library: subpuzzles that simulate wires and gates, stored as text
//! files and checked by an exact verifier.
//!
//! File grammar, one record per line, fields separated by single spaces:
//!
//! ```text
//! gadget NAME
//! cell u w WORD
//! in LABEL u w d
//! out LABEL u w d
//! fix LABEL u w
//! row in LABEL=c,LABEL=c out LABEL=c count N
//! # comment
//! ```
//!
//! An empty label list in a `row` is written `-`. `fix` names a tile whose
//! only purpose is to pin down an otherwise ambiguous orientation; removing
//! it must make some row ambiguous.
//!
//! Layout convention used by the compiler: inputs sit in offset row 0 with
//! edge UP, outputs in the bottom row with edge DOWN, and the port of wire
//! track `k` sits in offset column `k * TRACK_PITCH`.
//!
//! The library comes in two layers. The parts (WIRE, NOT and the two-track
//! MOVE_R, MOVE_L, COPY, AND on neighbouring tracks) were found by search
//! and are verified tile by tile. The stock two-track gadgets connect wires
//! [`crate::compiler::LANE`] tracks apart; they are stacks of parts written
//! out by `cargo run --example compose_gadgets` and verified the same way.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigUint;
use thiserror::Error;

use crate::hexgrid::{Coord, Direction};
use crate::instance::{fields, parse_color, parse_coord, parse_direction, Instance, InstanceError};
use crate::solver::{count_solutions, enumerate_solutions};
use crate::tiles::{Color, TileCode};

pub const TRACK_PITCH: i64 = 6;

pub const STOCK_NAMES: [&str; 9] = [
    "WIRE", "MOVE_R", "MOVE_L", "COPY", "CROSS", "NOT", "AND", "BOOL", "TEST",
];

const PART_FILES: [&str; 6] = [
    include_str!("../gadgets/wire.gadget"),
    include_str!("../gadgets/not.gadget"),
    include_str!("../gadgets/parts/move_r.gadget"),
    include_str!("../gadgets/parts/move_l.gadget"),
    include_str!("../gadgets/parts/copy.gadget"),
    include_str!("../gadgets/parts/and.gadget"),
];

const STOCK_FILES: [&str; 9] = [
    include_str!("../gadgets/wire.gadget"),
    include_str!("../gadgets/move_r.gadget"),
    include_str!("../gadgets/move_l.gadget"),
    include_str!("../gadgets/copy.gadget"),
    include_str!("../gadgets/cross.gadget"),
    include_str!("../gadgets/not.gadget"),
    include_str!("../gadgets/and.gadget"),
    include_str!("../gadgets/bool.gadget"),
    include_str!("../gadgets/test.gadget"),
];

/// Largest number of solutions the verifier enumerates to inspect outputs.
const INSPECT_CAP: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GadgetError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("library lacks gadget {0}")]
    MissingGadget(String),
    #[error("gadget {gadget}: {message}")]
    Structural { gadget: String, message: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl GadgetError {
    fn from_instance(e: InstanceError) -> Self {
        match e {
            InstanceError::Syntax { line, message } => GadgetError::Syntax { line, message },
            InstanceError::InvalidTile { line, source } => GadgetError::Syntax {
                line,
                message: source.to_string(),
            },
            other => GadgetError::Syntax {
                line: 0,
                message: other.to_string(),
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PortRole {
    Input,
    Output,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Port {
    pub cell: Coord,
    pub edge: Direction,
    pub role: PortRole,
    pub label: String,
}

impl Port {
    /// Wire track of the port relative to the gadget anchor, if the port
    /// sits on a track column.
    pub fn track(&self) -> Option<i64> {
        let col = self.cell.col();
        (col % TRACK_PITCH == 0).then_some(col / TRACK_PITCH)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BehaviorRow {
    pub inputs: Vec<(String, Color)>,
    pub outputs: Vec<(String, Color)>,
    pub expected_count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetSpec {
    pub name: String,
    pub cells: BTreeMap<Coord, TileCode>,
    pub ports: Vec<Port>,
    pub fixing: Vec<(String, Coord)>,
    pub behavior: Vec<BehaviorRow>,
    pub height: i64,
}

impl GadgetSpec {
    pub fn inputs(&self) -> impl Iterator<Item = &Port> {
        self.ports.iter().filter(|p| p.role == PortRole::Input)
    }

    pub fn outputs(&self) -> impl Iterator<Item = &Port> {
        self.ports.iter().filter(|p| p.role == PortRole::Output)
    }

    pub fn port(&self, role: PortRole, label: &str) -> Option<&Port> {
        self.ports.iter().find(|p| p.role == role && p.label == label)
    }

    /// Number of wire tracks spanned by the ports.
    pub fn track_span(&self) -> i64 {
        self.ports.iter().filter_map(Port::track).max().map_or(1, |t| t + 1)
    }

    /// The cells as an instance, with input ports clamped per `row`.
    pub fn instance_for(&self, row: &BehaviorRow) -> Instance {
        let clamps = row
            .inputs
            .iter()
            .filter_map(|(label, c)| self.port(PortRole::Input, label).map(|p| ((p.cell, p.edge), *c)))
            .collect();
        Instance::new(self.cells.clone(), clamps).expect("ports are boundary edges")
    }

    /// The same gadget without the tile at `cell`.
    pub fn without_cell(&self, cell: Coord) -> GadgetSpec {
        let mut g = self.clone();
        g.cells.remove(&cell);
        g.fixing.retain(|(_, c)| *c != cell);
        g
    }
}

fn height_of(cells: &BTreeMap<Coord, TileCode>) -> i64 {
    let rows = cells.keys().map(|c| c.row());
    match (rows.clone().min(), rows.max()) {
        (Some(lo), Some(hi)) => hi - lo + 1,
        _ => 0,
    }
}

fn structural(g: &GadgetSpec, message: impl Into<String>) -> GadgetError {
    GadgetError::Structural {
        gadget: g.name.clone(),
        message: message.into(),
    }
}

/// Checks the invariants every gadget must satisfy before it is verified.
pub fn check_structure(g: &GadgetSpec) -> Result<(), GadgetError> {
    if g.cells.is_empty() {
        return Err(structural(g, "no cells"));
    }
    if g.height % 2 != 0 {
        return Err(structural(g, format!("height {} is odd", g.height)));
    }
    let mut labels = BTreeSet::new();
    for p in &g.ports {
        if !labels.insert((p.role == PortRole::Input, p.label.as_str())) {
            return Err(structural(g, format!("port label {} declared twice", p.label)));
        }
        if !g.cells.contains_key(&p.cell) {
            return Err(structural(g, format!("port {} sits on empty cell {}", p.label, p.cell)));
        }
        if g.cells.contains_key(&p.cell.neighbor(p.edge)) {
            return Err(structural(
                g,
                format!("port {} edge {} is not a boundary edge", p.label, p.edge),
            ));
        }
    }
    for (label, cell) in &g.fixing {
        if !g.cells.contains_key(cell) || g.ports.iter().any(|p| p.cell == *cell) {
            return Err(structural(g, format!("fixing tile {label} must be a non-port cell")));
        }
    }
    let input_labels: BTreeSet<&str> = g.inputs().map(|p| p.label.as_str()).collect();
    let output_labels: BTreeSet<&str> = g.outputs().map(|p| p.label.as_str()).collect();
    let mut covered = BTreeSet::new();
    for row in &g.behavior {
        let ins: BTreeSet<&str> = row.inputs.iter().map(|(l, _)| l.as_str()).collect();
        if ins != input_labels || ins.len() != row.inputs.len() {
            return Err(structural(g, "every row must set each input port exactly once"));
        }
        let outs: BTreeSet<&str> = row.outputs.iter().map(|(l, _)| l.as_str()).collect();
        if !outs.is_subset(&output_labels) || outs.len() != row.outputs.len() {
            return Err(structural(g, "row names an unknown or repeated output port"));
        }
        let mut key: Vec<(&str, Color)> = row.inputs.iter().map(|(l, c)| (l.as_str(), *c)).collect();
        key.sort();
        covered.insert(key);
    }
    let labels: Vec<&str> = input_labels.into_iter().collect();
    for bits in 0..1u32 << labels.len() {
        let mut key: Vec<(&str, Color)> = labels
            .iter()
            .enumerate()
            .map(|(k, l)| (*l, Color::from_truth(bits >> k & 1 == 1)))
            .collect();
        key.sort();
        if !covered.contains(&key) {
            return Err(structural(g, "behavior does not cover every blue/red input coloring"));
        }
    }
    Ok(())
}

fn parse_labels(field: &str, line: usize) -> Result<Vec<(String, Color)>, GadgetError> {
    if field == "-" {
        return Ok(vec![]);
    }
    field
        .split(',')
        .map(|item| {
            let (label, color) = item.split_once('=').ok_or_else(|| GadgetError::Syntax {
                line,
                message: format!("expected LABEL=c, found {item:?}"),
            })?;
            if label.is_empty() {
                return Err(GadgetError::Syntax {
                    line,
                    message: "empty port label".into(),
                });
            }
            Ok((
                label.to_string(),
                parse_color(color, line).map_err(GadgetError::from_instance)?,
            ))
        })
        .collect()
}

fn format_labels(items: &[(String, Color)]) -> String {
    if items.is_empty() {
        return "-".to_string();
    }
    items
        .iter()
        .map(|(l, c)| format!("{l}={c}"))
        .collect::<Vec<_>>()
        .join(",")
}

/// Parses one or more gadgets. Each gadget starts with a `gadget` line.
/// Every parsed gadget is checked with [`check_structure`].
pub fn parse_gadgets(text: &str) -> Result<Vec<GadgetSpec>, GadgetError> {
    let mut out: Vec<GadgetSpec> = Vec::new();
    let mut current: Option<GadgetSpec> = None;
    let finish = |g: Option<GadgetSpec>, out: &mut Vec<GadgetSpec>| -> Result<(), GadgetError> {
        if let Some(mut g) = g {
            g.height = height_of(&g.cells);
            check_structure(&g)?;
            out.push(g);
        }
        Ok(())
    };
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let Some(parts) = fields(raw, line).map_err(GadgetError::from_instance)? else {
            continue;
        };
        let syntax = |message: &str| GadgetError::Syntax {
            line,
            message: message.to_string(),
        };
        if let ["gadget", name] = parts[..] {
            finish(current.take(), &mut out)?;
            current = Some(GadgetSpec {
                name: name.to_string(),
                cells: BTreeMap::new(),
                ports: vec![],
                fixing: vec![],
                behavior: vec![],
                height: 0,
            });
            continue;
        }
        let g = current.as_mut().ok_or_else(|| syntax("expected `gadget NAME` first"))?;
        let coord = |u: &str, w: &str| parse_coord(u, w, line).map_err(GadgetError::from_instance);
        match parts[..] {
            ["cell", u, w, word] => {
                let cell = coord(u, w)?;
                let code: TileCode = word.parse().map_err(|e: crate::tiles::TileError| GadgetError::Syntax {
                    line,
                    message: e.to_string(),
                })?;
                if g.cells.insert(cell, code).is_some() {
                    return Err(syntax(&format!("cell {cell} appears more than once")));
                }
            }
            [kind @ ("in" | "out"), label, u, w, d] => {
                let role = if kind == "in" {
                    PortRole::Input
                } else {
                    PortRole::Output
                };
                let edge = parse_direction(d, line).map_err(GadgetError::from_instance)?;
                g.ports.push(Port {
                    cell: coord(u, w)?,
                    edge,
                    role,
                    label: label.to_string(),
                });
            }
            ["fix", label, u, w] => g.fixing.push((label.to_string(), coord(u, w)?)),
            ["row", "in", ins, "out", outs, "count", n] => {
                let expected_count = n
                    .parse()
                    .map_err(|_| syntax(&format!("expected a count, found {n:?}")))?;
                g.behavior.push(BehaviorRow {
                    inputs: parse_labels(ins, line)?,
                    outputs: parse_labels(outs, line)?,
                    expected_count,
                });
            }
            _ => return Err(syntax("unrecognised gadget record")),
        }
    }
    finish(current, &mut out)?;
    Ok(out)
}

pub fn serialize_gadget(g: &GadgetSpec) -> String {
    let mut s = format!("gadget {}\n", g.name);
    for (c, code) in &g.cells {
        let _ = writeln!(s, "cell {} {} {}", c.u, c.w, code);
    }
    for p in &g.ports {
        let kind = if p.role == PortRole::Input { "in" } else { "out" };
        let _ = writeln!(s, "{kind} {} {} {} {}", p.label, p.cell.u, p.cell.w, p.edge);
    }
    for (label, c) in &g.fixing {
        let _ = writeln!(s, "fix {label} {} {}", c.u, c.w);
    }
    for row in &g.behavior {
        let _ = writeln!(
            s,
            "row in {} out {} count {}",
            format_labels(&row.inputs),
            format_labels(&row.outputs),
            row.expected_count
        );
    }
    s
}

/// Gadgets from `text`, which must include all nine stock names.
pub fn load_library(text: &str) -> Result<Vec<GadgetSpec>, GadgetError> {
    let gadgets = parse_gadgets(text)?;
    for name in STOCK_NAMES {
        if !gadgets.iter().any(|g| g.name == name) {
            return Err(GadgetError::MissingGadget(name.to_string()));
        }
    }
    Ok(gadgets)
}

/// Reads a library from a file or from every `*.gadget` file in a
/// directory, in file-name order.
pub fn load_library_path(path: &Path) -> Result<Vec<GadgetSpec>, GadgetError> {
    let io = |e: std::io::Error| GadgetError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    };
    let text = if path.is_dir() {
        let mut files: Vec<_> = std::fs::read_dir(path)
            .map_err(io)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "gadget"))
            .collect();
        files.sort();
        let mut text = String::new();
        for f in files {
            text.push_str(&std::fs::read_to_string(&f).map_err(io)?);
            text.push('\n');
        }
        text
    } else {
        std::fs::read_to_string(path).map_err(io)?
    };
    load_library(&text)
}

/// The shipped gadget library.
pub fn stock_library() -> Vec<GadgetSpec> {
    load_library(&STOCK_FILES.join("\n")).expect("stock library is well formed")
}

pub fn stock_library_text() -> String {
    STOCK_FILES.join("\n")
}

/// Parts the stock two-track gadgets are composed from.
pub fn part_library() -> Vec<GadgetSpec> {
    parse_gadgets(&PART_FILES.join("\n")).expect("parts are well formed")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowReport {
    pub row: BehaviorRow,
    pub count: BigUint,
    /// Output colors of each solution, when there are few enough to list.
    pub observed: Vec<Vec<(String, Color)>>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetReport {
    pub name: String,
    pub rows: Vec<RowReport>,
}

impl GadgetReport {
    pub fn pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

/// Counts the solutions of every behavior row with its inputs clamped.
///
/// A row passes when the count equals the expected count and every
/// solution shows the row's output colors. Rows that list no outputs
/// instead require each solution to show blue or red at every output port,
/// with no two solutions showing the same outputs.
pub fn verify_gadget(g: &GadgetSpec) -> GadgetReport {
    let rows = g
        .behavior
        .iter()
        .map(|row| {
            let inst = g.instance_for(row);
            let count = count_solutions(&inst);
            let mut observed = Vec::new();
            if count <= BigUint::from(INSPECT_CAP) {
                for s in enumerate_solutions(&inst, INSPECT_CAP) {
                    observed.push(
                        g.outputs()
                            .map(|p| {
                                (
                                    p.label.clone(),
                                    s.color_at(&inst, p.cell, p.edge).expect("port cell placed"),
                                )
                            })
                            .collect::<Vec<_>>(),
                    );
                }
            }
            let matches = count == BigUint::from(row.expected_count)
                && observed.len() as u64 == row.expected_count
                && if row.outputs.is_empty() {
                    let distinct: BTreeSet<_> = observed.iter().collect();
                    distinct.len() == observed.len() && observed.iter().flatten().all(|(_, c)| c.truth().is_some())
                } else {
                    observed.iter().all(|o| row.outputs.iter().all(|want| o.contains(want)))
                };
            RowReport {
                row: row.clone(),
                count,
                observed,
                pass: matches,
            }
        })
        .collect();
    GadgetReport {
        name: g.name.clone(),
        rows,
    }
}

pub fn verify_library(gadgets: &[GadgetSpec]) -> Vec<GadgetReport> {
    gadgets.iter().map(verify_gadget).collect()
}

/// Cells and ports of `g` translated by `offset`.
pub fn instantiate(g: &GadgetSpec, offset: Coord) -> (BTreeMap<Coord, TileCode>, Vec<Port>) {
    let cells = g.cells.iter().map(|(c, t)| (c.translate(offset), *t)).collect();
    let ports = g
        .ports
        .iter()
        .map(|p| Port {
            cell: p.cell.translate(offset),
            ..p.clone()
        })
        .collect();
    (cells, ports)
}

/// Reflects `g` across a vertical axis. Offset rows are preserved and
/// offset column `c` maps to `axis2 - c`; tiles are replaced by their
/// mirror images.
pub fn mirror_gadget(g: &GadgetSpec, name: &str, axis2: i64) -> GadgetSpec {
    assert!(axis2 % 2 == 0, "axis must map even columns to even columns");
    let shift = Coord::from_offset(axis2, 0);
    let map = |c: Coord| c.mirror().translate(shift);
    let cells = g.cells.iter().map(|(c, t)| (map(*c), t.mirror().0)).collect();
    GadgetSpec {
        name: name.to_string(),
        cells,
        ports: g
            .ports
            .iter()
            .map(|p| Port {
                cell: map(p.cell),
                edge: p.edge.mirror(),
                ..p.clone()
            })
            .collect(),
        fixing: g.fixing.iter().map(|(l, c)| (l.clone(), map(*c))).collect(),
        behavior: g.behavior.clone(),
        height: g.height,
    }
}
