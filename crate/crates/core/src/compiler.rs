//! Lowering of circuits to rotation puzzles.
//!
//! Each circuit wire runs down a vertical track; track `t` is offset column
//! `t * TRACK_PITCH`. A [`RoutingProgram`] lists, row by row, which gadget
//! sits on which tracks. [`compile`] stacks the rows top to bottom, padding
//! short gadgets and idle wires with WIRE segments so that all gadgets in a
//! row band share one height.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::circuit::{cnf_to_circuit, Circuit, Cnf, Gate};
use crate::gadgets::{
    check_structure, instantiate, stock_library, verify_library, BehaviorRow, GadgetSpec, Port, PortRole, TRACK_PITCH,
};
use crate::hexgrid::{Coord, Direction};
use crate::instance::{check_solution, Instance, Solution};
use crate::tiles::{Color, TileCode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Prim {
    Pass,
    /// Input variable, 0-based.
    Bool(usize),
    MoveR,
    MoveL,
    Cross,
    Copy,
    Not,
    And,
    Test,
}

impl Prim {
    pub fn gadget(self) -> &'static str {
        match self {
            Prim::Pass => "WIRE",
            Prim::Bool(_) => "BOOL",
            Prim::MoveR => "MOVE_R",
            Prim::MoveL => "MOVE_L",
            Prim::Cross => "CROSS",
            Prim::Copy => "COPY",
            Prim::Not => "NOT",
            Prim::And => "AND",
            Prim::Test => "TEST",
        }
    }

    /// Number of tracks the primitive occupies.
    pub fn span(self) -> usize {
        match self {
            Prim::MoveR | Prim::MoveL | Prim::Cross | Prim::Copy | Prim::And => 2,
            _ => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Op {
    pub track: usize,
    pub prim: Prim,
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.prim {
            Prim::Pass => f.write_str("PASS"),
            p if p.span() == 2 => write!(f, "{}({},{})", p.gadget(), self.track, self.track + 1),
            p => f.write_str(p.gadget()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoutingProgram {
    /// Number of track slots used.
    pub tracks: usize,
    /// Each row lists its primitives in track order.
    pub rows: Vec<Vec<Op>>,
}

impl RoutingProgram {
    /// One line per row, e.g. `[BOOL,BOOL]`.
    pub fn describe(&self) -> String {
        self.rows
            .iter()
            .map(|row| format!("[{}]\n", row.iter().map(Op::to_string).collect::<Vec<_>>().join(",")))
            .collect()
    }

    /// Checks that every row's primitives occupy disjoint track spans and
    /// that each row consumes exactly the wires the previous row produced.
    pub fn check(&self) -> Result<(), String> {
        let mut live: Vec<bool> = vec![];
        for (r, row) in self.rows.iter().enumerate() {
            let mut covered = vec![false; self.tracks];
            let mut next = vec![false; self.tracks];
            for op in row {
                for t in op.track..op.track + op.prim.span() {
                    if t >= self.tracks || std::mem::replace(&mut covered[t], true) {
                        return Err(format!("row {r}: overlapping or out-of-range span at track {t}"));
                    }
                }
                let (ins, outs) = port_tracks(op.prim);
                for &k in ins {
                    if !live.get(op.track + k).copied().unwrap_or(false) {
                        return Err(format!("row {r}: {op} reads empty track {}", op.track + k));
                    }
                }
                for &k in outs {
                    next[op.track + k] = true;
                }
            }
            if let Some(t) = live.iter().enumerate().position(|(t, &l)| l && !covered[t]) {
                return Err(format!("row {r}: live track {t} is not continued"));
            }
            live = next;
        }
        Ok(())
    }

    /// Runs the program on boolean values; returns the value reaching TEST.
    pub fn simulate(&self, a: &[bool]) -> Option<bool> {
        self.trace(vec![None; self.tracks], a).1
    }

    /// Runs the program from the given track values; returns the values
    /// leaving the last row.
    pub fn run(&self, vals: Vec<Option<bool>>) -> Vec<Option<bool>> {
        self.trace(vals, &[]).0
    }

    fn trace(&self, mut vals: Vec<Option<bool>>, a: &[bool]) -> (Vec<Option<bool>>, Option<bool>) {
        let mut tested = None;
        for row in &self.rows {
            let mut next = vec![None; self.tracks];
            for op in row {
                let t = op.track;
                match op.prim {
                    Prim::Pass | Prim::Not => next[t] = vals[t].map(|v| v ^ (op.prim == Prim::Not)),
                    Prim::Bool(i) => next[t] = Some(a[i]),
                    Prim::MoveR => next[t + 1] = vals[t],
                    Prim::MoveL => next[t] = vals[t + 1],
                    Prim::Cross => (next[t], next[t + 1]) = (vals[t + 1], vals[t]),
                    Prim::Copy => (next[t], next[t + 1]) = (vals[t], vals[t]),
                    Prim::And => next[t] = vals[t].zip(vals[t + 1]).map(|(x, y)| x && y),
                    Prim::Test => tested = vals[t],
                }
            }
            vals = next;
        }
        (vals, tested)
    }
}

/// Input and output tracks of a primitive, relative to its anchor track.
fn port_tracks(p: Prim) -> (&'static [usize], &'static [usize]) {
    match p {
        Prim::Pass | Prim::Not => (&[0], &[0]),
        Prim::Bool(_) => (&[], &[0]),
        Prim::MoveR => (&[0], &[1]),
        Prim::MoveL => (&[1], &[0]),
        Prim::Cross => (&[0, 1], &[0, 1]),
        Prim::Copy => (&[0], &[0, 1]),
        Prim::And => (&[0, 1], &[0]),
        Prim::Test => (&[0], &[]),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Wire {
    value: usize,
    /// Reserved as an operand of the gate being routed.
    operand: bool,
}

struct Scheduler {
    slots: Vec<Option<Wire>>,
    uses: Vec<usize>,
    rows: Vec<Vec<Op>>,
}

impl Scheduler {
    fn get(&self, t: usize) -> Option<Wire> {
        self.slots.get(t).copied().flatten()
    }

    fn set(&mut self, t: usize, w: Option<Wire>) {
        if t >= self.slots.len() {
            self.slots.resize(t + 1, None);
        }
        self.slots[t] = w;
    }

    fn find(&self, value: usize, operand: bool) -> usize {
        self.slots
            .iter()
            .position(|s| *s == Some(Wire { value, operand }))
            .expect("value is live")
    }

    /// Emits one row holding `op` and PASS on every other live track, then
    /// updates the slots.
    fn emit(&mut self, op: Op) {
        let span = op.track..op.track + op.prim.span();
        let mut row: Vec<Op> = (0..self.slots.len())
            .filter(|t| self.slots[*t].is_some() && !span.contains(t))
            .map(|track| Op {
                track,
                prim: Prim::Pass,
            })
            .collect();
        row.push(op);
        row.sort_by_key(|o| o.track);
        self.rows.push(row);
        let t = op.track;
        match op.prim {
            Prim::MoveR => {
                let w = self.get(t);
                self.set(t + 1, w);
                self.set(t, None);
            }
            Prim::MoveL => {
                let w = self.get(t + 1);
                self.set(t, w);
                self.set(t + 1, None);
            }
            Prim::Cross => {
                let (a, b) = (self.get(t), self.get(t + 1));
                self.set(t, b);
                self.set(t + 1, a);
            }
            _ => {}
        }
    }

    /// Reserves a wire carrying `v` as an operand, copying it first when
    /// later gates still need the value.
    fn take(&mut self, v: usize) -> usize {
        let mut t = self.find(v, false);
        if self.uses[v] > 1 {
            if self.get(t + 1).is_some() && t > 0 && self.get(t - 1).is_none() {
                self.emit(Op {
                    track: t - 1,
                    prim: Prim::MoveL,
                });
                t -= 1;
            }
            while self.get(t + 1).is_some() {
                self.emit(Op {
                    track: t,
                    prim: Prim::Cross,
                });
                t += 1;
            }
            self.emit(Op {
                track: t,
                prim: Prim::Copy,
            });
            self.set(
                t + 1,
                Some(Wire {
                    value: v,
                    operand: false,
                }),
            );
        }
        self.set(
            t,
            Some(Wire {
                value: v,
                operand: true,
            }),
        );
        self.uses[v] -= 1;
        t
    }

    fn produce(&mut self, t: usize, value: usize) {
        let w = (self.uses[value] > 0).then_some(Wire { value, operand: false });
        self.set(t, w);
    }
}

/// Deterministic routing of `c` onto tracks.
///
/// Row 0 holds one BOOL per input on tracks `0..n`. For each gate in order,
/// operands still needed later are copied (the copy lands on the next
/// track, which is first cleared by a MOVE_L into a free left slot or by
/// CROSS swaps to the right), the left operand is moved right until it
/// touches the right one (MOVE_R over empty tracks, CROSS over occupied
/// ones), and the gate row follows with its output on the left track.
/// Values without remaining uses stop at once. The last row is TEST under
/// the output track.
pub fn schedule(c: &Circuit) -> RoutingProgram {
    let gates = c.instructions();
    let mut uses = vec![0usize; gates.len()];
    for g in gates {
        for j in g.operands() {
            uses[j] += 1;
        }
    }
    uses[c.output()] += 1;
    let mut s = Scheduler {
        slots: vec![],
        uses,
        rows: vec![],
    };
    s.rows.push(
        (0..c.inputs())
            .map(|i| Op {
                track: i,
                prim: Prim::Bool(i),
            })
            .collect(),
    );
    for i in 0..c.inputs() {
        s.produce(i, i);
    }
    for (i, g) in gates.iter().enumerate().skip(c.inputs()) {
        match *g {
            Gate::Not(j) => {
                let t = s.take(j);
                s.emit(Op {
                    track: t,
                    prim: Prim::Not,
                });
                s.produce(t, i);
            }
            Gate::And(j, k) => {
                let a = s.take(j);
                let b = s.take(k);
                let (mut p, q) = (a.min(b), a.max(b));
                while p + 1 < q {
                    let prim = if s.get(p + 1).is_none() {
                        Prim::MoveR
                    } else {
                        Prim::Cross
                    };
                    s.emit(Op { track: p, prim });
                    p += 1;
                }
                s.emit(Op {
                    track: p,
                    prim: Prim::And,
                });
                s.set(p + 1, None);
                s.produce(p, i);
            }
            Gate::Input(_) => unreachable!("inputs precede gates"),
        }
    }
    let t = s.find(c.output(), false);
    s.rows.push(vec![Op {
        track: t,
        prim: Prim::Test,
    }]);
    let tracks = s
        .rows
        .iter()
        .flatten()
        .map(|o| o.track + o.prim.span())
        .max()
        .unwrap_or(0);
    RoutingProgram { tracks, rows: s.rows }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("gadget library fails verification: {}", .0.join(", "))]
    LibraryUnverified(Vec<String>),
    #[error("gadget library lacks {0}")]
    MissingGadget(String),
    #[error("cannot compose {0}")]
    Compose(String),
    #[error("gadgets overlap at cell {0}")]
    Overlap(Coord),
    #[error("solution is not valid for the compiled instance")]
    InvalidSolution,
    #[error("port map line {line}: {message}")]
    PortMap { line: usize, message: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlacedGadget {
    pub name: String,
    pub row: usize,
    pub track: usize,
    pub anchor: Coord,
    pub ports: Vec<Port>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompiledPuzzle {
    pub instance: Instance,
    /// For each input, the BOOL output cell; its DOWN edge carries the value.
    pub port_map: Vec<Coord>,
    /// Index into `gadgets` for every placed cell.
    pub provenance: BTreeMap<Coord, usize>,
    pub gadgets: Vec<PlacedGadget>,
    pub program: RoutingProgram,
}

impl CompiledPuzzle {
    /// Gadget name and row of the instantiation owning `cell`.
    pub fn origin(&self, cell: Coord) -> Option<(&str, usize)> {
        self.provenance
            .get(&cell)
            .map(|&k| (self.gadgets[k].name.as_str(), self.gadgets[k].row))
    }
}

/// Physical tracks between neighbouring wires of a routing program. The
/// tracks in between are free room for the parts a stock two-track gadget
/// is stacked from.
pub const LANE: usize = 4;

fn anchor(track: usize, depth: i64, lane: usize) -> Coord {
    Coord::from_offset(TRACK_PITCH * (lane * track) as i64, -depth)
}

struct Stacked {
    placements: BTreeMap<Coord, TileCode>,
    provenance: BTreeMap<Coord, usize>,
    gadgets: Vec<PlacedGadget>,
    depth: i64,
}

/// Places the rows of `program` top to bottom, track `t` at physical track
/// `lane * t`. Gadgets shorter than their row are extended with WIRE.
fn stack(program: &RoutingProgram, lib: &[GadgetSpec], lane: usize) -> Result<Stacked, CompileError> {
    let get = |name: &str| {
        lib.iter()
            .find(|g| g.name == name)
            .ok_or_else(|| CompileError::MissingGadget(name.to_string()))
    };
    let wire = get("WIRE")?;
    let mut st = Stacked {
        placements: BTreeMap::new(),
        provenance: BTreeMap::new(),
        gadgets: vec![],
        depth: 0,
    };
    let place = |st: &mut Stacked, g: &GadgetSpec, row: usize, track: usize, depth: i64| -> Result<(), CompileError> {
        let at = anchor(track, depth, lane);
        let (cells, ports) = instantiate(g, at);
        let id = st.gadgets.len();
        for (cell, code) in cells {
            if st.placements.insert(cell, code).is_some() {
                return Err(CompileError::Overlap(cell));
            }
            st.provenance.insert(cell, id);
        }
        st.gadgets.push(PlacedGadget {
            name: g.name.clone(),
            row,
            track,
            anchor: at,
            ports,
        });
        Ok(())
    };
    for (r, row) in program.rows.iter().enumerate() {
        let specs: Vec<&GadgetSpec> = row.iter().map(|op| get(op.prim.gadget())).collect::<Result<_, _>>()?;
        let height = specs.iter().map(|g| g.height).max().unwrap_or(0);
        let depth = st.depth;
        for (op, g) in row.iter().zip(&specs) {
            let mut filled = 0;
            if op.prim != Prim::Pass {
                place(&mut st, g, r, op.track, depth)?;
                filled = g.height;
            }
            let out_tracks: Vec<usize> = if op.prim == Prim::Pass {
                vec![op.track]
            } else {
                g.outputs()
                    .filter_map(Port::track)
                    .map(|k| op.track + k as usize / lane)
                    .collect()
            };
            while filled < height {
                for &t in &out_tracks {
                    place(&mut st, wire, r, t, depth + filled)?;
                }
                filled += wire.height;
            }
        }
        st.depth += height;
    }
    Ok(st)
}

fn verified_stock() -> Result<&'static [GadgetSpec], CompileError> {
    static STOCK: OnceLock<Result<Vec<GadgetSpec>, CompileError>> = OnceLock::new();
    STOCK
        .get_or_init(|| {
            let lib = stock_library();
            check_library(&lib)?;
            Ok(lib)
        })
        .as_ref()
        .map(Vec::as_slice)
        .map_err(Clone::clone)
}

fn check_library(lib: &[GadgetSpec]) -> Result<(), CompileError> {
    let failing: Vec<String> = verify_library(lib)
        .into_iter()
        .filter(|r| !r.pass())
        .map(|r| r.name)
        .collect();
    if failing.is_empty() {
        Ok(())
    } else {
        Err(CompileError::LibraryUnverified(failing))
    }
}

/// Compiles against the stock gadget library.
pub fn compile(c: &Circuit) -> Result<CompiledPuzzle, CompileError> {
    compile_program(c, schedule(c), verified_stock()?)
}

/// Compiles against `lib`, which is verified first.
pub fn compile_with(c: &Circuit, lib: &[GadgetSpec]) -> Result<CompiledPuzzle, CompileError> {
    check_library(lib)?;
    compile_program(c, schedule(c), lib)
}

fn compile_program(c: &Circuit, program: RoutingProgram, lib: &[GadgetSpec]) -> Result<CompiledPuzzle, CompileError> {
    let st = stack(&program, lib, LANE)?;
    let mut port_map = vec![Coord::ORIGIN; c.inputs()];
    for op in program.rows.first().into_iter().flatten() {
        if let Prim::Bool(i) = op.prim {
            let g = lib.iter().find(|g| g.name == "BOOL").expect("stacked");
            let out = g.outputs().next().expect("BOOL has an output");
            port_map[i] = out.cell.translate(anchor(op.track, 0, LANE));
        }
    }
    let instance = Instance::new(st.placements, BTreeMap::new()).expect("no clamps");
    Ok(CompiledPuzzle {
        instance,
        port_map,
        provenance: st.provenance,
        gadgets: st.gadgets,
        program,
    })
}

/// Rows of parts that make up a stock gadget, on physical tracks
/// relative to its anchor. Idle live tracks are filled in by [`compose`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plan {
    pub name: &'static str,
    pub inputs: Vec<(&'static str, usize)>,
    pub outputs: Vec<(&'static str, usize)>,
    pub rows: Vec<Vec<Op>>,
}

fn op(track: usize, prim: Prim) -> Op {
    Op { track, prim }
}

/// x xor y for x on track `i` and y on `i + 2`, result on `i`; uses tracks
/// `i..i + 4`. Four NANDs: m = x nand y, then (x nand m) nand (m nand y).
fn xor_rows(i: usize) -> Vec<Vec<Op>> {
    use Prim::*;
    vec![
        vec![op(i, Copy), op(i + 2, Copy)],
        vec![op(i + 1, And)],
        vec![op(i + 1, Not)],
        vec![op(i + 1, Copy)],
        vec![op(i, And), op(i + 2, And)],
        vec![op(i, Not), op(i + 2, Not)],
        vec![op(i + 1, MoveL)],
        vec![op(i, And)],
        vec![op(i, Not)],
    ]
}

/// The stock two-track gadgets as stacks of parts, wires `LANE` tracks
/// apart. CROSS swaps its wires with three XORs: s = a xor b, then
/// a xor s = b and s xor b = a.
pub fn stock_plans() -> Vec<Plan> {
    use Prim::*;
    let l = LANE;
    let mut cross = vec![vec![op(0, Copy), op(4, Copy)], vec![op(1, MoveR), op(5, MoveR)]];
    cross.extend(xor_rows(2));
    cross.push(vec![op(2, Copy)]);
    cross.push(vec![op(3, MoveR)]);
    cross.extend(xor_rows(0).into_iter().zip(xor_rows(4)).map(|(a, b)| [a, b].concat()));
    vec![
        Plan {
            name: "MOVE_R",
            inputs: vec![("x", 0)],
            outputs: vec![("y", l)],
            rows: (0..l).map(|t| vec![op(t, MoveR)]).collect(),
        },
        Plan {
            name: "MOVE_L",
            inputs: vec![("x", l)],
            outputs: vec![("y", 0)],
            rows: (0..l).rev().map(|t| vec![op(t, MoveL)]).collect(),
        },
        Plan {
            name: "COPY",
            inputs: vec![("x", 0)],
            outputs: vec![("l", 0), ("r", l)],
            rows: std::iter::once(vec![op(0, Copy)])
                .chain((1..l).map(|t| vec![op(t, MoveR)]))
                .collect(),
        },
        Plan {
            name: "CROSS",
            inputs: vec![("l", 0), ("r", l)],
            outputs: vec![("l", 0), ("r", l)],
            rows: cross,
        },
        Plan {
            name: "AND",
            inputs: vec![("l", 0), ("r", l)],
            outputs: vec![("y", 0)],
            rows: (1..l)
                .rev()
                .map(|t| vec![op(t, MoveL)])
                .chain([vec![op(0, And)]])
                .collect(),
        },
    ]
}

/// Stacks the parts named in `plan` into one gadget whose behavior rows
/// are read off by simulating the plan on every blue/red input.
pub fn compose(plan: &Plan, parts: &[GadgetSpec]) -> Result<GadgetSpec, CompileError> {
    let mut live: Vec<bool> = vec![false; 2 * LANE];
    for &(_, t) in &plan.inputs {
        live[t] = true;
    }
    let mut rows = Vec::new();
    for ops in &plan.rows {
        let mut covered = vec![false; live.len()];
        let mut next = live.clone();
        for o in ops {
            let (ins, outs) = port_tracks(o.prim);
            covered[o.track..o.track + o.prim.span()].fill(true);
            for &k in ins {
                next[o.track + k] = false;
            }
            for &k in outs {
                next[o.track + k] = true;
            }
        }
        let mut row: Vec<Op> = (0..live.len())
            .filter(|&t| live[t] && !covered[t])
            .map(|t| op(t, Prim::Pass))
            .chain(ops.iter().copied())
            .collect();
        row.sort_by_key(|o| o.track);
        rows.push(row);
        live = next;
    }
    let program = RoutingProgram {
        tracks: live.len(),
        rows,
    };
    let st = stack(&program, parts, 1)?;
    let bottom = -(st.depth - 1);
    let col = |t: usize| TRACK_PITCH * t as i64;
    let find = |role: PortRole, row: i64, t: usize| {
        st.gadgets
            .iter()
            .flat_map(|g| &g.ports)
            .find(|p| p.role == role && p.cell.row() == row && p.cell.col() == col(t))
            .cloned()
            .ok_or_else(|| CompileError::Compose(format!("{}: no port on track {t}", plan.name)))
    };
    let mut ports = Vec::new();
    for &(label, t) in &plan.inputs {
        ports.push(Port {
            label: label.to_string(),
            ..find(PortRole::Input, 0, t)?
        });
    }
    for &(label, t) in &plan.outputs {
        ports.push(Port {
            label: label.to_string(),
            ..find(PortRole::Output, bottom, t)?
        });
    }
    let behavior = (0..1u32 << plan.inputs.len())
        .map(|bits| {
            let mut vals = vec![None; program.tracks];
            let inputs: Vec<(String, Color)> = plan
                .inputs
                .iter()
                .enumerate()
                .map(|(k, &(label, t))| {
                    let v = bits >> (plan.inputs.len() - 1 - k) & 1 == 0;
                    vals[t] = Some(v);
                    (label.to_string(), Color::from_truth(v))
                })
                .collect();
            let vals = program.run(vals);
            let outputs = plan
                .outputs
                .iter()
                .map(|&(label, t)| (label.to_string(), Color::from_truth(vals[t].expect("output is live"))))
                .collect();
            BehaviorRow {
                inputs,
                outputs,
                expected_count: 1,
            }
        })
        .collect();
    let g = GadgetSpec {
        name: plan.name.to_string(),
        cells: st.placements,
        ports,
        fixing: vec![],
        behavior,
        height: st.depth,
    };
    check_structure(&g).map_err(|e| CompileError::Compose(e.to_string()))?;
    Ok(g)
}

/// `compile(cnf_to_circuit(f))`.
pub fn reduce_sat(f: &Cnf) -> Result<CompiledPuzzle, CompileError> {
    compile(&cnf_to_circuit(f))
}

/// Reads the assignment encoded by a solution of a compiled puzzle:
/// a blue BOOL output is true, red is false.
pub fn extract_assignment(p: &CompiledPuzzle, s: &Solution) -> Result<Vec<bool>, CompileError> {
    if check_solution(&p.instance, s) != Ok(true) {
        return Err(CompileError::InvalidSolution);
    }
    read_port_map(&p.instance, &p.port_map, s)
}

/// Same as [`extract_assignment`] but from a port map read from disk.
pub fn read_port_map(instance: &Instance, port_map: &[Coord], s: &Solution) -> Result<Vec<bool>, CompileError> {
    port_map
        .iter()
        .map(|&cell| {
            s.color_at(instance, cell, Direction::DOWN)
                .and_then(|c| c.truth())
                .ok_or(CompileError::InvalidSolution)
        })
        .collect()
}

/// Checks that cells of different instantiations meet only where an output
/// port faces an input port, and that tracks are far enough apart.
pub fn check_geometry(p: &CompiledPuzzle) -> Result<(), String> {
    if TRACK_PITCH < 4 {
        return Err(format!("track pitch {TRACK_PITCH} is below 4"));
    }
    let has_port = |g: usize, cell: Coord, edge: Direction, role: PortRole| {
        p.gadgets[g]
            .ports
            .iter()
            .any(|q| q.cell == cell && q.edge == edge && q.role == role)
    };
    for (a, d, b) in p.instance.joints() {
        let (ga, gb) = (p.provenance[&a], p.provenance[&b]);
        if ga == gb {
            continue;
        }
        let forward = has_port(ga, a, d, PortRole::Output) && has_port(gb, b, d.opposite(), PortRole::Input);
        let backward = has_port(ga, a, d, PortRole::Input) && has_port(gb, b, d.opposite(), PortRole::Output);
        if !(forward || backward) {
            return Err(format!(
                "{} (row {}) touches {} (row {}) at {a}/{b} outside declared ports",
                p.gadgets[ga].name, p.gadgets[ga].row, p.gadgets[gb].name, p.gadgets[gb].row
            ));
        }
    }
    Ok(())
}

/// Port-map sidecar: one `input i u w` line per input, `i` 1-based.
pub fn serialize_port_map(port_map: &[Coord]) -> String {
    port_map
        .iter()
        .enumerate()
        .map(|(i, c)| format!("input {} {} {}\n", i + 1, c.u, c.w))
        .collect()
}

pub fn parse_port_map(text: &str) -> Result<Vec<Coord>, CompileError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |message: &str| CompileError::PortMap {
            line,
            message: message.to_string(),
        };
        let Some(parts) = crate::instance::fields(raw, line).map_err(|e| err(&e.to_string()))? else {
            continue;
        };
        let ["input", i, u, w] = parts[..] else {
            return Err(err("expected `input i u w`"));
        };
        if i.parse::<usize>().ok() != Some(out.len() + 1) {
            return Err(err("inputs must be numbered 1, 2, ... in order"));
        }
        out.push(crate::instance::parse_coord(u, w, line).map_err(|e| err(&e.to_string()))?);
    }
    Ok(out)
}
