//! Tantrix rotation puzzles: exact solving and counting, plus a compiler from
//! boolean circuits and CNF formulas to puzzles whose solutions correspond
//! one-to-one with satisfying assignments.

pub mod circuit;
pub mod compiler;
pub mod gadgets;
pub mod hexgrid;
pub mod instance;
pub mod render;
pub mod roundtrip;
pub mod solver;
pub mod tiles;
