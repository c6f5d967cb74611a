//! Hexagonal coordinates.
//!
//! Cells are pairs `(u, w)` of integers. Two distinct cells `(u, w)` and
//! `(v, x)` are adjacent iff one of
//!
//! 1. `u = v` and `|w - x| = 1`
//! 2. `|u - v| = 1` and `w = x`
//! 3. `u - v = 1` and `w - x = 1`
//! 4. `u - v = -1` and `w - x = -1`
//!
//! holds. The six directions are indexed so that consecutive indices are
//! consecutive around the hexagon; a tile rotated by one step therefore shifts
//! its edge colors by one index.
//!
//! For layout purposes a cell also has an *offset* position `(col, row)` with
//! `col = u` and `row = w - floor(u / 2)`. In offset space a column is a
//! straight vertical line and a row is a horizontal zigzag, which is how the
//! compiler lays out wire tracks.

use std::fmt;

/// A cell of the hexagonal grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Coord {
    pub u: i64,
    pub w: i64,
}

impl Coord {
    pub const ORIGIN: Coord = Coord { u: 0, w: 0 };

    pub const fn new(u: i64, w: i64) -> Self {
        Coord { u, w }
    }

    /// Cell at offset position `(col, row)`.
    pub fn from_offset(col: i64, row: i64) -> Self {
        Coord {
            u: col,
            w: row + col.div_euclid(2),
        }
    }

    /// Offset column (equal to `u`).
    pub fn col(self) -> i64 {
        self.u
    }

    /// Offset row: `w - floor(u / 2)`.
    pub fn row(self) -> i64 {
        self.w - self.u.div_euclid(2)
    }

    pub fn neighbor(self, d: Direction) -> Coord {
        neighbor(self, d)
    }

    pub fn neighbors(self) -> impl Iterator<Item = (Direction, Coord)> {
        Direction::ALL.into_iter().map(move |d| (d, neighbor(self, d)))
    }

    pub fn translate(self, by: Coord) -> Coord {
        Coord {
            u: self.u + by.u,
            w: self.w + by.w,
        }
    }

    /// Reflection across the vertical axis `u = 0`; rows are preserved.
    pub fn mirror(self) -> Coord {
        Coord {
            u: -self.u,
            w: self.w - self.u,
        }
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u, self.w)
    }
}

/// One of the six edge directions of a hexagon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Direction(u8);

const OFFSETS: [(i64, i64); 6] = [(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)];

impl Direction {
    pub const ALL: [Direction; 6] = [
        Direction(0),
        Direction(1),
        Direction(2),
        Direction(3),
        Direction(4),
        Direction(5),
    ];

    /// Towards `w + 1` (upstream in compiled layouts).
    pub const UP: Direction = Direction(2);
    /// Towards `w - 1` (downstream in compiled layouts).
    pub const DOWN: Direction = Direction(5);

    pub fn new(index: u8) -> Option<Direction> {
        (index < 6).then_some(Direction(index))
    }

    pub fn index(self) -> u8 {
        self.0
    }

    pub fn offset(self) -> (i64, i64) {
        OFFSETS[self.0 as usize]
    }

    pub fn opposite(self) -> Direction {
        Direction((self.0 + 3) % 6)
    }

    /// Direction `steps` positions further around the hexagon.
    pub fn rotate(self, steps: i64) -> Direction {
        Direction((self.0 as i64 + steps).rem_euclid(6) as u8)
    }

    /// Image of this direction under [`Coord::mirror`].
    pub fn mirror(self) -> Direction {
        Direction((10 - self.0) % 6)
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn neighbor(c: Coord, d: Direction) -> Coord {
    let (du, dw) = d.offset();
    Coord {
        u: c.u + du,
        w: c.w + dw,
    }
}

pub fn opposite(d: Direction) -> Direction {
    d.opposite()
}

/// The direction `d` with `neighbor(a, d) == b`, if the cells are adjacent.
pub fn adjacency(a: Coord, b: Coord) -> Option<Direction> {
    let delta = (b.u - a.u, b.w - a.w);
    OFFSETS.iter().position(|&o| o == delta).map(|i| Direction(i as u8))
}
