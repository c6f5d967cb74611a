//! The Tantrix tile catalogue.
//!
//! A tile is written as a six-letter color word: letter `k` is the color of
//! the line touching edge `k` when the tile sits in its base orientation. Each
//! of the three lines joins two edges and carries its own color, so a legal
//! word has three distinct colors, each exactly twice. The canonical word of a
//! tile is the lexicographically least of its six cyclic rotations under the
//! letter order `b < g < r < y`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::hexgrid::Direction;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    Blue,
    Green,
    Red,
    Yellow,
}

impl Color {
    pub const ALL: [Color; 4] = [Color::Blue, Color::Green, Color::Red, Color::Yellow];

    pub fn letter(self) -> char {
        match self {
            Color::Blue => 'b',
            Color::Green => 'g',
            Color::Red => 'r',
            Color::Yellow => 'y',
        }
    }

    pub fn from_letter(c: char) -> Option<Color> {
        match c {
            'b' => Some(Color::Blue),
            'g' => Some(Color::Green),
            'r' => Some(Color::Red),
            'y' => Some(Color::Yellow),
            _ => None,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// Truth value carried by a wire of this color: blue is true, red is false.
    pub fn truth(self) -> Option<bool> {
        match self {
            Color::Blue => Some(true),
            Color::Red => Some(false),
            _ => None,
        }
    }

    pub fn from_truth(value: bool) -> Color {
        if value {
            Color::Blue
        } else {
            Color::Red
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TileError {
    #[error("tile word must have 6 letters, got {0}")]
    BadLength(usize),
    #[error("unknown color letter {0:?}")]
    BadLetter(char),
    #[error("tile word {0:?} must use exactly three colors, each twice")]
    BadColorMultiplicity(String),
    #[error("tile word {0:?} has chord lengths {{3,3,3}}, which is not a Tantrix tile")]
    IllegalShape(String),
}

/// The four tile shapes, named by the multiset of their chord lengths.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Shape {
    /// Three short arcs `{1, 1, 1}`.
    Rond,
    /// One straight line and two short arcs `{1, 1, 3}`.
    Brid,
    /// One short arc and two long arcs `{1, 2, 2}`.
    Sint,
    /// Two long arcs and one straight line `{2, 2, 3}`.
    Chin,
}

impl Shape {
    pub fn name(self) -> &'static str {
        match self {
            Shape::Rond => "Rond",
            Shape::Brid => "Brid",
            Shape::Sint => "Sint",
            Shape::Chin => "Chin",
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Six colors, one per edge. Not necessarily a legal tile.
pub type Word = [Color; 6];

/// A legal tile in canonical orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TileCode(Word);

fn parse_letters(s: &str) -> Result<Word, TileError> {
    let letters: Vec<char> = s.chars().collect();
    if letters.len() != 6 {
        return Err(TileError::BadLength(letters.len()));
    }
    let mut word = [Color::Blue; 6];
    for (slot, &c) in word.iter_mut().zip(&letters) {
        *slot = Color::from_letter(c).ok_or(TileError::BadLetter(c))?;
    }
    Ok(word)
}

fn word_string(word: &Word) -> String {
    word.iter().map(|c| c.letter()).collect()
}

/// Sorted chord lengths of a word whose colors each appear exactly twice.
fn chord_lengths(word: &Word) -> [u8; 3] {
    let mut lengths = Vec::with_capacity(3);
    for color in Color::ALL {
        let pos: Vec<usize> = (0..6).filter(|&k| word[k] == color).collect();
        if let [i, j] = pos[..] {
            let d = j - i;
            lengths.push(d.min(6 - d) as u8);
        }
    }
    lengths.sort_unstable();
    [lengths[0], lengths[1], lengths[2]]
}

/// `rotate_word(w, r)[k] == w[(k - r) mod 6]`.
fn rotate_word(word: &Word, r: u8) -> Word {
    let mut out = *word;
    for (k, slot) in out.iter_mut().enumerate() {
        *slot = word[(k + 6 - r as usize) % 6];
    }
    out
}

/// Checks the three legality rules for a raw word.
pub fn validate_word(word: &Word) -> Result<(), TileError> {
    let mut counts = [0u8; 4];
    for c in word {
        counts[c.index()] += 1;
    }
    if counts.iter().filter(|&&n| n == 2).count() != 3 || counts.iter().any(|&n| n != 0 && n != 2) {
        return Err(TileError::BadColorMultiplicity(word_string(word)));
    }
    if chord_lengths(word) == [3, 3, 3] {
        return Err(TileError::IllegalShape(word_string(word)));
    }
    Ok(())
}

/// Validates a tile literal such as `"yggrry"`.
pub fn validate_tile(s: &str) -> Result<(), TileError> {
    validate_word(&parse_letters(s)?)
}

/// Canonical code of a word and the rotation that reproduces the word from it.
pub fn canonicalize_word(word: &Word) -> Result<(TileCode, u8), TileError> {
    validate_word(word)?;
    // rotate_word(word, 6 - s) is the word read from offset s
    let (best, shift) = (0..6u8)
        .map(|s| (rotate_word(word, (6 - s) % 6), s))
        .min()
        .expect("six rotations");
    // word[k] == best[(k - shift) mod 6], i.e. word is best rotated by `shift`
    Ok((TileCode(best), shift))
}

pub fn canonicalize(s: &str) -> Result<(TileCode, u8), TileError> {
    canonicalize_word(&parse_letters(s)?)
}

impl TileCode {
    pub fn word(&self) -> &Word {
        &self.0
    }

    /// Color at edge `k` in base orientation.
    pub fn base_color(&self, k: usize) -> Color {
        self.0[k]
    }

    pub fn shape(&self) -> Shape {
        shape_of(self)
    }

    pub fn has_color(&self, c: Color) -> bool {
        self.0.contains(&c)
    }

    /// Canonical code of the mirror image (see [`Direction::mirror`]).
    pub fn mirror(&self) -> (TileCode, u8) {
        let mut w = self.0;
        for d in Direction::ALL {
            w[d.mirror().index() as usize] = self.0[d.index() as usize];
        }
        canonicalize_word(&w).expect("mirror of a legal tile is legal")
    }
}

impl fmt::Display for TileCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&word_string(&self.0))
    }
}

impl FromStr for TileCode {
    type Err = TileError;

    /// Parses any rotation of a legal word and canonicalizes it.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        canonicalize(s).map(|(code, _)| code)
    }
}

pub fn shape_of(code: &TileCode) -> Shape {
    match chord_lengths(&code.0) {
        [1, 1, 1] => Shape::Rond,
        [1, 1, 3] => Shape::Brid,
        [1, 2, 2] => Shape::Sint,
        [2, 2, 3] => Shape::Chin,
        other => unreachable!("TileCode invariant violated: chords {other:?}"),
    }
}

/// A tile with a rotation (clockwise steps from its base orientation).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrientedTile {
    pub code: TileCode,
    pub rotation: u8,
}

impl OrientedTile {
    pub fn new(code: TileCode, rotation: u8) -> Self {
        OrientedTile {
            code,
            rotation: rotation % 6,
        }
    }

    pub fn color_at(&self, edge: Direction) -> Color {
        color_at(self, edge)
    }

    /// Colors at edges 0..5.
    pub fn colors(&self) -> Word {
        rotate_word(&self.code.0, self.rotation)
    }
}

pub fn color_at(t: &OrientedTile, edge: Direction) -> Color {
    t.code.0[(edge.index() as usize + 6 - t.rotation as usize) % 6]
}

pub fn rotate(t: OrientedTile, steps: i64) -> OrientedTile {
    OrientedTile {
        code: t.code,
        rotation: (t.rotation as i64 + steps).rem_euclid(6) as u8,
    }
}

/// All legal canonical tiles in lexicographic order.
pub fn enumerate_catalogue() -> Vec<TileCode> {
    let mut out = Vec::new();
    for n in 0..4usize.pow(6) {
        let mut word = [Color::Blue; 6];
        let mut rest = n;
        for slot in word.iter_mut().rev() {
            *slot = Color::ALL[rest % 4];
            rest /= 4;
        }
        if let Ok((code, 0)) = canonicalize_word(&word) {
            out.push(code);
        }
    }
    out
}
