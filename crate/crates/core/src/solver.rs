//! Exact solving and counting.
//!
//! Each placed cell is a variable whose domain is a bitmask over the six
//! rotations. Joint edges are binary constraints (the two colors must agree)
//! and clamps prune domains up front. Search maintains arc consistency; the
//! counter additionally splits the undecided cells into independent connected
//! components and multiplies their counts.
//!
//! Branching for counting picks the smallest domain, ties to the topmost
//! then leftmost cell.
//! Domains are narrowed in place and restored from a trail on backtracking.
//! Enumeration returns solutions in lexicographic order of their rotation
//! vectors: when there are few it lists them all and sorts, otherwise it
//! branches on cells in `(u, w)` order with ascending rotations.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use thiserror::Error;

use crate::hexgrid::{Coord, Direction};
use crate::instance::{Instance, Solution};
use crate::tiles::{OrientedTile, Word};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("brute force over {tiles} tiles exceeds the limit of {limit}")]
    TooLarge { tiles: usize, limit: usize },
}

pub const DEFAULT_BRUTE_FORCE_LIMIT: usize = 10;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Branching decisions tried.
    pub nodes: u64,
    /// Rotations removed by propagation.
    pub prunings: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveReport {
    pub count: BigUint,
    /// Present when enumeration was requested; at most `cap` entries.
    pub solutions: Option<Vec<Solution>>,
    pub stats: SearchStats,
}

const NONE: u32 = u32::MAX;
const FULL: u8 = 0b11_1111;

/// Constraint network of an instance. Cells are indexed in reading order,
/// top row first, so that ties in branching follow wires downward.
struct Network {
    cells: Vec<Coord>,
    /// Cell indices in `(u, w)` order.
    lex: Vec<u32>,
    neighbors: Vec<[u32; 6]>,
    /// `support[cell][edge][color]`: rotations showing `color` at `edge`.
    support: Vec<[[u8; 4]; 6]>,
    initial: Vec<u8>,
}

impl Network {
    fn new(instance: &Instance) -> Self {
        let mut cells: Vec<Coord> = instance.placements().keys().copied().collect();
        cells.sort_by_key(|c| (-c.row(), c.col()));
        let mut lex: Vec<u32> = (0..cells.len() as u32).collect();
        lex.sort_by_key(|&i| cells[i as usize]);
        let index: BTreeMap<Coord, u32> = cells.iter().enumerate().map(|(i, &c)| (c, i as u32)).collect();
        let mut neighbors = Vec::with_capacity(cells.len());
        let mut support = Vec::with_capacity(cells.len());
        let mut initial = Vec::with_capacity(cells.len());
        for &c in &cells {
            let mut nb = [NONE; 6];
            for (d, n) in c.neighbors() {
                if let Some(&j) = index.get(&n) {
                    nb[d.index() as usize] = j;
                }
            }
            neighbors.push(nb);
            let code = instance.placements()[&c];
            let mut sup = [[0u8; 4]; 6];
            for r in 0..6u8 {
                let colors = OrientedTile::new(code, r).colors();
                for (e, col) in colors.iter().enumerate() {
                    sup[e][col.index()] |= 1 << r;
                }
            }
            support.push(sup);
            initial.push(FULL);
        }
        for (&(c, d), &col) in instance.clamps() {
            let i = index[&c] as usize;
            initial[i] &= support[i][d.index() as usize][col.index()];
        }
        Network {
            cells,
            lex,
            neighbors,
            support,
            initial,
        }
    }

    fn len(&self) -> usize {
        self.cells.len()
    }
}

/// Cells below this many undecided are counted with component splitting at
/// every node; larger regions branch without it, since one scan per node
/// would make the search quadratic.
const SPLIT_BELOW: usize = 512;

/// Enumeration lists every solution and sorts them when there are at most
/// this many; otherwise it branches in cell order.
const SORT_ALL_UP_TO: u64 = 4096;

/// Set of cell indices with constant-time insert and remove and a fast
/// lowest-member query.
struct IndexSet {
    words: Vec<u64>,
    summary: Vec<u64>,
    len: usize,
}

impl IndexSet {
    fn new(n: usize) -> Self {
        let words = n.div_ceil(64);
        IndexSet {
            words: vec![0; words],
            summary: vec![0; words.div_ceil(64)],
            len: 0,
        }
    }

    fn insert(&mut self, i: usize) {
        let (w, b) = (i / 64, i % 64);
        if self.words[w] & 1 << b == 0 {
            self.words[w] |= 1 << b;
            self.summary[w / 64] |= 1 << (w % 64);
            self.len += 1;
        }
    }

    fn remove(&mut self, i: usize) {
        let (w, b) = (i / 64, i % 64);
        if self.words[w] & 1 << b != 0 {
            self.words[w] &= !(1 << b);
            if self.words[w] == 0 {
                self.summary[w / 64] &= !(1 << (w % 64));
            }
            self.len -= 1;
        }
    }

    fn first(&self) -> Option<usize> {
        let (s, bits) = self.summary.iter().enumerate().find(|(_, &x)| x != 0)?;
        let w = s * 64 + bits.trailing_zeros() as usize;
        Some(w * 64 + self.words[w].trailing_zeros() as usize)
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &x)| {
            let mut bits = x;
            std::iter::from_fn(move || {
                (bits != 0).then(|| {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    w * 64 + b
                })
            })
        })
    }
}

struct Search<'n> {
    net: &'n Network,
    doms: Vec<u8>,
    /// Previous domains, undone on backtracking.
    trail: Vec<(u32, u8)>,
    /// Undecided cells of the region being searched, by domain size.
    by_size: [IndexSet; 7],
    tracked: Vec<bool>,
    queue: Vec<u32>,
    queued: Vec<bool>,
    mark: Vec<u32>,
    epoch: u32,
    stats: SearchStats,
}

impl<'n> Search<'n> {
    fn new(net: &'n Network) -> Self {
        let n = net.len();
        Search {
            net,
            doms: net.initial.clone(),
            trail: Vec::new(),
            by_size: std::array::from_fn(|_| IndexSet::new(n)),
            tracked: vec![false; n],
            queue: Vec::new(),
            queued: vec![false; n],
            mark: vec![0; n],
            epoch: 0,
            stats: SearchStats::default(),
        }
    }

    fn set(&mut self, i: usize, dom: u8) {
        let old = self.doms[i];
        self.trail.push((i as u32, old));
        self.doms[i] = dom;
        if self.tracked[i] {
            self.by_size[old.count_ones() as usize].remove(i);
            self.by_size[dom.count_ones() as usize].insert(i);
        }
    }

    fn undo(&mut self, to: usize) {
        while self.trail.len() > to {
            let (i, old) = self.trail.pop().expect("trail is longer than `to`");
            let i = i as usize;
            if self.tracked[i] {
                self.by_size[self.doms[i].count_ones() as usize].remove(i);
                self.by_size[old.count_ones() as usize].insert(i);
            }
            self.doms[i] = old;
        }
    }

    fn track(&mut self, cells: impl IntoIterator<Item = usize>) {
        for i in cells {
            self.tracked[i] = true;
            self.by_size[self.doms[i].count_ones() as usize].insert(i);
        }
    }

    fn untrack_all(&mut self) {
        for k in 0..7 {
            let cells: Vec<usize> = self.by_size[k].iter().collect();
            for i in cells {
                self.by_size[k].remove(i);
                self.tracked[i] = false;
            }
        }
    }

    fn undecided(&self) -> usize {
        self.by_size[2..].iter().map(|s| s.len).sum()
    }

    /// Smallest domain first, ties to the lowest cell index.
    fn pick(&self) -> Option<usize> {
        self.by_size[2..].iter().find_map(IndexSet::first)
    }

    fn push(&mut self, i: usize) {
        if !self.queued[i] {
            self.queued[i] = true;
            self.queue.push(i as u32);
        }
    }

    fn clear_queue(&mut self) {
        for &i in &self.queue {
            self.queued[i as usize] = false;
        }
        self.queue.clear();
    }

    /// Arc consistency from the queued cells. False on a wipe-out.
    fn propagate(&mut self) -> bool {
        let net = self.net;
        while let Some(a) = self.queue.pop() {
            let a = a as usize;
            self.queued[a] = false;
            let dom_a = self.doms[a];
            for e in 0..6 {
                let b = net.neighbors[a][e];
                if b == NONE {
                    continue;
                }
                let b = b as usize;
                let opp = (e + 3) % 6;
                let mut allowed = 0u8;
                for (col, &mask) in net.support[a][e].iter().enumerate() {
                    if mask & dom_a != 0 {
                        allowed |= net.support[b][opp][col];
                    }
                }
                let narrowed = self.doms[b] & allowed;
                if narrowed != self.doms[b] {
                    self.stats.prunings += (self.doms[b] ^ narrowed).count_ones() as u64;
                    self.set(b, narrowed);
                    if narrowed == 0 {
                        self.clear_queue();
                        return false;
                    }
                    self.push(b);
                }
            }
        }
        true
    }

    fn initial(&mut self) -> bool {
        if self.doms.contains(&0) {
            return false;
        }
        for i in 0..self.doms.len() {
            self.push(i);
        }
        let ok = self.propagate();
        self.trail.clear();
        ok
    }

    /// Fixes `cell` and propagates. The caller undoes to the returned mark.
    fn assign(&mut self, cell: usize, rotation: u32) -> (usize, bool) {
        self.stats.nodes += 1;
        let mark = self.trail.len();
        self.set(cell, 1 << rotation);
        self.push(cell);
        (mark, self.propagate())
    }

    /// Connected components of the undecided cells in `scope`.
    fn components(&mut self, scope: &[u32]) -> Vec<Vec<u32>> {
        self.epoch += 1;
        let epoch = self.epoch;
        let doms = &self.doms;
        let mut out = Vec::new();
        for &start in scope {
            let s = start as usize;
            if doms[s].count_ones() < 2 || self.mark[s] == epoch {
                continue;
            }
            self.mark[s] = epoch;
            let mut comp = vec![start];
            let mut head = 0;
            while head < comp.len() {
                let a = comp[head] as usize;
                head += 1;
                for &b in &self.net.neighbors[a] {
                    if b != NONE && self.mark[b as usize] != epoch && doms[b as usize].count_ones() > 1 {
                        self.mark[b as usize] = epoch;
                        comp.push(b);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Number of completions of the current domains restricted to `scope`.
    /// With a cap the result is exact below the cap and at least the cap
    /// otherwise.
    fn count(&mut self, scope: &[u32], cap: Option<u64>) -> BigUint {
        let mut product = BigUint::from(1u8);
        for comp in self.components(scope) {
            let n = if comp.len() < SPLIT_BELOW {
                self.count_small(&comp, cap)
            } else {
                self.track(comp.iter().map(|&c| c as usize));
                let n = self.count_large(cap);
                self.untrack_all();
                n
            };
            if n == BigUint::ZERO {
                return n;
            }
            product *= n;
        }
        product
    }

    fn count_small(&mut self, comp: &[u32], cap: Option<u64>) -> BigUint {
        let cell = comp
            .iter()
            .map(|&c| c as usize)
            .min_by_key(|&c| (self.doms[c].count_ones(), c))
            .expect("non-empty component");
        let mut total = BigUint::ZERO;
        let mut bits = self.doms[cell];
        while bits != 0 {
            let r = bits.trailing_zeros();
            bits &= bits - 1;
            let (mark, ok) = self.assign(cell, r);
            if ok {
                total += self.count(comp, cap);
            }
            self.undo(mark);
            if cap.is_some_and(|c| total >= BigUint::from(c)) {
                break;
            }
        }
        total
    }

    /// Counts the tracked region, branching on the smallest domain until
    /// few enough cells remain to split into components.
    fn count_large(&mut self, cap: Option<u64>) -> BigUint {
        if self.undecided() < SPLIT_BELOW {
            let rest: Vec<u32> = self.by_size[2..]
                .iter()
                .flat_map(IndexSet::iter)
                .map(|i| i as u32)
                .collect();
            let mut rest = rest;
            rest.sort_unstable();
            return self.count(&rest, cap);
        }
        let cell = self.pick().expect("undecided cells remain");
        let mut total = BigUint::ZERO;
        let mut bits = self.doms[cell];
        while bits != 0 {
            let r = bits.trailing_zeros();
            bits &= bits - 1;
            let (mark, ok) = self.assign(cell, r);
            if ok {
                total += self.count_large(cap);
            }
            self.undo(mark);
            if cap.is_some_and(|c| total >= BigUint::from(c)) {
                break;
            }
        }
        total
    }

    /// Every completion of the tracked cells, in search order.
    fn collect(&mut self, out: &mut Vec<Vec<u8>>) {
        let Some(cell) = self.pick() else {
            out.push(self.doms.clone());
            return;
        };
        let mut bits = self.doms[cell];
        while bits != 0 {
            let r = bits.trailing_zeros();
            bits &= bits - 1;
            let (mark, ok) = self.assign(cell, r);
            if ok {
                self.collect(out);
            }
            self.undo(mark);
        }
    }

    /// Completions in lexicographic order, branching on cells in `(u, w)`
    /// order.
    fn enumerate(&mut self, from: usize, cap: usize, out: &mut Vec<Vec<u8>>) {
        let lex = &self.net.lex;
        let Some(pos) = (from..lex.len()).find(|&k| self.doms[lex[k] as usize].count_ones() > 1) else {
            out.push(self.doms.clone());
            return;
        };
        let cell = lex[pos] as usize;
        let mut bits = self.doms[cell];
        while bits != 0 && out.len() < cap {
            let r = bits.trailing_zeros();
            bits &= bits - 1;
            let (mark, ok) = self.assign(cell, r);
            if ok {
                self.enumerate(pos + 1, cap, out);
            }
            self.undo(mark);
        }
    }
}

fn count_capped(instance: &Instance, cap: Option<u64>) -> (BigUint, SearchStats) {
    let net = Network::new(instance);
    let mut search = Search::new(&net);
    let count = if search.initial() {
        let scope: Vec<u32> = (0..net.len() as u32).collect();
        search.count(&scope, cap)
    } else {
        BigUint::ZERO
    };
    (count, search.stats)
}

fn to_solution(net: &Network, doms: &[u8]) -> Solution {
    Solution::new(
        net.cells
            .iter()
            .zip(doms)
            .map(|(&c, &d)| (c, d.trailing_zeros() as u8))
            .collect(),
    )
}

/// Exact number of solutions.
pub fn count_solutions(instance: &Instance) -> BigUint {
    count_capped(instance, None).0
}

/// Whether at least one solution exists.
pub fn decide(instance: &Instance) -> bool {
    count_capped(instance, Some(1)).0 >= BigUint::from(1u8)
}

/// Whether exactly one solution exists.
pub fn is_unique(instance: &Instance) -> bool {
    count_capped(instance, Some(2)).0 == BigUint::from(1u8)
}

/// Number of solutions, saturating at `cap`.
pub fn count_up_to(instance: &Instance, cap: u64) -> u64 {
    let n = count_capped(instance, Some(cap)).0;
    u64::try_from(n).map_or(cap, |n| n.min(cap))
}

/// Up to `cap` solutions in lexicographic order of their rotation vectors.
pub fn enumerate_solutions(instance: &Instance, cap: usize) -> Vec<Solution> {
    enumerate_with_stats(instance, cap).0
}

fn enumerate_with_stats(instance: &Instance, cap: usize) -> (Vec<Solution>, SearchStats) {
    if cap == 0 {
        return (vec![], SearchStats::default());
    }
    let (few, mut stats) = count_capped(instance, Some(SORT_ALL_UP_TO + 1));
    let net = Network::new(instance);
    let mut search = Search::new(&net);
    let mut raw = Vec::new();
    if search.initial() {
        if few <= BigUint::from(SORT_ALL_UP_TO) {
            search.track(0..net.len());
            search.collect(&mut raw);
            raw.sort_by_cached_key(|d| {
                net.lex
                    .iter()
                    .map(|&i| d[i as usize].trailing_zeros())
                    .collect::<Vec<_>>()
            });
            raw.truncate(cap);
        } else {
            search.enumerate(0, cap, &mut raw);
        }
    }
    stats.nodes += search.stats.nodes;
    stats.prunings += search.stats.prunings;
    let sols = raw.iter().map(|d| to_solution(&net, d)).collect();
    (sols, stats)
}

/// Counts all solutions and optionally lists up to `enumerate_cap` of them.
pub fn solve(instance: &Instance, enumerate_cap: Option<usize>) -> SolveReport {
    let (count, mut stats) = count_capped(instance, None);
    let solutions = enumerate_cap.map(|cap| {
        let (sols, more) = enumerate_with_stats(instance, cap);
        stats.nodes += more.nodes;
        stats.prunings += more.prunings;
        sols
    });
    SolveReport {
        count,
        solutions,
        stats,
    }
}

/// Reference count: tries all `6^n` rotation vectors.
pub fn brute_force_count(instance: &Instance, limit: usize) -> Result<u64, SolverError> {
    let n = instance.len();
    if n > limit {
        return Err(SolverError::TooLarge { tiles: n, limit });
    }
    let cells: Vec<Coord> = instance.placements().keys().copied().collect();
    let pos = |c: &Coord| cells.iter().position(|x| x == c).unwrap();
    let words: Vec<[Word; 6]> = cells
        .iter()
        .map(|c| {
            let code = instance.placements()[c];
            std::array::from_fn(|r| OrientedTile::new(code, r as u8).colors())
        })
        .collect();
    let joints: Vec<(usize, Direction, usize)> =
        instance.joints().iter().map(|(a, d, b)| (pos(a), *d, pos(b))).collect();
    let clamps: Vec<(usize, Direction, _)> = instance
        .clamps()
        .iter()
        .map(|(&(c, d), &col)| (pos(&c), d, col))
        .collect();

    let mut rot = vec![0usize; n];
    let mut count = 0u64;
    loop {
        let ok = joints
            .iter()
            .all(|&(a, d, b)| words[a][rot[a]][d.index() as usize] == words[b][rot[b]][d.opposite().index() as usize])
            && clamps
                .iter()
                .all(|&(a, d, col)| words[a][rot[a]][d.index() as usize] == col);
        if ok {
            count += 1;
        }
        // odometer
        let mut k = 0;
        loop {
            if k == n {
                return Ok(count);
            }
            rot[k] += 1;
            if rot[k] < 6 {
                break;
            }
            rot[k] = 0;
            k += 1;
        }
    }
}
