//! End-to-end check of the CNF reduction on small formulas.
//!
//! The model set comes from evaluating clauses directly over every
//! assignment and never touches the circuit, compiler or solver.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use rand::Rng;

use crate::circuit::{assignments, Cnf};
use crate::compiler::{extract_assignment, reduce_sat, CompileError};
use crate::solver::{count_solutions, enumerate_solutions};

pub const DEFAULT_ENUMERATE_LIMIT: usize = 64;

/// Satisfying assignments of `f`, variable 1 varying slowest.
pub fn brute_force_models(f: &Cnf) -> Vec<Vec<bool>> {
    assignments(f.vars).filter(|a| f.satisfied_by(a)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundtripReport {
    pub models: Vec<Vec<bool>>,
    pub puzzle_count: BigUint,
    pub tiles: usize,
    /// Assignments read from every puzzle solution, when the count is at
    /// most the enumeration limit.
    pub extracted: Option<Vec<Vec<bool>>>,
}

impl RoundtripReport {
    pub fn counts_match(&self) -> bool {
        self.puzzle_count == BigUint::from(self.models.len())
    }

    /// Extraction hits every model exactly once. `None` when solutions
    /// were not enumerated.
    pub fn bijection(&self) -> Option<bool> {
        self.extracted.as_ref().map(|got| {
            let distinct: BTreeSet<&Vec<bool>> = got.iter().collect();
            let models: BTreeSet<&Vec<bool>> = self.models.iter().collect();
            distinct.len() == got.len() && distinct == models
        })
    }

    pub fn pass(&self) -> bool {
        self.counts_match() && self.bijection() != Some(false)
    }
}

pub fn roundtrip(f: &Cnf, enumerate_limit: usize) -> Result<RoundtripReport, CompileError> {
    let models = brute_force_models(f);
    let p = reduce_sat(f)?;
    let puzzle_count = count_solutions(&p.instance);
    let extracted = if puzzle_count <= BigUint::from(enumerate_limit) {
        let sols = enumerate_solutions(&p.instance, enumerate_limit + 1);
        Some(
            sols.iter()
                .map(|s| extract_assignment(&p, s))
                .collect::<Result<Vec<_>, _>>()?,
        )
    } else {
        None
    };
    Ok(RoundtripReport {
        models,
        puzzle_count,
        tiles: p.instance.len(),
        extracted,
    })
}

/// A random CNF with `1..=max_vars` variables, `0..=max_clauses` clauses
/// and `1..=max_lits` literals per clause.
pub fn random_cnf<R: Rng>(rng: &mut R, max_vars: usize, max_clauses: usize, max_lits: usize) -> Cnf {
    let vars = rng.gen_range(1..=max_vars);
    let clauses = (0..rng.gen_range(0..=max_clauses))
        .map(|_| {
            (0..rng.gen_range(1..=max_lits))
                .map(|_| {
                    let v = rng.gen_range(1..=vars as i64);
                    if rng.gen_bool(0.5) {
                        -v
                    } else {
                        v
                    }
                })
                .collect()
        })
        .collect();
    Cnf { vars, clauses }
}
