//! Boolean circuits with AND and NOT gates, and a CNF frontend.
//!
//! A circuit over `n` inputs is a sequence of instructions whose first `n`
//! entries are the inputs; every later entry is `AND(j, k)` or `NOT(j)` with
//! `j <= k < i`. The last instruction is the output. Instruction numbers in
//! the text formats are 1-based; the in-memory representation is 0-based.
//!
//! Circuit text format:
//!
//! ```text
//! # comment
//! n 2
//! and 1 2
//! not 3
//! ```

use std::fmt;

use thiserror::Error;

pub const DEFAULT_INPUT_LIMIT: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    Input(usize),
    And(usize, usize),
    Not(usize),
}

impl Gate {
    /// Operands of the gate (0-based instruction indices).
    pub fn operands(&self) -> Vec<usize> {
        match *self {
            Gate::Input(_) => vec![],
            Gate::And(j, k) => vec![j, k],
            Gate::Not(j) => vec![j],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("circuit needs at least one input")]
    NoInputs,
    #[error("instruction {index}: operand {operand} must refer to an earlier instruction")]
    BadOperand { index: usize, operand: usize },
    #[error("instruction {index}: AND operands must satisfy j <= k")]
    UnorderedOperands { index: usize },
    #[error("instruction {index}: inputs must come first and in order")]
    MisplacedInput { index: usize },
    #[error("assignment has {got} values, circuit has {expected} inputs")]
    LengthMismatch { expected: usize, got: usize },
    #[error("{inputs} inputs exceed the brute-force limit of {limit}")]
    TooLarge { inputs: usize, limit: usize },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Circuit {
    n: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    /// Circuit with inputs `0..n` followed by `gates`.
    pub fn new(n: usize, gates: impl IntoIterator<Item = Gate>) -> Result<Self, CircuitError> {
        let all: Vec<Gate> = (0..n).map(Gate::Input).chain(gates).collect();
        Self::from_instructions(n, all)
    }

    pub fn from_instructions(n: usize, gates: Vec<Gate>) -> Result<Self, CircuitError> {
        if n == 0 {
            return Err(CircuitError::NoInputs);
        }
        for (i, g) in gates.iter().enumerate() {
            match *g {
                Gate::Input(x) if x == i && i < n => {}
                Gate::Input(_) => return Err(CircuitError::MisplacedInput { index: i }),
                _ if i < n => return Err(CircuitError::MisplacedInput { index: i }),
                Gate::And(j, k) if j > k => return Err(CircuitError::UnorderedOperands { index: i }),
                _ => {
                    if let Some(&bad) = g.operands().iter().find(|&&o| o >= i) {
                        return Err(CircuitError::BadOperand { index: i, operand: bad });
                    }
                }
            }
        }
        if gates.len() < n {
            return Err(CircuitError::MisplacedInput { index: gates.len() });
        }
        Ok(Circuit { n, gates })
    }

    pub fn inputs(&self) -> usize {
        self.n
    }

    pub fn instructions(&self) -> &[Gate] {
        &self.gates
    }

    pub fn output(&self) -> usize {
        self.gates.len() - 1
    }

    /// Value of every instruction under `a`.
    pub fn trace(&self, a: &[bool]) -> Result<Vec<bool>, CircuitError> {
        if a.len() != self.n {
            return Err(CircuitError::LengthMismatch {
                expected: self.n,
                got: a.len(),
            });
        }
        let mut vals = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let v = match *g {
                Gate::Input(x) => a[x],
                Gate::And(j, k) => vals[j] && vals[k],
                Gate::Not(j) => !vals[j],
            };
            vals.push(v);
        }
        Ok(vals)
    }

    pub fn evaluate(&self, a: &[bool]) -> Result<bool, CircuitError> {
        Ok(self.trace(a)?[self.output()])
    }

    /// Satisfying assignments, by trying all `2^n`.
    pub fn models(&self, limit: usize) -> Result<Vec<Vec<bool>>, CircuitError> {
        if self.n > limit {
            return Err(CircuitError::TooLarge { inputs: self.n, limit });
        }
        Ok(assignments(self.n)
            .filter(|a| self.evaluate(a).expect("length matches"))
            .collect())
    }

    pub fn count_sat(&self, limit: usize) -> Result<u64, CircuitError> {
        Ok(self.models(limit)?.len() as u64)
    }
}

/// All assignments of `n` variables; variable 0 varies slowest.
pub fn assignments(n: usize) -> impl Iterator<Item = Vec<bool>> {
    (0..1u64 << n).map(move |bits| (0..n).map(|v| bits >> (n - 1 - v) & 1 == 1).collect())
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n {}", self.n)?;
        for g in &self.gates[self.n..] {
            match *g {
                Gate::And(j, k) => writeln!(f, "and {} {}", j + 1, k + 1)?,
                Gate::Not(j) => writeln!(f, "not {}", j + 1)?,
                Gate::Input(_) => unreachable!("inputs only in the prefix"),
            }
        }
        Ok(())
    }
}

pub fn parse_circuit(text: &str) -> Result<Circuit, CircuitError> {
    let syntax = |line: usize, message: &str| CircuitError::Syntax {
        line,
        message: message.to_string(),
    };
    let mut n = None;
    let mut gates = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = t.split_whitespace().collect();
        let num = |s: &str| -> Result<usize, CircuitError> {
            s.parse::<usize>()
                .map_err(|_| syntax(line, "expected a positive integer"))
        };
        let idx1 = |s: &str| -> Result<usize, CircuitError> {
            match num(s)? {
                0 => Err(syntax(line, "instruction numbers start at 1")),
                v => Ok(v - 1),
            }
        };
        match (parts[0], n) {
            ("n", None) if parts.len() == 2 => {
                let count = num(parts[1])?;
                gates.extend((0..count).map(Gate::Input));
                n = Some(count);
            }
            ("and", Some(_)) if parts.len() == 3 => gates.push(Gate::And(idx1(parts[1])?, idx1(parts[2])?)),
            ("not", Some(_)) if parts.len() == 2 => gates.push(Gate::Not(idx1(parts[1])?)),
            (_, None) => return Err(syntax(line, "expected header `n <inputs>`")),
            _ => return Err(syntax(line, "expected `and j k` or `not j`")),
        }
    }
    let n = n.ok_or_else(|| syntax(text.lines().count().max(1), "missing header `n <inputs>`"))?;
    Circuit::from_instructions(n, gates)
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CnfError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("header declares {declared} clauses, found {found}")]
    HeaderMismatch { declared: usize, found: usize },
    #[error("literal {literal} exceeds the {vars} declared variables")]
    VariableOutOfRange { literal: i64, vars: usize },
    #[error("line {line}: empty clause")]
    EmptyClause { line: usize },
}

/// A formula in conjunctive normal form. Literals are signed 1-based
/// variable numbers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cnf {
    pub vars: usize,
    pub clauses: Vec<Vec<i64>>,
}

impl Cnf {
    pub fn new(vars: usize, clauses: Vec<Vec<i64>>) -> Result<Self, CnfError> {
        for c in &clauses {
            if c.is_empty() {
                return Err(CnfError::EmptyClause { line: 0 });
            }
            if let Some(&l) = c.iter().find(|&&l| l == 0 || l.unsigned_abs() as usize > vars) {
                return Err(CnfError::VariableOutOfRange { literal: l, vars });
            }
        }
        Ok(Cnf { vars, clauses })
    }

    pub fn satisfied_by(&self, a: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|&l| a[l.unsigned_abs() as usize - 1] == (l > 0)))
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                out.push_str(&format!("{l} "));
            }
            out.push_str("0\n");
        }
        out
    }
}

pub fn parse_dimacs(text: &str) -> Result<Cnf, CnfError> {
    let syntax = |line: usize, message: &str| CnfError::Syntax {
        line,
        message: message.to_string(),
    };
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<i64> = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('c') {
            continue;
        }
        if t.starts_with('p') {
            let parts: Vec<&str> = t.split_whitespace().collect();
            if header.is_some() {
                return Err(syntax(line, "duplicate problem line"));
            }
            let (Some(&"p"), Some(&"cnf"), Some(v), Some(c), None) =
                (parts.first(), parts.get(1), parts.get(2), parts.get(3), parts.get(4))
            else {
                return Err(syntax(line, "expected `p cnf <vars> <clauses>`"));
            };
            let v: usize = v.parse().map_err(|_| syntax(line, "bad variable count"))?;
            let c: usize = c.parse().map_err(|_| syntax(line, "bad clause count"))?;
            if v == 0 {
                return Err(syntax(line, "at least one variable is required"));
            }
            header = Some((v, c));
            continue;
        }
        let Some((vars, _)) = header else {
            return Err(syntax(line, "clause before the `p cnf` line"));
        };
        for tok in t.split_whitespace() {
            let lit: i64 = tok.parse().map_err(|_| syntax(line, "expected an integer literal"))?;
            if lit == 0 {
                if current.is_empty() {
                    return Err(CnfError::EmptyClause { line });
                }
                clauses.push(std::mem::take(&mut current));
            } else if lit.unsigned_abs() as usize > vars {
                return Err(CnfError::VariableOutOfRange { literal: lit, vars });
            } else {
                current.push(lit);
            }
        }
    }
    let Some((vars, declared)) = header else {
        return Err(syntax(last_line.max(1), "missing `p cnf` line"));
    };
    if !current.is_empty() {
        return Err(syntax(last_line, "last clause is not terminated by 0"));
    }
    if clauses.len() != declared {
        return Err(CnfError::HeaderMismatch {
            declared,
            found: clauses.len(),
        });
    }
    Ok(Cnf { vars, clauses })
}

/// Lowers a CNF to an AND/NOT circuit with the same inputs and the same
/// satisfying assignments.
///
/// Each clause `l1 | ... | lp` becomes `NOT(AND(NOT l1', ..., NOT lp'))`
/// with left-associated binary ANDs, where `li'` is the input gate of a
/// positive literal or a fresh `NOT` of the input for a negative one. Clause
/// gates are conjoined left to right as soon as they are built. A CNF
/// without clauses is lowered as the tautology `x1 | !x1`.
pub fn cnf_to_circuit(f: &Cnf) -> Circuit {
    let mut gates: Vec<Gate> = (0..f.vars).map(Gate::Input).collect();
    let mut push = |g: Gate| {
        gates.push(g);
        gates.len() - 1
    };
    let tautology = [vec![1, -1]];
    let clauses: &[Vec<i64>] = if f.clauses.is_empty() { &tautology } else { &f.clauses };
    let mut conj: Option<usize> = None;
    for clause in clauses {
        let mut acc: Option<usize> = None;
        for &lit in clause {
            let var = lit.unsigned_abs() as usize - 1;
            let lit_gate = if lit > 0 { var } else { push(Gate::Not(var)) };
            let negated = push(Gate::Not(lit_gate));
            acc = Some(match acc {
                None => negated,
                Some(a) => push(Gate::And(a, negated)),
            });
        }
        let clause_gate = push(Gate::Not(acc.expect("non-empty clause")));
        conj = Some(match conj {
            None => clause_gate,
            Some(c) => push(Gate::And(c, clause_gate)),
        });
    }
    Circuit::from_instructions(f.vars, gates).expect("lowering respects j <= k < i")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn circ(n: usize, gates: &[Gate]) -> Circuit {
        Circuit::new(n, gates.iter().copied()).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(circ(1, &[]).evaluate(&[true]), Ok(true));
        assert_eq!(circ(2, &[Gate::And(0, 1)]).evaluate(&[true, false]), Ok(false));
        assert_eq!(circ(1, &[Gate::Not(0)]).evaluate(&[false]), Ok(true));
        assert_eq!(
            circ(1, &[]).evaluate(&[true, true]),
            Err(CircuitError::LengthMismatch { expected: 1, got: 2 })
        );
    }

    #[test]
    fn count_sat_examples() {
        assert_eq!(circ(1, &[]).count_sat(20), Ok(1));
        assert_eq!(circ(1, &[Gate::Not(0), Gate::And(0, 1)]).count_sat(20), Ok(0));
        assert_eq!(circ(2, &[Gate::And(0, 1)]).count_sat(20), Ok(1));
        assert_eq!(
            circ(3, &[]).count_sat(2),
            Err(CircuitError::TooLarge { inputs: 3, limit: 2 })
        );
    }

    #[test]
    fn structural_checks() {
        assert_eq!(Circuit::new(0, []), Err(CircuitError::NoInputs));
        assert_eq!(
            Circuit::new(1, [Gate::Not(1)]),
            Err(CircuitError::BadOperand { index: 1, operand: 1 })
        );
        assert_eq!(
            Circuit::new(2, [Gate::And(1, 0)]),
            Err(CircuitError::UnorderedOperands { index: 2 })
        );
        assert_eq!(
            Circuit::new(1, [Gate::Input(1)]),
            Err(CircuitError::MisplacedInput { index: 1 })
        );
    }

    #[test]
    fn circuit_text_round_trip() {
        let c = parse_circuit("# demo\nn 2\nand 1 2\nnot 3\n").unwrap();
        assert_eq!(c, circ(2, &[Gate::And(0, 1), Gate::Not(2)]));
        assert_eq!(parse_circuit(&c.to_string()).unwrap(), c);
        assert!(matches!(
            parse_circuit("and 1 2"),
            Err(CircuitError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            parse_circuit("n 1\nnot 0"),
            Err(CircuitError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_circuit("n 1\nnot 2"),
            Err(CircuitError::BadOperand { .. })
        ));
        assert_eq!(parse_circuit("n 1").unwrap().output(), 0);
    }

    #[test]
    fn dimacs_examples() {
        assert_eq!(
            parse_dimacs("p cnf 1 1\n1 0").unwrap(),
            Cnf {
                vars: 1,
                clauses: vec![vec![1]]
            }
        );
        assert_eq!(
            parse_dimacs("c hi\np cnf 2 2\n1 -2 0\n2 0").unwrap().clauses,
            vec![vec![1, -2], vec![2]]
        );
        assert_eq!(
            parse_dimacs("p cnf 1 1\n1 0 1 0"),
            Err(CnfError::HeaderMismatch { declared: 1, found: 2 })
        );
        assert!(matches!(
            parse_dimacs("p cnf 1 1\n0"),
            Err(CnfError::EmptyClause { line: 2 })
        ));
        assert!(matches!(
            parse_dimacs("p cnf 1 1\n2 0"),
            Err(CnfError::VariableOutOfRange { .. })
        ));
        assert!(matches!(parse_dimacs("1 0"), Err(CnfError::Syntax { line: 1, .. })));
        assert!(matches!(parse_dimacs("p cnf 1 1\n1"), Err(CnfError::Syntax { .. })));
        assert!(matches!(
            parse_dimacs("p cnf 1 1\nx 0"),
            Err(CnfError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_dimacs("p cnf 0 0\n"),
            Err(CnfError::Syntax { line: 1, .. })
        ));
        // clauses may span lines
        assert_eq!(
            parse_dimacs("p cnf 3 1\n1 2\n-3 0\n").unwrap().clauses,
            vec![vec![1, 2, -3]]
        );
    }

    #[test]
    fn lowering_examples() {
        let unit = cnf_to_circuit(&Cnf::new(1, vec![vec![1]]).unwrap());
        assert_eq!(unit.count_sat(20), Ok(1));
        let taut = cnf_to_circuit(&Cnf::new(1, vec![vec![1, -1]]).unwrap());
        assert_eq!(taut.count_sat(20), Ok(2));
        let empty = cnf_to_circuit(&Cnf::new(3, vec![]).unwrap());
        assert_eq!(empty.count_sat(20), Ok(8));
    }

    fn cnf_strategy() -> impl Strategy<Value = Cnf> {
        (1usize..=4).prop_flat_map(|vars| {
            let lit = (1..=vars as i64, any::<bool>()).prop_map(|(v, neg)| if neg { -v } else { v });
            proptest::collection::vec(proptest::collection::vec(lit, 1..=3), 0..=6)
                .prop_map(move |clauses| Cnf { vars, clauses })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn lowering_is_parsimonious(f in cnf_strategy()) {
            let c = cnf_to_circuit(&f);
            // the constructor re-checks j <= k < i
            prop_assert!(Circuit::from_instructions(c.inputs(), c.instructions().to_vec()).is_ok());
            for a in assignments(f.vars) {
                prop_assert_eq!(c.evaluate(&a).unwrap(), f.satisfied_by(&a));
            }
            let models = assignments(f.vars).filter(|a| f.satisfied_by(a)).count() as u64;
            prop_assert_eq!(c.count_sat(20).unwrap(), models);
            prop_assert_eq!(parse_dimacs(&f.to_dimacs()).unwrap(), f);
        }
    }
}
