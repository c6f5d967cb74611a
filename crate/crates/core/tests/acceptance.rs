//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::process::Command;
use std::time::Instant;

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tantrix::circuit::{cnf_to_circuit, Cnf};
use tantrix::compiler::{compile, extract_assignment, serialize_port_map, CompiledPuzzle};
use tantrix::gadgets::{part_library, stock_library, verify_gadget};
use tantrix::hexgrid::{Coord, Direction};
use tantrix::instance::{serialize_instance, Instance};
use tantrix::roundtrip::random_cnf;
use tantrix::solver::{brute_force_count, count_solutions, enumerate_solutions, is_unique};
use tantrix::tiles::{enumerate_catalogue, Color, Shape};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

/// Model count by direct clause evaluation.
fn oracle_models(f: &Cnf) -> BTreeSet<Vec<bool>> {
    let mut models = BTreeSet::new();
    for bits in 0u32..1 << f.vars {
        let a: Vec<bool> = (0..f.vars).map(|v| bits >> v & 1 == 1).collect();
        let sat = f.clauses.iter().all(|clause| {
            clause.iter().any(|&lit| {
                let value = a[(lit.unsigned_abs() - 1) as usize];
                if lit > 0 {
                    value
                } else {
                    !value
                }
            })
        });
        if sat {
            models.insert(a);
        }
    }
    models
}

fn criterion_1() -> Outcome {
    // every word over four letters, kept when three letters appear twice each
    let letters = ['b', 'g', 'r', 'y'];
    let mut by_shape: BTreeMap<[usize; 3], BTreeSet<String>> = BTreeMap::new();
    for n in 0..4usize.pow(6) {
        let word: Vec<char> = (0..6).map(|k| letters[n / 4usize.pow(k) % 4]).collect();
        let mut pos: BTreeMap<char, Vec<usize>> = BTreeMap::new();
        for (i, &c) in word.iter().enumerate() {
            pos.entry(c).or_default().push(i);
        }
        if pos.len() != 3 || pos.values().any(|p| p.len() != 2) {
            continue;
        }
        let mut shape: Vec<usize> = pos.values().map(|p| (p[1] - p[0]).min(6 - (p[1] - p[0]))).collect();
        shape.sort();
        if shape == [3, 3, 3] {
            continue;
        }
        let canon = (0..6)
            .map(|r| (0..6).map(|k| word[(k + r) % 6]).collect::<String>())
            .min()
            .unwrap();
        by_shape
            .entry([shape[0], shape[1], shape[2]])
            .or_default()
            .insert(canon);
    }
    let oracle: BTreeSet<String> = by_shape.values().flatten().cloned().collect();
    let counts: BTreeMap<[usize; 3], usize> = by_shape.iter().map(|(k, v)| (*k, v.len())).collect();
    let expected = BTreeMap::from([([1, 1, 1], 8), ([1, 1, 3], 12), ([1, 2, 2], 24), ([2, 2, 3], 12)]);

    let cat = enumerate_catalogue();
    let ours: BTreeSet<String> = cat.iter().map(|t| t.to_string()).collect();
    let mut lib_counts: BTreeMap<[usize; 3], usize> = BTreeMap::new();
    for t in &cat {
        let key = match t.shape() {
            Shape::Rond => [1, 1, 1],
            Shape::Brid => [1, 1, 3],
            Shape::Sint => [1, 2, 2],
            Shape::Chin => [2, 2, 3],
        };
        *lib_counts.entry(key).or_default() += 1;
    }
    let pass = cat.len() == 56 && ours.len() == 56 && ours == oracle && counts == expected && lib_counts == expected;
    outcome(pass, format!("{} tiles, shape counts {:?}", cat.len(), lib_counts))
}

fn criterion_2() -> Outcome {
    let lib = stock_library();
    let mut failures = Vec::new();
    let mut rows = 0;
    for g in &lib {
        let report = verify_gadget(g);
        rows += report.rows.len();
        if !report.pass() {
            failures.push(g.name.clone());
        }
    }
    // the two-track stock gadgets are stacks of parts; the fixing tiles
    // live in the parts
    let parts = part_library();
    for g in &parts {
        if !verify_gadget(g).pass() {
            failures.push(format!("part {}", g.name));
        }
    }
    let mut controls = 0;
    for g in parts
        .iter()
        .filter(|g| ["WIRE", "MOVE_R", "MOVE_L", "COPY", "NOT"].contains(&g.name.as_str()))
    {
        if g.fixing.is_empty() {
            failures.push(format!("{} has no fixing tile", g.name));
        }
        for (label, cell) in &g.fixing {
            controls += 1;
            let report = verify_gadget(&g.without_cell(*cell));
            if !report.rows.iter().any(|r| r.count >= BigUint::from(2u32)) {
                failures.push(format!("{} without {label} stays unambiguous", g.name));
            }
        }
    }
    let names: Vec<&str> = lib.iter().map(|g| g.name.as_str()).collect();
    let pass = failures.is_empty() && lib.len() == 9;
    outcome(
        pass,
        format!(
            "{} gadgets {:?}, {rows} rows, {} parts, {controls} negative controls; failures {failures:?}",
            lib.len(),
            names,
            parts.len()
        ),
    )
}

fn random_instance(rng: &mut ChaCha8Rng, catalogue: &[tantrix::tiles::TileCode]) -> Instance {
    let n = rng.gen_range(1..=8);
    let mut cells: Vec<Coord> = Vec::new();
    if rng.gen_bool(0.5) {
        cells.push(Coord::ORIGIN);
        while cells.len() < n {
            let from = cells[rng.gen_range(0..cells.len())];
            let next = from.neighbor(Direction::ALL[rng.gen_range(0..6)]);
            if !cells.contains(&next) {
                cells.push(next);
            }
        }
    } else {
        while cells.len() < n {
            let c = Coord::new(rng.gen_range(-3..=3), rng.gen_range(-3..=3));
            if !cells.contains(&c) {
                cells.push(c);
            }
        }
    }
    let tiles: Vec<_> = catalogue.choose_multiple(rng, n).copied().collect();
    let placements: BTreeMap<_, _> = cells.into_iter().zip(tiles).collect();
    let mut clamps = BTreeMap::new();
    if rng.gen_bool(0.5) {
        let boundary: Vec<(Coord, Direction)> = placements
            .keys()
            .flat_map(|&c| Direction::ALL.into_iter().map(move |d| (c, d)))
            .filter(|(c, d)| !placements.contains_key(&c.neighbor(*d)))
            .collect();
        for _ in 0..rng.gen_range(1..=3) {
            let edge = boundary[rng.gen_range(0..boundary.len())];
            clamps.insert(edge, Color::ALL[rng.gen_range(0..4)]);
        }
    }
    Instance::new(placements, clamps).unwrap()
}

fn criterion_3() -> Outcome {
    let catalogue = enumerate_catalogue();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut mismatches = 0;
    let mut nonzero = 0;
    let total = 500;
    for _ in 0..total {
        let inst = random_instance(&mut rng, &catalogue);
        let oracle = brute_force_count(&inst, 8).unwrap();
        let ours = count_solutions(&inst);
        if ours != BigUint::from(oracle) {
            mismatches += 1;
        }
        if oracle > 0 {
            nonzero += 1;
        }
    }
    outcome(
        mismatches == 0,
        format!("{total} instances ({nonzero} solvable), {mismatches} mismatches"),
    )
}

struct Case {
    name: String,
    cnf: Cnf,
    models: BTreeSet<Vec<bool>>,
}

fn case(name: impl Into<String>, vars: usize, clauses: Vec<Vec<i64>>) -> Case {
    let cnf = Cnf::new(vars, clauses).unwrap();
    Case {
        name: name.into(),
        models: oracle_models(&cnf),
        cnf,
    }
}

fn corpus() -> Vec<Case> {
    let mut cases = vec![
        case("tautology", 1, vec![vec![1, -1]]),
        case("no clauses", 3, vec![]),
        case("contradiction", 1, vec![vec![1], vec![-1]]),
        case(
            "contradiction over 2",
            2,
            vec![vec![1, 2], vec![1, -2], vec![-1, 2], vec![-1, -2]],
        ),
        case("unique all true", 3, vec![vec![1], vec![2], vec![3]]),
        case("unique mixed", 4, vec![vec![1], vec![-2], vec![3, 4], vec![-4]]),
        case("unique via implications", 3, vec![vec![1], vec![-1, 2], vec![-2, 3]]),
        case("xor", 2, vec![vec![1, 2], vec![-1, -2]]),
        case("repeated literal", 2, vec![vec![1, 1, 2], vec![-2, -2]]),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for k in 0..200 {
        let f = random_cnf(&mut rng, 4, 6, 3);
        cases.push(case(format!("random #{k}"), f.vars, f.clauses));
    }
    cases
}

fn criteria_4_and_5(compiled: &[(&Case, CompiledPuzzle)]) -> (Outcome, Outcome) {
    let mut bad_counts = Vec::new();
    let mut bad_bijections = Vec::new();
    let mut checked = 0;
    for (c, p) in compiled {
        let count = count_solutions(&p.instance);
        if count != BigUint::from(c.models.len()) {
            bad_counts.push(format!("{}: {} vs {}", c.name, count, c.models.len()));
        }
        if c.models.len() <= 8 {
            checked += 1;
            let sols = enumerate_solutions(&p.instance, 9);
            let extracted: Vec<Vec<bool>> = sols.iter().filter_map(|s| extract_assignment(p, s).ok()).collect();
            let distinct: BTreeSet<Vec<bool>> = extracted.iter().cloned().collect();
            if extracted.len() != sols.len() || distinct.len() != extracted.len() || distinct != c.models {
                bad_bijections.push(c.name.clone());
            }
        }
    }
    let max_tiles = compiled.iter().map(|(_, p)| p.instance.len()).max().unwrap_or(0);
    (
        outcome(
            bad_counts.is_empty(),
            format!(
                "{} formulas (largest puzzle {max_tiles} tiles); mismatches {bad_counts:?}",
                compiled.len()
            ),
        ),
        outcome(
            bad_bijections.is_empty(),
            format!("{checked} formulas with at most 8 models; failures {bad_bijections:?}"),
        ),
    )
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut unique, mut other) = (Vec::new(), Vec::new());
    while unique.len() < 20 || other.len() < 20 {
        let f = random_cnf(&mut rng, 4, 8, 3);
        let n = oracle_models(&f).len();
        if n == 1 && unique.len() < 20 {
            unique.push(f);
        } else if n != 1 && other.len() < 20 {
            other.push(f);
        }
    }
    let wrong_unique = unique
        .iter()
        .filter(|f| !is_unique(&compile(&cnf_to_circuit(f)).unwrap().instance))
        .count();
    let wrong_other = other
        .iter()
        .filter(|f| is_unique(&compile(&cnf_to_circuit(f)).unwrap().instance))
        .count();
    outcome(
        wrong_unique == 0 && wrong_other == 0,
        format!("20 unique-model formulas ({wrong_unique} wrong), 20 others ({wrong_other} wrong)"),
    )
}

fn criterion_7() -> Outcome {
    let dimacs = "c determinism\np cnf 3 3\n1 -2 0\n2 3 -1 0\n-3 0\n";
    let dir = std::env::temp_dir().join(format!("tantrix-accept-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let input = dir.join("f.cnf");
    std::fs::write(&input, dimacs).unwrap();
    let mut outputs = Vec::new();
    for k in 0..2 {
        let (inst, map) = (dir.join(format!("i{k}.txt")), dir.join(format!("p{k}.txt")));
        let status = Command::new(env!("CARGO_BIN_EXE_tantrix"))
            .arg("reduce")
            .arg(&input)
            .arg("--out")
            .arg(&inst)
            .arg("--portmap")
            .arg(&map)
            .output()
            .unwrap();
        assert!(
            status.status.success(),
            "reduce failed: {}",
            String::from_utf8_lossy(&status.stderr)
        );
        outputs.push((std::fs::read(&inst).unwrap(), std::fs::read(&map).unwrap()));
    }
    let f = tantrix::circuit::parse_dimacs(dimacs).unwrap();
    let a = compile(&cnf_to_circuit(&f)).unwrap();
    let b = compile(&cnf_to_circuit(&f)).unwrap();
    let in_process = serialize_instance(&a.instance) == serialize_instance(&b.instance)
        && serialize_port_map(&a.port_map) == serialize_port_map(&b.port_map);
    let matches_library = outputs[0].0 == serialize_instance(&a.instance).into_bytes();
    std::fs::remove_dir_all(&dir).ok();
    let pass = outputs[0] == outputs[1] && in_process && matches_library;
    outcome(
        pass,
        format!(
            "two CLI runs and two in-process compiles ({} instance bytes)",
            outputs[0].0.len()
        ),
    )
}

fn report(n: usize, name: &str, start: Instant, o: &Outcome, failed: &mut bool) {
    println!(
        "criterion {n} {name}: {} ({:.1}s) {}",
        if o.pass { "PASS" } else { "FAIL" },
        start.elapsed().as_secs_f64(),
        o.detail
    );
    *failed |= !o.pass;
}

fn main() {
    let mut failed = false;
    let t = Instant::now();
    report(1, "catalogue", t, &criterion_1(), &mut failed);
    let t = Instant::now();
    report(2, "gadget uniqueness", t, &criterion_2(), &mut failed);
    let t = Instant::now();
    report(3, "solver vs brute force", t, &criterion_3(), &mut failed);
    let t = Instant::now();
    let cases = corpus();
    let compiled: Vec<(&Case, CompiledPuzzle)> = cases
        .iter()
        .map(|c| (c, compile(&cnf_to_circuit(&c.cnf)).unwrap()))
        .collect();
    let (c4, c5) = criteria_4_and_5(&compiled);
    report(4, "parsimony", t, &c4, &mut failed);
    report(5, "bijection", t, &c5, &mut failed);
    let t = Instant::now();
    report(6, "uniqueness transfer", t, &criterion_6(), &mut failed);
    let t = Instant::now();
    report(7, "determinism", t, &criterion_7(), &mut failed);
    if failed {
        std::process::exit(1);
    }
}
