use std::collections::BTreeSet;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::rngs::StdRng;
use rand::SeedableRng;

use tantrix::circuit::{parse_dimacs, Cnf, DEFAULT_INPUT_LIMIT};
use tantrix::compiler::{reduce_sat, serialize_port_map};
use tantrix::gadgets::{load_library_path, stock_library, verify_library, GadgetSpec};
use tantrix::instance::{parse_instance, parse_solution, serialize_instance, serialize_solution, Instance};
use tantrix::render::render_svg;
use tantrix::roundtrip::{random_cnf, roundtrip, DEFAULT_ENUMERATE_LIMIT};
use tantrix::solver::{count_up_to, enumerate_solutions, solve};

/// Tantrix rotation puzzles: solve, count, and reduce SAT to puzzles.
#[derive(Parser)]
#[command(name = "tantrix", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the exact number of solutions (`-` reads stdin).
    Count {
        instance: PathBuf,
        /// Stop counting at this many solutions.
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Print solutions in lexicographic order.
    Solve {
        instance: PathBuf,
        /// Number of solutions to print.
        #[arg(long, default_value_t = 1)]
        cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exit 0 iff the instance has exactly one solution.
    Unique { instance: PathBuf },
    /// Compile a DIMACS CNF into a puzzle and a port map.
    Reduce {
        dimacs: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        portmap: PathBuf,
        /// Largest number of variables accepted.
        #[arg(long, default_value_t = DEFAULT_INPUT_LIMIT)]
        limit: usize,
    },
    /// Verify every gadget of a library file or directory (stock library by default).
    VerifyGadgets { library: Option<PathBuf> },
    /// Draw an instance, optionally in a solved orientation, as SVG.
    Render {
        instance: PathBuf,
        solution: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare model count and puzzle count, and check extraction.
    Roundtrip {
        dimacs: Option<PathBuf>,
        /// Largest number of variables accepted.
        #[arg(long, default_value_t = DEFAULT_INPUT_LIMIT)]
        limit: usize,
        /// Enumerate and extract when the count is at most this.
        #[arg(long, default_value_t = DEFAULT_ENUMERATE_LIMIT)]
        cap: usize,
        /// Check a batch of random formulas generated from this seed.
        #[arg(long)]
        seed: Option<u64>,
    },
}

struct Failure(u8, String);

type Outcome = Result<u8, Failure>;

fn input_error(e: impl std::fmt::Display) -> Failure {
    Failure(2, e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(input_error)?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Failure(2, format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure(2, format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    parse_instance(&read(path)?).map_err(|e| Failure(2, format!("{}: {e}", path.display())))
}

fn load_cnf(path: &Path, limit: usize) -> Result<Cnf, Failure> {
    let f = parse_dimacs(&read(path)?).map_err(|e| Failure(2, format!("{}: {e}", path.display())))?;
    if f.vars > limit {
        return Err(Failure(3, format!("{} variables exceed the limit of {limit}", f.vars)));
    }
    Ok(f)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Count { instance, cap } => {
            let i = load_instance(&instance)?;
            match cap {
                Some(cap) => println!("{}", count_up_to(&i, cap)),
                None => println!("{}", solve(&i, None).count),
            }
            Ok(0)
        }
        Command::Solve { instance, cap, out } => {
            let i = load_instance(&instance)?;
            let sols = enumerate_solutions(&i, cap);
            let text = sols.iter().map(serialize_solution).collect::<Vec<_>>().join("\n");
            match out {
                Some(path) => write(&path, &text)?,
                None => print!("{text}"),
            }
            if sols.is_empty() {
                println!("no solution");
                return Ok(1);
            }
            Ok(0)
        }
        Command::Unique { instance } => {
            let n = count_up_to(&load_instance(&instance)?, 2);
            println!("{} {n}", if n == 1 { "unique" } else { "not-unique" });
            Ok(if n == 1 { 0 } else { 1 })
        }
        Command::Reduce {
            dimacs,
            out,
            portmap,
            limit,
        } => {
            let f = load_cnf(&dimacs, limit)?;
            let p = reduce_sat(&f).map_err(input_error)?;
            write(&out, &serialize_instance(&p.instance))?;
            write(&portmap, &serialize_port_map(&p.port_map))?;
            println!("tiles {} tracks {}", p.instance.len(), p.program.tracks);
            Ok(0)
        }
        Command::VerifyGadgets { library } => {
            let lib: Vec<GadgetSpec> = match library {
                Some(path) => load_library_path(&path).map_err(input_error)?,
                None => stock_library(),
            };
            let mut all = true;
            for report in verify_library(&lib) {
                for r in &report.rows {
                    let fmt = |v: &[(String, tantrix::tiles::Color)]| {
                        if v.is_empty() {
                            "-".to_string()
                        } else {
                            v.iter().map(|(l, c)| format!("{l}={c}")).collect::<Vec<_>>().join(",")
                        }
                    };
                    println!(
                        "{:<7} in {:<9} out {:<9} expected {} count {:<3} {}",
                        report.name,
                        fmt(&r.row.inputs),
                        fmt(&r.row.outputs),
                        r.row.expected_count,
                        r.count,
                        if r.pass { "PASS" } else { "FAIL" }
                    );
                }
                all &= report.pass();
            }
            Ok(if all { 0 } else { 1 })
        }
        Command::Render {
            instance,
            solution,
            out,
        } => {
            let i = load_instance(&instance)?;
            let s = match solution {
                Some(path) => Some(parse_solution(&read(&path)?, &i).map_err(input_error)?),
                None => None,
            };
            let svg = render_svg(&i, s.as_ref()).map_err(input_error)?;
            match out {
                Some(path) => write(&path, &svg)?,
                None => print!("{svg}"),
            }
            Ok(0)
        }
        Command::Roundtrip {
            dimacs,
            limit,
            cap,
            seed,
        } => {
            let formulas: Vec<(String, Cnf)> = match (dimacs, seed) {
                (Some(path), None) => vec![(path.display().to_string(), load_cnf(&path, limit)?)],
                (None, Some(seed)) => {
                    let mut rng = StdRng::seed_from_u64(seed);
                    (0..20)
                        .map(|k| (format!("seed {seed} #{k}"), random_cnf(&mut rng, 4, 6, 3)))
                        .collect()
                }
                _ => return Err(Failure(2, "give either a DIMACS file or --seed".into())),
            };
            let mut all = true;
            for (name, f) in formulas {
                let r = roundtrip(&f, cap).map_err(input_error)?;
                let bij = match r.bijection() {
                    Some(true) => "bijection",
                    Some(false) => "not-bijection",
                    None => "not-enumerated",
                };
                let distinct: BTreeSet<_> = r.models.iter().collect();
                println!(
                    "{} {name}: models {} puzzle {} tiles {} {bij}",
                    if r.pass() { "PASS" } else { "FAIL" },
                    distinct.len(),
                    r.puzzle_count,
                    r.tiles
                );
                all &= r.pass();
            }
            Ok(if all { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
