//! Command line front end over the library: value queries, position
//! reports, composition of poset files, labelling verification and fiber
//! surgery, the labelling search, the product-law checker, generators,
//! and the bundled example files. `-` reads a document from stdin; `--json`
//! swaps the plain output for exactly one JSON document.

use std::io::Read;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use poset_games::compression::{
    blow_up, find_compressions, replace_factor, CompressionMap, Factorization, VerifyOutcome,
};
use poset_games::conjecture::{
    conjecture_check, conjecture_sweep, BReading, SampleMode, SweepParams,
};
use poset_games::fixtures::{fixture_names, fixture_text};
use poset_games::format::{parse_map, parse_poset, serialize_map, serialize_poset};
use poset_games::{disjoint_sum, generate, lex_product, ordinal_sum, Poset, Position, Solver};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "poset-games",
    version,
    about = "Analyse games on partially ordered sets"
)]
struct Cli {
    /// Emit one JSON document on stdout instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Game value of a poset file.
    Grundy { file: String },
    /// Value, options, outcome, winning moves, and solver counters.
    Analyze { file: String },
    /// Values reachable in one move.
    Options { file: String },
    /// P when the previous player wins, N otherwise.
    Classify { file: String },
    /// Moves to zero-value positions, by element name.
    Moves { file: String },
    /// Side-by-side sum of two poset files.
    Sum { a: String, b: String },
    /// Everything in the first file placed below everything in the second.
    #[command(name = "ordinal-sum")]
    OrdinalSum { a: String, b: String },
    /// Pairs ordered by the first file, ties broken by the second.
    #[command(name = "lex-product")]
    LexProduct { a: String, b: String },
    /// Check the labelling in a two-block document; rejection exits 1.
    #[command(name = "verify-map")]
    VerifyMap { file: String },
    /// Extract the fiber over one target element of a verified labelling.
    Factor { file: String, element: String },
    /// Swap the fiber over a maximal target element for another poset.
    #[command(name = "replace-factor")]
    ReplaceFactor {
        file: String,
        element: String,
        replacement: String,
    },
    /// Replace a target element by an antichain of 2n+1 copies of itself.
    Blowup {
        file: String,
        element: String,
        n: usize,
    },
    /// Search for compressing labellings of a poset file.
    #[command(name = "find-compressions")]
    FindCompressions {
        file: String,
        /// Largest target size to consider.
        #[arg(long, default_value_t = 4)]
        max_factors: usize,
    },
    /// Check the product law on two poset files, or sweep generated pairs.
    Conjecture {
        a: Option<String>,
        b: Option<String>,
        /// Largest size of the first factor in a sweep.
        #[arg(long, default_value_t = 4)]
        max_a: usize,
        /// Largest size of the second factor in a sweep.
        #[arg(long, default_value_t = 4)]
        max_b: usize,
        /// Pair count for random sweeps, or "exhaustive".
        #[arg(long, default_value = "exhaustive")]
        sample: String,
        /// Generator seed for random sweeps.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Gate on the second factor: full value test or chain shapes only.
        #[arg(long, value_enum, default_value_t = ReadingArg::Nimber)]
        b_reading: ReadingArg,
    },
    /// Build a poset from a family name and comma-separated parameters.
    Generate {
        family: String,
        params: Option<String>,
    },
    /// List the bundled example files, or print one by name.
    Fixtures { name: Option<String> },
}

#[derive(Clone, Copy, ValueEnum)]
enum ReadingArg {
    Nimber,
    Chain,
}

fn main() -> ExitCode {
    // die quietly when the read end of a pipe closes, like any filter
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn read_input(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| format!("stdin: {e}"))?;
        Ok(text)
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
    }
}

fn load_poset(path: &str) -> Result<Poset, String> {
    parse_poset(&read_input(path)?).map_err(|e| format!("{path}: {e}"))
}

fn load_map(path: &str) -> Result<CompressionMap, String> {
    parse_map(&read_input(path)?).map_err(|e| format!("{path}: {e}"))
}

fn verify_or_fail(map: CompressionMap, path: &str) -> Result<CompressionMap, String> {
    match map.verify() {
        VerifyOutcome::Verified(m) => Ok(m),
        VerifyOutcome::Rejected(r) => Err(format!("{path}: labelling does not verify: {r}")),
    }
}

fn full_position(p: Poset) -> Position {
    Position::full(p.arc())
}

fn print_json(value: serde_json::Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(&value).expect("serializable")
    );
}

fn emit_poset(json: bool, p: &Poset) {
    let text = serialize_poset(p);
    if json {
        print_json(json!({ "poset": text }));
    } else {
        print!("{text}");
    }
}

fn emit_map(json: bool, m: &CompressionMap) {
    let text = serialize_map(m);
    if json {
        print_json(json!({ "map": text }));
    } else {
        print!("{text}");
    }
}

fn sorted_move_names<'p>(report_moves: &[usize], p: &'p Poset) -> Vec<&'p str> {
    let mut names: Vec<&str> = report_moves.iter().map(|&i| p.element_name(i)).collect();
    names.sort_unstable();
    names
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    let json = cli.json;
    match cli.verb {
        Verb::Grundy { file } => {
            let value = Solver::new().grundy(&full_position(load_poset(&file)?));
            if json {
                print_json(json!({ "nimber": value.0 }));
            } else {
                println!("{value}");
            }
        }
        Verb::Analyze { file } => {
            let p = load_poset(&file)?.arc();
            let report = Solver::new().analyze(&Position::full(p.clone()));
            if json {
                print_json(report.to_json(&p));
            } else {
                println!("value {}", report.nimber);
                println!("outcome {}", report.outcome);
                println!("options {}", report.option_values);
                println!("weakly canonical {}", report.weakly_canonical);
                println!(
                    "winning moves {}",
                    sorted_move_names(&report.winning_moves, &p).join(" ")
                );
                println!("positions explored {}", report.positions_explored);
                println!("memo hits {}", report.memo_hits);
            }
        }
        Verb::Options { file } => {
            let set = Solver::new().option_value_set(&full_position(load_poset(&file)?));
            if json {
                print_json(json!({ "optionValues": set.iter().map(|v| v.0).collect::<Vec<_>>() }));
            } else {
                println!("{set}");
            }
        }
        Verb::Classify { file } => {
            let outcome = Solver::new().classify(&full_position(load_poset(&file)?));
            if json {
                print_json(json!({ "outcome": outcome.to_string() }));
            } else {
                println!("{outcome}");
            }
        }
        Verb::Moves { file } => {
            let p = load_poset(&file)?.arc();
            let moves = Solver::new().winning_moves(&Position::full(p.clone()));
            let names = sorted_move_names(&moves, &p);
            if json {
                print_json(json!({ "winningMoves": names }));
            } else {
                for name in names {
                    println!("{name}");
                }
            }
        }
        Verb::Sum { a, b } => {
            let sum =
                disjoint_sum(&load_poset(&a)?, &load_poset(&b)?).map_err(|e| e.to_string())?;
            emit_poset(json, &sum);
        }
        Verb::OrdinalSum { a, b } => {
            let sum = ordinal_sum(&load_poset(&a)?, &load_poset(&b)?).map_err(|e| e.to_string())?;
            emit_poset(json, &sum);
        }
        Verb::LexProduct { a, b } => {
            let prod =
                lex_product(&load_poset(&a)?, &load_poset(&b)?).map_err(|e| e.to_string())?;
            emit_poset(json, &prod);
        }
        Verb::VerifyMap { file } => match load_map(&file)?.verify() {
            VerifyOutcome::Verified(_) => {
                if json {
                    print_json(json!({ "verified": true }));
                } else {
                    println!("verified");
                }
            }
            VerifyOutcome::Rejected(r) => {
                if json {
                    print_json(json!({ "verified": false, "violation": r.to_json() }));
                } else {
                    println!("rejected: {r}");
                }
                return Ok(ExitCode::from(1));
            }
        },
        Verb::Factor { file, element } => {
            let map = verify_or_fail(load_map(&file)?, &file)?;
            let q = map.target().index_of(&element).map_err(|e| e.to_string())?;
            let fiber = Factorization::new(map)
                .and_then(|fz| fz.factor(q))
                .map_err(|e| e.to_string())?;
            emit_poset(json, &fiber);
        }
        Verb::ReplaceFactor {
            file,
            element,
            replacement,
        } => {
            let map = verify_or_fail(load_map(&file)?, &file)?;
            let alpha = map.target().index_of(&element).map_err(|e| e.to_string())?;
            let replacement = load_poset(&replacement)?;
            let fz = Factorization::new(map).map_err(|e| e.to_string())?;
            let (_, g) = replace_factor(&fz, alpha, &replacement).map_err(|e| e.to_string())?;
            emit_map(json, &g);
        }
        Verb::Blowup { file, element, n } => {
            let p = load_poset(&file)?;
            let q = p.index_of(&element).map_err(|e| e.to_string())?;
            let grown = blow_up(&p, q, n).map_err(|e| e.to_string())?;
            emit_poset(json, &grown);
        }
        Verb::FindCompressions { file, max_factors } => {
            let p = load_poset(&file)?.arc();
            let maps = find_compressions(&p, max_factors).map_err(|e| e.to_string())?;
            if json {
                let texts: Vec<String> = maps.iter().map(serialize_map).collect();
                print_json(json!({ "count": maps.len(), "maps": texts }));
            } else {
                println!("found {}", maps.len());
                for m in &maps {
                    println!();
                    print!("{}", serialize_map(m));
                }
            }
        }
        Verb::Conjecture {
            a,
            b,
            max_a,
            max_b,
            sample,
            seed,
            b_reading,
        } => {
            return conjecture_verb(json, a, b, max_a, max_b, &sample, seed, b_reading);
        }
        Verb::Generate { family, params } => {
            let params = parse_params(params.as_deref())?;
            let p = generate(&family, &params).map_err(|e| e.to_string())?;
            emit_poset(json, &p);
        }
        Verb::Fixtures { name } => match name {
            None => {
                let names = fixture_names();
                if json {
                    print_json(json!({ "fixtures": names }));
                } else {
                    for n in names {
                        println!("{n}");
                    }
                }
            }
            Some(n) => {
                let text = fixture_text(&n).map_err(|e| e.to_string())?;
                if json {
                    print_json(json!({ "name": n, "text": text }));
                } else {
                    print!("{text}");
                }
            }
        },
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_params(params: Option<&str>) -> Result<Vec<usize>, String> {
    let Some(text) = params else {
        return Ok(Vec::new());
    };
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .map_err(|_| format!("bad parameter {part:?}: expected a non-negative integer"))
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn conjecture_verb(
    json: bool,
    a: Option<String>,
    b: Option<String>,
    max_a: usize,
    max_b: usize,
    sample: &str,
    seed: u64,
    b_reading: ReadingArg,
) -> Result<ExitCode, String> {
    let reading = match b_reading {
        ReadingArg::Nimber => BReading::Nimber,
        ReadingArg::Chain => BReading::Chain,
    };
    match (a, b) {
        (Some(a), Some(b)) => {
            let a = Arc::new(load_poset(&a)?);
            let b = Arc::new(load_poset(&b)?);
            let result = conjecture_check(&a, &b).map_err(|e| e.to_string())?;
            if json {
                print_json(result.to_json());
            } else {
                println!("first factor value {}", result.a_nimber);
                println!("second factor value {}", result.b_nimber);
                println!("product value {}", result.product_nimber);
                println!("pairs checked {}", result.checked_pairs);
                println!("violations {}", result.violations.len());
                println!("holds {}", result.holds());
            }
        }
        (None, None) => {
            let sample = match sample {
                "exhaustive" => SampleMode::Exhaustive,
                count => match count.parse::<u64>() {
                    Ok(k) => SampleMode::Random { count: k },
                    Err(_) => {
                        eprintln!("usage: --sample takes a pair count or \"exhaustive\"");
                        return Ok(ExitCode::from(2));
                    }
                },
            };
            let report = conjecture_sweep(&SweepParams {
                max_a,
                max_b,
                sample,
                seed,
                reading,
            })
            .map_err(|e| e.to_string())?;
            if json {
                print_json(report.to_json());
            } else {
                println!("pairs {}", report.counts.pairs);
                println!("admissible {}", report.counts.admissible);
                println!("skipped {}", report.counts.skipped);
                println!("confirmed {}", report.counts.confirmed);
                println!("violated {}", report.counts.violated);
                if !report.counterexamples.is_empty() {
                    println!(
                        "counterexamples {} (rerun with --json for replay documents)",
                        report.counterexamples.len()
                    );
                }
            }
        }
        _ => {
            eprintln!("usage: conjecture takes two poset files, or none plus sweep flags");
            return Ok(ExitCode::from(2));
        }
    }
    Ok(ExitCode::SUCCESS)
}
