use std::fs::File;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use borderfj::bench::{bundled, run_benchmark};
use borderfj::fj::{reduce, BorderingPolicy, MatrixStatus, ReduceError, ReduceOptions};
use borderfj::io::{emit_report_string, load, summarize};
use borderfj::params::{degeneracy_locus, parse_axis, scan, write_csv};
use borderfj::theorem::verify_theorem1;

const EXIT_FAIL: u8 = 1;
const EXIT_SINGULAR: u8 = 2;
const EXIT_INPUT: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

#[derive(Parser)]
#[command(name = "borderfj", version, about = "Exact Faddeev-Jackiw reduction by constrained matrix bordering")]
struct Cli {
    /// Seed for the zero-test sampler.
    #[arg(long, global = true, env = "BORDERFJ_SEED", default_value_t = 0x5eed_b0de)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Policy {
    Sequential,
    Simultaneous,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce a system and print its summary.
    Reduce {
        file: PathBuf,
        #[arg(long = "max-iter", default_value_t = 8)]
        max_iter: usize,
        /// Write the JSON report here (`-` for stdout).
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Policy::Sequential)]
        policy: Policy,
        /// Sample points for the embedded co-vanishing verdict.
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// Check that the extended two-form and the constraint brackets co-vanish.
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long = "max-iter", default_value_t = 8)]
        max_iter: usize,
    },
    /// Evaluate the extended determinant on a parameter grid.
    Scan {
        file: PathBuf,
        /// Grid axis `name=v1,v2,...`; repeat for each parameter.
        #[arg(long = "param", required = true)]
        params: Vec<String>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run the bundled benchmarks against their golden matrices.
    Bench {
        /// Print the diff records as JSON.
        #[arg(long)]
        json: bool,
    },
}

fn options(seed: u64, max_iter: usize, policy: Policy) -> ReduceOptions {
    let mut o = ReduceOptions::with_seed(seed);
    o.max_iterations = max_iter;
    o.policy = match policy {
        Policy::Sequential => BorderingPolicy::Sequential,
        Policy::Simultaneous => BorderingPolicy::Simultaneous,
    };
    o
}

fn reduce_exit(e: &ReduceError) -> u8 {
    match e {
        ReduceError::Definition(_) | ReduceError::NotQuadratic(_) => EXIT_INPUT,
        _ => EXIT_INTERNAL,
    }
}

fn write_out(path: &PathBuf, text: &str) -> std::io::Result<()> {
    if path.as_os_str() == "-" {
        println!("{text}");
        Ok(())
    } else {
        std::fs::write(path, text)
    }
}

fn run(cli: Cli) -> u8 {
    match cli.command {
        Command::Reduce {
            file,
            max_iter,
            json,
            policy,
            trials,
        } => {
            let def = match load(&file) {
                Ok(d) => d,
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_INPUT;
                }
            };
            let opts = options(cli.seed, max_iter, policy);
            let report = match reduce(&def, &opts) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return reduce_exit(&e);
                }
            };
            if json.as_ref().is_none_or(|p| p.as_os_str() != "-") {
                print!("{}", summarize(&report));
            }
            if let Some(path) = json {
                let verdict = verify_theorem1(&report, trials, &opts.zero).ok();
                let degeneracy = degeneracy_locus(&report);
                let text = emit_report_string(&report, verdict.as_ref(), Some(&degeneracy));
                if let Err(e) = write_out(&path, &text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return EXIT_INPUT;
                }
            }
            match report.status {
                MatrixStatus::Regular => 0,
                MatrixStatus::Singular => EXIT_SINGULAR,
            }
        }
        Command::Verify {
            file,
            trials,
            max_iter,
        } => {
            let def = match load(&file) {
                Ok(d) => d,
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_INPUT;
                }
            };
            let opts = options(cli.seed, max_iter, Policy::Sequential);
            let report = match reduce(&def, &opts) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return reduce_exit(&e);
                }
            };
            match verify_theorem1(&report, trials, &opts.zero) {
                Ok(v) => {
                    for c in v.bracket.iter().chain(&v.schur) {
                        println!(
                            "{:<8} {}  points={}  det f vanishes={}  other vanishes={}",
                            c.route,
                            if c.pass { "PASS" } else { "FAIL" },
                            c.points,
                            c.left_vanishes,
                            c.right_vanishes
                        );
                        for d in &c.disagreements {
                            println!("  disagreement at {:?}", d.point);
                        }
                    }
                    println!("Co-vanishing: {}", if v.pass { "PASS" } else { "FAIL" });
                    if v.pass {
                        0
                    } else {
                        EXIT_FAIL
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    EXIT_INTERNAL
                }
            }
        }
        Command::Scan { file, params, csv } => {
            let def = match load(&file) {
                Ok(d) => d,
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_INPUT;
                }
            };
            let mut grid = Vec::new();
            for p in &params {
                match parse_axis(p) {
                    Ok(axis) => grid.push(axis),
                    Err(e) => {
                        eprintln!("error: {e}");
                        return EXIT_INPUT;
                    }
                }
            }
            let report = match reduce(&def, &ReduceOptions::with_seed(cli.seed)) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return reduce_exit(&e);
                }
            };
            let rows = match scan(&report, &grid) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_INPUT;
                }
            };
            let names: Vec<String> = grid.iter().map(|(n, _)| n.clone()).collect();
            let result = match &csv {
                Some(path) if path.as_os_str() != "-" => {
                    File::create(path).map_err(csv::Error::from).and_then(|f| write_csv(f, &names, &rows))
                }
                _ => write_csv(std::io::stdout().lock(), &names, &rows),
            };
            if let Err(e) = result {
                eprintln!("error: {e}");
                return EXIT_INPUT;
            }
            0
        }
        Command::Bench { json } => {
            let opts = ReduceOptions::with_seed(cli.seed);
            let mut failed = false;
            let mut diffs = Vec::new();
            for case in bundled() {
                let start = std::time::Instant::now();
                match run_benchmark(&case, &opts) {
                    Ok((report, diff)) => {
                        let ok = diff.is_empty();
                        failed |= !ok;
                        if !json {
                            println!(
                                "{:<16} {}  status={} iterations={} dimension={} ({:.1?})",
                                case.name,
                                if ok { "PASS" } else { "FAIL" },
                                report.status.as_str(),
                                report.iteration_count,
                                report.dimension(),
                                start.elapsed()
                            );
                            for m in &diff.mismatches {
                                println!("  {m:?}");
                            }
                        }
                        diffs.push(diff);
                    }
                    Err(e) => {
                        failed = true;
                        println!("{:<16} ERROR  {e}", case.name);
                    }
                }
            }
            if json {
                let mut out = std::io::stdout().lock();
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&diffs).expect("serializable"));
            }
            if failed {
                EXIT_FAIL
            } else {
                0
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    ExitCode::from(run(cli))
}
