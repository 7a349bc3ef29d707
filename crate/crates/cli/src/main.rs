//! `wreathmul`: correctness suites, error-bound predictions, precision
//! experiments, exponent tables and flop benchmarks.
//!
//! Exit codes: 0 on success, 1 when an invariant is violated (a failed check,
//! a rejected scheme or triples file, or a measured error above its bound),
//! 2 on usage errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use wreathmul::bilinear::load_scheme_json;
use wreathmul::grouplib::load_triples_json;
use wreathmul::harness::{
    bench, parse_sizes, predicted_mu, reports_to_csv, reports_to_json, run_error_experiment, run_verify, Algorithm,
    HarnessError, REPORT_SCHEMA,
};
use wreathmul::matcore::{NormKind, Real};
use wreathmul::stpalg::{exponent_report, StpError};

#[derive(Parser)]
#[command(name = "wreathmul", version, about = "Fast matrix multiplication error-bound harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Scheme checks, STPP checks, transform contracts, oracle equivalence and
    /// short bound experiments.
    Verify {
        /// Smaller trial counts and sizes.
        #[arg(long)]
        quick: bool,
        /// Also verify a bilinear scheme file.
        #[arg(long, value_name = "FILE")]
        scheme: Vec<PathBuf>,
        /// Also verify an STPP triples file.
        #[arg(long, value_name = "FILE")]
        triples: Vec<PathBuf>,
        /// Print the outcomes as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Print the predicted error coefficient μ(n) and μ(n)·ε.
    Bound {
        /// naive, strassen or stp:M,N
        #[arg(long)]
        alg: Algorithm,
        #[arg(long)]
        n: usize,
        /// Unit roundoff; defaults to binary32's 2^-24.
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Run a seeded error experiment and report measured against predicted.
    Measure {
        /// naive, strassen or stp:M,N
        #[arg(long)]
        alg: Algorithm,
        /// `a:b` for the powers of two from a to b, or a comma-separated list.
        #[arg(long)]
        sizes: String,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        out: Format,
    },
    /// Runtime and error exponents of the bundled STPP family.
    Exponents {
        /// Modulus of the base group (repeatable or comma-separated).
        #[arg(long, value_delimiter = ',', required = true)]
        m: Vec<u32>,
    },
    /// Exact operation counts and wall time of single products.
    Bench {
        /// naive, strassen or stp:M,N
        #[arg(long)]
        alg: Algorithm,
        #[arg(long)]
        sizes: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        out: Format,
    },
}

/// A failure and the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Self {
        Self { code: 2, message: message.to_string() }
    }

    fn violation(message: impl ToString) -> Self {
        Self { code: 1, message: message.to_string() }
    }
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::BoundViolated { .. } => Self::violation(e),
            _ => Self::usage(e),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Verify { quick, scheme, triples, json } => verify(quick, &scheme, &triples, json),
        Command::Bound { alg, n, eps } => {
            let (mu, kind) = predicted_mu(alg, n)?;
            let eps = eps.unwrap_or(<f32 as Real>::EPSILON);
            let norm = match kind {
                NormKind::MaxEntry => "max_entry",
                NormKind::Frobenius => "frobenius",
            };
            println!("algorithm {alg}\nn {n}\nnorm {norm}\nmu {mu:e}\neps {eps:e}\nbound {:e}", mu * eps);
            Ok(())
        }
        Command::Measure { alg, sizes, trials, seed, out } => {
            let sizes = parse_sizes(&sizes)?;
            let reports = run_error_experiment(alg, &sizes, trials, seed)?;
            match out {
                Format::Csv => print!("{}", reports_to_csv(&reports)),
                Format::Json => println!("{}", reports_to_json(&reports)),
            }
            match reports.iter().find_map(|r| r.violation()) {
                Some(v) => Err(v.into()),
                None => Ok(()),
            }
        }
        Command::Exponents { m } => {
            println!("m,alpha,beta,runtime,frobenius_error,max_norm_error,sum");
            for m in m {
                match exponent_report(m) {
                    Ok(r) => println!(
                        "{m},{:.4},{:.4},{:.4},{:.4},{:.4},{:.4}",
                        r.alpha, r.beta, r.runtime_exp, r.frobenius_err_exp, r.maxnorm_err_exp, r.combined_exp
                    ),
                    Err(StpError::Degenerate) => println!("{m},degenerate,,,,,"),
                    Err(e) => return Err(Failure::usage(e)),
                }
            }
            Ok(())
        }
        Command::Bench { alg, sizes, seed, out } => {
            let records = bench(alg, &parse_sizes(&sizes)?, seed)?;
            match out {
                Format::Csv => {
                    println!("n,flops,elapsed_ms");
                    for r in &records {
                        println!("{},{},{:.3}", r.n, r.flops, r.elapsed_ms);
                    }
                }
                Format::Json => {
                    let doc = serde_json::json!({ "schema": REPORT_SCHEMA, "algorithm": alg.to_string(), "records": records });
                    println!("{}", serde_json::to_string_pretty(&doc).map_err(Failure::usage)?);
                }
            }
            Ok(())
        }
    }
}

fn verify(quick: bool, schemes: &[PathBuf], triples: &[PathBuf], json: bool) -> Result<(), Failure> {
    let read = |p: &PathBuf| fs::read_to_string(p).map_err(|e| Failure::usage(format!("{}: {e}", p.display())));
    let mut outcomes = Vec::new();
    for p in schemes {
        let (passed, detail) = match load_scheme_json(&read(p)?) {
            Ok(s) => (true, format!("{} (k = {}, t = {})", s.name(), s.k(), s.t())),
            Err(e) => (false, e.to_string()),
        };
        outcomes.push(serde_json::json!({ "name": format!("scheme file {}", p.display()), "passed": passed, "detail": detail }));
    }
    for p in triples {
        let (passed, detail) = match load_triples_json(&read(p)?, false) {
            Ok(t) => (true, format!("{} triples in (Z/{})^{}", t.n(), t.group().m, t.group().d)),
            Err(e) => (false, e.to_string()),
        };
        outcomes.push(serde_json::json!({ "name": format!("triples file {}", p.display()), "passed": passed, "detail": detail }));
    }
    for o in run_verify(quick) {
        outcomes.push(serde_json::to_value(&o).map_err(Failure::usage)?);
    }
    let failed = outcomes.iter().filter(|o| o["passed"] != true).count();
    if json {
        let doc = serde_json::json!({ "schema": REPORT_SCHEMA, "checks": outcomes });
        println!("{}", serde_json::to_string_pretty(&doc).map_err(Failure::usage)?);
    } else {
        for o in &outcomes {
            let status = if o["passed"] == true { "PASS" } else { "FAIL" };
            let detail = o["detail"].as_str().unwrap_or_default();
            println!("{status} {} {detail}", o["name"].as_str().unwrap_or_default());
        }
        println!("{} of {} checks passed", outcomes.len() - failed, outcomes.len());
    }
    if failed == 0 { Ok(()) } else { Err(Failure::violation(format!("{failed} checks failed"))) }
}
