//! Command-line front end.
//!
//! Exit codes: 0 success, 1 comparison disagreement, 2 parse/validation
//! error, 3 brute-force cap exceeded.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use crate::arrangement::enumerate_covectors;
use crate::factorize::rank_factorize;
use crate::homogenize::hide_linear_term;
use crate::io::{
    parse_instance, scalar_to_value, serialize_instance, ArithmeticMode, ParsedInstance,
};
use crate::matrix::{rank, Matrix};
use crate::model::QpInstance;
use crate::oracle::{
    brute_force_solve_capped, generate_instance, GeneratorConfig, OracleError, DEFAULT_ORACLE_CAP,
};
use crate::scalar::{Rational, Scalar};
use crate::solver::{solve, Solution, SolverOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DISAGREE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Parser)]
#[command(
    name = "boxqp",
    about = "Globally maximize a box-constrained quadratic with low-rank quadratic part",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance file with the face-enumeration solver.
    Solve(SolveArgs),
    /// Solve an instance file with the brute-force reference solver.
    Oracle(OracleArgs),
    /// Run both solvers and compare results.
    Compare(CompareArgs),
    /// Count arrangement cells by dimension.
    CountFaces(CountFacesArgs),
    /// Generate a random instance file.
    Gen(GenArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

impl From<ModeArg> for ArithmeticMode {
    fn from(m: ModeArg) -> ArithmeticMode {
        match m {
            ModeArg::Exact => ArithmeticMode::Exact,
            ModeArg::Float => ArithmeticMode::Float,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Human,
    Structured,
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file.
    path: PathBuf,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    /// Try a lower-rank representation of the quadratic form first.
    #[arg(long = "min-rank")]
    min_rank: bool,
    /// Solve per-face LPs in parallel.
    #[arg(long)]
    parallel: bool,
    #[arg(long, value_enum, default_value_t = FormatArg::Human)]
    format: FormatArg,
}

#[derive(Args)]
struct OracleArgs {
    path: PathBuf,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    /// Largest accepted number of variables.
    #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
    cap: usize,
    #[arg(long, value_enum, default_value_t = FormatArg::Human)]
    format: FormatArg,
}

#[derive(Args)]
struct CompareArgs {
    /// Instance file; omit when using --random.
    path: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    /// Float-mode agreement tolerance.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
    cap: usize,
    /// Compare on a random corpus instead of a file.
    #[arg(long)]
    random: bool,
    #[arg(long, default_value_t = 4, requires = "random")]
    n: usize,
    #[arg(long, default_value_t = 2, requires = "random")]
    rank: usize,
    #[arg(long, default_value_t = 20, requires = "random")]
    count: usize,
    #[arg(long, default_value_t = 0, requires = "random")]
    seed: u64,
    /// Give the random corpus a nonzero linear term.
    #[arg(long, requires = "random")]
    with_q: bool,
}

#[derive(Args)]
struct CountFacesArgs {
    /// Instance file; its quadratic part is factorized first.
    path: Option<PathBuf>,
    /// Literal map matrix, rows separated by ';', entries by ','.
    #[arg(long, short = 'G', conflicts_with = "path")]
    matrix: Option<String>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    rank: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Inclusive coefficient range.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], default_values_t = [-5, 5], allow_negative_numbers = true)]
    coeff_range: Vec<i64>,
    /// Inclusive range for box endpoints.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], default_values_t = [-5, 5], allow_negative_numbers = true)]
    bound_range: Vec<i64>,
    /// Add a random nonzero linear term.
    #[arg(long)]
    with_q: bool,
    /// Number of width-zero box coordinates.
    #[arg(long, default_value_t = 0)]
    degenerate: usize,
}

fn read_file(path: &Path) -> Result<String, i32> {
    std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        EXIT_INPUT
    })
}

fn load(path: &Path, mode: ArithmeticMode) -> Result<ParsedInstance, i32> {
    let text = read_file(path)?;
    parse_instance(&text, mode).map_err(|e| {
        eprintln!("error: {e}");
        EXIT_INPUT
    })
}

fn render_report<S: Scalar>(solution: &Solution<S>, format: FormatArg) -> String {
    match format {
        FormatArg::Human => {
            let xs: Vec<String> = solution.maximizer.iter().map(|v| v.to_string()).collect();
            format!(
                "f*    = {}\nx*    = ({})\nrank  = {}\nfaces = {}\nlps   = {} solved, {} feasible\ntime  = {:?}",
                solution.objective,
                xs.join(", "),
                solution.stats.rank_used,
                solution.stats.faces_enumerated,
                solution.stats.lps_solved,
                solution.stats.lps_feasible,
                solution.stats.wall,
            )
        }
        FormatArg::Structured => {
            let doc = serde_json::json!({
                "f_star": scalar_to_value(&solution.objective),
                "x_star": Value::Array(
                    solution.maximizer.iter().map(scalar_to_value).collect()
                ),
                "stats": {
                    "rank_used": solution.stats.rank_used,
                    "faces_enumerated": solution.stats.faces_enumerated,
                    "lps_solved": solution.stats.lps_solved,
                    "lps_feasible": solution.stats.lps_feasible,
                    "wall_ms": solution.stats.wall.as_secs_f64() * 1e3,
                },
            });
            serde_json::to_string(&doc).expect("report serializes")
        }
    }
}

fn cmd_solve(args: &SolveArgs) -> i32 {
    let opts = SolverOptions {
        use_minimal_rank: args.min_rank,
        parallel_faces: args.parallel,
        ..SolverOptions::default()
    };
    let report = match load(&args.path, args.mode.into()) {
        Err(code) => return code,
        Ok(ParsedInstance::Exact(inst)) => render_report(&solve(&inst, &opts), args.format),
        Ok(ParsedInstance::Float(inst)) => render_report(&solve(&inst, &opts), args.format),
    };
    println!("{report}");
    EXIT_OK
}

fn run_oracle<S: Scalar>(inst: &QpInstance<S>, cap: usize) -> Result<Solution<S>, i32> {
    brute_force_solve_capped(inst, cap).map_err(|e| match e {
        OracleError::TooLarge { .. } => {
            eprintln!("error: {e}");
            EXIT_CAP
        }
        other => {
            eprintln!("error: {other}");
            EXIT_INPUT
        }
    })
}

fn cmd_oracle(args: &OracleArgs) -> i32 {
    let solution = match load(&args.path, args.mode.into()) {
        Err(code) => return code,
        Ok(ParsedInstance::Exact(inst)) => {
            run_oracle(&inst, args.cap).map(|s| render_report(&s, args.format))
        }
        Ok(ParsedInstance::Float(inst)) => {
            run_oracle(&inst, args.cap).map(|s| render_report(&s, args.format))
        }
    };
    match solution {
        Ok(report) => {
            println!("{report}");
            EXIT_OK
        }
        Err(code) => code,
    }
}

fn agree_exact(a: &Rational, b: &Rational) -> bool {
    a == b
}

fn agree_float(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

fn compare_one_exact(inst: &QpInstance<Rational>, cap: usize, label: &str) -> Result<bool, i32> {
    let fast = solve(inst, &SolverOptions::default());
    let slow = run_oracle(inst, cap)?;
    if agree_exact(&fast.objective, &slow.objective) {
        println!("{label}: AGREE f*={}", fast.objective);
        Ok(true)
    } else {
        println!(
            "{label}: DISAGREE solver f*={} at ({:?}) vs oracle f*={} at ({:?})",
            fast.objective, fast.maximizer, slow.objective, slow.maximizer
        );
        Ok(false)
    }
}

fn compare_one_float(inst: &QpInstance<f64>, cap: usize, tol: f64, label: &str) -> Result<bool, i32> {
    let fast = solve(inst, &SolverOptions::default());
    let slow = run_oracle(inst, cap)?;
    if agree_float(fast.objective, slow.objective, tol) {
        println!("{label}: AGREE f*={}", fast.objective);
        Ok(true)
    } else {
        println!(
            "{label}: DISAGREE solver f*={} at ({:?}) vs oracle f*={} at ({:?})",
            fast.objective, fast.maximizer, slow.objective, slow.maximizer
        );
        Ok(false)
    }
}

fn cmd_compare(args: &CompareArgs) -> i32 {
    let mut all_agree = true;
    if args.random {
        for k in 0..args.count {
            let mut cfg = GeneratorConfig::new(args.n, args.rank, args.seed.wrapping_add(k as u64));
            cfg.with_linear_term = args.with_q;
            let inst = match generate_instance(&cfg) {
                Ok(inst) => inst,
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_INPUT;
                }
            };
            let label = format!("instance {k}");
            let outcome = match args.mode {
                ModeArg::Exact => compare_one_exact(&inst, args.cap, &label),
                ModeArg::Float => compare_one_float(&inst.to_float(), args.cap, args.tol, &label),
            };
            match outcome {
                Ok(ok) => all_agree &= ok,
                Err(code) => return code,
            }
        }
        let verdict = if all_agree { "all agree" } else { "disagreement found" };
        println!("{}/{} compared: {verdict}", args.count, args.count);
    } else {
        let Some(path) = &args.path else {
            eprintln!("error: provide an instance file or --random");
            return EXIT_INPUT;
        };
        let outcome = match load(path, args.mode.into()) {
            Err(code) => return code,
            Ok(ParsedInstance::Exact(inst)) => {
                compare_one_exact(&inst, args.cap, &path.display().to_string())
            }
            Ok(ParsedInstance::Float(inst)) => {
                compare_one_float(&inst, args.cap, args.tol, &path.display().to_string())
            }
        };
        match outcome {
            Ok(ok) => all_agree = ok,
            Err(code) => return code,
        }
    }
    if all_agree {
        EXIT_OK
    } else {
        EXIT_DISAGREE
    }
}

fn parse_matrix_literal(text: &str) -> Result<Matrix<Rational>, i32> {
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for row_text in text.split(';') {
        let mut row = Vec::new();
        for entry in row_text.split(',') {
            let entry = entry.trim();
            let value = if let Some((p, d)) = entry.split_once('/') {
                let p: i64 = p.trim().parse().map_err(|_| EXIT_INPUT)?;
                let d: i64 = d.trim().parse().map_err(|_| EXIT_INPUT)?;
                if d <= 0 {
                    return Err(EXIT_INPUT);
                }
                Rational::from_fraction(p, d)
            } else {
                entry
                    .parse::<i64>()
                    .map(Rational::from_int)
                    .map_err(|_| EXIT_INPUT)?
            };
            row.push(value);
        }
        rows.push(row);
    }
    let width = rows.first().map_or(0, Vec::len);
    if width == 0 || rows.iter().any(|r| r.len() != width) {
        return Err(EXIT_INPUT);
    }
    Ok(Matrix::from_rows(rows))
}

fn count_faces_of(map: &Matrix<Rational>) {
    let cells = enumerate_covectors(map);
    let dim = map.rows();
    let mut by_dim = std::collections::BTreeMap::new();
    for cell in &cells {
        let zero_cols: Vec<usize> = cell.sigma.zero_set();
        let restricted = map.select_columns(&zero_cols);
        let cell_dim = dim - rank(&restricted);
        *by_dim.entry(cell_dim).or_insert(0u64) += 1;
    }
    for (d, count) in &by_dim {
        println!("dim {d}: {count}");
    }
    println!("total: {}", cells.len());
}

fn cmd_count_faces(args: &CountFacesArgs) -> i32 {
    if let Some(text) = &args.matrix {
        match parse_matrix_literal(text) {
            Ok(map) => {
                count_faces_of(&map);
                EXIT_OK
            }
            Err(code) => {
                eprintln!("error: malformed matrix literal; rows 'a,b;c,d'");
                code
            }
        }
    } else if let Some(path) = &args.path {
        match load(path, ArithmeticMode::Exact) {
            Err(code) => code,
            Ok(ParsedInstance::Exact(inst)) => {
                let lifted = hide_linear_term(&inst);
                let factorization = rank_factorize(lifted.inner().quadratic());
                match factorization.reduction() {
                    None => {
                        println!("dim 0: 1");
                        println!("total: 1");
                        EXIT_OK
                    }
                    Some(reduction) => {
                        count_faces_of(&reduction.map);
                        EXIT_OK
                    }
                }
            }
            Ok(ParsedInstance::Float(_)) => unreachable!("exact mode requested"),
        }
    } else {
        eprintln!("error: provide an instance file or -G");
        EXIT_INPUT
    }
}

fn cmd_gen(args: &GenArgs) -> i32 {
    let cfg = GeneratorConfig {
        n: args.n,
        rank: args.rank,
        seed: args.seed,
        coeff_range: (args.coeff_range[0], args.coeff_range[1]),
        bound_range: (args.bound_range[0], args.bound_range[1]),
        with_linear_term: args.with_q,
        degenerate_coords: args.degenerate,
    };
    let inst = match generate_instance(&cfg) {
        Ok(inst) => inst,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    let text = serialize_instance(&inst);
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text + "\n") {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_INPUT;
            }
        }
        None => println!("{text}"),
    }
    EXIT_OK
}

/// Parses arguments and runs; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match &cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Compare(args) => cmd_compare(args),
        Command::CountFaces(args) => cmd_count_faces(args),
        Command::Gen(args) => cmd_gen(args),
    }
}
