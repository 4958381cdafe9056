//! metriclab CLI: Monte Carlo sweeps, closed-form Bayes errors, Nagata
//! dimension checks, and the verification suite.
//!
//! Exit codes: 0 pass, 1 check failure (a failed verification or a
//! dimension counterexample), 2 usage or config error.

use std::fs::File;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use metriclab::harness::verify::{verify_all, DEFAULT_SEED};
use metriclab::harness::{run_experiment, write_rows_to_path, ExperimentConfig};
use metriclab::nagata::{check_dim_at_scale, DimVerdict, SearchMode, Witness};
use metriclab::problem::{build_problem, ProblemSpec};
use metriclab::space::FiniteMetricInstance;
use metriclab::Error;

#[derive(Parser)]
#[command(name = "metriclab", version, about = "Metric-space k-NN laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a Monte Carlo sweep from a JSON config and write CSV rows.
    Simulate(SimulateArgs),
    /// Print the closed-form Bayes error of a named problem.
    Bayes(BayesArgs),
    /// Check a Nagata dimension bound on a CSV distance matrix.
    Nagata(NagataArgs),
    /// Run the full verification suite.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// Path to the experiment config (JSON).
    #[arg(long)]
    config: String,
    /// Record wall-clock timing per row (makes the CSV non-reproducible).
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct BayesArgs {
    /// Problem name: cerou_guyader, two_valued, hedgehog, euclidean_linear,
    /// constant.
    #[arg(long)]
    problem: String,
    /// Atom count for grid-based problems.
    #[arg(long)]
    atoms: Option<usize>,
    /// Point count of the two-valued space.
    #[arg(long)]
    points: Option<usize>,
    /// Nonzero distance of the two-valued space.
    #[arg(long)]
    distance: Option<f64>,
    /// Spininess of the hedgehog.
    #[arg(long)]
    spines: Option<usize>,
    /// Constant regression value.
    #[arg(long)]
    value: Option<f64>,
}

#[derive(Args)]
struct NagataArgs {
    /// CSV distance matrix (header row = point ids).
    #[arg(long)]
    matrix: String,
    /// Comma-separated center indices, or "all".
    #[arg(long, default_value = "all")]
    centers: String,
    /// Dimension bound delta to certify.
    #[arg(long)]
    delta: usize,
    /// Scale: a positive number or "inf".
    #[arg(long, default_value = "inf")]
    scale: String,
    /// Search mode: exhaustive or randomized.
    #[arg(long, default_value = "exhaustive")]
    mode: String,
    /// Trials for randomized mode.
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// Seed for randomized mode.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Write the machine-readable JSON report here.
    #[arg(long)]
    report: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Simulate(args) => simulate(args),
        Command::Bayes(args) => bayes(args),
        Command::Nagata(args) => nagata(args),
        Command::Verify(args) => verify(args),
    }
}

fn simulate(args: SimulateArgs) -> Result<ExitCode, Error> {
    let mut config = ExperimentConfig::from_json_file(&args.config)?;
    if args.timing {
        config.record_timing = true;
    }
    let rows = run_experiment(&config)?;
    write_rows_to_path(&config.output_path, &rows)?;
    for row in &rows {
        println!(
            "{} n={} k={}: err_mean={:.4} err_sem={:.4} excess={:.4}",
            row.problem_name, row.n, row.k, row.err_mean, row.err_sem, row.excess_risk
        );
    }
    println!("wrote {} rows to {}", rows.len(), config.output_path);
    Ok(ExitCode::SUCCESS)
}

fn bayes(args: BayesArgs) -> Result<ExitCode, Error> {
    let spec = ProblemSpec {
        name: args.problem,
        atoms: args.atoms,
        points: args.points,
        distance: args.distance,
        spines: args.spines,
        value: args.value,
    };
    let problem = build_problem(&spec)?;
    println!("{}", problem.bayes_error());
    Ok(ExitCode::SUCCESS)
}

fn parse_scale(s: &str) -> Result<f64, Error> {
    if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("+inf") {
        return Ok(f64::INFINITY);
    }
    s.parse::<f64>()
        .map_err(|_| Error::Config(format!("bad scale `{s}`")))
}

fn nagata(args: NagataArgs) -> Result<ExitCode, Error> {
    let instance = FiniteMetricInstance::from_csv(File::open(&args.matrix)?)?;
    let report = metriclab::space::check_metric_axioms(&instance);
    if !report.ok {
        return Err(Error::Config(format!(
            "matrix violates the metric axioms: {:?}",
            report.first_violation
        )));
    }
    let centers: Vec<usize> = if args.centers == "all" {
        (0..instance.n()).collect()
    } else {
        args.centers
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Config(format!("bad center index `{t}`")))
            })
            .collect::<Result<_, _>>()?
    };
    let scale = parse_scale(&args.scale)?;
    let mode = match args.mode.as_str() {
        "exhaustive" => SearchMode::Exhaustive,
        "randomized" => SearchMode::Randomized { trials: args.trials, seed: args.seed },
        other => return Err(Error::Config(format!("bad mode `{other}`"))),
    };
    let witness = Witness::FinitePoints;
    let verdict = check_dim_at_scale(&instance, &centers, args.delta, scale, mode, &witness)?;
    match verdict {
        DimVerdict::Holds => {
            println!("verdict: holds");
            println!("  delta: {}", args.delta);
            println!("  scale: {}", args.scale);
            println!("  witness: finite_points");
            println!("  mode: {}", args.mode);
            Ok(ExitCode::SUCCESS)
        }
        DimVerdict::Counterexample(family) => {
            println!("verdict: counterexample");
            println!("  delta: {}", args.delta);
            println!("  scale: {}", args.scale);
            println!("  witness: finite_points");
            println!("  family:");
            for (i, ball) in family.balls().iter().enumerate() {
                println!(
                    "    ball {i}: center {} ({}), radius {}",
                    ball.center,
                    instance.ids()[ball.center],
                    ball.radius
                );
            }
            Ok(ExitCode::from(1))
        }
    }
}

fn verify(args: VerifyArgs) -> Result<ExitCode, Error> {
    let report = verify_all(args.seed)?;
    for c in &report.criteria {
        println!(
            "criterion {} ({}): {} — {}",
            c.id,
            c.name,
            if c.pass { "PASS" } else { "FAIL" },
            c.detail
        );
    }
    if let Some(path) = &args.report {
        let mut file = File::create(path)?;
        file.write_all(report.to_json().as_bytes())?;
        println!("report written to {path}");
    }
    if report.all_pass {
        println!("all criteria passed (seed {})", report.seed);
        Ok(ExitCode::SUCCESS)
    } else {
        println!("verification FAILED (seed {})", report.seed);
        Ok(ExitCode::from(1))
    }
}
