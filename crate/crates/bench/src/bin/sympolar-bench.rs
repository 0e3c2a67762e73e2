use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sympolar::retraction::{Registry, Variant};
use sympolar_bench::{
    emit_records, run_check_with, run_compare_with, run_sweep, write_records, BenchError,
    BenchRecord, BenchResult, CheckOptions, CompareConfig, Format, Generator, SweepConfig,
};

#[derive(Debug, Parser)]
#[command(
    name = "sympolar-bench",
    version,
    about = "Benchmarks and checks for the polar-factor retraction"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Time forward/inverse retraction over a list of p at fixed n.
    Sweep(SweepArgs),
    /// Average registered retractions on shared random inputs.
    Compare(CompareArgs),
    /// Run the invariant suite and report per-check residuals.
    Check(CheckArgs),
}

#[derive(Debug, Args)]
struct Output {
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Args)]
struct Parallelism {
    /// Run trials concurrently (timings become contended).
    #[arg(long, overrides_with = "no_parallel")]
    parallel: bool,
    /// Run trials sequentially (the default).
    #[arg(long)]
    no_parallel: bool,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 200)]
    n: usize,
    #[arg(long, value_delimiter = ',', default_value = "20,40,60,80,100")]
    p: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// cayley or exp
    #[arg(long, default_value = "cayley")]
    variant: Variant,
    #[arg(long, value_enum, default_value_t = Generator::Qr)]
    generator: Generator,
    #[command(flatten)]
    parallelism: Parallelism,
    /// Refuse tangents whose domain radius estimate is not below one.
    #[arg(long)]
    precheck_domain: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, value_delimiter = ',', default_value = "20")]
    p: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "polar-light/cayley,polar-light/exp"
    )]
    retractions: Vec<String>,
    /// Keep tangents at their sampled norm instead of ‖D‖_F = 1.
    #[arg(long)]
    raw_tangent: bool,
    #[arg(long)]
    precheck_domain: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[arg(long, default_value_t = 50)]
    n: usize,
    #[arg(long, default_value_t = 10)]
    p: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Repeat the suite for this many consecutive seeds.
    #[arg(long, default_value_t = 1)]
    seeds: u64,
    /// Corrupt one entry of a sampled point to exercise the failure path.
    #[arg(long)]
    sabotage: bool,
}

fn write_output(records: &[BenchRecord], output: &Output) -> BenchResult<()> {
    match &output.out {
        Some(path) => emit_records(records, output.format, path),
        None => write_records(records, output.format, io::stdout().lock()),
    }
}

fn sweep(args: SweepArgs) -> BenchResult<ExitCode> {
    let cfg = SweepConfig {
        n: args.n,
        p_list: args.p,
        trials: args.trials,
        seed: args.seed,
        variant: args.variant,
        generator: args.generator,
        parallel: args.parallelism.parallel && !args.parallelism.no_parallel,
        precheck_domain: args.precheck_domain,
    };
    let records = run_sweep(&cfg)?;
    write_output(&records, &args.output)?;
    Ok(ExitCode::SUCCESS)
}

fn compare(args: CompareArgs) -> BenchResult<ExitCode> {
    if args.p.is_empty() {
        return Err(BenchError::Config("p list is empty".into()));
    }
    let registry = Registry::builtin(args.precheck_domain);
    let mut rows = Vec::new();
    for &p in &args.p {
        let cfg = CompareConfig {
            names: args.retractions.clone(),
            n: args.n,
            p,
            trials: args.trials,
            seed: args.seed,
            norm_tangent: !args.raw_tangent,
        };
        rows.extend(run_compare_with(&cfg, &registry)?);
    }
    write_output(&rows, &args.output)?;
    Ok(ExitCode::SUCCESS)
}

fn check(args: CheckArgs) -> BenchResult<ExitCode> {
    let mut ok = true;
    for seed in args.seed..args.seed + args.seeds.max(1) {
        let report = run_check_with(&CheckOptions {
            n: args.n,
            p: args.p,
            seed,
            sabotage: args.sabotage,
        })?;
        println!("# n = {}, p = {}, seed = {seed}", args.n, args.p);
        println!("{report}");
        ok &= report.passed();
    }
    Ok(if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sweep(a) => sweep(a),
        Command::Compare(a) => compare(a),
        Command::Check(a) => check(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
