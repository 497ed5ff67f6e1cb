use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperalg::algdist::{compute_coordinates, star_expand, AlgdConfig};
use hyperalg::formats::{read_hypergraph, write_partition};
use hyperalg::harness::{run_bench, write_csv, write_run_log, BenchManifest};
use hyperalg::spectral::{verify_suite, write_report, SuiteConfig};
use hyperalg::{partition, CoarseningMode, Error, PartitionConfig};

#[derive(Parser)]
#[command(
    name = "hyperalg",
    version,
    about = "Multilevel hypergraph partitioner with algebraic-distance coarsening"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Partition a hypergraph (.hgr) or sparse matrix (.mtx, row-net model).
    Partition(PartitionArgs),
    /// Compare plain and algebraic coarsening over a manifest of inputs.
    Bench(BenchArgs),
    /// Check the spectral theory of the relaxation on generated instances.
    Verify(VerifyArgs),
    /// Print the squared sine between successive relaxation iterates.
    Converge(ConvergeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Plain,
    Algd,
}

impl From<Mode> for CoarseningMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Plain => CoarseningMode::Plain,
            Mode::Algd => CoarseningMode::Algebraic,
        }
    }
}

#[derive(Args)]
struct PartitionArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
    k: u64,
    #[arg(long, default_value_t = 1.05)]
    imbalance: f64,
    #[arg(long, value_enum, default_value_t = Mode::Algd)]
    mode: Mode,
    #[arg(long, default_value_t = 0.5)]
    omega: f64,
    #[arg(long, default_value_t = 20)]
    iters: usize,
    #[arg(long, default_value_t = 5)]
    rvecs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Defaults to `<input>.part.<k>`.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    manifest: PathBuf,
    /// CSV report; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Per-run log as CSV.
    #[arg(long)]
    runs: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 50)]
    instances: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.5)]
    omega: f64,
    /// JSON-lines report; stdout when omitted.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct ConvergeArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    omega: f64,
    #[arg(long, default_value_t = 50)]
    iters: usize,
    #[arg(long, default_value_t = 5)]
    rvecs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Partition(a) => cmd_partition(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Converge(a) => cmd_converge(a),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn output_sink(path: Option<&Path>) -> Result<Box<dyn Write>, Error> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn cmd_partition(a: PartitionArgs) -> Result<ExitCode, Error> {
    let h = read_hypergraph(&a.input)?;
    let k = a.k as usize;
    let cfg = PartitionConfig {
        k,
        max_imbalance: a.imbalance,
        mode: a.mode.into(),
        algd: AlgdConfig {
            omega: a.omega,
            num_iter: a.iters,
            num_random: a.rvecs,
            ..AlgdConfig::default()
        },
        seed: a.seed,
        ..PartitionConfig::default()
    };
    let start = Instant::now();
    let result = partition(&h, &cfg)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;

    let out = a.output.unwrap_or_else(|| {
        let mut name = a.input.clone().into_os_string();
        name.push(format!(".part.{k}"));
        PathBuf::from(name)
    });
    write_partition(
        result.partition.parts(),
        BufWriter::new(File::create(&out)?),
    )?;
    let p = &result.partition;
    println!(
        "cut={} connectivity={} imbalance={} levels={} wall_ms={wall_ms:.3}",
        p.cut(),
        p.connectivity(),
        p.imbalance(),
        result.levels
    );
    if !result.feasible {
        eprintln!(
            "warning: imbalance {} exceeds {}",
            p.imbalance(),
            a.imbalance
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(a: BenchArgs) -> Result<ExitCode, Error> {
    let manifest = BenchManifest::load(&a.manifest)?;
    let report = run_bench(&manifest)?;
    write_csv(&report.rows, output_sink(a.output.as_deref())?)?;
    if let Some(path) = &a.runs {
        write_run_log(&report.runs, BufWriter::new(File::create(path)?))?;
    }
    let failed = report.rows.iter().filter(|r| r.status != "ok").count();
    if failed > 0 {
        eprintln!("{failed} of {} rows failed", report.rows.len());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(a: VerifyArgs) -> Result<ExitCode, Error> {
    if a.instances == 0 {
        return Err(Error::Config("--instances must be at least 1".into()));
    }
    if !(a.omega > 0.0 && a.omega < 1.0) {
        return Err(Error::Config(format!(
            "--omega must lie strictly between 0 and 1, got {}",
            a.omega
        )));
    }
    let cfg = SuiteConfig {
        instances: a.instances,
        seed: a.seed,
        omega: a.omega,
        ..SuiteConfig::default()
    };
    let records = verify_suite(&cfg);
    write_report(&records, output_sink(a.report.as_deref())?)?;
    let failing: Vec<usize> = records
        .iter()
        .filter(|r| !r.passed())
        .map(|r| r.instance)
        .collect();
    if failing.is_empty() {
        eprintln!("all {} instances passed", records.len());
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("failing instances: {failing:?}");
        Ok(ExitCode::FAILURE)
    }
}

fn cmd_converge(a: ConvergeArgs) -> Result<ExitCode, Error> {
    let h = read_hypergraph(&a.input)?;
    let cfg = AlgdConfig {
        omega: a.omega,
        num_iter: a.iters,
        num_random: a.rvecs,
        seed: a.seed,
        ..AlgdConfig::default()
    };
    let (_, trace) = compute_coordinates(&star_expand(&h), &cfg)?;
    let mut out = std::io::stdout().lock();
    writeln!(out, "iteration,max_sq_sine,mean_sq_sine")?;
    for i in 0..a.iters {
        let values: Vec<f64> = trace.vectors.iter().map(|v| v.sq_sine[i]).collect();
        let max = values.iter().copied().fold(0.0, f64::max);
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        writeln!(out, "{},{max:e},{mean:e}", i + 1)?;
    }
    Ok(ExitCode::SUCCESS)
}
