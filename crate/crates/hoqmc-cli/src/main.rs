//! `hoqmc`: digital-net quadrature experiments from the command line.
//!
//! Subcommands: `points` emits net nodes, `integrate` runs one quadrature,
//! `convergence` sweeps net sizes, `precision` sweeps digit truncation,
//! `verify` reports a net's dual space and quality parameter, and `bounds`
//! prints worst-case error-bound constants as JSON.
//!
//! Exit codes: 0 on success, 1 on I/O failure or a failed `verify`
//! expectation, 2 on configuration errors, 3 on capacity guards.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hoqmc::{
    bound_constants, enumerate_dual, generate_net, inferred_t, net_strength,
    per_cardinality_factor, BoundVariant, DigitalSequence, DirectionNumberTable, Error,
    PrimeBase, Result,
};

use hoqmc_cli::experiment::{
    estimate_slope, precision_sweep, run_convergence, Algorithm, ExperimentConfig,
};
use hoqmc_cli::functions::{power_weights, TestFunction};
use hoqmc_cli::output::{
    run_records, write_json, write_points_csv, write_precision_csv, write_records_csv,
    BoundReport, PrecisionRecord,
};

#[derive(Parser)]
#[command(name = "hoqmc", version, about = "Higher-order digital-net quadrature toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the nodes of a digital net as CSV.
    Points(PointsArgs),
    /// Run one quadrature at a single net size.
    Integrate(IntegrateArgs),
    /// Sweep net sizes and report the error at each.
    Convergence(ConvergenceArgs),
    /// Sweep node digit precisions at fixed net order.
    Precision(PrecisionArgs),
    /// Report a net's dual space, strength, and quality parameter.
    Verify(VerifyArgs),
    /// Print worst-case error-bound constants as JSON.
    Bounds(BoundsArgs),
}

#[derive(Args)]
struct NetOpts {
    /// Prime base of the digit expansion.
    #[arg(long, default_value_t = 2)]
    base: u32,
    /// Interlacing order (1 = plain Sobol').
    #[arg(long, default_value_t = 2)]
    alpha: u32,
    /// Number of coordinates.
    #[arg(long, default_value_t = 1)]
    dims: u32,
}

#[derive(Args)]
struct FunctionOpts {
    /// Test integrand.
    #[arg(long, value_enum)]
    function: FunctionTag,
    /// Exponent parameter of f3.
    #[arg(long, default_value_t = 1.3)]
    c1: f64,
    /// Rate parameter of f4.
    #[arg(long, default_value_t = 1.0)]
    c2: f64,
    /// Coordinate weights; `pow:<a>` gives gamma_j = j^-a.
    #[arg(long, default_value = "pow:2")]
    gamma: String,
}

#[derive(Args)]
struct SinkOpts {
    /// Output format.
    #[arg(long, value_enum, default_value_t = FormatTag::Csv)]
    format: FormatTag,
    /// Output path (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunOpts {
    /// Worker threads (0 = one per core). Results never depend on this.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Report 0.0 in the seconds column for byte-stable output.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum FunctionTag {
    F1,
    F2,
    F3,
    F4,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum FormatTag {
    Csv,
    Json,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum PointFormat {
    Rational,
    Decimal,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum AlgorithmTag {
    Plain,
    ExtrapolatedSquare,
    ExtrapolatedFixedM,
}

impl AlgorithmTag {
    fn algorithm(self) -> Algorithm {
        match self {
            AlgorithmTag::Plain => Algorithm::Plain,
            AlgorithmTag::ExtrapolatedSquare => Algorithm::ExtrapolatedSquare,
            AlgorithmTag::ExtrapolatedFixedM => Algorithm::ExtrapolatedFixedM,
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum VariantTag {
    ExtrapolatedSquare,
    ExtrapolatedFixedM,
}

#[derive(Args)]
struct PointsArgs {
    #[command(flatten)]
    net: NetOpts,
    /// Net size: emits p^m nodes.
    #[arg(long)]
    m: u32,
    /// Cap on the node digit precision (default alpha * m, clamped).
    #[arg(long)]
    truncate_u: Option<u32>,
    /// Printed coordinate style.
    #[arg(long, value_enum, default_value_t = PointFormat::Rational)]
    format: PointFormat,
    /// Output path (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct IntegrateArgs {
    #[command(flatten)]
    net: NetOpts,
    #[command(flatten)]
    function: FunctionOpts,
    #[arg(long, value_enum, default_value_t = AlgorithmTag::Plain)]
    algorithm: AlgorithmTag,
    /// Net size exponent.
    #[arg(long)]
    m: u32,
    /// Cap on the node digit precision (plain algorithm only).
    #[arg(long)]
    truncate_u: Option<u32>,
    #[command(flatten)]
    sink: SinkOpts,
    #[command(flatten)]
    run: RunOpts,
}

#[derive(Args)]
struct ConvergenceArgs {
    #[command(flatten)]
    net: NetOpts,
    #[command(flatten)]
    function: FunctionOpts,
    #[arg(long, value_enum, default_value_t = AlgorithmTag::Plain)]
    algorithm: AlgorithmTag,
    /// Smallest net size exponent.
    #[arg(long)]
    m_min: u32,
    /// Largest net size exponent.
    #[arg(long)]
    m_max: u32,
    /// Cap on the node digit precision (plain algorithm only).
    #[arg(long)]
    truncate_u: Option<u32>,
    /// Fit a log-log slope over `M_LO:M_HI` and print it to stderr.
    #[arg(long, value_name = "M_LO:M_HI")]
    fit: Option<String>,
    #[command(flatten)]
    sink: SinkOpts,
    #[command(flatten)]
    run: RunOpts,
}

#[derive(Args)]
struct PrecisionArgs {
    #[command(flatten)]
    net: NetOpts,
    #[command(flatten)]
    function: FunctionOpts,
    /// Smallest net size exponent.
    #[arg(long)]
    m_min: u32,
    /// Largest net size exponent.
    #[arg(long)]
    m_max: u32,
    /// Truncation precision to sweep (repeatable).
    #[arg(long = "u", required = true)]
    u: Vec<u32>,
    #[command(flatten)]
    sink: SinkOpts,
    #[command(flatten)]
    run: RunOpts,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    net: NetOpts,
    /// Net size exponent.
    #[arg(long)]
    m: u32,
    /// Dual-enumeration digit precision (default alpha * m, clamped).
    #[arg(long)]
    rows: Option<u32>,
    /// Expected quality parameter; mismatches exit with status 1.
    #[arg(long)]
    expect_t: Option<u64>,
}

#[derive(Args)]
struct BoundsArgs {
    #[command(flatten)]
    net: NetOpts,
    /// Quality parameter of the underlying net family.
    #[arg(long, default_value_t = 0)]
    t: u32,
    /// Which algorithm's constants to report.
    #[arg(long, value_enum, default_value_t = VariantTag::ExtrapolatedSquare)]
    algorithm: VariantTag,
    /// Output path (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Capacity(_) => ExitCode::from(3),
                Error::Io(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Points(args) => points_cmd(args),
        Command::Integrate(args) => {
            let sweep = sweep_config(args.m, args.m, args.truncate_u, None);
            run_sweep(&args.net, &args.function, args.algorithm, sweep, &args.sink, &args.run)
        }
        Command::Convergence(args) => {
            let sweep = sweep_config(args.m_min, args.m_max, args.truncate_u, args.fit);
            run_sweep(&args.net, &args.function, args.algorithm, sweep, &args.sink, &args.run)
        }
        Command::Precision(args) => precision_cmd(args),
        Command::Verify(args) => verify_cmd(args),
        Command::Bounds(args) => bounds_cmd(args),
    }
}

/// Resolves the direction-number table: a `sobol-direction-numbers.txt`
/// inside `$HOQMC_DATA` if that variable is set, the bundled copy otherwise.
fn direction_table() -> Result<Arc<DirectionNumberTable>> {
    match std::env::var_os("HOQMC_DATA") {
        Some(dir) => {
            let path = PathBuf::from(dir).join("sobol-direction-numbers.txt");
            Ok(Arc::new(DirectionNumberTable::load(path)?))
        }
        None => Ok(DirectionNumberTable::bundled()),
    }
}

fn sequence(net: &NetOpts) -> Result<DigitalSequence> {
    if net.base != 2 {
        return Err(Error::Config(format!(
            "the bundled construction is the binary Sobol' family; base {} nets \
             need user-supplied matrices",
            net.base
        )));
    }
    DigitalSequence::interlaced_sobol(direction_table()?, net.dims, net.alpha)
}

fn writer(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(io::BufWriter::new(File::create(path)?)),
        None => Box::new(io::BufWriter::new(io::stdout())),
    })
}

fn configure_threads(threads: usize) -> Result<()> {
    if threads == 0 {
        return Ok(());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))
}

fn parse_gamma(spec: &str, dims: u32) -> Result<Vec<f64>> {
    let decay = spec
        .strip_prefix("pow:")
        .ok_or_else(|| Error::Config(format!("weight spec `{spec}` must look like pow:<a>")))?
        .parse::<f64>()
        .map_err(|e| Error::Config(format!("weight spec `{spec}`: {e}")))?;
    Ok(power_weights(dims, decay))
}

fn build_function(opts: &FunctionOpts, dims: u32) -> Result<TestFunction> {
    match opts.function {
        FunctionTag::F1 => TestFunction::cubic_log(dims),
        FunctionTag::F2 => TestFunction::kinked_power(dims),
        FunctionTag::F3 => {
            TestFunction::shifted_power_product(opts.c1, parse_gamma(&opts.gamma, dims)?)
        }
        FunctionTag::F4 => TestFunction::exp_sum(opts.c2, parse_gamma(&opts.gamma, dims)?),
    }
}

fn parse_window(window: &str) -> Result<(u32, u32)> {
    let err = || Error::Config(format!("fit window `{window}` must look like M_LO:M_HI"));
    let (lo, hi) = window.split_once(':').ok_or_else(err)?;
    Ok((lo.parse().map_err(|_| err())?, hi.parse().map_err(|_| err())?))
}

struct SweepSpec {
    m_min: u32,
    m_max: u32,
    truncate_u: Option<u32>,
    fit: Option<String>,
}

fn sweep_config(m_min: u32, m_max: u32, truncate_u: Option<u32>, fit: Option<String>) -> SweepSpec {
    SweepSpec { m_min, m_max, truncate_u, fit }
}

fn run_sweep(
    net: &NetOpts,
    fopts: &FunctionOpts,
    algorithm: AlgorithmTag,
    spec: SweepSpec,
    sink: &SinkOpts,
    run: &RunOpts,
) -> Result<ExitCode> {
    configure_threads(run.threads)?;
    let seq = sequence(net)?;
    let f = build_function(fopts, net.dims)?;
    let algorithm = algorithm.algorithm();
    let config = ExperimentConfig {
        algorithm,
        alpha: net.alpha,
        sequence: &seq,
        integrand: &f,
        exact: f.exact_integral(),
        m_min: spec.m_min,
        m_max: spec.m_max,
        truncate_u: spec.truncate_u,
        timing: !run.no_timing,
    };
    let records = run_convergence(&config)?;
    if let Some(window) = &spec.fit {
        let (lo, hi) = parse_window(window)?;
        match estimate_slope(&records, lo, hi) {
            Ok(slope) => eprintln!("fitted slope over m in [{lo}, {hi}]: {slope:.4}"),
            Err(e) => eprintln!("slope fit unavailable: {e}"),
        }
    }
    let mut out = writer(&sink.out)?;
    match sink.format {
        FormatTag::Csv => write_records_csv(&mut out, &records)?,
        FormatTag::Json => {
            let rows =
                run_records(algorithm.label(), net.alpha, seq.base(), config.exact, &records);
            write_json(&mut out, &rows)?;
        }
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn points_cmd(args: PointsArgs) -> Result<ExitCode> {
    let seq = sequence(&args.net)?;
    let base = seq.base();
    let full = args
        .net
        .alpha
        .checked_mul(args.m)
        .map(|r| r.min(base.max_digits()))
        .ok_or_else(|| Error::Range("alpha * m overflows".to_string()))?;
    let rows = match args.truncate_u {
        Some(0) => return Err(Error::Range("truncation precision must be positive".to_string())),
        Some(u) => full.min(u),
        None => full,
    };
    let mats = seq.matrices(rows, args.m)?;
    let net = generate_net(&mats)?;
    let mut out = writer(&args.out)?;
    write_points_csv(&mut out, &net, args.format == PointFormat::Decimal)?;
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn precision_cmd(args: PrecisionArgs) -> Result<ExitCode> {
    configure_threads(args.run.threads)?;
    let seq = sequence(&args.net)?;
    let f = build_function(&args.function, args.net.dims)?;
    let config = ExperimentConfig {
        algorithm: Algorithm::Plain,
        alpha: args.net.alpha,
        sequence: &seq,
        integrand: &f,
        exact: f.exact_integral(),
        m_min: args.m_min,
        m_max: args.m_max,
        truncate_u: None,
        timing: !args.run.no_timing,
    };
    let sweeps = precision_sweep(&config, &args.u)?;
    let mut out = writer(&args.sink.out)?;
    match args.sink.format {
        FormatTag::Csv => write_precision_csv(&mut out, &sweeps)?,
        FormatTag::Json => {
            let mut rows = Vec::new();
            for (u, records) in &sweeps {
                for record in
                    run_records("plain", args.net.alpha, seq.base(), config.exact, records)
                {
                    rows.push(PrecisionRecord { u: *u, record });
                }
            }
            write_json(&mut out, &rows)?;
        }
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn verify_cmd(args: VerifyArgs) -> Result<ExitCode> {
    let seq = sequence(&args.net)?;
    let base = seq.base();
    let full = (args.net.alpha * args.m).min(base.max_digits());
    let rows = args.rows.unwrap_or(full);
    let mats = seq.matrices(rows, args.m)?;
    println!(
        "family: {} generating matrices, {} rows x {} cols over GF({})",
        mats.len(),
        rows,
        args.m,
        base.value()
    );
    let per_coord = base.pow(rows)?;
    let dual = enumerate_dual(&mats, per_coord)?;
    println!(
        "dual vectors with all components below {}^{}: {}",
        base.value(),
        rows,
        dual.len()
    );
    let strength = net_strength(&mats, args.net.alpha)?;
    println!("order-{} digit-weight strength: {}", args.net.alpha, strength);
    let t = inferred_t(args.net.alpha, args.m, strength);
    println!("inferred quality parameter t: {t}");
    match args.expect_t {
        Some(expected) if expected == t => {
            println!("expected t {expected}: PASS");
            Ok(ExitCode::SUCCESS)
        }
        Some(expected) => {
            println!("expected t {expected}: FAIL (inferred {t})");
            Ok(ExitCode::from(1))
        }
        None => Ok(ExitCode::SUCCESS),
    }
}

fn bounds_cmd(args: BoundsArgs) -> Result<ExitCode> {
    let base = PrimeBase::new(args.net.base)?;
    let alpha = args.net.alpha;
    if args.net.dims == 0 {
        return Err(Error::Range("need at least one coordinate".to_string()));
    }
    let variant = match args.algorithm {
        VariantTag::ExtrapolatedSquare => BoundVariant::ExtrapolatedSquare,
        VariantTag::ExtrapolatedFixedM => BoundVariant::ExtrapolatedFixedM,
    };
    let constants = bound_constants(alpha, base)?;
    let factors = (1..=args.net.dims)
        .map(|c| per_cardinality_factor(alpha, base, args.t, c, variant))
        .collect::<Result<Vec<f64>>>()?;
    let report = BoundReport::new(constants, factors);
    let mut out = writer(&args.out)?;
    write_json(&mut out, &report)?;
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}
