//! Reproducible experiment driver: fixture generation, the bias / energy /
//! scan / rate / fourier / checklemma experiments, and report emission.
//!
//! Exit codes: 0 success, 1 mathematical-invariant violation, 2 bad input,
//! 3 resource cap exceeded.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use extractorlab::bounds::{scan_paraboloid_energies, RateParams, ScanConfig, ScanFamily};
use extractorlab::experiments::{
    bias_experiment, energy_report, fourier_experiment, lemma_trials, uniform_bias_sweep,
    LemmaConfig,
};
use extractorlab::extractor::ExtractorSpec;
use extractorlab::field::{paraboloid_points, PrimeField};
use extractorlab::report::{bias_csv, EnergyMethod, RateReport, RunStamp};
use extractorlab::signal::{rho_bit, sigma};
use extractorlab::sources::{
    adversarial_line_source, random_general_source, random_support, Source, SourceFixture,
};
use extractorlab::{Caps, Error, Rational};

#[derive(Parser)]
#[command(
    name = "extractorlab",
    version,
    about = "Two-source extractor maps over prime fields and their exact analysis toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the extractor bit on one input pair.
    Extract(ExtractArgs),
    /// Measure output bias: statistical distance, maximal exponential sum,
    /// and the quantizer coefficient sum.
    Bias(BiasArgs),
    /// Additive energy of a point set.
    Energy(EnergyArgs),
    /// Paraboloid energy-exponent scan over seeded subset families.
    Scan(ScanArgs),
    /// Min-entropy rate from an energy exponent (exact rational).
    Rate(RateArgs),
    /// Fourier coefficient sum of the sign quantizer.
    Fourier(FourierArgs),
    /// Verify the exponential-sum inequality on seeded random instances.
    Checklemma(ChecklemmaArgs),
    /// Generate a source fixture file.
    Fixture(FixtureArgs),
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Master seed (default: EXTRACTORLAB_SEED or 0).
    #[arg(long)]
    seed: Option<u64>,
    /// Worker-thread cap; results are identical for every value.
    #[arg(long)]
    threads: Option<usize>,
    /// Output path (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    /// Override the |A|*|B| pair-count cap.
    #[arg(long)]
    cap_pairs: Option<u64>,
    #[arg(long)]
    verbose: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

impl CommonArgs {
    fn seed(&self) -> u64 {
        self.seed
            .or_else(|| {
                std::env::var("EXTRACTORLAB_SEED")
                    .ok()
                    .and_then(|s| s.parse().ok())
            })
            .unwrap_or(0)
    }

    fn caps(&self) -> Caps {
        let mut caps = Caps::default();
        if let Some(pairs) = self.cap_pairs {
            caps.max_pairs = pairs as u128;
        }
        caps
    }

    fn emit(&self, payload: &str) -> Result<(), Error> {
        match &self.out {
            Some(path) => fs::write(path, payload)
                .map_err(|e| Error::InvalidInput(format!("cannot write {path:?}: {e}"))),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout
                    .write_all(payload.as_bytes())
                    .and_then(|_| {
                        if payload.ends_with('\n') {
                            Ok(())
                        } else {
                            stdout.write_all(b"\n")
                        }
                    })
                    .map_err(|e| Error::InvalidInput(format!("cannot write stdout: {e}")))
            }
        }
    }
}

#[derive(Args)]
struct ExtractArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    n: usize,
    /// Comma-separated coordinates, e.g. --x 1,2
    #[arg(long)]
    x: String,
    #[arg(long)]
    y: String,
    #[arg(long)]
    verbose: bool,
}

#[derive(Args)]
struct BiasArgs {
    /// Comma-separated list of primes for a uniform-source sweep.
    #[arg(long)]
    p: Option<String>,
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// X = Y uniform on F^n (the default when no fixtures are given).
    #[arg(long)]
    uniform: bool,
    /// Source fixture(s): one path uses X = Y, two paths give X then Y.
    #[arg(long)]
    fixture: Vec<PathBuf>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct EnergyArgs {
    #[arg(long)]
    p: u64,
    /// Point set from a fixture file (its support is used).
    #[arg(long)]
    fixture: Option<PathBuf>,
    /// Use the full paraboloid P_d instead of a fixture.
    #[arg(long)]
    paraboloid: Option<usize>,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Auto,
    Brute,
    Spectral,
    Both,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    d: usize,
    #[arg(long, default_value = "random")]
    family: ScanFamily,
    /// Comma-separated subset sizes, e.g. --sizes 8,16,32
    #[arg(long)]
    sizes: String,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    /// Run the d = 3 hypothesis-violating fields anyway (warning instead of error).
    #[arg(long)]
    allow_inadmissible: bool,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct RateArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    d: u32,
    /// Energy exponent as a rational, e.g. 17/7.
    #[arg(long)]
    alpha: Rational,
    /// Also report the critical set size p^{n/(8-2α)} for this prime.
    #[arg(long)]
    p: Option<u64>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct FourierArgs {
    #[arg(long)]
    p: u64,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct ChecklemmaArgs {
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    nmin: usize,
    #[arg(long, default_value_t = 2)]
    nmax: usize,
    #[arg(long, default_value_t = 64)]
    size_max: usize,
    /// Random unit-disc weights instead of indicator weights.
    #[arg(long)]
    unit_disc: bool,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct FixtureArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum)]
    kind: FixtureKind,
    /// Support size for the random kinds.
    #[arg(long)]
    size: Option<usize>,
    /// Coordinates for --kind point, e.g. --point 1,2
    #[arg(long)]
    point: Option<String>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FixtureKind {
    Uniform,
    Line,
    Point,
    RandomFlat,
    RandomGeneral,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Extract(args) => cmd_extract(args),
        Command::Bias(args) => with_threads(args.common.threads, || cmd_bias(args)),
        Command::Energy(args) => with_threads(args.common.threads, || cmd_energy(args)),
        Command::Scan(args) => with_threads(args.common.threads, || cmd_scan(args)),
        Command::Rate(args) => cmd_rate(args),
        Command::Fourier(args) => cmd_fourier(args),
        Command::Checklemma(args) => with_threads(args.common.threads, || cmd_checklemma(args)),
        Command::Fixture(args) => cmd_fixture(args),
    }
}

/// Runs the body inside a rayon pool of the requested size. The kernels
/// merge in fixed chunk order, so the report bytes never depend on this.
fn with_threads<T>(
    threads: Option<usize>,
    body: impl FnOnce() -> Result<T, Error> + Send,
) -> Result<T, Error>
where
    T: Send,
{
    match threads {
        None => body(),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?
            .install(body),
    }
}

fn parse_coords(text: &str) -> Result<Vec<u64>, Error> {
    text.split(',')
        .map(|c| {
            c.trim()
                .parse::<u64>()
                .map_err(|e| Error::InvalidInput(format!("bad coordinate '{c}': {e}")))
        })
        .collect()
}

fn parse_u64_list(text: &str) -> Result<Vec<u64>, Error> {
    parse_coords(text)
}

fn cmd_extract(args: ExtractArgs) -> Result<ExitCode, Error> {
    let field = PrimeField::new(args.p)?;
    let spec = ExtractorSpec::new(field.clone(), args.n)?;
    let x = field.vector(&parse_coords(&args.x)?)?;
    let y = field.vector(&parse_coords(&args.y)?)?;
    if x.dim() != args.n || y.dim() != args.n {
        return Err(Error::DimensionMismatch {
            left: x.dim().max(y.dim()),
            right: args.n,
        });
    }
    if !spec.admissible() {
        eprintln!("warning: -1 is a square mod {}", args.p);
    }
    let bit = spec.extract(&x, &y)?;
    println!("{bit}");
    if args.verbose {
        let value = extractorlab::extractor::inner_form(&x, &y)?;
        println!("f = {}, sigma = {}", value.value(), sigma(&value));
        println!("rho_bit = {}", rho_bit(&value));
    }
    Ok(ExitCode::SUCCESS)
}

fn load_source(path: &PathBuf) -> Result<Source, Error> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {path:?}: {e}")))?;
    let fixture: SourceFixture = serde_json::from_str(&text)
        .map_err(|e| Error::InvalidInput(format!("bad fixture {path:?}: {e}")))?;
    Source::from_fixture(&fixture)
}

fn cmd_bias(args: BiasArgs) -> Result<ExitCode, Error> {
    let caps = args.common.caps();
    let seed = args.common.seed();
    let config = format!(
        "bias p={:?} n={} uniform={} fixtures={:?} seed={seed}",
        args.p, args.n, args.uniform, args.fixture
    );
    let stamp = RunStamp::new(&config, seed);

    let reports = if !args.fixture.is_empty() {
        let x = load_source(&args.fixture[0])?;
        let y = match args.fixture.get(1) {
            Some(path) => load_source(path)?,
            None => load_source(&args.fixture[0])?,
        };
        let spec = ExtractorSpec::new(x.field().clone(), x.dim())?;
        if !spec.admissible() {
            eprintln!("warning: -1 is a square mod {}", x.field().p());
        }
        vec![bias_experiment(&spec, &x, &y, &stamp, &caps)?]
    } else {
        let primes = parse_u64_list(args.p.as_deref().ok_or_else(|| {
            Error::InvalidInput("bias needs --p <primes> or --fixture <path>".to_string())
        })?)?;
        uniform_bias_sweep(&primes, args.n, &stamp, &caps)?
    };

    let payload = match args.common.format {
        OutputFormat::Json => serde_json::to_string_pretty(&reports).expect("reports serialize"),
        OutputFormat::Csv => bias_csv(&reports),
    };
    args.common.emit(&payload)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_energy(args: EnergyArgs) -> Result<ExitCode, Error> {
    let caps = args.common.caps();
    let field = PrimeField::new(args.p)?;
    let (descriptor, points) = match (&args.fixture, args.paraboloid) {
        (Some(path), None) => {
            let source = load_source(path)?;
            if source.field().p() != args.p {
                return Err(Error::FieldMismatch {
                    left: args.p,
                    right: source.field().p(),
                });
            }
            (
                format!("fixture:{}", path.display()),
                source.support().to_vec(),
            )
        }
        (None, Some(d)) => (
            format!("paraboloid:P_{d}"),
            paraboloid_points(&field, d, &caps)?,
        ),
        _ => {
            return Err(Error::InvalidInput(
                "energy needs exactly one of --fixture or --paraboloid".to_string(),
            ))
        }
    };

    let reports = match args.method {
        MethodArg::Auto => vec![energy_report(&descriptor, &points, None, &caps)?],
        MethodArg::Brute => vec![energy_report(
            &descriptor,
            &points,
            Some(EnergyMethod::Brute),
            &caps,
        )?],
        MethodArg::Spectral => vec![energy_report(
            &descriptor,
            &points,
            Some(EnergyMethod::Spectral),
            &caps,
        )?],
        MethodArg::Both => {
            let brute = energy_report(&descriptor, &points, Some(EnergyMethod::Brute), &caps)?;
            let spectral =
                energy_report(&descriptor, &points, Some(EnergyMethod::Spectral), &caps)?;
            if brute.energy != spectral.energy {
                return Err(Error::InvariantViolation(format!(
                    "brute energy {} != spectral energy {}",
                    brute.energy, spectral.energy
                )));
            }
            vec![brute, spectral]
        }
    };

    let payload = match args.common.format {
        OutputFormat::Json => serde_json::to_string_pretty(&reports).expect("reports serialize"),
        OutputFormat::Csv => {
            let mut out = String::from(extractorlab::report::EnergyReport::CSV_HEADER);
            out.push('\n');
            for r in &reports {
                out.push_str(&r.csv_row());
                out.push('\n');
            }
            out
        }
    };
    args.common.emit(&payload)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_scan(args: ScanArgs) -> Result<ExitCode, Error> {
    let caps = args.common.caps();
    let field = PrimeField::new(args.p)?;
    let sizes: Vec<usize> = parse_u64_list(&args.sizes)?
        .into_iter()
        .map(|s| s as usize)
        .collect();
    if args.allow_inadmissible && args.d == 3 && field.minus_one_is_square() {
        eprintln!(
            "warning: -1 is a square mod {}; the d=3 energy estimates do not apply",
            args.p
        );
    }
    let scan = scan_paraboloid_energies(
        &field,
        &ScanConfig {
            d: args.d,
            family: args.family,
            sizes,
            trials: args.trials,
            master_seed: args.common.seed(),
            allow_inadmissible: args.allow_inadmissible,
        },
        &caps,
    )?;
    let payload = match args.common.format {
        OutputFormat::Json => serde_json::to_string_pretty(&scan).expect("scan serializes"),
        OutputFormat::Csv => scan.to_csv(),
    };
    args.common.emit(&payload)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_rate(args: RateArgs) -> Result<ExitCode, Error> {
    let params = RateParams::new(args.n, args.d, args.alpha)?;
    let rate = params.rate();
    println!("{rate}");
    if let Some(p) = args.p {
        PrimeField::new(p)?;
        println!("critical_set_size({p}) = {}", params.critical_set_size(p));
    }
    if args.common.out.is_some() {
        let report = RateReport {
            n: args.n,
            d: args.d,
            alpha: args.alpha,
            rate,
            critical_exponent: params.critical_exponent(),
            formula: "n / (d * (8 - 2*alpha))".to_string(),
        };
        args.common
            .emit(&serde_json::to_string_pretty(&report).expect("report serializes"))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_fourier(args: FourierArgs) -> Result<ExitCode, Error> {
    let report = fourier_experiment(args.p, &args.common.caps())?;
    println!(
        "coefficient_sum = {}, ratio to ln p = {}",
        report.coefficient_sum, report.ratio_to_log
    );
    if args.common.out.is_some() {
        args.common
            .emit(&serde_json::to_string_pretty(&report).expect("report serializes"))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_checklemma(args: ChecklemmaArgs) -> Result<ExitCode, Error> {
    let config = LemmaConfig {
        p: args.p,
        n_min: args.nmin,
        n_max: args.nmax,
        trials: args.trials,
        max_size: args.size_max,
        unit_disc: args.unit_disc,
        seed: args.common.seed(),
    };
    let summary = lemma_trials(&config, &args.common.caps())?;
    let payload = serde_json::to_string_pretty(&summary).expect("summary serializes");
    args.common.emit(&payload)?;
    if summary.violations > 0 {
        eprintln!(
            "error: {} of {} instances violated the exponential-sum bound (first seed {})",
            summary.violations,
            summary.trials,
            summary.first_violation_seed.unwrap_or(0)
        );
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_fixture(args: FixtureArgs) -> Result<ExitCode, Error> {
    let field = PrimeField::new(args.p)?;
    let caps = args.common.caps();
    let seed = args.common.seed();
    let need_size = || {
        args.size
            .ok_or_else(|| Error::InvalidInput("this fixture kind needs --size".to_string()))
    };
    let source = match args.kind {
        FixtureKind::Uniform => Source::uniform(&field, args.n, &caps)?,
        FixtureKind::Line => adversarial_line_source(&field, args.n)?,
        FixtureKind::Point => {
            let coords = parse_coords(args.point.as_deref().ok_or_else(|| {
                Error::InvalidInput("--kind point needs --point <coords>".to_string())
            })?)?;
            Source::point_mass(field.vector(&coords)?)
        }
        FixtureKind::RandomFlat => {
            use rand::SeedableRng;
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let support = random_support(&field, args.n, need_size()?, &mut rng)?;
            Source::flat(&field, args.n, support)?.with_seed(seed)
        }
        FixtureKind::RandomGeneral => {
            use rand::SeedableRng;
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            random_general_source(&field, args.n, need_size()?, &mut rng)?.with_seed(seed)
        }
    };
    let payload = serde_json::to_string_pretty(&source.to_fixture()).expect("fixture serializes");
    args.common.emit(&payload)?;
    Ok(ExitCode::SUCCESS)
}
