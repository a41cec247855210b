use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cplandscape::aggregation::{average_landscape, compare_apl_cpl_with, rank_k_transform, Reading};
use cplandscape::inversion::reconstruct;
use cplandscape::io::{
    export_nu0, export_plot, linspace, parse_diagram, parse_landscape, parse_landscape_with, write_diagram,
    write_landscape, write_plan, LandscapeSyntax,
};
use cplandscape::landscape::{compute_landscape, Landscape};
use cplandscape::measure::PersistenceMeasure;
use cplandscape::rational::Rational;
use cplandscape::suite::{run_suite, Mutant, SuiteConfig, Trials};
use cplandscape::transport::w1_rk;
use cplandscape::validate::validate_landscape;
use cplandscape::Error;

/// Exact continuous persistence landscapes of weighted persistence diagrams.
///
/// Diagram files hold `birth death [weight]` per line; landscape files start
/// with `bands N`. Numbers are decimals or `p/q` and are read exactly.
#[derive(Parser)]
#[command(name = "cpl", version)]
struct Cli {
    /// Seed for every randomized command.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the landscape of a diagram.
    Landscape {
        diagram: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Evaluate a landscape at level `a` and abscissa `t`.
    Eval {
        landscape: PathBuf,
        #[arg(long)]
        a: Rational,
        #[arg(long)]
        t: Rational,
    },
    /// Recover the diagram whose landscape is given.
    Invert {
        landscape: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Distance between two diagrams.
    Dist {
        #[arg(value_enum)]
        metric: Metric,
        a: PathBuf,
        b: PathBuf,
        /// Write the optimal transport plan as TSV (w1rk only).
        #[arg(long)]
        plan: Option<PathBuf>,
    },
    /// Average landscape of integer-weight diagrams.
    Apl {
        #[arg(required = true)]
        diagrams: Vec<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Mean measure of diagrams.
    Mean {
        #[arg(required = true)]
        diagrams: Vec<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Diagram whose landscape is the input's shifted down by k - 1 levels.
    RankK {
        diagram: PathBuf,
        #[arg(long)]
        k: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compare the mean-measure landscape with the average landscape at level k.
    CompareApl {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        t: Rational,
        #[arg(long)]
        h: Rational,
        /// How the exactly-k hypothesis counts points.
        #[arg(long, value_enum, default_value_t = ReadingArg::Distinct)]
        reading: ReadingArg,
        #[arg(required = true)]
        diagrams: Vec<PathBuf>,
    },
    /// Check the four landscape properties; exit status 1 if any fails.
    Check { landscape: PathBuf },
    /// Run the randomized property suite.
    Suite {
        /// Tenfold fewer trials.
        #[arg(long)]
        quick: bool,
        /// Inject a known defect; the suite should then fail.
        #[arg(long, value_enum)]
        mutant: Option<MutantArg>,
    },
    /// Export plot data: `a t lambda` rows, or `h nu0` rows with --nu0.
    Plot {
        landscape: PathBuf,
        /// Levels as `lo:hi:steps`.
        #[arg(long, default_value = "1:1:0")]
        a: String,
        /// Abscissae as `lo:hi:steps`; with --nu0 a single value.
        #[arg(long)]
        t: String,
        /// Emit `nu0(Q_{t,h})` over --h instead.
        #[arg(long)]
        nu0: bool,
        /// Heights as `lo:hi:steps`, for --nu0.
        #[arg(long, default_value = "0:1:10")]
        h: String,
        /// Decimal places.
        #[arg(long, default_value_t = 6)]
        precision: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Metric {
    W1rk,
    L1,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReadingArg {
    Distinct,
    Mass,
}

#[derive(Clone, Copy, ValueEnum)]
enum MutantArg {
    DropHalf,
}

enum Failure {
    /// Validation or suite failure.
    Check(String),
    /// Unreadable or malformed input.
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ValidationFailed(_) | Error::VerificationFailed(_) => Failure::Check(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type CliResult<T = ()> = std::result::Result<T, Failure>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn with_path<T>(path: &Path, r: cplandscape::Result<T>) -> CliResult<T> {
    r.map_err(|e| match Failure::from(e) {
        Failure::Input(m) => Failure::Input(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn read_diagram(path: &Path) -> CliResult<PersistenceMeasure> {
    with_path(path, parse_diagram(&read(path)?))
}

fn read_landscape(path: &Path, syntax: LandscapeSyntax) -> CliResult<Landscape> {
    with_path(path, parse_landscape_with(&read(path)?, syntax))
}

fn emit(output: Option<&Path>, text: &str) -> CliResult {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn exact_and_decimal(r: &Rational) -> String {
    format!("{r} ({:.12})", r.to_f64())
}

fn grid(text: &str) -> CliResult<Vec<Rational>> {
    let bad = || Failure::Input(format!("grid `{text}` is not `lo:hi:steps` or a single value"));
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [v] => Ok(vec![v.parse().map_err(|_| bad())?]),
        [lo, hi, steps] => {
            let lo: Rational = lo.parse().map_err(|_| bad())?;
            let hi: Rational = hi.parse().map_err(|_| bad())?;
            let steps: u32 = steps.parse().map_err(|_| bad())?;
            Ok(linspace(&lo, &hi, steps))
        }
        _ => Err(bad()),
    }
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Landscape { diagram, output } => {
            let l = compute_landscape(&read_diagram(&diagram)?)?;
            emit(output.as_deref(), &write_landscape(&l))
        }
        Command::Eval { landscape, a, t } => {
            let l = read_landscape(&landscape, LandscapeSyntax::AnySlopes)?;
            println!("{}", exact_and_decimal(&l.evaluate(&a, &t)?));
            Ok(())
        }
        Command::Invert { landscape, output } => {
            let l = with_path(&landscape, parse_landscape(&read(&landscape)?))?;
            emit(output.as_deref(), &write_diagram(&reconstruct(&l)?))
        }
        Command::Dist { metric, a, b, plan } => {
            let (ma, mb) = (read_diagram(&a)?, read_diagram(&b)?);
            match metric {
                Metric::W1rk => {
                    let (w, p) = w1_rk(&ma, &mb)?;
                    println!("{}", exact_and_decimal(&w));
                    if let Some(path) = plan {
                        emit(Some(&path), &write_plan(&p))?;
                    }
                }
                Metric::L1 => {
                    if plan.is_some() {
                        return Err(Failure::Input("--plan applies to w1rk only".into()));
                    }
                    let d = compute_landscape(&ma)?.l1_distance(&compute_landscape(&mb)?);
                    println!("{}", exact_and_decimal(&d));
                }
            }
            Ok(())
        }
        Command::Apl { diagrams, output } => {
            let samples = diagrams.iter().map(|p| read_diagram(p)).collect::<CliResult<Vec<_>>>()?;
            emit(output.as_deref(), &write_landscape(&average_landscape(&samples)?))
        }
        Command::Mean { diagrams, output } => {
            let samples = diagrams.iter().map(|p| read_diagram(p)).collect::<CliResult<Vec<_>>>()?;
            emit(output.as_deref(), &write_diagram(&PersistenceMeasure::mean(&samples)?))
        }
        Command::RankK { diagram, k, output } => {
            let m = rank_k_transform(&read_diagram(&diagram)?, k)?;
            emit(output.as_deref(), &write_diagram(&m))
        }
        Command::CompareApl {
            k,
            t,
            h,
            reading,
            diagrams,
        } => {
            let samples = diagrams.iter().map(|p| read_diagram(p)).collect::<CliResult<Vec<_>>>()?;
            let reading = match reading {
                ReadingArg::Distinct => Reading::DistinctPoints,
                ReadingArg::Mass => Reading::Mass,
            };
            let r = compare_apl_cpl_with(&samples, k, &t, &h, reading)?;
            println!("k {}", r.k);
            println!("t {}", r.t);
            println!("h {}", r.h);
            println!("samples {}", samples.len());
            println!("hypothesis_distinct {}", r.hypothesis_distinct);
            println!("hypothesis_mass {}", r.hypothesis_mass);
            println!("reading {}", if reading == Reading::Mass { "mass" } else { "distinct" });
            println!("cpl_value {}", exact_and_decimal(&r.cpl_value));
            println!("apl_value {}", exact_and_decimal(&r.apl_value));
            match r.dominance {
                Some(true) => println!("dominance holds"),
                Some(false) => {
                    println!("dominance violated");
                    return Err(Failure::Check("cpl_value > apl_value under the hypothesis".into()));
                }
                None => println!("dominance not asserted"),
            }
            Ok(())
        }
        Command::Check { landscape } => {
            let l = read_landscape(&landscape, LandscapeSyntax::Raw)?;
            let report = validate_landscape(&l);
            print!("{report}");
            if report.all_pass() {
                Ok(())
            } else {
                Err(Failure::Check(format!("properties {:?} fail", report.failed())))
            }
        }
        Command::Suite { quick, mutant } => {
            let mut config = SuiteConfig::new(cli.seed);
            if quick {
                config.trials = Trials::default().reduced(10);
            }
            config.mutant = mutant.map(|MutantArg::DropHalf| Mutant::DropHalf);
            let report = run_suite(&config);
            print!("{report}");
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Check("suite failed".into()))
            }
        }
        Command::Plot {
            landscape,
            a,
            t,
            nu0,
            h,
            precision,
            output,
        } => {
            let l = read_landscape(&landscape, LandscapeSyntax::AnySlopes)?;
            let text = if nu0 {
                let ts = grid(&t)?;
                let [t] = ts.as_slice() else {
                    return Err(Failure::Input("--nu0 takes a single --t value".into()));
                };
                export_nu0(&l, t, &grid(&h)?, precision)?
            } else {
                export_plot(&l, &grid(&a)?, &grid(&t)?, precision)?
            };
            emit(output.as_deref(), &text)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(m)) => {
            eprintln!("cpl: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Input(m)) => {
            eprintln!("cpl: {m}");
            ExitCode::from(2)
        }
    }
}
