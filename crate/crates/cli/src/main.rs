#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod json;
mod verify;

use besselext::corpus::ProblemConfig;
use besselext::numerics::Tolerance;
use besselext::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

/// Bessel-type Sturm–Liouville operators: classification, self-adjoint
/// extensions, spectra and Hardy-type inequalities.
#[derive(Parser, Debug)]
#[command(name = "besselext", version)]
pub struct Cli {
    /// Problem file of `key = value` lines; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Print the merged problem config and exit.
    #[arg(long, global = true)]
    dump_config: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads for determinant scans.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(flatten)]
    problem: ProblemArgs,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args, Debug, Default)]
struct ProblemArgs {
    /// Left endpoint [default: 0].
    #[arg(long, global = true, allow_hyphen_values = true)]
    a: Option<f64>,
    /// Right endpoint [default: 1].
    #[arg(long, global = true, allow_hyphen_values = true)]
    b: Option<f64>,
    /// Strength at a [default: 0.5].
    #[arg(long, global = true)]
    sa: Option<f64>,
    /// Strength at b [default: 0.5].
    #[arg(long, global = true)]
    sb: Option<f64>,
    /// Potential: `0`, `const:<c>` or `poly:<c0,c1,...>`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    q: Option<String>,
    /// Relative tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Endpoint classification and deficiency index.
    Classify,
    /// Eigenvalues of a self-adjoint extension.
    Spectrum {
        /// friedrichs | krein | separated:<α,β> | coupled:<φ,r11,r12,r21,r22>;
        /// `-` marks a missing angle at a limit point end.
        #[arg(long, default_value = "friedrichs", allow_hyphen_values = true)]
        ext: String,
        #[arg(long, allow_hyphen_values = true)]
        lmin: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        lmax: Option<f64>,
    },
    /// Krein–von Neumann boundary data, numeric and closed form.
    Krein,
    /// Both sides of a Hardy-type inequality for one trial function.
    Hardy {
        /// power | distance | sine | halfline | log-refined
        #[arg(long, default_value = "power")]
        variant: String,
        /// Trial spec (poly:, power:, halfpower:, bump:, sine:) or a file holding one.
        #[arg(long)]
        trial: String,
        /// Log-refined variant: the interval [r0, r1] inside (a, b].
        #[arg(long)]
        r0: Option<f64>,
        #[arg(long)]
        r1: Option<f64>,
        /// Log-refined variant: strength, defaults to sa.
        #[arg(long, allow_hyphen_values = true)]
        s: Option<f64>,
        /// Log-refined variant: the scale R > r1 − a.
        #[arg(long)]
        big_r: Option<f64>,
    },
    /// Two-weight Muckenhoupt constant on (a, b).
    Muckenhoupt {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Weight: const:<c>, pow:<e> for (x−a)^e, rpow:<e> for (b−x)^e, dist:<e>.
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
    },
    /// Runs the built-in verification suites.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Frames,
    Krein,
    Hardy,
    Specialfn,
}

/// Reasons to stop, each with its exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Verification(String),
    Unavailable(String),
    Numerical(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) | Failure::Numerical(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Unavailable(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Verification(m) | Failure::Unavailable(m) | Failure::Numerical(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parameter(_) | Error::Problem(_) | Error::Inadmissible(_) | Error::OutsideFormDomain(_) => {
                Failure::Usage(e.to_string())
            }
            Error::Unavailable(_) => Failure::Unavailable(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

fn merged_config(cli: &Cli) -> Result<ProblemConfig, Failure> {
    let mut c = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            ProblemConfig::parse(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
        }
        None => ProblemConfig::default(),
    };
    let p = &cli.problem;
    for (key, v) in [("a", p.a), ("b", p.b), ("sa", p.sa), ("sb", p.sb), ("tol", p.tol)] {
        if let Some(v) = v {
            c.set(key, &format!("{v:?}"))?;
        }
    }
    if let Some(q) = &p.q {
        c.set("q", q)?;
    }
    Ok(c)
}

fn tolerance(c: &ProblemConfig) -> Result<Tolerance, Failure> {
    let mut t = Tolerance::default();
    if let Ok(v) = std::env::var("BESSELEXT_TOL") {
        t.rel = v.trim().parse().map_err(|_| Failure::Usage(format!("BESSELEXT_TOL={v:?} is not a number")))?;
    }
    if let Some(r) = c.rel_tol {
        t.rel = r;
    }
    if let Some(a) = c.abs_tol {
        t.abs = a;
    }
    Ok(Tolerance::new(t.rel, t.abs, t.max_steps)?)
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let config = merged_config(cli)?;
    if cli.dump_config {
        return Ok(config.dump());
    }
    let Some(command) = &cli.command else {
        return Err(Failure::Usage("no command given; see --help".into()));
    };
    let tol = tolerance(&config)?;
    let problem = config.problem()?;
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| Failure::Usage(format!("--jobs: {e}")))?;
    }
    let ctx = commands::Context { config: &config, problem: &problem, tol };
    let report = match command {
        Command::Classify => commands::classify(&ctx),
        Command::Spectrum { ext, lmin, lmax } => {
            let (report, table) = commands::spectrum(&ctx, ext, *lmin, *lmax)?;
            if cli.format == Format::Csv {
                return Ok(table);
            }
            report
        }
        Command::Krein => commands::krein(&ctx)?,
        Command::Hardy { variant, trial, r0, r1, s, big_r } => {
            commands::hardy(&ctx, variant, trial, commands::LogOptions { r0: *r0, r1: *r1, s: *s, big_r: *big_r })?
        }
        Command::Muckenhoupt { kind, u, v, p } => commands::muckenhoupt(&ctx, *kind, u, v, *p)?,
        Command::Verify { suite } => {
            let (report, first_failure) = verify::run(*suite)?;
            if let Some(f) = first_failure {
                print!("{}", format_report(&report, cli.format));
                return Err(Failure::Verification(format!("first failing check {f}")));
            }
            report
        }
    };
    Ok(format_report(&report, cli.format))
}

fn format_report(report: &json::Json, format: Format) -> String {
    match format {
        Format::Json => json::render(report),
        Format::Csv => {
            let mut rows = Vec::new();
            json::flatten(report, "", &mut rows);
            let mut s = String::from("key,value\n");
            for (k, v) in rows {
                s += &format!("{k},{v}\n");
            }
            s
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("besselext: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
