//! Command-line front end for the `skewtent` library.
//!
//! Every subcommand writes to the supplied streams and returns its exit code, so
//! the binary is a thin wrapper and tests can drive commands in-process.
//!
//! Exit codes: 0 success, 1 usage or bad arguments, 2 boundary or unmet region
//! prerequisites, 3 verification failure.

use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};

pub mod boundaries;
pub mod fmt;
pub mod raster;
pub mod report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_BOUNDARY: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "skewtent", version, about = "Region atlas, attractors and diagnostics for skew tent maps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RasterFormat {
    Ppm,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrbitFormat {
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Basin,
    Invariance,
    Lyapunov,
    Covering,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Curve {
    #[value(name = "rho")]
    Rho,
    #[value(name = "Kp")]
    Kp,
    #[value(name = "Km")]
    Km,
    #[value(name = "Lm")]
    Lm,
    #[value(name = "Nm")]
    Nm,
    #[value(name = "alpha")]
    Alpha,
    #[value(name = "beta")]
    Beta,
    #[value(name = "gamma")]
    Gamma,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify (k, r) into its parameter region.
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        k: f64,
        #[arg(long, allow_hyphen_values = true)]
        r: f64,
        #[arg(long)]
        json: bool,
        /// Relative distance to a defining equality treated as boundary.
        #[arg(long, default_value_t = skewtent::regions::DEFAULT_TAU)]
        tau: f64,
        /// Deepest cascade level examined.
        #[arg(long, default_value_t = skewtent::regions::DEFAULT_P_MAX)]
        p_max: usize,
    },
    /// Report the attractor and the exceptional set.
    Attractor {
        #[arg(long, allow_hyphen_values = true)]
        k: f64,
        #[arg(long, allow_hyphen_values = true)]
        r: f64,
        #[arg(long)]
        json: bool,
    },
    /// Dump an orbit as CSV rows `step,x,branch`.
    Orbit {
        #[arg(long, allow_hyphen_values = true)]
        k: f64,
        #[arg(long, allow_hyphen_values = true)]
        r: f64,
        #[arg(long, allow_hyphen_values = true)]
        x0: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: OrbitFormat,
    },
    /// Classify every pixel center of a (k, r) rectangle.
    #[command(after_help = raster::PALETTE_HELP)]
    Raster {
        #[arg(long)]
        kmin: f64,
        #[arg(long)]
        kmax: f64,
        #[arg(long)]
        rmin: f64,
        #[arg(long)]
        rmax: f64,
        #[arg(long)]
        width: usize,
        #[arg(long)]
        height: usize,
        #[arg(long)]
        out: std::path::PathBuf,
        #[arg(long, value_enum, default_value = "ppm")]
        format: RasterFormat,
        #[arg(long, default_value_t = skewtent::regions::DEFAULT_P_MAX)]
        p_max: usize,
    },
    /// Run a numerical verification suite.
    Verify {
        #[arg(long, allow_hyphen_values = true)]
        k: f64,
        #[arg(long, allow_hyphen_values = true)]
        r: f64,
        #[arg(long, value_enum)]
        suite: Suite,
        /// Seeds (basin) or start intervals (covering); suite default when omitted.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Orbit length for the lyapunov suite.
        #[arg(long)]
        iterations: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Tabulate a boundary curve as CSV.
    Boundaries {
        #[arg(long, value_enum)]
        curve: Curve,
        /// Cascade index, `N` or `N..M`.
        #[arg(long)]
        p: Option<String>,
        /// Window index, `N` or `N..M`.
        #[arg(long)]
        m: Option<String>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        from: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        to: Option<f64>,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let result = match cli.command {
        Command::Classify { k, r, json, tau, p_max } => report::classify(k, r, json, tau, p_max, out),
        Command::Attractor { k, r, json } => report::attractor(k, r, json, out),
        Command::Orbit { k, r, x0, n, format: OrbitFormat::Csv } => report::orbit(k, r, x0, n, out),
        Command::Raster { kmin, kmax, rmin, rmax, width, height, out: path, format, p_max } => {
            let spec = raster::RasterSpec { k_range: (kmin, kmax), r_range: (rmin, rmax), width, height, p_max };
            raster::command(&spec, &path, format, out)
        }
        Command::Verify { k, r, suite, samples, seed, iterations, json } => {
            report::verify(k, r, suite, samples, seed, iterations, json, out)
        }
        Command::Boundaries { curve, p, m, samples, from, to, out: path } => {
            boundaries::command(curve, p.as_deref(), m.as_deref(), samples, from, to, path.as_deref(), out)
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

/// A failure carrying the exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }

    pub fn boundary(message: impl Into<String>) -> Self {
        Self { code: EXIT_BOUNDARY, message: message.into() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::usage(format!("i/o: {e}"))
    }
}

impl From<skewtent::Error> for CliError {
    fn from(e: skewtent::Error) -> Self {
        use skewtent::Error as E;
        let code = match e {
            E::InvalidMap(_) | E::OutOfDomain(_) | E::InvalidWord { .. } => EXIT_USAGE,
            _ => EXIT_BOUNDARY,
        };
        Self { code, message: e.to_string() }
    }
}

pub type CliResult = Result<i32, CliError>;
