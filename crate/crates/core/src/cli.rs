//! Command-line front end: `exact`, `approx`, `constants` and `probe`.
//!
//! Each command writes one record per line to standard output; diagnostics go
//! to standard error. Exit codes: 0 success, 2 parse or parameter error,
//! 3 size guard, 4 outside the zero-free region, 5 no admissible constants,
//! 1 anything else.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::exact::{hafnian_exact, multidim_permanent_exact, permanent, PermanentAlgorithm};
use crate::format::{self, ApproxFields, ResultRecord, Structure};
use crate::region::{default_delta, probe_nonvanishing, solve_theta, ProbeReport, RegionConstants};
use crate::taylor::{
    approximate, approximate_at_order, ApproxResult, DerivativeProvider, HafnianProvider,
    PermanentProvider, TensorProvider,
};

#[derive(Debug, Parser)]
#[command(name = "permac", version, about = "Permanents of complex matrices near the all-ones matrix")]
pub struct Cli {
    /// Worker threads for the inner sums; 1 is the reference mode.
    #[arg(long, global = true, env = "PERMAC_THREADS", default_value_t = 1)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Ryser,
    Naive,
    Auto,
}

impl From<Algorithm> for PermanentAlgorithm {
    fn from(a: Algorithm) -> Self {
        match a {
            Algorithm::Ryser => PermanentAlgorithm::Ryser,
            Algorithm::Naive => PermanentAlgorithm::Naive,
            Algorithm::Auto => PermanentAlgorithm::Auto,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact permanent, hafnian or multidimensional permanent.
    Exact {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Algorithm::Auto)]
        algorithm: Algorithm,
    },
    /// Taylor approximation within a relative error.
    Approx {
        file: PathBuf,
        #[arg(long, default_value_t = 0.01)]
        epsilon: f64,
        /// Smaller zero-free radius to assume (never larger than the default).
        #[arg(long)]
        delta_override: Option<f64>,
        /// Fixed Taylor order; the record reports the bound this order achieves.
        #[arg(long)]
        order_override: Option<usize>,
    },
    /// Zero-free region constants delta, theta, tau.
    Constants {
        #[arg(long, default_value_t = 2)]
        nu: usize,
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Smallest exact permanent modulus over random matrices near J.
    Probe {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        radius: f64,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::InvalidInput(_) | Error::InvalidParameter(_) => 2,
        Error::SizeGuard { .. } => 3,
        Error::OutsideRegion { .. } => 4,
        Error::NoSolution { .. } => 5,
        Error::SingularBase | Error::OrderCap { .. } => 1,
    }
}

/// Exact value of the structure described by `text`.
pub fn cmd_exact(text: &str, algorithm: PermanentAlgorithm, threads: usize) -> Result<ResultRecord> {
    let start = Instant::now();
    let structure = format::parse_structure(text)?;
    let (operation, value) = match &structure {
        Structure::Matrix(m) => (
            format!("exact_permanent_{}", algorithm.name()),
            permanent(m, algorithm, threads)?,
        ),
        Structure::Symmetric(s) => ("exact_hafnian".to_string(), hafnian_exact(s)?),
        Structure::Tensor(t) => ("exact_multidim_permanent".to_string(), multidim_permanent_exact(t)?),
    };
    Ok(ResultRecord {
        input_digest: format::digest(&structure),
        operation,
        kind: structure.kind().into(),
        value,
        approx: None,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

/// Options for [`cmd_approx`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxOptions {
    pub epsilon: f64,
    pub delta_override: Option<f64>,
    pub order_override: Option<usize>,
    pub threads: usize,
}

impl Default for ApproxOptions {
    fn default() -> Self {
        Self {
            epsilon: 0.01,
            delta_override: None,
            order_override: None,
            threads: 1,
        }
    }
}

fn run_provider<P: DerivativeProvider>(provider: &P, opts: &ApproxOptions) -> Result<ApproxResult> {
    let default = provider.default_delta()?;
    let delta = match opts.delta_override {
        Some(d) if !(d > 0.0 && d <= default) => {
            return Err(Error::InvalidParameter(format!(
                "delta override must lie in (0, {default}], got {d}"
            )))
        }
        Some(d) => d,
        None => default,
    };
    match opts.order_override {
        Some(m) => approximate_at_order(provider, provider.gamma(), delta, m),
        None => approximate(provider, provider.gamma(), delta, opts.epsilon),
    }
}

/// Approximation of the structure described by `text`, dispatched on its kind.
pub fn cmd_approx(text: &str, opts: &ApproxOptions) -> Result<(ResultRecord, ApproxResult)> {
    let start = Instant::now();
    let structure = format::parse_structure(text)?;
    let (operation, result) = match &structure {
        Structure::Matrix(m) => (
            "approx_permanent",
            run_provider(&PermanentProvider::new(m).with_threads(opts.threads), opts)?,
        ),
        Structure::Symmetric(s) => (
            "approx_hafnian",
            run_provider(&HafnianProvider::new(s).with_threads(opts.threads), opts)?,
        ),
        Structure::Tensor(t) => (
            "approx_multidim_permanent",
            run_provider(&TensorProvider::new(t).with_threads(opts.threads), opts)?,
        ),
    };
    let record = ResultRecord {
        input_digest: format::digest(&structure),
        operation: operation.into(),
        kind: structure.kind().into(),
        value: result.value,
        approx: Some(ApproxFields {
            log_estimate: result.log_estimate,
            m: result.order_used,
            beta: result.beta,
            gamma: result.gamma,
            delta: result.delta,
            epsilon: opts.order_override.is_none().then_some(opts.epsilon),
            additive_bound: result.additive_bound,
            relative_bound: result.relative_bound,
        }),
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    Ok((record, result))
}

/// Region constants for `nu`, at `delta` or the default radius.
pub fn cmd_constants(nu: usize, delta: Option<f64>) -> Result<RegionConstants> {
    let delta = match delta {
        Some(d) => d,
        None => default_delta(nu)?,
    };
    solve_theta(delta, nu)
}

/// `{"nu":..,"delta":..,"theta":..,"tau":..,"roots":[..]}` with 10 decimal places.
pub fn constants_line(c: &RegionConstants) -> String {
    let roots: Vec<String> = c.roots.iter().map(|r| format!("{r:.10}")).collect();
    format!(
        "{{\"nu\":{},\"delta\":{:.10},\"theta\":{:.10},\"tau\":{:.10},\"roots\":[{}]}}",
        c.nu,
        c.delta,
        c.theta,
        c.tau,
        roots.join(",")
    )
}

pub fn cmd_probe(n: usize, radius: f64, trials: u64, seed: u64, threads: usize) -> Result<ProbeReport> {
    probe_nonvanishing(n, radius, trials, seed, threads)
}

fn read_input(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<()> {
    let threads = cli.threads.max(1);
    let line = match cli.command {
        Command::Exact { file, algorithm } => {
            cmd_exact(&read_input(&file)?, algorithm.into(), threads)?.to_line()
        }
        Command::Approx {
            file,
            epsilon,
            delta_override,
            order_override,
        } => {
            let opts = ApproxOptions {
                epsilon,
                delta_override,
                order_override,
                threads,
            };
            cmd_approx(&read_input(&file)?, &opts)?.0.to_line()
        }
        Command::Constants { nu, delta } => constants_line(&cmd_constants(nu, delta)?),
        Command::Probe {
            n,
            radius,
            trials,
            seed,
        } => {
            let report = cmd_probe(n, radius, trials, seed, threads)?.to_text();
            write!(out, "{report}").map_err(|e| Error::InvalidInput(e.to_string()))?;
            return Ok(());
        }
    };
    writeln!(out, "{line}").map_err(|e| Error::InvalidInput(e.to_string()))
}

/// Parses `args` (including the program name) and runs the command. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
