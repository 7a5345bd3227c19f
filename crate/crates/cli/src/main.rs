//! `selberg` — checks and data exports for Dirichlet series with
//! gamma-factor data, driven by small config files.
//!
//! Exit status: 0 when every requested check passes, 1 when a check
//! exceeds its tolerance, 2 on configuration or usage errors.
//!
//! The only environment variable consulted is `SELBERG_OUT_DIR`, an
//! optional directory override for relative `--out` paths.

mod commands;
mod config;

use clap::{Args, Parser, Subcommand};
use selberg_core::Complex;
use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "selberg",
    about = "Numerical checks for Dirichlet series with gamma-factor data",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FunctionArgs {
    /// Path to a config file with a [function] section.
    config: PathBuf,
    /// Override the number of realized coefficients.
    #[arg(long)]
    max_terms: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the multiplicative functional-equation residual on a grid of scales.
    FeCheck {
        #[command(flatten)]
        function: FunctionArgs,
        /// Comma-separated grid of scales x.
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<f64>>,
        /// Residual tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Multiply the root number by exp(i * phase) before checking.
        #[arg(long)]
        epsilon_phase: Option<f64>,
        /// Write per-point results to this CSV file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the inversion symmetry of a two-variable Bessel series.
    ConverseCheck {
        /// Path to a config file with a [gl2] section.
        config: PathBuf,
        /// Comma-separated radii r.
        #[arg(long, value_delimiter = ',')]
        rs: Option<Vec<f64>>,
        /// Comma-separated angles theta in (0, pi/2).
        #[arg(long, value_delimiter = ',')]
        thetas: Option<Vec<f64>>,
        /// Residual tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Perturb one coefficient: "n,re" or "n,re,im".
        #[arg(long)]
        perturb: Option<String>,
        /// Write per-point results to this CSV file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Prime-sum statistics at geometric checkpoints; --nf fits the variance slope.
    Stats {
        #[command(flatten)]
        function: FunctionArgs,
        /// Largest checkpoint.
        #[arg(long)]
        xmax: Option<f64>,
        /// Fit the variance slope against log log x and round it.
        #[arg(long)]
        nf: bool,
        /// Allowed distance from the nearest integer slope.
        #[arg(long)]
        tol: Option<f64>,
        /// Write checkpoint sums to this CSV file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Degree and conductor bookkeeping plus the completed-function decay profile.
    DegreeAudit {
        #[command(flatten)]
        function: FunctionArgs,
        /// Allowed gap between the fitted decay exponent and degree - 1.
        #[arg(long)]
        tol: Option<f64>,
        /// Write the decay profile to this CSV file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Audit the coefficient axioms of a realized function.
    Axioms {
        #[command(flatten)]
        function: FunctionArgs,
    },
    /// Built-in identity spot checks for the special-function kernels.
    SpecfunTest {
        /// Relative tolerance for the identity checks.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// List built-in function stanzas and primitive character counts.
    ListBuiltins,
}

fn load_config(path: &PathBuf) -> Result<config::Parsed, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    config::parse_config(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn parse_perturb(text: &str) -> Result<(usize, Complex), String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() < 2 || parts.len() > 3 {
        return Err("--perturb expects \"n,re\" or \"n,re,im\"".into());
    }
    let n: usize = parts[0]
        .parse()
        .map_err(|_| format!("--perturb: bad index {:?}", parts[0]))?;
    let re: f64 = parts[1]
        .parse()
        .map_err(|_| format!("--perturb: bad real part {:?}", parts[1]))?;
    let im: f64 = match parts.get(2) {
        Some(p) => p
            .parse()
            .map_err(|_| format!("--perturb: bad imaginary part {p:?}"))?,
        None => 0.0,
    };
    Ok((n, Complex::new(re, im)))
}

fn run(cli: Cli) -> Result<bool, String> {
    match cli.command {
        Command::FeCheck { function, grid, tol, epsilon_phase, out } => {
            let parsed = load_config(&function.config)?;
            let defaults = parsed.check().clone();
            let spec = parsed.into_function()?;
            let n_max = function
                .max_terms
                .or(defaults.max_terms)
                .unwrap_or(65_536);
            let f = spec.realize(n_max)?;
            let grid = grid
                .or(defaults.grid)
                .unwrap_or_else(|| vec![0.7, 1.0, 1.4]);
            let tol = tol.or(defaults.tol).unwrap_or(1e-8);
            commands::fe_check(&f, &grid, tol, epsilon_phase, out.as_deref())
        }
        Command::ConverseCheck { config, rs, thetas, tol, perturb, out } => {
            let parsed = load_config(&config)?;
            let defaults = parsed.check().clone();
            let spec = parsed.into_gl2()?;
            let params = spec.realize()?;
            let rs = rs.or(defaults.grid).unwrap_or_else(|| vec![1.2, 2.0, 3.0]);
            let thetas = thetas.unwrap_or_else(|| vec![PI / 6.0, PI / 4.0, PI / 3.0]);
            let tol = tol.or(defaults.tol).unwrap_or(1e-8);
            let perturb = perturb.as_deref().map(parse_perturb).transpose()?;
            commands::converse_check(&params, &rs, &thetas, tol, perturb, out.as_deref())
        }
        Command::Stats { function, xmax, nf, tol, out } => {
            let parsed = load_config(&function.config)?;
            let defaults = parsed.check().clone();
            let spec = parsed.into_function()?;
            let xmax = xmax.or(defaults.xmax).unwrap_or(1e6);
            if !xmax.is_finite() || xmax < 16.0 {
                return Err("--xmax must be a finite value of at least 16".into());
            }
            let n_max = function
                .max_terms
                .or(defaults.max_terms)
                .unwrap_or(xmax as usize);
            let f = spec.realize(n_max)?;
            // The config-file tol keys a residual check, not a slope fit.
            let tol = tol.unwrap_or(0.5);
            commands::stats_cmd(&f, xmax as u64, nf, tol, out.as_deref())
        }
        Command::DegreeAudit { function, tol, out } => {
            let parsed = load_config(&function.config)?;
            let defaults = parsed.check().clone();
            let spec = parsed.into_function()?;
            let n_max = function
                .max_terms
                .or(defaults.max_terms)
                .unwrap_or(200_000);
            let f = spec.realize(n_max)?;
            let tol = tol.unwrap_or(0.1);
            commands::degree_audit(&f, tol, out.as_deref())
        }
        Command::Axioms { function } => {
            let parsed = load_config(&function.config)?;
            let defaults = parsed.check().clone();
            let spec = parsed.into_function()?;
            let n_max = function
                .max_terms
                .or(defaults.max_terms)
                .unwrap_or(10_000);
            let f = spec.realize(n_max)?;
            commands::axioms_cmd(&f)
        }
        Command::SpecfunTest { tol } => commands::specfun_test(tol),
        Command::ListBuiltins => commands::list_builtins(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
