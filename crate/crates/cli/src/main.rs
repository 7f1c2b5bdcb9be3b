//! Command-line front end for `framescale`.
//!
//! Exit codes: 0 affirmative verdict, 1 negative verdict, 2 borderline,
//! 3 usage or input error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use framescale::Config;

use commands::{CliError, Context};

#[derive(Parser)]
#[command(name = "framescale", version, about = "Tight frame scaling with certificates")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Emit a JSON result document instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Print nothing but errors; the exit code carries the verdict.
    #[arg(long, short, global = true)]
    quiet: bool,
    /// TOML file with tolerance settings; command-line overrides win.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Divide every input vector by its norm before use.
    #[arg(long, global = true)]
    renormalize: bool,
    #[arg(long, global = true, value_name = "X")]
    tol_unit: Option<f64>,
    #[arg(long, global = true, value_name = "X")]
    tol_sym: Option<f64>,
    #[arg(long, global = true, value_name = "X")]
    tol_tight: Option<f64>,
    #[arg(long, global = true, value_name = "X")]
    tol_psd: Option<f64>,
    #[arg(long, global = true, value_name = "X")]
    tol_null: Option<f64>,
    #[arg(long, global = true, value_name = "X")]
    tol_hull: Option<f64>,
    #[arg(long, global = true, value_name = "X")]
    tol_rank: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the diagram vector of every frame vector.
    Diagram { file: PathBuf },
    /// Print the Gramian and the diagram Gramian.
    Gram { file: PathBuf },
    /// Decide whether the frame is tight.
    CheckTight { file: PathBuf },
    /// Decide scalability and print coefficients or a certificate.
    Scale {
        #[arg(required_unless_present = "batch", conflicts_with = "batch")]
        file: Option<PathBuf>,
        /// Process every `.json` file in a directory.
        #[arg(long, value_name = "DIR")]
        batch: Option<PathBuf>,
    },
    /// Build coefficients for a planar frame from pairs and triples.
    Scale2d {
        file: PathBuf,
        /// Skip the property (Q) check.
        #[arg(long)]
        no_check: bool,
    },
    /// Check that given coefficients make the frame tight.
    Verify {
        file: PathBuf,
        /// JSON file with `coefficients` and optionally `lambda`.
        #[arg(long, value_name = "FILE")]
        coeffs: PathBuf,
    },
    /// Search for a vector violating the cone condition, or export cone
    /// samples with `--subset`/`--grid`.
    Cones {
        file: PathBuf,
        /// One-based indices, comma separated.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        subset: Option<Vec<usize>>,
        /// Grid resolution for sample export.
        #[arg(long, value_name = "N")]
        grid: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Restarts of the search in dimension 3 and up.
        #[arg(long, default_value_t = 64)]
        budget: usize,
    },
    /// Print the cone of valid weights in null-space coordinates.
    Region { file: PathBuf },
    /// Emit the perturbed five-vector frame in R^3 as a frame file.
    Perturbed {
        #[arg(long)]
        v: f64,
    },
}

fn build_config(args: &GlobalArgs) -> Result<Config, CliError> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError(format!("{}: {e}", path.display())))?;
            toml::from_str(&text).map_err(|e| CliError(format!("{}: {e}", path.display())))?
        }
        None => Config::default(),
    };
    let overrides = [
        (args.tol_unit, &mut cfg.tau_unit, "--tol-unit"),
        (args.tol_sym, &mut cfg.tau_sym, "--tol-sym"),
        (args.tol_tight, &mut cfg.tau_tight, "--tol-tight"),
        (args.tol_psd, &mut cfg.tau_psd, "--tol-psd"),
        (args.tol_null, &mut cfg.tau_null, "--tol-null"),
        (args.tol_hull, &mut cfg.tau_hull, "--tol-hull"),
        (args.tol_rank, &mut cfg.tau_rank, "--tol-rank"),
    ];
    for (value, slot, flag) in overrides {
        if let Some(v) = value {
            if !(v.is_finite() && v > 0.0) {
                return Err(CliError(format!("{flag} must be a positive number, got {v}")));
            }
            *slot = v;
        }
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let cfg = build_config(&cli.global)?;
    let ctx = Context {
        cfg,
        json: cli.global.json,
        quiet: cli.global.quiet,
        renormalize: cli.global.renormalize,
    };
    let outcome = match cli.command {
        Command::Diagram { file } => commands::diagram(&ctx, &file)?,
        Command::Gram { file } => commands::gram(&ctx, &file)?,
        Command::CheckTight { file } => commands::check_tight(&ctx, &file)?,
        Command::Scale { batch: Some(dir), .. } => return commands::scale_batch(&ctx, &dir),
        Command::Scale { file, .. } => commands::scale(&ctx, &file.expect("required by clap"))?,
        Command::Scale2d { file, no_check } => commands::scale2d(&ctx, &file, !no_check)?,
        Command::Verify { file, coeffs } => commands::verify(&ctx, &file, &coeffs)?,
        Command::Cones {
            file,
            subset,
            grid,
            seed,
            budget,
        } => commands::cones(&ctx, &file, subset, grid, seed, budget)?,
        Command::Region { file } => commands::region(&ctx, &file)?,
        Command::Perturbed { v } => commands::perturbed(&ctx, v)?,
    };
    Ok(ctx.emit(outcome))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(CliError(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(3)
        }
    }
}
