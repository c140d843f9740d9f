//! Command line front end. Subcommands map onto the library drivers:
//! `kernel` samples the weight kernel, `approximate` measures one cell,
//! `sweep` runs the configured grid, `verify` runs the acceptance checks.
//!
//! Exit codes: 0 on success, 1 when verification fails, 2 for anything that
//! prevents a run (bad flags, unreadable or invalid config, I/O).

use clap::{Parser, Subcommand, ValueEnum};
use poussin::psi::kernel_full;
use poussin::{
    sweep, verify_suite, write_csv, write_json, Error, RunConfig, UniformGrid, VerifyOptions,
    DEFAULT_SEED,
};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "poussin", version, about = "Averaged Fourier sums, their interpolation analogs, and explicit deviation bounds")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// JSON run configuration; defaults apply when omitted
    #[arg(long, global = true, value_name = "path")]
    config: Option<PathBuf>,
    /// write the table here instead of stdout
    #[arg(long, global = true, value_name = "path")]
    out: Option<PathBuf>,
    /// measurement grid size override
    #[arg(long, global = true, value_name = "M")]
    grid_size: Option<usize>,
    /// base seed for random profiles
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sample the configured weight kernel on a uniform grid
    Kernel,
    /// Measure the first cell of the configured grid
    Approximate,
    /// Measure every cell of the configured grid
    Sweep,
    /// Run the named verification checks (all by default)
    Verify {
        /// run only this check; repeatable
        #[arg(long = "check", value_name = "name")]
        checks: Vec<String>,
        /// offset added to the averaging multipliers; breaks the identity
        /// check by construction, kept for wiring tests
        #[arg(long, hide = true, default_value_t = 0.0)]
        lambda_perturb: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig, Error> {
    match &cli.config {
        Some(path) => RunConfig::from_path(path),
        None => Ok(RunConfig::default()),
    }
}

fn emit(out: &Option<PathBuf>, body: impl FnOnce(&mut dyn Write) -> Result<(), Error>) -> Result<(), Error> {
    match out {
        Some(path) => {
            let mut f = std::fs::File::create(path)?;
            body(&mut f)
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            body(&mut lock)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    let cfg = load_config(cli)?;
    let base_seed = cli.seed.or(cfg.phi.seed).unwrap_or(DEFAULT_SEED);
    match &cli.cmd {
        Cmd::Kernel => {
            let family = cfg.family()?;
            let k_max = match cfg.psi.kmax {
                Some(k) => k,
                None => poussin::psi::default_k_max(&family, 1)?,
            };
            let w = poussin::psi::make_psi(family, k_max)?.with_beta(&cfg.beta()?)?;
            let g = match cli.grid_size {
                Some(m) => UniformGrid::new(m)?,
                None => UniformGrid::for_order(w.k_max()),
            };
            let sf = kernel_full(&w, &g)?;
            emit(&cli.out, |out| match cli.format {
                Format::Csv => {
                    writeln!(out, "t,value")?;
                    for (t, v) in sf.grid.points().zip(&sf.values) {
                        writeln!(out, "{t:.16e},{v:.16e}")?;
                    }
                    Ok(())
                }
                Format::Json => {
                    let t: Vec<f64> = sf.grid.points().collect();
                    serde_json::to_writer_pretty(
                        &mut *out,
                        &serde_json::json!({ "t": t, "value": sf.values }),
                    )?;
                    writeln!(out)?;
                    Ok(())
                }
            })?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Approximate => {
            let plan = cfg.plan(cli.seed, cli.grid_size)?;
            let Some(first) = plan.first() else {
                return Err(Error::Config(
                    "approximate needs a non-empty n_range and p_range".into(),
                ));
            };
            let rows = sweep(std::slice::from_ref(first));
            emit(&cli.out, |out| match cli.format {
                Format::Csv => write_csv(out, &rows),
                Format::Json => write_json(out, &rows, base_seed),
            })?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Sweep => {
            let plan = cfg.plan(cli.seed, cli.grid_size)?;
            let rows = sweep(&plan);
            emit(&cli.out, |out| match cli.format {
                Format::Csv => write_csv(out, &rows),
                Format::Json => write_json(out, &rows, base_seed),
            })?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify {
            checks,
            lambda_perturb,
        } => {
            let opts = VerifyOptions {
                base_seed,
                tolerances: cfg.tolerances,
                only: checks.clone(),
                lambda_perturb: *lambda_perturb,
            };
            let summary = verify_suite(&opts);
            if summary.checks.is_empty() {
                return Err(Error::Config(format!(
                    "no such check; known names: {}",
                    poussin::CHECK_NAMES.join(", ")
                )));
            }
            for c in &summary.checks {
                println!(
                    "{} {:<24} measured {:>12.5e}  tolerance {:>9.3e}  {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.measured,
                    c.tolerance,
                    c.detail
                );
            }
            if let Some(path) = &cli.out {
                let mut f = std::fs::File::create(path)?;
                match cli.format {
                    Format::Csv => write_csv(&mut f, &summary.rows)?,
                    Format::Json => write_json(&mut f, &summary.rows, base_seed)?,
                }
            }
            Ok(if summary.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}
