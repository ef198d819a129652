use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use casimir_cyl::scan::{self, presets, ConfigErrors, ScanConfig};

/// Scalar Casimir energies of cylinders and planes in layered dielectrics.
#[derive(Parser)]
#[command(name = "casimir-cyl", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scan described by a configuration file.
    Run {
        config: PathBuf,
        /// Write results here instead of `output.path` or stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a built-in scan (fig1, fig2 or fig3).
    Preset {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the preset configuration instead of running it.
        #[arg(long)]
        show: bool,
    },
    /// Check a configuration and estimate its size without computing.
    Validate { config: PathBuf },
}

const EXIT_NUMERICAL: u8 = 1;
const EXIT_CONFIG: u8 = 2;

fn report_config_errors(source: &str, errors: &ConfigErrors) -> ExitCode {
    eprintln!("{source}: invalid configuration");
    for e in &errors.0 {
        eprintln!("  {e}");
    }
    ExitCode::from(EXIT_CONFIG)
}

fn load(path: &Path) -> Result<(String, ScanConfig), ExitCode> {
    let source = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("{source}: {e}");
        ExitCode::from(EXIT_CONFIG)
    })?;
    scan::parse_config(&text).map(|c| (source.clone(), c)).map_err(|e| report_config_errors(&source, &e))
}

fn execute(source: &str, config: &ScanConfig, out: Option<PathBuf>) -> ExitCode {
    let report = scan::run_scan(config);
    let text = report.render(config.output.format, config.output.precision);
    let target = out.or_else(|| config.output.path.as_ref().map(PathBuf::from));
    match &target {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("{}: {e}", path.display());
                return ExitCode::from(EXIT_NUMERICAL);
            }
        }
        None => print!("{text}"),
    }
    let rows: usize = report.curves.iter().map(|c| c.rows.len()).sum();
    let unconverged: usize = report.curves.iter().map(|c| c.rows.iter().filter(|r| !r.converged).count()).sum();
    eprintln!("{source}: {} curves, {rows} points, {unconverged} not converged", report.curves.len());
    for f in &report.failures {
        eprintln!("  failed: {f}");
    }
    if report.all_converged() { ExitCode::SUCCESS } else { ExitCode::from(EXIT_NUMERICAL) }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, out } => match load(&config) {
            Ok((source, cfg)) => execute(&source, &cfg, out),
            Err(code) => code,
        },
        Command::Preset { name, out, show } => {
            let Some(text) = presets::preset(&name) else {
                eprintln!("unknown preset `{name}` (expected one of {})", presets::NAMES.join(", "));
                return ExitCode::from(EXIT_CONFIG);
            };
            if show {
                print!("{text}");
                return ExitCode::SUCCESS;
            }
            match scan::parse_config(&text) {
                Ok(cfg) => execute(&name, &cfg, out),
                Err(e) => report_config_errors(&name, &e),
            }
        }
        Command::Validate { config } => match load(&config) {
            Ok((source, cfg)) => match scan::estimate(&cfg) {
                Ok(est) => {
                    println!(
                        "{source}: ok; {} curves, {} points, about {} nodes per energy over the first two levels, starting matrix dimension up to {}",
                        est.curves, est.points, est.nodes_first_levels, est.max_start_dim
                    );
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("{source}: {e}");
                    ExitCode::from(EXIT_CONFIG)
                }
            },
            Err(code) => code,
        },
    }
}
