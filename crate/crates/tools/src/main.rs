//! `subshift-tools`: run language tables, extender verdicts, pressure
//! estimates, equilibrium exports, audits, tilings, and the binomial
//! gap audit from a JSON spec file.
//!
//! Exit codes: 0 all checks pass, 1 some audited check failed,
//! 2 spec/usage errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use subshift_tools::report::Format;
use subshift_tools::runner::{self, Overrides, ToolError};
use subshift_tools::specfile::load_spec;

#[derive(Parser)]
#[command(name = "subshift-tools", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the language on the spec's window
    Lang(Common),
    /// Extender-set verdicts for every case
    Extender(Common),
    /// Pressure estimates by every applicable method
    Pressure(Common),
    /// Export the equilibrium measure
    Equilibrium(Common),
    /// Run the audit suite over the spec's cases
    Audit(Common),
    /// Dump box tilings and almost partitions
    Tile(Common),
    /// Audit the binomial gap function
    Stirling(Common),
}

#[derive(Args)]
struct Common {
    /// Spec file path (positional)
    spec_path: Option<PathBuf>,
    /// Spec file path (flag form)
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Directory for report files; stdout when absent
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Override the spec's extender search radius
    #[arg(long)]
    max_radius: Option<u32>,
    /// Override the spec's sampling seed
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated case-id filter
    #[arg(long)]
    cases: Option<String>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Lang(_) => "lang",
            Command::Extender(_) => "extender",
            Command::Pressure(_) => "pressure",
            Command::Equilibrium(_) => "equilibrium",
            Command::Audit(_) => "audit",
            Command::Tile(_) => "tile",
            Command::Stirling(_) => "stirling",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Lang(c)
            | Command::Extender(c)
            | Command::Pressure(c)
            | Command::Equilibrium(c)
            | Command::Audit(c)
            | Command::Tile(c)
            | Command::Stirling(c) => c,
        }
    }
}

fn run(cli: &Cli) -> Result<bool, ToolError> {
    let common = cli.command.common();
    let spec_path = common
        .spec
        .as_ref()
        .or(common.spec_path.as_ref())
        .ok_or_else(|| {
            ToolError::Core("a spec file is required (positional or --spec)".to_string())
        })?;
    let spec = load_spec(spec_path)?;
    let overrides = Overrides {
        max_radius: common.max_radius,
        seed: common.seed,
        cases: common
            .cases
            .as_deref()
            .map(|s| {
                s.split(',')
                    .map(str::trim)
                    .filter(|t| !t.is_empty())
                    .map(str::to_string)
                    .collect()
            })
            .unwrap_or_default(),
    };
    let (table, any_fail) = match &cli.command {
        Command::Lang(_) => runner::run_lang(&spec, &overrides)?,
        Command::Extender(_) => runner::run_extender(&spec, &overrides)?,
        Command::Pressure(_) => runner::run_pressure(&spec, &overrides)?,
        Command::Equilibrium(_) => runner::run_equilibrium(&spec, &overrides)?,
        Command::Audit(_) => runner::run_audit(&spec, &overrides)?,
        Command::Tile(_) => runner::run_tile(&spec, &overrides)?,
        Command::Stirling(_) => runner::run_stirling(&spec, &overrides)?,
    };
    let rendered = table.render(common.format);
    match &common.out_dir {
        Some(dir) => {
            std::fs::create_dir_all(dir)
                .map_err(|e| ToolError::Core(format!("cannot create {}: {e}", dir.display())))?;
            let path = dir.join(format!(
                "{}.{}",
                cli.command.name(),
                common.format.extension()
            ));
            std::fs::write(&path, rendered)
                .map_err(|e| ToolError::Core(format!("cannot write {}: {e}", path.display())))?;
        }
        None => print!("{rendered}"),
    }
    Ok(any_fail)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
