use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use covariant_lab_cli::commands::{self, Pair};
use covariant_lab_cli::config::parse_tolerance;
use covariant_lab_cli::suites::Suite;
use covariant_lab_cli::{CliError, Format, ReportEnvelope, RunConfig};

#[derive(Parser)]
#[command(name = "covariant-lab", version, about = "Covariant transforms and uncertainty/holomorphy checks")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    #[arg(long, global = true, default_value_t = 1.0, allow_negative_numbers = true)]
    hbar: f64,
    #[arg(long, global = true, default_value_t = 2.0 * std::f64::consts::PI)]
    c: f64,
    /// Plane grid points per axis.
    #[arg(long, global = true, default_value_t = 257)]
    grid_n: usize,
    #[arg(long, global = true, default_value_t = 4.0)]
    half_width: f64,
    #[arg(long, global = true, default_value_t = 0.95)]
    rho_max: f64,
    /// Override a tolerance, e.g. `--tolerance gap=1e-8`.
    #[arg(long = "tolerance", global = true, value_name = "KEY=VAL", value_parser = parse_tolerance)]
    tolerances: Vec<(String, f64)>,
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Transform a `q,re,im` signal and check the annihilation equation.
    Fsb { input: PathBuf },
    /// Uncertainty report for a signal and an observable pair.
    Uncertainty {
        input: PathBuf,
        #[arg(long, value_enum)]
        pair: Pair,
    },
    /// Hardy-space transform of a `theta,re,im` circle signal.
    Hardy { input: PathBuf },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
}

fn config_from(g: GlobalArgs) -> RunConfig {
    RunConfig {
        hbar: g.hbar,
        c: g.c,
        grid_n: g.grid_n,
        domain_half_width: g.half_width,
        rho_max: g.rho_max,
        tolerance_overrides: g.tolerances.into_iter().collect(),
        output_path: g.output.map(|p| p.display().to_string()),
        format: g.format,
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("COVARIANT_LAB_THREADS") else { return Ok(()) };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Usage(format!("COVARIANT_LAB_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot configure thread pool: {e}")))
}

fn run(cli: Cli) -> Result<ReportEnvelope, CliError> {
    configure_threads()?;
    let config = config_from(cli.global);
    config.validate()?;
    match cli.command {
        Command::Fsb { input } => commands::cmd_fsb(&input, &config),
        Command::Uncertainty { input, pair } => commands::cmd_uncertainty(&input, pair, &config),
        Command::Hardy { input } => commands::cmd_hardy(&input, &config),
        Command::Verify { suite } => {
            let env = commands::cmd_verify(suite, &config)?;
            eprint!("{}", commands::render_checks(&env));
            Ok(env)
        }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(env) => {
            println!("{}", env.to_json());
            ExitCode::from(if env.pass { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
