use clap::{Args, Parser, Subcommand, ValueEnum};
use satqkd_cli::run::{self, SweepVariable};
use satqkd_cli::{output, CliError, Scenario};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "satqkd", version, about = "Satellite QKD downlink simulation and scheduling")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Scenario configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Overrides the seed in the configuration.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Access windows per station and daily visible time.
    Access(Common),
    /// Per-sample loss decomposition and transmittance.
    Linkbudget(Common),
    /// Secure-key matrix on the scheduling grid.
    Keymatrix {
        #[command(flatten)]
        common: Common,
        /// Build from a previously written link-budget CSV instead of geometry.
        #[arg(long)]
        linkbudget: Option<PathBuf>,
    },
    /// Downlink schedules for every configured strategy.
    Schedule(Common),
    /// Loss and visibility trends over orbit altitude and/or divergence.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        variable: Variable,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Variable {
    Altitude,
    Divergence,
    Grid,
}

type Job = Box<dyn Fn(&Scenario) -> Result<output::RunOutput, CliError>>;

fn execute(cli: Cli) -> Result<(), CliError> {
    let (common, job): (&Common, Job) = match &cli.command {
        Command::Access(c) => (c, Box::new(run::run_access)),
        Command::Linkbudget(c) => (c, Box::new(run::run_linkbudget)),
        Command::Keymatrix { common, linkbudget } => {
            let text = match linkbudget {
                Some(p) => Some(std::fs::read_to_string(p).map_err(|e| CliError::io(p, e))?),
                None => None,
            };
            (common, Box::new(move |sc: &Scenario| run::run_keymatrix(sc, text.as_deref())))
        }
        Command::Schedule(c) => (c, Box::new(run::run_schedule)),
        Command::Sweep { common, variable } => {
            let v = match variable {
                Variable::Altitude => SweepVariable::Altitude,
                Variable::Divergence => SweepVariable::Divergence,
                Variable::Grid => SweepVariable::Grid,
            };
            (common, Box::new(move |sc: &Scenario| run::run_sweep(sc, v)))
        }
    };
    let sc = Scenario::load(&common.config, common.seed)?;
    for w in &sc.warnings {
        eprintln!("warning: {w}");
    }
    let out = job(&sc)?;
    output::write_run(&common.out, &out, sc.seed, &sc.input_hashes)
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
