use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use rod_cli::{execute_converge, execute_run, CliError, RunConfig};

#[derive(Parser)]
#[command(name = "rodsim", about = "Planar rolling-rod simulator", disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a simulation described by a config file.
    Run { config: PathBuf },
    /// Grid-refinement study against the analytic torsion wave.
    Converge {
        config: PathBuf,
        /// Node counts for the refinement levels, e.g. 17,33,65.
        #[arg(long, value_delimiter = ',', required = true)]
        levels: Vec<usize>,
    },
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run { config } => {
            let cfg = RunConfig::load(&config)?;
            let summary = execute_run(&cfg)?;
            println!(
                "completed {} steps (dt = {:.6e}, t = {:.6}); diagnostics -> {}, snapshots -> {}",
                summary.steps,
                summary.dt,
                summary.final_record.t,
                cfg.diag_path.display(),
                cfg.snap_path.display(),
            );
            Ok(())
        }
        Command::Converge { config, levels } => {
            let cfg = RunConfig::load(&config)?;
            let rows = execute_converge(&cfg, &levels)?;
            println!("n_nodes,h,error,order");
            for row in &rows {
                let order = row.order.map(|o| format!("{o:.3}")).unwrap_or_default();
                println!("{},{:.6e},{:.6e},{order}", row.n_nodes, row.h, row.error);
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not usage errors.
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
