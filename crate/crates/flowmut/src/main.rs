use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use flowmut::commands::{cmd_alive, cmd_exec, cmd_run, Overrides, Workspace};

#[derive(Parser)]
#[command(name = "flowmut", version, about = "Mutation testing for .dflow dataflow programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Configuration file.
    #[arg(long, default_value = "flowmut.json")]
    config: PathBuf,
    /// Output directory for report.json and report.html.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Restrict the command to one configured program.
    #[arg(long)]
    program: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate, run and report every mutant.
    Run {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        workers: Option<usize>,
        /// Execute these mutants even if a reduction rule removed them.
        #[arg(long, value_delimiter = ',')]
        force_mutants: Option<Vec<u32>>,
    },
    /// Rerun only the mutants that survived the previous run.
    Alive {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        force_mutants: Option<Vec<u32>>,
    },
    /// Run the original program, or one mutant, and print its outputs.
    Exec {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        mutant: Option<u32>,
        #[arg(long)]
        test: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, workers, force) = match &cli.command {
        Command::Run { common, workers, force_mutants } | Command::Alive { common, workers, force_mutants } => {
            (common, *workers, force_mutants.clone())
        }
        Command::Exec { common, .. } => (common, None, None),
    };
    let overrides = Overrides {
        out_dir: common.out.clone(),
        workers,
        force_mutants: force,
        program: common.program.clone(),
    };
    let mut stdout = std::io::stdout().lock();
    let mut stderr = std::io::stderr();
    let result = Workspace::load(&common.config, &overrides).and_then(|ws| match &cli.command {
        Command::Run { .. } => cmd_run(&ws, &mut stdout),
        Command::Alive { .. } => cmd_alive(&ws, &mut stdout),
        Command::Exec { mutant, test, .. } => cmd_exec(&ws, *mutant, test.as_deref(), &mut stdout, &mut stderr),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("flowmut: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
