//! `ipower`: figure data, single estimations, worst-case Hamiltonian search
//! and the property suites from the command line.

mod commands;
mod error;
mod format;
mod options;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "ipower", version, about = "Interferometric power and black-box phase estimation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sweep the iso-purity probes over the flip-angle grid and write the
    /// QFI/IP, variance and mean datasets.
    Figure3(commands::figure3::Figure3Args),
    /// Interferometric power, LQU and the grid oracle for a state file.
    Ip(commands::ip::IpArgs),
    /// One simulated estimation run.
    Estimate(commands::estimate::EstimateArgs),
    /// Adaptive localisation of the phase starting from zero.
    Adaptive(commands::estimate::AdaptiveArgs),
    /// Run the seeded property suites.
    Verify(commands::verify::VerifyArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Figure3(args) => commands::figure3::run(&args),
        Command::Ip(args) => commands::ip::run(&args),
        Command::Estimate(args) => commands::estimate::run(&args),
        Command::Adaptive(args) => commands::estimate::run_adaptive(&args),
        Command::Verify(args) => commands::verify::run(&args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
