use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use helivort::app::{self, Command, Options};

/// Helical vortex filaments: point-vortex dynamics, leapfrogging analysis and
/// vortex-blob simulations.
#[derive(Parser)]
#[command(name = "helivort", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Integrate the limiting point-vortex system.
    Ode(Common),
    /// Level sets, periods and the separation certificate of two vortices.
    Leapfrog(Common),
    /// Run a vortex-blob simulation with diagnostics.
    Blob(Common),
    /// Repeat the blob run over a list of core sizes.
    Sweep(Common),
}

#[derive(Args)]
struct Common {
    /// TOML run configuration.
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Output directory, created if missing.
    #[arg(long, value_name = "DIR", default_value = "out")]
    out: PathBuf,
    /// Write particle positions at every diagnostics record.
    #[arg(long)]
    dump_particles: bool,
    /// Run the invariant suite on the configured instance first.
    #[arg(long)]
    self_check: bool,
    /// Worker threads (default: all cores).
    #[arg(long, value_name = "N")]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, c) = match cli.command {
        Cmd::Ode(c) => (Command::Ode, c),
        Cmd::Leapfrog(c) => (Command::Leapfrog, c),
        Cmd::Blob(c) => (Command::Blob, c),
        Cmd::Sweep(c) => (Command::Sweep, c),
    };
    let opts = Options {
        config: c.config,
        out: c.out,
        dump_particles: c.dump_particles,
        self_check: c.self_check,
        threads: c.threads,
    };
    let code = app::run(command, &opts);
    ExitCode::from(code as u8)
}
