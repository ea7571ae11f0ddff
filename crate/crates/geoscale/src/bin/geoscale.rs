use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use geoscale::cli::{exit, exit_code_for, run, Command, Overrides, Problem};

#[derive(Parser)]
#[command(name = "geoscale", version, about = "Geodesic scaling, capacity, null-cone and moment-polytope solvers")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// First-order scaling to ‖μ‖ ≤ ε.
    Scale(Flags),
    /// Second-order norm minimization (capacity).
    Capacity(Flags),
    /// Null-cone membership via scaling at ε = γ/2.
    Nullcone(Flags),
    /// Scaling towards a target spectrum.
    Pscale(Flags),
    /// Weight norm, weight margin and its bounds.
    Margin(Flags),
    /// Normalized moment-map gradient flow.
    Flow(Flags),
}

#[derive(Args)]
struct Flags {
    #[arg(long)]
    input: PathBuf,
    /// Defaults to stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
    /// Upper bound C on log(‖v‖/cap(v)).
    #[arg(long)]
    cap_log_bound: Option<f64>,
    /// Weight margin γ.
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    randomize: bool,
    #[arg(long)]
    s_override: Option<u64>,
    #[arg(long)]
    trace_every: Option<usize>,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
}

impl Flags {
    fn overrides(&self) -> Overrides {
        Overrides {
            epsilon: self.epsilon,
            max_iterations: self.max_iters,
            cap_log_bound: self.cap_log_bound,
            gamma: self.gamma,
            seed: self.seed,
            randomize: self.randomize,
            s_override: self.s_override,
            trace_every: self.trace_every,
            t_end: self.t_end,
            dt: self.dt,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, flags) = match &cli.command {
        Sub::Scale(f) => (Command::Scale, f),
        Sub::Capacity(f) => (Command::Capacity, f),
        Sub::Nullcone(f) => (Command::Nullcone, f),
        Sub::Pscale(f) => (Command::Pscale, f),
        Sub::Margin(f) => (Command::Margin, f),
        Sub::Flow(f) => (Command::Flow, f),
    };
    let text = match std::fs::read_to_string(&flags.input) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", flags.input.display());
            return ExitCode::from(exit::INPUT_ERROR as u8);
        }
    };
    let report = Problem::from_json(&text).and_then(|p| run(command, &p, &flags.overrides()));
    let report = match report {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code_for(&e) as u8);
        }
    };
    let json = report.to_json();
    match &flags.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, json + "\n") {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(exit::INPUT_ERROR as u8);
            }
        }
        None => println!("{json}"),
    }
    ExitCode::from(report.exit_code as u8)
}
