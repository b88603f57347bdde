use std::path::PathBuf;
use std::process::ExitCode;

use chebyshev_core::io::{self, Instance, RunOptions, EXIT_ERROR};
use clap::{Parser, Subcommand};

/// Chebyshev centers, ball-intersection certificates, ball relocation and
/// best n-nets for finite point sets.
#[derive(Debug, Parser)]
#[command(name = "chebyshev", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve an instance file and write result.toml, table.csv and figure.svg.
    Run {
        instance: PathBuf,
        /// Output directory.
        #[arg(long, default_value = "results")]
        out: PathBuf,
        /// Override the solver tolerances.
        #[arg(long, allow_negative_numbers = true)]
        tol: Option<f64>,
        /// Also draw an SVG figure (planar instances and sweeps).
        #[arg(long)]
        svg: bool,
    },
    /// Parse and validate an instance file without solving it.
    Validate { instance: PathBuf },
    /// Run one of the bundled instances.
    Demo {
        /// Instance name; `list` prints the available names.
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: bool,
    },
}

fn solve(instance: Instance, out: PathBuf, svg: bool) -> u8 {
    match io::run(&instance, &out, RunOptions { svg }) {
        Ok(output) => {
            print!("{}", output.record);
            if let Some(e) = output.error {
                eprintln!("error: {e}");
            }
            output.exit_code as u8
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR as u8
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_ERROR as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let code = match cli.command {
        Command::Run {
            instance,
            out,
            tol,
            svg,
        } => {
            let parsed = io::parse_instance(&instance).and_then(|inst| match tol {
                Some(t) => inst.with_tolerance(t),
                None => Ok(inst),
            });
            match parsed {
                Ok(inst) => solve(inst, out, svg),
                Err(e) => {
                    eprintln!("error: {}: {e}", instance.display());
                    EXIT_ERROR as u8
                }
            }
        }
        Command::Validate { instance } => match io::parse_instance(&instance) {
            Ok(inst) => {
                println!(
                    "{}: valid {} instance",
                    instance.display(),
                    inst.task_name()
                );
                0
            }
            Err(e) => {
                eprintln!("error: {}: {e}", instance.display());
                EXIT_ERROR as u8
            }
        },
        Command::Demo { name, out, svg } => {
            if name == "list" {
                for (n, _) in io::GOLDEN {
                    println!("{n}");
                }
                0
            } else {
                match io::golden(&name).map(io::parse_str) {
                    Some(Ok(inst)) => {
                        let out = out.unwrap_or_else(|| PathBuf::from(format!("demo-{name}")));
                        solve(inst, out, svg)
                    }
                    Some(Err(e)) => {
                        eprintln!("error: bundled instance {name}: {e}");
                        EXIT_ERROR as u8
                    }
                    None => {
                        eprintln!("error: unknown demo `{name}` (try `demo list`)");
                        EXIT_ERROR as u8
                    }
                }
            }
        }
    };
    ExitCode::from(code)
}
