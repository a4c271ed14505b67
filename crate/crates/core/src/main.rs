use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use equipoly::commands::{run, Command, RunConfig};
use equipoly::io::parse_bond_angle;
use equipoly::{Error, Result};

/// Equilateral, equiangular polygons: closed forms, brute-force
/// verification and configuration-space topology.
#[derive(Parser)]
#[command(name = "equipoly", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Default)]
struct Flags {
    /// Number of vertices (3-6; default 6)
    #[arg(long)]
    n: Option<usize>,
    /// Bond angle: `pi/2`, `2*pi/3`, `0.7`, ...
    #[arg(long)]
    theta: Option<String>,
    /// Grid points per torus axis for the oracle
    #[arg(long)]
    res: Option<usize>,
    /// Neighbourhood radius for components (default 1.5 grid spacings)
    #[arg(long)]
    eps: Option<f64>,
    /// Frames in a deformation loop
    #[arg(long)]
    steps: Option<usize>,
    /// Which deformation loop (0, or 0 and 1 below pi/3)
    #[arg(long = "loop")]
    loop_id: Option<usize>,
    /// json, csv or obj
    #[arg(long)]
    format: Option<String>,
    /// Output file (a directory for obj)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Topological type and named configurations
    Classify {
        #[arg(value_name = "N")]
        n_pos: Option<usize>,
        #[arg(value_name = "THETA")]
        theta_pos: Option<String>,
        #[command(flatten)]
        flags: Flags,
    },
    /// Closed-form configurations as records
    Build {
        #[arg(value_name = "N")]
        n_pos: Option<usize>,
        #[arg(value_name = "THETA")]
        theta_pos: Option<String>,
        #[command(flatten)]
        flags: Flags,
    },
    /// Brute-force solutions as records
    Sample {
        #[arg(value_name = "N")]
        n_pos: Option<usize>,
        #[arg(value_name = "THETA")]
        theta_pos: Option<String>,
        #[arg(value_name = "RES")]
        res_pos: Option<usize>,
        #[command(flatten)]
        flags: Flags,
    },
    /// Compare brute-force solutions with the closed forms
    Verify {
        #[arg(value_name = "N")]
        n_pos: Option<usize>,
        #[arg(value_name = "THETA")]
        theta_pos: Option<String>,
        #[arg(value_name = "RES")]
        res_pos: Option<usize>,
        #[command(flatten)]
        flags: Flags,
    },
    /// Frames of a hexagon deformation loop
    Deform {
        #[arg(value_name = "THETA")]
        theta_pos: Option<String>,
        #[arg(value_name = "LOOP")]
        loop_pos: Option<usize>,
        #[arg(value_name = "STEPS")]
        steps_pos: Option<usize>,
        #[arg(value_name = "FORMAT")]
        format_pos: Option<String>,
        #[arg(value_name = "OUT")]
        out_pos: Option<PathBuf>,
        #[command(flatten)]
        flags: Flags,
    },
    /// Convert a records file, or write the closed forms, in another format
    Export {
        #[arg(value_name = "INPUT")]
        input: Option<PathBuf>,
        #[command(flatten)]
        flags: Flags,
    },
}

fn pick<T>(positional: Option<T>, flag: Option<T>, name: &str) -> Result<Option<T>> {
    match (positional, flag) {
        (Some(_), Some(_)) => Err(Error::InvalidArgument(format!("{name} given twice"))),
        (p, f) => Ok(p.or(f)),
    }
}

struct Positional {
    n: Option<usize>,
    theta: Option<String>,
    res: Option<usize>,
    loop_id: Option<usize>,
    steps: Option<usize>,
    format: Option<String>,
    out: Option<PathBuf>,
    input: Option<PathBuf>,
}

impl Positional {
    fn none() -> Self {
        Self {
            n: None,
            theta: None,
            res: None,
            loop_id: None,
            steps: None,
            format: None,
            out: None,
            input: None,
        }
    }
}

fn config(cmd: Cmd) -> Result<RunConfig> {
    let (command, pos, flags) = match cmd {
        Cmd::Classify {
            n_pos,
            theta_pos,
            flags,
        } => (
            Command::Classify,
            Positional {
                n: n_pos,
                theta: theta_pos,
                ..Positional::none()
            },
            flags,
        ),
        Cmd::Build {
            n_pos,
            theta_pos,
            flags,
        } => (
            Command::Build,
            Positional {
                n: n_pos,
                theta: theta_pos,
                ..Positional::none()
            },
            flags,
        ),
        Cmd::Sample {
            n_pos,
            theta_pos,
            res_pos,
            flags,
        } => (
            Command::Sample,
            Positional {
                n: n_pos,
                theta: theta_pos,
                res: res_pos,
                ..Positional::none()
            },
            flags,
        ),
        Cmd::Verify {
            n_pos,
            theta_pos,
            res_pos,
            flags,
        } => (
            Command::Verify,
            Positional {
                n: n_pos,
                theta: theta_pos,
                res: res_pos,
                ..Positional::none()
            },
            flags,
        ),
        Cmd::Deform {
            theta_pos,
            loop_pos,
            steps_pos,
            format_pos,
            out_pos,
            flags,
        } => (
            Command::Deform,
            Positional {
                theta: theta_pos,
                loop_id: loop_pos,
                steps: steps_pos,
                format: format_pos,
                out: out_pos,
                ..Positional::none()
            },
            flags,
        ),
        Cmd::Export { input, flags } => (
            Command::Export,
            Positional {
                input,
                ..Positional::none()
            },
            flags,
        ),
    };

    let mut cfg = RunConfig::new(command);
    if let Some(n) = pick(pos.n, flags.n, "n")? {
        cfg.n = n;
    }
    cfg.theta = pick(pos.theta, flags.theta, "theta")?
        .map(|t| parse_bond_angle(&t))
        .transpose()?;
    if let Some(res) = pick(pos.res, flags.res, "res")? {
        cfg.resolution = res;
    }
    cfg.eps = flags.eps;
    if let Some(steps) = pick(pos.steps, flags.steps, "steps")? {
        cfg.steps = steps;
    }
    if let Some(id) = pick(pos.loop_id, flags.loop_id, "loop")? {
        cfg.loop_id = id;
    }
    cfg.format = pick(pos.format, flags.format, "format")?
        .map(|f| f.parse())
        .transpose()?;
    cfg.out = pick(pos.out, flags.out, "out")?;
    cfg.input = pos.input;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = config(cli.command).and_then(|cfg| run(&cfg));
    match outcome {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(out.text.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(2);
            }
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("equipoly: {e}");
            ExitCode::from(2)
        }
    }
}
