//! Command-line front end of `symdisperse`.
//!
//! [`run_command`] parses an argument vector, runs one subcommand and returns
//! the exit code together with everything destined for stdout and stderr,
//! so the binary is a thin shell and the behaviour is testable in-process.
//!
//! Exit codes: `0` success, `2` an estimate check failed, `1` usage or
//! numeric error. Identical arguments produce byte-identical output.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use symdisperse::error::{Error, Result};
use symdisperse::root_system::SpaceName;
use symdisperse::spherical::QuadratureSpec;

pub mod commands;
pub mod parse;

use commands::{ArtifactKind, Outcome, ScanConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_CHECK_FAILED: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "symdisperse", version, about = "Dispersive and Strichartz estimates on symmetric spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Root data of a space
    Space {
        #[command(subcommand)]
        action: SpaceAction,
    },
    /// Closed-form heat/Schrödinger kernels
    Kernel {
        #[command(subcommand)]
        action: KernelAction,
    },
    /// Dispersive estimate scans
    Dispersive {
        #[command(subcommand)]
        action: DispersiveAction,
    },
    /// Strichartz norm probes
    Strichartz {
        #[command(subcommand)]
        action: StrichartzAction,
    },
    /// Membership of (1/p, 1/q) in the admissible triangle
    Admissible(AdmissibleArgs),
    /// The open interval of NLS powers
    GammaWindow {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand, Debug)]
enum SpaceAction {
    Info {
        #[arg(long)]
        space: String,
    },
}

#[derive(Subcommand, Debug)]
enum KernelAction {
    Eval(KernelArgs),
}

#[derive(Args, Debug)]
struct KernelArgs {
    #[arg(long)]
    space: String,
    #[arg(long, allow_negative_numbers = true)]
    t: f64,
    #[arg(long, default_value_t = 0.0)]
    eps: f64,
    /// Chart coordinates of H, comma separated
    #[arg(long = "H", value_delimiter = ',', allow_negative_numbers = true, required = true)]
    h: Vec<f64>,
    /// Also evaluate by quadrature of the inverse spherical transform
    #[arg(long)]
    oracle: bool,
    #[command(flatten)]
    constants: ConstantArgs,
    #[command(flatten)]
    quad: QuadArgs,
}

#[derive(Subcommand, Debug)]
enum DispersiveAction {
    Scan(ScanArgs),
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[arg(long)]
    space: String,
    /// Comma separated exponents, each > 2
    #[arg(long, value_delimiter = ',', required = true)]
    q: Vec<f64>,
    /// start:stop:scheme (dyadic, log<count>, lin<count>) or a list
    #[arg(long)]
    t: String,
    #[command(flatten)]
    constants: ConstantArgs,
    #[command(flatten)]
    quad: QuadArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Subcommand, Debug)]
enum StrichartzAction {
    Check(CheckArgs),
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(long)]
    space: String,
    /// p,q; `inf` is accepted
    #[arg(long)]
    pair: String,
    /// Gaussian widths: start:stop:scheme or a list
    #[arg(long)]
    widths: String,
    #[command(flatten)]
    quad: QuadArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Debug)]
struct AdmissibleArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: String,
    #[arg(long)]
    q: String,
    /// A second pair p~,q~: also decide whether the inhomogeneous estimate
    /// with both pairs is asserted
    #[arg(long = "with")]
    with: Option<String>,
}

#[derive(Args, Debug)]
struct ConstantArgs {
    /// Constant c of the bounds [default: 1]
    #[arg(long)]
    c: Option<f64>,
    /// Polynomial power a of the bounds [default: number of positive roots]
    #[arg(long)]
    a: Option<f64>,
}

#[derive(Args, Debug)]
struct QuadArgs {
    /// Truncation radius [default: chosen per integrand]
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long, default_value_t = 1e-8)]
    rel_tol: f64,
}

impl QuadArgs {
    fn spec(&self) -> QuadratureSpec {
        QuadratureSpec {
            radius: self.radius,
            rel_tol: self.rel_tol,
            ..Default::default()
        }
    }
}

#[derive(Args, Debug)]
struct OutArgs {
    /// Write the CSV table here instead of stdout
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    json: Option<PathBuf>,
}

/// Exit code and captured streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: Vec<u8>,
}

impl Output {
    fn error(message: impl std::fmt::Display) -> Self {
        Output {
            code: EXIT_ERROR,
            stdout: Vec::new(),
            stderr: format!("error: {message}\n").into_bytes(),
        }
    }
}

/// Runs one command line; `argv[0]` is the program name.
pub fn run_command<I, T>(argv: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string().into_bytes();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Output {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: Vec::new(),
                },
                _ => Output {
                    code: EXIT_ERROR,
                    stdout: Vec::new(),
                    stderr: text,
                },
            };
        }
    };
    let (outcome, out) = match dispatch(cli.command) {
        Ok(v) => v,
        Err(e) => return Output::error(e),
    };
    let mut stdout = Vec::new();
    for artifact in outcome.artifacts {
        let target = match artifact.kind {
            ArtifactKind::Csv => out.as_ref().and_then(|o| o.csv.as_ref()),
            ArtifactKind::Json => out.as_ref().and_then(|o| o.json.as_ref()),
            ArtifactKind::Text => None,
        };
        match target {
            Some(path) => {
                if let Err(e) = std::fs::write(path, artifact.text.as_bytes()) {
                    return Output::error(format!("cannot write {}: {e}", path.display()));
                }
            }
            None => stdout.extend_from_slice(artifact.text.as_bytes()),
        }
    }
    let (code, stderr) = if outcome.pass {
        (EXIT_OK, Vec::new())
    } else {
        (EXIT_CHECK_FAILED, b"estimate check failed\n".to_vec())
    };
    Output { code, stdout, stderr }
}

fn space(name: &str) -> Result<SpaceName> {
    name.parse()
}

fn dispatch(command: Command) -> Result<(Outcome, Option<OutArgs>)> {
    match command {
        Command::Space {
            action: SpaceAction::Info { space: s },
        } => Ok((commands::space_info(&space(&s)?)?, None)),
        Command::Kernel {
            action: KernelAction::Eval(a),
        } => Ok((
            commands::kernel_eval(
                &space(&a.space)?,
                a.eps,
                a.t,
                &a.h,
                a.oracle,
                (a.constants.c, a.constants.a),
                &a.quad.spec(),
            )?,
            None,
        )),
        Command::Dispersive {
            action: DispersiveAction::Scan(a),
        } => {
            let cfg = ScanConfig {
                space: space(&a.space)?,
                t_grid: parse::grid(&a.t)?,
                q: a.q,
                spec: a.quad.spec(),
                constants: (a.constants.c, a.constants.a),
            };
            Ok((commands::dispersive_scan(&cfg)?, Some(a.out)))
        }
        Command::Strichartz {
            action: StrichartzAction::Check(a),
        } => {
            let widths = parse::grid(&a.widths)?;
            if widths[0] <= 0.0 {
                return Err(Error::InvalidParameter("widths must be positive".into()));
            }
            Ok((
                commands::strichartz_check(&space(&a.space)?, parse::pair(&a.pair)?, &widths, &a.quad.spec())?,
                Some(a.out),
            ))
        }
        Command::Admissible(a) => {
            let with = a.with.as_deref().map(parse::pair).transpose()?;
            Ok((
                commands::admissible(a.n, parse::exponent(&a.p)?, parse::exponent(&a.q)?, with)?,
                None,
            ))
        }
        Command::GammaWindow { n } => Ok((commands::gamma_window(n)?, None)),
    }
}
