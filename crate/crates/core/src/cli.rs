//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on a domain error (including a failed check),
//! 2 on an I/O or parse error. Diagnostics go to standard error as one line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::distance::{bottleneck_distance, interleaving_search, verify_interleaving};
use crate::ellipsoid::{ellipsoid_barcode, EllipsoidParams};
use crate::error::{Error, Result};
use crate::invariants::{
    boundary_depth, check_lipschitz, covering_number, long_bar_endpoints, spectral_invariant,
    translated_point_lower_bound, PerturbationBall,
};
use crate::io;
use crate::persistence::{decompose, validate_module};
use crate::scalar::{format_rational, parse_rational, Rational};
use crate::suite::{run_criterion, Auditor};
use crate::svg::barcode_svg;

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Parser, Debug)]
#[command(
    name = "cpv",
    version,
    about = "Exact persistence barcodes for contact Reeb spectra"
)]
struct Cli {
    /// Seed for randomized commands.
    #[arg(long, global = true, env = "CPV_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

fn rational_arg(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Args, Debug)]
struct Output {
    /// Write to this file instead of standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Barcode of the ellipsoid with the given factors, truncated at T.
    Ellipsoid {
        #[arg(short = 'a', required = true, allow_negative_numbers = true, value_parser = rational_arg)]
        factors: Vec<Rational>,
        #[arg(short = 'T', value_parser = rational_arg)]
        horizon: Rational,
        /// Also write an SVG diagram.
        #[arg(long)]
        svg: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Decompose a sampled module into its barcode.
    Reduce {
        module: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Bottleneck distance between two barcodes.
    Distance {
        left: PathBuf,
        right: PathBuf,
        /// Pair only bars of equal parity.
        #[arg(long)]
        graded: bool,
        /// Print the distance with its matching as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Interleaving distance between two modules by exhaustive search.
    Interleave {
        left: PathBuf,
        right: PathBuf,
        #[arg(long)]
        graded: bool,
        /// Write the certificate to this file.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Spectral invariant of one SH class, or a Lipschitz check with --radius.
    Spectral {
        barcode: PathBuf,
        #[arg(long, default_value_t = 0)]
        class: usize,
        /// Perturb within this bottleneck radius and report the deviations.
        #[arg(long, value_parser = rational_arg)]
        radius: Option<Rational>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Boundary depth: length of the longest finite bar.
    Depth { barcode: PathBuf },
    /// Covering of the endpoints of bars of length at least delta.
    Cover {
        barcode: PathBuf,
        #[arg(long, value_parser = rational_arg)]
        delta: Rational,
    },
    /// Lower bound on the number of translated-point lengths.
    Bound {
        barcode: PathBuf,
        #[arg(long, value_parser = rational_arg)]
        delta: Rational,
    },
    /// Validate a module, or an interleaving certificate between two modules.
    Verify {
        module: PathBuf,
        #[arg(long, requires = "certificate")]
        against: Option<PathBuf>,
        #[arg(long, requires = "against")]
        certificate: Option<PathBuf>,
    },
    /// SVG diagram of a barcode.
    Diagram {
        barcode: PathBuf,
        #[arg(long)]
        title: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Run the acceptance battery.
    Suite {
        /// Run only this criterion; criterion 10 always audits what ran before it.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=10))]
        only: Option<u8>,
    },
}

/// Outcome of a command that ran without error but may report a failed check.
enum Status {
    Ok,
    CheckFailed,
}

fn emit(out: &mut dyn Write, target: &Output, text: &str) -> Result<()> {
    match &target.output {
        Some(path) => io::write_text(path, text),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Error::Io(e.to_string())),
    }
}

fn line(out: &mut dyn Write, text: &str) -> Result<()> {
    writeln!(out, "{text}").map_err(|e| Error::Io(e.to_string()))
}

fn barcode(path: &Path) -> Result<crate::Barcode> {
    io::read_barcode(path)
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<Status> {
    match cli.command {
        Command::Ellipsoid {
            factors,
            horizon,
            svg,
            out: target,
        } => {
            let params = EllipsoidParams::new(factors, horizon)?;
            let b = ellipsoid_barcode(&params);
            if let Some(path) = svg {
                let title: Vec<String> = params.factors().iter().map(format_rational).collect();
                let title = format!(
                    "a = ({}), T = {}",
                    title.join(", "),
                    format_rational(params.horizon())
                );
                io::write_text(&path, &barcode_svg(&b, Some(&title)))?;
            }
            emit(out, &target, &io::barcode_to_json(&b))?;
        }
        Command::Reduce {
            module,
            out: target,
        } => {
            let b = decompose(&io::read_module(&module)?)?;
            emit(out, &target, &io::barcode_to_json(&b))?;
        }
        Command::Distance {
            left,
            right,
            graded,
            json,
        } => {
            let (d, matching) = bottleneck_distance(&barcode(&left)?, &barcode(&right)?, graded);
            if json {
                out.write_all(io::distance_to_json(&d, &matching).as_bytes())
                    .map_err(|e| Error::Io(e.to_string()))?;
            } else {
                line(out, &d.to_string())?;
            }
        }
        Command::Interleave {
            left,
            right,
            graded,
            certificate,
        } => {
            let result =
                interleaving_search(&io::read_module(&left)?, &io::read_module(&right)?, graded)?;
            if let (Some(path), Some(cert)) = (certificate, &result.certificate) {
                io::write_text(&path, &io::certificate_to_json(cert))?;
            }
            line(out, &result.delta.to_string())?;
        }
        Command::Spectral {
            barcode: path,
            class,
            radius,
            trials,
        } => {
            let b = barcode(&path)?;
            match radius {
                None => line(out, &spectral_invariant(&b, class)?.to_string())?,
                Some(r) => {
                    let report = check_lipschitz(&b, &PerturbationBall::new(r)?, trials, cli.seed)?;
                    out.write_all(io::report_to_json(&report).as_bytes())
                        .map_err(|e| Error::Io(e.to_string()))?;
                    if !report.passed() {
                        return Ok(Status::CheckFailed);
                    }
                }
            }
        }
        Command::Depth { barcode: path } => {
            line(out, &format_rational(&boundary_depth(&barcode(&path)?)))?;
        }
        Command::Cover {
            barcode: path,
            delta,
        } => {
            let c = covering_number(&long_bar_endpoints(&barcode(&path)?, &delta), &delta)?;
            let centers: Vec<String> = c.centers.iter().map(format_rational).collect();
            line(out, &c.count.to_string())?;
            line(out, &centers.join(" "))?;
        }
        Command::Bound {
            barcode: path,
            delta,
        } => {
            line(
                out,
                &translated_point_lower_bound(&barcode(&path)?, &delta)?.to_string(),
            )?;
        }
        Command::Verify {
            module,
            against,
            certificate,
        } => {
            let m = io::read_module(&module)?;
            let problems: Vec<String> = match (against, certificate) {
                (Some(other), Some(cert)) => {
                    let other = io::read_module(&other)?;
                    let cert = io::certificate_from_json(&io::read_text(&cert)?)?;
                    verify_interleaving(&cert, &m, &other)?
                }
                _ => validate_module(&m).iter().map(|v| v.to_string()).collect(),
            };
            if problems.is_empty() {
                line(out, "ok")?;
            } else {
                for p in &problems {
                    line(out, p)?;
                }
                return Ok(Status::CheckFailed);
            }
        }
        Command::Diagram {
            barcode: path,
            title,
            out: target,
        } => {
            emit(
                out,
                &target,
                &barcode_svg(&barcode(&path)?, title.as_deref()),
            )?;
        }
        Command::Suite { only } => {
            let mut auditor = Auditor::default();
            let ids: Vec<u8> = match only {
                Some(10) | None => (1..=10).collect(),
                Some(k) => vec![k],
            };
            let mut all = true;
            for id in ids {
                let outcome = run_criterion(id, cli.seed, &mut auditor);
                all &= outcome.passed;
                line(out, &outcome.line())?;
                line(err, &outcome.timing())?;
            }
            if !all {
                return Ok(Status::CheckFailed);
            }
        }
    }
    Ok(Status::Ok)
}

/// Runs the CLI on `args` (including the program name) with explicit streams.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    2
                }
            };
        }
    };
    match execute(cli, out, err) {
        Ok(Status::Ok) => 0,
        Ok(Status::CheckFailed) => 1,
        Err(e) => {
            let _ = writeln!(err, "cpv: {e}");
            if e.is_io_or_parse() {
                2
            } else {
                1
            }
        }
    }
}

/// Runs the CLI with the process's standard streams and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = run_with(args, &mut stdout.lock(), &mut stderr.lock());
    let _ = std::io::stdout().flush();
    code
}
