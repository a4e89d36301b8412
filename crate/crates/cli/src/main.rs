//! `maskforge`: analysis, decomposition and convergence checks for subdivision masks.

mod report;
mod table;

use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use maskforge::io::{DecompositionFile, DigitsFile, MaskFile};
use maskforge::subdivision::{check_c1, check_convergence, refine};
use maskforge::{decompose, iterated_decomposition, DilationContext, Error, Sequence, TrigPoly};
use serde_json::Value;

const DEFAULT_PRECISION_BITS: u32 = 128;

#[derive(Parser)]
#[command(
    name = "maskforge",
    version,
    about = "Exact analysis of multivariate subdivision masks"
)]
struct Cli {
    /// Output format for reports.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Common {
    /// Mask file (or, with --verify-only, a previously emitted JSON report).
    input: PathBuf,
    /// JSON file with replacement `digits` / `dual_digits`.
    #[arg(long)]
    digits: Option<PathBuf>,
    /// Where to write the output instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Digit sets, values at the origin, zero-condition order and lambda table.
    Analyze {
        #[command(flatten)]
        common: Common,
        /// Highest zero-condition order probed.
        #[arg(long, default_value_t = 4)]
        cap: u32,
        /// Re-run a saved report and check that it is reproduced exactly.
        #[arg(long)]
        verify_only: bool,
    },
    /// Decomposition of the mask; writes decomposition JSON.
    Decompose {
        #[command(flatten)]
        common: Common,
        /// Class parameter: 0 or 1 runs the basic decomposition (needs Z^0);
        /// n >= 2 needs Z^n and yields entries in Z^(n-1).
        #[arg(long, default_value_t = 1)]
        order: u32,
        /// Number of nested decomposition levels.
        #[arg(long, default_value_t = 1)]
        depth: u32,
        /// Treat the input as decomposition JSON and re-verify it.
        #[arg(long)]
        verify_only: bool,
    },
    /// Convergence certificate via the difference scheme.
    Converge {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 8)]
        lmax: u32,
        #[arg(long)]
        verify_only: bool,
    },
    /// C^1 certificate via the second difference scheme.
    Smooth {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 8)]
        lmax: u32,
        #[arg(long)]
        verify_only: bool,
    },
    /// Applies the scheme to data and writes grid/value CSV.
    Refine {
        #[command(flatten)]
        common: Common,
        /// Sequence CSV (index columns, then values). Defaults to a unit impulse at 0.
        #[arg(long)]
        data: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        rounds: u32,
    },
}

/// Process failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse(_)
            | Error::NotSquare { .. }
            | Error::Singular
            | Error::NotExpanding { .. } => 2,
            Error::UserDigitsInvalid(_) => 3,
            Error::NotInZ0 | Error::NotInClass { .. } => 4,
            Error::ShapeMismatch(_)
            | Error::DimensionMismatch { .. }
            | Error::WrongCount { .. }
            | Error::NotRational => 5,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure {
        code: 2,
        message: format!("{}: {e}", path.display()),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| io_failure(path, e))
}

fn precision_bits() -> Result<u32, Failure> {
    match std::env::var("MASKFORGE_PRECISION_BITS") {
        Err(_) => Ok(DEFAULT_PRECISION_BITS),
        Ok(v) => v
            .trim()
            .parse::<u32>()
            .ok()
            .filter(|b| (8..=4096).contains(b))
            .ok_or(Failure {
                code: 2,
                message: format!(
                    "MASKFORGE_PRECISION_BITS must be an integer in 8..=4096, got {v:?}"
                ),
            }),
    }
}

fn load(common: &Common) -> Result<(DilationContext, TrigPoly), Failure> {
    let file = MaskFile::from_json(&read(&common.input)?)?;
    let digits = match &common.digits {
        Some(p) => Some(DigitsFile::from_json(&read(p)?)?),
        None => None,
    };
    Ok(file.load(digits.as_ref())?)
}

/// Prints a line; a closed pipe downstream is not an error.
fn say(text: &str) -> Result<(), Failure> {
    match writeln!(io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(io_failure(Path::new("stdout"), e)),
        _ => Ok(()),
    }
}

fn emit(common: &Common, text: &str) -> Result<(), Failure> {
    match &common.out {
        Some(path) => std::fs::write(path, format!("{text}\n")).map_err(|e| io_failure(path, e)),
        None => say(text),
    }
}

/// Text reports end with the compact machine block on its own line.
fn emit_report(
    common: &Common,
    format: Format,
    machine: &Value,
    human: String,
) -> Result<(), Failure> {
    match format {
        Format::Json => emit(common, &serde_json::to_string_pretty(machine).unwrap()),
        Format::Text => emit(common, &format!("{human}\n\n{machine}")),
    }
}

/// Re-runs the command recorded in a saved report and compares the machine blocks.
fn verify_report(common: &Common, expected_command: &str) -> Result<(), Failure> {
    let text = read(&common.input)?;
    // text reports carry the machine block on their last line
    let saved: Value = serde_json::from_str(&text)
        .or_else(|_| serde_json::from_str(text.trim_end().lines().last().unwrap_or("")))
        .map_err(|e| Failure::from(Error::Parse(e.to_string())))?;
    if saved["command"] != expected_command {
        return Err(Error::Parse(format!("report was not produced by {expected_command}")).into());
    }
    let input: MaskFile = serde_json::from_value(saved["input"].clone())
        .map_err(|e| Failure::from(Error::Parse(e.to_string())))?;
    let (ctx, t) = input.load(None)?;
    let param = |name: &str| {
        saved["parameters"][name]
            .as_u64()
            .map(|v| v as u32)
            .ok_or_else(|| Failure::from(Error::Parse(format!("report lacks parameter {name}"))))
    };
    let fresh = match expected_command {
        "analyze" => report::analyze(&t, &ctx, param("cap")?)?,
        "converge" => {
            let (lmax, bits) = (param("lmax")?, param("precision_bits")?);
            report::converge(
                &t,
                &ctx,
                &check_convergence(&t, &ctx, lmax, bits)?,
                lmax,
                bits,
            )?
        }
        _ => {
            let (lmax, bits) = (param("lmax")?, param("precision_bits")?);
            report::smooth(&t, &ctx, &check_c1(&t, &ctx, lmax, bits)?, lmax, bits)?
        }
    };
    if fresh != saved {
        return Err(Failure {
            code: 1,
            message: "verification failed: report is not reproduced".into(),
        });
    }
    let verdict = saved
        .get("verdict")
        .map(|v| format!(", verdict {v}"))
        .unwrap_or_default();
    say(&format!("verification: report reproduced exactly{verdict}"))
}

fn decomposition_summary(file: &DecompositionFile) -> String {
    format!(
        "decomposition: order {}, depth {}, {} entries\nidentity exact: yes\nachieved class: {}",
        file.order,
        file.depth,
        file.entries.len(),
        file.achieved_class
    )
}

fn run_decompose(
    common: &Common,
    format: Format,
    order: u32,
    depth: u32,
    verify_only: bool,
) -> Result<(), Failure> {
    if verify_only {
        let file = DecompositionFile::from_json(&read(&common.input)?)?;
        file.verify()?;
        return say(&decomposition_summary(&file));
    }
    let (ctx, t) = load(common)?;
    let file = match depth {
        0 => return Err(Error::Parse("--depth must be at least 1".into()).into()),
        1 => DecompositionFile::from_decomposition(&decompose(&t, &ctx, order)?, order)?,
        n => {
            let class = if order <= 1 { 0 } else { order };
            let it = iterated_decomposition(&t, &ctx, n, (class + 1).max(n))?;
            DecompositionFile::from_iterated(&t, &ctx, &it, order)?
        }
    };
    let summary = decomposition_summary(&file);
    match (&common.out, format) {
        (Some(_), _) => {
            emit(common, &file.to_json())?;
            say(&summary)
        }
        (None, Format::Json) => say(&file.to_json()),
        (None, Format::Text) => {
            let mut lines = vec![summary];
            let label = |v: &[usize]| v.iter().map(|a| a.to_string()).collect::<Vec<_>>().join("");
            for e in &file.entries {
                let entry = e.mask.to_poly(ctx.dim(), Some(&ctx))?;
                lines.push(format!("t_{},{}:", label(&e.j), label(&e.k)));
                for (nu, tau) in entry.polyphase_split(&ctx)?.iter().enumerate() {
                    lines.push(format!("  tau_{nu} = {tau}"));
                }
            }
            say(&lines.join("\n"))
        }
    }
}

fn run_refine(common: &Common, data: Option<&PathBuf>, rounds: u32) -> Result<(), Failure> {
    let (ctx, t) = load(common)?;
    let d = ctx.dim();
    let f = match data {
        Some(path) => table::read_sequence(
            BufReader::new(File::open(path).map_err(|e| io_failure(path, e))?),
            d,
        )?,
        None => Sequence::delta(d, 1, 0, vec![0; d]),
    };
    let refinement = refine(&t, &ctx, &f, rounds)?;
    match &common.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| io_failure(path, e))?;
            table::write_refinement(io::BufWriter::new(file), d, &refinement)
                .map_err(|e| io_failure(path, e))
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            match table::write_refinement(&mut lock, d, &refinement).and_then(|_| lock.flush()) {
                Err(e) if e.kind() != io::ErrorKind::BrokenPipe => {
                    Err(io_failure(Path::new("stdout"), e))
                }
                _ => Ok(()),
            }
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let format = cli.format;
    match cli.command {
        Command::Analyze {
            common,
            cap,
            verify_only,
        } => {
            if verify_only {
                return verify_report(&common, "analyze");
            }
            let (ctx, t) = load(&common)?;
            let r = report::analyze(&t, &ctx, cap)?;
            emit_report(&common, format, &r, report::analyze_text(&r))
        }
        Command::Decompose {
            common,
            order,
            depth,
            verify_only,
        } => run_decompose(&common, format, order, depth, verify_only),
        Command::Converge {
            common,
            lmax,
            verify_only,
        } => {
            if verify_only {
                return verify_report(&common, "converge");
            }
            let bits = precision_bits()?;
            let (ctx, t) = load(&common)?;
            let r = report::converge(
                &t,
                &ctx,
                &check_convergence(&t, &ctx, lmax, bits)?,
                lmax,
                bits,
            )?;
            emit_report(&common, format, &r, report::converge_text(&r))
        }
        Command::Smooth {
            common,
            lmax,
            verify_only,
        } => {
            if verify_only {
                return verify_report(&common, "smooth");
            }
            let bits = precision_bits()?;
            let (ctx, t) = load(&common)?;
            let r = report::smooth(&t, &ctx, &check_c1(&t, &ctx, lmax, bits)?, lmax, bits)?;
            emit_report(&common, format, &r, report::smooth_text(&r))
        }
        Command::Refine {
            common,
            data,
            rounds,
        } => run_refine(&common, data.as_ref(), rounds),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
