//! `torext`: resolutions, Tor as an exterior-algebra module, Ext as a module
//! over the CI operators, and the higher-homotopy resolution over S.

mod commands;
mod job;
mod verify;

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use torext_core::AlgebraError;

use job::JobSpec;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Math(AlgebraError),
    /// Verification found a broken invariant.
    Failed(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Math(AlgebraError::Parse { .. })
            | CliError::Math(AlgebraError::ShapeError(_))
            | CliError::Math(AlgebraError::RingMismatch(_)) => 2,
            CliError::Math(e) if e.is_precondition() => 3,
            CliError::Math(_) | CliError::Failed(_) => 4,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "UsageError",
            CliError::Failed(_) => "VerificationFailed",
            CliError::Math(e) => match e {
                AlgebraError::RingMismatch(_) => "RingMismatch",
                AlgebraError::ShapeError(_) => "ShapeError",
                AlgebraError::HomogeneityError(_) => "HomogeneityError",
                AlgebraError::ChainMapError(_) => "ChainMapError",
                AlgebraError::MinimalityError(_) => "MinimalityError",
                AlgebraError::AnnihilationError(_) => "AnnihilationError",
                AlgebraError::LiftError(_) => "LiftError",
                AlgebraError::NotHighSyzygy(_) => "NotHighSyzygy",
                AlgebraError::GenerationError(_) => "GenerationError",
                AlgebraError::RegularityHypothesisFailed(_) => "RegularityHypothesisFailed",
                AlgebraError::InvalidParameter(_) => "InvalidParameter",
                AlgebraError::Parse { .. } => "ParseError",
                AlgebraError::Internal(_) => "InternalError",
            },
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(s) | CliError::Failed(s) => write!(f, "{}: {s}", self.name()),
            CliError::Math(e) => write!(f, "{}: {e}", self.name()),
        }
    }
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> Self {
        CliError::Math(e)
    }
}

#[derive(Parser, Debug)]
#[command(name = "torext", version, about = "Tor and Ext over complete intersections")]
struct Cli {
    /// Emit JSON on stdout instead of tables.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct JobArgs {
    /// Ring declaration, e.g. `p=101,x1..x3` (default) or `p=7 vars=a,b,c`.
    #[arg(long)]
    ring: Option<String>,
    /// Regular sequence f (default: cubes of the variables).
    #[arg(long)]
    f: Option<String>,
    /// Module: `syzk:<i>`, `ring`, `coker:[[..],..]` or `file:<path>`.
    #[arg(long)]
    module: Option<String>,
    /// Job file: `ring p=<prime> vars=<list>; f=<poly,...>; module=<kind:args>;`.
    /// Flags override its entries.
    #[arg(long)]
    job: Option<String>,
}

impl JobArgs {
    fn spec(&self) -> Result<JobSpec, CliError> {
        let flags = JobSpec {
            ring: self.ring.clone(),
            f: self.f.clone(),
            module: self.module.clone(),
        };
        match &self.job {
            None => Ok(flags),
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read '{path}': {e}")))?;
                Ok(JobSpec::parse_file_form(&text)?.merged(flags))
            }
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Minimal free resolution and Betti table.
    Resolve {
        #[command(flatten)]
        job: JobArgs,
        /// Number of steps.
        #[arg(long, default_value_t = 6)]
        length: usize,
        /// Work over S itself (f is ignored).
        #[arg(long = "over-s", alias = "ring-only-S")]
        over_s: bool,
    },
    /// Tor^S(M,k) as a module over the exterior algebra on c generators.
    Tor {
        #[command(flatten)]
        job: JobArgs,
        /// Steps of the exterior-algebra resolution.
        #[arg(long, default_value_t = 5)]
        length: usize,
        /// Regularity window (default 2c + 4).
        #[arg(long)]
        window: Option<usize>,
    },
    /// Ext_R(M,k) over the ring of CI operators, split by parity.
    Ext {
        #[command(flatten)]
        job: JobArgs,
        /// Length of the R-resolution; determines the degrees of Ext computed.
        #[arg(long, default_value_t = 9)]
        length: usize,
        /// Steps of the resolution over the operator ring.
        #[arg(long, default_value_t = 4)]
        window: usize,
    },
    /// Resolution of M over S built from the higher CI operators.
    Gk {
        #[command(flatten)]
        job: JobArgs,
        /// Length of the lifted R-resolution.
        #[arg(long, default_value_t = 8)]
        length: usize,
        /// Homological degrees checked for acyclicity.
        #[arg(long, default_value_t = 6)]
        window: i32,
    },
    /// Run the fixture suite and report PASS/FAIL per criterion.
    VerifyPaper {
        /// Comma-separated criterion ids (1-7, 9, mutation).
        #[arg(long)]
        only: Option<String>,
        /// Corrupt the sign of t_2 before building the resolution over S;
        /// criterion 6 must then fail.
        #[arg(long)]
        mutate: bool,
    },
}

fn configure_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("TOREXT_THREADS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Usage(format!("TOREXT_THREADS must be a positive integer, got '{v}'")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<commands::Output, CliError> {
    configure_threads()?;
    match cli.command {
        Command::Resolve { job, length, over_s } => commands::resolve_cmd(&job.spec()?, length, over_s),
        Command::Tor { job, length, window } => commands::tor(&job.spec()?, length, window),
        Command::Ext { job, length, window } => commands::ext(&job.spec()?, length, window),
        Command::Gk { job, length, window } => commands::gk(&job.spec()?, length, window),
        Command::VerifyPaper { only, mutate } => verify::run(only.as_deref(), mutate),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok(out) => {
            if json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("json"));
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            if json {
                let v = serde_json::json!({"error": e.name(), "message": e.to_string()});
                println!("{}", serde_json::to_string_pretty(&v).expect("json"));
            }
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
