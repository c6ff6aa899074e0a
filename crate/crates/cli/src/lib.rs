//! Command-line front end: literal parsing, command dispatch and JSON reports.

pub mod commands;
pub mod golden;
pub mod literal;
pub mod report;

use clap::{Parser, Subcommand};
use towergroup::Limits;

pub use report::{Report, SCHEMA_VERSION};

#[derive(Parser, Debug)]
#[command(name = "towergroup", version, about = "Special groups, toric towers and related constructions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Largest group that may be fully enumerated.
    #[arg(long, global = true)]
    pub max_order: Option<usize>,
    /// Largest group handed to isomorphism and specialness searches.
    #[arg(long, global = true)]
    pub iso_limit: Option<usize>,
    /// Emit a JSON report (default).
    #[arg(long, global = true, conflicts_with = "text")]
    pub json: bool,
    /// Emit a plain-text rendering of the report.
    #[arg(long, global = true)]
    pub text: bool,
    /// Re-run certificate and witness verification independently.
    #[arg(long, global = true)]
    pub verify: bool,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Order, center, derived series, class sizes and Sylow orders.
    Analyze { literal: String },
    /// Decide specialness and print a certificate or an exhaustive failure.
    Special { literal: String },
    /// Build and verify a toric tower certificate.
    Tower { literal: String },
    /// Untwist a central extension of an abelian ℓ-group.
    Untwist { literal: String },
    /// Build the cocycle model for the given invariants, e.g. "2,2".
    Fc { invariants: String },
    /// Search for an isoclinism between two groups.
    Isoclinic { left: String, right: String },
    /// Sylow subgroup and its specialness.
    Sylow { literal: String, prime: u64 },
    /// The monomial (Z/2)^3 action from the quaternion triple.
    Monomial,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Analyze { .. } => "analyze",
            Command::Special { .. } => "special",
            Command::Tower { .. } => "tower",
            Command::Untwist { .. } => "untwist",
            Command::Fc { .. } => "fc",
            Command::Isoclinic { .. } => "isoclinic",
            Command::Sylow { .. } => "sylow",
            Command::Monomial => "monomial",
        }
    }

    pub fn inputs(&self) -> Vec<String> {
        match self {
            Command::Analyze { literal }
            | Command::Special { literal }
            | Command::Tower { literal }
            | Command::Untwist { literal } => vec![literal.clone()],
            Command::Fc { invariants } => vec![invariants.clone()],
            Command::Isoclinic { left, right } => vec![left.clone(), right.clone()],
            Command::Sylow { literal, prime } => vec![literal.clone(), prime.to_string()],
            Command::Monomial => vec![],
        }
    }
}

/// Everything a process invocation produces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let (stdout, stderr) = if code == 0 {
                (rendered, String::new())
            } else {
                (String::new(), rendered)
            };
            return Output { stdout, stderr, code };
        }
    };
    let mut limits = Limits::default();
    if let Some(m) = cli.max_order {
        limits.max_order = m;
    }
    if let Some(s) = cli.iso_limit {
        limits.search_limit = s;
    }
    let (report, code) = commands::execute(&cli.command, &limits, cli.verify);
    let stdout = if cli.text {
        report.to_text()
    } else {
        report.to_json()
    };
    let stderr = report
        .error
        .as_ref()
        .and_then(|e| e.get("message"))
        .and_then(|m| m.as_str())
        .map(|m| format!("error: {m}\n"))
        .unwrap_or_default();
    Output { stdout, stderr, code }
}
