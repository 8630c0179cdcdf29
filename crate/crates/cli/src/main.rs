//! `flp`: batch front end to the flp-tangle library.
//!
//! Exit codes: 0 success, 1 a check or oracle verification failed, 2 bad
//! usage or input.

mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use flp_tangle::{EquivalenceMode, Fraction, GaugeMove, SystemCase, Tangle};

#[derive(Parser, Debug)]
#[command(name = "flp", version, about = "Rational tangles, four-plats and the Flp tangle equations")]
pub struct Cli {
    #[command(flatten)]
    pub opts: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Four-plat equivalence: `mirror` (up to mirror image) or `chiral`.
    #[arg(long, global = true, default_value = "mirror")]
    pub mode: EquivalenceMode,
    /// Read and write fractions in the biological sign convention.
    #[arg(long, global = true)]
    pub biological_signs: bool,
    /// Search bound on |num| + den of candidate fractions.
    #[arg(long, global = true, default_value_t = 15)]
    pub bound: u64,
    /// Cross-check every closure against the diagram oracle.
    #[arg(long, global = true)]
    pub verify: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Fraction, twist vector, class and closures of one rational tangle.
    Eval {
        /// A fraction such as `-5/3` or `inf`.
        #[arg(allow_hyphen_values = true, required_unless_present = "twist", conflicts_with = "twist")]
        fraction: Option<Fraction>,
        /// A twist vector such as `2,1,1`; the first entry is horizontal when
        /// the length is odd.
        #[arg(long, allow_hyphen_values = true)]
        twist: Option<String>,
    },
    /// Numerator closure of a tangle sum.
    Close {
        /// Comma-separated summands, e.g. `-5/3,0,1`.
        #[arg(long, allow_hyphen_values = true)]
        sum: String,
    },
    /// Every O_f^k within the bound solving both equations for row k.
    SolveOf {
        #[arg(long)]
        case: SystemCase,
        #[arg(long = "P", allow_hyphen_values = true)]
        p: Fraction,
        #[arg(long = "R", allow_hyphen_values = true)]
        r: Fraction,
        #[arg(long = "Oc", allow_hyphen_values = true)]
        oc: Fraction,
    },
    /// Every (P, R) within the bound making the given rows hold.
    SolvePr {
        #[arg(long)]
        case: SystemCase,
        #[arg(long = "Oc", allow_hyphen_values = true)]
        oc: Fraction,
        /// Rows as `k=fraction` pairs, e.g. `0=-1,1=-5/3`.
        #[arg(long = "Of", allow_hyphen_values = true)]
        of: String,
    },
    /// Every U within the bound with N(P + U) the unknot.
    Partners {
        #[arg(long = "P", allow_hyphen_values = true)]
        p: Fraction,
    },
    /// All rational systems within the bound, one per gauge orbit.
    Enumerate {
        #[arg(long)]
        case: SystemCase,
    },
    /// Verify the ten equations of a system. Exits 1 when any row fails.
    Check {
        #[command(flatten)]
        system: SystemInput,
    },
    /// Solution class, structural restrictions and Table 1 verdicts.
    Classify {
        #[command(flatten)]
        system: SystemInput,
    },
    /// The elimination table with verdicts, or the verdict for one triple.
    Table1 {
        #[arg(long, default_value = "direct")]
        case: SystemCase,
        /// Labels `P,O1,O2` from inf, Z, Q!, prime.
        #[arg(long)]
        triple: Option<String>,
        #[arg(long, value_enum, default_value_t = AssignmentArg::Unassigned)]
        assignment: AssignmentArg,
        /// Print the transcription as tab-separated text.
        #[arg(long, conflicts_with = "triple")]
        raw: bool,
    },
    /// Apply a gauge move, or reduce to the orbit's normal form.
    Gauge {
        #[command(flatten)]
        system: SystemInput,
        #[arg(long = "move", required_unless_present = "normalize")]
        which: Option<GaugeMove>,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        n: i64,
        #[arg(long, conflicts_with = "which")]
        normalize: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AssignmentArg {
    O1IsOf,
    O1IsOc,
    Unassigned,
}

/// A system from `--system file.json` or from inline flags.
#[derive(Args, Debug, Clone)]
pub struct SystemInput {
    #[arg(long, conflicts_with_all = ["case", "p", "r", "oc", "of"])]
    pub system: Option<PathBuf>,
    #[arg(long, required_unless_present = "system")]
    pub case: Option<SystemCase>,
    #[arg(long = "P", allow_hyphen_values = true, required_unless_present = "system")]
    pub p: Option<Fraction>,
    #[arg(long = "R", allow_hyphen_values = true, required_unless_present = "system")]
    pub r: Option<Fraction>,
    /// A fraction, `prime` or `locally-knotted`.
    #[arg(long = "Oc", allow_hyphen_values = true, required_unless_present = "system")]
    pub oc: Option<Tangle>,
    /// Rows as `k=tangle` pairs, or a plain list filling k = 0, 1, ...
    #[arg(long = "Of", allow_hyphen_values = true, required_unless_present = "system")]
    pub of: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            if out.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
