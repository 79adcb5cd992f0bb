//! The `ctp` command-line tool.
//!
//! Exit status: 0 on success, 1 when a verification fails (the witness is
//! printed), 2 on usage or input errors, 3 when a size cap is exceeded.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use ctp_core::CtpError;

mod commands;
pub mod settings;

use settings::{CliConfig, Format, Overrides};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "ctp", version, about = "Binary cyclic transversal polytopes")]
pub struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Settings file (default: ./ctp.toml if present)
    #[arg(long, global = true, value_name = "FILE")]
    settings: Option<PathBuf>,
    /// Seed for sampled checks (overrides CTP_SEED)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: available parallelism)
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true)]
    max_width: Option<usize>,
    #[arg(long, global = true)]
    max_transversals: Option<u64>,
    #[arg(long, global = true)]
    max_dd_rays: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the cyclic transversals of a configuration
    Enum {
        config: PathBuf,
        #[arg(long)]
        count_only: bool,
    },
    /// List or separate LOS inequalities
    Los {
        config: PathBuf,
        /// Restrict to a single eta
        #[arg(long, value_name = "BITS")]
        eta: Option<String>,
        #[arg(long, conflicts_with = "separate")]
        list: bool,
        /// Separate a point given as point JSON
        #[arg(long, value_name = "POINT")]
        separate: Option<PathBuf>,
        /// Use one eta per distinct restriction to the span
        #[arg(long)]
        restrict: bool,
    },
    /// Write the flow formulation as an LP file
    Extform {
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        no_prune: bool,
        /// Objective taken from the coefficients of an inequality file
        #[arg(long, value_name = "INEQ")]
        objective: Option<PathBuf>,
    },
    /// Test membership of a point in the rank-r relaxation
    Relax {
        config: PathBuf,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        point: PathBuf,
    },
    /// Compute the CT-rank of a valid inequality
    Ctrank {
        config: PathBuf,
        #[arg(long)]
        ineq: PathBuf,
    },
    /// Build a configuration from a combinatorial problem
    Reduce {
        #[arg(value_enum)]
        problem: commands::Problem,
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Clause length bound for sat (default: longest clause)
        #[arg(long)]
        k: Option<usize>,
        /// Drop the right-hand-side block (bsp, cut)
        #[arg(long)]
        no_rhs_block: bool,
        /// Use the smaller packing construction (pack)
        #[arg(long)]
        small: bool,
    },
    /// Exact polyhedral checks on the CTP of a configuration
    Verify {
        #[command(subcommand)]
        check: VerifyCommand,
    },
    /// Run acceptance suites
    CheckPaper {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(Subcommand, Debug)]
enum VerifyCommand {
    /// Affine dimension of the CTP
    Dim { config: PathBuf },
    /// Validity of an inequality on all vertices
    Valid {
        config: PathBuf,
        #[arg(long)]
        ineq: PathBuf,
    },
    /// Whether an inequality defines a facet
    Facet {
        config: PathBuf,
        #[arg(long)]
        ineq: PathBuf,
    },
    /// Compare the CTP with TP, all LOS and any extra inequalities
    Equal {
        config: PathBuf,
        #[arg(long, value_name = "INEQ")]
        extra: Vec<PathBuf>,
    },
    /// Vertex-pair test for polytopes that could be CTPs
    Necessary {
        #[arg(required_unless_present = "vertices")]
        config: Option<PathBuf>,
        /// JSON array of vertices instead of a configuration
        #[arg(long, conflicts_with = "config")]
        vertices: Option<PathBuf>,
    },
}

/// What a command produced: a status plus text and JSON renderings.
pub(crate) struct Output {
    pub code: i32,
    pub text: String,
    pub json: serde_json::Value,
}

impl Output {
    pub fn ok(text: impl Into<String>, json: serde_json::Value) -> Self {
        Output {
            code: EXIT_OK,
            text: text.into(),
            json,
        }
    }

    pub fn failed(text: impl Into<String>, json: serde_json::Value) -> Self {
        Output {
            code: EXIT_FAILED,
            text: text.into(),
            json,
        }
    }
}

fn exit_code(e: &CtpError) -> i32 {
    if e.is_cap_exceeded() {
        EXIT_CAP
    } else {
        EXIT_USAGE
    }
}

/// Parses `argv`, runs the command and returns the exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let g = &cli.global;
    let flags = Overrides {
        seed: g.seed,
        format: g.format,
        workers: g.workers,
        max_width: g.max_width,
        max_transversals: g.max_transversals,
        max_dd_rays: g.max_dd_rays,
    };
    let env_seed = std::env::var("CTP_SEED").ok();
    let cfg = match CliConfig::resolve(g.settings.as_deref(), env_seed.as_deref(), &flags) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cfg.workers {
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    match pool.install(|| commands::dispatch(cli.command, &cfg)) {
        Ok(out) => {
            match cfg.format {
                Format::Text => {
                    if !out.text.is_empty() {
                        println!("{}", out.text.trim_end());
                    }
                }
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable")),
            }
            out.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
