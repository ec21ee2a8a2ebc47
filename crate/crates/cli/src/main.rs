//! `zigzag`: identity verification, zig-zag periods, numeric evaluation,
//! loop experiments and the Monte Carlo oracle.
//!
//! Exit codes: 0 when every check passes, 1 on a mathematical failure,
//! 2 on a usage or configuration error.

mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{CliError, EvalMode, McArgs, Report};
use config::{ConfigFile, Overrides, RunConfig, CONFIG_ENV};

#[derive(Parser, Debug)]
#[command(name = "zigzag", version, about = "Single-valued polylogarithm series and zig-zag periods")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Weight cutoff W of the exact series [default: 13].
    #[arg(long, global = true)]
    weight: Option<usize>,
    /// Decimal digits of printed numeric values (at most 15) [default: 12].
    #[arg(long, global = true)]
    prec: Option<u32>,
    /// Tolerance for numeric checks [default: 1e-10].
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed of the Monte Carlo streams [default: 42].
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads [default: available parallelism].
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// JSON file with default values for the flags above.
    #[arg(long, global = true, env = CONFIG_ENV)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check every identity of the construction exactly at cutoff W.
    Verify {
        /// Restrict to the named identities (repeatable).
        #[arg(long = "identity")]
        identities: Vec<String>,
        /// Test hook: add ζ(3) to S at x1x0x0 before checking.
        #[arg(long)]
        perturb: bool,
    },
    /// Zig-zag periods read off S and Ŝ, against the closed form.
    Periods {
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        /// Also extrapolate f_2w numerically to 0.
        #[arg(long)]
        limit: bool,
    },
    /// Evaluate L_w, F_w, F̂_w or f_2w at one point.
    Eval {
        /// Word over {0,1}; the empty string is the empty word.
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        /// Point such as 0.3+0.4i.
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, value_enum, default_value = "f", ignore_case = true)]
        mode: EvalMode,
    },
    /// Continue F around 0 or 1 and report the change of every class word.
    Transport {
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        /// 0 or 1.
        #[arg(long = "loop")]
        around: u8,
        #[arg(long, default_value_t = 0.5)]
        radius: f64,
        /// Longest word checked.
        #[arg(long, default_value_t = 5)]
        max_len: usize,
        /// Use F̂ on B¹ instead of F on B⁰.
        #[arg(long)]
        hat: bool,
    },
    /// Monte Carlo estimate of the period of a zig-zag or given graph.
    Mc {
        #[arg(long)]
        n: Option<usize>,
        /// Graph as JSON {"vertices": V, "edges": [[a, b], ...]}.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        /// Dirichlet shape of the sampling density [default: 1/edges].
        #[arg(long)]
        shape: Option<f64>,
        /// Write the graph used as JSON.
        #[arg(long)]
        export_graph: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(Report, bool), CliError> {
    let g = &cli.global;
    let file = match &g.config {
        Some(path) => ConfigFile::load(path).map_err(CliError::Usage)?,
        None => ConfigFile::default(),
    };
    let flags = Overrides { weight: g.weight, prec: g.prec, tol: g.tol, seed: g.seed, workers: g.workers, json: g.json };
    let cfg = RunConfig::resolve(&flags, &file).map_err(CliError::Usage)?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build_global()
        .map_err(|e| CliError::Internal(e.to_string()))?;
    let report = match cli.command {
        Command::Verify { identities, perturb } => commands::verify(&cfg, &identities, perturb)?,
        Command::Periods { n_max, limit } => commands::periods(&cfg, n_max, limit)?,
        Command::Eval { word, z, mode } => {
            commands::eval(&cfg, commands::parse_word(&word)?, commands::parse_z(&z)?, mode)?
        }
        Command::Transport { from, around, radius, max_len, hat } => {
            commands::transport(&cfg, commands::parse_z(&from)?, around, radius, max_len, hat)?
        }
        Command::Mc { n, graph, samples, shape, export_graph } => {
            commands::mc(&cfg, &McArgs { n, graph, samples, shape, export_graph })?
        }
    };
    Ok((report, cfg.json))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((report, json)) => {
            let body = if json {
                serde_json::to_string_pretty(&report.json).expect("report serialises") + "\n"
            } else {
                report.text
            };
            // A closed pipe (e.g. `| head`) is not an error of the computation.
            let _ = std::io::stdout().lock().write_all(body.as_bytes());
            ExitCode::from(if report.pass { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
