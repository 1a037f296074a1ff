//! `invgen`: invariable generation of finite permutation groups from the
//! command line.
//!
//! Exit codes: 0 for a positive verdict, 1 for a negative verdict (the
//! certificate is still printed), 2 for invalid input or exceeded budgets.

mod cache;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cache::Cache;
use commands::Outcome;
use invgen::invgen::Budgets;
use invgen::suite::{Profile, DEFAULT_SEED};

pub const ENVELOPE_SCHEMA: &str = "invgen.cli/1";

/// Invariable generation of finite permutation groups.
///
/// Groups are given by descriptors: S<n>, A<n>, C<n>, D<n> (dihedral of
/// order n), Q8, PSL(2,<q>) for primes q <= 31, <desc>^<m> for direct
/// powers, and perm:<degree>:<gen>;<gen>;... with generators in one-based
/// cycle notation.
#[derive(Parser, Debug)]
#[command(name = "invgen", version)]
struct Cli {
    /// Largest group order whose elements are enumerated.
    #[arg(long, global = true, default_value_t = Budgets::default().elements)]
    budget_elements: u64,
    /// Largest group order whose subgroup lattice is enumerated.
    #[arg(long, global = true, default_value_t = Budgets::default().lattice)]
    budget_lattice: u64,
    /// Largest group order for which automorphisms are enumerated.
    #[arg(long, global = true, default_value_t = Budgets::default().aut)]
    budget_aut: u64,
    /// Largest number of class tuples (and expanded element tuples) examined
    /// by mexact and bounds.
    #[arg(long, global = true, default_value_t = Budgets::default().tuples)]
    budget_tuples: u64,
    /// Seed for every randomized check.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Directory for cached results; caching is off without it.
    #[arg(long, global = true, env = "INVGEN_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Ignore the cache directory.
    #[arg(long, global = true)]
    no_cache: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Order, classes, maximal subgroups, Frattini subgroup and automorphisms.
    GroupInfo { descriptor: String },
    /// Decide whether the given elements invariably generate the group.
    Invgen {
        descriptor: String,
        /// Elements in cycle notation, e.g. "(1,2,3)(4,5)".
        #[arg(required = true)]
        elements: Vec<String>,
    },
    /// The invariable generation number, with a certificate.
    Di { descriptor: String },
    /// Decide whether the rows of a matrix invariably generate T^m.
    Lemma42 {
        /// A nonabelian simple group T.
        descriptor: String,
        /// One row per line, entries in cycle notation separated by ';'.
        matrix_file: PathBuf,
        /// Also check the verdict inside T^m with this many random trials.
        #[arg(long)]
        cross_check: Option<usize>,
    },
    /// The largest m with d_I(T^m) <= r.
    Mexact { descriptor: String, r: usize },
    /// m(T, r) with its upper and lower bounds and three-row constructions.
    Bounds { descriptor: String, r: usize },
    /// Re-check a certificate or report produced by this tool.
    VerifyCertificate { file: PathBuf },
    /// Run the acceptance suite.
    VerifySuite {
        #[arg(value_parser = ["quick", "full"])]
        profile: String,
    },
}

/// Everything that determines a command's output, printed in JSON reports.
#[derive(Serialize)]
struct RunConfig {
    command: &'static str,
    args: Vec<String>,
    budgets: Budgets,
    seed: u64,
    format: Format,
}

#[derive(Serialize)]
struct Envelope<'a, T> {
    schema: &'static str,
    version: &'static str,
    config: &'a RunConfig,
    result: &'a T,
}

#[derive(Serialize)]
struct CacheKey<'a> {
    version: &'static str,
    command: &'static str,
    args: &'a [String],
    budgets: &'a Budgets,
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    let budgets = Budgets {
        elements: cli.budget_elements,
        lattice: cli.budget_lattice,
        aut: cli.budget_aut,
        tuples: cli.budget_tuples,
    };
    let cache = match (&cli.cache_dir, cli.no_cache) {
        (Some(dir), false) => Cache::new(Some(dir)),
        _ => Cache::disabled(),
    };
    let (command, args) = describe(&cli.command)?;
    let config = RunConfig {
        command,
        args,
        budgets,
        seed: cli.seed,
        format: cli.format,
    };
    let key = CacheKey {
        version: env!("CARGO_PKG_VERSION"),
        command,
        args: &config.args,
        budgets: &budgets,
        seed: cli.seed,
    };
    let seed = cli.seed;
    match &cli.command {
        Command::GroupInfo { descriptor } => emit(
            cli,
            &config,
            cache.get_or_compute(&key, || commands::group_info(descriptor, &budgets))?,
        ),
        Command::Invgen { descriptor, elements } => emit(
            cli,
            &config,
            cache.get_or_compute(&key, || commands::invgen_command(descriptor, elements, &budgets))?,
        ),
        Command::Di { descriptor } => emit(
            cli,
            &config,
            cache.get_or_compute(&key, || commands::di_command(descriptor, &budgets))?,
        ),
        Command::Lemma42 {
            descriptor,
            cross_check,
            ..
        } => {
            // The matrix contents, not its path, are part of the key.
            let matrix = &config.args[1];
            emit(
                cli,
                &config,
                cache.get_or_compute(&key, || {
                    commands::lemma42_command(descriptor, matrix, *cross_check, seed, &budgets)
                })?,
            )
        }
        Command::Mexact { descriptor, r } => emit(
            cli,
            &config,
            cache.get_or_compute(&key, || commands::mexact_command(descriptor, *r, &budgets))?,
        ),
        Command::Bounds { descriptor, r } => emit(
            cli,
            &config,
            cache.get_or_compute(&key, || commands::bounds_command(descriptor, *r, &budgets))?,
        ),
        Command::VerifyCertificate { .. } => emit(cli, &config, commands::verify_certificate(&config.args[0])?),
        Command::VerifySuite { profile } => {
            let profile: Profile = profile.parse()?;
            emit(cli, &config, commands::suite_command(profile, seed, &budgets)?)
        }
    }
}

/// Command name and normalized arguments. File arguments are replaced by
/// their contents so that the configuration does not depend on paths.
fn describe(command: &Command) -> anyhow::Result<(&'static str, Vec<String>)> {
    let normalize = |d: &str| -> String {
        invgen::catalog::parse_descriptor(d).map_or_else(|_| d.to_string(), |desc| desc.to_string())
    };
    let read = |p: &PathBuf| -> anyhow::Result<String> {
        std::fs::read_to_string(p).map_err(|e| anyhow::anyhow!("cannot read {}: {e}", p.display()))
    };
    Ok(match command {
        Command::GroupInfo { descriptor } => ("group-info", vec![normalize(descriptor)]),
        Command::Invgen { descriptor, elements } => {
            let mut args = vec![normalize(descriptor)];
            args.extend(elements.iter().cloned());
            ("invgen", args)
        }
        Command::Di { descriptor } => ("di", vec![normalize(descriptor)]),
        Command::Lemma42 {
            descriptor,
            matrix_file,
            cross_check,
        } => {
            let mut args = vec![normalize(descriptor), read(matrix_file)?];
            if let Some(t) = cross_check {
                args.push(format!("--cross-check={t}"));
            }
            ("lemma42", args)
        }
        Command::Mexact { descriptor, r } => ("mexact", vec![normalize(descriptor), r.to_string()]),
        Command::Bounds { descriptor, r } => ("bounds", vec![normalize(descriptor), r.to_string()]),
        Command::VerifyCertificate { file } => ("verify-certificate", vec![read(file)?]),
        Command::VerifySuite { profile } => ("verify-suite", vec![profile.clone()]),
    })
}

fn emit<T: Outcome>(cli: &Cli, config: &RunConfig, result: T) -> anyhow::Result<bool> {
    match cli.format {
        Format::Text => print!("{}", result.text()),
        Format::Json => {
            let envelope = Envelope {
                schema: ENVELOPE_SCHEMA,
                version: env!("CARGO_PKG_VERSION"),
                config,
                result: &result,
            };
            println!("{}", serde_json::to_string_pretty(&envelope)?);
        }
    }
    Ok(result.positive())
}
