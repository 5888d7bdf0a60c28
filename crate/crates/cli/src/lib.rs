//! Command-line front end for the `fair-alloc` library.
//!
//! The `fairalloc` binary is a thin wrapper around [`run`]; the command
//! implementations are public so tests and scripts can call them without a
//! subprocess.

pub mod bench;
pub mod compare;
pub mod error;
pub mod generate;
pub mod solve;
pub mod source;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use fair_alloc::algorithms::{Algorithm, DEFAULT_ORACLE_BUDGET};
use fair_alloc::datagen::{build_param_grid, GridProfile};
use fair_alloc::CardinalityBounds;

pub use error::{code, CliError, CliResult};
use source::{parse_bounds, parse_size, Loaded, ManySources, SingleSource};

#[derive(Debug, Parser)]
#[command(name = "fairalloc", version, about = "Fair allocation of products to re-sellers under cardinality bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write synthetic or catalog instances plus a manifest.
    Generate(GenerateArgs),
    /// Run algorithms on one instance and write allocations and a report.
    Solve(SolveArgs),
    /// Aggregate algorithm quality against the exact oracle over many instances.
    Compare(CompareArgs),
    /// Check an allocation for feasibility, EF1 and EQ1.
    Audit(AuditArgs),
    /// Time algorithms on growing square instances.
    Bench(BenchArgs),
    /// Export the piecewise-log Nash MILP in LP format.
    ExportMilp(ExportArgs),
}

/// Where the bounds come from when the instance does not carry them.
#[derive(Debug, Clone, Args)]
pub struct BoundsArgs {
    /// Cardinality bounds l1,l2,r1,r2 (overrides bounds stored in the file).
    #[arg(long, value_name = "L1,L2,R1,R2", value_parser = parse_bounds, conflicts_with = "grid")]
    pub bounds: Option<CardinalityBounds>,
    /// Take the bounds from a parameter grid for the instance size.
    #[arg(long, value_name = "PROFILE", value_parser = parse_profile)]
    pub grid: Option<GridProfile>,
}

impl BoundsArgs {
    /// Every bounds setting to run `loaded` under: the explicit bounds, the
    /// stored ones, or each usable grid entry.
    pub fn all_for(&self, loaded: &Loaded) -> CliResult<Vec<CardinalityBounds>> {
        match self.grid {
            Some(profile) => {
                let grid = build_param_grid(loaded.instance.resellers(), loaded.instance.products(), profile)?;
                let usable: Vec<CardinalityBounds> =
                    grid.entries.iter().filter(|e| e.is_usable()).map(|e| e.bounds).collect();
                if usable.is_empty() {
                    return Err(CliError::Usage(format!(
                        "the {profile:?} grid has no usable entry for instance `{}`",
                        loaded.id
                    )));
                }
                Ok(usable)
            }
            None => Ok(vec![loaded.bounds_or(self.bounds)?]),
        }
    }

    /// A single bounds setting: the first of [`BoundsArgs::all_for`].
    pub fn one_for(&self, loaded: &Loaded) -> CliResult<CardinalityBounds> {
        Ok(self.all_for(loaded)?[0])
    }
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Size of the synthetic instances.
    #[arg(long, value_name = "M,N", value_parser = parse_size, required_unless_present = "paper")]
    pub size: Option<(usize, usize)>,
    /// Number of synthetic instances (seeds --seed, --seed + 1, ...).
    #[arg(long, default_value_t = 1)]
    pub count: u64,
    /// Also (or instead) write a catalog instance; repeatable.
    #[arg(long, value_name = "NAME")]
    pub paper: Vec<String>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Bounds stored in every synthetic instance file.
    #[arg(long, value_name = "L1,L2,R1,R2", value_parser = parse_bounds)]
    pub bounds: Option<CardinalityBounds>,
    /// Also write the parameter grid for the synthetic size as grid.json.
    #[arg(long, value_name = "PROFILE", value_parser = parse_profile)]
    pub grid: Option<GridProfile>,
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub source: SingleSource,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub bounds: BoundsArgs,
    /// Algorithms to run.
    #[arg(long, value_name = "NAME[,NAME...]", value_delimiter = ',', value_parser = parse_algorithm, default_value = "seal")]
    pub algo: Vec<Algorithm>,
    #[arg(long, default_value_t = DEFAULT_ORACLE_BUDGET)]
    pub oracle_budget: u64,
    /// Emit the assignment trace (to a file with --out, else to stderr).
    #[arg(long)]
    pub trace: bool,
    /// Fill the runtime_ms column (makes the report non-reproducible).
    #[arg(long)]
    pub timing: bool,
    /// Output directory; without it results go to stdout.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub sources: ManySources,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub bounds: BoundsArgs,
    #[arg(long, value_name = "NAME[,NAME...]", value_delimiter = ',', value_parser = parse_algorithm, default_value = "seal,greedy-nash")]
    pub algo: Vec<Algorithm>,
    /// Node budget of the oracle baseline; 0 disables it.
    #[arg(long, default_value_t = DEFAULT_ORACLE_BUDGET)]
    pub oracle_budget: u64,
    /// Worker threads for instance-level parallelism (0: one per core).
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    #[arg(long)]
    pub timing: bool,
    /// Writes compare.csv and runs.csv here; otherwise compare.csv goes to stdout.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    #[command(flatten)]
    pub source: SingleSource,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub bounds: BoundsArgs,
    /// Allocation file to audit.
    #[arg(long, value_name = "PATH", conflicts_with = "algo")]
    pub allocation: Option<PathBuf>,
    /// Audit the allocation this algorithm produces instead.
    #[arg(long, value_name = "NAME", value_parser = parse_algorithm)]
    pub algo: Option<Algorithm>,
    /// Audit a solver's solution to the exported MILP (`name value` lines).
    #[arg(long, value_name = "PATH", conflicts_with_all = ["allocation", "algo"])]
    pub solution: Option<PathBuf>,
    /// Also search exhaustively for a feasible EQ1 allocation.
    #[arg(long)]
    pub eq1_search: bool,
    /// Node budget of the oracle and of the EQ1 search.
    #[arg(long, default_value_t = DEFAULT_ORACLE_BUDGET)]
    pub oracle_budget: u64,
    /// Writes <id>.audit.json here instead of stdout.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Square sizes m = n, ascending.
    #[arg(long, value_name = "N[,N...]", value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
    #[arg(long, value_name = "NAME[,NAME...]", value_delimiter = ',', value_parser = parse_algorithm, default_value = "greedy-nash,seal")]
    pub algo: Vec<Algorithm>,
    /// Fixed bounds for every size; default l = 5, epsilon = 3 with full copy demand.
    #[arg(long, value_name = "L1,L2,R1,R2", value_parser = parse_bounds)]
    pub bounds: Option<CardinalityBounds>,
    #[arg(long, default_value_t = 3)]
    pub repeats: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_ORACLE_BUDGET)]
    pub oracle_budget: u64,
    /// Writes bench.csv here instead of stdout.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[command(flatten)]
    pub source: SingleSource,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub bounds: BoundsArgs,
    /// Writes <id>.lp here instead of stdout.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.trim().parse::<Algorithm>().map_err(|e| e.to_string())
}

fn parse_profile(s: &str) -> Result<GridProfile, String> {
    s.parse::<GridProfile>().map_err(|e| e.to_string())
}

/// Removes repeated algorithm names, keeping the first occurrence.
pub(crate) fn dedup(algos: &[Algorithm]) -> Vec<Algorithm> {
    let mut out: Vec<Algorithm> = Vec::with_capacity(algos.len());
    for &a in algos {
        if !out.contains(&a) {
            out.push(a);
        }
    }
    out
}

pub(crate) fn create_dir(dir: &std::path::Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| error::io_error(dir, e))
}

pub(crate) fn write_text(path: &std::path::Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| error::io_error(path, e))
}

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Generate(args) => generate::cmd_generate(&args),
        Command::Solve(args) => solve::cmd_solve(&args),
        Command::Compare(args) => compare::cmd_compare(&args),
        Command::Audit(args) => solve::cmd_audit(&args),
        Command::Bench(args) => bench::cmd_bench(&args),
        Command::ExportMilp(args) => solve::cmd_export_milp(&args),
    }
}

/// Writes command output to stdout; a closed pipe (`| head`) is not an error.
pub(crate) fn emit(text: &str) -> CliResult<()> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            Err(error::io_error(std::path::Path::new("<stdout>"), e))
        }
        _ => Ok(()),
    }
}
