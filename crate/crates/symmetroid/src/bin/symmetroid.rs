use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use symmetroid::families::Family;
use symmetroid::text::parse_rational;
use symmetroid::{cmd_catalog, cmd_certify, cmd_climb, cmd_family, cmd_grid, cmd_solve};
use symmetroid::{CatalogAction, CliError, ClimbStart, Exit, RunConfig};
use symmetroid_core::classify::ClassifyTolerances;
use symmetroid_core::hillclimb::ClimbOptions;
use symmetroid_core::CombType;

/// Nodes, combinatorial types and certificates of quintic spectrahedral
/// symmetroids.
///
/// Exit codes: 0 ok, 1 output error, 2 parse, 3 solve, 4 nongeneric,
/// 5 certification, 6 inadmissible target.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Seed of chart, start system and solver [default: 42]
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads, 0 for one per core
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Node threshold on |d| / max |d|
    #[arg(long, global = true)]
    tol_d: Option<f64>,
    /// Reality threshold on the relative imaginary part
    #[arg(long, global = true)]
    tol_reality: Option<f64>,
    /// Relative eigenvalue zero threshold
    #[arg(long, global = true)]
    tol_zero: Option<f64>,
    /// Endpoint deduplication distance
    #[arg(long, global = true)]
    tol_dedupe: Option<f64>,
    /// Output directory for certificates, witnesses and transcripts
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Refuse to run without --seed
    #[arg(long, global = true)]
    strict: bool,
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

impl Global {
    fn config(&self) -> RunConfig {
        let d = ClassifyTolerances::default();
        RunConfig {
            seed: self.seed,
            threads: self.threads,
            tolerances: ClassifyTolerances {
                d_tol: self.tol_d.unwrap_or(d.d_tol),
                reality_tol: self.tol_reality.unwrap_or(d.reality_tol),
                zero_tol: self.tol_zero.unwrap_or(d.zero_tol),
                dedupe_tol: self.tol_dedupe.unwrap_or(d.dedupe_tol),
            },
            out: self.out.clone(),
            verbosity: self.verbose,
            strict: self.strict,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Tetrahedral,
    Prismatic,
}

#[derive(Clone, Copy, ValueEnum)]
enum CatalogCmd {
    List,
    Verify,
}

#[derive(Subcommand)]
enum Command {
    /// Heuristic type, node list and PD-witness status of a pencil file
    Solve { pencil: PathBuf },
    /// Certified type of a pencil file; writes <out>/<name>.cert
    Certify { pencil: PathBuf },
    /// Hill-climb to a target type; writes the witness, certificate and transcript
    Climb {
        /// Start pencil file
        #[arg(required_unless_present = "random", conflicts_with = "random")]
        pencil: Option<PathBuf>,
        /// Start from the seeded random pencil with A0 = Id instead
        #[arg(long)]
        random: Option<u64>,
        #[arg(long, num_args = 2, value_names = ["RHO", "SIGMA"], required = true)]
        target: Vec<u32>,
        #[arg(long, default_value_t = 10)]
        restarts: usize,
        #[arg(long, default_value_t = 200)]
        iterations: usize,
    },
    /// Print a family pencil (exact rationals such as 1/2 are accepted)
    Family {
        kind: Kind,
        #[arg(allow_hyphen_values = true, required = true)]
        params: Vec<String>,
        /// Also solve it and print orbits and the PD-witness status
        #[arg(long)]
        report: bool,
        /// Write the pencil here instead of standard output
        #[arg(long)]
        write: Option<PathBuf>,
    },
    /// List or re-certify the witnesses of a catalog directory
    Catalog { action: CatalogCmd, dir: PathBuf },
    /// CSV samples of D and the least eigenvalue on a lattice in [lo, hi]^4
    Grid {
        pencil: PathBuf,
        #[arg(long, default_value_t = 11)]
        resolution: usize,
        #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
        lo: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        hi: f64,
    },
}

fn family(kind: Kind, params: &[String]) -> Result<Family, CliError> {
    let q: Vec<_> = params
        .iter()
        .map(|s| parse_rational(s).map_err(|e| CliError::new(Exit::Parse, format!("`{s}`: {e}"))))
        .collect::<Result<_, _>>()?;
    match (kind, q.as_slice()) {
        (Kind::Tetrahedral, [t]) => Ok(Family::Tetrahedral { t: t.clone() }),
        (Kind::Prismatic, [a, b]) => Ok(Family::Prismatic { a: a.clone(), b: b.clone() }),
        (Kind::Tetrahedral, _) => Err(CliError::new(Exit::Parse, "tetrahedral takes one parameter t")),
        (Kind::Prismatic, _) => Err(CliError::new(Exit::Parse, "prismatic takes two parameters a b")),
    }
}

fn run(cli: Cli) -> Result<String, CliError> {
    let cfg = cli.global.config();
    match cli.command {
        Command::Solve { pencil } => cmd_solve(&pencil, &cfg),
        Command::Certify { pencil } => cmd_certify(&pencil, &cfg).map(|r| r.text),
        Command::Climb { pencil, random, target, restarts, iterations } => {
            let start = match (pencil, random) {
                (Some(p), _) => ClimbStart::File(p),
                (None, Some(s)) => ClimbStart::Random(s),
                (None, None) => unreachable!("clap requires one of them"),
            };
            let opts = ClimbOptions { max_restarts: restarts, max_iterations: iterations, ..Default::default() };
            cmd_climb(&start, CombType::new(target[0], target[1]), &opts, &cfg).map(|r| r.text)
        }
        Command::Family { kind, params, report, write } => {
            let r = cmd_family(&family(kind, &params)?, report, &cfg)?;
            let pencil = r.pencil.to_string();
            match write {
                Some(path) => {
                    std::fs::write(&path, pencil)
                        .map_err(|e| CliError::new(Exit::Io, format!("{}: {e}", path.display())))?;
                    Ok(r.text)
                }
                None => Ok(format!("{pencil}{}", if r.text.is_empty() { String::new() } else { format!("\n{}", r.text) })),
            }
        }
        Command::Catalog { action, dir } => {
            let a = match action {
                CatalogCmd::List => CatalogAction::List,
                CatalogCmd::Verify => CatalogAction::Verify,
            };
            cmd_catalog(a, &dir)
        }
        Command::Grid { pencil, resolution, lo, hi } => cmd_grid(&pencil, resolution, lo, hi),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { Exit::Parse as u8 } else { 0 });
        }
    };
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
