//! Run configuration, the per-process start-solution cache, and the
//! solve/certify steps shared by the commands.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::{Arc, Mutex, OnceLock};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use symmetroid_core::certify::CertifyOptions;
use symmetroid_core::classify::ClassifyTolerances;
use symmetroid_core::pencil::ChartPoint;
use symmetroid_core::tracker::{endpoints_of, prepare_start, solve_nodes, StartSolutions};
use symmetroid_core::{certified_type, Certificate, Chart, Error, Executor, Pencil, TrackOptions, Unsuccessful};

use crate::exec::Pool;
use crate::text::PencilText;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 42;

/// Solver seeds tried by certification: `seed, seed + 1, …`.
pub const CERTIFY_ATTEMPTS: u64 = 3;

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    /// Chart, start system and solver seed; [`DEFAULT_SEED`] when unset.
    pub seed: Option<u64>,
    /// Worker threads; 0 means one per core.
    pub threads: usize,
    pub tolerances: ClassifyTolerances,
    /// Directory for certificates, witnesses and transcripts.
    pub out: PathBuf,
    pub verbosity: u8,
    /// Refuse to run without an explicit seed.
    pub strict: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: None,
            threads: 0,
            tolerances: ClassifyTolerances::default(),
            out: PathBuf::from("."),
            verbosity: 0,
            strict: false,
        }
    }
}

impl RunConfig {
    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    pub fn pool(&self) -> Pool {
        Pool::new(self.threads)
    }
}

/// The affine chart belonging to a seed.
pub fn chart_for(seed: u64) -> Chart {
    Chart::random(&mut ChaCha8Rng::seed_from_u64(seed))
}

/// Start solutions for `seed`, computed once per process.
pub fn start_solutions<E: Executor>(seed: u64, exec: &E) -> Result<Arc<StartSolutions>, Error> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<StartSolutions>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(s) = cache.lock().expect("start cache").get(&seed) {
        return Ok(s.clone());
    }
    // Computed outside the lock; a racing thread computes the same value.
    let s = Arc::new(prepare_start(&chart_for(seed), seed, &TrackOptions::default(), exec)?);
    Ok(cache.lock().expect("start cache").entry(seed).or_insert(s).clone())
}

/// All 64 solutions of the node system.
pub fn solve<E: Executor>(
    pencil: &Pencil,
    chart_seed: u64,
    solver_seed: u64,
    exec: &E,
) -> Result<(Arc<StartSolutions>, Vec<ChartPoint>), Error> {
    let start = start_solutions(chart_seed, exec)?;
    let results = solve_nodes(pencil, &start, &TrackOptions::default(), solver_seed, exec)?;
    let points = endpoints_of(&results)?;
    Ok((start, points))
}

/// One certification attempt of the exact pencil in `text`.
pub fn certify_once<E: Executor>(
    text: &PencilText,
    chart_seed: u64,
    solver_seed: u64,
    exec: &E,
) -> Result<Certificate, Unsuccessful> {
    let (start, points) = solve(&text.pencil(), chart_seed, solver_seed, exec).map_err(Unsuccessful::PathFailure)?;
    certified_type(&text.enclosure(), &start.chart, &points, &CertifyOptions::default(), exec)
}

/// Outcome of certification with retries.
#[derive(Clone, Debug)]
pub struct Certified {
    pub result: Result<Certificate, Unsuccessful>,
    /// Attempts made, 1 to [`CERTIFY_ATTEMPTS`].
    pub attempts: u64,
    pub solver_seed: u64,
}

/// Certifies with solver seeds `seed, seed + 1, …` until one succeeds.
pub fn certify<E: Executor>(text: &PencilText, seed: u64, exec: &E) -> Certified {
    let mut last = None;
    for k in 0..CERTIFY_ATTEMPTS {
        let solver_seed = seed.wrapping_add(k);
        let result = certify_once(text, seed, solver_seed, exec);
        if result.is_ok() {
            return Certified { result, attempts: k + 1, solver_seed };
        }
        last = Some(Certified { result, attempts: k + 1, solver_seed });
    }
    last.expect("at least one attempt")
}
