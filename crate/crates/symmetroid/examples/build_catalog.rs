//! Populates a witness catalog by chained climbs.
//!
//! Seeds the catalog with the certified family pencils and with seeded
//! Gaussian pencils (these reach large ρ with σ = 0), then repeatedly
//! climbs from the nearest catalogued type to each missing one. A climb
//! that stops short still contributes its final pencil when that pencil
//! certifies as a missing type. The catalog is saved after every new
//! witness, so the run can be stopped and resumed.
//!
//! ```text
//! cargo run --release -p symmetroid --example build_catalog -- [DIR] [ROUNDS] [FIRST-SEED] [ITERATIONS] [SAMPLES]
//! ```

use std::collections::HashSet;
use std::path::PathBuf;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use symmetroid::certificate::{certificate_text, digest};
use symmetroid::families::{Family, PRISMATIC_TABLE};
use symmetroid::session::{self, DEFAULT_SEED};
use symmetroid::text::parse_rational;
use symmetroid::{Catalog, PencilText, Pool, WitnessRecord};
use symmetroid_core::hillclimb::{climb, lattice_distance, ClimbOptions, Sample};
use symmetroid_core::tracker::solve_nodes;
use symmetroid_core::{CombType, Error, Pencil, TrackOptions};

/// Certifies `text` and adds it when its type is admissible and missing.
fn offer(catalog: &mut Catalog, text: PencilText, seed: u64, source: &str, pool: &Pool) -> Option<CombType> {
    let run = session::certify(&text, seed, pool);
    let cert = run.result.ok()?;
    let t = cert.comb_type;
    if !t.is_admissible(5) || catalog.get(t).is_some() {
        return None;
    }
    let body = certificate_text(&cert, source, seed, run.solver_seed);
    catalog
        .insert(WitnessRecord {
            comb_type: t,
            chart_seed: seed,
            solver_seed: run.solver_seed,
            certificate_digest: digest(body.as_bytes()),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
            pencil: text,
        })
        .ok()?;
    Some(t)
}

fn seed_catalog(catalog: &mut Catalog, pool: &Pool) {
    let q = |s: &str| parse_rational(s).unwrap();
    let mut families: Vec<Family> =
        PRISMATIC_TABLE.iter().map(|(a, b, _)| Family::Prismatic { a: q(a), b: q(b) }).collect();
    families.extend(["60", "24", "6", "-1"].map(|t| Family::Tetrahedral { t: q(t) }));
    for f in families {
        if let Some(t) = offer(catalog, f.text(), DEFAULT_SEED, &f.name(), pool) {
            println!("{t} from {}", f.name());
        }
    }
}

/// All 60 entries independent standard normals.
fn gaussian_pencil(k: u64) -> Pencil {
    let mut rng = ChaCha8Rng::seed_from_u64(k);
    Pencil::from_coordinates(&core::array::from_fn(|_| StandardNormal.sample(&mut rng)))
}

/// One climb; returns the final pencil and whether it reached `target`.
fn attempt(from: &PencilText, target: CombType, opts: &ClimbOptions, pool: &Pool) -> Result<(PencilText, bool), Error> {
    let seed = opts.seed;
    let start = session::start_solutions(seed, pool)?;
    let pencil = from.pencil();
    let results = solve_nodes(&pencil, &start, &TrackOptions::default(), seed, pool)?;
    let sample = Sample::from_results(pencil, &results, &start.chart, opts.condition_guard)?;
    let out = climb(&sample, target, &start, opts, &TrackOptions::default(), pool)?;
    Ok((PencilText::from_pencil(&out.pencil), out.reached))
}

fn main() {
    let mut args = std::env::args().skip(1);
    let dir = PathBuf::from(args.next().unwrap_or_else(|| "catalog".into()));
    let rounds: u64 = args.next().map_or(6, |s| s.parse().expect("ROUNDS"));
    let first: u64 = args.next().map_or(0, |s| s.parse().expect("FIRST-SEED"));
    let iterations: usize = args.next().map_or(12, |s| s.parse().expect("ITERATIONS"));
    let samples: u64 = args.next().map_or(0, |s| s.parse().expect("SAMPLES"));
    let pool = Pool::new(0);
    let mut catalog = Catalog::load_dir(&dir).expect("catalog directory");
    if catalog.is_empty() {
        seed_catalog(&mut catalog, &pool);
        catalog.save_dir(&dir).unwrap();
    }
    for k in 0..samples {
        let text = PencilText::from_pencil(&gaussian_pencil(k));
        if let Some(t) = offer(&mut catalog, text, DEFAULT_SEED, &format!("gaussian pencil {k}"), &pool) {
            catalog.save_dir(&dir).unwrap();
            println!("{t} from gaussian pencil {k}");
        }
    }
    // Small budgets per attempt; a stuck climb is retried from another
    // neighbour or seed in a later round. A long stagnation limit lets blind
    // climbs wander within their type.
    let budget = ClimbOptions { max_restarts: 1, max_iterations: iterations, stagnation_limit: 20, ..ClimbOptions::default() };
    let mut tried = HashSet::new();
    for round in first..first + rounds {
        let mut progress = true;
        while progress {
            progress = false;
            // Missing types closest to the catalog first.
            let mut todo: Vec<(u32, CombType, CombType)> = catalog
                .missing()
                .into_iter()
                .filter_map(|m| {
                    let mut near: Vec<(u32, CombType)> =
                        catalog.iter().map(|w| (lattice_distance(w.comb_type, m).unwrap(), w.comb_type)).collect();
                    near.sort();
                    let d = near.first()?.0;
                    let ties: Vec<CombType> = near.iter().filter(|n| n.0 == d).map(|n| n.1).collect();
                    Some((d, m, ties[round as usize % ties.len()]))
                })
                .collect();
            todo.sort();
            for (dist, target, from) in todo {
                if catalog.get(target).is_some() || !tried.insert((target, from, round)) {
                    continue;
                }
                let clock = Instant::now();
                let start = catalog.get(from).unwrap().pencil.clone();
                let opts = ClimbOptions { seed: round, ..budget };
                let what = format!("{target} from {from} (distance {dist}, seed {round})");
                match attempt(&start, target, &opts, &pool) {
                    Ok((text, reached)) => match offer(&mut catalog, text, round, &format!("climb to {target}"), &pool) {
                        Some(t) => {
                            catalog.save_dir(&dir).unwrap();
                            let how = if reached { "reached".to_string() } else { format!("stopped at {t}, kept") };
                            println!("{what}: {how} in {:.0}s", clock.elapsed().as_secs_f64());
                            progress = true;
                        }
                        None => println!("{what}: no new type in {:.0}s", clock.elapsed().as_secs_f64()),
                    },
                    Err(e) => println!("{what}: {e}"),
                }
            }
        }
        if catalog.missing().is_empty() {
            break;
        }
    }
    println!("{} of 65 types, missing {:?}", catalog.len(), catalog.missing());
}
