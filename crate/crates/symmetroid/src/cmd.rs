//! The commands behind the binary. Each returns its report as text, or a
//! [`CliError`] carrying the process exit code.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use symmetroid_core::certify::CertifyOptions;
use symmetroid_core::classify::{classify_endpoints, pd_witness_search, WitnessBudget};
use symmetroid_core::families::{prismatic_orbits, tetrahedral_orbits, OrbitReport};
use symmetroid_core::hillclimb::{climb, ClimbOptions, ClimbRecord, Sample};
use symmetroid_core::linalg::sym_eigenvalues;
use symmetroid_core::pencil::ChartPoint;
use symmetroid_core::tracker::{endpoints_of, solve_nodes};
use symmetroid_core::{
    certified_type, comb_type, Certificate, CombType, Error, NodeSolution, Pencil, TrackOptions, Unsuccessful,
};

use crate::certificate::{certificate_text, digest};
use crate::families::Family;
use crate::session::{self, start_solutions, RunConfig};
use crate::text::{PencilText, ParseError};
use crate::witness::{verify_catalog, Catalog, WitnessRecord};

/// Process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u8)]
pub enum Exit {
    Ok = 0,
    /// Output could not be written.
    Io = 1,
    /// Unreadable or malformed input, or bad arguments.
    Parse = 2,
    /// The solver could not run (dependent pencil, start system failure).
    Solve = 3,
    /// Failed or colliding paths, duplicate or ambiguous solutions.
    Nongeneric = 4,
    Certification = 5,
    Inadmissible = 6,
}

#[derive(Debug, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub exit: Exit,
    pub message: String,
}

impl CliError {
    pub fn new(exit: Exit, message: impl Into<String>) -> Self {
        CliError { exit, message: message.into() }
    }

    pub fn code(&self) -> u8 {
        self.exit as u8
    }
}

fn solver_error(e: Error) -> CliError {
    let exit = match e {
        Error::DependentPencil | Error::DegenerateChart | Error::Convergence(_) => Exit::Solve,
        Error::Inadmissible(..) => Exit::Inadmissible,
        _ => Exit::Nongeneric,
    };
    CliError::new(exit, e.to_string())
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::new(Exit::Io, format!("{}: {e}", path.display()))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    }
    std::fs::write(path, text).map_err(|e| io_error(path, e))
}

pub fn read_pencil(path: &Path) -> Result<PencilText, CliError> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| CliError::new(Exit::Parse, format!("{}: {e}", path.display())))?;
    PencilText::parse(&src).map_err(|e: ParseError| CliError::new(Exit::Parse, format!("{}: {e}", path.display())))
}

fn checked(text: &PencilText) -> Result<Pencil, CliError> {
    Pencil::new(*text.pencil().mats()).map_err(solver_error)
}

fn validate(cfg: &RunConfig) -> Result<(), CliError> {
    if cfg.strict && cfg.seed.is_none() {
        return Err(CliError::new(Exit::Parse, "--strict requires --seed"));
    }
    Ok(())
}

fn log(cfg: &RunConfig, msg: impl FnOnce() -> String) {
    if cfg.verbosity > 0 {
        eprintln!("{}", msg());
    }
}

fn coord(z: num_complex::Complex64, real: bool) -> String {
    if real {
        format!("{:+.9e}", z.re)
    } else {
        format!("{:+.9e}{:+.9e}i", z.re, z.im)
    }
}

fn point_text(p: &ChartPoint, real: bool) -> String {
    p.iter().map(|&z| coord(z, real)).collect::<Vec<_>>().join(" ")
}

fn pd_text(pencil: &Pencil) -> String {
    match pd_witness_search(pencil, &WitnessBudget::default()) {
        Some(p) => format!("pd-witness {}", p.map(|x| format!("{x:+.9e}")).join(" ")),
        None => "pd-witness none found (sigma is the semidefinite count)".into(),
    }
}

fn node_lines(out: &mut String, nodes: &[NodeSolution]) {
    for (k, n) in nodes.iter().enumerate() {
        writeln!(out, "node {k:2} {:<17} {}", n.tag.name(), point_text(&n.point, n.tag.is_real())).unwrap();
    }
}

/// Heuristic type of a pencil file, escalating to certification when the
/// determinant threshold is inconclusive.
pub fn cmd_solve(path: &Path, cfg: &RunConfig) -> Result<String, CliError> {
    validate(cfg)?;
    let text = read_pencil(path)?;
    let pencil = checked(&text)?;
    let pool = cfg.pool();
    let seed = cfg.seed();
    let start = start_solutions(seed, &pool).map_err(|e| CliError::new(Exit::Solve, format!("start system: {e}")))?;
    let results = solve_nodes(&pencil, &start, &TrackOptions::default(), seed, &pool).map_err(solver_error)?;
    let points = endpoints_of(&results).map_err(solver_error)?;
    log(cfg, || "solved 64 paths".into());

    let mut out = String::new();
    writeln!(out, "symmetroid solve report").unwrap();
    writeln!(out, "source {}", path.display()).unwrap();
    writeln!(out, "seed {seed}").unwrap();
    writeln!(out, "solutions {}", points.len()).unwrap();
    let classified = classify_endpoints(&pencil, &points, &start.chart.kernel(), &cfg.tolerances);
    let heuristic = classified.as_ref().map_err(Clone::clone).and_then(|c| comb_type(&c.nodes).map(|t| (c, t)));
    match heuristic {
        Ok((c, t)) => {
            writeln!(out, "nodes {}", c.nodes.len()).unwrap();
            writeln!(out, "type {t} heuristic").unwrap();
            writeln!(out, "{}", pd_text(&pencil)).unwrap();
            node_lines(&mut out, &c.nodes);
        }
        Err(e @ (Error::AmbiguousNode | Error::NodeCount(_))) => {
            log(cfg, || format!("{e}; certifying"));
            let cert = certified_type(&text.enclosure(), &start.chart, &points, &CertifyOptions::default(), &pool)
                .map_err(|u| CliError::new(Exit::Nongeneric, format!("{e}, and certification failed: {u}")))?;
            writeln!(out, "nodes 20").unwrap();
            writeln!(out, "type {} certified ({e})", cert.comb_type).unwrap();
            writeln!(out, "{}", pd_text(&pencil)).unwrap();
            for (k, b) in cert.nodes().enumerate() {
                let tag = match (b.real, b.semidefinite) {
                    (false, _) => "nonreal",
                    (true, Some(symmetroid_core::certify::Semidefiniteness::Indefinite)) => "real_indefinite",
                    (true, _) => "real_semidefinite",
                };
                let mid = b.enclosure.map(|c| c.mid());
                writeln!(out, "node {k:2} {tag:<17} {}", point_text(&mid, b.real)).unwrap();
            }
        }
        Err(e) => return Err(solver_error(e)),
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct CertifyReport {
    pub comb_type: CombType,
    pub certificate: Certificate,
    pub certificate_path: PathBuf,
    pub attempts: u64,
    pub text: String,
}

fn stem(path: &Path) -> String {
    path.file_stem().and_then(|s| s.to_str()).unwrap_or("pencil").to_string()
}

/// Certified type of a pencil file; writes `<out>/<stem>.cert`.
pub fn cmd_certify(path: &Path, cfg: &RunConfig) -> Result<CertifyReport, CliError> {
    validate(cfg)?;
    let text = read_pencil(path)?;
    checked(&text)?;
    let pool = cfg.pool();
    let seed = cfg.seed();
    let run = session::certify(&text, seed, &pool);
    let cert = run.result.map_err(|u: Unsuccessful| {
        CliError::new(Exit::Certification, format!("Unsuccessful after {} attempts: {u}", run.attempts))
    })?;
    let body = certificate_text(&cert, &path.display().to_string(), seed, run.solver_seed);
    let certificate_path = cfg.out.join(format!("{}.cert", stem(path)));
    write_file(&certificate_path, &body)?;
    let mut out = String::new();
    writeln!(out, "type {}", cert.comb_type).unwrap();
    writeln!(out, "certificate {} sha256 {}", certificate_path.display(), digest(body.as_bytes())).unwrap();
    writeln!(out, "attempts {}", run.attempts).unwrap();
    Ok(CertifyReport { comb_type: cert.comb_type, certificate: cert, certificate_path, attempts: run.attempts, text: out })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClimbStart {
    File(PathBuf),
    /// A seeded random pencil with `A0 = Id`.
    Random(u64),
}

#[derive(Clone, Debug)]
pub struct ClimbReport {
    pub comb_type: CombType,
    pub witness_path: PathBuf,
    pub transcript_path: PathBuf,
    pub iterations: usize,
    pub restarts: usize,
    pub text: String,
}

fn transcript_text(seed: u64, start: CombType, target: CombType, records: &[ClimbRecord]) -> String {
    let mut out = String::new();
    writeln!(out, "# climb seed {seed} start {start} target {target}").unwrap();
    writeln!(out, "# phi = (lattice distance, secondary), minimized lexicographically").unwrap();
    for r in records {
        let cand = r.candidate.map_or("-".to_string(), |t| t.to_string());
        let phi = r.objective.map_or("-".to_string(), |o| format!("({},{:e})", o.distance, o.secondary));
        writeln!(
            out,
            "restart={} iteration={} step={:e} candidate={cand} phi={phi} accepted={}",
            r.restart,
            r.iteration,
            r.step,
            if r.accepted { "yes" } else { "no" }
        )
        .unwrap();
    }
    out
}

fn now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

/// Climbs to `target` and writes `type_RR_SS.witness`, its certificate and
/// the transcript into the output directory.
pub fn cmd_climb(start: &ClimbStart, target: CombType, opts: &ClimbOptions, cfg: &RunConfig) -> Result<ClimbReport, CliError> {
    validate(cfg)?;
    if !target.is_admissible(5) {
        return Err(CliError::new(Exit::Inadmissible, format!("target {target} is not admissible")));
    }
    let (text, pencil) = match start {
        ClimbStart::File(path) => {
            let t = read_pencil(path)?;
            let p = checked(&t)?;
            (Some(t), p)
        }
        ClimbStart::Random(s) => (None, Pencil::random_normalized(*s)),
    };
    let pool = cfg.pool();
    let seed = cfg.seed();
    let solutions =
        start_solutions(seed, &pool).map_err(|e| CliError::new(Exit::Solve, format!("start system: {e}")))?;
    let results = solve_nodes(&pencil, &solutions, &TrackOptions::default(), seed, &pool).map_err(solver_error)?;
    let sample = Sample::from_results(pencil, &results, &solutions.chart, opts.condition_guard).map_err(solver_error)?;
    log(cfg, || format!("start type {}", sample.comb_type));
    let opts = ClimbOptions { seed, ..*opts };
    let outcome = climb(&sample, target, &solutions, &opts, &TrackOptions::default(), &pool).map_err(solver_error)?;

    let transcript_path = cfg.out.join(format!("climb_{:02}_{:02}.transcript", target.rho, target.sigma));
    write_file(&transcript_path, &transcript_text(seed, sample.comb_type, target, &outcome.transcript))?;
    if !outcome.reached {
        return Err(CliError::new(
            Exit::Certification,
            format!(
                "no certified witness for {target} after {} iterations and {} restarts; last type {}",
                outcome.iterations, outcome.restarts, outcome.comb_type
            ),
        ));
    }
    // An unchanged start keeps its original (possibly exact) text.
    let witness_text = match text {
        Some(t) if outcome.pencil == sample.pencil => t,
        _ => PencilText::from_pencil(&outcome.pencil),
    };
    // The stored text must certify on its own, with the recorded seeds.
    let run = session::certify(&witness_text, seed, &pool);
    let cert = match run.result {
        Ok(c) if c.comb_type == target => c,
        Ok(c) => {
            return Err(CliError::new(Exit::Certification, format!("stored witness certifies as {}", c.comb_type)))
        }
        Err(u) => return Err(CliError::new(Exit::Certification, format!("stored witness: {u}"))),
    };
    let name = WitnessRecord::file_name(target);
    let body = certificate_text(&cert, &name, seed, run.solver_seed);
    write_file(&cfg.out.join(name.replace(".witness", ".cert")), &body)?;
    let record = WitnessRecord {
        comb_type: target,
        chart_seed: seed,
        solver_seed: run.solver_seed,
        certificate_digest: digest(body.as_bytes()),
        version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp: now(),
        pencil: witness_text,
    };
    let witness_path = cfg.out.join(&name);
    write_file(&witness_path, &record.to_text())?;
    let mut out = String::new();
    writeln!(out, "start {} target {target}", sample.comb_type).unwrap();
    writeln!(out, "reached {target} after {} iterations, {} restarts", outcome.iterations, outcome.restarts).unwrap();
    writeln!(out, "witness {}", witness_path.display()).unwrap();
    writeln!(out, "transcript {}", transcript_path.display()).unwrap();
    Ok(ClimbReport {
        comb_type: target,
        witness_path,
        transcript_path,
        iterations: outcome.iterations,
        restarts: outcome.restarts,
        text: out,
    })
}

#[derive(Clone, Debug)]
pub struct FamilyReport {
    pub pencil: PencilText,
    pub comb_type: Option<CombType>,
    pub orbits: Option<OrbitReport>,
    pub pd_witness: Option<bool>,
    /// Orbit and witness summary, when requested.
    pub text: String,
}

fn orbit_lines(out: &mut String, r: &OrbitReport) {
    let mut rows: Vec<(usize, &str)> = r.orbits.iter().map(|o| (o.members.len(), o.tag.name())).collect();
    rows.sort();
    for (size, tag) in rows {
        writeln!(out, "orbit {size:2} {tag}").unwrap();
    }
}

/// Exact family pencil; with `report`, also its heuristic type, orbits and
/// PD-witness status.
pub fn cmd_family(family: &Family, report: bool, cfg: &RunConfig) -> Result<FamilyReport, CliError> {
    validate(cfg)?;
    let pencil = family.text();
    let mut r = FamilyReport { pencil, comb_type: None, orbits: None, pd_witness: None, text: String::new() };
    if !report {
        return Ok(r);
    }
    let p = checked(&r.pencil)?;
    let pool = cfg.pool();
    let seed = cfg.seed();
    let (start, points) = session::solve(&p, seed, seed, &pool).map_err(solver_error)?;
    let c = classify_endpoints(&p, &points, &start.chart.kernel(), &cfg.tolerances).map_err(solver_error)?;
    let t = comb_type(&c.nodes).map_err(solver_error)?;
    let orbits = match family {
        Family::Tetrahedral { .. } => tetrahedral_orbits(&c.nodes),
        Family::Prismatic { .. } => prismatic_orbits(&c.nodes),
    }
    .map_err(solver_error)?;
    let pd = pd_witness_search(&p, &WitnessBudget::default()).is_some();
    writeln!(r.text, "family {}", family.name()).unwrap();
    writeln!(r.text, "type {t} heuristic").unwrap();
    writeln!(r.text, "pd-witness {}", if pd { "yes" } else { "none found" }).unwrap();
    orbit_lines(&mut r.text, &orbits);
    r.comb_type = Some(t);
    r.orbits = Some(orbits);
    r.pd_witness = Some(pd);
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CatalogAction {
    List,
    Verify,
}

pub fn cmd_catalog(action: CatalogAction, dir: &Path) -> Result<String, CliError> {
    let catalog = Catalog::load_dir(dir).map_err(|e| CliError::new(Exit::Parse, e.to_string()))?;
    Ok(match action {
        CatalogAction::List => {
            let mut out = String::new();
            let missing = catalog.missing();
            writeln!(out, "catalog: {} present, {} missing", catalog.len(), missing.len()).unwrap();
            for t in symmetroid_core::admissible_types(5) {
                match catalog.get(t) {
                    Some(_) => writeln!(out, "{t} {}", WitnessRecord::file_name(t)).unwrap(),
                    None => writeln!(out, "{t} missing").unwrap(),
                }
            }
            out
        }
        CatalogAction::Verify => verify_catalog(&catalog).to_string(),
    })
}

/// CSV samples of `D` and the least eigenvalue of `A(p)` on the lattice
/// `{lo + k·(hi − lo)/(n − 1)}⁴`.
pub fn cmd_grid(path: &Path, resolution: usize, lo: f64, hi: f64) -> Result<String, CliError> {
    if resolution < 2 || !(lo < hi) {
        return Err(CliError::new(Exit::Parse, "grid needs resolution >= 2 and lo < hi"));
    }
    let pencil = read_pencil(path)?.pencil();
    let axis: Vec<f64> = (0..resolution).map(|k| lo + (hi - lo) * k as f64 / (resolution - 1) as f64).collect();
    let mut out = String::from("t,x1,x2,x3,D,min_eigenvalue\n");
    for &t in &axis {
        for &x1 in &axis {
            for &x2 in &axis {
                for &x3 in &axis {
                    let m = pencil.eval_real(&[t, x1, x2, x3]);
                    let ev = sym_eigenvalues(&m).map_or(f64::NAN, |e| e[4]);
                    writeln!(out, "{t},{x1},{x2},{x3},{},{ev}", m.det()).unwrap();
                }
            }
        }
    }
    Ok(out)
}
