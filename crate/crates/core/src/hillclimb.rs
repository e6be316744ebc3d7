//! Directional hill-climbing in pencil space towards a prescribed type.
//!
//! One step in the type lattice changes (ρ, σ) by ±(2, 2) (a conjugate pair
//! with η = 1 becomes a pair of real semidefinite nodes, or back) or ±(2, 0)
//! (the same with η = 0 and indefinite nodes). The climber keeps a current
//! pencil with all 64 solutions, samples Gaussian neighbours of
//! (A1, A2, A3), tracks the solutions to each of them, and moves to the
//! neighbour with the smallest objective
//! `(lattice distance to target, secondary)`. The secondary quantity pushes
//! the nodes that have to collide towards each other: the smallest
//! imaginary part among the relevant nonreal nodes (upwards) or the smallest
//! distance between relevant real nodes (downwards).

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use alloc::vec::Vec;
use core::cmp::Ordering;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::certify::{certified_type, Certificate, CertifyOptions, PencilEnclosure};
use crate::classify::{classify_endpoints, comb_type, ClassifyTolerances, CombType, NodeSolution, NodeTag};
use crate::exec::{Executor, Sequential};
use crate::linalg::SymMat5;
use crate::pencil::{ChartPoint, Pencil};
use crate::polysys::Chart;
use crate::tracker::{endpoints_of, random_gamma, track_between, PathResult, StartSolutions, TrackOptions};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// (+2, +2)
    UpDiagonal,
    /// (+2, 0)
    UpHorizontal,
    /// (−2, −2)
    DownDiagonal,
    /// (−2, 0)
    DownHorizontal,
}

impl Direction {
    pub const ALL: [Direction; 4] =
        [Direction::UpDiagonal, Direction::UpHorizontal, Direction::DownDiagonal, Direction::DownHorizontal];

    pub fn delta(self) -> (i32, i32) {
        match self {
            Direction::UpDiagonal => (2, 2),
            Direction::UpHorizontal => (2, 0),
            Direction::DownDiagonal => (-2, -2),
            Direction::DownHorizontal => (-2, 0),
        }
    }

    pub fn apply(self, t: CombType) -> Option<CombType> {
        let (dr, ds) = self.delta();
        let r = t.rho as i32 + dr;
        let s = t.sigma as i32 + ds;
        (r >= 0 && s >= 0).then(|| CombType { rho: r as u32, sigma: s as u32 })
    }

    /// The secondary objective this direction drives to zero.
    pub fn secondary(self, nodes: &[NodeSolution]) -> f64 {
        match self {
            Direction::UpDiagonal => mu_values(nodes).0,
            Direction::UpHorizontal => mu_values(nodes).1,
            Direction::DownDiagonal => delta_values(nodes).0,
            Direction::DownHorizontal => delta_values(nodes).1,
        }
    }
}

/// Minimal number of generator steps `±(2,2)`, `±(2,0)` between two types.
pub fn lattice_distance(a: CombType, b: CombType) -> Result<u32, Error> {
    let dr = b.rho as i64 - a.rho as i64;
    let ds = b.sigma as i64 - a.sigma as i64;
    if dr % 2 != 0 || ds % 2 != 0 {
        return Err(Error::OddDifference);
    }
    // Diagonal steps fix σ; horizontal steps make up the rest of ρ.
    Ok(((ds.abs() + (dr - ds).abs()) / 2) as u32)
}

/// The direction to move from `current` towards `target`; diagonal steps
/// first. `None` when they coincide.
pub fn choose_direction(current: CombType, target: CombType) -> Option<Direction> {
    let dr = target.rho as i64 - current.rho as i64;
    let ds = target.sigma as i64 - current.sigma as i64;
    match (ds.signum(), (dr - ds).signum()) {
        (1, _) => Some(Direction::UpDiagonal),
        (-1, _) => Some(Direction::DownDiagonal),
        (0, 1) => Some(Direction::UpHorizontal),
        (0, -1) => Some(Direction::DownHorizontal),
        _ => None,
    }
}

/// Every direction whose step brings `current` closer to `target`,
/// diagonal before horizontal.
pub fn useful_directions(current: CombType, target: CombType) -> Vec<Direction> {
    let Ok(d) = lattice_distance(current, target) else { return Vec::new() };
    Direction::ALL
        .into_iter()
        .filter(|dir| dir.apply(current).is_some_and(|n| lattice_distance(n, target).is_ok_and(|e| e + 1 == d)))
        .collect()
}

/// `(μ+, μ−)`: smallest relative imaginary part over nonreal nodes with
/// η = 1 and η = 0 respectively; `∞` when there are none.
pub fn mu_values(nodes: &[NodeSolution]) -> (f64, f64) {
    let min_of = |tag| nodes.iter().filter(|n| n.tag == tag).map(|n| n.imag_norm).fold(f64::INFINITY, f64::min);
    (min_of(NodeTag::NonrealEta1), min_of(NodeTag::NonrealEta0))
}

/// `(δ+, δ−)`: smallest distance between two real semidefinite
/// (resp. indefinite) nodes, measured between unit-norm matrices up to sign;
/// `∞` with fewer than two such nodes.
pub fn delta_values(nodes: &[NodeSolution]) -> (f64, f64) {
    let min_of = |tag| {
        let mats: Vec<SymMat5<f64>> = nodes.iter().filter(|n| n.tag == tag).map(|n| n.unit_real_matrix()).collect();
        let mut best = f64::INFINITY;
        for i in 0..mats.len() {
            for j in (i + 1)..mats.len() {
                let d = (mats[i] - mats[j]).frobenius().min((mats[i] + mats[j]).frobenius());
                best = best.min(d);
            }
        }
        best
    };
    (min_of(NodeTag::RealSemidefinite), min_of(NodeTag::RealIndefinite))
}

/// Lexicographic objective; smaller is better.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Objective {
    pub distance: u32,
    pub secondary: f64,
}

impl Objective {
    pub fn better_than(&self, other: &Objective) -> bool {
        self.cmp_total(other) == Ordering::Less
    }

    pub fn cmp_total(&self, other: &Objective) -> Ordering {
        self.distance.cmp(&other.distance).then(self.secondary.total_cmp(&other.secondary))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClimbOptions {
    /// Neighbours sampled per iteration.
    pub neighbours: usize,
    /// Initial step as a fraction of `‖(A1, A2, A3)‖`.
    pub initial_step: f64,
    pub shrink: f64,
    pub step_floor: f64,
    /// Consecutive rounds without progress before a restart.
    pub stagnation_limit: usize,
    pub max_restarts: usize,
    pub max_iterations: usize,
    /// Neighbours whose path Jacobians are worse conditioned are discarded.
    pub condition_guard: f64,
    pub seed: u64,
}

impl Default for ClimbOptions {
    fn default() -> Self {
        ClimbOptions {
            neighbours: 32,
            initial_step: 0.05,
            shrink: 0.5,
            step_floor: 1e-8,
            stagnation_limit: 6,
            max_restarts: 10,
            max_iterations: 200,
            condition_guard: 1e12,
            seed: 0,
        }
    }
}

/// One line of the climb transcript: the best neighbour of an iteration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClimbRecord {
    pub restart: usize,
    pub iteration: usize,
    pub step: f64,
    pub candidate: Option<CombType>,
    pub objective: Option<Objective>,
    pub accepted: bool,
}

#[derive(Clone, Debug)]
pub struct ClimbOutcome {
    pub reached: bool,
    /// Final pencil (the certified one on success).
    pub pencil: Pencil,
    pub comb_type: CombType,
    pub certificate: Option<Certificate>,
    pub transcript: Vec<ClimbRecord>,
    pub iterations: usize,
    pub restarts: usize,
}

/// A pencil with its solutions and heuristic type.
#[derive(Clone, Debug)]
pub struct Sample {
    pub pencil: Pencil,
    pub points: Vec<ChartPoint>,
    pub nodes: Vec<NodeSolution>,
    pub comb_type: CombType,
}

impl Sample {
    /// Classifies already tracked endpoints. `condition_guard` rejects
    /// near-singular paths.
    pub fn from_results(
        pencil: Pencil,
        results: &[PathResult],
        chart: &Chart,
        condition_guard: f64,
    ) -> Result<Sample, Error> {
        let points = endpoints_of(results)?;
        if results.iter().any(|r| !(r.condition <= condition_guard)) {
            return Err(Error::Nongeneric("ill-conditioned endpoint"));
        }
        let classified = classify_endpoints(&pencil, &points, &chart.kernel(), &ClassifyTolerances::default())?;
        let comb_type = comb_type(&classified.nodes)?;
        Ok(Sample { pencil, points, nodes: classified.nodes, comb_type })
    }

    pub fn objective(&self, target: CombType, dir: Direction) -> Objective {
        Objective {
            distance: lattice_distance(self.comb_type, target).unwrap_or(u32::MAX),
            secondary: dir.secondary(&self.nodes),
        }
    }
}

/// Norm of the 45 free parameters (full Frobenius norm of A1, A2, A3).
pub fn parameter_norm(p: &Pencil) -> f64 {
    p.mats()[1..].iter().map(|m| m.frobenius().powi(2)).sum::<f64>().sqrt()
}

/// `p + step · N / ‖N‖` with `N` a Gaussian symmetric perturbation of
/// (A1, A2, A3); `A0` is kept.
pub fn perturb<R: rand::Rng + ?Sized>(p: &Pencil, step: f64, rng: &mut R) -> Pencil {
    let mut n = [SymMat5::<f64>::zeros(); 3];
    for m in n.iter_mut() {
        for x in m.upper.iter_mut() {
            *x = StandardNormal.sample(rng);
        }
    }
    let norm = n.iter().map(|m| m.frobenius().powi(2)).sum::<f64>().sqrt();
    let k = if norm > 0.0 { step / norm } else { 0.0 };
    let a = p.mats();
    Pencil::new_unchecked([a[0], a[1] + n[0].scale(k), a[2] + n[1].scale(k), a[3] + n[2].scale(k)])
}

/// Tracks the solutions of `from` to `to`; both pencils are scaled by the
/// same power of two so the segment stays short.
pub fn move_solutions<E: Executor>(
    from: &Sample,
    to: Pencil,
    chart: &Chart,
    track: &TrackOptions,
    gamma: num_complex::Complex64,
    guard: f64,
    exec: &E,
) -> Result<Sample, Error> {
    let k = from.pencil.binary_scale();
    let a = from.pencil.scaled(k).lift();
    let b = to.scaled(k).lift();
    let o = TrackOptions { gamma, ..*track };
    let results = track_between(&a, &from.points, &b, chart, &o, exec);
    Sample::from_results(to, &results, chart, guard)
}

/// Certifies the type of a sample's pencil.
pub fn certify_sample<E: Executor>(s: &Sample, chart: &Chart, exec: &E) -> Option<Certificate> {
    certified_type(&PencilEnclosure::exact(&s.pencil), chart, &s.points, &CertifyOptions::default(), exec).ok()
}

/// Climbs from `start` (already solved) towards `target`.
///
/// Restarts go back to `start` with a fresh random stream. Succeeds only
/// when the reached type is certified.
pub fn climb<E: Executor>(
    start: &Sample,
    target: CombType,
    solutions: &StartSolutions,
    opts: &ClimbOptions,
    track: &TrackOptions,
    exec: &E,
) -> Result<ClimbOutcome, Error> {
    if !target.is_admissible(5) {
        return Err(Error::Inadmissible(target.rho, target.sigma));
    }
    lattice_distance(start.comb_type, target)?;
    let chart = solutions.chart;
    let mut transcript = Vec::new();
    let mut iterations = 0;
    let mut best = start.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0xc11b_0000);

    for restart in 0..=opts.max_restarts {
        let mut cur = start.clone();
        let mut step = opts.initial_step * parameter_norm(&cur.pencil);
        let mut stagnant = 0;
        let mut it = 0;
        let mut failed_cert: Option<CombType> = None;
        loop {
            if cur.comb_type == target && failed_cert != Some(target) {
                if let Some(cert) = certify_sample(&cur, &chart, exec) {
                    if cert.comb_type == target {
                        return Ok(ClimbOutcome {
                            reached: true,
                            pencil: cur.pencil,
                            comb_type: target,
                            certificate: Some(cert),
                            transcript,
                            iterations,
                            restarts: restart,
                        });
                    }
                }
                failed_cert = Some(target);
            }
            if it >= opts.max_iterations || step < opts.step_floor || stagnant >= opts.stagnation_limit {
                break;
            }
            it += 1;
            iterations += 1;

            // A direction whose secondary is +∞ here gives no signal; use
            // another useful one when there is.
            let useful = useful_directions(cur.comb_type, target);
            let dir = useful
                .iter()
                .copied()
                .find(|d| d.secondary(&cur.nodes).is_finite())
                .or(useful.first().copied())
                .unwrap_or(Direction::UpDiagonal);
            let here = cur.objective(target, dir);
            let proposals: Vec<(Pencil, num_complex::Complex64)> =
                (0..opts.neighbours).map(|_| (perturb(&cur.pencil, step, &mut rng), random_gamma(&mut rng))).collect();
            let evaluated = exec.map_indexed(proposals.len(), |i| {
                let (p, g) = proposals[i];
                move_solutions(&cur, p, &chart, track, g, opts.condition_guard, &Sequential).ok()
            });
            let best_neighbour = evaluated
                .into_iter()
                .flatten()
                .map(|s| {
                    let o = s.objective(target, dir);
                    (s, o)
                })
                .min_by(|a, b| a.1.cmp_total(&b.1));
            // After a failed certification at the target, any neighbour of
            // the same type is worth a new attempt.
            let accepted = match &best_neighbour {
                Some((s, o)) => {
                    o.better_than(&here) || (failed_cert.is_some() && s.comb_type == target)
                }
                None => false,
            };
            transcript.push(ClimbRecord {
                restart,
                iteration: it,
                step,
                candidate: best_neighbour.as_ref().map(|(s, _)| s.comb_type),
                objective: best_neighbour.as_ref().map(|(_, o)| *o),
                accepted,
            });
            if accepted {
                cur = best_neighbour.unwrap().0;
                failed_cert = None;
                stagnant = 0;
            } else {
                // With no relevant node pair anywhere the secondary carries no
                // scale information, and smaller steps only make a pair less
                // likely to appear: keep ε, move sideways within the type,
                // but still count the round.
                let blind = here.secondary == f64::INFINITY
                    && best_neighbour.as_ref().is_none_or(|(_, o)| o.secondary == f64::INFINITY);
                if !blind {
                    step *= opts.shrink;
                } else if let Some((s, _)) = best_neighbour.filter(|(s, _)| s.comb_type == cur.comb_type) {
                    cur = s;
                }
                stagnant += 1;
            }
            let d_cur = lattice_distance(cur.comb_type, target).unwrap_or(u32::MAX);
            if d_cur < lattice_distance(best.comb_type, target).unwrap_or(u32::MAX) {
                best = cur.clone();
            }
        }
        if restart == opts.max_restarts {
            break;
        }
    }
    Ok(ClimbOutcome {
        reached: false,
        pencil: best.pencil,
        comb_type: best.comb_type,
        certificate: None,
        transcript,
        iterations,
        restarts: opts.max_restarts,
    })
}
