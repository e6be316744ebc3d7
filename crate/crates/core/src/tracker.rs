//! Homotopy continuation for the node system.
//!
//! Solving happens in two stages. A total-degree homotopy from
//! `y_i^4 = r_i` solves the node system of a random complex pencil once;
//! every real target is then reached by a gamma-twisted straight-line
//! parameter homotopy from that pencil. Paths are followed from `τ = 1` to
//! `τ = 0` with a Runge–Kutta predictor and Newton corrector.

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::exec::Executor;
use crate::linalg::{condition4, Lu4, SymMat5};
use crate::pencil::{ChartPoint, Pencil};
use crate::polysys::{node_residual_jacobian, node_residual_jacobian_param, Chart};
use crate::Error;

type C = Complex64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrackOptions {
    pub initial_step: f64,
    pub min_step: f64,
    pub max_step: f64,
    /// Relative Newton update size accepted as converged.
    pub corrector_tol: f64,
    pub max_newton_iters: usize,
    pub max_steps: usize,
    pub divergence_norm: f64,
    pub gamma: C,
}

impl Default for TrackOptions {
    fn default() -> Self {
        TrackOptions {
            initial_step: 0.05,
            min_step: 1e-10,
            max_step: 0.1,
            corrector_tol: 1e-9,
            max_newton_iters: 3,
            max_steps: 20_000,
            divergence_norm: 1e8,
            gamma: C::from_polar(1.0, 2.0),
        }
    }
}

impl TrackOptions {
    pub fn validate(&self) -> bool {
        0.0 < self.min_step
            && self.min_step <= self.initial_step
            && self.initial_step <= self.max_step
            && self.max_step <= 1.0
            && self.corrector_tol > 0.0
            && (self.gamma.norm() - 1.0).abs() < 1e-12
    }

    /// Tighter step bounds used when re-tracking failed or colliding paths.
    pub fn tightened(&self) -> Self {
        TrackOptions {
            initial_step: (self.initial_step / 8.0).max(self.min_step / 100.0),
            max_step: self.max_step / 8.0,
            min_step: self.min_step / 100.0,
            max_steps: self.max_steps * 8,
            ..*self
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathStatus {
    Success,
    Diverged,
    StepLimit,
    Singular,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PathResult {
    pub endpoint: ChartPoint,
    pub status: PathStatus,
    pub steps_taken: usize,
    /// Relative size of the last Newton update at `τ = 0`.
    pub final_residual: f64,
    /// ∞-norm condition number of the Jacobian at the endpoint.
    pub condition: f64,
}

/// A homotopy `H(p, τ)` with its derivatives.
pub trait Homotopy: Sync {
    /// `(H, ∂H/∂p, ∂H/∂τ)` at `(p, τ)`.
    fn eval(&self, p: &ChartPoint, tau: f64) -> ([C; 4], [[C; 4]; 4], [C; 4]);
}

fn norm(v: &[C; 4]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

enum Newton {
    Converged { point: ChartPoint, iters: usize, last: f64 },
    Failed,
}

fn newton<H: Homotopy + ?Sized>(h: &H, mut p: ChartPoint, tau: f64, tol: f64, max_iters: usize) -> Newton {
    let mut prev = f64::INFINITY;
    for it in 0..max_iters.max(1) {
        let (res, jac, _) = h.eval(&p, tau);
        let Some(lu) = Lu4::new(&jac) else { return Newton::Failed };
        let dx = lu.solve(&res);
        for k in 0..4 {
            p[k] -= dx[k];
        }
        let step = norm(&dx) / (1.0 + norm(&p));
        if !step.is_finite() {
            return Newton::Failed;
        }
        if step <= tol {
            return Newton::Converged { point: p, iters: it + 1, last: step };
        }
        // Require quadratic-looking contraction; otherwise the predictor
        // may have landed in another path's basin.
        if it > 0 && step > 0.25 * prev {
            return Newton::Failed;
        }
        prev = step;
    }
    Newton::Failed
}

/// `dp/ds` with `s = −τ`, i.e. `J⁻¹ ∂H/∂τ`.
fn tangent<H: Homotopy + ?Sized>(h: &H, p: &ChartPoint, tau: f64) -> Option<ChartPoint> {
    let (_, jac, dtau) = h.eval(p, tau);
    let v = Lu4::new(&jac)?.solve(&dtau);
    v.iter().all(|z| z.re.is_finite() && z.im.is_finite()).then_some(v)
}

/// Classical Runge–Kutta step of the path ODE from `τ` to `τ − dt`.
fn rk4_predict<H: Homotopy + ?Sized>(h: &H, p: &ChartPoint, tau: f64, dt: f64) -> Option<ChartPoint> {
    let shift = |a: &ChartPoint, v: &ChartPoint, s: f64| -> ChartPoint { core::array::from_fn(|k| a[k] + v[k] * s) };
    let k1 = tangent(h, p, tau)?;
    let k2 = tangent(h, &shift(p, &k1, 0.5 * dt), tau - 0.5 * dt)?;
    let k3 = tangent(h, &shift(p, &k2, 0.5 * dt), tau - 0.5 * dt)?;
    let k4 = tangent(h, &shift(p, &k3, dt), tau - dt)?;
    Some(core::array::from_fn(|k| p[k] + (k1[k] + (k2[k] + k3[k]) * 2.0 + k4[k]) * (dt / 6.0)))
}

/// Follows `H(p, τ) = 0` from `τ = 1` to `τ = 0`.
pub fn track_path<H: Homotopy + ?Sized>(h: &H, start: &ChartPoint, opts: &TrackOptions) -> PathResult {
    let fail = |p: ChartPoint, status, steps| PathResult {
        endpoint: p,
        status,
        steps_taken: steps,
        final_residual: f64::INFINITY,
        condition: f64::INFINITY,
    };
    let mut p = *start;
    let mut tau = 1.0f64;
    let mut step = opts.initial_step;
    let mut easy = 0usize;
    let mut steps = 0usize;
    while tau > 0.0 {
        if steps >= opts.max_steps {
            return fail(p, PathStatus::StepLimit, steps);
        }
        steps += 1;
        let dt = step.min(tau);
        let Some(pred) = rk4_predict(h, &p, tau, dt) else { return fail(p, PathStatus::Singular, steps) };
        let next_tau = if dt >= tau { 0.0 } else { tau - dt };
        match newton(h, pred, next_tau, opts.corrector_tol, opts.max_newton_iters) {
            Newton::Converged { point, iters, .. } => {
                p = point;
                tau = next_tau;
                if iters <= 2 {
                    easy += 1;
                    if easy >= 2 {
                        step = (2.0 * step).min(opts.max_step);
                        easy = 0;
                    }
                } else {
                    easy = 0;
                }
                if norm(&p) > opts.divergence_norm {
                    return fail(p, PathStatus::Diverged, steps);
                }
            }
            Newton::Failed => {
                easy = 0;
                step *= 0.5;
                if step < opts.min_step {
                    return fail(p, PathStatus::Singular, steps);
                }
            }
        }
    }
    // Polish at the target.
    let mut last = f64::INFINITY;
    for _ in 0..4 {
        match newton(h, p, 0.0, 1e-15, 1) {
            Newton::Converged { point, last: l, .. } => {
                p = point;
                last = l;
                break;
            }
            Newton::Failed => {
                let (res, jac, _) = h.eval(&p, 0.0);
                let Some(lu) = Lu4::new(&jac) else { return fail(p, PathStatus::Singular, steps) };
                let dx = lu.solve(&res);
                for k in 0..4 {
                    p[k] -= dx[k];
                }
                last = norm(&dx) / (1.0 + norm(&p));
            }
        }
    }
    let (_, jac, _) = h.eval(&p, 0.0);
    let condition = condition4(&jac);
    let status = if !(last < opts.corrector_tol) || !condition.is_finite() || condition > 1e14 {
        PathStatus::Singular
    } else {
        PathStatus::Success
    };
    PathResult { endpoint: p, status, steps_taken: steps, final_residual: last, condition }
}

/// `y_i^4 = r_i` on three of the coordinates, plus the chart.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TotalDegreeStart {
    pub chart: Chart,
    /// Coordinate solved for through the chart.
    pub eliminated: usize,
    /// Coordinates carrying the quartic equations.
    pub free: [usize; 3],
    pub r: [C; 3],
}

impl TotalDegreeStart {
    pub fn eval(&self, p: &ChartPoint) -> ([C; 4], [[C; 4]; 4]) {
        let mut res = [C::new(0.0, 0.0); 4];
        let mut jac = [[C::new(0.0, 0.0); 4]; 4];
        for (i, &k) in self.free.iter().enumerate() {
            let y = p[k];
            let y2 = y * y;
            res[i] = y2 * y2 - self.r[i];
            jac[i][k] = y2 * y * 4.0;
        }
        res[3] = self.chart.eval(p);
        for k in 0..4 {
            jac[3][k] = C::new(self.chart.c[k], 0.0);
        }
        (res, jac)
    }
}

/// The start system and its 64 roots, lifted onto the chart.
pub fn total_degree_start<R: Rng + ?Sized>(
    chart: &Chart,
    rng: &mut R,
) -> Result<(TotalDegreeStart, Vec<ChartPoint>), Error> {
    let c = chart.c;
    let eliminated = (0..4)
        .max_by(|&a, &b| c[a].abs().total_cmp(&c[b].abs()))
        .expect("four coordinates");
    if c[eliminated] == 0.0 {
        return Err(Error::DegenerateChart);
    }
    let mut free = [0usize; 3];
    let mut n = 0;
    for k in 0..4 {
        if k != eliminated {
            free[n] = k;
            n += 1;
        }
    }
    let r: [C; 3] = core::array::from_fn(|_| C::from_polar(1.0, rng.random_range(0.0..core::f64::consts::TAU)));
    let roots: [[C; 4]; 3] = core::array::from_fn(|i| {
        let base = C::from_polar(r[i].norm().powf(0.25), r[i].arg() / 4.0);
        core::array::from_fn(|k| base * C::new(0.0, 1.0).powu(k as u32))
    });
    let mut points = Vec::with_capacity(64);
    for a in 0..4 {
        for b in 0..4 {
            for d in 0..4 {
                let mut p = [C::new(0.0, 0.0); 4];
                p[free[0]] = roots[0][a];
                p[free[1]] = roots[1][b];
                p[free[2]] = roots[2][d];
                let mut s = C::new(c[4], 0.0);
                for &k in &free {
                    s += p[k] * c[k];
                }
                p[eliminated] = -s / c[eliminated];
                points.push(p);
            }
        }
    }
    Ok((TotalDegreeStart { chart: *chart, eliminated, free, r }, points))
}

/// `(1-τ)·F(p) + γ·τ·G(p)` with `F` the node system of a complex pencil.
pub struct TotalDegreeHomotopy<'a> {
    pub target: &'a [SymMat5<C>; 4],
    pub mix: [[C; 4]; 3],
    pub chart: [C; 5],
    pub start: TotalDegreeStart,
    pub gamma: C,
}

impl Homotopy for TotalDegreeHomotopy<'_> {
    fn eval(&self, p: &ChartPoint, tau: f64) -> ([C; 4], [[C; 4]; 4], [C; 4]) {
        let (f, jf) = node_residual_jacobian(self.target, &self.mix, &self.chart, p);
        let (g, jg) = self.start.eval(p);
        let a = C::new(1.0 - tau, 0.0);
        let b = self.gamma * tau;
        let mut res = [C::new(0.0, 0.0); 4];
        let mut jac = [[C::new(0.0, 0.0); 4]; 4];
        let mut dt = [C::new(0.0, 0.0); 4];
        for i in 0..4 {
            res[i] = a * f[i] + b * g[i];
            dt[i] = self.gamma * g[i] - f[i];
            for k in 0..4 {
                jac[i][k] = a * jf[i][k] + b * jg[i][k];
            }
        }
        (res, jac, dt)
    }
}

/// Node system along the pencil segment `(1-τ)·target + γ·τ·start`.
///
/// Scaling a pencil does not move its nodes, so the `τ = 1` end has the same
/// solutions as `start`.
pub struct ParameterHomotopy {
    pub target: [SymMat5<C>; 4],
    pub start: [SymMat5<C>; 4],
    pub mix: [[C; 4]; 3],
    pub chart: [C; 5],
    pub gamma: C,
}

impl ParameterHomotopy {
    pub fn new(target: [SymMat5<C>; 4], start: [SymMat5<C>; 4], chart: &Chart, gamma: C) -> Self {
        ParameterHomotopy { target, start, mix: chart.lift_mix(), chart: chart.lift(), gamma }
    }
}

impl Homotopy for ParameterHomotopy {
    fn eval(&self, p: &ChartPoint, tau: f64) -> ([C; 4], [[C; 4]; 4], [C; 4]) {
        let a = C::new(1.0 - tau, 0.0);
        let b = self.gamma * tau;
        let mats: [SymMat5<C>; 4] = core::array::from_fn(|k| self.target[k].scale(a) + self.start[k].scale(b));
        let dmats: [SymMat5<C>; 4] =
            core::array::from_fn(|k| self.start[k].scale(self.gamma) - self.target[k]);
        node_residual_jacobian_param(&mats, &dmats, &self.mix, &self.chart, p)
    }
}

/// Random complex pencil with Gaussian entries, scaled to unit size.
pub fn random_complex_pencil<R: Rng + ?Sized>(rng: &mut R) -> [SymMat5<C>; 4] {
    core::array::from_fn(|_| {
        let mut m = SymMat5::<C>::zeros();
        for z in m.upper.iter_mut() {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            *z = C::new(re, im) * 0.2;
        }
        m
    })
}

pub fn random_gamma<R: Rng + ?Sized>(rng: &mut R) -> C {
    C::from_polar(1.0, rng.random_range(0.0..core::f64::consts::TAU))
}

/// Solutions of the node system for a generic complex pencil, the start of
/// every parameter homotopy.
#[derive(Clone, Debug, PartialEq)]
pub struct StartSolutions {
    pub pencil: [SymMat5<C>; 4],
    pub chart: Chart,
    pub points: Vec<ChartPoint>,
    pub seed: u64,
}

/// Relative distance used to detect colliding endpoints.
pub fn point_distance(p: &ChartPoint, q: &ChartPoint) -> f64 {
    let mut d = [C::new(0.0, 0.0); 4];
    for k in 0..4 {
        d[k] = p[k] - q[k];
    }
    norm(&d) / (1.0 + norm(p).max(norm(q)))
}

/// Indices of endpoints closer than `tol` to another endpoint.
pub fn colliding_endpoints(points: &[ChartPoint], tol: f64) -> Vec<usize> {
    let mut out = Vec::new();
    for i in 0..points.len() {
        if (0..points.len()).any(|j| j != i && point_distance(&points[i], &points[j]) < tol) {
            out.push(i);
        }
    }
    out
}

/// Endpoints closer than this are treated as the same solution.
pub const COLLISION_TOL: f64 = 1e-8;

fn track_with_retries<H: Homotopy, E: Executor>(
    h: &H,
    starts: &[ChartPoint],
    opts: &TrackOptions,
    exec: &E,
) -> Vec<PathResult> {
    let mut results = exec.map_indexed(starts.len(), |i| track_path(h, &starts[i], opts));
    let mut o = *opts;
    for _ in 0..2 {
        let points: Vec<ChartPoint> = results.iter().map(|r| r.endpoint).collect();
        let mut redo: Vec<usize> = colliding_endpoints(&points, COLLISION_TOL);
        for (i, r) in results.iter().enumerate() {
            if r.status != PathStatus::Success && !redo.contains(&i) {
                redo.push(i);
            }
        }
        if redo.is_empty() {
            break;
        }
        o = o.tightened();
        let again = exec.map_indexed(redo.len(), |k| track_path(h, &starts[redo[k]], &o));
        for (k, r) in redo.into_iter().zip(again) {
            results[k] = r;
        }
    }
    results
}

/// Checks that all paths succeeded and ended at distinct points.
pub fn endpoints_of(results: &[PathResult]) -> Result<Vec<ChartPoint>, Error> {
    let failed = results.iter().filter(|r| r.status != PathStatus::Success).count();
    if failed > 0 {
        let reason = match results.iter().find(|r| r.status != PathStatus::Success).map(|r| r.status) {
            Some(PathStatus::Diverged) => "diverged",
            Some(PathStatus::StepLimit) => "step limit",
            _ => "singular",
        };
        return Err(Error::PathFailure { failed, reason });
    }
    let points: Vec<ChartPoint> = results.iter().map(|r| r.endpoint).collect();
    if !colliding_endpoints(&points, COLLISION_TOL).is_empty() {
        return Err(Error::Nongeneric("colliding endpoints"));
    }
    Ok(points)
}

/// Stage one: total-degree solve of a random complex pencil on `chart`.
pub fn prepare_start<E: Executor>(
    chart: &Chart,
    seed: u64,
    opts: &TrackOptions,
    exec: &E,
) -> Result<StartSolutions, Error> {
    let mut last = Error::Nongeneric("start system");
    for attempt in 0..4u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt.wrapping_mul(0x9e37_79b9_7f4a_7c15)));
        let pencil = random_complex_pencil(&mut rng);
        let (start, points) = total_degree_start(chart, &mut rng)?;
        let gamma = random_gamma(&mut rng);
        let h = TotalDegreeHomotopy { target: &pencil, mix: chart.lift_mix(), chart: chart.lift(), start, gamma };
        let o = TrackOptions { gamma, ..*opts };
        let results = track_with_retries(&h, &points, &o, exec);
        match endpoints_of(&results) {
            Ok(points) => return Ok(StartSolutions { pencil, chart: *chart, points, seed }),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// Tracks known solutions of one pencil to another along a gamma-twisted
/// segment. `from` and `to` may be complex.
pub fn track_between<E: Executor>(
    from: &[SymMat5<C>; 4],
    from_points: &[ChartPoint],
    to: &[SymMat5<C>; 4],
    chart: &Chart,
    opts: &TrackOptions,
    exec: &E,
) -> Vec<PathResult> {
    let h = ParameterHomotopy::new(*to, *from, chart, opts.gamma);
    track_with_retries(&h, from_points, opts, exec)
}

/// Stage two: all 64 solutions of the node system of a real pencil.
///
/// The pencil is rescaled by a power of two first; the solutions are the
/// same. Deterministic for a given `seed`.
pub fn solve_nodes<E: Executor>(
    pencil: &Pencil,
    start: &StartSolutions,
    opts: &TrackOptions,
    seed: u64,
    exec: &E,
) -> Result<Vec<PathResult>, Error> {
    let target = pencil.binary_normalized().lift::<C>();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0f_9a33a);
    let mut results = Vec::new();
    for _ in 0..2 {
        let gamma = random_gamma(&mut rng);
        let o = TrackOptions { gamma, ..*opts };
        results = track_between(&start.pencil, &start.points, &target, &start.chart, &o, exec);
        if endpoints_of(&results).is_ok() {
            break;
        }
    }
    Ok(results)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Sequential;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    /// x² − 2γτ − 3(1−τ), padded with three trivial coordinates.
    struct Toy {
        gamma: C,
    }

    impl Homotopy for Toy {
        fn eval(&self, p: &ChartPoint, tau: f64) -> ([C; 4], [[C; 4]; 4], [C; 4]) {
            let x = p[0];
            let res = [x * x - self.gamma * 2.0 * tau - c(3.0 * (1.0 - tau), 0.0), p[1] - 1.0, p[2] - 1.0, p[3] - 1.0];
            let mut jac = [[c(0.0, 0.0); 4]; 4];
            jac[0][0] = x * 2.0;
            for k in 1..4 {
                jac[k][k] = c(1.0, 0.0);
            }
            let dt = [-self.gamma * 2.0 + 3.0, c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
            (res, jac, dt)
        }
    }

    #[test]
    fn toy_paths_follow_closed_form() {
        let gamma = C::from_polar(1.0, 1.1);
        let h = Toy { gamma };
        let s = (gamma * 2.0).sqrt();
        let one = c(1.0, 0.0);
        let mut ends = Vec::new();
        for sign in [1.0, -1.0] {
            let r = track_path(&h, &[s * sign, one, one, one], &TrackOptions::default());
            assert_eq!(r.status, PathStatus::Success);
            ends.push(r.endpoint[0]);
        }
        let r3 = 3f64.sqrt();
        assert!(ends.iter().any(|z| (z - r3).norm() < 1e-10));
        assert!(ends.iter().any(|z| (z + r3).norm() < 1e-10));
    }

    #[test]
    fn start_points_are_distinct_roots_on_chart() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let chart = Chart::random(&mut rng);
        let (sys, pts) = total_degree_start(&chart, &mut rng).unwrap();
        assert_eq!(pts.len(), 64);
        for (i, p) in pts.iter().enumerate() {
            let (res, _) = sys.eval(p);
            assert!(res.iter().all(|z| z.norm() < 1e-12));
            assert!(chart.eval(p).norm() < 1e-12);
            for q in &pts[i + 1..] {
                let d: f64 = (0..4).map(|k| (p[k] - q[k]).norm_sqr()).sum::<f64>().sqrt();
                assert!(d > 1e-6);
            }
        }
    }

    #[test]
    fn constant_homotopy_keeps_start() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let chart = Chart::random(&mut rng);
        let start = prepare_start(&chart, 17, &TrackOptions::default(), &Sequential).unwrap();
        let opts = TrackOptions::default();
        let res = track_between(&start.pencil, &start.points[..4], &start.pencil, &chart, &opts, &Sequential);
        for (r, p) in res.iter().zip(&start.points) {
            assert_eq!(r.status, PathStatus::Success);
            assert!(point_distance(&r.endpoint, p) < 1e-9);
        }
    }

    #[test]
    fn options_validate() {
        assert!(TrackOptions::default().validate());
        let bad = TrackOptions { min_step: 0.5, ..TrackOptions::default() };
        assert!(!bad.validate());
    }
}
