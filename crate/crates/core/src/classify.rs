//! From 64 endpoints to the combinatorial type (ρ, σ), and the set of
//! types allowed by the parity and Radon–Hurwitz constraints.

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{sym_eigenvalues, SymMat5};
use crate::pencil::{default_zero_tol, is_semidefinite, ChartPoint, Pencil};
use crate::polysys::extended_values;
use crate::tracker::point_distance;
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeTag {
    RealSemidefinite,
    RealIndefinite,
    /// Nonreal, top three eigenvalues of the real part share a sign.
    NonrealEta1,
    NonrealEta0,
}

impl NodeTag {
    pub fn is_real(self) -> bool {
        matches!(self, NodeTag::RealSemidefinite | NodeTag::RealIndefinite)
    }

    pub fn name(self) -> &'static str {
        match self {
            NodeTag::RealSemidefinite => "real_semidefinite",
            NodeTag::RealIndefinite => "real_indefinite",
            NodeTag::NonrealEta1 => "nonreal_eta1",
            NodeTag::NonrealEta0 => "nonreal_eta0",
        }
    }
}

/// One solution of the node system, in phase-normalized coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NodeSolution {
    /// Unit norm, largest-modulus coordinate real and positive.
    pub point: ChartPoint,
    pub d: Complex64,
    pub minors: [Complex64; 25],
    pub tag: NodeTag,
    /// `‖Im B‖_F / ‖B‖_F` for `B = A(point)`.
    pub imag_norm: f64,
    pub matrix: SymMat5<Complex64>,
}

impl NodeSolution {
    /// Real part of the matrix scaled to unit Frobenius norm.
    pub fn unit_real_matrix(&self) -> SymMat5<f64> {
        let r = self.matrix.re();
        let n = r.frobenius();
        if n == 0.0 {
            r
        } else {
            r.scale(1.0 / n)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CombType {
    pub rho: u32,
    pub sigma: u32,
}

impl CombType {
    pub const fn new(rho: u32, sigma: u32) -> Self {
        CombType { rho, sigma }
    }

    /// The conditions of [`admissible_types`] for a single type.
    pub fn is_admissible(&self, n: u32) -> bool {
        let bound = binom3(n + 1);
        self.sigma <= self.rho
            && self.rho <= bound
            && self.sigma % 2 == 0
            && self.rho % 2 == bound % 2
            && (self.rho > 0 || sigma_fn(n) > 2)
    }
}

impl core::fmt::Display for CombType {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "({},{})", self.rho, self.sigma)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassifyTolerances {
    /// Node threshold on `|d| / max |d|`; `[d_tol, 10·d_tol]` is ambiguous.
    pub d_tol: f64,
    pub reality_tol: f64,
    pub dedupe_tol: f64,
    /// Eigenvalue zero threshold relative to `‖B‖_F`.
    pub zero_tol: f64,
}

impl Default for ClassifyTolerances {
    fn default() -> Self {
        ClassifyTolerances { d_tol: 1e-10, reality_tol: 1e-7, dedupe_tol: 1e-8, zero_tol: 1e-8 }
    }
}

fn norm4(p: &ChartPoint) -> f64 {
    p.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Unit norm, then the largest-modulus coordinate rotated onto the positive
/// real axis.
pub fn phase_normalize(p: &ChartPoint) -> ChartPoint {
    let n = norm4(p);
    let k = (0..4).max_by(|&a, &b| p[a].norm().total_cmp(&p[b].norm())).expect("four coordinates");
    if n == 0.0 || p[k].norm() == 0.0 {
        return *p;
    }
    let phase = p[k].conj() / p[k].norm();
    p.map(|z| z * phase / n)
}

/// `1` iff the three largest eigenvalues of `b_re` share a strict sign.
pub fn eta(b_re: &SymMat5<f64>, zero_tol: f64) -> Result<u8, Error> {
    let ev = sym_eigenvalues(b_re)?;
    let pos = ev[..3].iter().all(|&e| e > zero_tol);
    let neg = ev[..3].iter().all(|&e| e < -zero_tol);
    Ok(u8::from(pos || neg))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classified {
    pub nodes: Vec<NodeSolution>,
    pub rest: Vec<NodeSolution>,
}

fn analyse(pencil: &Pencil, raw: &ChartPoint) -> (ChartPoint, Complex64, [Complex64; 25], SymMat5<Complex64>, f64) {
    let p = phase_normalize(raw);
    let (d, minors) = extended_values(&pencil.lift::<Complex64>(), &p);
    let b = pencil.eval_complex(&p);
    let total = b.frobenius();
    let imag_norm = if total == 0.0 { 0.0 } else { b.im().frobenius() / total };
    (p, d, minors, b, imag_norm)
}

/// Splits endpoints into the 20 nodes and the remaining solutions.
///
/// `kernel` is the kernel vector of the chart's partial-derivative
/// combination; a node on the plane `kernel·p = 0` cannot be told apart from
/// a singular point of the plane curve there.
pub fn classify_endpoints(
    pencil: &Pencil,
    endpoints: &[ChartPoint],
    kernel: &[f64; 4],
    tols: &ClassifyTolerances,
) -> Result<Classified, Error> {
    let pencil = pencil.binary_normalized();
    for i in 0..endpoints.len() {
        for j in (i + 1)..endpoints.len() {
            let (a, b) = (phase_normalize(&endpoints[i]), phase_normalize(&endpoints[j]));
            if point_distance(&a, &b) < tols.dedupe_tol {
                return Err(Error::Nongeneric("duplicate endpoints"));
            }
        }
    }
    let data: Vec<_> = endpoints.iter().map(|p| analyse(&pencil, p)).collect();
    let dmax = data.iter().map(|x| x.1.norm()).fold(0.0, f64::max);
    if dmax == 0.0 || !dmax.is_finite() {
        return Err(Error::Nongeneric("determinant vanishes at every solution"));
    }
    let mut nodes = Vec::new();
    let mut rest = Vec::new();
    for (p, d, minors, b, imag_norm) in data {
        let rel = d.norm() / dmax;
        if rel >= tols.d_tol && rel <= 10.0 * tols.d_tol {
            return Err(Error::AmbiguousNode);
        }
        let is_node = rel < tols.d_tol;
        let tag = if imag_norm < tols.reality_tol {
            let re = b.re();
            if is_semidefinite(&re, tols.zero_tol * re.frobenius())? {
                NodeTag::RealSemidefinite
            } else {
                NodeTag::RealIndefinite
            }
        } else {
            let re = b.re();
            if eta(&re, tols.zero_tol * b.frobenius())? == 1 {
                NodeTag::NonrealEta1
            } else {
                NodeTag::NonrealEta0
            }
        };
        let sol = NodeSolution { point: p, d, minors, tag, imag_norm, matrix: b };
        if is_node {
            let kp: Complex64 = (0..4).map(|k| p[k] * kernel[k]).sum();
            if kp.norm() < 1e-8 {
                return Err(Error::Nongeneric("solution on the kernel plane"));
            }
            nodes.push(sol);
        } else {
            rest.push(sol);
        }
    }
    Ok(Classified { nodes, rest })
}

pub fn comb_type(nodes: &[NodeSolution]) -> Result<CombType, Error> {
    if nodes.len() != 20 {
        return Err(Error::NodeCount(nodes.len()));
    }
    let rho = nodes.iter().filter(|n| n.tag.is_real()).count() as u32;
    let sigma = nodes.iter().filter(|n| n.tag == NodeTag::RealSemidefinite).count() as u32;
    Ok(CombType { rho, sigma })
}

/// `ρ(m) = 2^c + 8d` where the 2-adic valuation of `m` is `c + 4d`, `c < 4`.
pub fn radon_hurwitz(m: u64) -> u64 {
    assert!(m >= 1, "radon_hurwitz needs a positive argument");
    let v = u64::from(m.trailing_zeros());
    (1 << (v % 4)) + 8 * (v / 4)
}

/// Maximal dimension of a linear space of real symmetric `n×n` matrices
/// with simple spectrum away from zero, as a function of `n mod 8`.
pub fn sigma_fn(n: u32) -> u64 {
    match n % 8 {
        0 => radon_hurwitz(4 * u64::from(n / 8)),
        1 => radon_hurwitz(4 * u64::from((n - 1) / 8)),
        7 => radon_hurwitz(4 * u64::from((n + 1) / 8)),
        _ => 2,
    }
}

fn binom3(m: u32) -> u32 {
    if m < 3 {
        0
    } else {
        m * (m - 1) * (m - 2) / 6
    }
}

/// Every type allowed for degree `n` symmetroids with a strictly
/// spectrahedral point, sorted by `(ρ, σ)`.
pub fn admissible_types(n: u32) -> Vec<CombType> {
    let bound = binom3(n + 1);
    let mut out = Vec::new();
    for rho in 0..=bound {
        for sigma in (0..=rho).step_by(2) {
            let t = CombType { rho, sigma };
            if t.is_admissible(n) {
                out.push(t);
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WitnessBudget {
    pub starts: usize,
    pub sweeps: usize,
    pub seed: u64,
}

impl Default for WitnessBudget {
    fn default() -> Self {
        WitnessBudget { starts: 64, sweeps: 200, seed: 0 }
    }
}

/// Least eigenvalue of `A(p)` at a unit vector `p`.
fn lambda_min(pencil: &Pencil, p: &[f64; 4]) -> f64 {
    match sym_eigenvalues(&pencil.eval_real(p)) {
        Ok(ev) => ev[4],
        Err(_) => f64::NEG_INFINITY,
    }
}

fn unit(mut p: [f64; 4]) -> [f64; 4] {
    let n = p.iter().map(|x| x * x).sum::<f64>().sqrt();
    for x in p.iter_mut() {
        *x /= n;
    }
    p
}

/// Searches for a real point with `A(p)` positive definite (a negative
/// definite point is returned negated). `None` proves nothing.
pub fn pd_witness_search(pencil: &Pencil, budget: &WitnessBudget) -> Option<[f64; 4]> {
    let pencil = pencil.binary_normalized();
    let accept = |p: &[f64; 4]| {
        let m = pencil.eval_real(p);
        let ev = sym_eigenvalues(&m).ok()?;
        (ev[4] > default_zero_tol(&m)).then_some(*p)
    };
    let e0 = [1.0, 0.0, 0.0, 0.0];
    if let Some(p) = accept(&e0).or_else(|| accept(&[-1.0, 0.0, 0.0, 0.0])) {
        return Some(p);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    for _ in 0..budget.starts {
        let mut p = unit(core::array::from_fn(|_| rng.sample::<f64, _>(StandardNormal)));
        let mut best = lambda_min(&pencil, &p).max(lambda_min(&pencil, &p.map(|x| -x)));
        if lambda_min(&pencil, &p) < lambda_min(&pencil, &p.map(|x| -x)) {
            p = p.map(|x| -x);
        }
        let mut h = 0.5;
        for _ in 0..budget.sweeps {
            let mut improved = false;
            for k in 0..4 {
                for s in [h, -h] {
                    let mut q = p;
                    q[k] += s;
                    let q = unit(q);
                    let v = lambda_min(&pencil, &q);
                    if v > best {
                        best = v;
                        p = q;
                        improved = true;
                    }
                }
            }
            if let Some(w) = accept(&p) {
                return Some(w);
            }
            if !improved {
                h *= 0.5;
                if h < 1e-9 {
                    break;
                }
            }
        }
        let _ = rng.random::<u32>();
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radon_hurwitz_values() {
        assert_eq!(radon_hurwitz(1), 1);
        assert_eq!(radon_hurwitz(2), 2);
        assert_eq!(radon_hurwitz(4), 4);
        assert_eq!(radon_hurwitz(8), 8);
        assert_eq!(radon_hurwitz(16), 9);
        assert_eq!(radon_hurwitz(12), 4);
        assert_eq!(radon_hurwitz(256), 17);
    }

    #[test]
    fn sigma_function_cases() {
        for n in 3..40 {
            let s = sigma_fn(n);
            if matches!(n % 8, 0 | 1 | 7) {
                assert!(s > 2, "n = {n}");
            } else {
                assert_eq!(s, 2);
            }
        }
        assert_eq!(sigma_fn(8), 4);
    }

    #[test]
    fn quintic_types() {
        let t = admissible_types(5);
        assert_eq!(t.len(), 65);
        assert!(!t.contains(&CombType::new(0, 0)));
        assert!(t.contains(&CombType::new(20, 20)));
        assert!(t.iter().all(|c| c.rho >= 2 && c.rho % 2 == 0 && c.sigma % 2 == 0));
        assert!(admissible_types(8).iter().any(|c| c.rho == 0));
        assert!(admissible_types(4).iter().all(|c| c.rho % 2 == 0 && c.rho <= 10));
    }

    #[test]
    fn eta_examples() {
        assert_eq!(eta(&SymMat5::diag([3.0, 2.0, 1.0, -1.0, -2.0]), 1e-12).unwrap(), 1);
        assert_eq!(eta(&SymMat5::diag([3.0, 2.0, -1.0, -2.0, -3.0]), 1e-12).unwrap(), 0);
        assert_eq!(eta(&SymMat5::diag([-3.0, -2.0, -1.0, -0.5, -0.1]), 1e-12).unwrap(), 1);
        assert_eq!(eta(&SymMat5::diag([3.0, 2.0, 0.0, -2.0, -3.0]), 1e-12).unwrap(), 0);
    }

    #[test]
    fn phase_normalization() {
        let z = Complex64::from_polar(2.0, 0.7);
        let p = [z, z * 3.0, z * -1.0, z * 0.5];
        let q = phase_normalize(&p);
        assert!((norm4(&q) - 1.0).abs() < 1e-15);
        assert!(q.iter().all(|c| c.im.abs() < 1e-15));
        assert!(q[1].re > 0.0);
    }

    #[test]
    fn identity_pencil_witness() {
        let p = crate::families::prismatic_pencil(1.0, 1.0);
        let w = pd_witness_search(&p, &WitnessBudget::default()).unwrap();
        let ev = sym_eigenvalues(&p.eval_real(&w)).unwrap();
        assert!(ev[4] > 0.0);
    }

    #[test]
    fn type_ordering_and_display() {
        assert!(CombType::new(2, 0) < CombType::new(2, 2));
        assert_eq!(alloc::format!("{}", CombType::new(14, 8)), "(14,8)");
    }
}
