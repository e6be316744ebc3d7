//! A posteriori certification of the combinatorial type.
//!
//! All 64 solutions of the square node system are enclosed in pairwise
//! disjoint Krawczyk boxes. Three quartics in projective 3-space have at
//! most 64 isolated solutions, so these are all of them, and every node is
//! among them. Exactly 44 boxes must have a determinant enclosure avoiding
//! zero; since there are at least 20 nodes counted with multiplicity, the
//! other 20 boxes each hold a node. Reality and semidefiniteness of the
//! nodes are then decided by interval evaluation over those boxes.

pub mod interval;
pub mod krawczyk;

use alloc::vec::Vec;

use crate::classify::CombType;
use crate::exec::Executor;
use crate::linalg::{SymMat5, MINOR_SUBSETS};
use crate::pencil::{eval_pencil, ChartPoint, Pencil};
use crate::polysys::{extended_values, Chart};
use interval::{CInterval, Interval};
use krawczyk::{box_conj, box_disjoint, krawczyk_certify, CBox, IntervalSystem, Reality};

/// Interval enclosure of the four generators.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PencilEnclosure {
    pub mats: [SymMat5<Interval>; 4],
}

impl PencilEnclosure {
    /// Entries taken as exact binary floating-point values.
    pub fn exact(p: &Pencil) -> Self {
        PencilEnclosure { mats: p.mats().map(|m| m.map(Interval::point)) }
    }

    pub fn new(mats: [SymMat5<Interval>; 4]) -> Self {
        PencilEnclosure { mats }
    }

    pub fn midpoint(&self) -> Pencil {
        Pencil::new_unchecked(self.mats.map(|m| m.map(|x| x.mid())))
    }

    /// Exact rescaling by a power of two, matching
    /// [`Pencil::binary_normalized`] of the midpoint.
    pub fn binary_normalized(&self) -> Self {
        // Scaling by a power of two is exact, no outward rounding needed.
        let k = self.midpoint().binary_scale();
        PencilEnclosure { mats: self.mats.map(|m| m.map(|x| Interval { lo: x.lo * k, hi: x.hi * k })) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Semidefiniteness {
    Positive,
    Negative,
    Indefinite,
}

/// Decision from certified minor signs of a corank-2 real symmetric 5×5
/// matrix (all 4×4 and 5×5 minors vanish).
///
/// Semidefinite iff every minor has the strict sign of the positive pattern
/// (all positive) or the negative pattern (`(-1)^|I|`). Indefinite once
/// some certified sign contradicts each pattern. Otherwise undecided.
pub fn semidefiniteness(signs: &[i8; 25]) -> Option<Semidefiniteness> {
    let pattern = |k: usize, neg: bool| -> i8 {
        if neg && MINOR_SUBSETS[k].len() % 2 == 1 {
            -1
        } else {
            1
        }
    };
    if (0..25).all(|k| signs[k] == pattern(k, false)) {
        return Some(Semidefiniteness::Positive);
    }
    if (0..25).all(|k| signs[k] == pattern(k, true)) {
        return Some(Semidefiniteness::Negative);
    }
    let violates = |neg: bool| (0..25).any(|k| signs[k] != 0 && signs[k] != pattern(k, neg));
    if violates(false) && violates(true) {
        return Some(Semidefiniteness::Indefinite);
    }
    None
}

/// Per-solution part of a certificate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoxCertificate {
    pub enclosure: CBox,
    pub unique: bool,
    pub real: bool,
    pub d: CInterval,
    pub minors: [CInterval; 25],
    /// Signs of the minors on the real restriction, for real nodes only.
    /// When these leave the decision open it is made on a congruent matrix
    /// (see [`CONGRUENCE_ATTEMPTS`]).
    pub signs: Option<[i8; 25]>,
    pub node: bool,
    pub semidefinite: Option<Semidefiniteness>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub chart: Chart,
    pub boxes: Vec<BoxCertificate>,
    pub comb_type: CombType,
}

impl Certificate {
    pub fn nodes(&self) -> impl Iterator<Item = &BoxCertificate> {
        self.boxes.iter().filter(|b| b.node)
    }
}

/// The step at which certification stopped.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum Unsuccessful {
    #[error("path tracking failed: {0}")]
    PathFailure(crate::Error),
    #[error("expected 64 solutions, got {0}")]
    SolutionCount(usize),
    #[error("Krawczyk test inconclusive for solution {0}")]
    KrawczykInconclusive(usize),
    #[error("boxes {0} and {1} overlap")]
    OverlappingBoxes(usize, usize),
    #[error("{0} boxes exclude d = 0, expected 44")]
    NonzeroCount(usize),
    #[error("reality of node {0} undecided")]
    RealityUndecided(usize),
    #[error("minor signs of node {0} do not decide semidefiniteness")]
    AmbiguousMinorSigns(usize),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CertifyOptions {
    /// Extra Krawczyk contractions used when minor signs are undecided.
    pub extra_contractions: usize,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { extra_contractions: 4 }
    }
}

fn real_part(b: &CBox) -> [Interval; 4] {
    b.map(|c| c.re)
}

fn real_minor_signs(sys: &IntervalSystem, b: &CBox) -> [i8; 25] {
    let a = eval_pencil(&sys.real_mats, &real_part(b));
    crate::linalg::principal_minors(&a).map(|m| m.sign())
}

/// Number of seeded random congruences tried when some principal minors of
/// a structured node matrix vanish identically. Congruence by a nonsingular
/// `Q` preserves semidefiniteness, and the minors of `QᵀBQ` are generically
/// nonzero.
pub const CONGRUENCE_ATTEMPTS: u64 = 3;

fn congruence(seed: u64) -> [[f64; 5]; 5] {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xc0a9_0000 + seed);
    core::array::from_fn(|_| core::array::from_fn(|_| rng.sample(rand_distr::StandardNormal)))
}

fn congruent_minor_signs(sys: &IntervalSystem, b: &CBox, q: &[[f64; 5]; 5]) -> Option<[i8; 25]> {
    let qi: [[Interval; 5]; 5] = q.map(|r| r.map(Interval::point));
    if crate::linalg::det5(&qi).contains_zero() {
        return None;
    }
    let a = eval_pencil(&sys.real_mats, &real_part(b)).full();
    let mut c = SymMat5::<Interval>::zeros();
    for i in 0..5 {
        for j in i..5 {
            let mut s = Interval::point(0.0);
            for k in 0..5 {
                for l in 0..5 {
                    s = s + qi[k][i] * a[k][l] * qi[l][j];
                }
            }
            c.set(i, j, s);
        }
    }
    Some(crate::linalg::principal_minors(&c).map(|m| m.sign()))
}

/// Algorithm: certify all 64 solutions, identify the 20 nodes by the
/// determinant, and count real and semidefinite ones.
pub fn certified_type<E: Executor>(
    pencil: &PencilEnclosure,
    chart: &Chart,
    endpoints: &[ChartPoint],
    opts: &CertifyOptions,
    exec: &E,
) -> Result<Certificate, Unsuccessful> {
    if endpoints.len() != 64 {
        return Err(Unsuccessful::SolutionCount(endpoints.len()));
    }
    let sys = IntervalSystem::new(pencil.binary_normalized().mats, chart);
    let certified = exec.map_indexed(64, |i| krawczyk_certify(&sys, &endpoints[i], 0));
    let mut boxes = Vec::with_capacity(64);
    for (i, c) in certified.into_iter().enumerate() {
        boxes.push(c.ok_or(Unsuccessful::KrawczykInconclusive(i))?);
    }
    for i in 0..64 {
        for j in (i + 1)..64 {
            if !box_disjoint(&boxes[i].enclosure, &boxes[j].enclosure) {
                return Err(Unsuccessful::OverlappingBoxes(i, j));
            }
        }
    }
    let values = exec.map_indexed(64, |i| extended_values(&sys.mats, &boxes[i].enclosure));
    let nonzero = values.iter().filter(|(d, _)| !d.contains_zero()).count();
    if nonzero != 44 {
        return Err(Unsuccessful::NonzeroCount(nonzero));
    }
    let mut out = Vec::with_capacity(64);
    let (mut rho, mut sigma) = (0u32, 0u32);
    for (i, (cb, (d, minors))) in boxes.iter().zip(values).enumerate() {
        let node = d.contains_zero();
        let mut cert = BoxCertificate {
            enclosure: cb.enclosure,
            unique: true,
            real: cb.reality == Reality::Real,
            d,
            minors,
            signs: None,
            node,
            semidefinite: None,
        };
        if node {
            if cb.reality == Reality::Undecided {
                return Err(Unsuccessful::RealityUndecided(i));
            }
            if cert.real {
                rho += 1;
                let mut signs = real_minor_signs(&sys, &cb.enclosure);
                let mut decision = semidefiniteness(&signs);
                let mut region = cb.enclosure;
                if decision.is_none() {
                    // Retry on a further contracted box.
                    if let Some(again) = krawczyk_certify(&sys, &cb_mid(&cb.enclosure), opts.extra_contractions) {
                        if let Some(t) = krawczyk::box_intersect(&again.enclosure, &cb.enclosure) {
                            region = t;
                            signs = real_minor_signs(&sys, &t);
                            decision = semidefiniteness(&signs);
                        }
                    }
                }
                for seed in 0..CONGRUENCE_ATTEMPTS {
                    if decision.is_some() {
                        break;
                    }
                    if let Some(s) = congruent_minor_signs(&sys, &region, &congruence(seed)) {
                        decision = semidefiniteness(&s);
                    }
                }
                let decision = decision.ok_or(Unsuccessful::AmbiguousMinorSigns(i))?;
                if decision != Semidefiniteness::Indefinite {
                    sigma += 1;
                }
                cert.signs = Some(signs);
                cert.semidefinite = Some(decision);
            }
        }
        out.push(cert);
    }
    Ok(Certificate { chart: *chart, boxes: out, comb_type: CombType { rho, sigma } })
}

fn cb_mid(b: &CBox) -> ChartPoint {
    krawczyk::box_mid(b)
}

/// Nonreal node boxes whose conjugate meets exactly one other node box.
pub fn conjugate_pairing_holds(cert: &Certificate) -> bool {
    let nodes: Vec<&BoxCertificate> = cert.nodes().collect();
    nodes.iter().filter(|b| !b.real).all(|b| {
        let c = box_conj(&b.enclosure);
        nodes.iter().filter(|o| !box_disjoint(&c, &o.enclosure)).count() == 1
    })
}
