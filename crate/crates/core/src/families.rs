//! Symmetric families with known node configurations, the degenerate
//! multiplicity-four pencil, and the trace-bordering lift to 6×6.

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use alloc::vec::Vec;


use crate::classify::{NodeSolution, NodeTag};
use crate::linalg::SymMat5;
use crate::pencil::Pencil;
use crate::Error;

type Full = [[i64; 5]; 5];

const Z: Full = [[0; 5]; 5];

/// `t`-coefficient shared by all four tetrahedral generators.
pub const TETRAHEDRAL_T: Full = [
    [2, 1, 1, 0, 0],
    [1, 2, 1, 0, 0],
    [1, 1, 2, 0, 0],
    [0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0],
];

/// Tetrahedral generators at `t = 0`.
pub const TETRAHEDRAL_CONST: [Full; 4] = [
    [
        [16, 24, 24, -8, -8],
        [24, 16, 24, 8, 0],
        [24, 24, 16, 0, 8],
        [-8, 8, 0, 16, 8],
        [-8, 0, 8, 8, 16],
    ],
    [
        [16, -8, -8, 8, 8],
        [-8, -16, -8, 8, 16],
        [-8, -8, -16, 16, 8],
        [8, 8, 16, 16, 8],
        [8, 16, 8, 8, 16],
    ],
    [
        [-16, -8, -8, -8, 8],
        [-8, 16, -8, -8, 0],
        [-8, -8, -16, -16, -8],
        [-8, -8, -16, 16, 8],
        [8, 0, -8, 8, 16],
    ],
    [
        [-16, -8, -8, 8, -8],
        [-8, -16, -8, -8, -16],
        [-8, -8, 16, 0, -8],
        [8, -8, 0, 16, 8],
        [-8, -16, -8, 8, 16],
    ],
];

/// Prismatic generators at `a = b = 0`.
pub const PRISMATIC_CONST: [Full; 4] = [
    [
        [1, 0, 0, 0, 0],
        [0, 10, 5, 0, 0],
        [0, 5, 10, 0, 0],
        [0, 0, 0, 3, 2],
        [0, 0, 0, 2, 3],
    ],
    [
        [1, 0, 0, 0, 0],
        [0, 10, 5, 0, 0],
        [0, 5, 10, 0, 0],
        [0, 0, 0, 3, 1],
        [0, 0, 0, 1, 2],
    ],
    [
        [1, 0, 0, 0, 0],
        [0, 10, 5, 0, 0],
        [0, 5, 10, 0, 0],
        [0, 0, 0, 2, 1],
        [0, 0, 0, 1, 3],
    ],
    [
        [0, 0, 0, 0, 0],
        [0, 0, 0, 2, 1],
        [0, 0, 0, 1, 2],
        [0, 2, 1, 0, 0],
        [0, 1, 2, 0, 0],
    ],
];

/// `a`-coefficients of the prismatic generators.
pub const PRISMATIC_A: [Full; 4] = [
    [
        [0, 1, 1, 0, 0],
        [1, 0, 0, 0, 0],
        [1, 0, 0, 0, 0],
        [0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0],
    ],
    [
        [0, -1, 0, 0, 0],
        [-1, 0, 0, 0, 0],
        [0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0],
    ],
    [
        [0, 0, -1, 0, 0],
        [0, 0, 0, 0, 0],
        [-1, 0, 0, 0, 0],
        [0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0],
    ],
    Z,
];

/// `b`-coefficients of the prismatic generators.
pub const PRISMATIC_B: [Full; 4] = [
    [
        [0, 0, 0, 0, 0],
        [0, 1, 1, 0, 0],
        [0, 1, 1, 0, 0],
        [0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0],
    ],
    [
        [0, 0, 0, 0, 0],
        [0, 1, 0, 0, 0],
        [0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0],
    ],
    [
        [0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0],
        [0, 0, 1, 0, 0],
        [0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0],
    ],
    Z,
];

/// A pencil whose rank-3 locus is five points of multiplicity four.
pub const DEGENERATE: [Full; 4] = [
    [
        [2, 0, 0, 0, 0],
        [0, 2, 0, 0, 0],
        [0, 0, 1, 0, 0],
        [0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0],
    ],
    [
        [0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0],
        [0, 0, 2, 1, 0],
        [0, 0, 1, 2, 0],
        [0, 0, 0, 0, 2],
    ],
    [
        [1, 0, -1, 1, 0],
        [0, 1, 0, 0, 1],
        [-1, 0, 2, -1, 0],
        [1, 0, -1, 1, 0],
        [0, 1, 0, 0, 1],
    ],
    [
        [1, 0, 1, 0, 1],
        [0, 1, 0, -1, 0],
        [1, 0, 3, 0, 1],
        [0, -1, 0, 1, 0],
        [1, 0, 1, 0, 1],
    ],
];

fn sym(m: &Full) -> SymMat5<f64> {
    SymMat5::from_full(&m.map(|r| r.map(|x| x as f64)))
}

/// Family selector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FamilySpec {
    Tetrahedral { t: f64 },
    Prismatic { a: f64, b: f64 },
}

impl FamilySpec {
    pub fn pencil(&self) -> Pencil {
        match *self {
            FamilySpec::Tetrahedral { t } => tetrahedral_pencil(t),
            FamilySpec::Prismatic { a, b } => prismatic_pencil(a, b),
        }
    }
}

pub fn tetrahedral_pencil(t: f64) -> Pencil {
    let tm = sym(&TETRAHEDRAL_T).scale(t);
    Pencil::new_unchecked(TETRAHEDRAL_CONST.map(|c| sym(&c) + tm))
}

pub fn prismatic_pencil(a: f64, b: f64) -> Pencil {
    Pencil::new_unchecked(core::array::from_fn(|k| {
        sym(&PRISMATIC_CONST[k]) + sym(&PRISMATIC_A[k]).scale(a) + sym(&PRISMATIC_B[k]).scale(b)
    }))
}

pub fn degenerate_pencil() -> Pencil {
    Pencil::new_unchecked(DEGENERATE.map(|m| sym(&m)))
}

/// Borders a generator with a zero row and column and puts its trace in the
/// new corner. Semidefiniteness is preserved in both directions.
pub fn lift_trace_block(m: &SymMat5<f64>) -> [[f64; 6]; 6] {
    let mut out = [[0.0; 6]; 6];
    let full = m.full();
    for i in 0..5 {
        out[i][..5].copy_from_slice(&full[i]);
    }
    out[5][5] = m.trace();
    out
}

pub fn lift_pencil(p: &Pencil) -> [[[f64; 6]; 6]; 4] {
    p.mats().map(|m| lift_trace_block(&m))
}

/// One group orbit of nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct Orbit {
    pub members: Vec<usize>,
    pub tag: NodeTag,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitReport {
    pub orbits: Vec<Orbit>,
}

impl OrbitReport {
    pub fn sizes(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.orbits.iter().map(|o| o.members.len()).collect();
        s.sort_unstable();
        s
    }

    /// Number of orbits of the given size with the given tag.
    pub fn count(&self, size: usize, tag: NodeTag) -> usize {
        self.orbits.iter().filter(|o| o.members.len() == size && o.tag == tag).count()
    }

    /// Orbits of the given size, as tags, in a stable order.
    pub fn tags_of_size(&self, size: usize) -> Vec<NodeTag> {
        let mut t: Vec<NodeTag> =
            self.orbits.iter().filter(|o| o.members.len() == size).map(|o| o.tag).collect();
        t.sort_by_key(|t| *t as u8);
        t
    }
}

/// All 24 permutations of four coordinates.
fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let mut seen = [false; 4];
                    if p.iter().all(|&k| !core::mem::replace(&mut seen[k], true)) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Projective equality: `p ∧ q = 0` after normalisation.
fn same_projective(p: &[num_complex::Complex64; 4], q: &[num_complex::Complex64; 4], tol: f64) -> bool {
    let np: f64 = p.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let nq: f64 = q.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for i in 0..4 {
        for j in (i + 1)..4 {
            if (p[i] * q[j] - p[j] * q[i]).norm() > tol * np * nq {
                return false;
            }
        }
    }
    true
}

fn group_orbits(
    nodes: &[NodeSolution],
    act: impl Fn(&[num_complex::Complex64; 4]) -> Vec<[num_complex::Complex64; 4]>,
) -> Result<OrbitReport, Error> {
    const TOL: f64 = 1e-6;
    let mut assigned = [usize::MAX; 20];
    let mut orbits = Vec::new();
    for i in 0..nodes.len() {
        if assigned[i] != usize::MAX {
            continue;
        }
        let images = act(&nodes[i].point);
        let mut members = Vec::new();
        for (j, n) in nodes.iter().enumerate() {
            if images.iter().any(|q| same_projective(q, &n.point, TOL)) {
                if assigned[j] != usize::MAX && assigned[j] != orbits.len() {
                    return Err(Error::Nongeneric("overlapping orbits"));
                }
                assigned[j] = orbits.len();
                members.push(j);
            }
        }
        let tag = nodes[i].tag;
        if members.iter().any(|&j| nodes[j].tag != tag) {
            return Err(Error::Nongeneric("mixed tags within an orbit"));
        }
        orbits.push(Orbit { members, tag });
    }
    Ok(OrbitReport { orbits })
}

/// Groups tetrahedral nodes into S4-orbits (coordinate permutations of
/// `(t, x1, x2, x3)`); expects sizes {4, 4, 12}.
pub fn tetrahedral_orbits(nodes: &[NodeSolution]) -> Result<OrbitReport, Error> {
    if nodes.len() != 20 {
        return Err(Error::NodeCount(nodes.len()));
    }
    let perms = permutations4();
    let report = group_orbits(nodes, |p| perms.iter().map(|s| [p[s[0]], p[s[1]], p[s[2]], p[s[3]]]).collect())?;
    if report.sizes() != [4, 4, 12] {
        return Err(Error::Nongeneric("tetrahedral orbit sizes"));
    }
    Ok(report)
}

/// Prismatic orbits, best effort.
///
/// Only the subgroup generated by `x1 ↔ x2` and `x3 ↦ -x3` acts by signed
/// coordinate permutations in this basis. Its orbits are merged within each
/// tag until the size multiset {2, 4, 4, 4, 6} is reached.
pub fn prismatic_orbits(nodes: &[NodeSolution]) -> Result<OrbitReport, Error> {
    use num_complex::Complex64 as C;
    if nodes.len() != 20 {
        return Err(Error::NodeCount(nodes.len()));
    }
    let small = group_orbits(nodes, |p| {
        let sw = |q: [C; 4]| [q[0], q[2], q[1], q[3]];
        let fl = |q: [C; 4]| [q[0], q[1], q[2], -q[3]];
        alloc::vec![*p, sw(*p), fl(*p), fl(sw(*p))]
    })?;
    let target = [2usize, 4, 4, 4, 6];
    // Within each tag, choose sizes from `target` covering the tag's count
    // and pack the small orbits into them.
    let tags = [NodeTag::RealSemidefinite, NodeTag::RealIndefinite, NodeTag::NonrealEta1, NodeTag::NonrealEta0];
    let counts: Vec<usize> = tags
        .iter()
        .map(|t| small.orbits.iter().filter(|o| o.tag == *t).map(|o| o.members.len()).sum())
        .collect();
    // Nonreal orbits may mix η values; merge those two tags for packing.
    let groups: [(Vec<NodeTag>, usize); 3] = [
        (alloc::vec![NodeTag::RealSemidefinite], counts[0]),
        (alloc::vec![NodeTag::RealIndefinite], counts[1]),
        (alloc::vec![NodeTag::NonrealEta1, NodeTag::NonrealEta0], counts[2] + counts[3]),
    ];
    let mut remaining: Vec<usize> = target.to_vec();
    let mut orbits = Vec::new();
    for (gtags, total) in groups.iter() {
        let mut pieces: Vec<&Orbit> = small.orbits.iter().filter(|o| gtags.contains(&o.tag)).collect();
        pieces.sort_by_key(|o| core::cmp::Reverse(o.members.len()));
        let sizes = pick_sizes(&remaining, *total).ok_or(Error::Nongeneric("prismatic orbit sizes"))?;
        for s in &sizes {
            let pos = remaining.iter().position(|r| r == s).expect("picked from remaining");
            remaining.remove(pos);
        }
        // first-fit decreasing
        let mut bins: Vec<(usize, Vec<usize>, NodeTag)> = sizes.iter().map(|&s| (s, Vec::new(), gtags[0])).collect();
        for piece in pieces {
            let slot = bins
                .iter_mut()
                .find(|(cap, m, _)| m.len() + piece.members.len() <= *cap)
                .ok_or(Error::Nongeneric("prismatic orbit packing"))?;
            slot.1.extend_from_slice(&piece.members);
            slot.2 = piece.tag;
        }
        for (cap, members, tag) in bins {
            if members.len() != cap {
                return Err(Error::Nongeneric("prismatic orbit packing"));
            }
            orbits.push(Orbit { members, tag });
        }
    }
    Ok(OrbitReport { orbits })
}

/// A sub-multiset of `avail` summing to `total`, preferring fewer parts.
fn pick_sizes(avail: &[usize], total: usize) -> Option<Vec<usize>> {
    let n = avail.len();
    let mut best: Option<Vec<usize>> = None;
    for mask in 0u32..(1 << n) {
        let pick: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| avail[i]).collect();
        if pick.iter().sum::<usize>() == total && best.as_ref().is_none_or(|b| pick.len() < b.len()) {
            best = Some(pick);
        }
    }
    best
}
