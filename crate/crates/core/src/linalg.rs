//! Fixed-shape dense linear algebra for symmetric 5×5 matrices.
//!
//! Determinants, adjugates and principal minors are division-free and
//! generic over [`Scalar`], so the same code runs in floating point, in
//! complex arithmetic, over intervals and over jets. Eigenvalues use cyclic
//! Jacobi rotations on real matrices only.

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use core::ops::{Add, Index, Mul, Sub};

use num_complex::Complex64;

use crate::scalar::Scalar;
use crate::Error;

const OFFSET: [usize; 5] = [0, 5, 9, 12, 14];

/// Symmetric 5×5 matrix stored as its upper triangle, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymMat5<T> {
    pub upper: [T; 15],
}

#[inline]
pub const fn upper_index(i: usize, j: usize) -> usize {
    if i <= j {
        OFFSET[i] + (j - i)
    } else {
        OFFSET[j] + (i - j)
    }
}

impl<T: Scalar> SymMat5<T> {
    pub fn from_upper(upper: [T; 15]) -> Self {
        SymMat5 { upper }
    }

    pub fn zeros() -> Self {
        SymMat5 { upper: [T::zero(); 15] }
    }

    pub fn identity() -> Self {
        Self::diag([T::one(); 5])
    }

    pub fn diag(d: [T; 5]) -> Self {
        let mut m = Self::zeros();
        for (i, v) in d.into_iter().enumerate() {
            m.upper[upper_index(i, i)] = v;
        }
        m
    }

    /// Builds from a full matrix, reading only the upper triangle.
    pub fn from_full(m: &[[T; 5]; 5]) -> Self {
        let mut s = Self::zeros();
        for i in 0..5 {
            for j in i..5 {
                s.upper[upper_index(i, j)] = m[i][j];
            }
        }
        s
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.upper[upper_index(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.upper[upper_index(i, j)] = v;
    }

    pub fn full(&self) -> [[T; 5]; 5] {
        let mut m = [[T::zero(); 5]; 5];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = self.get(i, j);
            }
        }
        m
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> SymMat5<U> {
        SymMat5 { upper: self.upper.map(f) }
    }

    pub fn scale(&self, k: T) -> Self {
        self.map(|x| x * k)
    }

    pub fn trace(&self) -> T {
        (0..5).fold(T::zero(), |acc, i| acc + self.get(i, i))
    }

    /// Frobenius inner product `tr(self · other)` of two symmetric matrices.
    pub fn dot(&self, other: &Self) -> T {
        let mut s = T::zero();
        for i in 0..5 {
            for j in i..5 {
                let p = self.get(i, j) * other.get(i, j);
                s = if i == j { s + p } else { s + p + p };
            }
        }
        s
    }

    pub fn det(&self) -> T {
        det5(&self.full())
    }

    pub fn adjugate(&self) -> Self {
        adjugate(self)
    }

    pub fn principal_minors(&self) -> [T; 25] {
        principal_minors(self)
    }
}

impl<T: Scalar> Add for SymMat5<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut u = self.upper;
        for (a, b) in u.iter_mut().zip(o.upper) {
            *a = *a + b;
        }
        SymMat5 { upper: u }
    }
}

impl<T: Scalar> Sub for SymMat5<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let mut u = self.upper;
        for (a, b) in u.iter_mut().zip(o.upper) {
            *a = *a - b;
        }
        SymMat5 { upper: u }
    }
}

impl<T: Scalar> Index<(usize, usize)> for SymMat5<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.upper[upper_index(i, j)]
    }
}

impl SymMat5<f64> {
    pub fn frobenius(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn to_complex(&self) -> SymMat5<Complex64> {
        self.map(|x| Complex64::new(x, 0.0))
    }

    pub fn max_abs(&self) -> f64 {
        self.upper.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

impl SymMat5<Complex64> {
    pub fn re(&self) -> SymMat5<f64> {
        self.map(|z| z.re)
    }

    pub fn im(&self) -> SymMat5<f64> {
        self.map(|z| z.im)
    }

    pub fn frobenius(&self) -> f64 {
        let r = self.re().frobenius();
        let i = self.im().frobenius();
        r.hypot(i)
    }
}

impl<T: Scalar> Mul<SymMat5<T>> for [[T; 5]; 5] {
    type Output = [[T; 5]; 5];
    fn mul(self, rhs: SymMat5<T>) -> [[T; 5]; 5] {
        let mut out = [[T::zero(); 5]; 5];
        for i in 0..5 {
            for j in 0..5 {
                let mut s = T::zero();
                for k in 0..5 {
                    s = s + self[i][k] * rhs.get(k, j);
                }
                out[i][j] = s;
            }
        }
        out
    }
}

// Column-subset bookkeeping for the bottom-up Laplace expansion.
const PAIRS: [(usize, usize); 10] =
    [(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];

const fn pair_slot(a: usize, b: usize) -> usize {
    let mut k = 0;
    while k < 10 {
        if PAIRS[k].0 == a && PAIRS[k].1 == b {
            return k;
        }
        k += 1;
    }
    panic!("not a column pair")
}

const TRIPLES: [(usize, usize, usize); 10] = [
    (0, 1, 2),
    (0, 1, 3),
    (0, 1, 4),
    (0, 2, 3),
    (0, 2, 4),
    (0, 3, 4),
    (1, 2, 3),
    (1, 2, 4),
    (1, 3, 4),
    (2, 3, 4),
];

const fn triple_slot(a: usize, b: usize, c: usize) -> usize {
    let mut k = 0;
    while k < 10 {
        if TRIPLES[k].0 == a && TRIPLES[k].1 == b && TRIPLES[k].2 == c {
            return k;
        }
        k += 1;
    }
    panic!("not a column triple")
}

/// For each triple, the slots of its three sub-pairs obtained by deleting the
/// first, second and third column respectively.
const TRIPLE_FACES: [[usize; 3]; 10] = {
    let mut out = [[0usize; 3]; 10];
    let mut k = 0;
    while k < 10 {
        let (a, b, c) = TRIPLES[k];
        out[k] = [pair_slot(b, c), pair_slot(a, c), pair_slot(a, b)];
        k += 1;
    }
    out
};

/// Quadruple omitting column `o`, and its four sub-triples (delete 1st..4th).
const QUAD_FACES: [([usize; 4], [usize; 4]); 5] = {
    let mut out = [([0usize; 4], [0usize; 4]); 5];
    let mut o = 0;
    while o < 5 {
        let mut cols = [0usize; 4];
        let mut n = 0;
        let mut c = 0;
        while c < 5 {
            if c != o {
                cols[n] = c;
                n += 1;
            }
            c += 1;
        }
        let [a, b, c2, d] = cols;
        out[o] = (
            cols,
            [triple_slot(b, c2, d), triple_slot(a, c2, d), triple_slot(a, b, d), triple_slot(a, b, c2)],
        );
        o += 1;
    }
    out
};

/// All 3×3 minors of the given three rows, indexed like `TRIPLES`.
fn triple_minors<T: Scalar>(m: &[[T; 5]; 5], rows: [usize; 3]) -> [T; 10] {
    let [r0, r1, r2] = rows;
    let mut pair = [T::zero(); 10];
    for (k, &(a, b)) in PAIRS.iter().enumerate() {
        pair[k] = m[r0][a] * m[r1][b] - m[r0][b] * m[r1][a];
    }
    let mut tri = [T::zero(); 10];
    for (k, &(a, b, c)) in TRIPLES.iter().enumerate() {
        let f = TRIPLE_FACES[k];
        tri[k] = m[r2][a] * pair[f[0]] - m[r2][b] * pair[f[1]] + m[r2][c] * pair[f[2]];
    }
    tri
}

/// The five 4×4 minors of four rows; entry `o` omits column `o`.
fn quad_minors<T: Scalar>(m: &[[T; 5]; 5], rows: [usize; 4]) -> [T; 5] {
    let tri = triple_minors(m, [rows[0], rows[1], rows[2]]);
    let r3 = rows[3];
    let mut out = [T::zero(); 5];
    for (o, (cols, faces)) in QUAD_FACES.iter().enumerate() {
        out[o] = -(m[r3][cols[0]] * tri[faces[0]]) + m[r3][cols[1]] * tri[faces[1]]
            - m[r3][cols[2]] * tri[faces[2]]
            + m[r3][cols[3]] * tri[faces[3]];
    }
    out
}

/// Determinant of a full 5×5 matrix by Laplace expansion (75 products).
pub fn det5<T: Scalar>(m: &[[T; 5]; 5]) -> T {
    let q = quad_minors(m, [0, 1, 2, 3]);
    let mut s = T::zero();
    for k in 0..5 {
        let p = m[4][k] * q[k];
        s = if k % 2 == 0 { s + p } else { s - p };
    }
    s
}

/// Adjugate via explicit 4×4 cofactors.
pub fn adjugate<T: Scalar>(m: &SymMat5<T>) -> SymMat5<T> {
    let full = m.full();
    let mut adj = SymMat5::zeros();
    for i in 0..5 {
        let mut rows = [0usize; 4];
        let mut n = 0;
        for r in 0..5 {
            if r != i {
                rows[n] = r;
                n += 1;
            }
        }
        let q = quad_minors(&full, rows);
        for (j, &v) in q.iter().enumerate().skip(i) {
            adj.set(i, j, if (i + j) % 2 == 0 { v } else { -v });
        }
    }
    adj
}

/// Row/column subsets of the 25 principal minors, sizes ascending and
/// lexicographic within a size. Every certificate uses this order.
pub const MINOR_SUBSETS: [&[usize]; 25] = [
    &[0],
    &[1],
    &[2],
    &[3],
    &[4],
    &[0, 1],
    &[0, 2],
    &[0, 3],
    &[0, 4],
    &[1, 2],
    &[1, 3],
    &[1, 4],
    &[2, 3],
    &[2, 4],
    &[3, 4],
    &[0, 1, 2],
    &[0, 1, 3],
    &[0, 1, 4],
    &[0, 2, 3],
    &[0, 2, 4],
    &[0, 3, 4],
    &[1, 2, 3],
    &[1, 2, 4],
    &[1, 3, 4],
    &[2, 3, 4],
];

pub fn principal_minors<T: Scalar>(m: &SymMat5<T>) -> [T; 25] {
    let mut out = [T::zero(); 25];
    for (k, s) in MINOR_SUBSETS.iter().enumerate() {
        out[k] = match *s {
            [i] => m.get(*i, *i),
            [i, j] => m.get(*i, *i) * m.get(*j, *j) - m.get(*i, *j) * m.get(*i, *j),
            [i, j, l] => {
                let (a, b, c) = (m.get(*i, *i), m.get(*j, *j), m.get(*l, *l));
                let (x, y, z) = (m.get(*i, *j), m.get(*i, *l), m.get(*j, *l));
                let two = T::from_f64(2.0);
                a * b * c + two * x * y * z - a * z * z - b * y * y - c * x * x
            }
            _ => unreachable!(),
        };
    }
    out
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi, descending.
///
/// Stops once the off-diagonal Frobenius norm drops below `1e-13·‖M‖_F`.
pub fn jacobi_eigenvalues<const N: usize>(m: [[f64; N]; N]) -> Result<[f64; N], Error> {
    const MAX_SWEEPS: usize = 60;
    let mut a = m;
    let norm = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    let tol = 1e-13 * norm;
    let off = |a: &[[f64; N]; N]| {
        let mut s = 0.0;
        for i in 0..N {
            for j in 0..N {
                if i != j {
                    s += a[i][j] * a[i][j];
                }
            }
        }
        s.sqrt()
    };
    let mut converged = norm == 0.0;
    for _ in 0..MAX_SWEEPS {
        if off(&a) <= tol {
            converged = true;
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..N {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..N {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    if !converged && off(&a) > tol {
        return Err(Error::Convergence("Jacobi eigenvalue sweeps"));
    }
    let mut ev = [0.0; N];
    for (i, e) in ev.iter_mut().enumerate() {
        *e = a[i][i];
    }
    ev.sort_by(|x, y| y.total_cmp(x));
    Ok(ev)
}

pub fn sym_eigenvalues(m: &SymMat5<f64>) -> Result<[f64; 5], Error> {
    jacobi_eigenvalues(m.full())
}

/// LU factorisation with partial pivoting of a complex 4×4 matrix.
#[derive(Clone, Copy, Debug)]
pub struct Lu4 {
    lu: [[Complex64; 4]; 4],
    perm: [usize; 4],
}

impl Lu4 {
    pub fn new(a: &[[Complex64; 4]; 4]) -> Option<Self> {
        let mut lu = *a;
        let mut perm = [0, 1, 2, 3];
        let scale = a.iter().flatten().fold(0.0f64, |m, z| m.max(z.norm()));
        if scale == 0.0 || !scale.is_finite() {
            return None;
        }
        for k in 0..4 {
            let mut piv = k;
            for r in (k + 1)..4 {
                if lu[r][k].norm() > lu[piv][k].norm() {
                    piv = r;
                }
            }
            if lu[piv][k].norm() <= 1e-300 * scale {
                return None;
            }
            lu.swap(k, piv);
            perm.swap(k, piv);
            let inv = lu[k][k].inv();
            for r in (k + 1)..4 {
                let f = lu[r][k] * inv;
                lu[r][k] = f;
                for c in (k + 1)..4 {
                    let t = lu[k][c];
                    lu[r][c] -= f * t;
                }
            }
        }
        Some(Lu4 { lu, perm })
    }

    pub fn solve(&self, b: &[Complex64; 4]) -> [Complex64; 4] {
        let mut x = [Complex64::new(0.0, 0.0); 4];
        for i in 0..4 {
            x[i] = b[self.perm[i]];
        }
        for i in 0..4 {
            for j in 0..i {
                let t = self.lu[i][j] * x[j];
                x[i] -= t;
            }
        }
        for i in (0..4).rev() {
            for j in (i + 1)..4 {
                let t = self.lu[i][j] * x[j];
                x[i] -= t;
            }
            x[i] /= self.lu[i][i];
        }
        x
    }

    pub fn inverse(&self) -> [[Complex64; 4]; 4] {
        let mut inv = [[Complex64::new(0.0, 0.0); 4]; 4];
        for c in 0..4 {
            let mut e = [Complex64::new(0.0, 0.0); 4];
            e[c] = Complex64::new(1.0, 0.0);
            let col = self.solve(&e);
            for r in 0..4 {
                inv[r][c] = col[r];
            }
        }
        inv
    }
}

fn inf_norm4(a: &[[Complex64; 4]; 4]) -> f64 {
    a.iter().map(|row| row.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// ∞-norm condition number of a complex 4×4 matrix (infinite if singular).
pub fn condition4(a: &[[Complex64; 4]; 4]) -> f64 {
    match Lu4::new(a) {
        Some(lu) => inf_norm4(a) * inf_norm4(&lu.inverse()),
        None => f64::INFINITY,
    }
}
