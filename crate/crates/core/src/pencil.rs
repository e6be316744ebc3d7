//! The pencil `A(t, x) = t·A0 + x1·A1 + x2·A2 + x3·A3`, its determinant and
//! gradient, and signature predicates on real matrices.

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{adjugate, sym_eigenvalues, SymMat5};
use crate::scalar::Scalar;
use crate::Error;

/// Coordinates `(t, x1, x2, x3)` in the affine chart.
pub type ChartPoint = [Complex64; 4];

/// Four real symmetric generators.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pencil {
    mats: [SymMat5<f64>; 4],
}

impl Pencil {
    /// Validates linear independence of the generators (rank 4 in 15-space).
    pub fn new(mats: [SymMat5<f64>; 4]) -> Result<Self, Error> {
        let p = Pencil { mats };
        if !p.independent() {
            return Err(Error::DependentPencil);
        }
        Ok(p)
    }

    /// Builds a pencil without the independence check, for fixtures that are
    /// meant to be degenerate.
    pub fn new_unchecked(mats: [SymMat5<f64>; 4]) -> Self {
        Pencil { mats }
    }

    /// Normalized pencil `t·Id + x1·A1 + x2·A2 + x3·A3`.
    pub fn normalized(a1: SymMat5<f64>, a2: SymMat5<f64>, a3: SymMat5<f64>) -> Result<Self, Error> {
        Self::new([SymMat5::identity(), a1, a2, a3])
    }

    /// `t·Id + …` with independent standard normal upper-triangle entries,
    /// a pure function of `seed`.
    pub fn random_normalized(seed: u64) -> Pencil {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
        loop {
            let mut gen = || {
                let mut m = SymMat5::<f64>::zeros();
                for x in m.upper.iter_mut() {
                    *x = rng.sample(StandardNormal);
                }
                m
            };
            let (a, b, c) = (gen(), gen(), gen());
            if let Ok(p) = Self::normalized(a, b, c) {
                return p;
            }
        }
    }

    pub fn mats(&self) -> &[SymMat5<f64>; 4] {
        &self.mats
    }

    pub fn is_normalized(&self) -> bool {
        self.mats[0] == SymMat5::identity()
    }

    fn independent(&self) -> bool {
        let mut basis: [[f64; 15]; 4] = [[0.0; 15]; 4];
        for (k, m) in self.mats.iter().enumerate() {
            let mut v = m.upper;
            let n0 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n0 == 0.0 {
                return false;
            }
            for _ in 0..2 {
                for b in basis.iter().take(k) {
                    let proj: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
                    for (x, y) in v.iter_mut().zip(b) {
                        *x -= proj * y;
                    }
                }
            }
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n <= 1e-10 * n0 {
                return false;
            }
            basis[k] = v.map(|x| x / n);
        }
        true
    }

    /// The generators converted into another scalar type.
    pub fn lift<T: Scalar>(&self) -> [SymMat5<T>; 4] {
        self.mats.map(|m| m.map(T::from_f64))
    }

    pub fn eval_real(&self, p: &[f64; 4]) -> SymMat5<f64> {
        eval_pencil(&self.mats, p)
    }

    pub fn eval_complex(&self, p: &ChartPoint) -> SymMat5<Complex64> {
        let mut out = SymMat5::<Complex64>::zeros();
        for (m, &c) in self.mats.iter().zip(p) {
            for (o, &a) in out.upper.iter_mut().zip(&m.upper) {
                *o += c * a;
            }
        }
        out
    }

    pub fn det_and_grad(&self, p: &ChartPoint) -> (Complex64, [Complex64; 4]) {
        det_and_grad(&self.lift::<Complex64>(), p)
    }

    /// Congruent pencil `Cᵀ·A_i·C`.
    pub fn congruent(&self, c: &[[f64; 5]; 5]) -> Pencil {
        let mats = self.mats.map(|m| {
            let full = m.full();
            let mut out = SymMat5::zeros();
            for i in 0..5 {
                for j in i..5 {
                    let mut s = 0.0;
                    for k in 0..5 {
                        for l in 0..5 {
                            s += c[k][i] * full[k][l] * c[l][j];
                        }
                    }
                    out.set(i, j, s);
                }
            }
            out
        });
        Pencil { mats }
    }

    /// Largest generator Frobenius norm.
    pub fn scale(&self) -> f64 {
        self.mats.iter().map(|m| m.frobenius()).fold(0.0, f64::max)
    }

    /// Multiplies every generator by a power of two so the largest Frobenius
    /// norm lies in `[0.5, 1)`. The scaling is exact and leaves the node set
    /// unchanged.
    pub fn binary_normalized(&self) -> Pencil {
        self.scaled(self.binary_scale())
    }

    /// The power of two used by [`Pencil::binary_normalized`].
    pub fn binary_scale(&self) -> f64 {
        let s = self.scale();
        if s == 0.0 || !s.is_finite() {
            return 1.0;
        }
        let e = s.log2().floor() as i32 + 1;
        2f64.powi(-e)
    }

    pub fn scaled(&self, k: f64) -> Pencil {
        Pencil { mats: self.mats.map(|m| m.scale(k)) }
    }

    /// The 60 matrix coordinates (upper triangles of A0..A3).
    pub fn coordinates(&self) -> [f64; 60] {
        let mut out = [0.0; 60];
        for (k, m) in self.mats.iter().enumerate() {
            out[15 * k..15 * (k + 1)].copy_from_slice(&m.upper);
        }
        out
    }

    pub fn from_coordinates(c: &[f64; 60]) -> Pencil {
        let mut mats = [SymMat5::<f64>::zeros(); 4];
        for (k, m) in mats.iter_mut().enumerate() {
            m.upper.copy_from_slice(&c[15 * k..15 * (k + 1)]);
        }
        Pencil { mats }
    }
}

/// `Σ p_k · A_k` for generators already expressed in scalar type `T`.
pub fn eval_pencil<T: Scalar>(mats: &[SymMat5<T>; 4], p: &[T; 4]) -> SymMat5<T> {
    let mut out = SymMat5::zeros();
    for (m, &c) in mats.iter().zip(p) {
        for (o, &a) in out.upper.iter_mut().zip(&m.upper) {
            *o = *o + c * a;
        }
    }
    out
}

/// Determinant and gradient `∂D/∂p_k = tr(adj(A(p))·A_k)` (Jacobi's formula).
pub fn det_and_grad<T: Scalar>(mats: &[SymMat5<T>; 4], p: &[T; 4]) -> (T, [T; 4]) {
    let a = eval_pencil(mats, p);
    let adj = adjugate(&a);
    let grad = [adj.dot(&mats[0]), adj.dot(&mats[1]), adj.dot(&mats[2]), adj.dot(&mats[3])];
    (a.det(), grad)
}

/// Inertia of a real symmetric matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    pub n_plus: usize,
    pub n_minus: usize,
    pub corank: usize,
}

impl Signature {
    pub fn is_semidefinite(&self) -> bool {
        self.n_plus == 0 || self.n_minus == 0
    }
}

/// Default eigenvalue zero threshold, `1e-8·‖M‖_F`.
pub fn default_zero_tol(m: &SymMat5<f64>) -> f64 {
    1e-8 * m.frobenius()
}

pub fn signature(m: &SymMat5<f64>, zero_tol: f64) -> Result<Signature, Error> {
    let ev = sym_eigenvalues(m)?;
    let n_plus = ev.iter().filter(|&&e| e > zero_tol).count();
    let n_minus = ev.iter().filter(|&&e| e < -zero_tol).count();
    Ok(Signature { n_plus, n_minus, corank: 5 - n_plus - n_minus })
}

pub fn is_semidefinite(m: &SymMat5<f64>, zero_tol: f64) -> Result<bool, Error> {
    Ok(signature(m, zero_tol)?.is_semidefinite())
}
