//! The square node system `(L·∇D, ℓ)` and the value map `(D, principal
//! minors)` carried along each of its 64 solutions.
//!
//! `L` is a real 3×4 matrix of full rank with kernel vector `v`. At a
//! solution `∇D = λ·v`, and Euler's relation `p·∇D = 5·D` gives
//! `D = λ·(v·p)/5`. Off the plane `v·p = 0` the nodes are therefore exactly
//! the solutions with vanishing determinant. With `L = [e1; e2; e3]` the
//! system is `(∂D/∂x1, ∂D/∂x2, ∂D/∂x3, ℓ)` and the plane is `t = 0`; pencils
//! from symmetric families can have nodes there, so random charts use a
//! random `L`.

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{adjugate, principal_minors, SymMat5};
use crate::pencil::{eval_pencil, ChartPoint, Pencil};
use crate::scalar::{Jet, Scalar};
use crate::Error;

/// The partial-derivative combinations of the plain `x`-partials system.
pub const X_PARTIALS: [[f64; 4]; 3] = [[0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]];

/// Affine chart `ℓ = c0·t + c1·x1 + c2·x2 + c3·x3 + c4`, together with the
/// combination `L` of partial derivatives forming the other equations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Chart {
    pub c: [f64; 5],
    pub mix: [[f64; 4]; 3],
}

impl Chart {
    /// Chart for the plain `x`-partials system.
    pub fn new(c: [f64; 5]) -> Result<Self, Error> {
        Self::with_mix(c, X_PARTIALS)
    }

    pub fn with_mix(c: [f64; 5], mix: [[f64; 4]; 3]) -> Result<Self, Error> {
        if c[..4].iter().all(|&x| x == 0.0) {
            return Err(Error::DegenerateChart);
        }
        let chart = Chart { c, mix };
        let v = chart.kernel();
        if v.iter().map(|x| x * x).sum::<f64>().sqrt() < 1e-6 {
            return Err(Error::DegenerateChart);
        }
        Ok(chart)
    }

    /// Gaussian chart with unit-norm linear part and an orthonormal-row `L`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let mut c = [0.0; 5];
            for x in c.iter_mut() {
                *x = rng.sample(StandardNormal);
            }
            let n = c[..4].iter().map(|x| x * x).sum::<f64>().sqrt();
            if n < 1e-3 || c[4].abs() < 1e-3 {
                continue;
            }
            for x in c[..4].iter_mut() {
                *x /= n;
            }
            let mut mix = [[0.0; 4]; 3];
            let mut ok = true;
            for i in 0..3 {
                let mut row: [f64; 4] = core::array::from_fn(|_| rng.sample(StandardNormal));
                for prev in mix.iter().take(i) {
                    let d: f64 = row.iter().zip(prev).map(|(a, b)| a * b).sum();
                    for (x, y) in row.iter_mut().zip(prev) {
                        *x -= d * y;
                    }
                }
                let n = row.iter().map(|x| x * x).sum::<f64>().sqrt();
                ok &= n > 1e-3;
                mix[i] = row.map(|x| x / n);
            }
            if ok {
                return Chart { c, mix };
            }
        }
    }

    /// Kernel vector `v` of `L` (generalized cross product of its rows).
    pub fn kernel(&self) -> [f64; 4] {
        let m = &self.mix;
        let det3 = |a: usize, b: usize, c: usize| {
            m[0][a] * (m[1][b] * m[2][c] - m[1][c] * m[2][b]) - m[0][b] * (m[1][a] * m[2][c] - m[1][c] * m[2][a])
                + m[0][c] * (m[1][a] * m[2][b] - m[1][b] * m[2][a])
        };
        [-det3(1, 2, 3), det3(0, 2, 3), -det3(0, 1, 3), det3(0, 1, 2)]
    }

    pub fn lift_mix<T: Scalar>(&self) -> [[T; 4]; 3] {
        self.mix.map(|r| r.map(T::from_f64))
    }

    pub fn eval<T: Scalar>(&self, p: &[T; 4]) -> T {
        let mut s = T::from_f64(self.c[4]);
        for k in 0..4 {
            s = s + T::from_f64(self.c[k]) * p[k];
        }
        s
    }

    pub fn lift<T: Scalar>(&self) -> [T; 5] {
        self.c.map(T::from_f64)
    }

    /// Rescales a projective representative onto the chart. `None` when the
    /// point lies on the chart's hyperplane at infinity.
    pub fn project(&self, p: &ChartPoint) -> Option<ChartPoint> {
        let lin: Complex64 = (0..4).map(|k| p[k] * self.c[k]).sum();
        if lin.norm() < 1e-300 {
            return None;
        }
        let s = -self.c[4] / lin;
        Some(p.map(|z| z * s))
    }
}

fn chart_value<T: Scalar>(chart: &[T; 5], p: &[T; 4]) -> T {
    chart[4] + chart[0] * p[0] + chart[1] * p[1] + chart[2] * p[2] + chart[3] * p[3]
}

/// `G_i = Σ_k L_ik·A_k`, so that `(L·∇D)_i = tr(adj(A)·G_i)`.
pub fn mixed_generators<T: Scalar>(mats: &[SymMat5<T>; 4], mix: &[[T; 4]; 3]) -> [SymMat5<T>; 3] {
    core::array::from_fn(|i| {
        let mut g = SymMat5::zeros();
        for e in 0..15 {
            let mut s = T::zero();
            for k in 0..4 {
                s = s + mix[i][k] * mats[k].upper[e];
            }
            g.upper[e] = s;
        }
        g
    })
}

/// Residual `(L·∇D, ℓ)` at `p`.
pub fn node_residual<T: Scalar>(mats: &[SymMat5<T>; 4], mix: &[[T; 4]; 3], chart: &[T; 5], p: &[T; 4]) -> [T; 4] {
    let adj = adjugate(&eval_pencil(mats, p));
    let g = mixed_generators(mats, mix);
    [adj.dot(&g[0]), adj.dot(&g[1]), adj.dot(&g[2]), chart_value(chart, p)]
}

/// Residual and exact Jacobian. Row `i < 3` is `L_i` times the Hessian of
/// `D`; row 3 is the constant chart row.
pub fn node_residual_jacobian<T: Scalar>(
    mats: &[SymMat5<T>; 4],
    mix: &[[T; 4]; 3],
    chart: &[T; 5],
    p: &[T; 4],
) -> ([T; 4], [[T; 4]; 4]) {
    let mut a = SymMat5::<Jet<T, 4>>::zeros();
    for e in 0..15 {
        let mut v = T::zero();
        let mut d = [T::zero(); 4];
        for k in 0..4 {
            v = v + p[k] * mats[k].upper[e];
            d[k] = mats[k].upper[e];
        }
        a.upper[e] = Jet { v, d };
    }
    let adj = adjugate(&a);
    let gens = mixed_generators(mats, mix);
    let mut res = [T::zero(); 4];
    let mut jac = [[T::zero(); 4]; 4];
    for i in 0..3 {
        let g = gens[i].map(Jet::constant);
        let r = adj.dot(&g);
        res[i] = r.v;
        jac[i] = r.d;
    }
    res[3] = chart_value(chart, p);
    jac[3] = [chart[0], chart[1], chart[2], chart[3]];
    (res, jac)
}

/// Residual, Jacobian and derivative with respect to a pencil parameter `s`
/// along which the generators move with velocity `dmats`.
pub fn node_residual_jacobian_param<T: Scalar>(
    mats: &[SymMat5<T>; 4],
    dmats: &[SymMat5<T>; 4],
    mix: &[[T; 4]; 3],
    chart: &[T; 5],
    p: &[T; 4],
) -> ([T; 4], [[T; 4]; 4], [T; 4]) {
    let mut a = SymMat5::<Jet<T, 5>>::zeros();
    for e in 0..15 {
        let mut v = T::zero();
        let mut d = [T::zero(); 5];
        for k in 0..4 {
            v = v + p[k] * mats[k].upper[e];
            d[k] = mats[k].upper[e];
            d[4] = d[4] + p[k] * dmats[k].upper[e];
        }
        a.upper[e] = Jet { v, d };
    }
    let adj = adjugate(&a);
    let gens = mixed_generators(mats, mix);
    let dgens = mixed_generators(dmats, mix);
    let mut res = [T::zero(); 4];
    let mut jac = [[T::zero(); 4]; 4];
    let mut dres = [T::zero(); 4];
    for i in 0..3 {
        let mut g = SymMat5::<Jet<T, 5>>::zeros();
        for e in 0..15 {
            let mut d = [T::zero(); 5];
            d[4] = dgens[i].upper[e];
            g.upper[e] = Jet { v: gens[i].upper[e], d };
        }
        let r = adj.dot(&g);
        res[i] = r.v;
        jac[i] = [r.d[0], r.d[1], r.d[2], r.d[3]];
        dres[i] = r.d[4];
    }
    res[3] = chart_value(chart, p);
    jac[3] = [chart[0], chart[1], chart[2], chart[3]];
    (res, jac, dres)
}

/// The tracked values `(D(p), principal minors of A(p))`.
pub fn extended_values<T: Scalar>(mats: &[SymMat5<T>; 4], p: &[T; 4]) -> (T, [T; 25]) {
    let a = eval_pencil(mats, p);
    (a.det(), principal_minors(&a))
}

/// A real pencil together with an affine chart.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NodeSystem {
    pub pencil: Pencil,
    pub chart: Chart,
}

impl NodeSystem {
    pub fn new(pencil: Pencil, chart: Chart) -> Self {
        NodeSystem { pencil, chart }
    }

    pub fn residual(&self, p: &ChartPoint) -> [Complex64; 4] {
        node_residual(&self.pencil.lift(), &self.chart.lift_mix(), &self.chart.lift(), p)
    }

    pub fn jacobian(&self, p: &ChartPoint) -> [[Complex64; 4]; 4] {
        node_residual_jacobian(&self.pencil.lift(), &self.chart.lift_mix(), &self.chart.lift(), p).1
    }

    /// `v·p`; nodes off this plane are exactly the solutions with `D = 0`.
    pub fn kernel_value(&self, p: &ChartPoint) -> Complex64 {
        let v = self.chart.kernel();
        (0..4).map(|k| p[k] * v[k]).sum()
    }

    pub fn extended_values(&self, p: &ChartPoint) -> (Complex64, [Complex64; 25]) {
        extended_values(&self.pencil.lift(), p)
    }
}
