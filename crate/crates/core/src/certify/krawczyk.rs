//! Krawczyk existence/uniqueness test for the 4×4 node system over
//! rectangular complex boxes, and the conjugation test for reality.

use num_complex::Complex64;

use super::interval::{CInterval, Interval};
use crate::linalg::{Lu4, SymMat5};
use crate::pencil::ChartPoint;
use crate::polysys::{node_residual, node_residual_jacobian, Chart};

/// Four complex coordinate intervals.
pub type CBox = [CInterval; 4];

/// The node system with interval coefficients.
///
/// The generator enclosures may have positive width (e.g. rational entries
/// such as 1/3); every statement proved then holds for every pencil inside
/// the enclosure, in particular for the exact one.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalSystem {
    pub mats: [SymMat5<CInterval>; 4],
    pub real_mats: [SymMat5<Interval>; 4],
    pub mix: [[CInterval; 4]; 3],
    pub chart: [CInterval; 5],
    mid_mats: [SymMat5<Complex64>; 4],
    mid_mix: [[Complex64; 4]; 3],
    mid_chart: [Complex64; 5],
}

impl IntervalSystem {
    pub fn new(real_mats: [SymMat5<Interval>; 4], chart: &Chart) -> Self {
        let mats = real_mats.map(|m| m.map(CInterval::real));
        let mid_mats = real_mats.map(|m| m.map(|x| Complex64::new(x.mid(), 0.0)));
        IntervalSystem {
            mats,
            real_mats,
            mix: chart.lift_mix(),
            chart: chart.lift(),
            mid_mats,
            mid_mix: chart.lift_mix(),
            mid_chart: chart.lift(),
        }
    }

    pub fn residual(&self, x: &CBox) -> [CInterval; 4] {
        node_residual(&self.mats, &self.mix, &self.chart, x)
    }

    pub fn jacobian(&self, x: &CBox) -> [[CInterval; 4]; 4] {
        node_residual_jacobian(&self.mats, &self.mix, &self.chart, x).1
    }

    fn float_eval(&self, p: &ChartPoint) -> ([Complex64; 4], [[Complex64; 4]; 4]) {
        node_residual_jacobian(&self.mid_mats, &self.mid_mix, &self.mid_chart, p)
    }

    /// A few plain Newton steps on the midpoint system.
    pub fn refine(&self, p: &ChartPoint, steps: usize) -> ChartPoint {
        let mut p = *p;
        for _ in 0..steps {
            let (res, jac) = self.float_eval(&p);
            let Some(lu) = Lu4::new(&jac) else { break };
            let dx = lu.solve(&res);
            if dx.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                break;
            }
            for k in 0..4 {
                p[k] -= dx[k];
            }
        }
        p
    }
}

pub fn box_mid(x: &CBox) -> ChartPoint {
    x.map(|c| c.mid())
}

pub fn box_conj(x: &CBox) -> CBox {
    x.map(|c| c.conj())
}

pub fn box_interior_of(a: &CBox, b: &CBox) -> bool {
    a.iter().zip(b).all(|(x, y)| x.interior_of(y))
}

pub fn box_disjoint(a: &CBox, b: &CBox) -> bool {
    a.iter().zip(b).any(|(x, y)| x.disjoint(y))
}

pub fn box_intersect(a: &CBox, b: &CBox) -> Option<CBox> {
    Some([a[0].intersect(&b[0])?, a[1].intersect(&b[1])?, a[2].intersect(&b[2])?, a[3].intersect(&b[3])?])
}

pub fn box_rad(x: &CBox) -> f64 {
    x.iter().map(|c| c.rad()).fold(0.0, f64::max)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum KrawczykStep {
    /// `K(X) ⊂ int(X)`: exactly one zero in `X`, and it lies in `K`.
    Contained(CBox),
    /// `K(X) ∩ X = ∅`: no zero in `X`.
    Excluded,
    Inconclusive,
}

/// `K(X) = y − Y·F(y) + (I − Y·J(X))·(X − y)` with `y = mid(X)` and `Y` a
/// floating-point inverse of `J(y)`.
pub fn krawczyk_step(sys: &IntervalSystem, x: &CBox) -> KrawczykStep {
    let Some(k) = krawczyk_image(sys, x) else { return KrawczykStep::Inconclusive };
    if box_interior_of(&k, x) {
        KrawczykStep::Contained(k)
    } else if box_intersect(&k, x).is_none() {
        KrawczykStep::Excluded
    } else {
        KrawczykStep::Inconclusive
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reality {
    Real,
    Nonreal,
    Undecided,
}

/// A box proved to contain exactly one zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CertifiedBox {
    /// Tightened enclosure of the zero.
    pub enclosure: CBox,
    /// The box on which uniqueness was proved.
    pub outer: CBox,
    pub reality: Reality,
}

/// Number of box radii tried per solution.
pub const INFLATION_ATTEMPTS: usize = 5;

pub fn initial_radius(p: &ChartPoint) -> [f64; 4] {
    p.map(|z| 1e-4 * (1.0 + z.norm()))
}

/// Next inflation factor after a failed attempt with box radius `r` and
/// Krawczyk radius `k`. A wide image means the second-order term dominates
/// (`k ≈ a·r²`): shrink by at least ×0.1, further if the quadratic model
/// asks for it. A narrow image that still crossed the boundary is limited by
/// rounding: grow ×10.
pub fn next_inflation(r: f64, k: f64) -> f64 {
    if k > r {
        (0.1f64).min(0.25 * r / k)
    } else {
        10.0
    }
}

/// Reality from the pair `K ⊂ int(X)`: the conjugate of the zero is a zero
/// of the real system, so `conj(K) ⊂ int(X)` forces it to be the same one;
/// `conj(K) ∩ K = ∅` separates it from its conjugate.
pub fn reality_of(outer: &CBox, k: &CBox) -> Reality {
    let ck = box_conj(k);
    if box_interior_of(&ck, outer) {
        Reality::Real
    } else if box_disjoint(&ck, k) {
        Reality::Nonreal
    } else {
        Reality::Undecided
    }
}

/// Certifies a simple zero near `approx`, then contracts the enclosure.
pub fn krawczyk_certify(sys: &IntervalSystem, approx: &ChartPoint, extra_contractions: usize) -> Option<CertifiedBox> {
    let y = sys.refine(approx, 3);
    let base = initial_radius(&y);
    let mut mult = 1.0;
    for _ in 0..INFLATION_ATTEMPTS {
        let x: CBox = core::array::from_fn(|k| CInterval::around(y[k], base[k] * mult));
        let k0 = match krawczyk_image(sys, &x) {
            Some(k) if box_interior_of(&k, &x) => k,
            Some(k) => {
                mult *= next_inflation(box_rad(&x), box_rad(&k));
                continue;
            }
            None => return None,
        };
        let mut reality = reality_of(&x, &k0);
        let mut cur = k0;
        let mut prev_rad = box_rad(&cur);
        for _ in 0..(8 + extra_contractions) {
            let next = match krawczyk_step(sys, &cur) {
                KrawczykStep::Contained(k) => {
                    if reality == Reality::Undecided {
                        reality = reality_of(&cur, &k);
                    }
                    k
                }
                KrawczykStep::Inconclusive => match krawczyk_image(sys, &cur) {
                    Some(k) => k,
                    None => break,
                },
                KrawczykStep::Excluded => return None,
            };
            let Some(t) = box_intersect(&cur, &next) else { return None };
            let r = box_rad(&t);
            cur = t;
            if r > 0.5 * prev_rad && reality != Reality::Undecided {
                break;
            }
            prev_rad = r;
        }
        if reality == Reality::Undecided {
            if box_disjoint(&box_conj(&cur), &cur) {
                reality = Reality::Nonreal;
            }
        }
        return Some(CertifiedBox { enclosure: cur, outer: x, reality });
    }
    None
}

/// The Krawczyk image `K(X)`, or `None` when `J(mid X)` is singular. Every
/// zero in `X` lies in `K(X)`.
pub fn krawczyk_image(sys: &IntervalSystem, x: &CBox) -> Option<CBox> {
    let y = box_mid(x);
    let yb = y.map(CInterval::point);
    let fy = sys.residual(&yb);
    let jx = sys.jacobian(x);
    let (_, jy) = sys.float_eval(&y);
    let lu = Lu4::new(&jy)?;
    let yinv = lu.inverse().map(|r| r.map(CInterval::point));
    let mut k = [CInterval::point(Complex64::new(0.0, 0.0)); 4];
    for i in 0..4 {
        let mut acc = yb[i];
        for j in 0..4 {
            acc = acc - yinv[i][j] * fy[j];
        }
        for j in 0..4 {
            let mut m = if i == j { CInterval::point(Complex64::new(1.0, 0.0)) } else { CInterval::point(Complex64::new(0.0, 0.0)) };
            for l in 0..4 {
                m = m - yinv[i][l] * jx[l][j];
            }
            acc = acc + m * (x[j] - yb[j]);
        }
        k[i] = acc;
    }
    Some(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::prismatic_pencil;
    use crate::pencil::Pencil;

    fn sys_for(p: &Pencil, chart: &Chart) -> IntervalSystem {
        IntervalSystem::new(p.mats().map(|m| m.map(Interval::point)), chart)
    }

    #[test]
    fn far_box_is_not_certified() {
        let p = prismatic_pencil(1.0, 1.0);
        let chart = Chart::new([0.5, 0.5, 0.5, 0.5, -1.0]).unwrap();
        let sys = sys_for(&p, &chart);
        let c = |re: f64| CInterval::around(Complex64::new(re, 0.3), 1e-6);
        let x = [c(0.5), c(0.5), c(0.5), c(0.5)];
        assert!(!matches!(krawczyk_step(&sys, &x), KrawczykStep::Contained(_)));
    }

    #[test]
    fn inflation_steps() {
        assert_eq!(next_inflation(1e-4, 1e-6), 10.0);
        assert_eq!(next_inflation(1e-4, 2e-4), 0.1);
        assert!((next_inflation(1e-4, 1.0) - 2.5e-5).abs() < 1e-18);
    }

    #[test]
    fn box_predicates() {
        let a = [CInterval::around(Complex64::new(0.0, 0.0), 1.0); 4];
        let b = [CInterval::around(Complex64::new(0.0, 0.0), 0.5); 4];
        assert!(box_interior_of(&b, &a));
        assert!(!box_interior_of(&a, &b));
        let c = [CInterval::around(Complex64::new(3.0, 0.0), 0.5); 4];
        assert!(box_disjoint(&a, &c));
        assert_eq!(reality_of(&a, &b), Reality::Real);
        let e = [CInterval::around(Complex64::new(0.0, 0.6), 0.2); 4];
        let d = [CInterval::around(Complex64::new(0.0, 0.6), 0.1); 4];
        assert_eq!(reality_of(&e, &d), Reality::Nonreal);
    }
}
