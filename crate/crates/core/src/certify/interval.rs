//! Real and rectangular complex intervals with outward rounding.
//!
//! Every operation is evaluated in round-to-nearest and then widened by one
//! ulp on each side with `next_down`/`next_up`; the exact result of a single
//! IEEE operation is within half an ulp of the rounded one, so the widened
//! interval encloses it. A NaN endpoint widens to the whole line.

use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::scalar::Scalar;
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

#[inline]
fn down(x: f64) -> f64 {
    if x.is_nan() {
        f64::NEG_INFINITY
    } else {
        x.next_down()
    }
}

#[inline]
fn up(x: f64) -> f64 {
    if x.is_nan() {
        f64::INFINITY
    } else {
        x.next_up()
    }
}

impl Interval {
    pub const ENTIRE: Interval = Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY };

    /// `[lo, hi]`; the endpoints are taken as given.
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "interval endpoints out of order: [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub const fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    /// Symmetric interval `[m - r, m + r]`, rounded outward.
    pub fn around(m: f64, r: f64) -> Self {
        Interval { lo: down(m - r), hi: up(m + r) }
    }

    pub fn mid(&self) -> f64 {
        if self.lo.is_infinite() || self.hi.is_infinite() {
            return if self.lo == self.hi { self.lo } else { 0.0 };
        }
        let m = 0.5 * self.lo + 0.5 * self.hi;
        m.clamp(self.lo, self.hi)
    }

    pub fn rad(&self) -> f64 {
        let m = self.mid();
        up((self.hi - m).max(m - self.lo))
    }

    pub fn width(&self) -> f64 {
        up(self.hi - self.lo)
    }

    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    /// `self ⊂ int(other)`.
    pub fn interior_of(&self, other: &Interval) -> bool {
        other.lo < self.lo && self.hi < other.hi
    }

    pub fn subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
    }

    pub fn disjoint(&self, other: &Interval) -> bool {
        self.hi < other.lo || other.hi < self.lo
    }

    /// `1` or `-1` when the interval is strictly signed, else `0`.
    pub fn sign(&self) -> i8 {
        if self.lo > 0.0 {
            1
        } else if self.hi < 0.0 {
            -1
        } else {
            0
        }
    }

    pub fn sq(self) -> Interval {
        let a = self.lo * self.lo;
        let b = self.hi * self.hi;
        if self.contains_zero() {
            Interval { lo: 0.0, hi: up(a.max(b)) }
        } else {
            Interval { lo: down(a.min(b)).max(0.0), hi: up(a.max(b)) }
        }
    }

    pub fn recip(self) -> Result<Interval, Error> {
        if self.contains_zero() {
            return Err(Error::DivisionByZero);
        }
        let a = 1.0 / self.lo;
        let b = 1.0 / self.hi;
        Ok(Interval { lo: down(a.min(b)), hi: up(a.max(b)) })
    }

    pub fn checked_div(self, o: Interval) -> Result<Interval, Error> {
        if o.contains_zero() {
            return Err(Error::DivisionByZero);
        }
        let q = [self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi];
        Ok(hull4(q))
    }
}

fn hull4(q: [f64; 4]) -> Interval {
    if q.iter().any(|x| x.is_nan()) {
        return Interval::ENTIRE;
    }
    let lo = q.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Interval { lo: down(lo), hi: up(hi) }
}

impl Add for Interval {
    type Output = Interval;
    #[inline]
    fn add(self, o: Interval) -> Interval {
        Interval { lo: down(self.lo + o.lo), hi: up(self.hi + o.hi) }
    }
}

impl Sub for Interval {
    type Output = Interval;
    #[inline]
    fn sub(self, o: Interval) -> Interval {
        Interval { lo: down(self.lo - o.hi), hi: up(self.hi - o.lo) }
    }
}

impl Mul for Interval {
    type Output = Interval;
    #[inline]
    fn mul(self, o: Interval) -> Interval {
        // Exact zero times anything finite stays exactly zero.
        if (self.lo == 0.0 && self.hi == 0.0) || (o.lo == 0.0 && o.hi == 0.0) {
            return Interval::point(0.0);
        }
        hull4([self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi])
    }
}

impl Neg for Interval {
    type Output = Interval;
    #[inline]
    fn neg(self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }
}

impl Scalar for Interval {
    fn zero() -> Self {
        Interval::point(0.0)
    }
    fn one() -> Self {
        Interval::point(1.0)
    }
    fn from_f64(x: f64) -> Self {
        Interval::point(x)
    }
}

/// Rectangular complex interval `re + i·im`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CInterval {
    pub re: Interval,
    pub im: Interval,
}

impl CInterval {
    pub const fn new(re: Interval, im: Interval) -> Self {
        CInterval { re, im }
    }

    pub const fn point(z: Complex64) -> Self {
        CInterval { re: Interval::point(z.re), im: Interval::point(z.im) }
    }

    pub const fn real(x: Interval) -> Self {
        CInterval { re: x, im: Interval::point(0.0) }
    }

    pub fn around(z: Complex64, r: f64) -> Self {
        CInterval { re: Interval::around(z.re, r), im: Interval::around(z.im, r) }
    }

    pub fn mid(&self) -> Complex64 {
        Complex64::new(self.re.mid(), self.im.mid())
    }

    pub fn conj(&self) -> Self {
        CInterval { re: self.re, im: -self.im }
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.re.contains(z.re) && self.im.contains(z.im)
    }

    pub fn interior_of(&self, o: &CInterval) -> bool {
        self.re.interior_of(&o.re) && self.im.interior_of(&o.im)
    }

    pub fn subset_of(&self, o: &CInterval) -> bool {
        self.re.subset_of(&o.re) && self.im.subset_of(&o.im)
    }

    pub fn intersect(&self, o: &CInterval) -> Option<CInterval> {
        Some(CInterval { re: self.re.intersect(&o.re)?, im: self.im.intersect(&o.im)? })
    }

    pub fn disjoint(&self, o: &CInterval) -> bool {
        self.re.disjoint(&o.re) || self.im.disjoint(&o.im)
    }

    pub fn rad(&self) -> f64 {
        self.re.rad().max(self.im.rad())
    }

    pub fn mag(&self) -> f64 {
        let r = self.re.mag();
        let i = self.im.mag();
        up((r * r + i * i).sqrt_up())
    }

    pub fn sq(self) -> CInterval {
        CInterval { re: self.re.sq() - self.im.sq(), im: Interval::point(2.0) * self.re * self.im }
    }

    /// `1 / z` via `conj(z) / |z|²`.
    pub fn checked_recip(self) -> Result<CInterval, Error> {
        let n = self.re.sq() + self.im.sq();
        let inv = n.recip()?;
        Ok(CInterval { re: self.re * inv, im: -self.im * inv })
    }

    pub fn checked_div(self, o: CInterval) -> Result<CInterval, Error> {
        Ok(self * o.checked_recip()?)
    }
}

trait SqrtUp {
    fn sqrt_up(self) -> f64;
}

impl SqrtUp for f64 {
    fn sqrt_up(self) -> f64 {
        up(num_traits::Float::sqrt(self))
    }
}

impl Add for CInterval {
    type Output = CInterval;
    #[inline]
    fn add(self, o: CInterval) -> CInterval {
        CInterval { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Sub for CInterval {
    type Output = CInterval;
    #[inline]
    fn sub(self, o: CInterval) -> CInterval {
        CInterval { re: self.re - o.re, im: self.im - o.im }
    }
}

impl Mul for CInterval {
    type Output = CInterval;
    #[inline]
    fn mul(self, o: CInterval) -> CInterval {
        CInterval { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }
}

impl Neg for CInterval {
    type Output = CInterval;
    #[inline]
    fn neg(self) -> CInterval {
        CInterval { re: -self.re, im: -self.im }
    }
}

impl Scalar for CInterval {
    fn zero() -> Self {
        CInterval::point(Complex64::new(0.0, 0.0))
    }
    fn one() -> Self {
        CInterval::point(Complex64::new(1.0, 0.0))
    }
    fn from_f64(x: f64) -> Self {
        CInterval::point(Complex64::new(x, 0.0))
    }
}

/// Tightest outward enclosure of the real number nearest to `x` when `x`
/// itself may have been rounded: `[x⁻, x⁺]` one ulp either side, or the
/// point `x` when `exact`.
pub fn enclose(x: f64, exact: bool) -> Interval {
    if exact {
        Interval::point(x)
    } else {
        Interval { lo: x.next_down(), hi: x.next_up() }
    }
}
