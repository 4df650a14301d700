//! Outward-rounded interval arithmetic over reals and rectangular complex boxes.
//!
//! Every operation returns an enclosure of the exact result for all members of
//! its operands. Rounding is handled after the fact: each floating-point result
//! is checked with an error-free transformation (TwoSum, or an FMA residual for
//! products, quotients and square roots) and the bound is stepped one ulp in
//! whichever direction the exact value may lie. Exact results stay exact, so
//! `[1, 2] + [3, 4]` is `[4, 6]`.
//!
//! Nothing here touches the FPU rounding mode, so values are safe to share
//! across threads.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Below this magnitude FMA residuals may underflow; fall back to widening
/// both ways.
const TINY: f64 = 1.0e-290;

fn nonfinite_bounds(x: f64) -> (f64, f64) {
    if x == f64::INFINITY {
        (f64::MAX, f64::INFINITY)
    } else if x == f64::NEG_INFINITY {
        (f64::NEG_INFINITY, f64::MIN)
    } else {
        (f64::NEG_INFINITY, f64::INFINITY)
    }
}

/// Directed bounds `(down, up)` for the exact sum `a + b`.
#[inline]
pub(crate) fn add_bounds(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    if !s.is_finite() {
        return nonfinite_bounds(s);
    }
    // Knuth's TwoSum: s + e == a + b exactly.
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    if e > 0.0 {
        (s, s.next_up())
    } else if e < 0.0 {
        (s.next_down(), s)
    } else {
        (s, s)
    }
}

#[inline]
pub(crate) fn mul_bounds(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    if !p.is_finite() {
        return nonfinite_bounds(p);
    }
    if a == 0.0 || b == 0.0 {
        return (0.0, 0.0);
    }
    if p.abs() < TINY {
        return (p.next_down(), p.next_up());
    }
    let e = a.mul_add(b, -p);
    if e > 0.0 {
        (p, p.next_up())
    } else if e < 0.0 {
        (p.next_down(), p)
    } else {
        (p, p)
    }
}

#[inline]
pub(crate) fn div_bounds(a: f64, b: f64) -> (f64, f64) {
    let q = a / b;
    if !q.is_finite() {
        return nonfinite_bounds(q);
    }
    if a == 0.0 {
        return (0.0, 0.0);
    }
    if q.abs() < TINY || a.abs() < TINY {
        return (q.next_down(), q.next_up());
    }
    // a - q*b is exact; the true quotient is q + r/b.
    let r = (-q).mul_add(b, a);
    let dir = r * b.signum();
    if dir > 0.0 {
        (q, q.next_up())
    } else if dir < 0.0 {
        (q.next_down(), q)
    } else {
        (q, q)
    }
}

#[inline]
pub(crate) fn sqrt_bounds(x: f64) -> (f64, f64) {
    debug_assert!(x >= 0.0);
    let s = x.sqrt();
    if !s.is_finite() {
        return nonfinite_bounds(s);
    }
    if x == 0.0 {
        return (0.0, 0.0);
    }
    if x < TINY {
        return (s.next_down().max(0.0), s.next_up());
    }
    let r = (-s).mul_add(s, x);
    if r > 0.0 {
        (s, s.next_up())
    } else if r < 0.0 {
        (s.next_down(), s)
    } else {
        (s, s)
    }
}

/// `exp` from the platform libm is not correctly rounded; two ulps each way
/// covers its documented error.
#[inline]
fn exp_bounds(x: f64) -> (f64, f64) {
    if x == 0.0 {
        return (1.0, 1.0);
    }
    let e = x.exp();
    if e.is_infinite() {
        return (f64::MAX, f64::INFINITY);
    }
    let lo = e.next_down().next_down().max(0.0);
    let hi = e.next_up().next_up();
    (lo, hi)
}

/// Closed real interval `[lo, hi]`.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealInterval {
    lo: f64,
    hi: f64,
}

impl fmt::Debug for RealInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl fmt::Display for RealInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl RealInterval {
    pub const ZERO: RealInterval = RealInterval { lo: 0.0, hi: 0.0 };
    pub const ONE: RealInterval = RealInterval { lo: 1.0, hi: 1.0 };

    /// Panics if `lo > hi` or either bound is NaN.
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "invalid interval [{lo}, {hi}]");
        RealInterval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        assert!(!x.is_nan(), "NaN interval");
        RealInterval { lo: x, hi: x }
    }

    /// The smallest interval containing the decimal value that `x` was
    /// rounded from (one ulp either side).
    pub fn around(x: f64) -> Self {
        RealInterval { lo: x.next_down(), hi: x.next_up() }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn mid(&self) -> f64 {
        if self.lo == self.hi {
            return self.lo;
        }
        let m = 0.5 * self.lo + 0.5 * self.hi;
        m.clamp(self.lo, self.hi)
    }

    /// Upper bound on `hi - lo`.
    pub fn width(&self) -> f64 {
        add_bounds(self.hi, -self.lo).1
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &RealInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn overlaps(&self, other: &RealInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn hull(&self, other: &RealInterval) -> RealInterval {
        RealInterval { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
    }

    pub fn intersect(&self, other: &RealInterval) -> Option<RealInterval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(RealInterval { lo, hi })
    }

    /// Widen by `r >= 0` on both sides, rounding outward.
    pub fn inflate(&self, r: f64) -> RealInterval {
        debug_assert!(r >= 0.0);
        RealInterval { lo: add_bounds(self.lo, -r).0, hi: add_bounds(self.hi, r).1 }
    }

    /// Largest absolute value of a member.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// Smallest absolute value of a member.
    pub fn mig(&self) -> f64 {
        if self.contains_zero() {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn abs(&self) -> RealInterval {
        RealInterval { lo: self.mig(), hi: self.mag() }
    }

    pub fn max(&self, other: &RealInterval) -> RealInterval {
        RealInterval { lo: self.lo.max(other.lo), hi: self.hi.max(other.hi) }
    }

    pub fn min(&self, other: &RealInterval) -> RealInterval {
        RealInterval { lo: self.lo.min(other.lo), hi: self.hi.min(other.hi) }
    }

    /// `x²`, tighter than `x * x` when the interval straddles zero.
    pub fn sqr(&self) -> RealInterval {
        if self.lo >= 0.0 {
            RealInterval { lo: mul_bounds(self.lo, self.lo).0, hi: mul_bounds(self.hi, self.hi).1 }
        } else if self.hi <= 0.0 {
            RealInterval { lo: mul_bounds(self.hi, self.hi).0, hi: mul_bounds(self.lo, self.lo).1 }
        } else {
            let m = self.mag();
            RealInterval { lo: 0.0, hi: mul_bounds(m, m).1 }
        }
    }

    pub fn powi(&self, k: u32) -> RealInterval {
        let mut acc = RealInterval::ONE;
        for _ in 0..k {
            acc = acc * *self;
        }
        acc
    }

    pub fn try_div(&self, rhs: &RealInterval) -> Result<RealInterval> {
        if rhs.contains_zero() {
            return Err(Error::DivisionByZeroInterval);
        }
        let q = [
            div_bounds(self.lo, rhs.lo),
            div_bounds(self.lo, rhs.hi),
            div_bounds(self.hi, rhs.lo),
            div_bounds(self.hi, rhs.hi),
        ];
        Ok(from_candidates(&q))
    }

    pub fn recip(&self) -> Result<RealInterval> {
        RealInterval::ONE.try_div(self)
    }

    /// Divide by an exact nonzero scalar.
    pub fn div_scalar(&self, d: f64) -> RealInterval {
        assert!(d != 0.0 && d.is_finite());
        let a = div_bounds(self.lo, d);
        let b = div_bounds(self.hi, d);
        RealInterval { lo: a.0.min(b.0), hi: a.1.max(b.1) }
    }

    pub fn mul_scalar(&self, s: f64) -> RealInterval {
        let a = mul_bounds(self.lo, s);
        let b = mul_bounds(self.hi, s);
        RealInterval { lo: a.0.min(b.0), hi: a.1.max(b.1) }
    }

    /// Square root on the nonnegative part of the interval.
    ///
    /// Members below zero are discarded, so callers must know the exact
    /// argument is nonnegative (a modulus, a sum of squares).
    pub fn sqrt_nonneg(&self) -> Result<RealInterval> {
        if self.hi < 0.0 {
            return Err(Error::OutOfRange(format!("sqrt of negative interval {self}")));
        }
        let lo = if self.lo <= 0.0 { 0.0 } else { sqrt_bounds(self.lo).0 };
        Ok(RealInterval { lo, hi: sqrt_bounds(self.hi).1 })
    }

    pub fn exp(&self) -> RealInterval {
        RealInterval { lo: exp_bounds(self.lo).0, hi: exp_bounds(self.hi).1 }
    }
}

fn from_candidates(c: &[(f64, f64); 4]) -> RealInterval {
    let lo = c.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hi = c.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    RealInterval { lo, hi }
}

impl From<f64> for RealInterval {
    fn from(x: f64) -> Self {
        RealInterval::point(x)
    }
}

impl Add for RealInterval {
    type Output = RealInterval;
    #[inline]
    fn add(self, rhs: RealInterval) -> RealInterval {
        RealInterval { lo: add_bounds(self.lo, rhs.lo).0, hi: add_bounds(self.hi, rhs.hi).1 }
    }
}

impl Sub for RealInterval {
    type Output = RealInterval;
    #[inline]
    fn sub(self, rhs: RealInterval) -> RealInterval {
        RealInterval { lo: add_bounds(self.lo, -rhs.hi).0, hi: add_bounds(self.hi, -rhs.lo).1 }
    }
}

impl Neg for RealInterval {
    type Output = RealInterval;
    #[inline]
    fn neg(self) -> RealInterval {
        RealInterval { lo: -self.hi, hi: -self.lo }
    }
}

impl Mul for RealInterval {
    type Output = RealInterval;
    #[inline]
    fn mul(self, rhs: RealInterval) -> RealInterval {
        if self.lo == self.hi && rhs.lo == rhs.hi {
            let (lo, hi) = mul_bounds(self.lo, rhs.lo);
            return RealInterval { lo, hi };
        }
        let c = [
            mul_bounds(self.lo, rhs.lo),
            mul_bounds(self.lo, rhs.hi),
            mul_bounds(self.hi, rhs.lo),
            mul_bounds(self.hi, rhs.hi),
        ];
        from_candidates(&c)
    }
}

/// The four real operations, for callers that dispatch on an operator value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn iv_arith(op: ArithOp, x: RealInterval, y: RealInterval) -> Result<RealInterval> {
    match op {
        ArithOp::Add => Ok(x + y),
        ArithOp::Sub => Ok(x - y),
        ArithOp::Mul => Ok(x * y),
        ArithOp::Div => x.try_div(&y),
    }
}

/// Rectangular enclosure `re + i·im` of a set of complex numbers.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexBox {
    pub re: RealInterval,
    pub im: RealInterval,
}

impl fmt::Debug for ComplexBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} + i{:?}", self.re, self.im)
    }
}

impl ComplexBox {
    pub const ZERO: ComplexBox = ComplexBox { re: RealInterval::ZERO, im: RealInterval::ZERO };
    pub const ONE: ComplexBox = ComplexBox { re: RealInterval::ONE, im: RealInterval::ZERO };

    pub fn new(re: RealInterval, im: RealInterval) -> Self {
        ComplexBox { re, im }
    }

    pub fn point(z: Complex64) -> Self {
        ComplexBox { re: RealInterval::point(z.re), im: RealInterval::point(z.im) }
    }

    pub fn real(x: RealInterval) -> Self {
        ComplexBox { re: x, im: RealInterval::ZERO }
    }

    pub fn mid(&self) -> Complex64 {
        Complex64::new(self.re.mid(), self.im.mid())
    }

    /// Larger of the two component widths.
    pub fn width(&self) -> f64 {
        self.re.width().max(self.im.width())
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.re.contains(z.re) && self.im.contains(z.im)
    }

    pub fn contains_box(&self, other: &ComplexBox) -> bool {
        self.re.contains_interval(&other.re) && self.im.contains_interval(&other.im)
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn overlaps(&self, other: &ComplexBox) -> bool {
        self.re.overlaps(&other.re) && self.im.overlaps(&other.im)
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn hull(&self, other: &ComplexBox) -> ComplexBox {
        ComplexBox { re: self.re.hull(&other.re), im: self.im.hull(&other.im) }
    }

    pub fn inflate(&self, r: f64) -> ComplexBox {
        ComplexBox { re: self.re.inflate(r), im: self.im.inflate(r) }
    }

    pub fn conj(&self) -> ComplexBox {
        ComplexBox { re: self.re, im: -self.im }
    }

    /// Multiply by `i` (exact).
    pub fn mul_i(&self) -> ComplexBox {
        ComplexBox { re: -self.im, im: self.re }
    }

    pub fn scale(&self, s: RealInterval) -> ComplexBox {
        ComplexBox { re: self.re * s, im: self.im * s }
    }

    pub fn div_scalar(&self, d: f64) -> ComplexBox {
        ComplexBox { re: self.re.div_scalar(d), im: self.im.div_scalar(d) }
    }

    /// Enclosure of `|z|²` over the box.
    pub fn norm_sqr(&self) -> RealInterval {
        self.re.sqr() + self.im.sqr()
    }

    /// Enclosure of `|z|` over the box.
    pub fn modulus(&self) -> RealInterval {
        self.norm_sqr().sqrt_nonneg().expect("sum of squares is nonnegative")
    }

    pub fn try_div(&self, rhs: &ComplexBox) -> Result<ComplexBox> {
        let den = rhs.norm_sqr();
        if den.lo() <= 0.0 {
            return Err(Error::DivisionByZeroInterval);
        }
        let num = *self * rhs.conj();
        Ok(ComplexBox { re: num.re.try_div(&den)?, im: num.im.try_div(&den)? })
    }

    pub fn recip(&self) -> Result<ComplexBox> {
        ComplexBox::ONE.try_div(self)
    }

    /// Square root on the branch continuous over a box that misses the cut
    /// `(-inf, 0]`; caller guarantees that.
    fn principal_sqrt_off_cut(&self) -> Result<ComplexBox> {
        let x = self.re;
        let y = self.im;
        let r = self.modulus();
        let half = |v: RealInterval| v.div_scalar(2.0);
        let mut re = half(r + x).sqrt_nonneg()?;
        let im_abs = half(r - x).sqrt_nonneg()?;
        let mut im = if y.lo() > 0.0 {
            im_abs
        } else if y.hi() < 0.0 {
            -im_abs
        } else {
            // Straddles the positive real axis.
            RealInterval::new(-im_abs.hi(), im_abs.hi())
        };
        // Cross formulas re = y/(2 im), im = y/(2 re) are exact identities on
        // this branch; intersect to undo cancellation in (r ± x).
        if re.lo() > 0.0 {
            if let Some(t) = im.intersect(&y.try_div(&re.mul_scalar(2.0))?) {
                im = t;
            }
        }
        if im.mig() > 0.0 {
            if let Some(t) = re.intersect(&y.try_div(&im.mul_scalar(2.0))?) {
                re = t;
            }
        }
        Ok(ComplexBox { re, im })
    }

    /// Both square roots as a pair `(r, -r)` of boxes, each enclosing one
    /// continuous branch over `self`.
    pub fn sqrt_pair(&self) -> Result<(ComplexBox, ComplexBox)> {
        if self.contains_zero() {
            return Err(Error::BranchAmbiguity("square root of a box containing 0".into()));
        }
        let touches_cut = self.re.lo() <= 0.0 && self.im.contains_zero();
        let root = if touches_cut {
            // The box misses [0, inf), so -self misses the cut: sqrt(x) = i·sqrt(-x).
            (-*self).principal_sqrt_off_cut()?.mul_i()
        } else {
            self.principal_sqrt_off_cut()?
        };
        Ok((root, -root))
    }

    /// The square root whose whole box is strictly nearer to every point of
    /// `hint` than any point of the opposite root.
    pub fn sqrt_near(&self, hint: &ComplexBox) -> Result<ComplexBox> {
        let (r, s) = self.sqrt_pair()?;
        let dr = (r - *hint).modulus();
        let ds = (s - *hint).modulus();
        if dr.hi() < ds.lo() {
            Ok(r)
        } else if ds.hi() < dr.lo() {
            Ok(s)
        } else {
            Err(Error::BranchAmbiguity(format!(
                "roots {:?} and {:?} are not separated relative to hint {:?}",
                r.mid(),
                s.mid(),
                hint.mid()
            )))
        }
    }
}

impl From<Complex64> for ComplexBox {
    fn from(z: Complex64) -> Self {
        ComplexBox::point(z)
    }
}

impl From<RealInterval> for ComplexBox {
    fn from(x: RealInterval) -> Self {
        ComplexBox::real(x)
    }
}

impl Add for ComplexBox {
    type Output = ComplexBox;
    #[inline]
    fn add(self, rhs: ComplexBox) -> ComplexBox {
        ComplexBox { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl Sub for ComplexBox {
    type Output = ComplexBox;
    #[inline]
    fn sub(self, rhs: ComplexBox) -> ComplexBox {
        ComplexBox { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl Neg for ComplexBox {
    type Output = ComplexBox;
    #[inline]
    fn neg(self) -> ComplexBox {
        ComplexBox { re: -self.re, im: -self.im }
    }
}

impl Mul for ComplexBox {
    type Output = ComplexBox;
    #[inline]
    fn mul(self, rhs: ComplexBox) -> ComplexBox {
        ComplexBox {
            re: self.re * rhs.re - self.im * rhs.im,
            im: self.re * rhs.im + self.im * rhs.re,
        }
    }
}

/// Complex box operations, for callers that dispatch on an operator value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ComplexOp {
    Add,
    Sub,
    Mul,
    Div,
    Conj,
    /// Square root nearest the given branch hint.
    Sqrt { hint: Complex64 },
}

pub fn cbox_arith(op: ComplexOp, x: ComplexBox, y: Option<ComplexBox>) -> Result<ComplexBox> {
    let rhs = || y.ok_or_else(|| Error::PreconditionViolation(format!("{op:?} needs two operands")));
    match op {
        ComplexOp::Add => Ok(x + rhs()?),
        ComplexOp::Sub => Ok(x - rhs()?),
        ComplexOp::Mul => Ok(x * rhs()?),
        ComplexOp::Div => x.try_div(&rhs()?),
        ComplexOp::Conj => Ok(x.conj()),
        ComplexOp::Sqrt { hint } => x.sqrt_near(&ComplexBox::point(hint)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> RealInterval {
        RealInterval::new(lo, hi)
    }

    #[test]
    fn exact_endpoint_addition() {
        assert_eq!(iv(1.0, 2.0) + iv(3.0, 4.0), iv(4.0, 6.0));
    }

    #[test]
    fn mixed_sign_product() {
        assert_eq!(iv(1.0, 2.0) * iv(-1.0, 1.0), iv(-2.0, 2.0));
    }

    #[test]
    fn division_by_zero_interval() {
        assert_eq!(
            iv_arith(ArithOp::Div, iv(1.0, 1.0), iv(-1.0, 1.0)),
            Err(Error::DivisionByZeroInterval)
        );
    }

    #[test]
    fn inexact_sum_is_stepped_outward() {
        let s = RealInterval::point(0.1) + RealInterval::point(0.2);
        // 0.1 + 0.2 rounds up to 0.30000000000000004; exact sum lies just below.
        assert_eq!(s.hi(), 0.1 + 0.2);
        assert_eq!(s.lo(), (0.1f64 + 0.2).next_down());
    }

    #[test]
    fn one_third_encloses() {
        let q = RealInterval::ONE.div_scalar(3.0);
        assert!(q.width() > 0.0);
        assert!(q.lo() < q.hi());
        assert!(q.contains(1.0 / 3.0));
    }

    #[test]
    fn sqrt_of_perfect_square_is_exact() {
        assert_eq!(iv(4.0, 9.0).sqrt_nonneg().unwrap(), iv(2.0, 3.0));
        assert!(iv(-2.0, -1.0).sqrt_nonneg().is_err());
    }

    #[test]
    fn i_squared() {
        let i = ComplexBox::point(Complex64::new(0.0, 1.0));
        let p = cbox_arith(ComplexOp::Mul, i, Some(i)).unwrap();
        assert_eq!(p, ComplexBox::point(Complex64::new(-1.0, 0.0)));
    }

    #[test]
    fn conjugation() {
        let z = ComplexBox::point(Complex64::new(2.0, 3.0));
        assert_eq!(cbox_arith(ComplexOp::Conj, z, None).unwrap(), ComplexBox::point(Complex64::new(2.0, -3.0)));
    }

    #[test]
    fn sqrt_on_negative_axis_follows_hint() {
        let x = ComplexBox::point(Complex64::new(-0.75394, 0.0));
        let up = cbox_arith(ComplexOp::Sqrt { hint: Complex64::new(0.0, 0.87) }, x, None).unwrap();
        assert!(up.contains(Complex64::new(0.0, 0.75394f64.sqrt())));
        // Independent check: square the midpoint in plain arithmetic.
        let m = up.mid();
        let sq = m * m;
        assert!((sq.re + 0.75394).abs() < 1e-15 && sq.im.abs() < 1e-15);
        assert!((m.im - 0.86829).abs() < 1e-5);

        let down = x.sqrt_near(&ComplexBox::point(Complex64::new(0.1, -1.0))).unwrap();
        assert!(down.contains(Complex64::new(0.0, -0.75394f64.sqrt())));
    }

    #[test]
    fn sqrt_hint_equidistant_is_ambiguous() {
        let x = ComplexBox::point(Complex64::new(4.0, 0.0));
        let hint = ComplexBox::point(Complex64::new(0.0, 1.0));
        assert!(matches!(x.sqrt_near(&hint), Err(Error::BranchAmbiguity(_))));
        let z = ComplexBox::new(iv(-1.0, 1.0), iv(-1.0, 1.0));
        assert!(matches!(z.sqrt_pair(), Err(Error::BranchAmbiguity(_))));
    }

    #[test]
    fn complex_division() {
        let a = ComplexBox::point(Complex64::new(1.0, 2.0));
        let b = ComplexBox::point(Complex64::new(3.0, -4.0));
        let q = a.try_div(&b).unwrap();
        assert!((q.mid() - Complex64::new(-0.2, 0.4)).norm() < 1e-15);
        assert_eq!(a.try_div(&ComplexBox::ZERO), Err(Error::DivisionByZeroInterval));
    }

    #[test]
    fn sqr_straddling_zero() {
        assert_eq!(iv(-3.0, 2.0).sqr(), iv(0.0, 9.0));
        assert_eq!(iv(-3.0, -2.0).sqr(), iv(4.0, 9.0));
    }
}
