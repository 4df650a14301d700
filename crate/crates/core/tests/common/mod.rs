//! Exact rational oracle and random operand generators shared by the
//! integration tests and the acceptance harness.
#![allow(dead_code)]

use bryant::{ArithOp, ComplexBox, RealInterval};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;

pub fn rat(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite operand")
}

pub fn in_interval(x: &BigRational, iv: &RealInterval) -> bool {
    rat(iv.lo()) <= *x && *x <= rat(iv.hi())
}

/// A finite double whose magnitude spans several decades, with a bias toward
/// small integers and zero so that exact-endpoint cases are exercised.
pub fn sample_f64<R: Rng>(rng: &mut R) -> f64 {
    match rng.gen_range(0..10) {
        0 => 0.0,
        1 => rng.gen_range(-4i32..=4) as f64,
        2..=4 => rng.gen_range(-1.0..1.0) * 10f64.powi(rng.gen_range(-6..=6)),
        _ => rng.gen_range(-10.0..10.0),
    }
}

pub fn sample_interval<R: Rng>(rng: &mut R) -> RealInterval {
    let a = sample_f64(rng);
    let b = if rng.gen_bool(0.2) { a } else { a + rng.gen_range(0.0..1.0) * 10f64.powi(rng.gen_range(-8..=1)) };
    RealInterval::new(a.min(b), a.max(b))
}

/// A double inside `iv`, endpoints included with positive probability.
pub fn member<R: Rng>(rng: &mut R, iv: &RealInterval) -> f64 {
    match rng.gen_range(0..6) {
        0 => iv.lo(),
        1 => iv.hi(),
        _ => (iv.lo() + rng.gen_range(0.0..1.0) * (iv.hi() - iv.lo())).clamp(iv.lo(), iv.hi()),
    }
}

pub fn sample_box<R: Rng>(rng: &mut R) -> ComplexBox {
    ComplexBox::new(sample_interval(rng), sample_interval(rng))
}

pub fn box_member<R: Rng>(rng: &mut R, b: &ComplexBox) -> Complex64 {
    Complex64::new(member(rng, &b.re), member(rng, &b.im))
}

/// Exact real result of `x op y`, or `None` for division by zero.
pub fn exact_real(op: ArithOp, x: f64, y: f64) -> Option<BigRational> {
    let (x, y) = (rat(x), rat(y));
    Some(match op {
        ArithOp::Add => x + y,
        ArithOp::Sub => x - y,
        ArithOp::Mul => x * y,
        ArithOp::Div => {
            if y.is_zero() {
                return None;
            }
            x / y
        }
    })
}

#[derive(Clone, Debug)]
pub struct RatComplex {
    pub re: BigRational,
    pub im: BigRational,
}

impl RatComplex {
    pub fn from_c64(z: Complex64) -> Self {
        RatComplex { re: rat(z.re), im: rat(z.im) }
    }

    pub fn in_box(&self, b: &ComplexBox) -> bool {
        in_interval(&self.re, &b.re) && in_interval(&self.im, &b.im)
    }
}

pub fn exact_complex_mul(x: Complex64, y: Complex64) -> RatComplex {
    let (x, y) = (RatComplex::from_c64(x), RatComplex::from_c64(y));
    RatComplex {
        re: &x.re * &y.re - &x.im * &y.im,
        im: &x.re * &y.im + &x.im * &y.re,
    }
}

pub fn exact_complex_div(x: Complex64, y: Complex64) -> Option<RatComplex> {
    let (x, y) = (RatComplex::from_c64(x), RatComplex::from_c64(y));
    let den = &y.re * &y.re + &y.im * &y.im;
    if den.is_zero() {
        return None;
    }
    Some(RatComplex {
        re: (&x.re * &y.re + &x.im * &y.im) / &den,
        im: (&x.im * &y.re - &x.re * &y.im) / &den,
    })
}

/// Decide `u <= sqrt((sqrt(q) + s) / 2)` exactly, for rational `u`, `s` and
/// `q >= 0`.
fn le_half_root(u: &BigRational, q: &BigRational, s: &BigRational) -> bool {
    if !u.is_positive() {
        return true;
    }
    let two = BigRational::from_integer(BigInt::from(2));
    let t = &two * u * u - s;
    !t.is_positive() || &t * &t <= *q
}

/// Decide `u >= sqrt((sqrt(q) + s) / 2)` exactly.
fn ge_half_root(u: &BigRational, q: &BigRational, s: &BigRational) -> bool {
    if u.is_negative() {
        return false;
    }
    let two = BigRational::from_integer(BigInt::from(2));
    let t = &two * u * u - s;
    !t.is_negative() && &t * &t >= *q
}

/// Whether `[lo, hi]` contains `sign * sqrt((sqrt(q) + s) / 2)`.
fn interval_holds_half_root(iv: &RealInterval, q: &BigRational, s: &BigRational, negative: bool) -> bool {
    if negative {
        let flipped = -*iv;
        interval_holds_half_root(&flipped, q, s, false)
    } else {
        le_half_root(&rat(iv.lo()), q, s) && ge_half_root(&rat(iv.hi()), q, s)
    }
}

/// Whether `b` contains one of the two exact square roots of `x`.
///
/// The principal root is `R + i·sgn(Im x)·I` with
/// `R = sqrt((|x| + Re x)/2)` and `I = sqrt((|x| - Re x)/2)`; the check is
/// carried out entirely in rational arithmetic.
pub fn box_holds_sqrt(b: &ComplexBox, x: Complex64) -> bool {
    let xr = rat(x.re);
    let xi = rat(x.im);
    let q = &xr * &xr + &xi * &xi;
    let im_negative = xi.is_negative();
    [false, true].iter().any(|&flip| {
        interval_holds_half_root(&b.re, &q, &xr, flip)
            && interval_holds_half_root(&b.im, &q, &(-xr.clone()), im_negative ^ flip)
    })
}
