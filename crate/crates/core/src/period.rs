//! Monodromy of `F` around the three generating loops, assembled from the two
//! open-path endpoint matrices through the surface symmetries, the period
//! functions `f₁`, `f₂`, and the gauge that turns `f₁ = f₂ > 2` into unitary
//! monodromy.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrator::{ComplexMatrix, Matrix2, MatrixEnclosure};
use crate::interval::{ComplexBox, RealInterval};
use crate::surface::Symmetry;

/// Relative bracket width at which the gauge bisection stops.
const BETA_REL_TOL: f64 = 1e-14;

/// How `F` at a point transforms when the point is moved by a symmetry,
/// for the solution normalized to the identity at `(0, 1)`.
pub fn symmetry_matrix(s: Symmetry, f: &MatrixEnclosure) -> MatrixEnclosure {
    let Matrix2 { a11: a, a12: b, a21: c, a22: d } = *f;
    match s {
        Symmetry::Conjugate => Matrix2::new(a.conj(), b.conj(), c.conj(), d.conj()),
        Symmetry::Antipodal => Matrix2::new(d, c, b, a),
        Symmetry::ConjugateAntipodal => Matrix2::new(d.conj(), c.conj(), b.conj(), a.conj()),
        Symmetry::ConjugateFlip => Matrix2::new(a.conj(), -b.conj(), -c.conj(), d.conj()),
    }
}

/// Monodromy around `γ₁`, `γ₂` and `γ₃`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonodromyPair {
    pub phi: MatrixEnclosure,
    pub psi: MatrixEnclosure,
    pub psi3: MatrixEnclosure,
}

impl MonodromyPair {
    pub fn determinants_contain_one(&self) -> bool {
        let one = Complex64::new(1.0, 0.0);
        [self.phi, self.psi, self.psi3].iter().all(|m| m.det().contains(one))
    }
}

/// Assemble the three monodromies from the endpoint enclosures `F1` of
/// `α₁` and `F2` of `α₂`.
pub fn assemble_monodromies(f1: &MatrixEnclosure, f2: &MatrixEnclosure) -> MonodromyPair {
    let Matrix2 { a11: a1, a12: b1, a21: c1, a22: d1 } = *f1;
    let phi = f1
        .mul(&Matrix2::new(d1.conj(), b1.conj(), c1.conj(), a1.conj()))
        .mul(&Matrix2::new(d1, -c1, -b1, a1))
        .mul(&Matrix2::new(a1.conj(), -c1.conj(), -b1.conj(), d1.conj()));
    let Matrix2 { a11: a2, a12: b2, a21: c2, a22: d2 } = *f2;
    let psi = f2.mul(&Matrix2::new(d2.conj(), -b2.conj(), -c2.conj(), a2.conj()));
    let psi3 = Matrix2::new(d2, c2, b2, a2).mul(&Matrix2::new(a2.conj(), -c2.conj(), -b2.conj(), d2.conj()));
    MonodromyPair { phi, psi, psi3 }
}

/// Enclosure of a real period function.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodValue {
    pub value: RealInterval,
    /// Enclosure of the imaginary part of the full complex quotient.
    pub imag_residual: RealInterval,
}

impl PeriodValue {
    pub fn is_real_consistent(&self) -> bool {
        self.imag_residual.contains(0.0)
    }
}

fn quotient(num: ComplexBox, den: ComplexBox, part: RealInterval, den_part: RealInterval, which: &str) -> Result<PeriodValue> {
    if den_part.contains_zero() {
        return Err(Error::DegenerateDenominator(format!("{which} denominator {den_part}")));
    }
    let value = part.try_div(&den_part)?;
    let imag_residual = num.try_div(&den)?.im;
    Ok(PeriodValue { value, imag_residual })
}

/// `f₁ = -2(ĀD + D̄A + C̄B + B̄C) / (D̄C + C̄D + B̄A + ĀB)` on the `α₁` endpoint.
pub fn period_f1(f: &MatrixEnclosure) -> Result<PeriodValue> {
    let Matrix2 { a11: a, a12: b, a21: c, a22: d } = *f;
    let num = (a.conj() * d + d.conj() * a + c.conj() * b + b.conj() * c).scale(RealInterval::point(-2.0));
    let den = d.conj() * c + c.conj() * d + b.conj() * a + a.conj() * b;
    quotient(num, den, num.re, den.re, "f1")
}

/// `f₂ = 2(ĀD - D̄A + C̄B - B̄C) / (D̄C - C̄D + B̄A - ĀB)` on the `α₂` endpoint.
/// Numerator and denominator are purely imaginary; the value is the ratio of
/// their imaginary parts.
pub fn period_f2(f: &MatrixEnclosure) -> Result<PeriodValue> {
    let Matrix2 { a11: a, a12: b, a21: c, a22: d } = *f;
    let num = (a.conj() * d - d.conj() * a + c.conj() * b - b.conj() * c).scale(RealInterval::point(2.0));
    let den = d.conj() * c - c.conj() * d + b.conj() * a - a.conj() * b;
    quotient(num, den, num.im, den.im, "f2")
}

fn gauge_function(beta: f64) -> f64 {
    (1.0 + 2.0 * beta * beta) / (beta * (1.0 + beta * beta).sqrt())
}

/// The `β > 0` with `(1 + 2β²) / (β √(1 + β²)) = f`, by bisection.
pub fn solve_gauge_beta(f: f64) -> Result<f64> {
    if f.is_nan() || f <= 2.0 {
        return Err(Error::OutOfRange(format!("gauge equation needs f > 2, got {f}")));
    }
    if f.is_infinite() {
        return Ok(0.0);
    }
    let mut hi = 1.0;
    while gauge_function(hi) > f {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::OutOfRange(format!("f = {f} too close to 2 for double precision")));
        }
    }
    let mut lo = hi / 2.0;
    while gauge_function(lo) < f {
        lo /= 2.0;
        if lo == 0.0 {
            return Err(Error::OutOfRange(format!("f = {f} too large for double precision")));
        }
    }
    while hi - lo > BETA_REL_TOL * lo {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if gauge_function(mid) > f {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `K P K⁻¹` with `K = (α β; β α)`, `α = √(1 + β²)`.
pub fn gauge_conjugate(p: &MatrixEnclosure, beta: f64) -> Result<MatrixEnclosure> {
    let b = RealInterval::point(beta);
    let alpha = (RealInterval::ONE + b.sqr()).sqrt_nonneg()?;
    let (al, be) = (ComplexBox::real(alpha), ComplexBox::real(b));
    let k = Matrix2::new(al, be, be, al);
    let k_inv = Matrix2::new(al, -be, -be, al);
    Ok(k.mul(p).mul(&k_inv))
}

/// Largest entry modulus of `P P̄ᵗ - I` at the enclosure midpoint.
pub fn su2_distance(p: &MatrixEnclosure) -> f64 {
    let m = p.mid();
    let prod = m.mul(&m.adjoint());
    prod.max_abs_diff(&ComplexMatrix::identity())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> MatrixEnclosure {
        MatrixEnclosure::point(&ComplexMatrix::new(
            Complex64::new(1.07, 0.001),
            Complex64::new(-0.085, -0.045),
            Complex64::new(0.037, -0.012),
            Complex64::new(0.93, -0.0015),
        ))
    }

    #[test]
    fn symmetry_matrices() {
        let id = MatrixEnclosure::identity();
        assert_eq!(symmetry_matrix(Symmetry::Conjugate, &id), id);
        let f = sample();
        let s2 = symmetry_matrix(Symmetry::Antipodal, &f);
        assert_eq!((s2.a11, s2.a12, s2.a21, s2.a22), (f.a22, f.a21, f.a12, f.a11));
        let s4 = symmetry_matrix(Symmetry::ConjugateFlip, &symmetry_matrix(Symmetry::ConjugateFlip, &f));
        assert_eq!(s4, f);
    }

    #[test]
    fn identity_monodromy() {
        let id = MatrixEnclosure::identity();
        let m = assemble_monodromies(&id, &id);
        assert_eq!(m.phi, id);
        assert_eq!(m.psi, id);
        assert_eq!(m.psi3, id);
    }

    #[test]
    fn identity_denominator_degenerates() {
        let id = MatrixEnclosure::identity();
        assert!(matches!(period_f1(&id), Err(Error::DegenerateDenominator(_))));
        assert!(matches!(period_f2(&id), Err(Error::DegenerateDenominator(_))));
    }

    #[test]
    fn period_is_real() {
        let f = sample();
        let p1 = period_f1(&f).unwrap();
        let p2 = period_f2(&f).unwrap();
        assert!(p1.is_real_consistent() && p2.is_real_consistent());
        let m = f.mid();
        let (a, b, c, d) = (m.a11, m.a12, m.a21, m.a22);
        let v1 = -2.0 * (a.conj() * d + d.conj() * a + c.conj() * b + b.conj() * c)
            / (d.conj() * c + c.conj() * d + b.conj() * a + a.conj() * b);
        assert!((v1.re - p1.value.mid()).abs() < 1e-9 * v1.norm());
    }

    #[test]
    fn gauge_beta() {
        let b = solve_gauge_beta(3.0).unwrap();
        let exact = ((-5.0 + 45f64.sqrt()) / 10.0).sqrt();
        assert!((b - exact).abs() < 1e-13 * exact);
        assert!((b - 0.41331).abs() < 1e-5);
        assert!(solve_gauge_beta(1e8).unwrap() < 1e-7);
        assert!(matches!(solve_gauge_beta(2.0), Err(Error::OutOfRange(_))));
        assert!(matches!(solve_gauge_beta(1.5), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn su2_metric() {
        assert_eq!(su2_distance(&MatrixEnclosure::identity()), 0.0);
        let d = MatrixEnclosure::point(&ComplexMatrix::new(
            Complex64::new(2.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.5, 0.0),
        ));
        assert!(su2_distance(&d) >= 3.0);
    }

    #[test]
    fn gauge_preserves_determinant() {
        let f = sample();
        let det = f.det().mid();
        let g = gauge_conjugate(&f, 0.4).unwrap();
        assert!(g.det().contains(det) || (g.det().mid() - det).norm() < 1e-14);
    }
}
