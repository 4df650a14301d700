//! Classical fourth-order Runge-Kutta integration of Bryant's linear system
//! along polygonal paths, in interval and floating modes.
//!
//! Both rows `(A, B)` and `(C, D)` of `F` obey
//!
//! ```text
//! A' = c (h₁ A + h₂ B),   B' = c (h₃ A + h₄ B)
//! ```
//!
//! and are advanced together in one state. The step grid has `n` equal steps
//! on `t ∈ [0, 1]` and every path breakpoint must fall on a grid node, so no
//! step straddles a change of segment. Coefficient values at the `2n + 1`
//! stage points depend on the path and `n` but not on `c`; they are computed
//! once into a [`CoefficientTable`] and reused for every `c`.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{ComplexBox, RealInterval};
use crate::surface::{
    continuation_is_certain, continue_segment, w_squared_box, Coefficients, PolygonalPath, SurfaceParams,
};

/// Breakpoints must land within this distance of an integer step index.
const GRID_TOL: f64 = 1e-9;

/// Maximum bisection depth when certifying sheet continuation between two
/// neighbouring stage points.
const MAX_CONTINUATION_DEPTH: u32 = 24;

/// Number types the Runge-Kutta kernel runs on.
pub trait Scalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn from_real(x: f64) -> Self;
    fn div_real(self, d: f64) -> Self;
    fn conj(self) -> Self;
}

impl Scalar for Complex64 {
    fn from_real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn div_real(self, d: f64) -> Self {
        self / d
    }
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
}

impl Scalar for ComplexBox {
    fn from_real(x: f64) -> Self {
        ComplexBox::real(RealInterval::point(x))
    }
    fn div_real(self, d: f64) -> Self {
        self.div_scalar(d)
    }
    fn conj(self) -> Self {
        ComplexBox::conj(&self)
    }
}

/// A 2×2 matrix `(a11 a12; a21 a22)`, holding `(A B; C D)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Matrix2<T> {
    pub a11: T,
    pub a12: T,
    pub a21: T,
    pub a22: T,
}

/// Interval enclosure of `F`.
pub type MatrixEnclosure = Matrix2<ComplexBox>;

/// Plain floating `F`.
pub type ComplexMatrix = Matrix2<Complex64>;

impl<T: Scalar> Matrix2<T> {
    pub fn new(a11: T, a12: T, a21: T, a22: T) -> Self {
        Matrix2 { a11, a12, a21, a22 }
    }

    pub fn identity() -> Self {
        let (o, z) = (T::from_real(1.0), T::from_real(0.0));
        Matrix2::new(o, z, z, o)
    }

    pub fn entries(&self) -> [T; 4] {
        [self.a11, self.a12, self.a21, self.a22]
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Matrix2::new(f(self.a11), f(self.a12), f(self.a21), f(self.a22))
    }

    pub fn mul(&self, o: &Self) -> Self {
        Matrix2::new(
            self.a11 * o.a11 + self.a12 * o.a21,
            self.a11 * o.a12 + self.a12 * o.a22,
            self.a21 * o.a11 + self.a22 * o.a21,
            self.a21 * o.a12 + self.a22 * o.a22,
        )
    }

    pub fn det(&self) -> T {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        self.map(Scalar::conj)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Matrix2::new(self.a11.conj(), self.a21.conj(), self.a12.conj(), self.a22.conj())
    }

    /// Inverse of a unimodular matrix, `(D -B; -C A)`.
    pub fn unimodular_inverse(&self) -> Self {
        Matrix2::new(self.a22, -self.a12, -self.a21, self.a11)
    }
}

impl MatrixEnclosure {
    pub fn point(m: &ComplexMatrix) -> Self {
        Matrix2::new(m.a11.into(), m.a12.into(), m.a21.into(), m.a22.into())
    }

    pub fn mid(&self) -> ComplexMatrix {
        Matrix2::new(self.a11.mid(), self.a12.mid(), self.a21.mid(), self.a22.mid())
    }

    /// Widen every real and imaginary part by `r` in each direction.
    pub fn inflate(&self, r: f64) -> Self {
        self.map(|x| x.inflate(r))
    }

    pub fn contains(&self, m: &ComplexMatrix) -> bool {
        self.entries().iter().zip(m.entries()).all(|(b, z)| b.contains(z))
    }

    pub fn overlaps(&self, o: &MatrixEnclosure) -> bool {
        self.entries().iter().zip(o.entries()).all(|(b, c)| b.overlaps(&c))
    }

    pub fn max_width(&self) -> f64 {
        self.entries().iter().map(|b| b.width()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|b| b.is_finite())
    }
}

impl ComplexMatrix {
    pub fn max_abs_diff(&self, o: &ComplexMatrix) -> f64 {
        self.entries().iter().zip(o.entries()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    /// Largest deviation over the eight real components.
    pub fn max_component_diff(&self, o: &ComplexMatrix) -> f64 {
        self.entries()
            .iter()
            .zip(o.entries())
            .map(|(x, y)| (x.re - y.re).abs().max((x.im - y.im).abs()))
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    Interval,
    Floating,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegrationConfig {
    pub n: usize,
    pub mode: Mode,
}

impl IntegrationConfig {
    pub const DEFAULT_N: usize = 4000;

    pub fn new(n: usize, mode: Mode) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidRange("n must be positive".into()));
        }
        Ok(IntegrationConfig { n, mode })
    }

    pub fn interval(n: usize) -> Result<Self> {
        Self::new(n, Mode::Interval)
    }

    pub fn floating(n: usize) -> Result<Self> {
        Self::new(n, Mode::Floating)
    }
}

impl Default for IntegrationConfig {
    fn default() -> Self {
        IntegrationConfig { n: Self::DEFAULT_N, mode: Mode::Interval }
    }
}

/// One classical RK4 step for both rows of `F`.
///
/// `coeffs` holds the coefficient values at the start, middle and end of the
/// step; `step_c` is the product of `c` and the step length.
pub fn rk4_step<T: Scalar>(state: &Matrix2<T>, coeffs: &[Coefficients<T>; 3], step_c: T) -> Matrix2<T> {
    let [h0, hm, h1] = coeffs;
    let f = |h: &Coefficients<T>, a: T, b: T| (step_c * (h.h1 * a + h.h2 * b), step_c * (h.h3 * a + h.h4 * b));
    let row = |a: T, b: T| {
        let half = |x: T| x.div_real(2.0);
        let (k0, m0) = f(h0, a, b);
        let (k1, m1) = f(hm, a + half(k0), b + half(m0));
        let (k2, m2) = f(hm, a + half(k1), b + half(m1));
        let (k3, m3) = f(h1, a + k2, b + m2);
        let two = T::from_real(2.0);
        (
            a + (k0 + two * k1 + two * k2 + k3).div_real(6.0),
            b + (m0 + two * m1 + two * m2 + m3).div_real(6.0),
        )
    };
    let (a11, a12) = row(state.a11, state.a12);
    let (a21, a22) = row(state.a21, state.a22);
    Matrix2::new(a11, a12, a21, a22)
}

#[derive(Clone, Debug)]
struct SegmentGrid {
    first_step: usize,
    last_step: usize,
    h1: Complex64,
    h1_box: ComplexBox,
}

/// Stage-point coefficient data for one path and step count. Holds the
/// enclosures of `g` at every `t = j/(2n)` and `dz/dt` per segment.
#[derive(Clone, Debug)]
pub struct CoefficientTable {
    pub n: usize,
    pub mode: Mode,
    segments: Vec<SegmentGrid>,
    g: Vec<Complex64>,
    g_box: Vec<ComplexBox>,
}

fn grid_indices(path: &PolygonalPath, n: usize) -> Result<Vec<usize>> {
    path.t_breaks()
        .iter()
        .map(|&t| {
            let x = t * n as f64;
            let k = x.round();
            if (x - k).abs() > GRID_TOL {
                Err(Error::PreconditionViolation(format!(
                    "breakpoint t = {t} is not on the grid of n = {n} steps"
                )))
            } else {
                Ok(k as usize)
            }
        })
        .collect()
}

/// Whether every breakpoint of `path` falls on the `n`-step grid.
pub fn grid_aligned(path: &PolygonalPath, n: usize) -> bool {
    n > 0 && grid_indices(path, n).is_ok()
}

impl CoefficientTable {
    pub fn build(path: &PolygonalPath, a: f64, cfg: &IntegrationConfig) -> Result<Self> {
        let n = cfg.n;
        let ks = grid_indices(path, n)?;
        let verts = path.vertices();
        let mut segments = Vec::with_capacity(path.num_segments());
        for i in 0..path.num_segments() {
            if ks[i + 1] <= ks[i] {
                return Err(Error::PreconditionViolation(format!("segment {i} has no steps at n = {n}")));
            }
            let steps = (ks[i + 1] - ks[i]) as f64;
            let dv = verts[i + 1] - verts[i];
            let dv_box = ComplexBox::point(verts[i + 1]) - ComplexBox::point(verts[i]);
            let h1_box = dv_box.scale(RealInterval::point(n as f64).div_scalar(steps));
            segments.push(SegmentGrid { first_step: ks[i], last_step: ks[i + 1], h1: dv * (n as f64 / steps), h1_box });
        }

        let stage_count = 2 * n + 1;
        let z_at = |j: usize| -> (Complex64, ComplexBox) {
            let i = segments.iter().position(|s| j <= 2 * s.last_step).unwrap_or(segments.len() - 1);
            let s = &segments[i];
            let num = (j - 2 * s.first_step) as f64;
            let den = (2 * (s.last_step - s.first_step)) as f64;
            let v0 = verts[i];
            let dv = verts[i + 1] - v0;
            let frac = RealInterval::point(num).div_scalar(den);
            let dv_box = ComplexBox::point(verts[i + 1]) - ComplexBox::point(v0);
            (v0 + dv * (num / den), ComplexBox::point(v0) + dv_box.scale(frac))
        };

        let mut g = Vec::with_capacity(stage_count);
        let mut g_box = Vec::new();
        let (mut z_prev, mut zb_prev) = z_at(0);
        let mut w = path.base_w(a)?;
        g.push(w);
        if cfg.mode == Mode::Interval {
            g_box.reserve(stage_count);
            g_box.push(path.base_w_box(a)?);
        }
        for j in 1..stage_count {
            let (z, zb) = z_at(j);
            w = continue_segment(z_prev, w, z, a)?;
            g.push(w);
            if cfg.mode == Mode::Interval {
                let prev = *g_box.last().expect("base value pushed");
                g_box.push(continue_box(&zb_prev, &prev, &zb, a, 0)?);
            }
            z_prev = z;
            zb_prev = zb;
        }
        Ok(CoefficientTable { n, mode: cfg.mode, segments, g, g_box })
    }

    fn segment_of_step(&self, k: usize) -> &SegmentGrid {
        self.segments.iter().find(|s| k < s.last_step).unwrap_or_else(|| self.segments.last().expect("nonempty"))
    }

    /// Enclosure of `g` at the stage point `t = j/(2n)`.
    pub fn g_box(&self, j: usize) -> Option<&ComplexBox> {
        self.g_box.get(j)
    }

    /// Floating value of `g` at the stage point `t = j/(2n)`.
    pub fn g(&self, j: usize) -> Option<Complex64> {
        self.g.get(j).copied()
    }

    pub fn integrate(&self, c: f64) -> Result<MatrixEnclosure> {
        match self.mode {
            Mode::Interval => self.integrate_interval(c),
            Mode::Floating => Ok(MatrixEnclosure::point(&self.integrate_floating(c))),
        }
    }

    pub fn integrate_floating(&self, c: f64) -> ComplexMatrix {
        let step_c = Complex64::new(c / self.n as f64, 0.0);
        let mut state = ComplexMatrix::identity();
        for k in 0..self.n {
            let h1 = self.segment_of_step(k).h1;
            let co = |j: usize| Coefficients::from_gauss(h1, self.g[j]);
            state = rk4_step(&state, &[co(2 * k), co(2 * k + 1), co(2 * k + 2)], step_c);
        }
        state
    }

    fn integrate_interval(&self, c: f64) -> Result<MatrixEnclosure> {
        if self.mode != Mode::Interval {
            return Err(Error::PreconditionViolation("table was built without enclosures".into()));
        }
        let step_c = ComplexBox::real(RealInterval::point(c).div_scalar(self.n as f64));
        let mut state = MatrixEnclosure::identity();
        for k in 0..self.n {
            let h1 = self.segment_of_step(k).h1_box;
            let co = |j: usize| Coefficients::from_gauss_box(h1, &self.g_box[j]);
            state = rk4_step(&state, &[co(2 * k)?, co(2 * k + 1)?, co(2 * k + 2)?], step_c);
        }
        Ok(state)
    }
}

/// Enclosure of `g` at `z1` continued from the enclosure `g0` at `z0` along
/// the straight segment, bisecting until continuation is provably unambiguous.
fn continue_box(z0: &ComplexBox, g0: &ComplexBox, z1: &ComplexBox, a: f64, depth: u32) -> Result<ComplexBox> {
    if continuation_is_certain(z0, z1, a) {
        return w_squared_box(z1, a)?.sqrt_near(g0);
    }
    if depth >= MAX_CONTINUATION_DEPTH {
        return Err(Error::BranchAmbiguity(format!(
            "sheet continuation from {:?} to {:?} not certified",
            z0.mid(),
            z1.mid()
        )));
    }
    let zm = (*z0 + *z1).div_scalar(2.0);
    let gm = continue_box(z0, g0, &zm, a, depth + 1)?;
    continue_box(&zm, &gm, z1, a, depth + 1)
}

/// Enclosure of the RK4 output at the end of `path` for identity start.
/// Discretization error is not included.
pub fn integrate_path(path: &PolygonalPath, params: &SurfaceParams, cfg: &IntegrationConfig) -> Result<MatrixEnclosure> {
    CoefficientTable::build(path, params.a, cfg)?.integrate(params.c)
}

/// Floating RK4 with `n_ref` steps; the brute-force oracle for tests.
pub fn integrate_reference(path: &PolygonalPath, params: &SurfaceParams, n_ref: usize) -> Result<ComplexMatrix> {
    let cfg = IntegrationConfig::floating(n_ref)?;
    Ok(CoefficientTable::build(path, params.a, &cfg)?.integrate_floating(params.c))
}

/// Smallest step count not below `n_min` on whose grid both paths' breakpoints
/// fall.
pub fn aligned_step_count(paths: &[&PolygonalPath], n_min: usize) -> Option<usize> {
    (n_min.max(1)..n_min.max(1) + 100_000).find(|&n| paths.iter().all(|p| grid_aligned(p, n)))
}
