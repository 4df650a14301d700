//! The twice-punctured torus `(z-1)(z+a)w² = (z+1)(z-a)` with Gauss map
//! `g = w`, polygonal integration paths on it, the per-segment coefficient
//! functions of the Bryant system and rigorous bounds on their derivatives.
//!
//! Along a straight segment `z(t) = z₀ + h₁ (t - t₀)` the system for a row
//! `(A, B)` of `F` reads
//!
//! ```text
//! A' = c (h₁ A + h₂ B),   B' = c (h₃ A + h₄ B)
//! h₂ = h₁ / g,   h₃ = -h₁ g,   h₄ = -h₁
//! ```
//!
//! Derivatives of `g^{±1}` come from the logarithmic derivative
//! `g'/g = ½ (1/(z+1) + 1/(z-a) - 1/(z-1) - 1/(z+a))`, which follows from the
//! defining equation, so no numerical differentiation is involved.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{ComplexBox, RealInterval};

/// Distance to a branch point below which a floating evaluation is refused.
pub const BRANCH_POINT_TOL: f64 = 1e-12;

/// Far root must be at least this many times farther from the previous value
/// than the near root.
pub const BRANCH_SEPARATION: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfaceParams {
    pub a: f64,
    pub c: f64,
}

impl SurfaceParams {
    /// `c = 0` is accepted as the degenerate zero-field case.
    pub fn new(a: f64, c: f64) -> Result<Self> {
        if !(a > 1.0 && a.is_finite()) {
            return Err(Error::InvalidRange(format!("a must exceed 1, got {a}")));
        }
        if !(c >= 0.0 && c.is_finite()) {
            return Err(Error::InvalidRange(format!("c must be nonnegative, got {c}")));
        }
        Ok(SurfaceParams { a, c })
    }

    pub fn branch_points(&self) -> [f64; 4] {
        [-self.a, -1.0, 1.0, self.a]
    }
}

/// Right side of `w² = (z+1)(z-a) / ((z-1)(z+a))`.
pub fn w_squared(z: Complex64, a: f64) -> Complex64 {
    (z + 1.0) * (z - a) / ((z - 1.0) * (z + a))
}

pub fn w_squared_box(z: &ComplexBox, a: f64) -> Result<ComplexBox> {
    let one = ComplexBox::ONE;
    let ab = ComplexBox::point(Complex64::new(a, 0.0));
    let num = (*z + one) * (*z - ab);
    let den = (*z - one) * (*z + ab);
    num.try_div(&den)
}

fn check_branch_points(z: Complex64, a: f64) -> Result<()> {
    for p in [-a, -1.0, 1.0, a] {
        if (z - p).norm() < BRANCH_POINT_TOL {
            return Err(Error::BranchPointHit { z: format!("{z}"), branch_point: p });
        }
    }
    Ok(())
}

fn branch_distance(z: Complex64, a: f64) -> f64 {
    [-a, -1.0, 1.0, a].iter().map(|p| (z - p).norm()).fold(f64::INFINITY, f64::min)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sheet {
    Plus,
    Minus,
}

impl Sheet {
    pub fn sign(self) -> f64 {
        match self {
            Sheet::Plus => 1.0,
            Sheet::Minus => -1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfacePoint {
    pub z: Complex64,
    pub w: Complex64,
}

impl SurfacePoint {
    pub fn new(z: Complex64, w: Complex64) -> Self {
        SurfacePoint { z, w }
    }

    /// Residual of the defining equation.
    pub fn residual(&self, a: f64) -> f64 {
        let z = self.z;
        ((z - 1.0) * (z + a) * self.w * self.w - (z + 1.0) * (z - a)).norm()
    }

    pub fn on_surface(&self, a: f64, tol: f64) -> bool {
        self.residual(a) <= tol
    }
}

/// The deck-like symmetries of the surface used to assemble monodromy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Symmetry {
    /// `(z, w) ↦ (z̄, w̄)`
    Conjugate,
    /// `(z, w) ↦ (-z, 1/w)`
    Antipodal,
    /// `(z, w) ↦ (-z̄, 1/w̄)`, the composite of the two above
    ConjugateAntipodal,
    /// `(z, w) ↦ (z̄, -w̄)`; moves the base point `(0, 1)` to `(0, -1)`
    ConjugateFlip,
}

impl Symmetry {
    pub fn from_index(i: u8) -> Result<Self> {
        match i {
            1 => Ok(Symmetry::Conjugate),
            2 => Ok(Symmetry::Antipodal),
            3 => Ok(Symmetry::ConjugateAntipodal),
            4 => Ok(Symmetry::ConjugateFlip),
            _ => Err(Error::OutOfRange(format!("symmetry index {i} not in 1..=4"))),
        }
    }
}

pub fn symmetry_transform(s: Symmetry, p: SurfacePoint) -> SurfacePoint {
    match s {
        Symmetry::Conjugate => SurfacePoint::new(p.z.conj(), p.w.conj()),
        Symmetry::Antipodal => SurfacePoint::new(-p.z, p.w.inv()),
        Symmetry::ConjugateAntipodal => SurfacePoint::new(-p.z.conj(), p.w.conj().inv()),
        Symmetry::ConjugateFlip => SurfacePoint::new(p.z.conj(), -p.w.conj()),
    }
}

/// A polygonal path on the surface: z-plane vertices, the parameter value at
/// each vertex, and the sheet of `w` at the start.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolygonalPath {
    pub name: String,
    vertices: Vec<Complex64>,
    t_breaks: Vec<f64>,
    base_sheet: Sheet,
}

impl PolygonalPath {
    pub fn new(
        name: impl Into<String>,
        vertices: Vec<Complex64>,
        t_breaks: Vec<f64>,
        base_sheet: Sheet,
    ) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidPath("need at least two vertices".into()));
        }
        if vertices.len() != t_breaks.len() {
            return Err(Error::InvalidPath(format!(
                "{} vertices but {} breakpoints",
                vertices.len(),
                t_breaks.len()
            )));
        }
        if t_breaks[0] != 0.0 || *t_breaks.last().unwrap() != 1.0 {
            return Err(Error::InvalidPath("breakpoints must run from 0 to 1".into()));
        }
        if t_breaks.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less)) {
            return Err(Error::InvalidPath("breakpoints must be strictly increasing".into()));
        }
        if vertices.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidPath("non-finite vertex".into()));
        }
        Ok(PolygonalPath { name: name.into(), vertices, t_breaks, base_sheet })
    }

    /// From `0` up to `1 + 0.4i`, then down to the real point `(1+a)/2`
    /// between the branch points `1` and `a`.
    pub fn alpha1(a: f64) -> Self {
        PolygonalPath::new(
            "alpha1",
            vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.4), Complex64::new((1.0 + a) / 2.0, 0.0)],
            vec![0.0, 0.67, 1.0],
            Sheet::Plus,
        )
        .expect("alpha1 preset is well formed")
    }

    /// From `0` up to `(a+0.2) + 0.7i`, then down to the real point `a + 1/2`
    /// beyond the branch point `a`.
    pub fn alpha2(a: f64) -> Self {
        PolygonalPath::new(
            "alpha2",
            vec![Complex64::new(0.0, 0.0), Complex64::new(a + 0.2, 0.7), Complex64::new(a + 0.5, 0.0)],
            vec![0.0, 0.686, 1.0],
            Sheet::Plus,
        )
        .expect("alpha2 preset is well formed")
    }

    pub fn preset(name: &str, a: f64) -> Result<Self> {
        match name {
            "alpha1" => Ok(Self::alpha1(a)),
            "alpha2" => Ok(Self::alpha2(a)),
            other => Err(Error::InvalidPath(format!("unknown path preset '{other}'"))),
        }
    }

    /// Image of the path under a symmetry fixing the base point `(0, 1)`.
    /// Breakpoints are kept.
    pub fn mapped(&self, s: Symmetry) -> Result<Self> {
        let f: fn(Complex64) -> Complex64 = match s {
            Symmetry::Conjugate => |z| z.conj(),
            Symmetry::Antipodal => |z| -z,
            Symmetry::ConjugateAntipodal => |z| -z.conj(),
            Symmetry::ConjugateFlip => {
                return Err(Error::PreconditionViolation(
                    "the flip symmetry does not fix the base point".into(),
                ))
            }
        };
        PolygonalPath::new(
            format!("{}.{:?}", self.name, s),
            self.vertices.iter().map(|&z| f(z)).collect(),
            self.t_breaks.clone(),
            self.base_sheet,
        )
    }

    pub fn vertices(&self) -> &[Complex64] {
        &self.vertices
    }

    pub fn t_breaks(&self) -> &[f64] {
        &self.t_breaks
    }

    pub fn base_sheet(&self) -> Sheet {
        self.base_sheet
    }

    pub fn num_segments(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Segment containing `t`; breakpoints belong to the segment on their left.
    pub fn segment_of(&self, t: f64) -> usize {
        let n = self.num_segments();
        (0..n).find(|&i| t <= self.t_breaks[i + 1]).unwrap_or(n - 1)
    }

    /// `dz/dt` on segment `i`.
    pub fn h1(&self, i: usize) -> Complex64 {
        (self.vertices[i + 1] - self.vertices[i]) / (self.t_breaks[i + 1] - self.t_breaks[i])
    }

    pub fn z_at(&self, t: f64) -> Complex64 {
        let i = self.segment_of(t);
        let (t0, t1) = (self.t_breaks[i], self.t_breaks[i + 1]);
        let s = (t - t0) / (t1 - t0);
        self.vertices[i] + (self.vertices[i + 1] - self.vertices[i]) * s
    }

    /// `w` at the start of the path.
    pub fn base_w(&self, a: f64) -> Result<Complex64> {
        let z0 = self.vertices[0];
        check_branch_points(z0, a)?;
        Ok(w_squared(z0, a).sqrt() * self.base_sheet.sign())
    }

    /// Enclosure of `w` at the start of the path.
    pub fn base_w_box(&self, a: f64) -> Result<ComplexBox> {
        let z0 = ComplexBox::point(self.vertices[0]);
        let hint = ComplexBox::point(self.base_w(a)?);
        w_squared_box(&z0, a)?.sqrt_near(&hint)
    }
}

/// The root of the defining equation at `z(t)` nearest `w_prev`.
///
/// `w_prev` must be the continued value at a nearby parameter; the call fails
/// rather than guess when the two roots are not clearly separated.
pub fn gauss_map_continue(
    path: &PolygonalPath,
    params: &SurfaceParams,
    t: f64,
    w_prev: Complex64,
) -> Result<Complex64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::OutOfRange(format!("t = {t} not in [0, 1]")));
    }
    nearest_root(path.z_at(t), params.a, w_prev)
}

pub(crate) fn nearest_root(z: Complex64, a: f64, w_prev: Complex64) -> Result<Complex64> {
    check_branch_points(z, a)?;
    let r = w_squared(z, a).sqrt();
    let (d_plus, d_minus) = ((r - w_prev).norm(), (r + w_prev).norm());
    let (near, d_near, d_far) = if d_plus <= d_minus { (r, d_plus, d_minus) } else { (-r, d_minus, d_plus) };
    if d_far < BRANCH_SEPARATION * d_near {
        return Err(Error::BranchAmbiguity(format!(
            "at z = {z}: roots ±{r} at distances {d_near:e} and {d_far:e} from {w_prev}"
        )));
    }
    Ok(near)
}

/// Continue `w` from `(z0, w0)` to `z1` along the straight segment, in steps
/// short relative to the distance to the nearest branch point.
pub fn continue_segment(z0: Complex64, w0: Complex64, z1: Complex64, a: f64) -> Result<Complex64> {
    let mut z = z0;
    let mut w = w0;
    let total = (z1 - z0).norm();
    if total == 0.0 {
        return Ok(w0);
    }
    let mut s = 0.0;
    while s < 1.0 {
        let dist = branch_distance(z, a);
        let ds = (0.2 * dist / total).clamp(1e-9, 0.05);
        s = (s + ds).min(1.0);
        let zn = z0 + (z1 - z0) * s;
        w = nearest_root(zn, a, w)?;
        z = zn;
    }
    Ok(w)
}

/// `w` at parameter `t`, continued from the base point along the path.
pub fn continue_to(path: &PolygonalPath, params: &SurfaceParams, t: f64) -> Result<Complex64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::OutOfRange(format!("t = {t} not in [0, 1]")));
    }
    let mut w = path.base_w(params.a)?;
    let target = path.segment_of(t);
    for i in 0..=target {
        let z0 = path.vertices[i];
        let z1 = if i == target { path.z_at(t) } else { path.vertices[i + 1] };
        w = continue_segment(z0, w, z1, params.a)?;
    }
    Ok(w)
}

/// Values of the four coefficient functions at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Coefficients<T> {
    pub h1: T,
    pub h2: T,
    pub h3: T,
    pub h4: T,
}

impl Coefficients<Complex64> {
    pub fn from_gauss(h1: Complex64, g: Complex64) -> Self {
        Coefficients { h1, h2: h1 / g, h3: -h1 * g, h4: -h1 }
    }
}

impl Coefficients<ComplexBox> {
    pub fn from_gauss_box(h1: ComplexBox, g: &ComplexBox) -> Result<Self> {
        Ok(Coefficients { h1, h2: h1.try_div(g)?, h3: -(h1 * *g), h4: -h1 })
    }
}

/// Coefficient functions on one segment of a path. `h₁` and `h₄` are
/// constant; `h₂` and `h₃` depend on the sheet value passed in.
#[derive(Clone, Debug)]
pub struct SegmentCoefficients {
    pub segment: usize,
    pub h1: Complex64,
    a: f64,
    z0: Complex64,
    t0: f64,
}

impl SegmentCoefficients {
    /// Evaluate at `t`, continuing `w` from `w_prev`.
    pub fn at(&self, t: f64, w_prev: Complex64) -> Result<(Coefficients<Complex64>, Complex64)> {
        let z = self.z0 + self.h1 * (t - self.t0);
        let g = nearest_root(z, self.a, w_prev)?;
        Ok((Coefficients::from_gauss(self.h1, g), g))
    }
}

pub fn h_coefficients(path: &PolygonalPath, params: &SurfaceParams, segment: usize) -> Result<SegmentCoefficients> {
    if segment >= path.num_segments() {
        return Err(Error::OutOfRange(format!("segment {segment} of {}", path.num_segments())));
    }
    Ok(SegmentCoefficients {
        segment,
        h1: path.h1(segment),
        a: params.a,
        z0: path.vertices[segment],
        t0: path.t_breaks[segment],
    })
}

/// Floating evaluation of `h₂`, `h₃` and their first three t-derivatives at a
/// point of segment `h1`, given the sheet value `g` there. Index `[k][i]` is
/// the k-th derivative of `h_{i+2}`.
pub fn h_derivatives(h1: Complex64, z: Complex64, g: Complex64, a: f64) -> [[Complex64; 2]; 4] {
    let poles: [(f64, f64); 4] = [(-1.0, 1.0), (a, 1.0), (1.0, -1.0), (-a, -1.0)];
    let mut l = [Complex64::new(0.0, 0.0); 3];
    for (p, sigma) in poles {
        let r = (z - p).inv();
        l[0] += 0.5 * sigma * r;
        l[1] += -0.5 * sigma * r * r;
        l[2] += sigma * r * r * r;
    }
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 4];
    for (j, s) in [-1.0f64, 1.0].into_iter().enumerate() {
        let base = if s < 0.0 { h1 / g } else { -h1 * g };
        let p1 = s * l[0];
        let p2 = s * l[1] + l[0] * l[0];
        let p3 = s * (l[2] + l[0] * l[0] * l[0]) + 3.0 * l[0] * l[1];
        out[0][j] = base;
        out[1][j] = base * h1 * p1;
        out[2][j] = base * h1 * h1 * p2;
        out[3][j] = base * h1 * h1 * h1 * p3;
    }
    out
}

/// Bounds `|hᵢ| < M`, `|hᵢ'| < M₁`, `|hᵢ''| < M₂`, `|hᵢ'''| < M₃` along a path.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientBounds {
    #[serde(rename = "M")]
    pub m: f64,
    #[serde(rename = "M1")]
    pub m1: f64,
    #[serde(rename = "M2")]
    pub m2: f64,
    #[serde(rename = "M3")]
    pub m3: f64,
}

impl CoefficientBounds {
    /// The quadruple published for `a = 1.78` on both preset paths.
    pub const PUBLISHED: CoefficientBounds = CoefficientBounds { m: 4.6, m1: 48.0, m2: 850.0, m3: 25000.0 };

    pub const ZERO: CoefficientBounds = CoefficientBounds { m: 0.0, m1: 0.0, m2: 0.0, m3: 0.0 };

    pub fn new(m: f64, m1: f64, m2: f64, m3: f64) -> Result<Self> {
        let b = CoefficientBounds { m, m1, m2, m3 };
        if b.as_array().iter().any(|x| !(*x >= 0.0 && x.is_finite())) {
            return Err(Error::OutOfRange(format!("coefficient bounds must be finite and nonnegative: {b:?}")));
        }
        Ok(b)
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.m, self.m1, self.m2, self.m3]
    }

    pub fn max(&self, other: &CoefficientBounds) -> CoefficientBounds {
        CoefficientBounds {
            m: self.m.max(other.m),
            m1: self.m1.max(other.m1),
            m2: self.m2.max(other.m2),
            m3: self.m3.max(other.m3),
        }
    }

    pub fn dominates(&self, other: &CoefficientBounds) -> bool {
        self.as_array().iter().zip(other.as_array()).all(|(x, y)| *x >= y)
    }

    /// Step every bound up one ulp, turning sup bounds into strict bounds.
    pub fn strict(&self) -> CoefficientBounds {
        CoefficientBounds { m: self.m.next_up(), m1: self.m1.next_up(), m2: self.m2.next_up(), m3: self.m3.next_up() }
    }
}

/// Enclosures of `g'/g`, its first and second z-derivatives over a box.
pub fn log_derivative_box(z: &ComplexBox, a: f64) -> Result<[ComplexBox; 3]> {
    let poles: [(f64, f64); 4] = [(-1.0, 1.0), (a, 1.0), (1.0, -1.0), (-a, -1.0)];
    let mut l = [ComplexBox::ZERO; 3];
    for (p, sigma) in poles {
        let r = (*z - ComplexBox::point(Complex64::new(p, 0.0))).recip()?;
        let r2 = r * r;
        let s = RealInterval::point(sigma);
        l[0] = l[0] + r.scale(s).div_scalar(2.0);
        l[1] = l[1] - r2.scale(s).div_scalar(2.0);
        l[2] = l[2] + (r2 * r).scale(s);
    }
    Ok(l)
}

/// Enclosure of `|g|` over a box, from the moduli of the four factors.
pub fn gauss_modulus_box(z: &ComplexBox, a: f64) -> Result<RealInterval> {
    let d = |p: f64| (*z - ComplexBox::point(Complex64::new(p, 0.0))).modulus();
    let num = d(-1.0) * d(a);
    let den = d(1.0) * d(-a);
    num.try_div(&den)?.sqrt_nonneg()
}

/// Whether analytic continuation of `g` from a box around `z0` to a box
/// around `z1` along the straight segment provably picks the nearer root.
///
/// Sufficient condition: `sup|g'| · |z1 - z0| < inf|g|` on the hull, since then
/// `g` moves by less than half the gap `2|g|` between the two roots.
pub fn continuation_is_certain(z0: &ComplexBox, z1: &ComplexBox, a: f64) -> bool {
    let hull = z0.hull(z1);
    let (Ok(l), Ok(gm)) = (log_derivative_box(&hull, a), gauss_modulus_box(&hull, a)) else {
        return false;
    };
    let step = (*z1 - *z0).modulus().hi();
    let lipschitz = RealInterval::point(l[0].modulus().hi()) * RealInterval::point(gm.hi()) * RealInterval::point(step);
    lipschitz.hi() < gm.lo()
}

/// Upper bounds on `|h₂^{(k)}|` and `|h₃^{(k)}|`, `k = 0..=3`, over a z-box
/// on a segment with `|h₁| ≤ h1_mag`.
fn piece_bounds(z: &ComplexBox, h1_mag: RealInterval, a: f64) -> Result<[f64; 4]> {
    let [l0, l1, l2] = log_derivative_box(z, a)?;
    let gm = gauss_modulus_box(z, a)?;
    let g_inv = gm.recip()?;
    let mut out = [0.0f64; 4];
    for s in [-1.0f64, 1.0] {
        let si = RealInterval::point(s);
        let p = [
            RealInterval::ONE,
            l0.scale(si).modulus(),
            (l1.scale(si) + l0 * l0).modulus(),
            ((l2 + l0 * l0 * l0).scale(si) + (l0 * l1).scale(RealInterval::point(3.0))).modulus(),
        ];
        let gpow = if s < 0.0 { g_inv } else { gm };
        let mut h1k = h1_mag;
        for k in 0..4 {
            let v = h1k * gpow * p[k];
            out[k] = out[k].max(v.hi());
            h1k = h1k * h1_mag;
        }
    }
    Ok(out)
}

fn segment_bounds(path: &PolygonalPath, i: usize, a: f64, pieces: usize) -> Result<[f64; 4]> {
    let v0 = ComplexBox::point(path.vertices[i]);
    let dv = ComplexBox::point(path.vertices[i + 1]) - v0;
    // Breakpoints are decimal fractions; cover the decimal value too.
    let dt = RealInterval::around(path.t_breaks[i + 1]) - RealInterval::around(path.t_breaks[i]);
    let dt = if path.t_breaks[i] == 0.0 { RealInterval::around(path.t_breaks[i + 1]) } else { dt };
    let h1_mag = dv.modulus().try_div(&dt)?;
    let mut out = [h1_mag.hi(), 0.0, 0.0, 0.0];
    if dv.modulus().hi() == 0.0 {
        return Ok([0.0; 4]);
    }
    let at = |j: usize| v0 + dv.scale(RealInterval::point(j as f64).div_scalar(pieces as f64));
    let mut prev = at(0);
    for j in 1..=pieces {
        let next = at(j);
        let piece = prev.hull(&next);
        let b = piece_bounds(&piece, h1_mag, a).unwrap_or([f64::INFINITY; 4]);
        for k in 0..4 {
            out[k] = out[k].max(b[k]);
        }
        prev = next;
    }
    Ok(out)
}

/// Settings for [`compute_h_bounds_with`].
#[derive(Clone, Copy, Debug)]
pub struct BoundsConfig {
    pub initial_pieces: usize,
    pub max_pieces: usize,
    /// Stop refining once no bound improves by more than this fraction.
    pub rel_improvement: f64,
}

impl Default for BoundsConfig {
    fn default() -> Self {
        BoundsConfig { initial_pieces: 16, max_pieces: 1 << 16, rel_improvement: 0.01 }
    }
}

pub fn compute_h_bounds(path: &PolygonalPath, params: &SurfaceParams) -> Result<CoefficientBounds> {
    compute_h_bounds_with(path, params, &BoundsConfig::default())
}

/// Rigorous sup bounds of the coefficient functions and their first three
/// t-derivatives, by interval evaluation on each segment split into equal
/// pieces, doubling the piece count until the bounds settle.
pub fn compute_h_bounds_with(
    path: &PolygonalPath,
    params: &SurfaceParams,
    cfg: &BoundsConfig,
) -> Result<CoefficientBounds> {
    let a = params.a;
    for v in path.vertices() {
        check_branch_points(*v, a)?;
    }
    let eval = |pieces: usize| -> Result<[f64; 4]> {
        let mut acc = [0.0f64; 4];
        for i in 0..path.num_segments() {
            let b = segment_bounds(path, i, a, pieces)?;
            for k in 0..4 {
                acc[k] = acc[k].max(b[k]);
            }
        }
        Ok(acc)
    };
    let mut pieces = cfg.initial_pieces.max(1);
    let mut prev = eval(pieces)?;
    loop {
        pieces *= 2;
        if pieces > cfg.max_pieces {
            return Err(Error::SubdivisionLimitExceeded { pieces: cfg.max_pieces });
        }
        let cur = eval(pieces)?;
        let settled = prev.iter().zip(&cur).all(|(p, c)| {
            c.is_finite() && (p - c) <= cfg.rel_improvement * c
        });
        if settled {
            return CoefficientBounds::new(cur[0], cur[1], cur[2], cur[3]);
        }
        prev = cur;
    }
}
