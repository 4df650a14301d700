//! Surface sampling and OBJ export.
//!
//! A CMC `c` surface in `H³(-c²)` comes from a solution of
//! `F⁻¹ dF = c (g -g²; 1 -g) f dz` as `Φ = (1/c) F⁻¹ F̄⁻¹ᵗ`, a Hermitean
//! matrix `(t + x₃, x₁ + i x₂; x₁ - i x₂, t - x₃)` on the hyperboloid
//! `x₁² + x₂² + x₃² - t² = -1/c²`. Points are shrunk by `c` onto the unit
//! hyperboloid and sent to the Poincaré ball. Euclidean minimal surfaces
//! come from the classical Weierstrass integral
//! `Re ∫ ((1 - g²) f, i (1 + g²) f, 2 g f) dz`.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrator::{rk4_step, ComplexMatrix};
use crate::output::write_atomic;
use crate::surface::{nearest_root, Coefficients};

/// Allowed deviation of `det F` from 1 at an immersion point.
pub const DET_TOL: f64 = 1e-8;

/// Grid nodes closer than this to a puncture are rejected.
const PUNCTURE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicPoint {
    /// `(t, x₁, x₂, x₃)`
    pub minkowski: [f64; 4],
    pub poincare: [f64; 3],
}

impl HyperbolicPoint {
    /// `|x₁² + x₂² + x₃² - t² + 1/c²| · c²`.
    pub fn quadric_residual(&self, c: f64) -> f64 {
        let [t, x1, x2, x3] = self.minkowski;
        let s = c * c;
        ((x1 * x1 + x2 * x2 + x3 * x3 - t * t) * s + 1.0).abs()
    }

    pub fn poincare_norm(&self) -> f64 {
        self.poincare.iter().map(|p| p * p).sum::<f64>().sqrt()
    }
}

/// Point of `H³(-c²)` for the frame `F`.
pub fn immersion_point(f: &ComplexMatrix, c: f64) -> Result<HyperbolicPoint> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::OutOfRange(format!("immersion needs c > 0, got {c}")));
    }
    let det = f.det();
    let dev = (det - 1.0).norm();
    if dev.is_nan() || dev > DET_TOL {
        return Err(Error::NonUnimodular(dev));
    }
    let inv = f.unimodular_inverse();
    let phi = inv.mul(&inv.adjoint());
    let t = 0.5 * (phi.a11.re + phi.a22.re) / c;
    let x3 = 0.5 * (phi.a11.re - phi.a22.re) / c;
    let x1 = phi.a12.re / c;
    let x2 = phi.a12.im / c;
    let denom = 1.0 + c * t;
    Ok(HyperbolicPoint { minkowski: [t, x1, x2, x3], poincare: [c * x1 / denom, c * x2 / denom, c * x3 / denom] })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PresetName {
    Horosphere,
    EnneperCousin,
    CatenoidCousin,
    Genus1Catenoid,
    EuclideanMinimalCatenoid,
    EuclideanEnneper,
}

impl PresetName {
    pub const ALL: [PresetName; 6] = [
        PresetName::Horosphere,
        PresetName::EnneperCousin,
        PresetName::CatenoidCousin,
        PresetName::Genus1Catenoid,
        PresetName::EuclideanMinimalCatenoid,
        PresetName::EuclideanEnneper,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PresetName::Horosphere => "horosphere",
            PresetName::EnneperCousin => "enneper_cousin",
            PresetName::CatenoidCousin => "catenoid_cousin",
            PresetName::Genus1Catenoid => "genus1_catenoid",
            PresetName::EuclideanMinimalCatenoid => "euclidean_minimal_catenoid",
            PresetName::EuclideanEnneper => "euclidean_enneper",
        }
    }

    pub fn is_euclidean(self) -> bool {
        matches!(self, PresetName::EuclideanMinimalCatenoid | PresetName::EuclideanEnneper)
    }
}

impl FromStr for PresetName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        PresetName::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::OutOfRange(format!("unknown preset '{s}'")))
    }
}

/// Weierstrass data with its parameters. `lambda` scales `f` for the two
/// cousin families; `a` is used by the genus-1 preset only.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeierstrassPreset {
    pub name: PresetName,
    pub lambda: f64,
    pub a: f64,
    pub c: f64,
}

impl WeierstrassPreset {
    pub fn new(name: PresetName) -> Self {
        match name {
            PresetName::Genus1Catenoid => WeierstrassPreset { name, lambda: 1.0, a: 1.78, c: 0.05 },
            PresetName::EnneperCousin | PresetName::CatenoidCousin => {
                WeierstrassPreset { name, lambda: 0.5, a: 1.78, c: 1.0 }
            }
            _ => WeierstrassPreset { name, lambda: 1.0, a: 1.78, c: 1.0 },
        }
    }

    /// `(g, f)` at `z`. `g_hint` selects the sheet where `g` is two-valued.
    pub fn data(&self, z: Complex64, g_hint: Complex64) -> Result<(Complex64, Complex64)> {
        let l = Complex64::new(self.lambda, 0.0);
        match self.name {
            PresetName::Horosphere => Ok((Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0))),
            PresetName::EnneperCousin => Ok((z, l)),
            PresetName::CatenoidCousin => Ok((z, l / (z * z))),
            PresetName::Genus1Catenoid => {
                let w = nearest_root(z, self.a, g_hint)?;
                Ok((w, w.inv()))
            }
            PresetName::EuclideanMinimalCatenoid => Ok((z, (z * z).inv())),
            PresetName::EuclideanEnneper => Ok((z, Complex64::new(1.0, 0.0))),
        }
    }

    fn punctures(&self) -> Vec<Complex64> {
        match self.name {
            PresetName::CatenoidCousin | PresetName::EuclideanMinimalCatenoid => vec![Complex64::new(0.0, 0.0)],
            PresetName::Genus1Catenoid => [-self.a, -1.0, 1.0, self.a].iter().map(|&p| Complex64::new(p, 0.0)).collect(),
            _ => vec![],
        }
    }

    /// Scale of the ODE and of the immersion.
    fn scales(&self) -> (f64, f64) {
        match self.name {
            PresetName::Genus1Catenoid => (self.c, 1.0),
            _ => (self.c, self.c),
        }
    }
}

/// Grid node counts along the two parameter directions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub nu: usize,
    pub nv: usize,
    /// RK4 steps per grid edge.
    pub substeps: usize,
    /// `[u_lo, u_hi, v_lo, v_hi]` replacing the preset's parameter ranges.
    pub domain: Option<[f64; 4]>,
}

impl GridSpec {
    pub fn new(nu: usize, nv: usize) -> Result<Self> {
        if nu < 2 || nv < 2 {
            return Err(Error::InvalidRange(format!("grid needs at least 2x2 nodes, got {nu}x{nv}")));
        }
        Ok(GridSpec { nu, nv, substeps: 16, domain: None })
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { nu: 24, nv: 24, substeps: 16, domain: None }
    }
}

impl FromStr for GridSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s.split_once(['x', 'X']).ok_or_else(|| Error::InvalidRange(format!("grid '{s}' is not NxM")))?;
        let p = |t: &str| t.trim().parse::<usize>().map_err(|_| Error::InvalidRange(format!("grid '{s}' is not NxM")));
        GridSpec::new(p(a)?, p(b)?)
    }
}

/// A curve in the z-plane given by its value and derivative at `s ∈ [0, 1]`.
trait Curve: Sync {
    fn at(&self, s: f64) -> (Complex64, Complex64);
}

struct Segment(Complex64, Complex64);

impl Curve for Segment {
    fn at(&self, s: f64) -> (Complex64, Complex64) {
        (self.0 + (self.1 - self.0) * s, self.1 - self.0)
    }
}

/// `r e^{iθ}` for `θ` from `th0` to `th1`.
struct Arc {
    r: f64,
    th0: f64,
    th1: f64,
}

impl Curve for Arc {
    fn at(&self, s: f64) -> (Complex64, Complex64) {
        let th = self.th0 + (self.th1 - self.th0) * s;
        let z = Complex64::from_polar(self.r, th);
        (z, Complex64::new(0.0, self.th1 - self.th0) * z)
    }
}

/// Frame and sheet value at a point.
#[derive(Clone, Copy, Debug)]
struct Frame {
    f: ComplexMatrix,
    g: Complex64,
}

fn advance(p: &WeierstrassPreset, start: Frame, curve: &dyn Curve, steps: usize) -> Result<Frame> {
    let (c_ode, _) = p.scales();
    let step_c = Complex64::new(c_ode / steps as f64, 0.0);
    let mut fr = start;
    let coeff = |s: f64, hint: Complex64| -> Result<(Coefficients<Complex64>, Complex64)> {
        let (z, dz) = curve.at(s);
        let (g, f) = p.data(z, hint)?;
        let q = f * dz;
        Ok((Coefficients { h1: q * g, h2: q, h3: -q * g * g, h4: -q * g }, g))
    };
    for k in 0..steps {
        let s0 = k as f64 / steps as f64;
        let (h0, g0) = coeff(s0, fr.g)?;
        let (hm, gm) = coeff(s0 + 0.5 / steps as f64, g0)?;
        let (h1, g1) = coeff((k + 1) as f64 / steps as f64, gm)?;
        fr = Frame { f: rk4_step(&fr.f, &[h0, hm, h1], step_c), g: g1 };
    }
    Ok(fr)
}

/// Sampled surface ready for export.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mesh {
    pub preset: String,
    pub nu: usize,
    pub nv: usize,
    /// Exported coordinates: the Poincaré ball point, or the Euclidean point
    /// times `scale`.
    pub vertices: Vec<[f64; 3]>,
    /// Hyperboloid data with its curvature scale, for hyperbolic presets.
    pub hyperbolic: Option<(f64, Vec<HyperbolicPoint>)>,
    pub scale: f64,
    /// Zero-based corner indices in counterclockwise order.
    pub quads: Vec<[usize; 4]>,
}

impl Mesh {
    /// Largest relative quadric residual over the vertices; `None` for
    /// Euclidean meshes.
    pub fn max_quadric_residual(&self) -> Option<f64> {
        self.hyperbolic.as_ref().map(|(c, pts)| pts.iter().map(|p| p.quadric_residual(*c)).fold(0.0, f64::max))
    }

    pub fn max_radius(&self) -> f64 {
        self.vertices.iter().map(|v| (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()).fold(0.0, f64::max)
    }

    /// Every interior edge is shared by exactly two quads and every vertex is
    /// used.
    pub fn is_watertight_sheet(&self) -> bool {
        use std::collections::HashMap;
        let mut edges: HashMap<(usize, usize), usize> = HashMap::new();
        let mut used = vec![false; self.vertices.len()];
        for q in &self.quads {
            for k in 0..4 {
                let (a, b) = (q[k], q[(k + 1) % 4]);
                if a >= used.len() || b >= used.len() {
                    return false;
                }
                used[a] = true;
                *edges.entry((a.min(b), a.max(b))).or_default() += 1;
            }
        }
        let boundary = edges.values().filter(|&&n| n == 1).count();
        used.iter().all(|u| *u)
            && edges.values().all(|&n| n <= 2)
            && boundary == 2 * (self.nu - 1) + 2 * (self.nv - 1)
    }
}

fn grid_quads(nu: usize, nv: usize) -> Vec<[usize; 4]> {
    let idx = |i: usize, j: usize| i * nv + j;
    let mut q = Vec::with_capacity((nu - 1) * (nv - 1));
    for i in 0..nu - 1 {
        for j in 0..nv - 1 {
            q.push([idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)]);
        }
    }
    q
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * (i as f64 / (n - 1) as f64) }).collect()
}

/// Visiting order that walks outward from `origin` in both directions.
/// Each entry is `(target index, source index)`, the source `None` meaning
/// the origin itself.
fn outward_chain(vals: &[f64], origin: f64) -> Vec<(usize, Option<usize>)> {
    let mut up: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] >= origin).collect();
    let mut down: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] < origin).collect();
    up.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
    down.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]));
    let mut out = Vec::with_capacity(vals.len());
    for side in [up, down] {
        let mut prev = None;
        for i in side {
            out.push((i, prev));
            prev = Some(i);
        }
    }
    out
}

/// Parameter domain of a preset. Every node is reached from the base point
/// by a trunk along the first coordinate followed by a branch along the
/// second.
#[derive(Clone, Copy, Debug, PartialEq)]
enum DomainKind {
    /// Trunk on the real axis, branches vertical.
    RealTrunk,
    /// Trunk on the imaginary axis, branches horizontal.
    ImaginaryTrunk,
    /// Trunk radial from `z = 1`, branches along circles about 0.
    Annulus,
}

struct Domain {
    kind: DomainKind,
    trunk: Vec<f64>,
    branch: Vec<f64>,
}

impl Domain {
    fn for_preset(p: &WeierstrassPreset, grid: &GridSpec) -> Self {
        let mut d = Self::preset_default(p, grid);
        if let Some([u0, u1, v0, v1]) = grid.domain {
            let (us, vs) = (linspace(u0, u1, grid.nu), linspace(v0, v1, grid.nv));
            (d.trunk, d.branch) = if d.kind == DomainKind::ImaginaryTrunk { (vs, us) } else { (us, vs) };
        }
        d
    }

    fn preset_default(p: &WeierstrassPreset, grid: &GridSpec) -> Self {
        match p.name {
            PresetName::CatenoidCousin | PresetName::EuclideanMinimalCatenoid => Domain {
                kind: DomainKind::Annulus,
                trunk: linspace(0.5, 2.0, grid.nu),
                branch: linspace(0.0, 2.0 * PI, grid.nv),
            },
            PresetName::Genus1Catenoid => Domain {
                kind: DomainKind::ImaginaryTrunk,
                trunk: linspace(0.1, 1.5, grid.nv),
                branch: linspace(0.0, 2.5, grid.nu),
            },
            _ => Domain {
                kind: DomainKind::RealTrunk,
                trunk: linspace(-1.0, 1.0, grid.nu),
                branch: linspace(-1.0, 1.0, grid.nv),
            },
        }
    }

    fn trunk_origin(&self) -> f64 {
        if self.kind == DomainKind::Annulus {
            1.0
        } else {
            0.0
        }
    }

    fn base(&self) -> Complex64 {
        Complex64::new(self.trunk_origin(), 0.0)
    }

    fn node(&self, t: f64, b: f64) -> Complex64 {
        match self.kind {
            DomainKind::RealTrunk => Complex64::new(t, b),
            DomainKind::ImaginaryTrunk => Complex64::new(b, t),
            DomainKind::Annulus => Complex64::from_polar(t, b),
        }
    }

    fn trunk_curve(&self, from: f64, to: f64) -> Box<dyn Curve> {
        match self.kind {
            DomainKind::RealTrunk | DomainKind::Annulus => {
                Box::new(Segment(Complex64::new(from, 0.0), Complex64::new(to, 0.0)))
            }
            DomainKind::ImaginaryTrunk => Box::new(Segment(Complex64::new(0.0, from), Complex64::new(0.0, to))),
        }
    }

    fn branch_curve(&self, t: f64, from: f64, to: f64) -> Box<dyn Curve> {
        match self.kind {
            DomainKind::Annulus => Box::new(Arc { r: t, th0: from, th1: to }),
            _ => Box::new(Segment(self.node(t, from), self.node(t, to))),
        }
    }

    /// Grid position `(i, j)` of trunk index `k` and branch index `l`.
    fn grid_index(&self, k: usize, l: usize) -> (usize, usize) {
        match self.kind {
            DomainKind::ImaginaryTrunk => (l, k),
            _ => (k, l),
        }
    }

    /// States at all nodes in row-major grid order, each obtained by `step`
    /// along the node's canonical path from `base`.
    fn walk<S, F>(&self, base: S, nu: usize, nv: usize, step: F) -> Result<Vec<S>>
    where
        S: Clone + Send + Sync,
        F: Fn(&S, &dyn Curve) -> Result<S> + Sync,
    {
        let origin = self.trunk_origin();
        let mut trunk_states: Vec<Option<S>> = vec![None; self.trunk.len()];
        for (k, src) in outward_chain(&self.trunk, origin) {
            let (from_state, from) = match src {
                Some(s) => (trunk_states[s].clone().expect("visited"), self.trunk[s]),
                None => (base.clone(), origin),
            };
            trunk_states[k] = Some(step(&from_state, &*self.trunk_curve(from, self.trunk[k]))?);
        }
        let chain = outward_chain(&self.branch, 0.0);
        let columns: Vec<Vec<S>> = trunk_states
            .par_iter()
            .enumerate()
            .map(|(k, st)| {
                let start = st.clone().expect("visited");
                let t = self.trunk[k];
                let mut states: Vec<Option<S>> = vec![None; self.branch.len()];
                for &(l, src) in &chain {
                    let (from_state, from) = match src {
                        Some(s) => (states[s].clone().expect("visited"), self.branch[s]),
                        None => (start.clone(), 0.0),
                    };
                    states[l] = Some(step(&from_state, &*self.branch_curve(t, from, self.branch[l]))?);
                }
                Ok(states.into_iter().map(|s| s.expect("visited")).collect())
            })
            .collect::<Result<_>>()?;
        let mut grid: Vec<Option<S>> = vec![None; nu * nv];
        for (k, col) in columns.into_iter().enumerate() {
            for (l, s) in col.into_iter().enumerate() {
                let (i, j) = self.grid_index(k, l);
                grid[i * nv + j] = Some(s);
            }
        }
        Ok(grid.into_iter().map(|s| s.expect("every node reached")).collect())
    }

    fn nodes(&self, nu: usize, nv: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); nu * nv];
        for (k, &t) in self.trunk.iter().enumerate() {
            for (l, &b) in self.branch.iter().enumerate() {
                let (i, j) = self.grid_index(k, l);
                out[i * nv + j] = self.node(t, b);
            }
        }
        out
    }
}

const GAUSS_LEGENDRE_5: [(f64, f64); 5] = [
    (0.0, 0.568_888_888_888_888_9),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    (0.906_179_845_938_664, 0.236_926_885_056_189_1),
];

/// Complex Weierstrass integrand `((1 - g²) f, i (1 + g²) f, 2 g f)`.
fn minimal_integrand(g: Complex64, f: Complex64) -> [Complex64; 3] {
    let g2 = g * g;
    [(1.0 - g2) * f, Complex64::new(0.0, 1.0) * (1.0 + g2) * f, 2.0 * g * f]
}

fn integrate_minimal(
    data: &dyn Fn(Complex64) -> (Complex64, Complex64),
    acc: [Complex64; 3],
    curve: &dyn Curve,
    pieces: usize,
) -> [Complex64; 3] {
    let mut acc = acc;
    let h = 1.0 / pieces as f64;
    for k in 0..pieces {
        let mid = (k as f64 + 0.5) * h;
        for &(x, w) in &GAUSS_LEGENDRE_5 {
            let (z, dz) = curve.at(mid + 0.5 * h * x);
            let (g, f) = data(z);
            let v = minimal_integrand(g, f);
            for (a, vi) in acc.iter_mut().zip(v) {
                *a += vi * dz * (0.5 * h * w);
            }
        }
    }
    acc
}

/// `Re ∫ ((1 - g²) f, i (1 + g²) f, 2 g f) dz` along the polyline `path`,
/// with composite five-point Gauss-Legendre quadrature, `pieces` panels per
/// segment.
pub fn minimal_point(
    data: &dyn Fn(Complex64) -> (Complex64, Complex64),
    path: &[Complex64],
    pieces: usize,
) -> [f64; 3] {
    let mut acc = [Complex64::new(0.0, 0.0); 3];
    for w in path.windows(2) {
        acc = integrate_minimal(data, acc, &Segment(w[0], w[1]), pieces.max(1));
    }
    acc.map(|z| z.re)
}

/// Sample a preset over its parameter domain.
pub fn sample_surface(preset: &WeierstrassPreset, grid: &GridSpec) -> Result<Mesh> {
    let GridSpec { nu, nv, substeps, .. } = *grid;
    if nu < 2 || nv < 2 || substeps == 0 {
        return Err(Error::InvalidRange(format!("grid {nu}x{nv} with {substeps} substeps")));
    }
    if !(preset.c > 0.0 && preset.c.is_finite()) && !preset.name.is_euclidean() {
        return Err(Error::OutOfRange(format!("preset needs c > 0, got {}", preset.c)));
    }
    let dom = Domain::for_preset(preset, grid);
    let nodes = dom.nodes(nu, nv);
    for z in &nodes {
        if let Some(p) = preset.punctures().iter().find(|p| (*z - **p).norm() < PUNCTURE_TOL) {
            return Err(Error::GridSingularity(format!("{z} (puncture {p})")));
        }
    }
    let quads = grid_quads(nu, nv);

    if preset.name.is_euclidean() {
        let data = |z: Complex64| preset.data(z, Complex64::new(1.0, 0.0)).expect("single-valued data");
        let zero = [Complex64::new(0.0, 0.0); 3];
        let sums = dom.walk(zero, nu, nv, |acc, curve| Ok(integrate_minimal(&data, *acc, curve, substeps)))?;
        let raw: Vec<[f64; 3]> = sums.iter().map(|s| s.map(|z| z.re)).collect();
        let r = raw.iter().map(|v| (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()).fold(0.0, f64::max);
        let scale = if r > 0.0 { 0.5 / r } else { 1.0 };
        let vertices = raw.iter().map(|v| v.map(|x| x * scale)).collect();
        return Ok(Mesh { preset: preset.name.as_str().into(), nu, nv, vertices, hyperbolic: None, scale, quads });
    }

    let g0 = match preset.name {
        PresetName::Genus1Catenoid => Complex64::new(1.0, 0.0),
        _ => preset.data(dom.base(), Complex64::new(1.0, 0.0))?.0,
    };
    let base = Frame { f: ComplexMatrix::identity(), g: g0 };
    let frames = dom.walk(base, nu, nv, |fr, curve| advance(preset, *fr, curve, substeps))?;
    let (_, c_imm) = preset.scales();
    let pts: Vec<HyperbolicPoint> = frames.iter().map(|fr| immersion_point(&fr.f, c_imm)).collect::<Result<_>>()?;
    Ok(Mesh {
        preset: preset.name.as_str().into(),
        nu,
        nv,
        vertices: pts.iter().map(|p| p.poincare).collect(),
        hyperbolic: Some((c_imm, pts)),
        scale: 1.0,
        quads,
    })
}

/// Wavefront OBJ text: one comment line, `v` lines with nine significant
/// digits, then one-based `f` quad lines.
pub fn obj_string(mesh: &Mesh) -> Result<String> {
    if mesh.vertices.is_empty() {
        return Err(Error::InvalidRange("cannot export an empty mesh".into()));
    }
    let model = if mesh.hyperbolic.is_some() { "poincare" } else { "euclidean" };
    let mut s = String::new();
    let _ = writeln!(s, "# {} {} scale {:.8e}", mesh.preset, model, mesh.scale);
    for v in &mesh.vertices {
        let _ = writeln!(s, "v {:.8e} {:.8e} {:.8e}", v[0], v[1], v[2]);
    }
    for q in &mesh.quads {
        let _ = writeln!(s, "f {} {} {} {}", q[0] + 1, q[1] + 1, q[2] + 1, q[3] + 1);
    }
    Ok(s)
}

pub fn export_obj(mesh: &Mesh, path: &Path) -> Result<()> {
    write_atomic(path, obj_string(mesh)?.as_bytes())
}

/// Vertex coordinates and one-based face index lists.
pub type ObjData = (Vec<[f64; 3]>, Vec<Vec<usize>>);

/// Vertices and faces read back from OBJ text.
pub fn parse_obj(text: &str) -> Result<ObjData> {
    let mut vs = Vec::new();
    let mut fs = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let mut it = line.split_whitespace();
        let bad = || Error::InvalidRange(format!("OBJ line {}: '{line}'", ln + 1));
        match it.next() {
            Some("v") => {
                let c: Vec<f64> = it.map(|t| t.parse::<f64>().map_err(|_| bad())).collect::<Result<_>>()?;
                if c.len() != 3 {
                    return Err(bad());
                }
                vs.push([c[0], c[1], c[2]]);
            }
            Some("f") => fs.push(it.map(|t| t.parse::<usize>().map_err(|_| bad())).collect::<Result<_>>()?),
            _ => {}
        }
    }
    Ok((vs, fs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_maps_to_origin() {
        let p = immersion_point(&ComplexMatrix::identity(), 1.0).unwrap();
        assert_eq!(p.minkowski, [1.0, 0.0, 0.0, 0.0]);
        assert_eq!(p.poincare, [0.0, 0.0, 0.0]);
    }

    #[test]
    fn geodesic_point_maps_to_tanh_half() {
        // F = diag(e^{-s/2}, e^{s/2}) puts Φ at (cosh s, 0, 0, -sinh s).
        let s: f64 = 1.3;
        let f = ComplexMatrix::new(
            Complex64::new((-s / 2.0).exp(), 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new((s / 2.0).exp(), 0.0),
        );
        let p = immersion_point(&f, 1.0).unwrap();
        assert!((p.minkowski[0] - s.cosh()).abs() < 1e-14);
        assert!((p.minkowski[3] - s.sinh()).abs() < 1e-14);
        assert!((p.poincare[2] - (s / 2.0).tanh()).abs() < 1e-15);
    }

    #[test]
    fn determinant_of_phi() {
        let f = ComplexMatrix::new(
            Complex64::new(1.0, 0.5),
            Complex64::new(0.25, -1.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.5).inv(),
        );
        for c in [0.05, 1.0, 3.0] {
            let p = immersion_point(&f, c).unwrap();
            assert!(p.quadric_residual(c) < 1e-13);
            assert!(p.poincare_norm() < 1.0);
        }
    }

    #[test]
    fn non_unimodular_rejected() {
        let mut f = ComplexMatrix::identity();
        f.a11 = Complex64::new(2.0, 0.0);
        assert!(matches!(immersion_point(&f, 1.0), Err(Error::NonUnimodular(_))));
    }

    #[test]
    fn chain_visits_outward() {
        let v = [-1.0, -0.5, 0.0, 0.5, 1.0];
        assert_eq!(outward_chain(&v, 0.0), vec![(2, None), (3, Some(2)), (4, Some(3)), (1, None), (0, Some(1))]);
    }

    #[test]
    fn minimal_point_zero_path() {
        let d = |z: Complex64| (z, Complex64::new(1.0, 0.0));
        let z = Complex64::new(0.3, 0.2);
        assert_eq!(minimal_point(&d, &[z, z], 4), [0.0, 0.0, 0.0]);
        assert_eq!(minimal_point(&d, &[z], 4), [0.0, 0.0, 0.0]);
    }

    #[test]
    fn one_quad_obj() {
        let m = Mesh {
            preset: "test".into(),
            nu: 2,
            nv: 2,
            vertices: vec![[0.0, 0.0, 0.0], [0.5, 0.0, 0.0], [0.5, 0.5, 0.0], [0.0, 0.5, 0.25]],
            hyperbolic: None,
            scale: 1.0,
            quads: vec![[0, 1, 2, 3]],
        };
        let s = obj_string(&m).unwrap();
        assert_eq!(s.lines().filter(|l| l.starts_with("v ")).count(), 4);
        assert_eq!(s.lines().filter(|l| l.starts_with("f ")).count(), 1);
        assert!(s.contains("f 1 2 3 4"));
        assert!(m.is_watertight_sheet());
    }

    #[test]
    fn grid_parse() {
        let g: GridSpec = "8x5".parse().unwrap();
        assert_eq!((g.nu, g.nv), (8, 5));
        assert!("8".parse::<GridSpec>().is_err());
        assert!("1x5".parse::<GridSpec>().is_err());
    }

    #[test]
    fn puncture_on_grid_rejected() {
        let g1 = WeierstrassPreset::new(PresetName::Genus1Catenoid);
        let grid = GridSpec { domain: Some([0.0, 2.0, 0.0, 1.0]), ..GridSpec::new(3, 3).unwrap() };
        assert!(matches!(sample_surface(&g1, &grid), Err(Error::GridSingularity(_))));
        let cat = WeierstrassPreset::new(PresetName::CatenoidCousin);
        let grid = GridSpec { domain: Some([0.0, 1.0, 0.0, 1.0]), ..GridSpec::new(3, 3).unwrap() };
        assert!(matches!(sample_surface(&cat, &grid), Err(Error::GridSingularity(_))));
    }
}
