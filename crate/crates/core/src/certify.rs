//! Existence certification of a parameter `c ∈ [c₁, c₂]` with
//! `f₁(c) = f₂(c) > 2`, by the intermediate value theorem.
//!
//! The range is cut into equal subintervals. At `c₁` and `c₂` the endpoint
//! enclosures, widened by the discretization bound `ε`, must separate `f₁`
//! from `f₂` with opposite orders. At each subinterval midpoint the
//! enclosures, widened by `ε + ε̂`, must put both functions above 2 with
//! denominators bounded away from zero. A separate checker re-derives every
//! inequality from the numbers stored in the certificate.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::ErrorBudget;
use crate::error::{Error, Result};
use crate::integrator::{CoefficientTable, IntegrationConfig, MatrixEnclosure, Mode};
use crate::interval::{ComplexBox, RealInterval};
use crate::output::write_atomic;
use crate::period::{period_f1, period_f2, PeriodValue};
use crate::surface::{compute_h_bounds, CoefficientBounds, PolygonalPath, SurfaceParams};

pub const SCHEMA_VERSION: u32 = 1;

pub const DEFAULT_A: f64 = 1.78;
pub const DEFAULT_C1: f64 = 0.0495;
pub const DEFAULT_C2: f64 = 0.0505;
pub const DEFAULT_N: usize = 4000;
pub const DEFAULT_SUBINTERVALS: usize = 50;

/// Lower and upper bounds of the real and imaginary part of one entry.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntryBounds {
    pub lr: f64,
    pub ur: f64,
    pub li: f64,
    pub ui: f64,
}

impl From<&ComplexBox> for EntryBounds {
    fn from(b: &ComplexBox) -> Self {
        EntryBounds { lr: b.re.lo(), ur: b.re.hi(), li: b.im.lo(), ui: b.im.hi() }
    }
}

/// The sixteen stored bounds of an endpoint matrix `(A B; C D)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixBounds {
    #[serde(rename = "A")]
    pub a: EntryBounds,
    #[serde(rename = "B")]
    pub b: EntryBounds,
    #[serde(rename = "C")]
    pub c: EntryBounds,
    #[serde(rename = "D")]
    pub d: EntryBounds,
}

impl From<&MatrixEnclosure> for MatrixBounds {
    fn from(m: &MatrixEnclosure) -> Self {
        MatrixBounds { a: (&m.a11).into(), b: (&m.a12).into(), c: (&m.a21).into(), d: (&m.a22).into() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertParams {
    pub a: f64,
    pub c1: f64,
    pub c2: f64,
    pub n: usize,
    pub subintervals: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundsSource {
    Computed,
    Override,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsRecord {
    pub source: BoundsSource,
    pub alpha1: CoefficientBounds,
    pub alpha2: CoefficientBounds,
}

/// Inflated enclosures of `f₁`, `f₂` at one endpoint, with the raw
/// endpoint matrices they came from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EndpointRecord {
    pub c: f64,
    pub f1: Option<RealInterval>,
    pub f2: Option<RealInterval>,
    pub alpha1: MatrixBounds,
    pub alpha2: MatrixBounds,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub c_lo: f64,
    pub c_hi: f64,
    pub c_mid: f64,
    pub f1: Option<RealInterval>,
    pub f2: Option<RealInterval>,
    pub pass: bool,
    pub alpha1: MatrixBounds,
    pub alpha2: MatrixBounds,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "reason")]
pub enum Verdict {
    #[serde(rename = "VERIFIED")]
    Verified,
    #[serde(rename = "FAILED")]
    Failed(String),
}

impl Verdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, Verdict::Verified)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema_version: u32,
    pub params: CertParams,
    pub bounds: BoundsRecord,
    pub budget: ErrorBudget,
    pub endpoint_enclosures: [EndpointRecord; 2],
    pub sweep: Vec<SweepRecord>,
    pub verdict: Verdict,
    pub timestamp: String,
    pub toolchain: String,
}

impl Certificate {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut s = self.to_json()?;
        s.push('\n');
        write_atomic(path, s.as_bytes())
    }

    /// Copy with the timestamp blanked, for reproducibility comparisons.
    pub fn without_timestamp(&self) -> Self {
        Certificate { timestamp: String::new(), ..self.clone() }
    }
}

pub fn toolchain_fingerprint() -> String {
    format!(
        "bryant {} {}-{} {} binary64",
        env!("CARGO_PKG_VERSION"),
        std::env::consts::ARCH,
        std::env::consts::OS,
        if cfg!(debug_assertions) { "debug" } else { "release" }
    )
}

#[derive(Clone, Debug, PartialEq)]
pub struct CertifyConfig {
    pub a: f64,
    pub c1: f64,
    pub c2: f64,
    pub n: usize,
    pub subintervals: usize,
    /// Replace the computed coefficient bounds; must dominate them.
    pub bounds_override: Option<CoefficientBounds>,
    /// Multiplies `ε`; values above 1 test that the checks can fail.
    pub epsilon_scale: f64,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig {
            a: DEFAULT_A,
            c1: DEFAULT_C1,
            c2: DEFAULT_C2,
            n: DEFAULT_N,
            subintervals: DEFAULT_SUBINTERVALS,
            bounds_override: None,
            epsilon_scale: 1.0,
        }
    }
}

impl CertifyConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.a > 1.0 && self.a.is_finite()) {
            return Err(Error::InvalidRange(format!("a must exceed 1, got {}", self.a)));
        }
        if !(self.c1 > 0.0 && self.c1 < self.c2 && self.c2.is_finite()) {
            return Err(Error::InvalidRange(format!("need 0 < c1 < c2, got c1 = {}, c2 = {}", self.c1, self.c2)));
        }
        if self.n == 0 || self.subintervals == 0 {
            return Err(Error::InvalidRange("n and the subinterval count must be positive".into()));
        }
        if !(self.epsilon_scale >= 1.0 && self.epsilon_scale.is_finite()) {
            return Err(Error::InvalidRange(format!("epsilon scale must be at least 1, got {}", self.epsilon_scale)));
        }
        Ok(())
    }
}

/// Subinterval edges `c₁ = e₀ < e₁ < … < e_N = c₂`, shared exactly between
/// neighbours.
pub fn subinterval_edges(c1: f64, c2: f64, count: usize) -> Vec<f64> {
    (0..=count)
        .map(|i| match i {
            0 => c1,
            i if i == count => c2,
            i => c1 + (c2 - c1) * (i as f64 / count as f64),
        })
        .collect()
}

/// Largest distance from a midpoint to its subinterval ends, rounded up.
pub fn max_half_width(pieces: &[(f64, f64, f64)]) -> f64 {
    pieces
        .iter()
        .map(|&(lo, mid, hi)| {
            let l = RealInterval::point(mid) - RealInterval::point(lo);
            let r = RealInterval::point(hi) - RealInterval::point(mid);
            l.hi().max(r.hi())
        })
        .fold(0.0, f64::max)
}

/// Run the full pipeline with the given settings.
pub fn certify_existence(a: f64, c1: f64, c2: f64, n: usize, subintervals: usize) -> Result<Certificate> {
    certify(&CertifyConfig { a, c1, c2, n, subintervals, ..CertifyConfig::default() })
}

fn both_paths(a: f64) -> [PolygonalPath; 2] {
    [PolygonalPath::alpha1(a), PolygonalPath::alpha2(a)]
}

/// Worst-case coefficient bounds over both paths, and the per-path values.
pub fn path_bounds(a: f64) -> Result<(CoefficientBounds, [CoefficientBounds; 2])> {
    let params = SurfaceParams::new(a, 0.0)?;
    let [p1, p2] = both_paths(a);
    let b1 = compute_h_bounds(&p1, &params)?.strict();
    let b2 = compute_h_bounds(&p2, &params)?.strict();
    Ok((b1.max(&b2), [b1, b2]))
}

fn periods(f1: &MatrixEnclosure, f2: &MatrixEnclosure, r: f64) -> (Result<PeriodValue>, Result<PeriodValue>) {
    (period_f1(&f1.inflate(r)), period_f2(&f2.inflate(r)))
}

pub fn certify(cfg: &CertifyConfig) -> Result<Certificate> {
    cfg.validate()?;
    let (computed, [b1, b2]) = path_bounds(cfg.a)?;
    let (bounds, source) = match cfg.bounds_override {
        Some(o) if o.dominates(&computed) => (o, BoundsSource::Override),
        Some(o) => {
            return Err(Error::PreconditionViolation(format!(
                "override bounds {o:?} do not dominate the computed bounds {computed:?}"
            )))
        }
        None => (computed, BoundsSource::Computed),
    };

    let edges = subinterval_edges(cfg.c1, cfg.c2, cfg.subintervals);
    let pieces: Vec<(f64, f64, f64)> = edges.windows(2).map(|w| (w[0], 0.5 * (w[0] + w[1]), w[1])).collect();
    let budget = ErrorBudget::new(cfg.c2, cfg.n, bounds, max_half_width(&pieces))?.with_epsilon_scale(cfg.epsilon_scale);

    let icfg = IntegrationConfig::new(cfg.n, Mode::Interval)?;
    let tables: Vec<CoefficientTable> =
        both_paths(cfg.a).iter().map(|p| CoefficientTable::build(p, cfg.a, &icfg)).collect::<Result<_>>()?;

    let mut cs = vec![cfg.c1, cfg.c2];
    cs.extend(pieces.iter().map(|p| p.1));
    let mats: Vec<(MatrixEnclosure, MatrixEnclosure)> = cs
        .par_iter()
        .map(|&c| Ok((tables[0].integrate(c)?, tables[1].integrate(c)?)))
        .collect::<Result<_>>()?;

    let mut failure: Option<String> = None;
    let mut endpoint = |c: f64, (m1, m2): &(MatrixEnclosure, MatrixEnclosure), f1_above: bool| {
        let (p1, p2) = periods(m1, m2, budget.epsilon);
        let (v1, v2) = (p1.ok().map(|p| p.value), p2.ok().map(|p| p.value));
        let separated = match (v1, v2) {
            (Some(x), Some(y)) if f1_above => x.lo() > y.hi(),
            (Some(x), Some(y)) => x.hi() < y.lo(),
            _ => false,
        };
        if !separated && failure.is_none() {
            let rel = if f1_above { "f1 > f2" } else { "f1 < f2" };
            failure = Some(format!("endpoint sign not separable: {rel} not certified at c = {c}"));
        }
        EndpointRecord { c, f1: v1, f2: v2, alpha1: m1.into(), alpha2: m2.into() }
    };
    let e1 = endpoint(cfg.c1, &mats[0], true);
    let e2 = endpoint(cfg.c2, &mats[1], false);

    let r = budget.sweep_radius();
    let sweep: Vec<SweepRecord> = pieces
        .iter()
        .zip(&mats[2..])
        .map(|(&(c_lo, c_mid, c_hi), (m1, m2))| {
            let (p1, p2) = periods(m1, m2, r);
            let (f1, f2) = (p1.ok().map(|p| p.value), p2.ok().map(|p| p.value));
            let pass = matches!((f1, f2), (Some(x), Some(y)) if x.lo() > 2.0 && y.lo() > 2.0 && x.is_finite() && y.is_finite());
            SweepRecord { c_lo, c_hi, c_mid, f1, f2, pass, alpha1: m1.into(), alpha2: m2.into() }
        })
        .collect();

    if failure.is_none() {
        failure = coverage_gap(&sweep, cfg.c1, cfg.c2);
    }
    if failure.is_none() {
        if let Some(s) = sweep.iter().find(|s| !s.pass) {
            failure = Some(format!("2 < f1, f2 < inf not certified on [{}, {}]", s.c_lo, s.c_hi));
        }
    }

    Ok(Certificate {
        schema_version: SCHEMA_VERSION,
        params: CertParams { a: cfg.a, c1: cfg.c1, c2: cfg.c2, n: cfg.n, subintervals: cfg.subintervals },
        bounds: BoundsRecord { source, alpha1: b1, alpha2: b2 },
        budget,
        endpoint_enclosures: [e1, e2],
        sweep,
        verdict: failure.map_or(Verdict::Verified, Verdict::Failed),
        timestamp: chrono::Utc::now().to_rfc3339(),
        toolchain: toolchain_fingerprint(),
    })
}

fn coverage_gap(sweep: &[SweepRecord], c1: f64, c2: f64) -> Option<String> {
    let (first, last) = (sweep.first()?, sweep.last()?);
    if first.c_lo != c1 || last.c_hi != c2 {
        return Some(format!("subintervals cover [{}, {}], not [{c1}, {c2}]", first.c_lo, last.c_hi));
    }
    if let Some(w) = sweep.windows(2).find(|w| w[0].c_hi != w[1].c_lo) {
        return Some(format!("gap between {} and {}", w[0].c_hi, w[1].c_lo));
    }
    sweep
        .iter()
        .find(|s| !(s.c_lo <= s.c_mid && s.c_mid <= s.c_hi && s.c_lo < s.c_hi))
        .map(|s| format!("malformed subinterval [{}, {}] with midpoint {}", s.c_lo, s.c_hi, s.c_mid))
}

/// Independent re-verification of a certificate from its stored numbers.
///
/// The period functions are re-expanded into real and imaginary parts and
/// evaluated on the stored bounds, widened by budgets recomputed from the
/// stored coefficient bounds. No integration is repeated. Returns the list
/// of failed checks, empty when the certificate holds.
pub fn check_certificate(cert: &Certificate) -> Vec<String> {
    let mut issues = Vec::new();
    let p = &cert.params;
    if cert.schema_version != SCHEMA_VERSION {
        issues.push(format!("schema version {} unsupported", cert.schema_version));
    }
    if !(p.a > 1.0 && p.c1 > 0.0 && p.c1 < p.c2) {
        issues.push("parameters out of range".into());
    }
    if !cert.budget.bounds.dominates(&cert.bounds.alpha1) || !cert.budget.bounds.dominates(&cert.bounds.alpha2) {
        issues.push("budget bounds do not dominate the per-path bounds".into());
    }
    if cert.budget.n != p.n || cert.budget.c_ref < p.c2 {
        issues.push("budget was not computed for these parameters".into());
    }
    if cert.sweep.len() != p.subintervals {
        issues.push(format!("{} sweep records for {} subintervals", cert.sweep.len(), p.subintervals));
    }
    if let Some(gap) = coverage_gap(&cert.sweep, p.c1, p.c2) {
        issues.push(gap);
    }
    let pieces: Vec<(f64, f64, f64)> = cert.sweep.iter().map(|s| (s.c_lo, s.c_mid, s.c_hi)).collect();
    let half = max_half_width(&pieces);

    let recomputed = ErrorBudget::new(p.c2, p.n, cert.budget.bounds, half);
    let (eps, eps_hat) = match recomputed {
        Ok(b) => (b.epsilon.max(cert.budget.epsilon), b.epsilon_hat.max(cert.budget.epsilon_hat)),
        Err(e) => {
            issues.push(format!("budget cannot be recomputed: {e}"));
            return issues;
        }
    };
    let sweep_r = (RealInterval::point(eps) + RealInterval::point(eps_hat)).hi();

    let [e1, e2] = &cert.endpoint_enclosures;
    if e1.c != p.c1 || e2.c != p.c2 {
        issues.push("endpoint records are not at c1 and c2".into());
    }
    match (real_f1(&e1.alpha1, eps), real_f2(&e1.alpha2, eps)) {
        (Some(x), Some(y)) if x.lo() > y.hi() => {}
        _ => issues.push(format!("f1 > f2 fails at c = {}", e1.c)),
    }
    match (real_f1(&e2.alpha1, eps), real_f2(&e2.alpha2, eps)) {
        (Some(x), Some(y)) if x.hi() < y.lo() => {}
        _ => issues.push(format!("f1 < f2 fails at c = {}", e2.c)),
    }
    for s in &cert.sweep {
        match (real_f1(&s.alpha1, sweep_r), real_f2(&s.alpha2, sweep_r)) {
            (Some(x), Some(y)) if x.lo() > 2.0 && y.lo() > 2.0 => {}
            _ => issues.push(format!("2 < f1, f2 < inf fails on [{}, {}]", s.c_lo, s.c_hi)),
        }
    }
    issues
}

fn parts(e: &EntryBounds, r: f64) -> Option<(RealInterval, RealInterval)> {
    if !(e.lr <= e.ur && e.li <= e.ui) {
        return None;
    }
    let re = RealInterval::new(e.lr, e.ur).inflate(r);
    let im = RealInterval::new(e.li, e.ui).inflate(r);
    Some((re, im))
}

type Parts = [(RealInterval, RealInterval); 4];

fn all_parts(m: &MatrixBounds, r: f64) -> Option<Parts> {
    Some([parts(&m.a, r)?, parts(&m.b, r)?, parts(&m.c, r)?, parts(&m.d, r)?])
}

/// `f₁ = -2(a_r d_r + a_i d_i + b_r c_r + b_i c_i) / (c_r d_r + c_i d_i + a_r b_r + a_i b_i)`.
fn real_f1(m: &MatrixBounds, r: f64) -> Option<RealInterval> {
    let [(ar, ai), (br, bi), (cr, ci), (dr, di)] = all_parts(m, r)?;
    let num = (ar * dr + ai * di + br * cr + bi * ci).mul_scalar(-2.0);
    let den = cr * dr + ci * di + ar * br + ai * bi;
    num.try_div(&den).ok()
}

/// `f₂ = 2(a_r d_i - a_i d_r + c_r b_i - c_i b_r) / (d_r c_i - d_i c_r + b_r a_i - b_i a_r)`.
fn real_f2(m: &MatrixBounds, r: f64) -> Option<RealInterval> {
    let [(ar, ai), (br, bi), (cr, ci), (dr, di)] = all_parts(m, r)?;
    let num = (ar * di - ai * dr + cr * bi - ci * br).mul_scalar(2.0);
    let den = dr * ci - di * cr + br * ai - bi * ar;
    num.try_div(&den).ok()
}

/// One row of a period sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub c: f64,
    pub f1: Option<f64>,
    pub f2: Option<f64>,
    pub f1_width: Option<f64>,
    pub f2_width: Option<f64>,
    pub flag: String,
}

/// Midpoints and widths of the raw period enclosures on a grid of `c`.
pub fn sweep_periods(a: f64, c_grid: &[f64], n: usize) -> Result<Vec<SweepRow>> {
    if let Some(c) = c_grid.iter().find(|c| !(**c > 0.0 && c.is_finite())) {
        return Err(Error::InvalidRange(format!("grid value c = {c} must be positive")));
    }
    let icfg = IntegrationConfig::new(n, Mode::Interval)?;
    let tables: Vec<CoefficientTable> =
        both_paths(a).iter().map(|p| CoefficientTable::build(p, a, &icfg)).collect::<Result<_>>()?;
    c_grid
        .par_iter()
        .map(|&c| {
            let (m1, m2) = (tables[0].integrate(c)?, tables[1].integrate(c)?);
            Ok(match (period_f1(&m1), period_f2(&m2)) {
                (Ok(p1), Ok(p2)) => SweepRow {
                    c,
                    f1: Some(p1.value.mid()),
                    f2: Some(p2.value.mid()),
                    f1_width: Some(p1.value.width()),
                    f2_width: Some(p2.value.width()),
                    flag: "ok".into(),
                },
                _ => SweepRow { c, f1: None, f2: None, f1_width: None, f2_width: None, flag: "DegenerateDenominator".into() },
            })
        })
        .collect()
}

pub const SWEEP_CSV_HEADER: &str = "c,f1,f2,f1_width,f2_width,flag";

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let opt = |x: Option<f64>| x.map(|v| format!("{v:.17e}")).unwrap_or_default();
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{},{},{},{},{},{}", r.c, opt(r.f1), opt(r.f2), opt(r.f1_width), opt(r.f2_width), r.flag);
    }
    out
}

/// Number of strict sign changes of `f₁ - f₂` along a sweep; rows without
/// values are skipped.
pub fn sign_changes(rows: &[SweepRow]) -> usize {
    let signs: Vec<f64> = rows
        .iter()
        .filter_map(|r| Some((r.f1? - r.f2?).signum()))
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Digits after the decimal point of a plain decimal literal, and the literal
/// scaled by `10^digits` as an integer.
fn plain_decimal(s: &str) -> Option<(u32, i128)> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = u32::try_from(frac.len()).ok().filter(|&d| d <= 18)?;
    let v: i128 = format!("{int}{frac}").parse().ok()?;
    Some((digits, if neg { -v } else { v }))
}

/// Grid points `lo + i·step` computed exactly in decimal and rounded once
/// to the nearest double, when all three inputs are plain decimals and the
/// range is an exact multiple of the step.
fn decimal_grid(lo: &str, hi: &str, step: &str, count: usize) -> Option<Vec<f64>> {
    let parsed = [plain_decimal(lo)?, plain_decimal(hi)?, plain_decimal(step)?];
    let digits = parsed.iter().map(|p| p.0).max()?;
    let [l, h, st] = parsed.map(|(d, v)| v.checked_mul(10i128.checked_pow(digits - d)?));
    let (l, h, st) = (l?, h?, st?);
    if st <= 0 || (h - l) % st != 0 || (h - l) / st + 1 != i128::try_from(count).ok()? {
        return None;
    }
    let scale = 10i128.pow(digits);
    (0..count as i128)
        .map(|i| {
            let v = l + i * st;
            let sign = if v < 0 { "-" } else { "" };
            let a = v.abs();
            format!("{sign}{}.{:0width$}", a / scale, a % scale, width = digits as usize).parse().ok()
        })
        .collect()
}

/// Parse `lo:hi:step` into evenly spaced values from `lo` to `hi`.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| Error::InvalidRange(format!("bad grid number '{s}'")));
    match parts.as_slice() {
        [x] => Ok(vec![num(x)?]),
        [lo, hi, step] => {
            let (lo, hi, step) = (num(lo)?, num(hi)?, num(step)?);
            if !(step > 0.0 && lo <= hi && lo.is_finite() && hi.is_finite()) {
                return Err(Error::InvalidRange(format!("grid '{spec}' needs lo <= hi and step > 0")));
            }
            let count = ((hi - lo) / step).round() as usize + 1;
            if count > 10_000_000 {
                return Err(Error::InvalidRange(format!("grid '{spec}' has too many points")));
            }
            if count == 1 {
                return Ok(vec![lo]);
            }
            if let Some(values) = decimal_grid(parts[0], parts[1], parts[2], count) {
                return Ok(values);
            }
            Ok((0..count)
                .map(|i| if i + 1 == count { hi } else { lo + (hi - lo) * (i as f64 / (count - 1) as f64) })
                .collect())
        }
        _ => Err(Error::InvalidRange(format!("grid '{spec}' is not lo:hi:step"))),
    }
}
