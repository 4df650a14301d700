//! Closed-form a-priori bounds for the Runge-Kutta output: the global
//! discretization bound built from the polynomial `ζ(c, n, M, M₁, M₂, M₃)`,
//! the bound on the `c`-derivative of the RK4 output, and the a-priori growth
//! of the exact solution. Every quantity is evaluated in interval arithmetic
//! and the upper endpoint is returned.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::RealInterval;
use crate::surface::CoefficientBounds;

/// One group of `ζ`: `n^power · c^c_power / denominator · Σ coeff · c^cp · M^e₀ M₁^e₁ M₂^e₂ M₃^e₃`.
#[derive(Clone, Copy, Debug)]
pub struct ZetaGroup {
    pub n_power: u32,
    pub c_power: u32,
    pub denominator: u32,
    /// `(coefficient, inner c power, [exponents of M, M₁, M₂, M₃])`
    pub terms: &'static [(u32, u32, [u32; 4])],
}

/// The ten groups of `ζ`, highest power of `n` first.
pub const ZETA_GROUPS: [ZetaGroup; 10] = [
    ZetaGroup {
        n_power: 9,
        c_power: 1,
        denominator: 72,
        terms: &[(96, 3, [4, 0, 0, 0]), (144, 2, [2, 1, 0, 0]), (18, 1, [0, 2, 0, 0]), (48, 1, [1, 0, 1, 0]), (13, 0, [0, 0, 0, 1])],
    },
    ZetaGroup {
        n_power: 8,
        c_power: 2,
        denominator: 48,
        terms: &[(32, 2, [3, 1, 0, 0]), (12, 1, [1, 2, 0, 0]), (16, 1, [2, 0, 1, 0]), (4, 0, [0, 1, 1, 0]), (11, 0, [1, 0, 0, 1])],
    },
    ZetaGroup {
        n_power: 7,
        c_power: 2,
        denominator: 384,
        terms: &[
            (80, 2, [2, 2, 0, 0]),
            (8, 1, [0, 3, 0, 0]),
            (96, 2, [3, 0, 1, 0]),
            (64, 1, [1, 1, 1, 0]),
            (5, 0, [0, 0, 2, 0]),
            (79, 1, [2, 0, 0, 1]),
            (22, 0, [0, 1, 0, 1]),
        ],
    },
    ZetaGroup {
        n_power: 6,
        c_power: 2,
        denominator: 2304,
        terms: &[
            (48, 2, [1, 3, 0, 0]),
            (336, 2, [2, 1, 1, 0]),
            (48, 1, [0, 2, 1, 0]),
            (60, 1, [1, 0, 2, 0]),
            (272, 2, [3, 0, 0, 1]),
            (236, 1, [1, 1, 0, 1]),
            (49, 0, [0, 0, 1, 1]),
        ],
    },
    ZetaGroup {
        n_power: 5,
        c_power: 2,
        denominator: 2304,
        terms: &[
            (48, 2, [1, 2, 1, 0]),
            (54, 2, [2, 0, 2, 0]),
            (15, 1, [0, 1, 2, 0]),
            (200, 2, [2, 1, 0, 1]),
            (26, 1, [0, 2, 0, 1]),
            (84, 1, [1, 0, 1, 1]),
            (12, 0, [0, 0, 0, 2]),
        ],
    },
    ZetaGroup {
        n_power: 4,
        c_power: 3,
        denominator: 13824,
        terms: &[
            (90, 1, [1, 1, 2, 0]),
            (9, 0, [0, 0, 3, 0]),
            (156, 1, [1, 2, 0, 1]),
            (450, 1, [2, 0, 1, 1]),
            (105, 0, [0, 1, 1, 1]),
            (116, 0, [1, 0, 0, 3]),
        ],
    },
    ZetaGroup {
        n_power: 3,
        c_power: 3,
        denominator: 27648,
        terms: &[
            (18, 1, [1, 0, 3, 0]),
            (210, 1, [1, 1, 1, 1]),
            (33, 0, [0, 0, 2, 1]),
            (216, 1, [2, 0, 0, 2]),
            (44, 0, [0, 1, 0, 2]),
        ],
    },
    ZetaGroup {
        n_power: 2,
        c_power: 3,
        denominator: 27648,
        terms: &[(33, 1, [1, 0, 2, 1]), (44, 1, [1, 1, 0, 2]), (13, 0, [0, 0, 1, 2])],
    },
    ZetaGroup { n_power: 1, c_power: 3, denominator: 82944, terms: &[(39, 1, [1, 0, 1, 2]), (4, 0, [0, 0, 0, 3])] },
    ZetaGroup { n_power: 0, c_power: 4, denominator: 20736, terms: &[(1, 0, [1, 0, 0, 3])] },
];

fn check_inputs(c: f64, n: usize, b: &CoefficientBounds) -> Result<()> {
    if !(c >= 0.0 && c.is_finite()) {
        return Err(Error::OutOfRange(format!("c must be finite and nonnegative, got {c}")));
    }
    if n == 0 {
        return Err(Error::OutOfRange("n must be positive".into()));
    }
    CoefficientBounds::new(b.m, b.m1, b.m2, b.m3).map(|_| ())
}

/// Enclosure of each group of `ζ`, in the order of [`ZETA_GROUPS`].
pub fn zeta_groups(c: f64, n: usize, b: &CoefficientBounds) -> Result<[RealInterval; 10]> {
    check_inputs(c, n, b)?;
    let ci = RealInterval::point(c);
    let ni = RealInterval::point(n as f64);
    let ms = b.as_array().map(RealInterval::point);
    let mut out = [RealInterval::ZERO; 10];
    for (slot, g) in out.iter_mut().zip(ZETA_GROUPS.iter()) {
        let mut sum = RealInterval::ZERO;
        for &(coeff, cp, e) in g.terms {
            let mut t = RealInterval::point(coeff as f64) * ci.powi(cp);
            for (m, k) in ms.iter().zip(e) {
                t = t * m.powi(k);
            }
            sum = sum + t;
        }
        *slot = (ni.powi(g.n_power) * ci.powi(g.c_power) * sum).div_scalar(g.denominator as f64);
    }
    Ok(out)
}

fn zeta_interval(c: f64, n: usize, b: &CoefficientBounds) -> Result<RealInterval> {
    Ok(zeta_groups(c, n, b)?.into_iter().fold(RealInterval::ZERO, |acc, g| acc + g))
}

/// Upper bound of `ζ(c, n, M, M₁, M₂, M₃)`.
pub fn zeta(c: f64, n: usize, b: &CoefficientBounds) -> Result<f64> {
    Ok(zeta_interval(c, n, b)?.hi())
}

fn check_step_condition(c: f64, n: usize, m: f64) -> Result<()> {
    let lhs = RealInterval::point(m) * RealInterval::point(c) * RealInterval::point(100.0);
    if lhs.hi() < n as f64 {
        Ok(())
    } else {
        Err(Error::PreconditionViolation(format!("M·c/n < 1/100 fails for M = {m}, c = {c}, n = {n}")))
    }
}

/// Upper bound on the gap between the RK4 output with `n` steps and the
/// exact solution, for each of `A, B, C, D`:
/// `(e^{2.1cM} + e^{4.1cM}) / (4.2 c M n¹²) · ζ`.
pub fn global_rk4_bound(c: f64, n: usize, b: &CoefficientBounds) -> Result<f64> {
    check_inputs(c, n, b)?;
    check_step_condition(c, n, b.m)?;
    if c == 0.0 || b.m == 0.0 {
        return Ok(0.0);
    }
    let ci = RealInterval::point(c);
    let mi = RealInterval::point(b.m);
    let cm = ci * mi;
    let e = (cm * RealInterval::new(2.1f64.next_down(), 2.1f64.next_up())).exp()
        + (cm * RealInterval::new(4.1f64.next_down(), 4.1f64.next_up())).exp();
    let den = RealInterval::new(4.2f64.next_down(), 4.2f64.next_up()) * cm * RealInterval::point(n as f64).powi(12);
    let v = (e * zeta_interval(c, n, b)?).try_div(&den)?;
    Ok(v.hi())
}

/// Upper bound `2.48 · M · e^{2.4 M c}` on the `c`-derivative of every entry
/// of the RK4 output.
pub fn c_derivative_bound(m: f64, c: f64) -> Result<f64> {
    if !(m >= 0.0 && m.is_finite() && c >= 0.0 && c.is_finite()) {
        return Err(Error::OutOfRange(format!("need finite M, c ≥ 0, got M = {m}, c = {c}")));
    }
    let mi = RealInterval::point(m);
    let k = RealInterval::new(2.48f64.next_down(), 2.48f64.next_up());
    let r = RealInterval::new(2.4f64.next_down(), 2.4f64.next_up());
    Ok((k * mi * (r * mi * RealInterval::point(c)).exp()).hi())
}

/// A-priori bounds on the exact solution with identity start at parameter
/// `t`: `|A|, |D| ≤ (1 + e^{2tcM})/2` and `|B|, |C| ≤ (e^{2tcM} - 1)/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrowthBound {
    pub diagonal: f64,
    pub off_diagonal: f64,
}

pub fn solution_growth_bound(c: f64, m: f64, t: f64) -> Result<GrowthBound> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::OutOfRange(format!("t = {t} not in [0, 1]")));
    }
    let e = (RealInterval::point(2.0 * t) * RealInterval::point(c) * RealInterval::point(m)).exp();
    Ok(GrowthBound {
        diagonal: (e + RealInterval::ONE).div_scalar(2.0).hi(),
        off_diagonal: (e - RealInterval::ONE).div_scalar(2.0).hi().max(0.0),
    })
}

/// The error allowance of one certification run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorBudget {
    /// Discretization bound on each entry, valid for every `c` up to `c_ref`.
    pub epsilon: f64,
    /// Bound on the change of each entry across half a subinterval.
    pub epsilon_hat: f64,
    pub n: usize,
    pub bounds: CoefficientBounds,
    pub c_ref: f64,
    pub half_width: f64,
}

impl ErrorBudget {
    /// Budget for the range `[c1, c2]` cut into pieces of half-width at most
    /// `half_width`. Both bounds grow with `c`, so they are evaluated at `c2`.
    pub fn new(c2: f64, n: usize, bounds: CoefficientBounds, half_width: f64) -> Result<Self> {
        if !(half_width >= 0.0 && half_width.is_finite()) {
            return Err(Error::OutOfRange(format!("half-width {half_width}")));
        }
        let epsilon = global_rk4_bound(c2, n, &bounds)?;
        let d = c_derivative_bound(bounds.m, c2)?;
        let epsilon_hat = (RealInterval::point(d) * RealInterval::point(half_width)).hi();
        Ok(ErrorBudget { epsilon, epsilon_hat, n, bounds, c_ref: c2, half_width })
    }

    /// Scale `epsilon` by `factor`, rounding upward.
    pub fn with_epsilon_scale(mut self, factor: f64) -> Self {
        self.epsilon = (RealInterval::point(self.epsilon) * RealInterval::point(factor)).hi();
        self
    }

    /// Inflation applied inside a sweep subinterval.
    pub fn sweep_radius(&self) -> f64 {
        (RealInterval::point(self.epsilon) + RealInterval::point(self.epsilon_hat)).hi()
    }
}
