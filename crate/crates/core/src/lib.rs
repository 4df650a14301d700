//! Validated numerics for the period problem of genus-1 catenoid cousins.
//!
//! The crate integrates Bryant's linear matrix equation along two paths on
//! the twice-punctured torus `(z-1)(z+a)w² = (z+1)(z-a)` with outward-rounded
//! interval arithmetic, bounds the Runge-Kutta discretization error in closed
//! form, and certifies the period condition `f₁ = f₂ > 2` on a parameter
//! range by the intermediate value theorem. A mesh module samples CMC 1
//! surfaces and their Euclidean minimal counterparts.

pub mod bounds;
pub mod certify;
pub mod error;
pub mod interval;
pub mod integrator;
pub mod mesh;
pub mod output;
pub mod period;
pub mod surface;

pub use error::{Error, Result};
pub use interval::{cbox_arith, iv_arith, ArithOp, ComplexBox, ComplexOp, RealInterval};
