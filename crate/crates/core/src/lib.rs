//! Exact computation in generalized Heisenberg algebras H(f).
//!
//! H(f) is the algebra on `x`, `y`, `h` with relations `hx = x f(h)`,
//! `yh = f(h) y` and `yx - xy = f(h) - h`, for a fixed polynomial `f`.
//! Scalars are exact rationals or elements of a cyclotomic field.

mod arith;
mod format;
mod intpoly;

pub mod algebra;
pub mod error;
pub mod field;
pub mod morphisms;
pub mod poly;
pub mod structure;

pub use algebra::{generators, AlgebraElement, Context, Degree, Terms};
pub use error::{Error, Result};
pub use field::{cyclotomic_polynomial, FieldDesc, FieldElement};
pub use poly::{sigma_power_h, Poly, SigmaPowers, DEFAULT_DEGREE_CAP};
