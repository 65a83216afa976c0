use crate::field::FieldDesc;

/// Errors raised by the engine. Every fallible public operation returns this.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid field description `{0}` (expected `Q` or `Q(zeta_m)` with m >= 1)")]
    InvalidField(String),

    #[error("operands live in different fields ({left} vs {right})")]
    FieldMismatch { left: FieldDesc, right: FieldDesc },

    #[error("inverse of zero")]
    ZeroInverse,

    #[error("{from} does not embed in {to}")]
    NoEmbedding { from: FieldDesc, to: FieldDesc },

    #[error("{0} has no root of unity `zeta`; choose a cyclotomic field")]
    NoZeta(FieldDesc),

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("result would have degree {degree}, above the degree cap {cap}")]
    DegreeCap { degree: usize, cap: usize },

    #[error("cannot decompose with respect to a constant polynomial")]
    ConstantInner,

    #[error("coefficients are not rational")]
    NonRational,

    #[error("elements belong to different algebras")]
    ContextMismatch,

    #[error("element is not in the degree-0 subalgebra H_0")]
    NotInH0,

    #[error("scalar must be nonzero")]
    ZeroScalar,

    #[error("{0}")]
    Precondition(String),

    #[error(
        "f(0) != 0: shift to F(h) = f(h + a) - a for a root a of f(h) - h first; rational roots: {}",
        if rational_roots.is_empty() { "none (irrational shifts are unsupported)".to_string() } else { rational_roots.join(", ") }
    )]
    NeedsShift { rational_roots: Vec<String> },

    #[error("pair (a, b) = ({a}, {b}) does not satisfy f(ah + b) = a f(h) + b")]
    InvalidPair { a: String, b: String },

    #[error("generator images do not define a derivation of H(f)")]
    NotADerivation,
}

pub type Result<T> = std::result::Result<T, Error>;
