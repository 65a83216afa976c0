//! Shared text rendering for signed sums of terms.

use num_rational::BigRational;
use num_traits::{One, Signed};

pub(crate) fn rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Body of `c * monomial` with the sign of `c` stripped. `monomial` may be
/// empty for the constant term.
pub(crate) fn scaled_monomial(c: &BigRational, monomial: &str) -> (bool, String) {
    let negative = c.is_negative();
    let mag = c.abs();
    let body = if monomial.is_empty() {
        rational(&mag)
    } else if mag.is_one() {
        monomial.to_string()
    } else {
        format!("{}*{}", rational(&mag), monomial)
    };
    (negative, body)
}

pub(crate) fn power(var: &str, e: usize) -> String {
    match e {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{e}"),
    }
}

/// Joins `(negative, body)` pairs as `a - b + c`. Empty input renders as `0`.
pub(crate) fn join_signed(terms: Vec<(bool, String)>) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (negative, body)) in terms.into_iter().enumerate() {
        match (idx, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    out
}
