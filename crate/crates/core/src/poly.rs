//! Dense univariate polynomials in `h` over a [`FieldDesc`].
//!
//! Composition `g ∘ f` realizes the endomorphism sigma of C[h] with
//! sigma(h) = f(h); [`SigmaPowers`] memoizes the iterates sigma^k(h).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::{FieldDesc, FieldElement};
use crate::format;
use crate::intpoly;

/// Default bound on the degree of any polynomial the engine will build.
pub const DEFAULT_DEGREE_CAP: usize = 100_000;

/// Polynomials with at most this many coefficients compose by Horner's rule.
const COMPOSE_BLOCK: usize = 8;

/// Largest |coefficient| the rational-root search will factor by trial division.
const ROOT_SEARCH_LIMIT: u64 = 1_000_000_000_000;

pub(crate) fn check_degree(degree: Option<usize>, cap: usize) -> Result<()> {
    match degree {
        Some(d) if d <= cap => Ok(()),
        Some(d) => Err(Error::DegreeCap { degree: d, cap }),
        None => Err(Error::DegreeCap {
            degree: usize::MAX,
            cap,
        }),
    }
}

/// A polynomial `c_0 + c_1 h + ... + c_d h^d`. Trailing zeros are never
/// stored, so the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    field: FieldDesc,
    coeffs: Vec<FieldElement>,
}

impl Poly {
    fn normalized(field: FieldDesc, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(FieldElement::is_zero) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn zero(field: FieldDesc) -> Self {
        Poly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: FieldDesc) -> Self {
        Self::constant(FieldElement::one(field))
    }

    pub fn constant(c: FieldElement) -> Self {
        let field = c.desc();
        Self::normalized(field, vec![c])
    }

    /// The indeterminate `h`.
    pub fn var(field: FieldDesc) -> Self {
        Self::monomial(FieldElement::one(field), 1)
    }

    pub fn monomial(c: FieldElement, degree: usize) -> Self {
        let field = c.desc();
        if c.is_zero() {
            return Self::zero(field);
        }
        let mut coeffs = vec![FieldElement::zero(field); degree + 1];
        coeffs[degree] = c;
        Poly { field, coeffs }
    }

    /// Ascending coefficients; every coefficient must live in `field`.
    pub fn from_coeffs(field: FieldDesc, coeffs: Vec<FieldElement>) -> Result<Self> {
        if let Some(bad) = coeffs.iter().find(|c| c.desc() != field) {
            return Err(Error::FieldMismatch {
                left: field,
                right: bad.desc(),
            });
        }
        Ok(Self::normalized(field, coeffs))
    }

    pub fn from_rationals(field: FieldDesc, coeffs: impl IntoIterator<Item = BigRational>) -> Self {
        let coeffs = coeffs
            .into_iter()
            .map(|q| FieldElement::from_rational(field, q))
            .collect();
        Self::normalized(field, coeffs)
    }

    pub fn from_ints(field: FieldDesc, coeffs: &[i64]) -> Self {
        Self::from_rationals(
            field,
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c))),
        )
    }

    pub fn field(&self) -> FieldDesc {
        self.field
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    /// Coefficient of `h^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| FieldElement::zero(self.field))
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// True for the zero polynomial as well.
    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Exponents carrying a nonzero coefficient, ascending.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, _)| j)
    }

    fn same_field(&self, other: &Poly) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: self.field,
                right: other.field,
            })
        }
    }

    fn zip_with(
        &self,
        other: &Poly,
        op: impl Fn(&FieldElement, &FieldElement) -> FieldElement,
    ) -> Poly {
        let zero = FieldElement::zero(self.field);
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                op(
                    self.coeffs.get(i).unwrap_or(&zero),
                    other.coeffs.get(i).unwrap_or(&zero),
                )
            })
            .collect();
        Self::normalized(self.field, coeffs)
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.same_field(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.same_field(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.same_field(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(self.field));
        }
        if self.field.degree() == 1 {
            let a: Vec<BigRational> = self.coeffs.iter().map(|c| c.coords()[0].clone()).collect();
            let b: Vec<BigRational> = other.coeffs.iter().map(|c| c.coords()[0].clone()).collect();
            return Ok(Self::from_rationals(self.field, mul_rational(&a, &b)));
        }
        let mut out =
            vec![FieldElement::zero(self.field); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        Ok(Self::normalized(self.field, out))
    }

    /// Product, refusing results above `cap`.
    pub fn mul_capped(&self, other: &Poly, cap: usize) -> Result<Poly> {
        if let (Some(a), Some(b)) = (self.degree(), other.degree()) {
            check_degree(a.checked_add(b), cap)?;
        }
        self.checked_mul(other)
    }

    pub fn scale(&self, c: &FieldElement) -> Result<Poly> {
        if c.desc() != self.field {
            return Err(Error::FieldMismatch {
                left: self.field,
                right: c.desc(),
            });
        }
        Ok(Self::normalized(
            self.field,
            self.coeffs.iter().map(|a| a * c).collect(),
        ))
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.field);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, c)| c.scale(&BigRational::from_integer(BigInt::from(j))))
            .collect();
        Self::normalized(self.field, coeffs)
    }

    /// Euclidean division: `(quotient, remainder)` with
    /// `deg remainder < deg divisor`.
    pub fn divmod(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.same_field(divisor)?;
        let db = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = divisor.coeffs[db].inv()?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= db {
            return Ok((Poly::zero(self.field), self.clone()));
        }
        let mut quot = vec![FieldElement::zero(self.field); rem.len() - db];
        while rem.len() > db {
            let top = rem.len() - 1;
            let c = &rem[top] * &lead_inv;
            if !c.is_zero() {
                let shift = top - db;
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    if !d.is_zero() {
                        rem[shift + j] = &rem[shift + j] - &(&c * d);
                    }
                }
                quot[shift] = c;
            }
            rem.pop();
        }
        Ok((
            Self::normalized(self.field, quot),
            Self::normalized(self.field, rem),
        ))
    }

    /// `self / lc(self)`; the zero polynomial stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading_coeff() {
            None => self.clone(),
            Some(lc) => {
                let inv = lc.inv().expect("leading coefficient is nonzero");
                self.scale(&inv).expect("same field")
            }
        }
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        self.same_field(other)?;
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divmod(&b)?;
            a = std::mem::replace(&mut b, r);
        }
        Ok(a.monic())
    }

    /// Whether `self` divides `other` (only zero is divisible by zero).
    pub fn divides(&self, other: &Poly) -> Result<bool> {
        if self.is_zero() {
            self.same_field(other)?;
            return Ok(other.is_zero());
        }
        Ok(other.divmod(self)?.1.is_zero())
    }

    pub fn eval(&self, at: &FieldElement) -> Result<FieldElement> {
        if at.desc() != self.field {
            return Err(Error::FieldMismatch {
                left: self.field,
                right: at.desc(),
            });
        }
        let mut acc = FieldElement::zero(self.field);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * at) + c;
        }
        Ok(acc)
    }

    /// `self(inner(h))`.
    ///
    /// Splits `self = lo + h^m hi` with `m` a power of two and recurses, so
    /// the work is a few large products rather than many small ones.
    pub fn compose(&self, inner: &Poly) -> Result<Poly> {
        self.same_field(inner)?;
        if self.coeffs.len() <= COMPOSE_BLOCK {
            return self.compose_horner(inner);
        }
        let top = (usize::BITS - 1 - (self.coeffs.len() - 1).leading_zeros()) as usize;
        let mut squares = vec![inner.clone()];
        while squares.len() <= top {
            let last = squares.last().unwrap();
            squares.push(last.checked_mul(last)?);
        }
        self.compose_split(&self.coeffs, &squares)
    }

    fn compose_horner(&self, inner: &Poly) -> Result<Poly> {
        Self::horner(self.field, &self.coeffs, inner)
    }

    fn horner(field: FieldDesc, coeffs: &[FieldElement], inner: &Poly) -> Result<Poly> {
        let mut acc = Poly::zero(field);
        for c in coeffs.iter().rev() {
            acc = acc.checked_mul(inner)?;
            acc = acc.checked_add(&Poly::constant(c.clone()))?;
        }
        Ok(acc)
    }

    /// `squares[t] = inner^(2^t)`.
    fn compose_split(&self, coeffs: &[FieldElement], squares: &[Poly]) -> Result<Poly> {
        if coeffs.len() <= COMPOSE_BLOCK {
            return Self::horner(self.field, coeffs, &squares[0]);
        }
        let t = (usize::BITS - 1 - (coeffs.len() - 1).leading_zeros()) as usize;
        let (lo, hi) = coeffs.split_at(1 << t);
        let low = self.compose_split(lo, squares)?;
        let high = self.compose_split(hi, squares)?;
        low.checked_add(&high.checked_mul(&squares[t])?)
    }

    /// Composition that refuses results of degree above `cap`.
    pub fn compose_capped(&self, inner: &Poly, cap: usize) -> Result<Poly> {
        if let (Some(a), Some(b)) = (self.degree(), inner.degree()) {
            check_degree(a.checked_mul(b), cap)?;
        }
        self.compose(inner)
    }

    /// The same polynomial with coefficients embedded in a larger field.
    pub fn embed(&self, target: FieldDesc) -> Result<Poly> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.embed(target))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly {
            field: target,
            coeffs,
        })
    }

    /// Finds `p` with `p(outer(h)) = self(h)`, or `None` if no such `p`
    /// exists. The answer is unique because `deg outer >= 1`.
    pub fn decompose_as_polynomial_in(&self, outer: &Poly) -> Result<Option<Poly>> {
        self.same_field(outer)?;
        let d_outer = match outer.degree() {
            Some(d) if d >= 1 => d,
            _ => return Err(Error::ConstantInner),
        };
        let lc_outer = outer.leading_coeff().unwrap().clone();
        let mut rest = self.clone();
        let mut powers = vec![Poly::one(self.field)];
        let mut found: Vec<FieldElement> = Vec::new();
        while !rest.is_constant() {
            let d = rest.degree().unwrap();
            if !d.is_multiple_of(d_outer) {
                return Ok(None);
            }
            let e = d / d_outer;
            while powers.len() <= e {
                let next = &powers[powers.len() - 1] * outer;
                powers.push(next);
            }
            let c = rest.leading_coeff().unwrap() * &lc_outer.pow(e as u64).inv()?;
            rest = &rest - &powers[e].scale(&c)?;
            if found.len() <= e {
                found.resize(e + 1, FieldElement::zero(self.field));
            }
            found[e] = c;
        }
        if found.is_empty() {
            found.push(FieldElement::zero(self.field));
        }
        found[0] = rest.coeff(0);
        Ok(Some(Self::normalized(self.field, found)))
    }

    fn rational_coeffs(&self) -> Result<Vec<BigRational>> {
        self.coeffs
            .iter()
            .map(|c| c.as_rational().cloned().ok_or(Error::NonRational))
            .collect()
    }

    /// All distinct rational roots, ascending. Coefficients must be rational.
    pub fn rational_roots(&self) -> Result<Vec<BigRational>> {
        let coeffs = self.rational_coeffs()?;
        if coeffs.is_empty() {
            return Ok(Vec::new());
        }
        let mut roots = Vec::new();
        let valuation = coeffs.iter().position(|c| !c.is_zero()).unwrap();
        if valuation > 0 {
            roots.push(BigRational::zero());
        }
        let coeffs = &coeffs[valuation..];
        if coeffs.len() > 1 {
            let denom_lcm = coeffs
                .iter()
                .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            let ints: Vec<BigInt> = coeffs
                .iter()
                .map(|c| (c * BigRational::from_integer(denom_lcm.clone())).to_integer())
                .collect();
            let small = |n: &BigInt| {
                n.abs()
                    .to_u64()
                    .filter(|&v| v <= ROOT_SEARCH_LIMIT)
                    .ok_or_else(|| {
                        Error::Precondition(
                            "coefficients too large for the rational-root search".into(),
                        )
                    })
            };
            let p_divs = int_divisors(small(&ints[0])?);
            let q_divs = int_divisors(small(ints.last().unwrap())?);
            for p in &p_divs {
                for q in &q_divs {
                    for sign in [-1i64, 1] {
                        let cand = BigRational::new(
                            BigInt::from(sign) * BigInt::from(*p),
                            BigInt::from(*q),
                        );
                        let value = coeffs
                            .iter()
                            .rev()
                            .fold(BigRational::zero(), |acc, c| acc * &cand + c);
                        if value.is_zero() && !roots.contains(&cand) {
                            roots.push(cand);
                        }
                    }
                }
            }
        }
        roots.sort();
        Ok(roots)
    }

    /// `F(h) = self(h + alpha) - alpha`. If `alpha` is a fixed point of
    /// `self`, then `F(0) = 0`.
    pub fn shifted(&self, alpha: &FieldElement) -> Result<Poly> {
        let inner = Poly::var(self.field).checked_add(&Poly::constant(alpha.clone()))?;
        self.compose(&inner)?
            .checked_sub(&Poly::constant(alpha.clone()))
    }

    /// Renders with a variable name other than `h`.
    pub fn display_in<'a>(&'a self, var: &'a str) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, var }
    }
}

fn int_divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            if d != n / d {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    out
}

/// Product over Q with denominators cleared so the convolution runs on
/// integers.
fn mul_rational(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let clear = |v: &[BigRational]| {
        let l = v.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = v.iter().map(|c| c.numer() * (&l / c.denom())).collect();
        (l, ints)
    };
    let (la, ia) = clear(a);
    let (lb, ib) = clear(b);
    let out = intpoly::mul(&ia, &ib);
    let denom = la * lb;
    if denom.is_one() {
        out.into_iter().map(BigRational::from_integer).collect()
    } else {
        out.into_iter()
            .map(|n| BigRational::new(n, denom.clone()))
            .collect()
    }
}

/// Display adaptor produced by [`Poly::display_in`].
pub struct PolyDisplay<'a> {
    poly: &'a Poly,
    var: &'a str,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self
            .poly
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| {
                let mono = format::power(self.var, j);
                match c.as_rational() {
                    Some(q) => format::scaled_monomial(q, &mono),
                    None if mono.is_empty() => (false, format!("({c})")),
                    None => (false, format!("({c})*{mono}")),
                }
            })
            .collect();
        write!(f, "{}", format::join_signed(terms))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.display_in("h").fmt(f)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&Poly> for &Poly {
            type Output = Poly;

            /// Panics on mixed-field operands.
            fn $method(self, rhs: &Poly) -> Poly {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }

        impl $tr for Poly {
            type Output = Poly;

            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        Poly {
            field: self.field,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        -&self
    }
}

/// Memo table for the iterates sigma^k(h) = f(f(...f(h))) of a fixed `f`.
///
/// Inserts are idempotent, so the table can be shared between threads; a
/// miss only costs recomputation.
#[derive(Debug)]
pub struct SigmaPowers {
    f: Poly,
    cap: usize,
    powers: RwLock<Vec<Arc<Poly>>>,
}

impl SigmaPowers {
    pub fn new(f: Poly, cap: usize) -> Self {
        let h = Arc::new(Poly::var(f.field()));
        SigmaPowers {
            f,
            cap,
            powers: RwLock::new(vec![h]),
        }
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// sigma^k(h); sigma^0(h) = h.
    pub fn get(&self, k: usize) -> Result<Arc<Poly>> {
        let (mut have, mut last) = {
            let powers = self.powers.read().unwrap();
            if let Some(p) = powers.get(k) {
                return Ok(Arc::clone(p));
            }
            (powers.len() - 1, Arc::clone(powers.last().unwrap()))
        };
        while have < k {
            let next = Arc::new(self.f.compose_capped(&last, self.cap)?);
            let mut powers = self.powers.write().unwrap();
            if powers.len() == have + 1 {
                powers.push(Arc::clone(&next));
            }
            have += 1;
            last = next;
        }
        Ok(last)
    }

    /// sigma^k(g) = g(sigma^k(h)).
    pub fn apply(&self, g: &Poly, k: usize) -> Result<Poly> {
        if k == 0 || g.is_constant() {
            return Ok(g.clone());
        }
        g.compose_capped(&*self.get(k)?, self.cap)
    }
}

/// sigma^k(h) for sigma(h) = f(h), without memoization.
pub fn sigma_power_h(f: &Poly, k: usize, cap: usize) -> Result<Poly> {
    let mut acc = Poly::var(f.field());
    for _ in 0..k {
        acc = f.compose_capped(&acc, cap)?;
    }
    Ok(acc)
}
