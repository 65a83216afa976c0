//! The generalized Heisenberg algebra H(f).
//!
//! H(f) is generated by `x`, `y`, `h` subject to
//!
//! ```text
//! h x = x f(h),    y h = f(h) y,    y x - x y = f(h) - h.
//! ```
//!
//! Elements are kept in the normal form `sum x^i g_{i,k}(h) y^k`; the
//! monomials `x^i h^j y^k` form a basis, so two elements are equal exactly
//! when their term maps are equal.

mod maps;
mod multiply;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::field::{FieldDesc, FieldElement};
use crate::poly::{Poly, SigmaPowers, DEFAULT_DEGREE_CAP};

/// Term map `(i, k) -> g` standing for `x^i g(h) y^k`. Zero polynomials are
/// never stored.
pub type Terms = BTreeMap<(usize, usize), Poly>;

pub(crate) fn add_term(terms: &mut Terms, key: (usize, usize), g: Poly) {
    if g.is_zero() {
        return;
    }
    match terms.entry(key) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(g);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let sum = o.get() + &g;
            if sum.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
}

struct Inner {
    f: Poly,
    sigma: SigmaPowers,
    /// Normal forms of `y^k x^j`, keyed by `(k, j)`.
    yx: RwLock<HashMap<(usize, usize), Arc<Terms>>>,
}

/// A fixed choice of `f`, together with the memo tables that every
/// computation in H(f) shares. Cloning is cheap.
#[derive(Clone)]
pub struct Context(Arc<Inner>);

impl Context {
    /// H(f) over the field of `f`'s coefficients.
    pub fn new(f: Poly) -> Self {
        Self::build(f, DEFAULT_DEGREE_CAP)
    }

    /// H(f) over a field containing the coefficients of `f`.
    pub fn with_field(f: Poly, field: FieldDesc) -> Result<Self> {
        Ok(Self::new(f.embed(field)?))
    }

    fn build(f: Poly, cap: usize) -> Self {
        Context(Arc::new(Inner {
            sigma: SigmaPowers::new(f.clone(), cap),
            f,
            yx: RwLock::new(HashMap::new()),
        }))
    }

    /// Same algebra with a different bound on polynomial degrees.
    pub fn with_degree_cap(&self, cap: usize) -> Self {
        Self::build(self.0.f.clone(), cap)
    }

    /// Same `f` viewed over a larger field.
    pub fn extend_field(&self, target: FieldDesc) -> Result<Self> {
        if target == self.field() {
            return Ok(self.clone());
        }
        Ok(Self::build(self.0.f.embed(target)?, self.degree_cap()))
    }

    pub fn f(&self) -> &Poly {
        &self.0.f
    }

    pub fn field(&self) -> FieldDesc {
        self.0.f.field()
    }

    /// `deg f`, or `None` when `f = 0`.
    pub fn deg_f(&self) -> Option<usize> {
        self.0.f.degree()
    }

    pub fn degree_cap(&self) -> usize {
        self.0.sigma.cap()
    }

    /// sigma^k(h), memoized.
    pub fn sigma_power_h(&self, k: usize) -> Result<Arc<Poly>> {
        self.0.sigma.get(k)
    }

    /// sigma^k(g) = g(sigma^k(h)).
    pub fn sigma(&self, g: &Poly, k: usize) -> Result<Poly> {
        self.0.sigma.apply(g, k)
    }

    pub(crate) fn cached_yx(&self, key: (usize, usize)) -> Option<Arc<Terms>> {
        self.0.yx.read().unwrap().get(&key).cloned()
    }

    pub(crate) fn store_yx(&self, key: (usize, usize), terms: Terms) -> Arc<Terms> {
        self.0
            .yx
            .write()
            .unwrap()
            .entry(key)
            .or_insert_with(|| Arc::new(terms))
            .clone()
    }
}

impl PartialEq for Context {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.f == other.0.f
    }
}

impl Eq for Context {}

impl fmt::Debug for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Context")
            .field("f", &self.0.f.to_string())
            .field("field", &self.field())
            .finish()
    }
}

/// Standard degree of an element: `i - k` on every term.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Degree {
    /// The zero element, homogeneous of every degree.
    Zero,
    Homogeneous(i64),
    Mixed,
}

/// An element of H(f) in normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    ctx: Context,
    terms: Terms,
}

impl AlgebraElement {
    pub fn zero(ctx: &Context) -> Self {
        AlgebraElement {
            ctx: ctx.clone(),
            terms: Terms::new(),
        }
    }

    pub fn one(ctx: &Context) -> Self {
        Self::from_poly_unchecked(ctx, Poly::one(ctx.field()))
    }

    fn from_poly_unchecked(ctx: &Context, g: Poly) -> Self {
        let mut terms = Terms::new();
        add_term(&mut terms, (0, 0), g);
        AlgebraElement {
            ctx: ctx.clone(),
            terms,
        }
    }

    pub(crate) fn from_terms_unchecked(ctx: &Context, terms: Terms) -> Self {
        AlgebraElement {
            ctx: ctx.clone(),
            terms,
        }
    }

    /// The polynomial `g(h)` as an element.
    pub fn from_poly(ctx: &Context, g: Poly) -> Result<Self> {
        Self::monomial(ctx, 0, g, 0)
    }

    pub fn scalar(ctx: &Context, c: FieldElement) -> Result<Self> {
        Self::from_poly(ctx, Poly::constant(c))
    }

    /// `x^i g(h) y^k`.
    pub fn monomial(ctx: &Context, i: usize, g: Poly, k: usize) -> Result<Self> {
        Self::from_terms(ctx, [((i, k), g)])
    }

    /// Sums the given `x^i g y^k` terms; repeated keys are added.
    pub fn from_terms(
        ctx: &Context,
        terms: impl IntoIterator<Item = ((usize, usize), Poly)>,
    ) -> Result<Self> {
        let mut out = Terms::new();
        for (key, g) in terms {
            if g.field() != ctx.field() {
                return Err(Error::FieldMismatch {
                    left: ctx.field(),
                    right: g.field(),
                });
            }
            add_term(&mut out, key, g);
        }
        Ok(Self::from_terms_unchecked(ctx, out))
    }

    pub fn x(ctx: &Context) -> Self {
        Self::from_terms_unchecked(ctx, Terms::from([((1, 0), Poly::one(ctx.field()))]))
    }

    pub fn y(ctx: &Context) -> Self {
        Self::from_terms_unchecked(ctx, Terms::from([((0, 1), Poly::one(ctx.field()))]))
    }

    pub fn h(ctx: &Context) -> Self {
        Self::from_poly_unchecked(ctx, Poly::var(ctx.field()))
    }

    /// The Casimir element `z = xy - h = yx - f(h)`.
    pub fn z(ctx: &Context) -> Self {
        Self::from_terms_unchecked(
            ctx,
            Terms::from([
                ((0, 0), -Poly::var(ctx.field())),
                ((1, 1), Poly::one(ctx.field())),
            ]),
        )
    }

    pub fn ctx(&self) -> &Context {
        &self.ctx
    }

    pub fn terms(&self) -> &Terms {
        &self.terms
    }

    pub fn term(&self, i: usize, k: usize) -> Option<&Poly> {
        self.terms.get(&(i, k))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn check_ctx(&self, other: &Self) -> Result<()> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let mut terms = self.terms.clone();
        for (key, g) in &other.terms {
            add_term(&mut terms, *key, g.clone());
        }
        Ok(Self::from_terms_unchecked(&self.ctx, terms))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    /// Multiplies every coefficient by a scalar.
    pub fn scale(&self, c: &FieldElement) -> Result<Self> {
        let mut terms = Terms::new();
        for (key, g) in &self.terms {
            add_term(&mut terms, *key, g.scale(c)?);
        }
        Ok(Self::from_terms_unchecked(&self.ctx, terms))
    }

    /// `[self, other] = self*other - other*self`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.multiply(other)?.checked_sub(&other.multiply(self)?)
    }

    pub fn pow(&self, mut e: u32) -> Result<Self> {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ctx);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.multiply(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.multiply(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn degree(&self) -> Degree {
        let mut degrees = self.terms.keys().map(|&(i, k)| i as i64 - k as i64);
        match degrees.next() {
            None => Degree::Zero,
            Some(d) if degrees.all(|e| e == d) => Degree::Homogeneous(d),
            Some(_) => Degree::Mixed,
        }
    }

    /// Splits into standard-degree components `l = i - k`; the parts sum
    /// back to `self`.
    pub fn homogeneous_parts(&self) -> BTreeMap<i64, AlgebraElement> {
        let mut parts: BTreeMap<i64, Terms> = BTreeMap::new();
        for (&(i, k), g) in &self.terms {
            parts
                .entry(i as i64 - k as i64)
                .or_default()
                .insert((i, k), g.clone());
        }
        parts
            .into_iter()
            .map(|(l, terms)| (l, Self::from_terms_unchecked(&self.ctx, terms)))
            .collect()
    }

    /// Whether every term has `i = k`.
    pub fn is_in_h0(&self) -> bool {
        self.terms.keys().all(|&(i, k)| i == k)
    }

    /// The constant this element equals, if it is a scalar.
    pub fn as_scalar(&self) -> Option<FieldElement> {
        match self.terms.len() {
            0 => Some(FieldElement::zero(self.ctx.field())),
            1 => {
                let g = self.terms.get(&(0, 0))?;
                g.is_constant().then(|| g.coeff(0))
            }
            _ => None,
        }
    }

    /// Moves the element into another context whose `f` is the embedding of
    /// this context's `f`.
    pub fn embed(&self, ctx: &Context) -> Result<Self> {
        if &self.ctx == ctx {
            return Ok(self.clone());
        }
        if &self.ctx.f().embed(ctx.field())? != ctx.f() {
            return Err(Error::ContextMismatch);
        }
        let mut terms = Terms::new();
        for (key, g) in &self.terms {
            terms.insert(*key, g.embed(ctx.field())?);
        }
        Ok(Self::from_terms_unchecked(ctx, terms))
    }
}

/// Returns `(x, y, h, z)`.
pub fn generators(
    ctx: &Context,
) -> (
    AlgebraElement,
    AlgebraElement,
    AlgebraElement,
    AlgebraElement,
) {
    (
        AlgebraElement::x(ctx),
        AlgebraElement::y(ctx),
        AlgebraElement::h(ctx),
        AlgebraElement::z(ctx),
    )
}

impl fmt::Display for AlgebraElement {
    /// Canonical text form: terms in ascending `(i, k)` order joined by
    /// ` + `, each `x^i * (g) * y^k` with `x^0` and `y^0` omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|(&(i, k), g)| {
                let mut factors = Vec::with_capacity(3);
                if i > 0 {
                    factors.push(format!("x^{i}"));
                }
                factors.push(format!("({g})"));
                if k > 0 {
                    factors.push(format!("y^{k}"));
                }
                factors.join(" * ")
            })
            .collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

impl Add<&AlgebraElement> for &AlgebraElement {
    type Output = AlgebraElement;

    /// Panics if the operands belong to different algebras.
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.checked_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub<&AlgebraElement> for &AlgebraElement {
    type Output = AlgebraElement;

    /// Panics if the operands belong to different algebras.
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.checked_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;

    fn neg(self) -> AlgebraElement {
        AlgebraElement::from_terms_unchecked(
            &self.ctx,
            self.terms.iter().map(|(k, g)| (*k, -g)).collect(),
        )
    }
}

impl Neg for AlgebraElement {
    type Output = AlgebraElement;

    fn neg(self) -> AlgebraElement {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(coeffs: &[i64]) -> Context {
        Context::new(Poly::from_ints(FieldDesc::Rationals, coeffs))
    }

    #[test]
    fn generator_terms() {
        let c = ctx(&[0, 0, 1]);
        let (x, _, _, z) = generators(&c);
        assert_eq!(x.terms().len(), 1);
        assert!(x.term(1, 0).unwrap().is_one());
        assert!(z.term(1, 1).unwrap().is_one());
        assert_eq!(z.term(0, 0).unwrap(), &-Poly::var(FieldDesc::Rationals));
    }

    #[test]
    fn grading() {
        let c = ctx(&[0, 0, 1]);
        let (x, y, h, z) = generators(&c);
        let parts = z.homogeneous_parts();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[&0], z);

        let parts = (&x + &y).homogeneous_parts();
        assert_eq!(parts[&1], x);
        assert_eq!(parts[&-1], y);

        let xh = x.multiply(&h).unwrap();
        let x2y = x.pow(2).unwrap().multiply(&y).unwrap();
        let sum = &xh + &x2y;
        assert_eq!(sum.degree(), Degree::Homogeneous(1));
        assert_eq!(sum.homogeneous_parts().len(), 1);
        assert_eq!((&x + &y).degree(), Degree::Mixed);
        assert_eq!(AlgebraElement::zero(&c).degree(), Degree::Zero);
    }

    #[test]
    fn canonical_text() {
        let c = ctx(&[0, 0, 1]);
        let (x, y, _, _) = generators(&c);
        let yx = y.multiply(&x).unwrap();
        assert_eq!(yx.to_string(), "(h^2 - h) + x^1 * (1) * y^1");
        assert_eq!(AlgebraElement::zero(&c).to_string(), "0");
        assert_eq!(x.to_string(), "x^1 * (1)");
    }

    #[test]
    fn context_mismatch() {
        let a = AlgebraElement::x(&ctx(&[0, 0, 1]));
        let b = AlgebraElement::x(&ctx(&[0, 0, 0, 1]));
        assert_eq!(a.multiply(&b), Err(Error::ContextMismatch));
        assert_eq!(a.checked_add(&b), Err(Error::ContextMismatch));
        // Separately built contexts with the same f are the same algebra.
        let c = AlgebraElement::x(&ctx(&[0, 0, 1]));
        assert!(a.checked_add(&c).is_ok());
    }
}
