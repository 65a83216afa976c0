use crate::algebra::{add_term, AlgebraElement, Context, Terms};
use crate::arith::divisors;
use crate::error::{Error, Result};
use crate::field::{FieldDesc, FieldElement};
use crate::poly::Poly;

/// `Aut(H(f)) = {φ_λ} x {φ : φ(x) = x}`, the second factor cyclic of
/// order `cyclic_order`, generated by `x -> x`, `y -> a y`, `h -> a h + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutGroup {
    /// `deg f`.
    pub n: usize,
    pub cyclic_order: usize,
    /// Field holding the generator; it contains a primitive root of unity
    /// of order `cyclic_order`.
    pub field: FieldDesc,
    pub generator: (FieldElement, FieldElement),
    /// Divisors `d` of `n - 1` for which a primitive d-th root `a` works.
    pub working_divisors: Vec<usize>,
}

impl AutGroup {
    /// All pairs `(a^j, b_j)` for `0 <= j < cyclic_order`.
    pub fn elements(&self, f: &Poly) -> Result<Vec<(FieldElement, FieldElement)>> {
        let f = f.embed(self.field)?;
        let (a, _) = &self.generator;
        (0..self.cyclic_order)
            .map(|j| {
                let aj = a.pow(j as u64);
                let b = translation_for(&f, &aj)?;
                Ok((aj, b))
            })
            .collect()
    }
}

/// `b = (a - 1) a_(n-1) / (n a_n)`, forced by comparing the `h^(n-1)`
/// coefficients of `f(ah + b) = a f(h) + b` once `a^(n-1) = 1`.
fn translation_for(f: &Poly, a: &FieldElement) -> Result<FieldElement> {
    let n = f.degree().expect("nonzero f");
    let lead = f.coeff(n);
    let sub = f.coeff(n - 1);
    let one = FieldElement::one(f.field());
    let numerator = a.checked_sub(&one)?.checked_mul(&sub)?;
    numerator.checked_div(&lead.checked_mul(&FieldElement::from_int(f.field(), n as i64))?)
}

/// Whether `f(ah + b) = a f(h) + b` with `a != 0`.
pub fn satisfies_pair_identity(f: &Poly, a: &FieldElement, b: &FieldElement) -> Result<bool> {
    if a.is_zero() {
        return Ok(false);
    }
    let field = f.field();
    let inner = Poly::from_coeffs(field, vec![b.clone(), a.clone()])?;
    let lhs = f.compose(&inner)?;
    let rhs = f.scale(a)?.checked_add(&Poly::constant(b.clone()))?;
    Ok(lhs == rhs)
}

/// A primitive d-th root of unity in the smallest cyclotomic field over `base`.
fn primitive_root(base: FieldDesc, d: u32) -> Result<FieldElement> {
    match d {
        1 => Ok(FieldElement::one(base)),
        2 => Ok(-FieldElement::one(base)),
        _ => {
            let own = FieldDesc::cyclotomic(d)?;
            FieldElement::zeta(own)?.embed(base.compositum(own))
        }
    }
}

/// Computes the automorphism group for `deg f > 1`.
///
/// For each divisor `d` of `n - 1` the canonical primitive root
/// `a = zeta_d` is tested; the identity is Galois-stable, so one primitive
/// root per order decides the whole order. The working orders are the
/// divisors of the cyclic order.
pub fn automorphism_group(ctx: &Context) -> Result<AutGroup> {
    let n = match ctx.deg_f() {
        Some(n) if n > 1 => n,
        _ => {
            return Err(Error::Precondition(
                "automorphism group needs deg f > 1".into(),
            ))
        }
    };
    let base = ctx.field();
    let mut working_divisors = Vec::new();
    let mut best = (base, (FieldElement::one(base), FieldElement::zero(base)));
    for d in divisors(n as u32 - 1) {
        let a = primitive_root(base, d)?;
        let field = a.desc();
        let f = ctx.f().embed(field)?;
        let b = translation_for(&f, &a)?;
        if satisfies_pair_identity(&f, &a, &b)? {
            working_divisors.push(d as usize);
            best = (field, (a, b));
        }
    }
    let (field, generator) = best;
    Ok(AutGroup {
        n,
        cyclic_order: *working_divisors.last().unwrap_or(&1),
        field,
        generator,
        working_divisors,
    })
}

/// Applies `x -> x`, `y -> a y`, `h -> a h + b`, sending `x^i g(h) y^k` to
/// `a^k x^i g(ah + b) y^k`. `a` and `b` must lie in the element's field;
/// use [`Context::extend_field`] and [`AlgebraElement::embed`] first.
pub fn apply_x_fixing_automorphism(
    pair: (&FieldElement, &FieldElement),
    e: &AlgebraElement,
) -> Result<AlgebraElement> {
    let (a, b) = pair;
    let ctx = e.ctx();
    for c in [a, b] {
        if c.desc() != ctx.field() {
            return Err(Error::FieldMismatch {
                left: ctx.field(),
                right: c.desc(),
            });
        }
    }
    if !satisfies_pair_identity(ctx.f(), a, b)? {
        return Err(Error::InvalidPair {
            a: a.to_string(),
            b: b.to_string(),
        });
    }
    let inner = Poly::from_coeffs(ctx.field(), vec![b.clone(), a.clone()])?;
    let mut terms = Terms::new();
    for (&(i, k), g) in e.terms() {
        let image = g
            .compose_capped(&inner, ctx.degree_cap())?
            .scale(&a.pow(k as u64))?;
        add_term(&mut terms, (i, k), image);
    }
    AlgebraElement::from_terms(ctx, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::generators;

    const Q: FieldDesc = FieldDesc::Rationals;

    fn ctx(coeffs: &[i64]) -> Context {
        Context::new(Poly::from_ints(Q, coeffs))
    }

    #[test]
    fn cubic_with_linear_term() {
        let c = ctx(&[0, 1, 0, 1]);
        let g = automorphism_group(&c).unwrap();
        assert_eq!(g.cyclic_order, 2);
        assert_eq!(g.field, Q);
        assert_eq!(
            g.generator,
            (FieldElement::from_int(Q, -1), FieldElement::zero(Q))
        );
    }

    #[test]
    fn pure_power() {
        let g = automorphism_group(&ctx(&[0, 0, 0, 0, 0, 1])).unwrap();
        assert_eq!(g.cyclic_order, 4);
        assert_eq!(g.working_divisors, vec![1, 2, 4]);
        assert!(g.generator.1.is_zero());
        assert_eq!(g.generator.0.pow(4), FieldElement::one(g.field));
        assert_ne!(g.generator.0.pow(2), FieldElement::one(g.field));
    }

    #[test]
    fn trivial_group() {
        let g = automorphism_group(&ctx(&[1, 1, 0, 1])).unwrap();
        assert_eq!(g.cyclic_order, 1);
        assert_eq!(g.working_divisors, vec![1]);
        assert!(automorphism_group(&ctx(&[0, 1])).is_err());
    }

    #[test]
    fn translation_part() {
        // f(h) = (h - 1)^3 + 1 has the symmetry h -> 2 - h: a = -1, b = 2.
        let f = Poly::from_ints(Q, &[-1, 3, -3, 1]) + Poly::from_ints(Q, &[1]);
        let c = Context::new(f.clone());
        let g = automorphism_group(&c).unwrap();
        assert_eq!(g.cyclic_order, 2);
        assert_eq!(
            g.generator,
            (FieldElement::from_int(Q, -1), FieldElement::from_int(Q, 2))
        );
        assert!(satisfies_pair_identity(&f, &g.generator.0, &g.generator.1).unwrap());
    }

    #[test]
    fn x_fixing_examples() {
        let c = ctx(&[0, 1, 0, 1]);
        let (x, y, h, z) = generators(&c);
        let minus_one = FieldElement::from_int(Q, -1);
        let zero = FieldElement::zero(Q);
        let pair = (&minus_one, &zero);
        assert_eq!(apply_x_fixing_automorphism(pair, &h).unwrap(), -&h);
        assert_eq!(apply_x_fixing_automorphism(pair, &y).unwrap(), -&y);
        assert_eq!(apply_x_fixing_automorphism(pair, &x).unwrap(), x);
        assert_eq!(apply_x_fixing_automorphism(pair, &z).unwrap(), -&z);

        let one = FieldElement::one(Q);
        let xhy = x.multiply(&h).unwrap().multiply(&y).unwrap();
        assert_eq!(
            apply_x_fixing_automorphism((&one, &zero), &xhy).unwrap(),
            xhy
        );

        let two = FieldElement::from_int(Q, 2);
        assert!(matches!(
            apply_x_fixing_automorphism((&two, &zero), &x),
            Err(Error::InvalidPair { .. })
        ));
    }

    #[test]
    fn cyclotomic_generator_is_a_homomorphism() {
        let c = ctx(&[0, 0, 0, 0, 0, 1]);
        let g = automorphism_group(&c).unwrap();
        let big = c.extend_field(g.field).unwrap();
        let (x, y, h, _) = generators(&big);
        let u = x.multiply(&h).unwrap().checked_add(&y).unwrap();
        let v = y
            .multiply(&h)
            .unwrap()
            .checked_add(&x.pow(2).unwrap())
            .unwrap();
        let (a, b) = (&g.generator.0, &g.generator.1);
        let phi = |e: &AlgebraElement| apply_x_fixing_automorphism((a, b), e).unwrap();
        assert_eq!(
            phi(&u.multiply(&v).unwrap()),
            phi(&u).multiply(&phi(&v)).unwrap()
        );
        let mut image = y.clone();
        for _ in 0..g.cyclic_order {
            image = phi(&image);
        }
        assert_eq!(image, y);
    }
}
