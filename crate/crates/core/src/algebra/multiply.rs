use std::collections::HashMap;
use std::sync::Arc;

use super::{add_term, AlgebraElement, Context, Terms};
use crate::error::Result;
use crate::poly::Poly;

impl Context {
    /// Normal form of `y^k x^j`.
    ///
    /// Uses `y x^j = x^j y + x^(j-1) (sigma^j(h) - h)`, so that
    /// `y^k x^j = (y^(k-1) x^j) y + (y^(k-1) x^(j-1)) (sigma^j(h) - h)`.
    /// Results are memoized per context.
    pub fn y_pow_x_pow(&self, k: usize, j: usize) -> Result<Arc<Terms>> {
        let one = || Poly::one(self.field());
        if k == 0 || j == 0 {
            return Ok(Arc::new(Terms::from([((j, k), one())])));
        }
        if let Some(hit) = self.cached_yx((k, j)) {
            return Ok(hit);
        }
        let mut out = Terms::new();
        for (&(a, b), p) in self.y_pow_x_pow(k - 1, j)?.iter() {
            add_term(&mut out, (a, b + 1), p.clone());
        }
        let cap = self.degree_cap();
        for (&(a, b), p) in self.y_pow_x_pow(k - 1, j - 1)?.iter() {
            // sigma^b(sigma^j(h) - h) = sigma^(j+b)(h) - sigma^b(h)
            let shifted = self
                .sigma_power_h(j + b)?
                .checked_sub(&*self.sigma_power_h(b)?)?;
            add_term(&mut out, (a, b), p.mul_capped(&shifted, cap)?);
        }
        Ok(self.store_yx((k, j), out))
    }
}

impl AlgebraElement {
    /// The product in normal form.
    ///
    /// For monomials, `(x^i g y^k)(x^j g' y^l)` is
    /// `sum x^(i+a) sigma^a(g) p sigma^b(g') y^(b+l)` over the terms
    /// `x^a p y^b` of the normal form of `y^k x^j`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let ctx = &self.ctx;
        let cap = ctx.degree_cap();
        let mut out = Terms::new();
        let mut right_images: HashMap<((usize, usize), usize), Poly> = HashMap::new();
        for (&(i, k), g) in &self.terms {
            let mut left_images: HashMap<usize, Poly> = HashMap::new();
            for (&(j, l), g2) in &other.terms {
                let nf = ctx.y_pow_x_pow(k, j)?;
                for (&(a, b), p) in nf.iter() {
                    if let std::collections::hash_map::Entry::Vacant(e) = left_images.entry(a) {
                        e.insert(ctx.sigma(g, a)?);
                    }
                    if let std::collections::hash_map::Entry::Vacant(e) =
                        right_images.entry(((j, l), b))
                    {
                        e.insert(ctx.sigma(g2, b)?);
                    }
                    let coeff = left_images[&a]
                        .mul_capped(p, cap)?
                        .mul_capped(&right_images[&((j, l), b)], cap)?;
                    add_term(&mut out, (i + a, b + l), coeff);
                }
            }
        }
        Ok(Self::from_terms_unchecked(ctx, out))
    }
}
