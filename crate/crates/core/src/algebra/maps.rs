use super::{add_term, AlgebraElement, Terms};
use crate::error::{Error, Result};
use crate::field::FieldElement;

impl AlgebraElement {
    /// The extension of sigma to H_0, characterized by `θ x = x σ(θ)` and
    /// `y θ = σ(θ) y`. On basis elements,
    /// `σ(x^k g y^k) = x^k σ(g) y^k + x^(k-1) (σ^k(h) - h) g y^(k-1)`.
    pub fn sigma_h0(&self) -> Result<Self> {
        if !self.is_in_h0() {
            return Err(Error::NotInH0);
        }
        let ctx = &self.ctx;
        let cap = ctx.degree_cap();
        let mut out = Terms::new();
        for (&(k, _), g) in &self.terms {
            add_term(&mut out, (k, k), ctx.sigma(g, 1)?);
            if k > 0 {
                let q = ctx.sigma_power_h(k)?.checked_sub(&*ctx.sigma_power_h(0)?)?;
                add_term(&mut out, (k - 1, k - 1), q.mul_capped(g, cap)?);
            }
        }
        Ok(Self::from_terms_unchecked(ctx, out))
    }

    /// The anti-automorphism swapping `x` and `y` and fixing `h`:
    /// `x^i g y^k` maps to `x^k g y^i`.
    pub fn iota(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(&(i, k), g)| ((k, i), g.clone()))
            .collect();
        Self::from_terms_unchecked(&self.ctx, terms)
    }

    /// The torus automorphism `x -> λx`, `y -> λ^(-1) y`, `h -> h`, which
    /// scales `x^i g y^k` by `λ^(i-k)`.
    pub fn phi_lambda(&self, lambda: &FieldElement) -> Result<Self> {
        if lambda.desc() != self.ctx.field() {
            return Err(Error::FieldMismatch {
                left: self.ctx.field(),
                right: lambda.desc(),
            });
        }
        if lambda.is_zero() {
            return Err(Error::ZeroScalar);
        }
        let mut out = Terms::new();
        for (&(i, k), g) in &self.terms {
            let factor = lambda.powi(i as i64 - k as i64)?;
            add_term(&mut out, (i, k), g.scale(&factor)?);
        }
        Ok(Self::from_terms_unchecked(&self.ctx, out))
    }
}
