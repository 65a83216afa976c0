use std::collections::{BTreeMap, HashMap};

use crate::algebra::{AlgebraElement, Context};
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::poly::Poly;

/// A candidate derivation, given by the images of `x`, `y` and `h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationSpec {
    ctx: Context,
    im_x: AlgebraElement,
    im_y: AlgebraElement,
    im_h: AlgebraElement,
}

impl DerivationSpec {
    pub fn new(im_x: AlgebraElement, im_y: AlgebraElement, im_h: AlgebraElement) -> Result<Self> {
        im_x.check_ctx(&im_y)?;
        im_x.check_ctx(&im_h)?;
        Ok(DerivationSpec {
            ctx: im_x.ctx().clone(),
            im_x,
            im_y,
            im_h,
        })
    }

    pub fn zero(ctx: &Context) -> Self {
        let z = AlgebraElement::zero(ctx);
        DerivationSpec {
            ctx: ctx.clone(),
            im_x: z.clone(),
            im_y: z.clone(),
            im_h: z,
        }
    }

    /// The degree derivation: `x -> x`, `y -> -y`, `h -> 0`, which acts on
    /// `x^i g y^k` as multiplication by `i - k`.
    pub fn grading(ctx: &Context) -> Self {
        DerivationSpec {
            ctx: ctx.clone(),
            im_x: AlgebraElement::x(ctx),
            im_y: -AlgebraElement::y(ctx),
            im_h: AlgebraElement::zero(ctx),
        }
    }

    pub fn ctx(&self) -> &Context {
        &self.ctx
    }

    pub fn im_x(&self) -> &AlgebraElement {
        &self.im_x
    }

    pub fn im_y(&self) -> &AlgebraElement {
        &self.im_y
    }

    pub fn im_h(&self) -> &AlgebraElement {
        &self.im_h
    }

    pub fn scale(&self, c: &FieldElement) -> Result<Self> {
        Self::new(
            self.im_x.scale(c)?,
            self.im_y.scale(c)?,
            self.im_h.scale(c)?,
        )
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        Self::new(
            self.im_x.checked_add(&other.im_x)?,
            self.im_y.checked_add(&other.im_y)?,
            self.im_h.checked_add(&other.im_h)?,
        )
    }
}

/// Leibniz expansion over the factorization `x^i h^j y^k`, with memoized
/// images of generator powers.
struct Leibniz<'a> {
    d: &'a DerivationSpec,
    x_pows: Vec<AlgebraElement>,
    y_pows: Vec<AlgebraElement>,
    h_pows: Vec<AlgebraElement>,
    dx: HashMap<usize, AlgebraElement>,
    dy: HashMap<usize, AlgebraElement>,
    dh: HashMap<usize, AlgebraElement>,
}

impl<'a> Leibniz<'a> {
    fn new(d: &'a DerivationSpec) -> Self {
        let one = AlgebraElement::one(&d.ctx);
        Leibniz {
            d,
            x_pows: vec![one.clone()],
            y_pows: vec![one.clone()],
            h_pows: vec![one],
            dx: HashMap::new(),
            dy: HashMap::new(),
            dh: HashMap::new(),
        }
    }

    fn power(
        pows: &mut Vec<AlgebraElement>,
        base: &AlgebraElement,
        e: usize,
    ) -> Result<AlgebraElement> {
        while pows.len() <= e {
            let next = pows.last().unwrap().multiply(base)?;
            pows.push(next);
        }
        Ok(pows[e].clone())
    }

    /// `D(g^e) = sum_{p < e} g^p D(g) g^(e-1-p)`, via
    /// `D(g^e) = D(g^(e-1)) g + g^(e-1) D(g)`.
    fn power_image(
        memo: &mut HashMap<usize, AlgebraElement>,
        pows: &mut Vec<AlgebraElement>,
        base: &AlgebraElement,
        image: &AlgebraElement,
        e: usize,
    ) -> Result<AlgebraElement> {
        if e == 0 {
            return Ok(AlgebraElement::zero(base.ctx()));
        }
        if let Some(hit) = memo.get(&e) {
            return Ok(hit.clone());
        }
        let mut start = (1..e).rev().find(|p| memo.contains_key(p)).unwrap_or(0);
        let mut acc = if start == 0 {
            AlgebraElement::zero(base.ctx())
        } else {
            memo[&start].clone()
        };
        while start < e {
            let prev = Self::power(pows, base, start)?;
            acc = acc.multiply(base)?.checked_add(&prev.multiply(image)?)?;
            start += 1;
            memo.insert(start, acc.clone());
        }
        Ok(acc)
    }

    fn x_image(&mut self, e: usize) -> Result<AlgebraElement> {
        let x = AlgebraElement::x(&self.d.ctx);
        Self::power_image(&mut self.dx, &mut self.x_pows, &x, &self.d.im_x, e)
    }

    fn y_image(&mut self, e: usize) -> Result<AlgebraElement> {
        let y = AlgebraElement::y(&self.d.ctx);
        Self::power_image(&mut self.dy, &mut self.y_pows, &y, &self.d.im_y, e)
    }

    fn h_image(&mut self, e: usize) -> Result<AlgebraElement> {
        let h = AlgebraElement::h(&self.d.ctx);
        Self::power_image(&mut self.dh, &mut self.h_pows, &h, &self.d.im_h, e)
    }

    /// `D(g(h)) = sum_j c_j D(h^j)`.
    fn poly_image(&mut self, g: &Poly) -> Result<AlgebraElement> {
        let mut acc = AlgebraElement::zero(&self.d.ctx);
        for j in g.support() {
            acc = acc.checked_add(&self.h_image(j)?.scale(&g.coeff(j))?)?;
        }
        Ok(acc)
    }

    fn apply(&mut self, a: &AlgebraElement) -> Result<AlgebraElement> {
        let ctx = &self.d.ctx;
        let mut acc = AlgebraElement::zero(ctx);
        for (&(i, k), g) in a.terms() {
            let one = Poly::one(ctx.field());
            let g_yk = AlgebraElement::monomial(ctx, 0, g.clone(), k)?;
            let xi = AlgebraElement::monomial(ctx, i, one.clone(), 0)?;
            let yk = AlgebraElement::monomial(ctx, 0, one, k)?;
            let xi_g = AlgebraElement::monomial(ctx, i, g.clone(), 0)?;
            let first = self.x_image(i)?.multiply(&g_yk)?;
            let middle = xi.multiply(&self.poly_image(g)?)?.multiply(&yk)?;
            let last = xi_g.multiply(&self.y_image(k)?)?;
            acc = acc
                .checked_add(&first)?
                .checked_add(&middle)?
                .checked_add(&last)?;
        }
        Ok(acc)
    }
}

/// The Leibniz extension of `d` applied to `a`. Only meaningful when
/// [`check_derivation`] holds; otherwise the result depends on the chosen
/// factorization `x^i h^j y^k`.
pub fn apply_derivation(d: &DerivationSpec, a: &AlgebraElement) -> Result<AlgebraElement> {
    d.im_x.check_ctx(a)?;
    Leibniz::new(d).apply(a)
}

/// Whether the generator images respect the three defining relations, so
/// that they extend to a derivation of H(f).
pub fn check_derivation(d: &DerivationSpec) -> Result<bool> {
    let ctx = &d.ctx;
    let (x, y, h) = (
        AlgebraElement::x(ctx),
        AlgebraElement::y(ctx),
        AlgebraElement::h(ctx),
    );
    let f_h = AlgebraElement::from_poly(ctx, ctx.f().clone())?;
    let mut leibniz = Leibniz::new(d);
    let df = leibniz.poly_image(ctx.f())?;
    let (dx, dy, dh) = (&d.im_x, &d.im_y, &d.im_h);

    // h x = x f(h)
    let lhs = dh.multiply(&x)?.checked_add(&h.multiply(dx)?)?;
    let rhs = dx.multiply(&f_h)?.checked_add(&x.multiply(&df)?)?;
    if lhs != rhs {
        return Ok(false);
    }
    // y h = f(h) y
    let lhs = dy.multiply(&h)?.checked_add(&y.multiply(dh)?)?;
    let rhs = df.multiply(&y)?.checked_add(&f_h.multiply(dy)?)?;
    if lhs != rhs {
        return Ok(false);
    }
    // y x - x y = f(h) - h
    let lhs = dy
        .multiply(&x)?
        .checked_add(&y.multiply(dx)?)?
        .checked_sub(&dx.multiply(&y)?)?
        .checked_sub(&x.multiply(dy)?)?;
    let rhs = df.checked_sub(dh)?;
    Ok(lhs == rhs)
}

/// Splits `d` into components `d_r` raising the standard degree by `r`
/// (with `deg x = 1`, `deg y = -1`, `deg h = 0`). The components sum to `d`.
pub fn derivation_homogeneous_parts(d: &DerivationSpec) -> BTreeMap<i64, DerivationSpec> {
    let zero = AlgebraElement::zero(&d.ctx);
    let mut parts: BTreeMap<i64, [AlgebraElement; 3]> = BTreeMap::new();
    let images = [(&d.im_x, 1), (&d.im_y, -1), (&d.im_h, 0)];
    for (slot, (image, own_degree)) in images.into_iter().enumerate() {
        for (l, part) in image.homogeneous_parts() {
            let entry = parts
                .entry(l - own_degree)
                .or_insert_with(|| [zero.clone(), zero.clone(), zero.clone()]);
            entry[slot] = part;
        }
    }
    parts
        .into_iter()
        .map(|(r, [im_x, im_y, im_h])| {
            (
                r,
                DerivationSpec {
                    ctx: d.ctx.clone(),
                    im_x,
                    im_y,
                    im_h,
                },
            )
        })
        .collect()
}

/// Returns `λ` when `d` is `x -> λx`, `y -> -λy`, `h -> 0`, and `None`
/// otherwise. For `deg f > 1` these are exactly the locally finite
/// derivations, so `None` certifies that a valid `d` is not locally finite.
pub fn classify_locally_finite(d: &DerivationSpec) -> Result<Option<FieldElement>> {
    if !d.ctx.deg_f().is_some_and(|n| n > 1) {
        return Err(Error::Precondition(
            "locally finite classification needs deg f > 1".into(),
        ));
    }
    if !check_derivation(d)? {
        return Err(Error::NotADerivation);
    }
    if !d.im_h.is_zero() {
        return Ok(None);
    }
    let x = AlgebraElement::x(&d.ctx);
    let lambda = match d.im_x.terms().len() {
        0 => FieldElement::zero(d.ctx.field()),
        1 => match d.im_x.term(1, 0) {
            Some(g) if g.is_constant() => g.coeff(0),
            _ => return Ok(None),
        },
        _ => return Ok(None),
    };
    let expected_x = x.scale(&lambda)?;
    let expected_y = AlgebraElement::y(&d.ctx).scale(&-&lambda)?;
    Ok((d.im_x == expected_x && d.im_y == expected_y).then_some(lambda))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NilpotencyProbe {
    /// `d^k(a) = 0` for this `k`, and `d^j(a) != 0` for `j < k`.
    NilpotentAt(usize),
    NotNilpotentWithin(usize),
}

/// Iterates `d` on `a` at most `max_iter` times, looking for the first zero.
pub fn derivation_power_bounded(
    d: &DerivationSpec,
    a: &AlgebraElement,
    max_iter: usize,
) -> Result<NilpotencyProbe> {
    if a.is_zero() {
        return Ok(NilpotencyProbe::NilpotentAt(0));
    }
    let mut leibniz = Leibniz::new(d);
    let mut current = a.clone();
    for k in 1..=max_iter {
        current = leibniz.apply(&current)?;
        if current.is_zero() {
            return Ok(NilpotencyProbe::NilpotentAt(k));
        }
    }
    Ok(NilpotencyProbe::NotNilpotentWithin(max_iter))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::generators;
    use crate::field::FieldDesc;

    const Q: FieldDesc = FieldDesc::Rationals;

    fn ctx(coeffs: &[i64]) -> Context {
        Context::new(Poly::from_ints(Q, coeffs))
    }

    #[test]
    fn grading_derivation_is_valid() {
        for f in [&[0, 0, 1][..], &[1, 1, 0, 1], &[0, 3], &[2]] {
            let c = ctx(f);
            assert!(check_derivation(&DerivationSpec::grading(&c)).unwrap());
            assert!(check_derivation(&DerivationSpec::zero(&c)).unwrap());
        }
    }

    #[test]
    fn x_only_is_not_a_derivation() {
        let c = ctx(&[0, 0, 1]);
        let (x, _, _, _) = generators(&c);
        let zero = AlgebraElement::zero(&c);
        let d = DerivationSpec::new(x, zero.clone(), zero).unwrap();
        assert!(!check_derivation(&d).unwrap());
    }

    #[test]
    fn grading_acts_by_degree() {
        let c = ctx(&[0, 0, 1]);
        let (x, y, h, z) = generators(&c);
        let d = DerivationSpec::grading(&c);
        let x2y = x.pow(2).unwrap().multiply(&y).unwrap();
        assert_eq!(apply_derivation(&d, &x2y).unwrap(), x2y);
        assert!(apply_derivation(&d, &z).unwrap().is_zero());
        assert!(apply_derivation(&d, &AlgebraElement::one(&c))
            .unwrap()
            .is_zero());
        let xhy2 = x
            .multiply(&h)
            .unwrap()
            .multiply(&y.pow(2).unwrap())
            .unwrap();
        assert_eq!(apply_derivation(&d, &xhy2).unwrap(), -&xhy2);
    }

    #[test]
    fn central_multiple_of_grading() {
        // x -> xz, y -> -zy, h -> 0 is the grading derivation times z.
        let c = ctx(&[0, 0, 1]);
        let (x, y, _, z) = generators(&c);
        let d = DerivationSpec::new(
            x.multiply(&z).unwrap(),
            -&z.multiply(&y).unwrap(),
            AlgebraElement::zero(&c),
        )
        .unwrap();
        assert!(check_derivation(&d).unwrap());
        assert_eq!(classify_locally_finite(&d).unwrap(), None);
    }

    #[test]
    fn locally_finite_scalars() {
        let c = ctx(&[0, 0, 1]);
        let g = DerivationSpec::grading(&c);
        assert_eq!(
            classify_locally_finite(&g).unwrap(),
            Some(FieldElement::one(Q))
        );
        let three = FieldElement::from_int(Q, 3);
        assert_eq!(
            classify_locally_finite(&g.scale(&three).unwrap()).unwrap(),
            Some(three)
        );
        assert_eq!(
            classify_locally_finite(&DerivationSpec::zero(&c)).unwrap(),
            Some(FieldElement::zero(Q))
        );
        assert!(classify_locally_finite(&DerivationSpec::grading(&ctx(&[0, 1]))).is_err());
    }

    #[test]
    fn homogeneous_split() {
        let c = ctx(&[0, 0, 1]);
        let (x, _, _, _) = generators(&c);
        let g = DerivationSpec::grading(&c);
        let parts = derivation_homogeneous_parts(&g);
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[&0], g);

        let zero = AlgebraElement::zero(&c);
        let dh = DerivationSpec::new(zero.clone(), zero, x).unwrap();
        let parts = derivation_homogeneous_parts(&dh);
        assert_eq!(parts.keys().copied().collect::<Vec<_>>(), vec![1]);

        let sum = g.checked_add(&dh).unwrap();
        let parts = derivation_homogeneous_parts(&sum);
        assert_eq!(parts.keys().copied().collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(parts[&0].checked_add(&parts[&1]).unwrap(), sum);
    }

    #[test]
    fn nilpotency_probe() {
        let c = ctx(&[0, 0, 1]);
        let (x, _, h, _) = generators(&c);
        let g = DerivationSpec::grading(&c);
        assert_eq!(
            derivation_power_bounded(&DerivationSpec::zero(&c), &x, 5).unwrap(),
            NilpotencyProbe::NilpotentAt(1)
        );
        assert_eq!(
            derivation_power_bounded(&g, &x, 10).unwrap(),
            NilpotencyProbe::NotNilpotentWithin(10)
        );
        assert_eq!(
            derivation_power_bounded(&g, &h, 3).unwrap(),
            NilpotencyProbe::NilpotentAt(1)
        );
        assert_eq!(
            derivation_power_bounded(&g, &AlgebraElement::zero(&c), 3).unwrap(),
            NilpotencyProbe::NilpotentAt(0)
        );
    }
}
