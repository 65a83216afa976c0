//! Structural decision procedures: classification by `deg f`, the
//! non-Noetherian witness chain, membership in the center C[z] and in the
//! subalgebra C[z, h], and gradings induced by degrees on the generators.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebra::{AlgebraElement, Context};
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::poly::Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CenterDescription {
    /// The center is the polynomial algebra C[z].
    PolynomialInZ,
    /// `deg f = 1`: the center is larger and is not computed.
    NotComputedDegOne,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    /// `None` when `f = 0`.
    pub deg_f: Option<usize>,
    pub is_domain: bool,
    pub is_noetherian: bool,
    pub is_generalized_down_up: bool,
    pub center_description: CenterDescription,
}

/// Classification flags, all determined by `deg f`.
pub fn classify(ctx: &Context) -> Classification {
    let deg = ctx.deg_f();
    let deg_one = deg == Some(1);
    Classification {
        deg_f: deg,
        is_domain: deg.is_some_and(|d| d >= 1),
        is_noetherian: deg_one,
        is_generalized_down_up: deg.is_none_or(|d| d <= 1),
        center_description: if deg_one {
            CenterDescription::NotComputedDegOne
        } else {
            CenterDescription::PolynomialInZ
        },
    }
}

/// Whether `h y^(n+1)` lies in `I_n = sum_{i<=n} H h y^i`, decided through
/// `h ∈ (sigma^1(h), ..., sigma^(n+1)(h))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessReport {
    pub n: usize,
    /// Monic gcd of `sigma^j(h)` for `1 <= j <= n+1` (zero if all vanish).
    pub generator_gcd: Poly,
    pub is_member: bool,
}

/// Rational fixed points `a` of `f` (roots of `f(h) - h`); shifting by one
/// of them via [`Poly::shifted`] yields an isomorphic algebra with `f(0) = 0`.
pub fn rational_fixed_points(ctx: &Context) -> Result<Vec<FieldElement>> {
    let g = ctx.f().checked_sub(&Poly::var(ctx.field()))?;
    Ok(g.rational_roots()?
        .into_iter()
        .map(|q| FieldElement::from_rational(ctx.field(), q))
        .collect())
}

/// Reports for `n = 0..=max_n`. Requires `f(0) = 0`.
///
/// Each report's gcd is computed incrementally: `sigma^(j+1)(h) = f(sigma^j(h))`,
/// so `sigma^(j+1)(h) mod g = f(sigma^j(h) mod g) mod g` for the running gcd
/// `g`, and the huge iterates are never expanded. The zero polynomial `f = 0`
/// falls in the "degree 0" branch: every iterate vanishes and `h` is never a
/// member.
pub fn noetherian_witness(ctx: &Context, max_n: usize) -> Result<Vec<WitnessReport>> {
    let f = ctx.f();
    if !f.coeff(0).is_zero() {
        let rational_roots = match rational_fixed_points(ctx) {
            Ok(roots) => roots.iter().map(ToString::to_string).collect(),
            Err(_) => Vec::new(),
        };
        return Err(Error::NeedsShift { rational_roots });
    }
    let h = Poly::var(ctx.field());
    let reduce = |p: Poly, g: &Poly| -> Result<Poly> {
        if g.is_zero() {
            Ok(p)
        } else {
            Ok(p.divmod(g)?.1)
        }
    };
    let mut gcd = f.monic();
    let mut residue = reduce(f.clone(), &gcd)?;
    let mut reports = Vec::with_capacity(max_n + 1);
    for n in 0..=max_n {
        if n > 0 {
            let mut next = Poly::zero(ctx.field());
            for c in f.coeffs().iter().rev() {
                next = reduce(
                    next.checked_mul(&residue)? + Poly::constant(c.clone()),
                    &gcd,
                )?;
            }
            gcd = gcd.gcd(&next)?;
            residue = reduce(next, &gcd)?;
        }
        reports.push(WitnessReport {
            n,
            is_member: gcd.divides(&h)?,
            generator_gcd: gcd.clone(),
        });
    }
    Ok(reports)
}

fn z_powers(ctx: &Context, upto: usize) -> Result<Vec<AlgebraElement>> {
    let z = AlgebraElement::z(ctx);
    let mut powers = vec![AlgebraElement::one(ctx)];
    for _ in 0..upto {
        let next = powers.last().unwrap().multiply(&z)?;
        powers.push(next);
    }
    Ok(powers)
}

fn top_diagonal(a: &AlgebraElement) -> Option<usize> {
    a.terms().keys().map(|&(i, _)| i).max()
}

/// If `a = p(z)` for a polynomial `p`, returns `p` (written in the variable
/// `h` of [`Poly`]); otherwise `None`. Requires `deg f != 1`.
pub fn center_membership(a: &AlgebraElement) -> Result<Option<Poly>> {
    let ctx = a.ctx();
    if ctx.deg_f() == Some(1) {
        return Err(Error::Precondition(
            "center membership needs deg f != 1 (the center is larger when deg f = 1)".into(),
        ));
    }
    if !a.is_in_h0() {
        return Ok(None);
    }
    let Some(top) = top_diagonal(a) else {
        return Ok(Some(Poly::zero(ctx.field())));
    };
    let powers = z_powers(ctx, top)?;
    let mut coeffs = vec![FieldElement::zero(ctx.field()); top + 1];
    let mut rest = a.clone();
    while let Some(k) = top_diagonal(&rest) {
        let g = rest.term(k, k).unwrap();
        if !g.is_constant() {
            return Ok(None);
        }
        let c = g.coeff(0);
        rest = rest.checked_sub(&powers[k].scale(&c)?)?;
        coeffs[k] = c;
    }
    Ok(Some(Poly::from_coeffs(ctx.field(), coeffs)?))
}

/// Coefficients `p_k(h)` of an element `sum_k p_k(h) z^k` of C[z, h].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZhRepresentation {
    /// `coeffs[k]` multiplies `z^k`; trailing zeros are stripped.
    pub coeffs: Vec<Poly>,
}

impl ZhRepresentation {
    /// Rebuilds the element `sum p_k(h) z^k`.
    pub fn evaluate(&self, ctx: &Context) -> Result<AlgebraElement> {
        let z = AlgebraElement::z(ctx);
        let mut acc = AlgebraElement::zero(ctx);
        let mut z_k = AlgebraElement::one(ctx);
        for (k, p) in self.coeffs.iter().enumerate() {
            if k > 0 {
                z_k = z_k.multiply(&z)?;
            }
            acc = acc.checked_add(&AlgebraElement::from_poly(ctx, p.clone())?.multiply(&z_k)?)?;
        }
        Ok(acc)
    }
}

/// Decides whether an element of H_0 lies in C[z, h]. Requires `deg f > 1`.
///
/// Peels the top diagonal index `K`: the `(K, K)` coefficient of
/// `p(h) z^K` is `sigma^K(p)`, so it must decompose as a polynomial in
/// `sigma^K(h)`.
pub fn zh_membership(a: &AlgebraElement) -> Result<Option<ZhRepresentation>> {
    let ctx = a.ctx();
    if !ctx.deg_f().is_some_and(|d| d > 1) {
        return Err(Error::Precondition(
            "C[z, h] membership needs deg f > 1".into(),
        ));
    }
    if !a.is_in_h0() {
        return Err(Error::NotInH0);
    }
    let Some(top) = top_diagonal(a) else {
        return Ok(Some(ZhRepresentation { coeffs: Vec::new() }));
    };
    let powers = z_powers(ctx, top)?;
    let mut coeffs = vec![Poly::zero(ctx.field()); top + 1];
    let mut rest = a.clone();
    while let Some(k) = top_diagonal(&rest) {
        let g = rest.term(k, k).unwrap();
        let Some(p) = g.decompose_as_polynomial_in(&*ctx.sigma_power_h(k)?)? else {
            return Ok(None);
        };
        let peeled = AlgebraElement::from_poly(ctx, p.clone())?.multiply(&powers[k])?;
        rest = rest.checked_sub(&peeled)?;
        coeffs[k] = p;
    }
    while coeffs.last().is_some_and(Poly::is_zero) {
        coeffs.pop();
    }
    Ok(Some(ZhRepresentation { coeffs }))
}

/// Degree assignments `(d_x, d_y, d_h)` making every defining relation
/// homogeneous, as the integer solution lattice of a linear system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorGradings {
    /// Rows `r` with `r · (d_x, d_y, d_h) = 0`.
    pub constraints: Vec<[i64; 3]>,
    /// Primitive integer basis of the solutions.
    pub basis: Vec<[i64; 3]>,
}

impl GeneratorGradings {
    pub fn contains(&self, d: [i64; 3]) -> bool {
        self.constraints
            .iter()
            .all(|r| r.iter().zip(d).map(|(a, b)| a * b).sum::<i64>() == 0)
    }

    /// Whether the solutions are exactly `{(l, -l, 0) : l ∈ Z}`.
    pub fn is_standard_family(&self) -> bool {
        self.basis == [[1, -1, 0]]
    }
}

/// Generator-induced gradings of H(f). Requires `deg f > 1`.
pub fn admissible_generator_gradings(ctx: &Context) -> Result<GeneratorGradings> {
    if !ctx.deg_f().is_some_and(|d| d > 1) {
        return Err(Error::Precondition(
            "grading analysis needs deg f > 1".into(),
        ));
    }
    let mut constraints: Vec<[i64; 3]> = Vec::new();
    let mut push = |row: [i64; 3]| {
        if row != [0, 0, 0] && !constraints.contains(&row) {
            constraints.push(row);
        }
    };
    // h x = x f(h) and y h = f(h) y: deg h = j deg h for every j in supp f.
    for j in ctx.f().support() {
        push([0, 0, j as i64 - 1]);
    }
    // y x - x y = f(h) - h: deg x + deg y = j deg h for j in supp(f - h).
    let rhs = ctx.f().checked_sub(&Poly::var(ctx.field()))?;
    for j in rhs.support() {
        push([1, 1, -(j as i64)]);
    }
    let basis = integer_kernel(&constraints);
    Ok(GeneratorGradings { constraints, basis })
}

/// Checks directly that `deg x = d[0]`, `deg y = d[1]`, `deg h = d[2]` makes
/// each defining relation a sum of monomials of one degree.
pub fn is_admissible_grading(ctx: &Context, d: [i64; 3]) -> bool {
    let [dx, dy, dh] = d;
    let all_equal = |degrees: &[i64]| degrees.windows(2).all(|w| w[0] == w[1]);
    let f_monomials: Vec<i64> = ctx.f().support().map(|j| j as i64 * dh).collect();
    let rel_hx: Vec<i64> = std::iter::once(dh + dx)
        .chain(f_monomials.iter().map(|m| dx + m))
        .collect();
    let rel_yh: Vec<i64> = std::iter::once(dy + dh)
        .chain(f_monomials.iter().map(|m| m + dy))
        .collect();
    let rhs = ctx.f() - &Poly::var(ctx.field());
    let rel_yx: Vec<i64> = [dy + dx, dx + dy]
        .into_iter()
        .chain(rhs.support().map(|j| j as i64 * dh))
        .collect();
    all_equal(&rel_hx) && all_equal(&rel_yh) && all_equal(&rel_yx)
}

/// Primitive integer basis of `{v ∈ Z^3 : r · v = 0 for all rows r}`.
fn integer_kernel(rows: &[[i64; 3]]) -> Vec<[i64; 3]> {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|&v| BigRational::from_integer(v.into()))
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..3 {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let lead = m[row][col].clone();
        for v in m[row].iter_mut() {
            *v = &*v / &lead;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in 0..3 {
                    let delta = &factor * &m[row][c];
                    m[r][c] -= delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    (0..3)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![BigRational::zero(); 3];
            v[free] = BigRational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][free].clone();
            }
            primitive(&v)
        })
        .collect()
}

fn primitive(v: &[BigRational]) -> [i64; 3] {
    let denom = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|q| (q * BigRational::from_integer(denom.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, n| acc.gcd(n));
    let sign = ints
        .iter()
        .find(|n| !n.is_zero())
        .map_or(BigInt::one(), |n| n.signum());
    let mut out = [0i64; 3];
    for (o, n) in out.iter_mut().zip(&ints) {
        *o = i64::try_from(n / &g * &sign).expect("small kernel entries");
    }
    out
}
