//! Exact scalars: the rationals and cyclotomic fields Q(zeta_m).
//!
//! An element of Q(zeta_m) is stored by its coordinates in the power basis
//! `1, zeta, ..., zeta^(phi(m)-1)`, always reduced modulo the cyclotomic
//! polynomial Phi_m. Equality is therefore coordinate-wise.

mod dense;

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{divisors, euler_phi};
use crate::error::{Error, Result};
use crate::format;
use crate::poly::Poly;

/// Which exact field scalars live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldDesc {
    Rationals,
    /// Q(zeta_m) for `m >= 2`; `m = 1` is always normalized to `Rationals`.
    Cyclotomic(u32),
}

impl FieldDesc {
    /// Q(zeta_m). `m = 1` gives `Rationals`; `m = 0` is rejected.
    pub fn cyclotomic(m: u32) -> Result<Self> {
        match m {
            0 => Err(Error::InvalidField("Q(zeta_0)".into())),
            1 => Ok(FieldDesc::Rationals),
            m => Ok(FieldDesc::Cyclotomic(m)),
        }
    }

    /// The conductor m (1 for the rationals).
    pub fn conductor(self) -> u32 {
        match self {
            FieldDesc::Rationals => 1,
            FieldDesc::Cyclotomic(m) => m,
        }
    }

    /// Dimension over Q, i.e. phi(m).
    pub fn degree(self) -> usize {
        euler_phi(self.conductor())
    }

    /// Whether there is a canonical embedding of `self` into `target`.
    pub fn embeds_in(self, target: FieldDesc) -> bool {
        self.degree() == 1 || target.conductor().is_multiple_of(self.conductor())
    }

    /// Smallest cyclotomic field containing both.
    pub fn compositum(self, other: FieldDesc) -> FieldDesc {
        let m = self.conductor().lcm(&other.conductor());
        FieldDesc::cyclotomic(m).expect("lcm of positive conductors is positive")
    }

    fn modulus(self) -> Arc<Vec<BigRational>> {
        cyclotomic_coeffs(self.conductor())
    }
}

impl fmt::Display for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDesc::Rationals => write!(f, "Q"),
            FieldDesc::Cyclotomic(m) => write!(f, "Q(zeta_{m})"),
        }
    }
}

impl FromStr for FieldDesc {
    type Err = Error;

    /// Accepts `Q` and `Q(zeta_m)`.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact == "Q" {
            return Ok(FieldDesc::Rationals);
        }
        compact
            .strip_prefix("Q(zeta_")
            .and_then(|rest| rest.strip_suffix(')'))
            .and_then(|m| m.parse::<u32>().ok())
            .filter(|&m| m >= 1)
            .map(|m| FieldDesc::cyclotomic(m).unwrap())
            .ok_or_else(|| Error::InvalidField(s.to_string()))
    }
}

type CyclotomicCache = RwLock<HashMap<u32, Arc<Vec<BigRational>>>>;

fn cyclotomic_coeffs(m: u32) -> Arc<Vec<BigRational>> {
    static CACHE: OnceLock<CyclotomicCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(c) = cache.read().unwrap().get(&m) {
        return Arc::clone(c);
    }
    // t^m - 1 divided by Phi_d for every proper divisor d.
    let mut num = vec![BigRational::zero(); m as usize + 1];
    num[0] = -BigRational::one();
    num[m as usize] = BigRational::one();
    for d in divisors(m).into_iter().filter(|&d| d < m) {
        let (q, r) = dense::divrem(&num, &cyclotomic_coeffs(d));
        debug_assert!(r.is_empty());
        num = q;
    }
    let value = Arc::new(num);
    cache.write().unwrap().entry(m).or_insert(value).clone()
}

/// The m-th cyclotomic polynomial Phi_m as a polynomial over Q.
pub fn cyclotomic_polynomial(m: u32) -> Result<Poly> {
    if m == 0 {
        return Err(Error::InvalidField("Q(zeta_0)".into()));
    }
    Ok(Poly::from_rationals(
        FieldDesc::Rationals,
        cyclotomic_coeffs(m).iter().cloned(),
    ))
}

/// An exact element of a [`FieldDesc`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    desc: FieldDesc,
    coords: Vec<BigRational>,
}

impl FieldElement {
    /// Builds an element from power-basis coordinates of any length, reducing
    /// modulo Phi_m.
    pub fn from_coords(desc: FieldDesc, coords: Vec<BigRational>) -> Self {
        let mut coords = coords;
        let d = desc.degree();
        if coords.len() > d {
            let modulus = desc.modulus();
            for top in (d..coords.len()).rev() {
                let c = std::mem::take(&mut coords[top]);
                if c.is_zero() {
                    continue;
                }
                for (j, mj) in modulus.iter().take(d).enumerate() {
                    coords[top - d + j] -= &c * mj;
                }
            }
            coords.truncate(d);
        }
        coords.resize(d, BigRational::zero());
        FieldElement { desc, coords }
    }

    pub fn zero(desc: FieldDesc) -> Self {
        FieldElement {
            desc,
            coords: vec![BigRational::zero(); desc.degree()],
        }
    }

    pub fn one(desc: FieldDesc) -> Self {
        Self::from_rational(desc, BigRational::one())
    }

    pub fn from_rational(desc: FieldDesc, q: BigRational) -> Self {
        let mut coords = vec![BigRational::zero(); desc.degree()];
        coords[0] = q;
        FieldElement { desc, coords }
    }

    pub fn from_int(desc: FieldDesc, n: i64) -> Self {
        Self::from_rational(desc, BigRational::from_integer(BigInt::from(n)))
    }

    /// The canonical primitive m-th root of unity, the class of `t` mod Phi_m.
    pub fn zeta(desc: FieldDesc) -> Result<Self> {
        match desc {
            FieldDesc::Rationals => Err(Error::NoZeta(desc)),
            FieldDesc::Cyclotomic(_) => Ok(Self::from_coords(
                desc,
                vec![BigRational::zero(), BigRational::one()],
            )),
        }
    }

    pub fn desc(&self) -> FieldDesc {
        self.desc
    }

    /// Power-basis coordinates; length is always phi(m).
    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(Zero::is_zero)
    }

    /// The element as a rational number, if it is one.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.coords[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| &self.coords[0])
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.desc == other.desc {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: self.desc,
                right: other.desc,
            })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        Ok(FieldElement {
            desc: self.desc,
            coords,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a - b)
            .collect();
        Ok(FieldElement {
            desc: self.desc,
            coords,
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        if self.coords.len() == 1 {
            return Ok(FieldElement {
                desc: self.desc,
                coords: vec![&self.coords[0] * &other.coords[0]],
            });
        }
        Ok(Self::from_coords(
            self.desc,
            dense::mul(&self.coords, &other.coords),
        ))
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroInverse);
        }
        if self.coords.len() == 1 {
            return Ok(FieldElement {
                desc: self.desc,
                coords: vec![self.coords[0].recip()],
            });
        }
        let mut a = self.coords.clone();
        dense::trim(&mut a);
        let u = dense::inverse_mod(&a, &self.desc.modulus())
            .expect("Phi_m is irreducible, so every nonzero element is a unit");
        Ok(Self::from_coords(self.desc, u))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.checked_mul(&other.inv()?)
    }

    /// Multiplies by a rational.
    pub fn scale(&self, q: &BigRational) -> Self {
        FieldElement {
            desc: self.desc,
            coords: self.coords.iter().map(|c| c * q).collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.desc);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Integer power; negative exponents invert first.
    pub fn powi(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs()))
        }
    }

    /// The same element viewed in a larger field: zeta_m maps to
    /// zeta_M^(M/m).
    pub fn embed(&self, target: FieldDesc) -> Result<Self> {
        if self.desc == target {
            return Ok(self.clone());
        }
        if !self.desc.embeds_in(target) {
            return Err(Error::NoEmbedding {
                from: self.desc,
                to: target,
            });
        }
        if self.coords.len() == 1 {
            return Ok(Self::from_rational(target, self.coords[0].clone()));
        }
        let stride = (target.conductor() / self.desc.conductor()) as usize;
        let mut coords = vec![BigRational::zero(); (self.coords.len() - 1) * stride + 1];
        for (j, c) in self.coords.iter().enumerate() {
            coords[j * stride] = c.clone();
        }
        Ok(Self::from_coords(target, coords))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{}", format::rational(q));
        }
        let terms = self
            .coords
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| format::scaled_monomial(c, &format::power("zeta", j)))
            .collect();
        write!(f, "{}", format::join_signed(terms))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&FieldElement> for &FieldElement {
            type Output = FieldElement;

            /// Panics on mixed-field operands; use the `checked_*` form to
            /// get an error instead.
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }

        impl $tr for FieldElement {
            type Output = FieldElement;

            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &FieldElement {
    type Output = FieldElement;

    fn neg(self) -> FieldElement {
        FieldElement {
            desc: self.desc,
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;

    fn neg(self) -> FieldElement {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn phi_coeffs(m: u32) -> Vec<i64> {
        cyclotomic_coeffs(m)
            .iter()
            .map(|c| {
                assert!(c.is_integer());
                i64::try_from(c.numer()).unwrap()
            })
            .collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(phi_coeffs(1), vec![-1, 1]);
        assert_eq!(phi_coeffs(2), vec![1, 1]);
        assert_eq!(phi_coeffs(4), vec![1, 0, 1]);
        assert_eq!(phi_coeffs(6), vec![1, -1, 1]);
        assert_eq!(phi_coeffs(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn zeta_four_squares_to_minus_one() {
        let k = FieldDesc::Cyclotomic(4);
        let z = FieldElement::zeta(k).unwrap();
        assert_eq!(&z * &z, FieldElement::from_int(k, -1));
    }

    #[test]
    fn rational_sum() {
        let a = FieldElement::from_rational(FieldDesc::Rationals, q(2, 3));
        let b = FieldElement::from_rational(FieldDesc::Rationals, q(1, 6));
        assert_eq!((&a + &b).as_rational(), Some(&q(5, 6)));
    }

    #[test]
    fn inverse_of_cube_root() {
        let k = FieldDesc::Cyclotomic(3);
        let z = FieldElement::zeta(k).unwrap();
        let inv = z.inv().unwrap();
        // zeta^2 = -1 - zeta modulo t^2 + t + 1.
        assert_eq!(inv.coords(), &[q(-1, 1), q(-1, 1)]);
        assert_eq!(inv, z.pow(2));
        assert!((&z * &inv).is_one());
    }

    #[test]
    fn inverse_of_zero_fails() {
        let k = FieldDesc::Cyclotomic(5);
        assert_eq!(FieldElement::zero(k).inv(), Err(Error::ZeroInverse));
    }

    #[test]
    fn mixed_fields_are_rejected() {
        let a = FieldElement::one(FieldDesc::Rationals);
        let b = FieldElement::one(FieldDesc::Cyclotomic(3));
        assert!(matches!(
            a.checked_add(&b),
            Err(Error::FieldMismatch { .. })
        ));
    }

    #[test]
    fn embeddings() {
        let half = FieldElement::from_rational(FieldDesc::Rationals, q(1, 2));
        let e = half.embed(FieldDesc::Cyclotomic(4)).unwrap();
        assert_eq!(e.as_rational(), Some(&q(1, 2)));

        let minus_one = FieldElement::zeta(FieldDesc::Cyclotomic(2)).unwrap();
        assert_eq!(minus_one.as_rational(), Some(&q(-1, 1)));
        let e = minus_one.embed(FieldDesc::Cyclotomic(4)).unwrap();
        assert_eq!(e, FieldElement::from_int(FieldDesc::Cyclotomic(4), -1));

        let z3 = FieldElement::zeta(FieldDesc::Cyclotomic(3)).unwrap();
        let k6 = FieldDesc::Cyclotomic(6);
        let img = z3.embed(k6).unwrap();
        let z6 = FieldElement::zeta(k6).unwrap();
        assert_eq!(img, z6.pow(2));
        // Image is a root of Phi_3 = t^2 + t + 1.
        let val = &(&img * &img) + &(&img + &FieldElement::one(k6));
        assert!(val.is_zero());

        assert!(matches!(
            z3.embed(FieldDesc::Cyclotomic(4)),
            Err(Error::NoEmbedding { .. })
        ));
    }

    #[test]
    fn roots_of_unity_have_exact_order() {
        for m in 2..=24u32 {
            let k = FieldDesc::Cyclotomic(m);
            let z = FieldElement::zeta(k).unwrap();
            assert!(z.pow(m as u64).is_one(), "zeta_{m}^{m}");
            for j in 1..m {
                assert!(!z.pow(j as u64).is_one(), "zeta_{m}^{j}");
            }
            // Phi_m(zeta_m) = 0
            let mut acc = FieldElement::zero(k);
            for (j, c) in cyclotomic_coeffs(m).iter().enumerate() {
                acc = &acc + &z.pow(j as u64).scale(c);
            }
            assert!(acc.is_zero(), "Phi_{m}(zeta)");
        }
    }

    #[test]
    fn field_desc_parsing() {
        assert_eq!("Q".parse::<FieldDesc>().unwrap(), FieldDesc::Rationals);
        assert_eq!(
            "Q(zeta_5)".parse::<FieldDesc>().unwrap(),
            FieldDesc::Cyclotomic(5)
        );
        assert_eq!(
            "Q(zeta_1)".parse::<FieldDesc>().unwrap(),
            FieldDesc::Rationals
        );
        assert!("Q(zeta_0)".parse::<FieldDesc>().is_err());
        assert!("R".parse::<FieldDesc>().is_err());
    }

    #[test]
    fn display() {
        let k = FieldDesc::Cyclotomic(5);
        let z = FieldElement::zeta(k).unwrap();
        let e = &(&z.pow(3).scale(&q(-1, 2)) + &z) - &FieldElement::one(k);
        assert_eq!(e.to_string(), "-1/2*zeta^3 + zeta - 1");
        assert_eq!(FieldElement::from_int(k, -7).to_string(), "-7");
    }
}
