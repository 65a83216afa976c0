//! Integer polynomial products.
//!
//! Large products go through Kronecker substitution: both operands are
//! packed into single big integers with one fixed-width slot per
//! coefficient, multiplied once, and unpacked with balanced digits. That
//! hands the work to malachite's multiplier, which switches to FFT methods
//! at the sizes that iterated compositions reach, and avoids one
//! allocation per coefficient product.

use malachite_nz::integer::Integer;
use malachite_nz::natural::Natural;
use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};

/// Operands shorter than this use the schoolbook product.
const KRONECKER_MIN_LEN: usize = 12;

/// Product of coefficient vectors (constant term first). Inputs must be
/// nonempty.
pub(crate) fn mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.len().min(b.len()) < KRONECKER_MIN_LEN {
        schoolbook(a, b)
    } else {
        kronecker(a, b)
    }
}

pub(crate) fn schoolbook(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn max_bits(v: &[BigInt]) -> u64 {
    v.iter().map(BigInt::bits).max().unwrap_or(0)
}

/// ORs the 64-bit digits of `value` into `buf` starting at bit `offset`.
fn write_bits(buf: &mut [u64], offset: u64, value: &BigUint) {
    let word = (offset / 64) as usize;
    let shift = (offset % 64) as u32;
    for (j, d) in value.iter_u64_digits().enumerate() {
        let wide = u128::from(d) << shift;
        buf[word + j] |= wide as u64;
        if shift > 0 {
            buf[word + j + 1] |= (wide >> 64) as u64;
        }
    }
}

fn pack(v: &[BigInt], slot: u64) -> Integer {
    let words = (slot * v.len() as u64 / 64) as usize + 2;
    let mut pos = vec![0u64; words];
    let mut neg = vec![0u64; words];
    for (i, c) in v.iter().enumerate() {
        let target = match c.sign() {
            Sign::Plus => &mut pos,
            Sign::Minus => &mut neg,
            Sign::NoSign => continue,
        };
        write_bits(target, slot * i as u64, c.magnitude());
    }
    Integer::from(Natural::from_owned_limbs_asc(pos))
        - Integer::from(Natural::from_owned_limbs_asc(neg))
}

/// Bits `[offset, offset + len)` of the little-endian digit string.
fn read_bits(digits: &[u32], offset: u64, len: u64) -> BigUint {
    let word = (offset / 32) as usize;
    let shift = (offset % 32) as u32;
    let count = ((u64::from(shift) + len).div_ceil(32)) as usize;
    let mut out: Vec<u32> = (0..count)
        .map(|j| {
            let lo = digits.get(word + j).copied().unwrap_or(0);
            let hi = digits.get(word + j + 1).copied().unwrap_or(0);
            ((u64::from(hi) << 32 | u64::from(lo)) >> shift) as u32
        })
        .collect();
    let full = (len / 32) as usize;
    let rem = (len % 32) as u32;
    out.truncate(full + usize::from(rem > 0));
    if rem > 0 {
        if let Some(last) = out.get_mut(full) {
            *last &= (1u32 << rem) - 1;
        }
    }
    BigUint::new(out)
}

fn kronecker(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let shorter = a.len().min(b.len()) as u64;
    // Every output coefficient is below 2^(slot - 1) in absolute value.
    let slot = max_bits(a) + max_bits(b) + (64 - shorter.leading_zeros() as u64) + 1;
    let mut product = pack(a, slot) * pack(b, slot);
    let n = a.len() + b.len() - 1;
    let negative = product < 0u32;
    if negative {
        product = -product;
    }
    let digits: Vec<u32> = Natural::try_from(product)
        .expect("nonnegative after negation")
        .into_limbs_asc()
        .into_iter()
        .flat_map(|l| [l as u32, (l >> 32) as u32])
        .collect();
    let half = BigUint::one() << (slot - 1);
    let full = BigInt::one() << slot;
    let mut carry = false;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut chunk = read_bits(&digits, slot * i as u64, slot);
        if carry {
            chunk += 1u32;
        }
        carry = chunk >= half;
        let mut c = BigInt::from_biguint(Sign::Plus, chunk);
        if carry {
            c -= &full;
        }
        out.push(if negative { -c } else { c });
    }
    out
}
