//! Small-integer number theory used by the cyclotomic layer and the
//! automorphism search.

/// Euler's totient.
pub fn euler_phi(mut n: u32) -> usize {
    let mut result = n as u64;
    let mut p = 2u32;
    while (p as u64) * (p as u64) <= n as u64 {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p as u64;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n as u64;
    }
    result as usize
}

/// Positive divisors of `n` in ascending order. `divisors(0)` is empty.
pub fn divisors(n: u32) -> Vec<u32> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}
