//! Test support: an independent rewriting oracle and seeded generators.
//!
//! The oracle never looks at the engine's normal-form machinery. It works in
//! the free algebra on `x`, `y`, `h` over Q and applies one rule at a time
//! to the leftmost reducible pair until every word is of the form
//! `x^i h^j y^k`:
//!
//! ```text
//! h x -> x f(h)      y h -> f(h) y      y x -> x y + f(h) - h
//! ```

#![allow(dead_code)]

use std::collections::BTreeMap;

use heisenberg_core::{AlgebraElement, Context, FieldDesc, FieldElement, Poly};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const Q: FieldDesc = FieldDesc::Rationals;

/// Linear combination of words in the letters `b'x'`, `b'y'`, `b'h'`.
pub type Words = BTreeMap<Vec<u8>, BigRational>;

pub fn ctx(coeffs: &[i64]) -> Context {
    Context::new(Poly::from_ints(Q, coeffs))
}

fn add_word(map: &mut Words, w: Vec<u8>, c: BigRational) {
    if c.is_zero() {
        return;
    }
    let entry = map.entry(w.clone()).or_insert_with(BigRational::zero);
    *entry += c;
    if entry.is_zero() {
        map.remove(&w);
    }
}

pub struct Rewriter {
    /// Coefficients of `f`, constant first.
    f: Vec<BigRational>,
}

impl Rewriter {
    pub fn new(f: &[BigRational]) -> Self {
        Rewriter { f: f.to_vec() }
    }

    pub fn from_ints(f: &[i64]) -> Self {
        Rewriter {
            f: f.iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        }
    }

    fn h_power_terms(&self) -> impl Iterator<Item = (usize, &BigRational)> {
        self.f.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    /// One rewrite at the leftmost reducible position, or `None` if `w` is
    /// already normal.
    fn step(&self, w: &[u8]) -> Option<Vec<(Vec<u8>, BigRational)>> {
        let pos = w
            .windows(2)
            .position(|p| matches!(p, b"hx" | b"yh" | b"yx"))?;
        let (pre, post) = (&w[..pos], &w[pos + 2..]);
        let splice = |mid: Vec<u8>| [pre, &mid[..], post].concat();
        let h_pow = |j: usize| vec![b'h'; j];
        let mut out = Vec::new();
        match &w[pos..pos + 2] {
            b"hx" => {
                for (j, c) in self.h_power_terms() {
                    out.push((splice([&b"x"[..], &h_pow(j)].concat()), c.clone()));
                }
            }
            b"yh" => {
                for (j, c) in self.h_power_terms() {
                    out.push((splice([h_pow(j), b"y".to_vec()].concat()), c.clone()));
                }
            }
            _ => {
                out.push((splice(b"xy".to_vec()), BigRational::from_integer(1.into())));
                for (j, c) in self.h_power_terms() {
                    out.push((splice(h_pow(j)), c.clone()));
                }
                out.push((
                    splice(b"h".to_vec()),
                    BigRational::from_integer((-1).into()),
                ));
            }
        }
        Some(out)
    }

    pub fn normalize(&self, input: Words) -> Words {
        let mut pending = input;
        let mut done = Words::new();
        while let Some((w, c)) = pending.pop_first() {
            match self.step(&w) {
                None => add_word(&mut done, w, c),
                Some(parts) => {
                    for (nw, nc) in parts {
                        add_word(&mut pending, nw, &c * nc);
                    }
                }
            }
        }
        done
    }

    pub fn multiply(&self, a: &Words, b: &Words) -> Words {
        let mut prod = Words::new();
        for (wa, ca) in a {
            for (wb, cb) in b {
                add_word(&mut prod, [&wa[..], &wb[..]].concat(), ca * cb);
            }
        }
        self.normalize(prod)
    }
}

/// Expands an element into words `x^i h^j y^k`.
pub fn to_words(a: &AlgebraElement) -> Words {
    let mut out = Words::new();
    for (&(i, k), g) in a.terms() {
        for (j, c) in g.coeffs().iter().enumerate() {
            let q = c.as_rational().expect("oracle works over Q").clone();
            let w = [vec![b'x'; i], vec![b'h'; j], vec![b'y'; k]].concat();
            add_word(&mut out, w, q);
        }
    }
    out
}

/// Reads normal words back into an element.
pub fn from_words(ctx: &Context, words: &Words) -> AlgebraElement {
    let mut terms: BTreeMap<(usize, usize), Vec<BigRational>> = BTreeMap::new();
    for (w, c) in words {
        let i = w.iter().take_while(|&&l| l == b'x').count();
        let k = w.iter().rev().take_while(|&&l| l == b'y').count();
        let j = w.len() - i - k;
        assert!(
            w[i..i + j].iter().all(|&l| l == b'h'),
            "word not normal: {w:?}"
        );
        let coeffs = terms.entry((i, k)).or_default();
        if coeffs.len() <= j {
            coeffs.resize(j + 1, BigRational::zero());
        }
        coeffs[j] += c;
    }
    AlgebraElement::from_terms(
        ctx,
        terms
            .into_iter()
            .map(|(key, cs)| (key, Poly::from_rationals(Q, cs))),
    )
    .unwrap()
}

pub fn small_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let n: i64 = rng.gen_range(-5..=5);
    let d: i64 = if rng.gen_bool(0.25) {
        rng.gen_range(1..=3)
    } else {
        1
    };
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn nonzero_rational(rng: &mut ChaCha8Rng) -> BigRational {
    loop {
        let q = small_rational(rng);
        if !q.is_zero() {
            return q;
        }
    }
}

pub fn random_poly(rng: &mut ChaCha8Rng, max_deg: usize) -> Poly {
    let deg = rng.gen_range(0..=max_deg);
    let coeffs: Vec<BigRational> = (0..=deg).map(|_| small_rational(rng)).collect();
    Poly::from_rationals(Q, coeffs)
}

/// Sum of up to `max_terms` terms `x^i g y^k` with `i, k <= max_ik`.
pub fn random_element(
    rng: &mut ChaCha8Rng,
    ctx: &Context,
    max_ik: usize,
    max_deg: usize,
    max_terms: usize,
) -> AlgebraElement {
    let n = rng.gen_range(1..=max_terms);
    let terms: Vec<_> = (0..n)
        .map(|_| {
            let i = rng.gen_range(0..=max_ik);
            let k = rng.gen_range(0..=max_ik);
            ((i, k), random_poly(rng, max_deg))
        })
        .collect();
    AlgebraElement::from_terms(ctx, terms).unwrap()
}

/// Random element of H_0 with diagonal indices up to `max_k`.
pub fn random_h0(
    rng: &mut ChaCha8Rng,
    ctx: &Context,
    max_k: usize,
    max_deg: usize,
) -> AlgebraElement {
    let mut terms = Vec::new();
    for k in 0..=max_k {
        if rng.gen_bool(0.7) {
            terms.push(((k, k), random_poly(rng, max_deg)));
        }
    }
    AlgebraElement::from_terms(ctx, terms).unwrap()
}

pub fn rational(n: i64, d: i64) -> FieldElement {
    FieldElement::from_rational(Q, BigRational::new(n.into(), d.into()))
}
