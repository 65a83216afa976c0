mod common;

use common::{ctx, from_words, to_words, Rewriter, Q};
use heisenberg_core::morphisms::{
    apply_derivation, apply_x_fixing_automorphism, derivation_homogeneous_parts, DerivationSpec,
};
use heisenberg_core::structure::{center_membership, zh_membership, ZhRepresentation};
use heisenberg_core::{AlgebraElement, Context, FieldElement, Poly};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

/// Defining polynomials small enough that products of random elements stay
/// cheap.
const FS: &[&[i64]] = &[&[0, 0, 1], &[0, 1, 0, 1], &[1, 2], &[0, 0, 1, -1], &[3]];

fn rat() -> impl Strategy<Value = BigRational> {
    (-4i64..=4, prop_oneof![3 => Just(1i64), 1 => 2i64..=3])
        .prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(rat(), 1..=max_deg + 1).prop_map(|cs| Poly::from_rationals(Q, cs))
}

type RawElement = Vec<((usize, usize), Poly)>;

fn raw_element(max_ik: usize) -> impl Strategy<Value = RawElement> {
    prop::collection::vec(((0..=max_ik, 0..=max_ik), poly(2)), 1..=3)
}

fn build(c: &Context, raw: RawElement) -> AlgebraElement {
    AlgebraElement::from_terms(c, raw).unwrap()
}

fn f_index() -> impl Strategy<Value = usize> {
    0..FS.len()
}

fn lambda() -> impl Strategy<Value = FieldElement> {
    rat()
        .prop_filter("nonzero", |q| q != &BigRational::from_integer(0.into()))
        .prop_map(|q| FieldElement::from_rational(Q, q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn multiplication_is_associative(fi in f_index(), a in raw_element(2), b in raw_element(2), c in raw_element(2)) {
        let k = ctx(FS[fi]);
        let (a, b, c) = (build(&k, a), build(&k, b), build(&k, c));
        let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn product_matches_rewriting(fi in f_index(), a in raw_element(2), b in raw_element(2)) {
        let k = ctx(FS[fi]);
        let (a, b) = (build(&k, a), build(&k, b));
        let oracle = Rewriter::from_ints(FS[fi]).multiply(&to_words(&a), &to_words(&b));
        prop_assert_eq!(a.multiply(&b).unwrap(), from_words(&k, &oracle));
    }

    #[test]
    fn iota_is_an_involutive_anti_homomorphism(fi in f_index(), a in raw_element(2), b in raw_element(2)) {
        let k = ctx(FS[fi]);
        let (a, b) = (build(&k, a), build(&k, b));
        prop_assert_eq!(a.iota().iota(), a.clone());
        let lhs = a.multiply(&b).unwrap().iota();
        let rhs = b.iota().multiply(&a.iota()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn sigma_moves_past_generators(fi in f_index(), diag in prop::collection::vec(poly(2), 1..=3)) {
        let k = ctx(FS[fi]);
        let theta = build(&k, diag.into_iter().enumerate().map(|(i, g)| ((i, i), g)).collect());
        let s = theta.sigma_h0().unwrap();
        let (x, y) = (AlgebraElement::x(&k), AlgebraElement::y(&k));
        prop_assert_eq!(theta.multiply(&x).unwrap(), x.multiply(&s).unwrap());
        prop_assert_eq!(y.multiply(&theta).unwrap(), s.multiply(&y).unwrap());
    }

    #[test]
    fn z_is_central(fi in f_index(), a in raw_element(3)) {
        let k = ctx(FS[fi]);
        let a = build(&k, a);
        let z = AlgebraElement::z(&k);
        prop_assert!(z.commutator(&a).unwrap().is_zero());
    }

    #[test]
    fn torus_action_composes(fi in f_index(), a in raw_element(2), b in raw_element(2), l in lambda(), m in lambda()) {
        let k = ctx(FS[fi]);
        let (a, b) = (build(&k, a), build(&k, b));
        let both = a.phi_lambda(&l).unwrap().phi_lambda(&m).unwrap();
        prop_assert_eq!(both, a.phi_lambda(&l.checked_mul(&m).unwrap()).unwrap());
        let lhs = a.multiply(&b).unwrap().phi_lambda(&l).unwrap();
        let rhs = a.phi_lambda(&l).unwrap().multiply(&b.phi_lambda(&l).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn homogeneous_parts_sum_back(fi in f_index(), a in raw_element(3)) {
        let k = ctx(FS[fi]);
        let a = build(&k, a);
        let mut sum = AlgebraElement::zero(&k);
        for (d, part) in a.homogeneous_parts() {
            for &(i, j) in part.terms().keys() {
                prop_assert_eq!(i as i64 - j as i64, d);
            }
            sum = sum.checked_add(&part).unwrap();
        }
        prop_assert_eq!(sum, a);
    }

    #[test]
    fn center_recovers_polynomials_in_z(fi in prop::sample::select(vec![0usize, 1, 3]), p in poly(3)) {
        let k = ctx(FS[fi]);
        let z = AlgebraElement::z(&k);
        let mut e = AlgebraElement::zero(&k);
        let mut z_k = AlgebraElement::one(&k);
        for c in p.coeffs() {
            e = e.checked_add(&z_k.scale(c).unwrap()).unwrap();
            z_k = z_k.multiply(&z).unwrap();
        }
        prop_assert_eq!(center_membership(&e).unwrap(), Some(p));
    }

    #[test]
    fn zh_round_trip(fi in 0usize..2, coeffs in prop::collection::vec(poly(2), 1..=3)) {
        let k = ctx(FS[fi]);
        let rep = ZhRepresentation { coeffs };
        let e = rep.evaluate(&k).unwrap();
        let back = zh_membership(&e).unwrap().expect("built from C[z, h]");
        prop_assert_eq!(back.evaluate(&k).unwrap(), e);
    }

    #[test]
    fn x_fixing_automorphism_is_multiplicative(a in raw_element(2), b in raw_element(2)) {
        // (a, b) = (-1, 2) preserves f = (h - 1)^3 + 1.
        let k = ctx(&[0, 3, -3, 1]);
        let (a, b) = (build(&k, a), build(&k, b));
        let pair = (FieldElement::from_int(Q, -1), FieldElement::from_int(Q, 2));
        let apply = |e: &AlgebraElement| apply_x_fixing_automorphism((&pair.0, &pair.1), e).unwrap();
        prop_assert_eq!(apply(&a.multiply(&b).unwrap()), apply(&a).multiply(&apply(&b)).unwrap());
    }

    #[test]
    fn derivations_obey_leibniz(fi in f_index(), a in raw_element(2), b in raw_element(2), l in lambda()) {
        let k = ctx(FS[fi]);
        let d = DerivationSpec::grading(&k).scale(&l).unwrap();
        let (a, b) = (build(&k, a), build(&k, b));
        let lhs = apply_derivation(&d, &a.multiply(&b).unwrap()).unwrap();
        let rhs = apply_derivation(&d, &a)
            .unwrap()
            .multiply(&b)
            .unwrap()
            .checked_add(&a.multiply(&apply_derivation(&d, &b).unwrap()).unwrap())
            .unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn derivation_parts_sum_back(fi in f_index(), dx in raw_element(2), dy in raw_element(2), dh in raw_element(2), a in raw_element(2)) {
        let k = ctx(FS[fi]);
        let d = DerivationSpec::new(build(&k, dx), build(&k, dy), build(&k, dh)).unwrap();
        let a = build(&k, a);
        let mut sum = AlgebraElement::zero(&k);
        for part in derivation_homogeneous_parts(&d).values() {
            sum = sum.checked_add(&apply_derivation(part, &a).unwrap()).unwrap();
        }
        prop_assert_eq!(sum, apply_derivation(&d, &a).unwrap());
    }
}
