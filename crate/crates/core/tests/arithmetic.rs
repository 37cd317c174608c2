use num_bigint::BigInt;
use proptest::prelude::*;

use reciprocity_core::arith::{factorize, int, is_prime, jacobi, legendre, ratio, square_class, valuation, Place};
use reciprocity_core::cyclotomic::{Cyclotomic, Mu8};

fn small_primes() -> Vec<u64> {
    (3..200).filter(|&n| is_prime(n)).collect()
}

fn element(order: u64, terms: &[(i64, i64)]) -> Cyclotomic {
    Cyclotomic::from_powers(order, terms.iter().map(|&(k, c)| (k, BigInt::from(c)))).unwrap()
}

fn terms() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((0i64..240, -9i64..=9), 0..6)
}

proptest! {
    #[test]
    fn legendre_is_multiplicative(a in -500i64..500, b in -500i64..500, i in 0usize..45) {
        let p = small_primes()[i];
        prop_assume!(a % p as i64 != 0 && b % p as i64 != 0);
        prop_assert_eq!(legendre(a * b, p).unwrap(), legendre(a, p).unwrap() * legendre(b, p).unwrap());
    }

    #[test]
    fn jacobi_is_product_over_factorization(a in -1000i64..1000, c in 0u64..2000) {
        let c = 2 * c + 1;
        let expected: i8 = factorize(c)
            .into_iter()
            .map(|(p, e)| legendre(a, p).unwrap().pow(e))
            .product();
        prop_assert_eq!(jacobi(a, c).unwrap(), expected);
    }

    #[test]
    fn valuation_is_additive(
        (an, ad) in (1i64..10_000, 1i64..10_000),
        (bn, bd) in (-10_000i64..-1, 1i64..10_000),
        i in 0usize..10,
    ) {
        let p = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29][i];
        let (a, b) = (ratio(an, ad), ratio(bn, bd));
        prop_assert_eq!(
            valuation(&(&a * &b), p).unwrap(),
            valuation(&a, p).unwrap() + valuation(&b, p).unwrap()
        );
    }

    #[test]
    fn ring_axioms(n in 1u64..=120, x in terms(), y in terms(), z in terms()) {
        let (x, y, z) = (element(n, &x), element(n, &y), element(n, &z));
        prop_assert_eq!((&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &x * &y + &x * &z);
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert!((&x - &x).is_zero());
    }

    #[test]
    fn mixed_orders_embed_consistently(n in 1u64..=40, m in 1u64..=40, x in terms(), y in terms()) {
        let (x, y) = (element(n, &x), element(m, &y));
        let l = num_integer::lcm(n, m);
        let product = &x * &y;
        prop_assert_eq!(product.order(), l);
        prop_assert_eq!(product, x.embed(l).unwrap() * y.embed(l).unwrap());
    }

    #[test]
    fn embedding_commutes_with_evaluation(n in 1u64..=60, k in 1u64..=4, x in terms()) {
        let x = element(n, &x);
        let d = (x.embed(n * k).unwrap().approx_complex() - x.approx_complex()).norm();
        prop_assert!(d < 1e-9, "{}", d);
    }

    #[test]
    fn conjugation_is_a_ring_automorphism(n in 1u64..=60, x in terms(), y in terms()) {
        let (x, y) = (element(n, &x), element(n, &y));
        prop_assert_eq!((&x * &y).conjugate(), x.conjugate() * y.conjugate());
        let d = (x.conjugate().approx_complex() - x.approx_complex().conj()).norm();
        prop_assert!(d < 1e-9);
    }
}

#[test]
fn square_class_ignores_square_factors() {
    let mut places = Place::up_to(31);
    places.truncate(8);
    for v in places {
        for a in (-30i64..=30).filter(|&a| a != 0) {
            for c in (-30i64..=30).filter(|&c| c != 0) {
                let scaled = ratio(a * c * c, 1);
                assert_eq!(square_class(&scaled, v).unwrap(), square_class(&int(a), v).unwrap(), "a={a} c={c} v={v}");
                let divided = ratio(a, c * c);
                assert_eq!(square_class(&divided, v).unwrap(), square_class(&int(a), v).unwrap());
            }
        }
    }
}

#[test]
fn full_period_sums_vanish() {
    for n in 2..=120u64 {
        let s = (0..n as i64).fold(Cyclotomic::zero(n).unwrap(), |acc, k| acc + Cyclotomic::root_of_unity(n, k).unwrap());
        assert!(s.is_zero(), "n={n}");
    }
}

#[test]
fn mu8_embedding_is_injective_and_multiplicative() {
    let all: Vec<Mu8> = Mu8::all().collect();
    for (i, x) in all.iter().enumerate() {
        for (j, y) in all.iter().enumerate() {
            assert_eq!((*x * *y).to_cyclotomic(), x.to_cyclotomic() * y.to_cyclotomic());
            assert_eq!(i == j, x.to_cyclotomic() == y.to_cyclotomic());
        }
    }
}
