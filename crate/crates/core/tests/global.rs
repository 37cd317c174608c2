use std::time::Duration;

use num_integer::Integer;
use proptest::prelude::*;

use reciprocity_core::arith::{int, is_prime, ratio, Place, Rational};
use reciprocity_core::cyclotomic::{Cyclotomic, Mu8};
use reciprocity_core::engine::{
    global_defect_product, hilbert_product, local_defects, local_symbols, quadratic_reciprocity, run_suite, Failure,
    SweepConfig, VerificationReport,
};
use reciprocity_core::finite::{gauss_sum, transport_coefficient};
use reciprocity_core::hilbert::{hilbert, support};
use reciprocity_core::weil::{hasse_invariant, DiagonalForm};

fn primes_below(n: u64) -> Vec<u64> {
    (3..n).filter(|&p| is_prime(p)).collect()
}

fn rational() -> impl Strategy<Value = Rational> {
    (-2000i64..2000, 1i64..500).prop_filter_map("nonzero", |(n, d)| (n != 0).then(|| ratio(n, d)))
}

fn report() -> impl Strategy<Value = VerificationReport> {
    (0u64..100, prop::collection::vec("[a-d]{1,3}", 0..4), 0u64..50).prop_map(|(instances, inputs, ms)| {
        VerificationReport {
            law: "law".into(),
            instances,
            failures: {
                let mut f: Vec<Failure> = inputs.into_iter().map(|i| Failure::new(i, 1, -1)).collect();
                f.sort();
                f
            },
            elapsed: Duration::from_millis(ms),
        }
    })
}

proptest! {
    #[test]
    fn gauss_sum_substitution_invariance(c in 0u64..40, a in -200i64..200, u in 1i64..200) {
        let c = 2 * c + 1;
        prop_assume!(u.unsigned_abs().gcd(&c) == 1);
        let moved = (u * u % c as i64) * a;
        prop_assert_eq!(gauss_sum(moved, c).unwrap(), gauss_sum(a, c).unwrap());
    }

    #[test]
    fn gauss_sum_norm(c in 0u64..50, a in -500i64..500) {
        let c = 2 * c + 1;
        prop_assume!(a.unsigned_abs().gcd(&c) == 1);
        let g = gauss_sum(a, c).unwrap();
        prop_assert_eq!(&g.conjugate() * &g, Cyclotomic::from_integer(c, c as i64).unwrap());
    }

    #[test]
    fn transport_matches_gauss_sum_for_any_numerator(c in 0u64..12, a in -1000i64..1000) {
        let c = 2 * c + 1;
        prop_assume!(a.unsigned_abs().gcd(&c) == 1);
        prop_assert_eq!(transport_coefficient(a, c).unwrap(), gauss_sum(a, c).unwrap());
    }

    #[test]
    fn global_products_are_trivial(a in rational(), b in rational()) {
        prop_assert_eq!(hilbert_product(&a, &b).unwrap(), 1);
        prop_assert_eq!(global_defect_product(&a, &b).unwrap(), Mu8::ONE);
        let defects = local_defects(&a, &b).unwrap();
        let symbols = local_symbols(&a, &b).unwrap();
        prop_assert_eq!(defects.len(), symbols.len());
        for ((v, d), (w, s)) in defects.into_iter().zip(symbols) {
            prop_assert_eq!(v, w);
            prop_assert_eq!(d, Mu8::from_sign(s));
        }
    }

    #[test]
    fn symbols_vanish_away_from_2pq(
        i in 0usize..45,
        j in 0usize..45,
        ells in prop::collection::vec(0usize..160, 20),
    ) {
        let primes = primes_below(1000);
        let (p, q) = (primes[i], primes[j]);
        prop_assume!(p != q);
        let record = quadratic_reciprocity(p, q).unwrap();
        prop_assert!(record.consistent());
        let (a, b) = (int(p as i64), int(q as i64));
        for k in ells {
            let ell = primes[k];
            if ell == p || ell == q {
                continue;
            }
            prop_assert_eq!(hilbert(&a, &b, Place::finite(ell).unwrap()).unwrap(), 1, "ell={}", ell);
        }
    }

    #[test]
    fn hasse_invariants_multiply_to_one(
        coeffs in prop::collection::vec((-60i64..=60).prop_filter("nonzero", |x| *x != 0), 1..=4),
    ) {
        let q = DiagonalForm::from_integers(&coeffs).unwrap();
        let mut places: Vec<Place> = Vec::new();
        for a in q.coefficients() {
            for b in q.coefficients() {
                places.extend(support(a, b).unwrap());
            }
        }
        places.sort();
        places.dedup();
        let product: i8 = places.iter().map(|&v| hasse_invariant(&q, v)).product();
        prop_assert_eq!(product, 1, "{}", q);
    }

    #[test]
    fn report_merge_is_associative_and_commutative(x in report(), y in report(), z in report()) {
        let left = x.clone().merge(y.clone()).merge(z.clone());
        let right = x.clone().merge(y.clone().merge(z.clone()));
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(x.clone().merge(y.clone()), y.merge(x));
        prop_assert_eq!(left.passed(), left.failures.is_empty());
    }
}

#[test]
fn sweeps_do_not_depend_on_thread_count() {
    for law in ["bridge", "cocycle", "gauss-law", "qr"] {
        let one = run_suite(law, SweepConfig { max: Some(20), jobs: Some(1) }).unwrap();
        let many = run_suite(law, SweepConfig { max: Some(20), jobs: Some(4) }).unwrap();
        assert_eq!((one.instances, &one.failures), (many.instances, &many.failures), "{law}");
        assert!(one.passed(), "{one}");
    }
}

#[test]
fn qr_instance_count_is_ordered_pairs() {
    let r = run_suite("qr", SweepConfig { max: Some(100), jobs: None }).unwrap();
    let n = primes_below(100).len() as u64;
    assert_eq!(r.instances, n * (n - 1));
    assert!(r.passed());
}
