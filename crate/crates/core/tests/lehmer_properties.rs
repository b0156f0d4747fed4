use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;

use pellkit::lehmer::{closed_form, fibonacci_params, lehmer_sequences, LehmerParams};

/// Twenty admissible (R, Q): R > 0, Q ≠ 0, gcd(R, Q) = 1, R − 4Q > 0.
const PAIRS: [(i64, i64); 20] = [
    (1, -1),
    (1, -2),
    (2, -1),
    (3, -1),
    (5, 1),
    (5, -1),
    (7, 1),
    (9, 2),
    (5, -3),
    (13, 3),
    (6, -5),
    (8, 1),
    (11, -2),
    (17, 4),
    (3, -7),
    (21, 5),
    (10, -3),
    (25, 6),
    (7, -9),
    (41, 10),
];

fn params(r: i64, q: i64) -> LehmerParams {
    LehmerParams::new(r, q).unwrap()
}

#[test]
fn recurrence_matches_closed_form() {
    for (r, q) in PAIRS {
        let p = params(r, q);
        let (ps, qs) = lehmer_sequences(64, &p);
        for n in 0..=64 {
            assert_eq!(closed_form(n, &p), (ps[n].clone(), qs[n].clone()), "{p}, n = {n}");
        }
    }
}

#[test]
fn fibonacci_and_lucas_up_to_64() {
    let (ps, qs) = lehmer_sequences(64, &fibonacci_params());
    let (mut f0, mut f1) = (0u128, 1u128);
    let (mut l0, mut l1) = (2u128, 1u128);
    for n in 0..=64 {
        assert_eq!(ps[n], BigUint::from(f0), "F_{n}");
        assert_eq!(qs[n], BigUint::from(l0), "L_{n}");
        (f0, f1) = (f1, f0 + f1);
        (l0, l1) = (l1, l0 + l1);
    }
}

#[test]
fn doubling_formula() {
    for (r, q) in PAIRS {
        let p = params(r, q);
        let (ps, qs) = lehmer_sequences(64, &p);
        for m in 1..=32 {
            assert_eq!(ps[2 * m], &ps[m] * &qs[m], "{p}, m = {m}");
        }
    }
}

#[test]
fn divisibility_and_gcd_exhaustive() {
    for (r, q) in PAIRS {
        let p = params(r, q);
        let (ps, _) = lehmer_sequences(24, &p);
        for m in 1..=24usize {
            for n in 1..=24usize {
                if !ps[m].is_one() {
                    assert_eq!((&ps[n] % &ps[m]).is_zero(), n % m == 0, "{p}: P_{m} | P_{n}");
                }
                assert_eq!(ps[m].gcd(&ps[n]), ps[m.gcd(&n)], "{p}: gcd(P_{m}, P_{n})");
            }
        }
    }
}

proptest! {
    #[test]
    fn random_pairs_match_closed_form(r in 1i64..200, q in -60i64..60, n in 0usize..=64) {
        prop_assume!(q != 0 && r.gcd(&q) == 1 && r - 4 * q > 0);
        let p = params(r, q);
        let (ps, qs) = lehmer_sequences(n, &p);
        prop_assert_eq!(closed_form(n, &p), (ps[n].clone(), qs[n].clone()));
    }

    #[test]
    fn invalid_parameters_rejected(r in -20i64..20, q in -20i64..20) {
        let ok = r > 0 && q != 0 && r.gcd(&q) == 1 && r - 4 * q > 0;
        prop_assert_eq!(LehmerParams::new(r, q).is_ok(), ok);
    }
}
