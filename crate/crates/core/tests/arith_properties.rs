use std::collections::HashSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::One;
use proptest::prelude::*;
use rayon::prelude::*;

use pellkit::arith::{factor, is_perfect_square, is_prime_u64, jacobi, radical, smooth_part};

fn nat(v: u64) -> BigUint {
    BigUint::from(v)
}

fn trial_is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|p| p * p <= n).all(|p| n % p != 0)
}

#[test]
fn factor_reconstructs_every_n_up_to_a_million() {
    let bad: Vec<u64> = (1..=1_000_000u64)
        .into_par_iter()
        .filter(|&n| {
            let f = factor(&nat(n)).unwrap();
            let ordered = f.factors.windows(2).all(|w| w[0].prime < w[1].prime);
            f.value() != nat(n) || !ordered || f.factors.iter().any(|pp| pp.exponent == 0)
        })
        .collect();
    assert!(bad.is_empty(), "{:?}", &bad[..bad.len().min(10)]);
}

#[test]
fn factor_primes_are_prime_below_ten_thousand() {
    for n in 2..10_000u64 {
        for p in factor(&nat(n)).unwrap().primes() {
            let p = u64::try_from(p).unwrap();
            assert!(trial_is_prime(p), "{n}: {p}");
        }
    }
}

#[test]
fn miller_rabin_matches_trial_division() {
    for n in 0..20_000u64 {
        assert_eq!(is_prime_u64(n), trial_is_prime(n), "{n}");
    }
}

#[test]
fn jacobi_matches_enumerated_squares() {
    for p in (3..1000u64).filter(|&p| trial_is_prime(p)) {
        let squares: HashSet<u64> = (1..p).map(|x| x * x % p).collect();
        for a in 0..p {
            let expected = if a == 0 {
                0
            } else if squares.contains(&a) {
                1
            } else {
                -1
            };
            assert_eq!(jacobi(&BigInt::from(a), &nat(p)).unwrap(), expected, "({a} | {p})");
        }
    }
}

#[test]
fn squares_and_their_successors() {
    for r in 1..=100_000u64 {
        assert_eq!(is_perfect_square(&nat(r * r)), Some(nat(r)));
        assert_eq!(is_perfect_square(&nat(r * r + 1)), None, "{r}");
    }
    assert_eq!(is_perfect_square(&nat(0)), Some(nat(0)));
}

proptest! {
    #[test]
    fn radical_is_squarefree_divisor(n in 1u64..10_000_000) {
        let r = radical(&nat(n)).unwrap();
        prop_assert!((nat(n) % &r) == BigUint::from(0u32));
        for p in factor(&r).unwrap().factors {
            prop_assert_eq!(p.exponent, 1);
        }
    }

    #[test]
    fn smooth_part_recombines(n in 1u64..1_000_000_000, b in 1u64..100_000) {
        let (smooth, rest) = smooth_part(&nat(n), &nat(b)).unwrap();
        prop_assert_eq!(&smooth * &rest, nat(n));
        prop_assert!(rest.gcd(&radical(&nat(b)).unwrap()).is_one());
        // every prime of the smooth part divides b
        for p in factor(&smooth).unwrap().primes() {
            prop_assert!((nat(b) % p) == BigUint::from(0u32));
        }
    }

    #[test]
    fn semiprimes_beyond_trial_division(i in 0usize..40, j in 0usize..40) {
        // primes just above the trial-division limit force the rho path
        let primes: Vec<u64> = (1_000_003u64..).filter(|&p| is_prime_u64(p)).take(40).collect();
        let (p, q) = (primes[i], primes[j]);
        let n = nat(p) * nat(q);
        let f = factor(&n).unwrap();
        prop_assert_eq!(f.value(), n);
        let mut expected = vec![nat(p.min(q)), nat(p.max(q))];
        expected.dedup();
        prop_assert_eq!(f.primes().cloned().collect::<Vec<_>>(), expected);
    }
}
