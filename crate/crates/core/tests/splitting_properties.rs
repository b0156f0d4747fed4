use num_bigint::{BigInt, BigUint};
use num_integer::Roots;

use pellkit::pell::{fundamental_solution, PellRhs};
use pellkit::splitting::{coprime_splits, perron_trichotomy, solvable_splits, split, split_quartic, splitting_scan};

fn nonsquare(d: u64) -> bool {
    d.sqrt() * d.sqrt() != d
}

fn mixed_value(x: &BigUint, y: &BigUint, k: u64, l: u64) -> BigInt {
    BigInt::from(k) * BigInt::from(x * x) - BigInt::from(l) * BigInt::from(y * y)
}

#[test]
fn split_witnesses_solve_and_match_the_unit() {
    for d in (3..=500u64).filter(|&d| nonsquare(d)) {
        let Some(s) = split(d).unwrap() else { continue };
        let w = &s.witness;
        assert_eq!(s.k * s.l, d);
        assert_eq!(mixed_value(w.x(), w.y(), s.k, s.l), BigInt::from(s.c));
        let y0 = fundamental_solution(d, PellRhs::PlusOne, false).unwrap().unwrap().y().clone();
        let uv = w.x() * w.y();
        match s.c {
            1 => assert_eq!(uv * 2u32, y0, "D = {d}"),
            _ => assert_eq!(uv, y0, "D = {d}"),
        }
    }
}

#[test]
fn quartic_witnesses_solve() {
    for d in (3..=500u64).step_by(2).filter(|&d| nonsquare(d)) {
        if let Some(s) = split_quartic(d).unwrap() {
            assert_eq!(mixed_value(s.witness.x(), s.witness.y(), s.k, s.l), BigInt::from(4));
        }
    }
}

#[test]
fn trichotomy_witnesses_solve() {
    for d in (3..=500u64).filter(|&d| nonsquare(d)) {
        for w in perron_trichotomy(d).unwrap().solvable {
            let v = BigInt::from(&w.x * &w.x) - BigInt::from(d) * BigInt::from(&w.y * &w.y);
            assert_eq!(v, BigInt::from(w.n), "D = {d}");
        }
    }
}

#[test]
fn trichotomy_holds_for_primes() {
    // The classical case: D prime, D ≠ 2.
    for d in (3..=500u64).filter(|&d| (2..d).take_while(|p| p * p <= d).all(|p| d % p != 0)) {
        assert!(perron_trichotomy(d).unwrap().holds(), "D = {d}");
    }
}

#[test]
fn solvable_splits_agree_with_brute_force() {
    for d in (3..=120u64).filter(|&d| nonsquare(d)) {
        for c in [1u8, 2] {
            if c == 2 && d % 2 == 0 {
                continue;
            }
            let found: Vec<(u64, u64)> = solvable_splits(d, c).unwrap().iter().map(|s| (s.k(), s.l())).collect();
            let y_unit = fundamental_solution(d, PellRhs::PlusOne, false).unwrap().unwrap();
            let Ok(cap) = u64::try_from(y_unit.y()) else { continue };
            // a minimal mixed solution sits below the unit
            let brute: Vec<(u64, u64)> = coprime_splits(d)
                .into_iter()
                .filter(|&(k, _)| !(c == 1 && k == 1))
                .filter(|&(k, l)| {
                    (1..=cap.min(100_000)).any(|y| {
                        let v = l as u128 * (y as u128).pow(2) + c as u128;
                        v % k as u128 == 0 && {
                            let x2 = v / k as u128;
                            x2.sqrt().pow(2) == x2
                        }
                    })
                })
                .collect();
            if cap <= 100_000 {
                assert_eq!(found, brute, "D = {d}, C = {c}");
            }
        }
    }
}

#[test]
fn scan_consistency_parts() {
    let scan = splitting_scan(500).unwrap();
    assert!(scan.odd_not_exactly_one.is_empty(), "{:?}", scan.odd_not_exactly_one);
    assert!(scan.even_without_split.is_empty(), "{:?}", scan.even_without_split);
    assert!(scan.construction_mismatches.is_empty(), "{:?}", scan.construction_mismatches);
    // 8 | D fails exactly when the fundamental y is odd
    for &d in &scan.eight_without_split {
        assert_eq!(d % 8, 0);
        let y0 = fundamental_solution(d, PellRhs::PlusOne, false).unwrap().unwrap();
        assert!(y0.y().bit(0), "D = {d}");
    }
}
