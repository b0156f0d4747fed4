use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;

use pellkit::pell::minimal_solution;
use pellkit::quadring::{mixed_mul, mixed_pow, quad_mul, quad_norm, quad_pow, QuadInt, RingElement};

const RADICANDS: &[u64] = &[2, 3, 5, 6, 7, 13, 17, 21, 29, 41, 61, 85];

fn element() -> impl Strategy<Value = QuadInt> {
    (prop::sample::select(RADICANDS), -500i64..500, -500i64..500, any::<bool>()).prop_map(|(d, u, v, half)| {
        if half && d % 4 == 1 {
            // same parity keeps (u + v√d)/2 in the ring
            QuadInt::new(2 * u + 1, 2 * v + 1, d, 2).unwrap()
        } else {
            QuadInt::new(u, v, d, 1).unwrap()
        }
    })
}

fn mixed_params() -> Vec<(u64, u64, u8)> {
    let mut out = Vec::new();
    for d in 2..=100u64 {
        for k in 2..=d {
            if d % k != 0 {
                continue;
            }
            let l = d / k;
            for c in [1u8, 2, 4] {
                if let Ok(Some(_)) = minimal_solution(k, l, c) {
                    out.push((k, l, c));
                }
            }
        }
    }
    out
}

fn same_radicand_pair() -> impl Strategy<Value = (QuadInt, QuadInt)> {
    element().prop_flat_map(|p| {
        let d = p.d();
        ((-500i64..500), (-500i64..500)).prop_map(move |(u, v)| (p.clone(), QuadInt::new(u, v, d, 1).unwrap()))
    })
}

proptest! {
    #[test]
    fn norm_is_multiplicative((p, q) in same_radicand_pair()) {
        let pq = quad_mul(&p, &q).unwrap();
        prop_assert_eq!(quad_norm(&pq).unwrap(), quad_norm(&p).unwrap() * quad_norm(&q).unwrap());
    }

    #[test]
    fn powers_add(p in element(), a in 0u64..=64, b in 0u64..=64) {
        let lhs = quad_pow(&p, a + b).unwrap();
        let rhs = quad_mul(&quad_pow(&p, a).unwrap(), &quad_pow(&p, b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn conjugate_product_is_norm(p in element()) {
        let n = quad_norm(&p).unwrap();
        let prod = quad_mul(&p, &p.conj()).unwrap();
        prop_assert_eq!(prod, QuadInt::new(n, 0, p.d(), 1).unwrap());
    }
}

#[test]
fn mixed_powers_stay_on_the_equation() {
    for (k, l, c) in mixed_params() {
        let s = minimal_solution(k, l, c).unwrap().unwrap();
        for n in (1..=25u64).step_by(2) {
            let p = mixed_pow(&s, n).unwrap();
            let lhs = BigInt::from(k) * BigInt::from(p.x() * p.x()) - BigInt::from(l) * BigInt::from(p.y() * p.y());
            assert_eq!(lhs, BigInt::from(c), "({k}, {l}, {c}) power {n}");
        }
    }
}

#[test]
fn squares_of_mixed_solutions_have_norm_one() {
    for (k, l, c) in mixed_params() {
        let s = minimal_solution(k, l, c).unwrap().unwrap();
        let RingElement::Pure(sq) = mixed_mul(&s, &RingElement::Mixed(s.clone())).unwrap() else {
            panic!("mixed × mixed must be pure");
        };
        assert_eq!(sq.d(), k * l);
        assert_eq!(quad_norm(&sq).unwrap(), BigInt::from(1), "({k}, {l}, {c})");
        assert_eq!(sq, s.square().unwrap());
    }
}

#[test]
fn mixed_square_values() {
    // (√5 + 1)/2 squared is (3 + √5)/2
    let s = minimal_solution(5, 1, 4).unwrap().unwrap();
    assert_eq!((s.x(), s.y()), (&BigUint::from(1u32), &BigUint::from(1u32)));
    assert_eq!(s.square().unwrap(), QuadInt::new(3, 1, 5, 2).unwrap());
}
