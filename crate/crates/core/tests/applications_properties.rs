use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;

use pellkit::applications::{
    gp_construct, gp_scan, gp_scan_form, ljunggren_bruteforce, ljunggren_solve, ma_bruteforce, ma_solve,
    triangular, LjunggrenBounds, LjunggrenFamily, LjunggrenQuery, MaEquation, MaInstance, SignMode,
};
use pellkit::Error;

fn equation() -> impl Strategy<Value = MaEquation> {
    prop::sample::select(vec![MaEquation::UnitDelta, MaEquation::EvenDelta, MaEquation::FourConstant])
}

fn instance(s: usize) -> impl Strategy<Value = MaInstance> {
    (
        equation(),
        prop::sample::select(vec![2u64, 3, 5, 7, 11, 13]),
        1u32..=3,
        1u32..=3,
        prop::collection::vec((2u64..=15, 1u32..=3, 0u32..=2), s),
        any::<prop::sample::Index>(),
    )
        .prop_map(|(equation, p, a, b, ktr, di)| {
            let delta = *di.get(equation.deltas());
            MaInstance {
                equation,
                p,
                a,
                b,
                k: ktr.iter().map(|t| t.0).collect(),
                t: ktr.iter().map(|t| t.1).collect(),
                r: ktr.iter().map(|t| t.2).collect(),
                delta,
            }
        })
}

proptest! {
    #[test]
    fn ma_solutions_substitute_back(inst in instance(1)) {
        match ma_solve(&inst) {
            Ok(r) => {
                for s in &r.solutions {
                    prop_assert!(inst.is_solution(&BigInt::from(s.x.clone()), &BigInt::from(s.y.clone())));
                }
            }
            Err(Error::Uncovered(_)) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn ma_solve_agrees_with_search_single(inst in instance(1)) {
        if let Ok(r) = ma_solve(&inst) {
            let bound = 10_000u64;
            let cap = BigUint::from(bound);
            let solved: Vec<_> = r.pairs().into_iter().filter(|(x, y)| *x <= cap && *y <= cap).collect();
            prop_assert_eq!(solved, ma_bruteforce(&inst, bound).unwrap());
        }
    }

    #[test]
    fn ma_two_factor_instances_substitute_back(inst in instance(2)) {
        if let Ok(r) = ma_solve(&inst) {
            let brute = ma_bruteforce(&inst, 2_000).unwrap();
            for s in &r.solutions {
                prop_assert!(inst.is_solution(&BigInt::from(s.x.clone()), &BigInt::from(s.y.clone())));
            }
            // every small brute-force solution is one the closed forms give
            let pairs = r.pairs();
            for p in brute {
                prop_assert!(pairs.contains(&p), "{:?} missing from {:?}", p, pairs);
            }
        }
    }

    #[test]
    fn ljunggren_solutions_substitute_back(
        fam in prop::sample::select(LjunggrenFamily::all().to_vec()),
        c in prop::sample::select(vec![-4i64, -2, -1, 1, 2, 4]),
    ) {
        let mut q = LjunggrenQuery::new(fam, c);
        q.bounds = LjunggrenBounds { a_max: 30, x_max: 12, n_max: 15, l_max: 6, t_max: 10 };
        let r = ljunggren_solve(&q).unwrap();
        prop_assert!(r.notes.is_empty(), "{:?}", r.notes);
        for s in &r.solutions {
            prop_assert!(s.satisfies(fam));
        }
    }
}

#[test]
fn odd_power_family_agrees_on_wider_grid() {
    for c in [-4i64, -2, -1, 1, 2, 4] {
        let mut q = LjunggrenQuery::new(LjunggrenFamily::OddPower, c);
        q.bounds = LjunggrenBounds { a_max: 25, x_max: 15, n_max: 13, l_max: 1, t_max: 1 };
        assert_eq!(ljunggren_solve(&q).unwrap().solutions, ljunggren_bruteforce(&q).unwrap(), "c = {c}");
    }
}

#[test]
fn constructed_triples_are_progressions() {
    // n with T_n a square
    let mut hits = 0;
    for n in 1..=200_000u64 {
        if let Some(t) = gp_construct(n).unwrap() {
            let [a, b, c] = t.values.map(u128::from);
            assert_eq!(a * c, b * b);
            assert_eq!(t.values[0], triangular(t.indices[0]));
            hits += 1;
        }
    }
    assert!(hits >= 5);
}

#[test]
fn no_four_term_progressions_small_bounds() {
    for bound in [50, 200, 600] {
        assert!(gp_scan(bound, 4).unwrap().is_empty());
        for d in 1..=20 {
            for c in [1, 2, 4] {
                assert!(gp_scan_form(d, c, SignMode::Both, bound / 4, 4).unwrap().is_empty(), "D = {d}, C = {c}");
            }
        }
    }
}

#[test]
fn three_term_progressions_have_rational_ratio() {
    for p in gp_scan(400, 3).unwrap() {
        let v: Vec<u128> = p.values.iter().map(|&x| x as u128).collect();
        assert_eq!(v[0] * v[2], v[1] * v[1]);
        assert!(v[0] < v[1] && v[1] < v[2]);
    }
}
