//! Exact integer utilities: factorization, radicals, smooth parts,
//! square testing and the Jacobi symbol.
//!
//! Factoring is trial division by every prime below 10^6 followed by
//! Brent's variant of Pollard rho with fixed seeds, so results are fully
//! deterministic. Every prime reported in a [`Factorization`] has passed
//! [`is_prime`].

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Trial division covers every prime below this bound.
pub const TRIAL_LIMIT: u32 = 1_000_000;

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_LIMIT as usize;
        let mut composite = vec![false; n];
        let mut out = Vec::with_capacity(80_000);
        for i in 2..n {
            if !composite[i] {
                out.push(i as u32);
                let mut j = i * i;
                while j < n {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        out
    })
}

/// One prime power inside a factorization.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimePower {
    #[serde(with = "crate::dec::nat")]
    pub prime: BigUint,
    pub exponent: u32,
}

/// Prime factorization with strictly increasing primes. The value 1 has
/// an empty factor list.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factorization {
    pub factors: Vec<PrimePower>,
}

impl Factorization {
    fn from_map(map: BTreeMap<BigUint, u32>) -> Self {
        Factorization {
            factors: map
                .into_iter()
                .map(|(prime, exponent)| PrimePower { prime, exponent })
                .collect(),
        }
    }

    /// Multiplies the factorization back out.
    pub fn value(&self) -> BigUint {
        self.factors
            .iter()
            .fold(BigUint::one(), |acc, f| acc * f.prime.pow(f.exponent))
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.iter().map(|f| &f.prime)
    }

    pub fn exponent_of(&self, p: &BigUint) -> u32 {
        self.factors
            .iter()
            .find(|f| &f.prime == p)
            .map_or(0, |f| f.exponent)
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }
}

impl std::fmt::Display for Factorization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, pp) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if pp.exponent == 1 {
                write!(f, "{}", pp.prime)?;
            } else {
                write!(f, "{}^{}", pp.prime, pp.exponent)?;
            }
        }
        Ok(())
    }
}

/// How much work the rho stage may spend before giving up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorBudget {
    /// Total number of polynomial steps across all rho attempts.
    pub rho_steps: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget { rho_steps: 1 << 26 }
    }
}

/// Result of a factorization that may stop early.
///
/// `cofactor` is 1 when the factorization is complete. Otherwise it is the
/// unexamined part, which shares no prime with `factors`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialFactorization {
    pub factors: Factorization,
    pub cofactor: BigUint,
}

impl PartialFactorization {
    pub fn is_complete(&self) -> bool {
        self.cofactor.is_one()
    }
}

/// Complete prime factorization of `n`.
///
/// ```
/// use pellkit::arith::factor;
/// let f = factor(&75025u32.into()).unwrap();
/// assert_eq!(f.to_string(), "5^2 * 3001");
/// ```
pub fn factor(n: &BigUint) -> Result<Factorization> {
    factor_with_budget(n, FactorBudget::default())
}

pub fn factor_with_budget(n: &BigUint, budget: FactorBudget) -> Result<Factorization> {
    let part = factor_core(n, None, budget)?;
    debug_assert!(part.is_complete());
    Ok(part.factors)
}

/// Factors `n` but stops as soon as more than `max_distinct` distinct primes
/// are certain to divide it. Used by smoothness classification, which only
/// needs to know that a value has "too many" primes.
pub fn factor_partial(
    n: &BigUint,
    max_distinct: usize,
    budget: FactorBudget,
) -> Result<PartialFactorization> {
    factor_core(n, Some(max_distinct), budget)
}

fn factor_core(
    n: &BigUint,
    max_distinct: Option<usize>,
    budget: FactorBudget,
) -> Result<PartialFactorization> {
    if n.is_zero() {
        return domain("cannot factor 0");
    }
    let over = |map: &BTreeMap<BigUint, u32>, extra: usize| {
        max_distinct.is_some_and(|m| map.len() + extra > m)
    };
    let mut map = BTreeMap::new();
    let rest = trial_divide(n, &mut map, max_distinct);
    if over(&map, 0) {
        return Ok(PartialFactorization {
            factors: Factorization::from_map(map),
            cofactor: rest,
        });
    }
    let proven_prime_below = BigUint::from(TRIAL_LIMIT as u64 * TRIAL_LIMIT as u64);
    let mut steps_left = budget.rho_steps;
    let mut stack: Vec<(BigUint, u32)> = vec![(rest, 1)];
    while let Some((mut m, e)) = stack.pop() {
        // Strip primes already found so that pieces stay coprime to the map.
        for (p, k) in map.iter_mut() {
            if p.bits() > 20 {
                while (&m % p).is_zero() {
                    m /= p;
                    *k += e;
                }
            }
        }
        if m.is_one() {
            continue;
        }
        if m < proven_prime_below || is_prime(&m) {
            *map.entry(m).or_insert(0) += e;
            if over(&map, 0) {
                return Ok(early_exit(map, stack));
            }
            continue;
        }
        if let Some((base, k)) = perfect_power(&m) {
            stack.push((base, e * k));
            continue;
        }
        // A composite that is not a perfect power has at least two distinct
        // primes, none of them in the map yet.
        if over(&map, 2) {
            stack.push((m, e));
            return Ok(early_exit(map, stack));
        }
        match rho(&m, &mut steps_left) {
            Some(d) => {
                let other = &m / &d;
                stack.push((d, e));
                stack.push((other, e));
            }
            None => {
                return Err(Error::IncompleteFactorization {
                    value: n.clone(),
                    cofactor: m,
                })
            }
        }
    }
    Ok(PartialFactorization {
        factors: Factorization::from_map(map),
        cofactor: BigUint::one(),
    })
}

fn early_exit(map: BTreeMap<BigUint, u32>, stack: Vec<(BigUint, u32)>) -> PartialFactorization {
    let cofactor = stack
        .into_iter()
        .fold(BigUint::one(), |acc, (m, e)| acc * m.pow(e));
    PartialFactorization {
        factors: Factorization::from_map(map),
        cofactor,
    }
}

fn rem_u32(n: &BigUint, p: u32) -> u32 {
    let p = p as u128;
    n.iter_u64_digits()
        .rev()
        .fold(0u128, |r, d| ((r << 64) | d as u128) % p) as u32
}

fn trial_divide(
    n: &BigUint,
    map: &mut BTreeMap<BigUint, u32>,
    max_distinct: Option<usize>,
) -> BigUint {
    let primes = small_primes();
    let mut rest = n.clone();
    let mut i = 0;
    while i < primes.len() {
        if let Some(v) = rest.to_u128() {
            return BigUint::from(trial_divide_u128(v, &primes[i..], map, max_distinct));
        }
        let p = primes[i];
        if rem_u32(&rest, p) == 0 {
            let mut e = 0;
            while rem_u32(&rest, p) == 0 {
                rest /= p;
                e += 1;
            }
            map.insert(BigUint::from(p), e);
            if max_distinct.is_some_and(|m| map.len() > m) {
                return rest;
            }
        }
        i += 1;
    }
    rest
}

fn trial_divide_u128(
    mut v: u128,
    primes: &[u32],
    map: &mut BTreeMap<BigUint, u32>,
    max_distinct: Option<usize>,
) -> u128 {
    for &p in primes {
        let p = p as u128;
        if p * p > v {
            break;
        }
        if v % p == 0 {
            let mut e = 0;
            while v % p == 0 {
                v /= p;
                e += 1;
            }
            map.insert(BigUint::from(p), e);
            if max_distinct.is_some_and(|m| map.len() > m) {
                return v;
            }
        }
    }
    // Whatever is left is 1, a prime below the square of the last tried
    // prime, or a number with no factor below TRIAL_LIMIT.
    if v > 1 && v < (TRIAL_LIMIT as u128) * (TRIAL_LIMIT as u128) {
        *map.entry(BigUint::from(v)).or_insert(0) += 1;
        return 1;
    }
    v
}

/// Returns `(b, k)` with `b^k = n` and `k >= 2` maximal over small k, if any.
fn perfect_power(n: &BigUint) -> Option<(BigUint, u32)> {
    // Every prime factor exceeds TRIAL_LIMIT (> 2^19), so k <= bits/19.
    let max_k = (n.bits() / 19) as u32;
    for k in (2..=max_k.max(2)).rev() {
        let r = n.nth_root(k);
        if r.pow(k) == *n {
            return Some((r, k));
        }
    }
    None
}

/// Miller-Rabin witnesses. The first twelve primes are a deterministic
/// witness set for every n < 3.18 * 10^23, which covers all 64-bit values;
/// above that the test is probabilistic with these fixed rounds.
const WITNESSES: [u32; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

/// Primality test (deterministic below 3.18 * 10^23).
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(v) = n.to_u64() {
        return is_prime_u64(v);
    }
    for &p in &WITNESSES {
        if rem_u32(n, p) == 0 {
            return false;
        }
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for &a in &WITNESSES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    r
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES[..12] {
        let p = p as u64;
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES[..12] {
        let mut x = powmod(a as u64, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Finds a nontrivial divisor of the odd composite `n`.
fn rho(n: &BigUint, steps_left: &mut u64) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    if let Some(v) = n.to_u64() {
        return rho_u64(v, steps_left).map(BigUint::from);
    }
    rho_big(n, steps_left)
}

const BATCH: u64 = 128;

fn rho_u64(n: u64, steps_left: &mut u64) -> Option<u64> {
    for c in 1..u64::MAX {
        let f = |x: u64| ((x as u128 * x as u128 + c as u128) % n as u128) as u64;
        let (mut y, mut r, mut q, mut g) = (2u64, 1u64, 1u64, 1u64);
        let mut x = y;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                let batch = BATCH.min(r - k);
                for _ in 0..batch {
                    y = f(y);
                    q = mulmod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += batch;
            }
            *steps_left = steps_left.checked_sub(2 * r)?;
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return Some(g);
        }
    }
    None
}

fn rho_big(n: &BigUint, steps_left: &mut u64) -> Option<BigUint> {
    let one = BigUint::one();
    for c in 1u32.. {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut q = one.clone();
        let mut g = one.clone();
        let mut r = 1u64;
        let diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                let batch = BATCH.min(r - k);
                for _ in 0..batch {
                    y = f(&y);
                    q = (q * diff(&x, &y)) % n;
                }
                g = q.gcd(n);
                k += batch;
            }
            *steps_left = steps_left.checked_sub(2 * r)?;
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                g = diff(&x, &ys).gcd(n);
                if g > one {
                    break;
                }
            }
        }
        if &g != n {
            return Some(g);
        }
    }
    None
}

/// Product of the distinct primes dividing `n`.
pub fn radical(n: &BigUint) -> Result<BigUint> {
    Ok(factor(n)?.primes().product())
}

/// Splits `n` into the part supported on primes of `base` and the rest.
///
/// Needs no factorization: repeated gcds against `base` peel off every prime
/// the two share.
pub fn smooth_part(n: &BigUint, base: &BigUint) -> Result<(BigUint, BigUint)> {
    if n.is_zero() {
        return domain("smooth_part of 0");
    }
    if base.is_zero() {
        return domain("smooth_part with base 0");
    }
    let mut smooth = BigUint::one();
    let mut rest = n.clone();
    let mut g = rest.gcd(base);
    while !g.is_one() {
        rest /= &g;
        smooth *= &g;
        g = rest.gcd(&g);
    }
    Ok((smooth, rest))
}

/// Exact square root when `n` is a perfect square.
pub fn is_perfect_square(n: &BigUint) -> Option<BigUint> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Signed variant; negative values are never squares.
pub fn is_perfect_square_int(n: &BigInt) -> Option<BigUint> {
    n.to_biguint().and_then(|u| is_perfect_square(&u))
}

/// Jacobi symbol (a | n) for odd positive n.
pub fn jacobi(a: &BigInt, n: &BigUint) -> Result<i8> {
    if n.is_zero() || n.is_even() {
        return domain(format!("jacobi symbol needs an odd positive modulus, got {n}"));
    }
    let mut n = n.clone();
    let mut a = a.mod_floor(&BigInt::from(n.clone())).to_biguint().unwrap();
    let mut sign = 1i8;
    let three = BigUint::from(3u32);
    let five = BigUint::from(5u32);
    let eight = BigUint::from(8u32);
    let four = BigUint::from(4u32);
    while !a.is_zero() {
        let tz = a.trailing_zeros().unwrap_or(0);
        a >>= tz;
        let r8 = &n % &eight;
        if tz % 2 == 1 && (r8 == three || r8 == five) {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut n);
        if &a % &four == three && &n % &four == three {
            sign = -sign;
        }
        a %= &n;
    }
    Ok(if n.is_one() { sign } else { 0 })
}

/// Greatest common divisor with gcd(0, 0) = 0.
pub fn gcd(a: &BigUint, b: &BigUint) -> BigUint {
    a.gcd(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn pairs(f: &Factorization) -> Vec<(u64, u32)> {
        f.factors
            .iter()
            .map(|p| (p.prime.to_u64().unwrap(), p.exponent))
            .collect()
    }

    #[test]
    fn factor_examples() {
        assert_eq!(pairs(&factor(&n(75025)).unwrap()), vec![(5, 2), (3001, 1)]);
        assert!(factor(&n(1)).unwrap().is_empty());
        assert_eq!(
            pairs(&factor(&n(832040)).unwrap()),
            vec![(2, 3), (5, 1), (11, 1), (31, 1), (61, 1)]
        );
        assert!(matches!(factor(&n(0)), Err(Error::Domain(_))));
    }

    #[test]
    fn factor_beyond_trial_division() {
        // Two primes above 10^6 and a prime square above 10^6.
        let p = n(1_000_003);
        let q = n(2_147_483_647);
        let v = &p * &q * &q * n(12);
        let f = factor(&v).unwrap();
        assert_eq!(f.value(), v);
        assert_eq!(f.exponent_of(&q), 2);
        assert!(f.primes().all(is_prime));

        let big: BigUint = "158414167964045700001".parse().unwrap();
        let f = factor(&(&big * n(3001))).unwrap();
        assert_eq!(f.value(), &big * n(3001));
        assert!(f.primes().all(is_prime));
    }

    #[test]
    fn exhausted_budget_is_an_error() {
        let p = n(1_000_003);
        let q = n(1_000_033);
        let err = factor_with_budget(&(&p * &q), FactorBudget { rho_steps: 0 }).unwrap_err();
        assert!(matches!(err, Error::IncompleteFactorization { .. }));
    }

    #[test]
    fn partial_stops_early() {
        let v = n(2 * 3 * 5 * 7);
        let part = factor_partial(&v, 2, FactorBudget::default()).unwrap();
        assert!(part.factors.len() > 2);
        assert_eq!(part.factors.value() * &part.cofactor, v);
    }

    #[test]
    fn radical_examples() {
        assert_eq!(radical(&n(1)).unwrap(), n(1));
        assert_eq!(radical(&n(12)).unwrap(), n(6));
        assert_eq!(radical(&n(75025)).unwrap(), n(15005));
    }

    #[test]
    fn smooth_part_examples() {
        assert_eq!(smooth_part(&n(55), &n(5)).unwrap(), (n(5), n(11)));
        assert_eq!(smooth_part(&n(8), &n(2)).unwrap(), (n(8), n(1)));
        assert_eq!(smooth_part(&n(15), &n(30)).unwrap(), (n(15), n(1)));
    }

    #[test]
    fn square_examples() {
        assert_eq!(is_perfect_square(&n(121)), Some(n(11)));
        assert_eq!(is_perfect_square(&n(2)), None);
        assert_eq!(is_perfect_square(&n(0)), Some(n(0)));
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi(&BigInt::from(2), &n(3)).unwrap(), -1);
        assert_eq!(jacobi(&BigInt::from(-17), &n(1)).unwrap(), 1);
        assert_eq!(jacobi(&BigInt::from(5), &n(11)).unwrap(), 1);
        assert!(jacobi(&BigInt::from(5), &n(12)).is_err());
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(&n(55), &n(610)), n(5));
        assert_eq!(gcd(&n(0), &n(7)), n(7));
        assert_eq!(gcd(&n(0), &n(0)), n(0));
    }
}
