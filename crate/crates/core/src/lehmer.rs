//! Lehmer sequences Pₙ(R, Q) and the associated sequences Qₙ(R, Q).
//!
//! With α, β the roots of x² − √R·x + Q, the sequences are split by parity:
//! Pₙ = (αⁿ − βⁿ)/(α − β) for odd n and (αⁿ − βⁿ)/(α² − β²) for even n;
//! Qₙ = (αⁿ + βⁿ)/(α + β) for odd n and αⁿ + βⁿ for even n. Using
//! α + β = √R and αβ = Q, both satisfy a recurrence whose multiplier
//! alternates between R and 1:
//!
//! ```text
//! P₀ = 0, P₁ = 1, Pₙ = R·Pₙ₋₁ − Q·Pₙ₋₂ (n odd),  Pₙ₋₁ − Q·Pₙ₋₂ (n even)
//! Q₀ = 2, Q₁ = 1, Qₙ = Qₙ₋₁ − Q·Qₙ₋₂ (n odd),    R·Qₙ₋₁ − Q·Qₙ₋₂ (n even)
//! ```

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::is_perfect_square;
use crate::error::{domain, Result};
use crate::quadring::MixedSolution;

/// Parameters (R, Q) with R > 0, Q ≠ 0, gcd(R, Q) = 1 and R − 4Q > 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ParamsRepr", into = "ParamsRepr")]
pub struct LehmerParams {
    r: BigInt,
    q: BigInt,
}

#[derive(Serialize, Deserialize)]
struct ParamsRepr {
    #[serde(with = "crate::dec::int")]
    r: BigInt,
    #[serde(with = "crate::dec::int")]
    q: BigInt,
}

impl TryFrom<ParamsRepr> for LehmerParams {
    type Error = crate::Error;
    fn try_from(p: ParamsRepr) -> Result<Self> {
        LehmerParams::new(p.r, p.q)
    }
}

impl From<LehmerParams> for ParamsRepr {
    fn from(p: LehmerParams) -> Self {
        ParamsRepr { r: p.r, q: p.q }
    }
}

impl LehmerParams {
    pub fn new(r: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self> {
        let (r, q) = (r.into(), q.into());
        if !r.is_positive() {
            return domain(format!("R must be positive, got {r}"));
        }
        if q.is_zero() {
            return domain("Q must be nonzero");
        }
        if !r.gcd(&q).is_one() {
            return domain(format!("R = {r} and Q = {q} are not coprime"));
        }
        if !(&r - BigInt::from(4) * &q).is_positive() {
            return domain(format!("R − 4Q must be positive, got R = {r}, Q = {q}"));
        }
        Ok(LehmerParams { r, q })
    }

    /// The parameters attached to the minimal solution of kx² − ly² = C:
    /// R = (α + β)² = 4kx₁²/C and Q = αβ = 1. The n-th solution is then
    /// (x₁·Qₙ, y₁·Pₙ) for odd n.
    pub fn for_mixed(minimal: &MixedSolution) -> Result<Self> {
        let x = BigInt::from(minimal.x().clone());
        let num = BigInt::from(4 * minimal.k()) * &x * &x;
        let (r, rem) = num.div_rem(&BigInt::from(minimal.c()));
        if !rem.is_zero() {
            return domain("4kx₁² is not divisible by C");
        }
        LehmerParams::new(r, 1)
    }

    pub fn r(&self) -> &BigInt {
        &self.r
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    /// R − 4Q, the discriminant (α − β)².
    pub fn discriminant(&self) -> BigInt {
        &self.r - BigInt::from(4) * &self.q
    }
}

impl std::fmt::Display for LehmerParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(R, Q) = ({}, {})", self.r, self.q)
    }
}

/// P₀..=P_n and Q₀..=Q_n.
pub fn lehmer_sequences(n: usize, p: &LehmerParams) -> (Vec<BigUint>, Vec<BigUint>) {
    let mut ps: Vec<BigInt> = vec![BigInt::zero(), BigInt::one()];
    let mut qs: Vec<BigInt> = vec![BigInt::from(2), BigInt::one()];
    for i in 2..=n {
        let (p1, p2) = (&ps[i - 1], &ps[i - 2]);
        let (q1, q2) = (&qs[i - 1], &qs[i - 2]);
        let (np, nq) = if i % 2 == 1 {
            (&p.r * p1 - &p.q * p2, q1 - &p.q * q2)
        } else {
            (p1 - &p.q * p2, &p.r * q1 - &p.q * q2)
        };
        ps.push(np);
        qs.push(nq);
    }
    ps.truncate(n + 1);
    qs.truncate(n + 1);
    let nat = |v: Vec<BigInt>| -> Vec<BigUint> {
        v.into_iter()
            .map(|x| x.to_biguint().expect("Lehmer values are nonnegative"))
            .collect()
    };
    (nat(ps), nat(qs))
}

pub fn lehmer_p(n: usize, p: &LehmerParams) -> BigUint {
    lehmer_sequences(n, p).0.pop().unwrap()
}

pub fn lehmer_q(n: usize, p: &LehmerParams) -> BigUint {
    lehmer_sequences(n, p).1.pop().unwrap()
}

/// Verdict on one claim of the divisibility proposition for a concrete pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimVerdict {
    pub claim: u8,
    /// The claim exactly as printed. `None` when it does not apply.
    pub printed: Option<bool>,
    /// The corrected reading (see `note`). `None` when it does not apply.
    pub relaxed: Option<bool>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prop21Report {
    pub m: usize,
    pub n: usize,
    pub params: LehmerParams,
    pub prime: Option<u64>,
    pub claims: Vec<ClaimVerdict>,
}

impl Prop21Report {
    pub fn claim(&self, id: u8) -> &ClaimVerdict {
        &self.claims[id as usize - 1]
    }

    pub fn printed_hold(&self, ids: &[u8]) -> bool {
        ids.iter().all(|&i| self.claim(i).printed != Some(false))
    }

    pub fn relaxed_hold(&self, ids: &[u8]) -> bool {
        ids.iter().all(|&i| self.claim(i).relaxed != Some(false))
    }
}

fn ord(mut v: BigUint, p: u64) -> u32 {
    let mut e = 0;
    while !v.is_zero() && (&v % p).is_zero() {
        v /= p;
        e += 1;
    }
    e
}

/// Evaluates the seven divisibility claims on (m, n).
///
/// Claims, with their corrected readings:
/// 1. P_m ≠ 1 ⇒ (P_m | P_n ⟺ m | n).
/// 2. Q_m | Q_n ⟺ n/m is an odd integer. Fails when Q_m ∈ {1, 2}; the
///    relaxed reading requires Q_m > 2.
/// 3. gcd(P_m, P_n) = P_d (printed with an undefined U_d).
/// 4. gcd(Q_m, Q_n) = Q_d if m/d and n/d are odd, else 1. When R and Q are
///    both odd every Q_n with 3 | n is even, so the relaxed reading allows
///    an extra factor 2.
/// 5. gcd(P_m, Q_n) = Q_d if m/d is even, else 1. Same factor 2 caveat.
/// 6. P_2m = 2·P_m·Q_m as printed; the sequences satisfy P_2m = P_m·Q_m.
/// 7. ord_p(P_mp / P_m) is 1 if p | P_m and 0 otherwise. Only evaluated
///    when `prime` is given; the relaxed reading requires p odd and
///    p ∤ R(R − 4Q).
pub fn prop21_check(m: usize, n: usize, params: &LehmerParams, prime: Option<u64>) -> Result<Prop21Report> {
    if m == 0 || n == 0 {
        return domain("m and n must be positive");
    }
    if let Some(p) = prime {
        if !crate::arith::is_prime_u64(p) {
            return domain(format!("{p} is not prime"));
        }
    }
    let top = [2 * m, n, m * prime.unwrap_or(1) as usize].into_iter().max().unwrap();
    let (ps, qs) = lehmer_sequences(top, params);
    let d = m.gcd(&n);
    let divides = |a: &BigUint, b: &BigUint| !a.is_zero() && (b % a).is_zero();
    let within_two = |g: &BigUint, want: &BigUint| g == want || *g == want * 2u32;
    let mut claims = Vec::with_capacity(7);

    let c1 = (!ps[m].is_one()).then(|| divides(&ps[m], &ps[n]) == (n % m == 0));
    claims.push(ClaimVerdict {
        claim: 1,
        printed: c1,
        relaxed: c1,
        note: "P_m | P_n iff m | n, for P_m ≠ 1".into(),
    });

    let lhs = divides(&qs[m], &qs[n]);
    let rhs = n % m == 0 && (n / m) % 2 == 1;
    claims.push(ClaimVerdict {
        claim: 2,
        printed: Some(lhs == rhs),
        relaxed: (qs[m] > BigUint::from(2u32)).then_some(lhs == rhs),
        note: "Q_m | Q_n iff n/m is odd; relaxed form needs Q_m > 2".into(),
    });

    let g = ps[m].gcd(&ps[n]);
    claims.push(ClaimVerdict {
        claim: 3,
        printed: Some(g == ps[d]),
        relaxed: Some(g == ps[d]),
        note: "gcd(P_m, P_n) = P_d".into(),
    });

    let want = if (m / d) % 2 == 1 && (n / d) % 2 == 1 {
        qs[d].clone()
    } else {
        BigUint::one()
    };
    let g = qs[m].gcd(&qs[n]);
    claims.push(ClaimVerdict {
        claim: 4,
        printed: Some(g == want),
        relaxed: Some(within_two(&g, &want)),
        note: "gcd(Q_m, Q_n); relaxed form allows a factor 2".into(),
    });

    let want = if (m / d) % 2 == 0 { qs[d].clone() } else { BigUint::one() };
    let g = ps[m].gcd(&qs[n]);
    claims.push(ClaimVerdict {
        claim: 5,
        printed: Some(g == want),
        relaxed: Some(within_two(&g, &want)),
        note: "gcd(P_m, Q_n); relaxed form allows a factor 2".into(),
    });

    let prod = &ps[m] * &qs[m];
    claims.push(ClaimVerdict {
        claim: 6,
        printed: Some(ps[2 * m] == &prod * 2u32),
        relaxed: Some(ps[2 * m] == prod),
        note: "printed P_2m = 2 P_m Q_m; relaxed P_2m = P_m Q_m".into(),
    });

    let (printed, relaxed) = match prime {
        None => (None, None),
        Some(p) => {
            let mp = m * p as usize;
            let (quot, rem) = ps[mp].div_rem(&ps[m]);
            let ok = rem.is_zero() && {
                let want = u32::from((&ps[m] % p).is_zero());
                ord(quot, p) == want
            };
            let pb = BigInt::from(p);
            let applies = p % 2 == 1
                && !(params.r() % &pb).is_zero()
                && !(params.discriminant() % &pb).is_zero();
            (Some(ok), applies.then_some(ok))
        }
    };
    claims.push(ClaimVerdict {
        claim: 7,
        printed,
        relaxed,
        note: "ord_p(P_mp/P_m) = [p | P_m]; relaxed form needs p odd, p ∤ R(R−4Q)".into(),
    });

    Ok(Prop21Report {
        m,
        n,
        params: params.clone(),
        prime,
        claims,
    })
}

/// Which square class a hit belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SquareForm {
    /// Q_n = k·u²
    KU2,
    /// Q_n = 2k·u²
    TwoKU2,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma23Hit {
    pub n: usize,
    pub k: u64,
    #[serde(with = "crate::dec::nat")]
    pub u: BigUint,
    pub form: SquareForm,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma23Scan {
    pub params: LehmerParams,
    pub bound: usize,
    pub hits: Vec<Lemma23Hit>,
}

impl Lemma23Scan {
    /// Indices n hit in the given form, deduplicated and sorted.
    pub fn indices(&self, form: SquareForm) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .hits
            .iter()
            .filter(|h| h.form == form)
            .map(|h| h.n)
            .collect();
        v.dedup();
        v
    }

    /// Whether the hits stay within {1, 3, 5} for k·u² and {3} for 2k·u².
    pub fn holds(&self) -> bool {
        self.violations().is_empty()
    }

    pub fn violations(&self) -> Vec<&Lemma23Hit> {
        self.hits
            .iter()
            .filter(|h| match h.form {
                SquareForm::KU2 => ![1, 3, 5].contains(&h.n),
                SquareForm::TwoKU2 => h.n != 3,
            })
            .collect()
    }
}

fn squarefree_divisors(n: usize) -> Vec<u64> {
    (1..=n as u64)
        .filter(|d| n as u64 % d == 0)
        .filter(|&d| (2..).take_while(|p| p * p <= d).all(|p| d % (p * p) != 0))
        .collect()
}

/// Every n ≤ bound such that Q_n = k·u² or Q_n = 2k·u² with k a squarefree
/// divisor of n. Requires R and Q odd.
pub fn lemma23_scan(params: &LehmerParams, bound: usize) -> Result<Lemma23Scan> {
    if params.r().is_even() || params.q().is_even() {
        return domain(format!("{params}: R and Q must both be odd"));
    }
    let mut hits = Vec::new();
    if bound > 0 {
        let (_, qs) = lehmer_sequences(bound, params);
        for (n, qn) in qs.iter().enumerate().skip(1) {
            for k in squarefree_divisors(n) {
                for (form, mult) in [(SquareForm::KU2, k), (SquareForm::TwoKU2, 2 * k)] {
                    let (quot, rem) = qn.div_rem(&BigUint::from(mult));
                    if rem.is_zero() {
                        if let Some(u) = is_perfect_square(&quot) {
                            hits.push(Lemma23Hit { n, k, u, form });
                        }
                    }
                }
            }
        }
    }
    Ok(Lemma23Scan {
        params: params.clone(),
        bound,
        hits,
    })
}

/// Exact closed-form value of (Pₙ, Qₙ) from the binomial expansion of
/// αⁿ ± βⁿ over √R and √(R − 4Q). Independent of the recurrence, and used
/// to cross-check it.
pub fn closed_form(n: usize, params: &LehmerParams) -> (BigUint, BigUint) {
    let (r, delta) = (params.r().clone(), params.discriminant());
    // 2ⁿ·αⁿ = Σ C(n, j) √R^(n−j) √Δ^j; odd j carry √Δ, even j do not.
    let mut p_sum = BigInt::zero();
    let mut q_sum = BigInt::zero();
    let mut binom = BigInt::one();
    for j in 0..=n {
        if j > 0 {
            binom = binom * (n - j + 1) / j;
        }
        let rest = n - j;
        if j % 2 == 1 {
            // α − β = √Δ; for even n also divide by α + β = √R.
            let re = if n % 2 == 1 { rest / 2 } else { (rest - 1) / 2 };
            p_sum += &binom * r.pow(re as u32) * delta.pow(((j - 1) / 2) as u32);
        } else {
            let re = if n % 2 == 1 { (rest - 1) / 2 } else { rest / 2 };
            q_sum += &binom * r.pow(re as u32) * delta.pow((j / 2) as u32);
        }
    }
    if n == 0 {
        return (BigUint::zero(), BigUint::from(2u32));
    }
    let scale = BigInt::one() << (n - 1);
    let to_nat = |v: BigInt| {
        let (q, rem) = v.div_rem(&scale);
        debug_assert!(rem.is_zero());
        match q.sign() {
            Sign::Minus => panic!("negative Lehmer value"),
            _ => q.to_biguint().unwrap(),
        }
    };
    (to_nat(p_sum), to_nat(q_sum))
}

/// (R, Q) = (1, −1), where Pₙ and Qₙ are the Fibonacci and Lucas numbers.
pub fn fibonacci_params() -> LehmerParams {
    LehmerParams::new(1, -1).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fib_lucas(n: usize) -> (Vec<BigUint>, Vec<BigUint>) {
        let mut f = vec![BigUint::zero(), BigUint::one()];
        let mut l = vec![BigUint::from(2u32), BigUint::one()];
        for i in 2..=n {
            f.push(&f[i - 1] + &f[i - 2]);
            l.push(&l[i - 1] + &l[i - 2]);
        }
        (f, l)
    }

    #[test]
    fn seeds_and_small_values() {
        let fib = fibonacci_params();
        assert_eq!(lehmer_p(0, &fib), BigUint::zero());
        assert_eq!(lehmer_p(1, &fib), BigUint::one());
        assert_eq!(lehmer_p(5, &fib), BigUint::from(5u32));
        assert_eq!(lehmer_q(1, &fib), BigUint::one());
        assert_eq!(lehmer_q(3, &fib), BigUint::from(4u32));
        assert_eq!(lehmer_q(5, &fib), BigUint::from(11u32));
    }

    #[test]
    fn fibonacci_and_lucas() {
        let (f, l) = fib_lucas(64);
        let (p, q) = lehmer_sequences(64, &fibonacci_params());
        assert_eq!(p, f);
        assert_eq!(q, l);
    }

    #[test]
    fn recurrence_matches_closed_form() {
        for (r, q) in [(1, -1), (5, 1), (9, 2), (3, -4), (7, 1), (13, -2)] {
            let params = LehmerParams::new(r, q).unwrap();
            let (ps, qs) = lehmer_sequences(40, &params);
            for n in 0..=40 {
                assert_eq!(closed_form(n, &params), (ps[n].clone(), qs[n].clone()), "{params} n={n}");
            }
        }
    }

    #[test]
    fn mixed_context_index_25() {
        // Minimal solution (1, 1) of 5x² − y² = 4 gives R = 5, Q = 1, and
        // the 25th solution is (Q₂₅, P₂₅).
        let s = MixedSolution::new(1u32, 1u32, 5, 1, 4).unwrap();
        let params = LehmerParams::for_mixed(&s).unwrap();
        assert_eq!(params.r(), &BigInt::from(5));
        assert_eq!(lehmer_q(25, &params), BigUint::from(75025u32));
        assert_eq!(lehmer_p(25, &params), BigUint::from(167761u32));
    }

    #[test]
    fn param_validation() {
        assert!(LehmerParams::new(0, 1).is_err());
        assert!(LehmerParams::new(4, 0).is_err());
        assert!(LehmerParams::new(4, 2).is_err());
        assert!(LehmerParams::new(4, 1).is_err());
        assert!(LehmerParams::new(1, -1).is_ok());
    }

    #[test]
    fn prop21_examples() {
        let fib = fibonacci_params();
        let r = prop21_check(10, 15, &fib, None).unwrap();
        assert_eq!(r.claim(3).printed, Some(true));
        let r = prop21_check(3, 6, &fib, None).unwrap();
        assert_eq!(r.claim(6).printed, Some(false));
        assert_eq!(r.claim(6).relaxed, Some(true));
        let r = prop21_check(4, 4, &fib, Some(3)).unwrap();
        assert_eq!(r.claim(1).printed, Some(true));
        assert_eq!(r.claim(7).relaxed, Some(true));
        // Q_1 = 1 divides every Q_n, including even n.
        let r = prop21_check(1, 2, &fib, None).unwrap();
        assert_eq!(r.claim(2).printed, Some(false));
        assert_eq!(r.claim(2).relaxed, None);
    }

    #[test]
    fn lemma23_examples() {
        let fib = fibonacci_params();
        assert!(lemma23_scan(&fib, 0).unwrap().hits.is_empty());
        let scan = lemma23_scan(&fib, 50).unwrap();
        // L₆ = 18 = 2·3² with 2 | 6 lands outside {1, 3, 5}.
        assert_eq!(scan.indices(SquareForm::KU2), vec![1, 3, 6]);
        assert_eq!(scan.indices(SquareForm::TwoKU2), vec![6]);
        assert!(!scan.holds());
        assert!(lemma23_scan(&LehmerParams::new(9, 2).unwrap(), 10).is_err());
        let scan = lemma23_scan(&LehmerParams::new(7, 1).unwrap(), 200).unwrap();
        assert!(scan.holds());
    }
}
