//! Quotient equations of Ljunggren type.
//!
//! Each family reduces to a mixed Pell equation whose minimal solution is
//! small, and the Störmer statements on the mixed equations then force
//! x = 3 (or the one sporadic x = 5). The closed forms below enumerate
//! those families inside a search box; the brute force scans the same box
//! directly.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{factor, is_perfect_square, is_perfect_square_int};
use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LjunggrenFamily {
    /// (axⁿ + c)/(ax + c) = y², n odd, n > 1.
    OddPower,
    /// (ax^{n+2l} + c)/(axⁿ + c) = y², y rational.
    ShiftedPower,
    /// (ax^{n+2l} + c)/(abt²xⁿ + c) = by², gcd(a, c) = 1.
    ScaledShifted,
    /// (axⁿ + c)/(abxt² + c) = by², n odd, gcd(a, c) = 1.
    ScaledOdd,
}

impl LjunggrenFamily {
    pub fn all() -> [LjunggrenFamily; 4] {
        [
            LjunggrenFamily::OddPower,
            LjunggrenFamily::ShiftedPower,
            LjunggrenFamily::ScaledShifted,
            LjunggrenFamily::ScaledOdd,
        ]
    }

    fn has_l(self) -> bool {
        matches!(self, LjunggrenFamily::ShiftedPower | LjunggrenFamily::ScaledShifted)
    }

    fn has_bt(self) -> bool {
        matches!(self, LjunggrenFamily::ScaledShifted | LjunggrenFamily::ScaledOdd)
    }
}

/// Inclusive search box. x starts at 2, every other parameter at 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LjunggrenBounds {
    pub a_max: u64,
    pub x_max: u64,
    pub n_max: u32,
    pub l_max: u32,
    pub t_max: u64,
}

impl Default for LjunggrenBounds {
    fn default() -> Self {
        LjunggrenBounds {
            a_max: 10,
            x_max: 10,
            n_max: 12,
            l_max: 4,
            t_max: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LjunggrenQuery {
    pub family: LjunggrenFamily,
    pub c: i64,
    /// Fixes a; otherwise every admissible a ≤ a_max is tried.
    pub a: Option<u64>,
    pub bounds: LjunggrenBounds,
}

impl LjunggrenQuery {
    pub fn new(family: LjunggrenFamily, c: i64) -> Self {
        LjunggrenQuery {
            family,
            c,
            a: None,
            bounds: LjunggrenBounds::default(),
        }
    }

    pub fn with_a(mut self, a: u64) -> Self {
        self.a = Some(a);
        self
    }

    fn validate(&self) -> Result<()> {
        if !matches!(self.c, -4 | -2 | -1 | 1 | 2 | 4) {
            return domain(format!("c must be ±1, ±2 or ±4, got {}", self.c));
        }
        if self.a == Some(0) {
            return domain("a must be positive");
        }
        Ok(())
    }

    /// Whether a satisfies the family's hypotheses: a odd for c = ±2, ±4 in
    /// the unscaled families, gcd(a, c) = 1 in the scaled ones.
    fn admits_a(&self, a: u64) -> bool {
        if self.family.has_bt() {
            a.gcd(&self.c.unsigned_abs()) == 1
        } else {
            self.c.abs() == 1 || a % 2 == 1
        }
    }

    fn a_values(&self) -> Vec<u64> {
        match self.a {
            Some(a) => vec![a],
            None => (1..=self.bounds.a_max).filter(|&a| self.admits_a(a)).collect(),
        }
    }

    fn in_box(&self, s: &LjunggrenSolution) -> bool {
        let b = &self.bounds;
        let a_ok = match self.a {
            Some(a) => s.a == a,
            None => s.a <= b.a_max,
        };
        a_ok && (2..=b.x_max).contains(&s.x)
            && s.n <= b.n_max
            && (!self.family.has_l() || s.l <= b.l_max)
            && (!self.family.has_bt() || s.t <= b.t_max)
    }
}

/// One solution. For families without b, t or l those fields are 1, 1, 0.
/// y is the positive root, y_num/y_den in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LjunggrenSolution {
    pub a: u64,
    pub b: i64,
    pub x: u64,
    pub n: u32,
    pub l: u32,
    pub t: u64,
    #[serde(with = "crate::dec::nat")]
    pub y_num: BigUint,
    #[serde(with = "crate::dec::nat")]
    pub y_den: BigUint,
    pub c: i64,
}

impl LjunggrenSolution {
    fn integral(a: u64, b: i64, x: u64, n: u32, l: u32, t: u64, y: BigUint, c: i64) -> Self {
        LjunggrenSolution {
            a,
            b,
            x,
            n,
            l,
            t,
            y_num: y,
            y_den: BigUint::one(),
            c,
        }
    }

    /// Numerator and denominator of the quotient, before reduction.
    fn quotient(&self, family: LjunggrenFamily) -> (BigInt, BigInt) {
        quotient_parts(family, self.a, self.b, self.x, self.n, self.l, self.t, self.c)
    }

    /// Substitutes the solution back into its equation.
    pub fn satisfies(&self, family: LjunggrenFamily) -> bool {
        let (num, den) = self.quotient(family);
        if den.is_zero() || self.y_den.is_zero() {
            return false;
        }
        let y2n = BigInt::from(&self.y_num * &self.y_num);
        let y2d = BigInt::from(&self.y_den * &self.y_den);
        num * y2d == den * BigInt::from(self.b) * y2n
    }
}

#[allow(clippy::too_many_arguments)]
fn quotient_parts(family: LjunggrenFamily, a: u64, b: i64, x: u64, n: u32, l: u32, t: u64, c: i64) -> (BigInt, BigInt) {
    let (a, b, x, t) = (BigInt::from(a), BigInt::from(b), BigInt::from(x), BigInt::from(t));
    match family {
        LjunggrenFamily::OddPower => (&a * x.pow(n) + c, &a * &x + c),
        LjunggrenFamily::ShiftedPower => (&a * x.pow(n + 2 * l) + c, &a * x.pow(n) + c),
        LjunggrenFamily::ScaledShifted => (&a * x.pow(n + 2 * l) + c, &a * &b * &t * &t * x.pow(n) + c),
        LjunggrenFamily::ScaledOdd => (&a * x.pow(n) + c, &a * &b * &x * &t * &t + c),
    }
}

/// The closed-form solution set inside the query's box, with notes on any
/// closed form that fails to substitute back.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LjunggrenReport {
    pub query: LjunggrenQuery,
    pub solutions: Vec<LjunggrenSolution>,
    pub notes: Vec<String>,
}

fn three(e: u32) -> BigInt {
    BigInt::from(3).pow(e)
}

/// (3^e + s)/d when exact and positive.
fn three_frac(e: u32, s: i64, d: i64) -> Option<u64> {
    let (q, r) = (three(e) + s).div_rem(&BigInt::from(d));
    (r.is_zero() && q.is_positive()).then(|| u64::try_from(&q).ok()).flatten()
}

/// x = 3 members of the odd-power family: n = 2m + 1 with
/// c = −1: a = (3^{m−1} + 1)/4, m even;  c = 1: a = (3^{m−1} − 1)/4, m odd;
/// c = −2: a = (3^{m−1} + 1)/2, m odd;   c = 2: a = (3^{m−1} − 1)/2, m even;
/// plus (a, x, n) = (1, 5, 3) for c = −4 and nothing for c = 4.
fn odd_power_family(c: i64, n_max: u32) -> Vec<(u64, u64, u32)> {
    let mut out = Vec::new();
    if c == -4 {
        out.push((1, 5, 3));
    }
    for m in 1..=n_max.saturating_sub(1) / 2 {
        let a = match c {
            -1 if m % 2 == 0 => three_frac(m - 1, 1, 4),
            1 if m % 2 == 1 => three_frac(m - 1, -1, 4),
            -2 if m % 2 == 1 => three_frac(m - 1, 1, 2),
            2 if m % 2 == 0 => three_frac(m - 1, -1, 2),
            _ => None,
        };
        if let Some(a) = a {
            out.push((a, 3, 2 * m + 1));
        }
    }
    out
}

/// x = 3, n = 1 members of the shifted family, with y = 3^l ± 2:
/// c = −1: l even, a = (3^{l−1} + 1)/4;  c = 1: l odd, a = (3^{l−1} − 1)/4;
/// c = −2: l odd, a = (3^{l−1} + 1)/2;   c = 2: l even, a = (3^{l−1} − 1)/2;
/// plus (a, x, n, l, y) = (1, 5, 1, 1, 11) for c = −4 and nothing for c = 4.
fn shifted_family(c: i64, l_max: u32) -> Vec<(u64, u64, u32, u32, BigUint)> {
    let mut out = Vec::new();
    if c == -4 {
        out.push((1, 5, 1, 1, BigUint::from(11u32)));
    }
    for l in 1..=l_max {
        let (a, y_shift) = match c {
            -1 if l % 2 == 0 => (three_frac(l - 1, 1, 4), 2),
            1 if l % 2 == 1 => (three_frac(l - 1, -1, 4), -2),
            -2 if l % 2 == 1 => (three_frac(l - 1, 1, 2), 2),
            2 if l % 2 == 0 => (three_frac(l - 1, -1, 2), -2),
            _ => (None, 0),
        };
        if let Some(a) = a {
            let y = (three(l) + BigInt::from(y_shift)).magnitude().clone();
            out.push((a, 3, 1, l, y));
        }
    }
    out
}

/// The listed b = −1 tuples (a, b, x, y, n, t, l) of the scaled families.
fn listed_scaled(family: LjunggrenFamily, c: i64) -> Vec<LjunggrenSolution> {
    let three = BigUint::from(3u32);
    match family {
        LjunggrenFamily::ScaledShifted => [(1, 1), (2, 2), (3, 4)]
            .iter()
            .filter(|&&(_, cc)| cc == c)
            .map(|&(n, _)| LjunggrenSolution::integral(1, -1, 2, n, 1, 1, three.clone(), c))
            .collect(),
        LjunggrenFamily::ScaledOdd if c == 1 => {
            vec![LjunggrenSolution::integral(1, -1, 2, 3, 0, 1, three, c)]
        }
        _ => vec![],
    }
}

fn check_covered(q: &LjunggrenQuery) -> Result<()> {
    q.validate()?;
    if let Some(a) = q.a {
        if !q.admits_a(a) {
            let need = if q.family.has_bt() { "gcd(a, c) = 1" } else { "a odd" };
            return Err(Error::Uncovered(format!("a = {a} with c = {}: the statement needs {need}", q.c)));
        }
    }
    Ok(())
}

/// Solutions in the query's box as the closed forms give them.
///
/// For the scaled families: b = t = 1 reduces to the unscaled family, and
/// b = 1, y = ±1 means the quotient is 1, which happens exactly when
/// t = x^l (shifted) or t² = x^{n−1} (odd power). The listed b = −1 tuples
/// are added last.
pub fn ljunggren_solve(q: &LjunggrenQuery) -> Result<LjunggrenReport> {
    check_covered(q)?;
    let c = q.c;
    let bx = q.bounds;
    let mut sols: Vec<LjunggrenSolution> = Vec::new();
    let unscaled_odd = || {
        odd_power_family(c, bx.n_max)
            .into_iter()
            .filter_map(|(a, x, n)| {
                let (num, den) = quotient_parts(LjunggrenFamily::OddPower, a, 1, x, n, 0, 1, c);
                let y = is_perfect_square_int(&(num / den))?;
                Some(LjunggrenSolution::integral(a, 1, x, n, 0, 1, y, c))
            })
            .collect::<Vec<_>>()
    };
    let unscaled_shifted = || {
        shifted_family(c, bx.l_max)
            .into_iter()
            .map(|(a, x, n, l, y)| LjunggrenSolution::integral(a, 1, x, n, l, 1, y, c))
            .collect::<Vec<_>>()
    };
    match q.family {
        LjunggrenFamily::OddPower => sols.extend(unscaled_odd()),
        LjunggrenFamily::ShiftedPower => sols.extend(unscaled_shifted()),
        LjunggrenFamily::ScaledShifted => {
            sols.extend(unscaled_shifted());
            for a in q.a_values() {
                for x in 2..=bx.x_max {
                    for l in 1..=bx.l_max {
                        let Some(t) = x.checked_pow(l).filter(|&t| t <= bx.t_max) else { break };
                        for n in 1..=bx.n_max {
                            sols.push(LjunggrenSolution::integral(a, 1, x, n, l, t, BigUint::one(), c));
                        }
                    }
                }
            }
            sols.extend(listed_scaled(q.family, c));
        }
        LjunggrenFamily::ScaledOdd => {
            sols.extend(unscaled_odd());
            for a in q.a_values() {
                for x in 2..=bx.x_max {
                    for n in (1..=bx.n_max).step_by(2) {
                        let Some(t) = x.checked_pow((n - 1) / 2).filter(|&t| t <= bx.t_max) else { break };
                        sols.push(LjunggrenSolution::integral(a, 1, x, n, 0, t, BigUint::one(), c));
                    }
                }
            }
            sols.extend(listed_scaled(q.family, c));
        }
    }
    let mut notes = Vec::new();
    // 0/0 is not a solution, and not a defect of the closed form either
    sols.retain(|s| !s.quotient(q.family).1.is_zero());
    sols.retain(|s| {
        let ok = s.satisfies(q.family);
        if !ok {
            notes.push(format!("closed form {s:?} does not satisfy the equation"));
        }
        ok
    });
    sols.retain(|s| q.in_box(s));
    sols.sort();
    sols.dedup();
    Ok(LjunggrenReport {
        query: q.clone(),
        solutions: sols,
        notes,
    })
}

fn divisors(n: &BigUint) -> Result<Vec<BigUint>> {
    let f = factor(n)?;
    let mut out = vec![BigUint::one()];
    for pp in &f.factors {
        let mut next = Vec::with_capacity(out.len() * (pp.exponent as usize + 1));
        for d in &out {
            let mut m = d.clone();
            for _ in 0..=pp.exponent {
                next.push(m.clone());
                m *= &pp.prime;
            }
        }
        out = next;
    }
    Ok(out)
}

/// Every solution in the query's box by direct search. For the scaled
/// families b is not bounded: the denominator must divide the numerator, so
/// b is read off each signed divisor.
pub fn ljunggren_bruteforce(q: &LjunggrenQuery) -> Result<Vec<LjunggrenSolution>> {
    q.validate()?;
    let (c, bx, family) = (q.c, q.bounds, q.family);
    let mut jobs: Vec<(u64, u64, u32, u32)> = Vec::new();
    for a in q.a_values() {
        for x in 2..=bx.x_max {
            for n in 1..=bx.n_max {
                let n_ok = match family {
                    LjunggrenFamily::OddPower => n > 1 && n % 2 == 1,
                    LjunggrenFamily::ScaledOdd => n % 2 == 1,
                    _ => true,
                };
                if !n_ok {
                    continue;
                }
                if family.has_l() {
                    jobs.extend((1..=bx.l_max).map(|l| (a, x, n, l)));
                } else {
                    jobs.push((a, x, n, 0));
                }
            }
        }
    }
    let found: Vec<Result<Vec<LjunggrenSolution>>> = jobs
        .into_par_iter()
        .map(|(a, x, n, l)| -> Result<Vec<LjunggrenSolution>> {
            let mut out = Vec::new();
            if !family.has_bt() {
                let (num, den) = quotient_parts(family, a, 1, x, n, l, 1, c);
                if !den.is_positive() {
                    return Ok(out);
                }
                let g = num.gcd(&den);
                let (num, den) = ((&num / &g).magnitude().clone(), (&den / &g).magnitude().clone());
                if family == LjunggrenFamily::OddPower && !den.is_one() {
                    return Ok(out);
                }
                if let (Some(yn), Some(yd)) = (is_perfect_square(&num), is_perfect_square(&den)) {
                    out.push(LjunggrenSolution { a, b: 1, x, n, l, t: 1, y_num: yn, y_den: yd, c });
                }
                return Ok(out);
            }
            let (num, _) = quotient_parts(family, a, 1, x, n, l, 1, c);
            if num.is_zero() {
                // forces y = 0
                return Ok(out);
            }
            let divs = divisors(num.magnitude())?;
            for t in 1..=bx.t_max {
                let base = match family {
                    LjunggrenFamily::ScaledShifted => BigInt::from(a * t * t) * BigInt::from(x).pow(n),
                    _ => BigInt::from(a * x * t * t),
                };
                for d in &divs {
                    for den in [BigInt::from(d.clone()), -BigInt::from(d.clone())] {
                        let (b, r) = (&den - c).div_rem(&base);
                        if !r.is_zero() || b.is_zero() {
                            continue;
                        }
                        let (qv, r) = (&num / &den).div_rem(&b);
                        debug_assert!((&num % &den).is_zero());
                        if !r.is_zero() {
                            continue;
                        }
                        if let Some(y) = is_perfect_square_int(&qv).filter(|y| !y.is_zero()) {
                            let b = i64::try_from(&b).expect("b is bounded by the numerator");
                            out.push(LjunggrenSolution::integral(a, b, x, n, l, t, y, c));
                        }
                    }
                }
            }
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for r in found {
        all.extend(r?);
    }
    all.sort();
    all.dedup();
    Ok(all)
}

/// Where solver and brute force disagree on one query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LjunggrenAgreement {
    pub family: LjunggrenFamily,
    pub c: i64,
    pub solve_only: Vec<LjunggrenSolution>,
    pub brute_only: Vec<LjunggrenSolution>,
}

impl LjunggrenAgreement {
    pub fn agrees(&self) -> bool {
        self.solve_only.is_empty() && self.brute_only.is_empty()
    }
}

pub fn ljunggren_compare(q: &LjunggrenQuery) -> Result<LjunggrenAgreement> {
    let solved = ljunggren_solve(q)?.solutions;
    let brute = ljunggren_bruteforce(q)?;
    Ok(LjunggrenAgreement {
        family: q.family,
        c: q.c,
        solve_only: solved.iter().filter(|s| !brute.contains(s)).cloned().collect(),
        brute_only: brute.iter().filter(|s| !solved.contains(s)).cloned().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key(s: &LjunggrenSolution) -> (u64, u64, u32, u64) {
        (s.a, s.x, s.n, u64::try_from(&s.y_num).unwrap())
    }

    #[test]
    fn ljunggren_classic() {
        let q = LjunggrenQuery::new(LjunggrenFamily::OddPower, -1).with_a(1);
        let r = ljunggren_solve(&q).unwrap();
        assert_eq!(r.solutions.iter().map(key).collect::<Vec<_>>(), vec![(1, 3, 5, 11)]);
        assert_eq!(ljunggren_bruteforce(&q).unwrap(), r.solutions);
    }

    #[test]
    fn odd_power_members() {
        let q = LjunggrenQuery::new(LjunggrenFamily::OddPower, -1).with_a(7);
        let r = ljunggren_solve(&q).unwrap();
        assert_eq!(r.solutions.iter().map(key).collect::<Vec<_>>(), vec![(7, 3, 9, 83)]);
        let q = LjunggrenQuery::new(LjunggrenFamily::OddPower, -4);
        let r = ljunggren_solve(&q).unwrap();
        assert_eq!(r.solutions.iter().map(key).collect::<Vec<_>>(), vec![(1, 5, 3, 11)]);
        let q = LjunggrenQuery::new(LjunggrenFamily::OddPower, 4).with_a(1);
        assert!(ljunggren_solve(&q).unwrap().solutions.is_empty());
        let q = LjunggrenQuery::new(LjunggrenFamily::OddPower, -2);
        let r = ljunggren_solve(&q).unwrap();
        assert!(r.solutions.iter().map(key).any(|k| k == (1, 3, 3, 5)));
    }

    #[test]
    fn shifted_identity() {
        // (3a·3^{2l} − 1)/(3a − 1) = (3^l + 2)² for even l.
        for l in (2..=20u32).step_by(2) {
            let a = (three(l - 1) + 1) / 4;
            let lhs_num = &a * 3 * three(2 * l) - 1;
            let lhs_den = &a * 3 - 1;
            assert_eq!(lhs_num, lhs_den * (three(l) + BigInt::from(2)).pow(2u32));
        }
    }

    #[test]
    fn uncovered_parameters() {
        let q = LjunggrenQuery::new(LjunggrenFamily::OddPower, 2).with_a(4);
        assert!(matches!(ljunggren_solve(&q), Err(Error::Uncovered(_))));
        let q = LjunggrenQuery::new(LjunggrenFamily::ScaledShifted, 4).with_a(2);
        assert!(matches!(ljunggren_solve(&q), Err(Error::Uncovered(_))));
        let q = LjunggrenQuery::new(LjunggrenFamily::OddPower, 3);
        assert!(matches!(ljunggren_solve(&q), Err(Error::Domain(_))));
    }

    #[test]
    fn listed_scaled_tuples_solve() {
        for c in [1, 2, 4] {
            for s in listed_scaled(LjunggrenFamily::ScaledShifted, c) {
                assert!(s.satisfies(LjunggrenFamily::ScaledShifted), "{s:?}");
            }
        }
        for s in listed_scaled(LjunggrenFamily::ScaledOdd, 1) {
            assert!(s.satisfies(LjunggrenFamily::ScaledOdd));
        }
    }

    #[test]
    fn divisor_listing() {
        let mut d = divisors(&BigUint::from(36u32)).unwrap();
        d.sort();
        assert_eq!(d.len(), 9);
        assert_eq!(d[8], BigUint::from(36u32));
    }
}
