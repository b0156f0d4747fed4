//! Splitting D = k·l so that kx² − ly² ∈ {1, 2, 4} is solvable.
//!
//! With x₀ + y₀√D the fundamental unit, (x₀ + 1)(x₀ − 1) = Dy₀². The two
//! factors (halved when x₀ is odd) are coprime, so each is a divisor of D
//! times a square, and the two divisors give the split.

use num_bigint::BigUint;
use num_integer::{Integer, Roots};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{gcd, is_perfect_square};
use crate::error::{domain, Result};
use crate::pell::{cf_sqrt, fundamental_solution, minimal_solution, PellRhs};
use crate::quadring::{check_radicand, MixedSolution};

/// A least solution of x² − Dy² = n.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormWitness {
    pub n: i64,
    #[serde(with = "crate::dec::nat")]
    pub x: BigUint,
    #[serde(with = "crate::dec::nat")]
    pub y: BigUint,
}

/// Which of x² − Dy² = −1, 2, −2 are solvable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerronReport {
    pub d: u64,
    pub solvable: Vec<NormWitness>,
}

impl PerronReport {
    /// The trichotomy claims at least one of the three is solvable.
    pub fn holds(&self) -> bool {
        !self.solvable.is_empty()
    }

    pub fn witness(&self, n: i64) -> Option<&NormWitness> {
        self.solvable.iter().find(|w| w.n == n)
    }
}

/// Decides solvability of x² − Dy² ∈ {−1, 2, −2}.
///
/// For D ≥ 5, |n| ≤ 2 < √D, so every solution with coprime x, y is a
/// convergent of √D, and solutions of these equations are coprime. The
/// norms of the convergents repeat with the period, so two periods see
/// all of them. For D = 3 the congruences mod 3 already rule out −1 and 2.
pub fn perron_trichotomy(d: u64) -> Result<PerronReport> {
    check_radicand(d)?;
    if d == 2 {
        return domain("the trichotomy excludes D = 2");
    }
    let cf = cf_sqrt(d)?;
    let dd = BigUint::from(d);
    let (mut p_prev, mut q_prev) = (BigUint::one(), BigUint::zero());
    let (mut p, mut q) = (BigUint::from(cf.a0), BigUint::one());
    let mut solvable: Vec<NormWitness> = Vec::new();
    let terms = cf.period.iter().chain(cf.period.iter());
    for &a in terms {
        let lhs = &p * &p;
        let rhs = &dd * &q * &q;
        let n = if lhs >= rhs {
            i64::try_from(&(lhs - rhs)).ok()
        } else {
            i64::try_from(&(rhs - lhs)).ok().map(|v| -v)
        };
        if let Some(n) = n.filter(|n| matches!(n, -1 | 2 | -2)) {
            if !solvable.iter().any(|w| w.n == n) {
                solvable.push(NormWitness { n, x: p.clone(), y: q.clone() });
            }
        }
        let p_next = &p * a + &p_prev;
        let q_next = &q * a + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
    }
    solvable.sort_by_key(|w| w.n);
    Ok(PerronReport { d, solvable })
}

/// A coprime split D = k·l with kx² − ly² = C solvable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitResult {
    pub k: u64,
    pub l: u64,
    pub c: u8,
    pub witness: MixedSolution,
    /// Whether no other coprime split of D solves the same C. `None` when
    /// D has more than eight prime factors and the check is skipped.
    pub unique: Option<bool>,
}

const UNIQUENESS_OMEGA_CAP: usize = 8;

/// Coprime splits (k, l) of d, in increasing k.
pub fn coprime_splits(d: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut k = 1;
    while k * k <= d {
        if d % k == 0 {
            out.push((k, d / k));
            if k * k != d {
                out.push((d / k, k));
            }
        }
        k += 1;
    }
    out.retain(|&(k, l)| k.gcd(&l) == 1);
    out.sort();
    out
}

/// All coprime splits of D with kx² − ly² = C solvable. For C = 1 and
/// C = 4, k = 1 is the pure equation and is left out; C = 4 counts odd
/// minimal solutions only.
pub fn solvable_splits(d: u64, c: u8) -> Result<Vec<MixedSolution>> {
    check_radicand(d)?;
    let mut out = Vec::new();
    if c != 1 && d % 2 == 0 {
        return Ok(out);
    }
    for (k, l) in coprime_splits(d) {
        if k == 1 && c != 2 {
            continue;
        }
        if let Some(s) = minimal_solution(k, l, c)? {
            if c != 4 || s.x().is_odd() {
                out.push(s);
            }
        }
    }
    Ok(out)
}

fn uniqueness(d: u64, c: u8, k: u64) -> Result<Option<bool>> {
    if coprime_splits(d).len() > 1 << UNIQUENESS_OMEGA_CAP {
        return Ok(None);
    }
    let all = solvable_splits(d, c)?;
    Ok(Some(all.len() == 1 && all[0].k() == k))
}

/// Writes a·b = D·w² with gcd(a, b) = 1 as k·u², l·v² where k = gcd(a, D).
fn extract(a: &BigUint, b: &BigUint, d: u64, c: u8) -> Result<Option<MixedSolution>> {
    let dd = BigUint::from(d);
    let k = gcd(a, &dd);
    let l = &dd / &k;
    let (u2, ur) = a.div_rem(&k);
    let (v2, vr) = b.div_rem(&l);
    if !ur.is_zero() || !vr.is_zero() {
        return Ok(None);
    }
    match (is_perfect_square(&u2), is_perfect_square(&v2)) {
        (Some(u), Some(v)) if !u.is_zero() && !v.is_zero() => {
            let k = u64::try_from(&k).expect("k divides D");
            let l = u64::try_from(&l).expect("l divides D");
            MixedSolution::new(u, v, k, l, c).map(Some)
        }
        _ => Ok(None),
    }
}

/// Splits D using the fundamental solution of x² − Dy² = 1.
///
/// - x₀ odd: (x₀ + 1)/2 = ku², (x₀ − 1)/2 = lv², so kx² − ly² = 1 with
///   2uv = y₀. This covers every even D not divisible by 8 and odd D with x₀
///   odd. k = 1 would give a solution of x² − Dy² = 1 below x₀.
/// - D odd, x₀ even: x₀ + 1 = ku², x₀ − 1 = lv², so kx² − ly² = 2 with
///   uv = y₀. Here k = 1 is allowed.
/// - 8 | D: the first branch applies when y₀ is even. When y₀ is odd no split
///   exists at all, since any solution would square to x₀ + y₀√D with
///   y₀ = 2xy; the result is then `None`.
pub fn split(d: u64) -> Result<Option<SplitResult>> {
    check_radicand(d)?;
    let eps = fundamental_solution(d, PellRhs::PlusOne, false)?.expect("always solvable");
    let (x0, y0) = (eps.x(), eps.y());
    let (a, b, c) = if x0.is_odd() {
        if y0.is_odd() {
            return Ok(None);
        }
        ((x0 + 1u32) / 2u32, (x0 - 1u32) / 2u32, 1u8)
    } else {
        (x0 + 1u32, x0 - 1u32, 2u8)
    };
    let Some(witness) = extract(&a, &b, d, c)? else {
        return Ok(None);
    };
    debug_assert!(c == 2 || witness.k() > 1);
    let unique = uniqueness(d, c, witness.k())?;
    Ok(Some(SplitResult {
        k: witness.k(),
        l: witness.l(),
        c,
        witness,
        unique,
    }))
}

/// Splits odd D with kx² − ly² = 4, built from the odd fundamental solution
/// (X, Y) of x² − Dy² = 4 through (X + 2)(X − 2) = DY². `None` when that
/// equation has no odd solution.
pub fn split_quartic(d: u64) -> Result<Option<SplitResult>> {
    check_radicand(d)?;
    if d % 2 == 0 {
        return domain(format!("D = {d} must be odd"));
    }
    let Some(eta) = fundamental_solution(d, PellRhs::PlusFour, true)? else {
        return Ok(None);
    };
    let x = eta.x();
    let Some(witness) = extract(&(x + 2u32), &(x - 2u32), d, 4)? else {
        return Ok(None);
    };
    let unique = uniqueness(d, 4, witness.k())?;
    Ok(Some(SplitResult {
        k: witness.k(),
        l: witness.l(),
        c: 4,
        witness,
        unique,
    }))
}

/// Failures found by [`splitting_scan`], each a list of D.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingScan {
    pub d_max: u64,
    /// None of x² − Dy² ∈ {−1, 2, −2} solvable.
    pub trichotomy_failures: Vec<u64>,
    /// Odd D where the number of solvable C = 1 (k > 1) plus C = 2 splits is
    /// not exactly one.
    pub odd_not_exactly_one: Vec<u64>,
    /// Even D, 8 ∤ D, without a C = 1 split with k > 1.
    pub even_without_split: Vec<u64>,
    /// 8 | D without a C = 1 split with k > 1.
    pub eight_without_split: Vec<u64>,
    /// D where split() disagrees with the exhaustive list, or its witness
    /// does not satisfy 2uv = y₀ (C = 1) or uv = y₀ (C = 2).
    pub construction_mismatches: Vec<u64>,
}

/// Checks the splitting statements for every nonsquare D ≤ d_max.
pub fn splitting_scan(d_max: u64) -> Result<SplittingScan> {
    let rows: Vec<Result<(u64, [bool; 5])>> = (3..=d_max)
        .into_par_iter()
        .filter(|&d| d.sqrt() * d.sqrt() != d)
        .map(|d| {
            let perron = perron_trichotomy(d)?.holds();
            let ones = solvable_splits(d, 1)?;
            let twos = solvable_splits(d, 2)?;
            let odd_ok = d % 2 == 0 || ones.len() + twos.len() == 1;
            let even_ok = d % 2 == 1 || d % 8 == 0 || !ones.is_empty();
            let eight_ok = d % 8 != 0 || !ones.is_empty();
            let s = split(d)?;
            let eps = fundamental_solution(d, PellRhs::PlusOne, false)?.unwrap();
            let built_ok = match &s {
                None => ones.is_empty() && twos.is_empty(),
                Some(r) => {
                    let uv = r.witness.x() * r.witness.y();
                    let y_ok = if r.c == 1 { uv * 2u32 == *eps.y() } else { uv == *eps.y() };
                    let listed = if r.c == 1 { &ones } else { &twos };
                    y_ok && listed.contains(&r.witness) && r.unique != Some(false)
                }
            };
            Ok((d, [perron, odd_ok, even_ok, eight_ok, built_ok]))
        })
        .collect();
    let mut scan = SplittingScan { d_max, ..Default::default() };
    for row in rows {
        let (d, ok) = row?;
        let lists = [
            &mut scan.trichotomy_failures,
            &mut scan.odd_not_exactly_one,
            &mut scan.even_without_split,
            &mut scan.eight_without_split,
            &mut scan.construction_mismatches,
        ];
        for (good, list) in ok.into_iter().zip(lists) {
            if !good {
                list.push(d);
            }
        }
    }
    Ok(scan)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(r: &SplitResult) -> (u64, u64, u8, u64, u64) {
        (
            r.k,
            r.l,
            r.c,
            u64::try_from(r.witness.x()).unwrap(),
            u64::try_from(r.witness.y()).unwrap(),
        )
    }

    #[test]
    fn trichotomy_examples() {
        let r = perron_trichotomy(3).unwrap();
        assert_eq!(r.solvable.len(), 1);
        assert_eq!(r.witness(-2).map(|w| (w.x.clone(), w.y.clone())), Some((1u32.into(), 1u32.into())));
        let r = perron_trichotomy(5).unwrap();
        assert_eq!(r.witness(-1).map(|w| w.x.clone()), Some(2u32.into()));
        let r = perron_trichotomy(7).unwrap();
        assert_eq!(r.witness(2).map(|w| w.x.clone()), Some(3u32.into()));
        assert!(!perron_trichotomy(15).unwrap().holds());
        assert!(perron_trichotomy(2).is_err());
        assert!(perron_trichotomy(16).is_err());
    }

    #[test]
    fn trichotomy_agrees_with_search() {
        // Least solutions for small D have small y, so a bounded search sees them.
        for d in 3..200u64 {
            if d.sqrt() * d.sqrt() == d {
                continue;
            }
            let r = perron_trichotomy(d).unwrap();
            for n in [-1i64, 2, -2] {
                let found = (1..2000u64).find(|&y| {
                    let v = d as i128 * (y as i128) * (y as i128) + n as i128;
                    let s = (v as f64).sqrt() as i128;
                    (s - 1..=s + 1).any(|t| t >= 0 && t * t == v)
                });
                if let Some(y) = found {
                    assert_eq!(r.witness(n).map(|w| w.y.clone()), Some(BigUint::from(y)), "D={d} n={n}");
                }
            }
        }
    }

    #[test]
    fn split_examples() {
        assert_eq!(pair(&split(6).unwrap().unwrap()), (3, 2, 1, 1, 1));
        assert_eq!(pair(&split(15).unwrap().unwrap()), (5, 3, 2, 1, 1));
        assert_eq!(pair(&split(10).unwrap().unwrap()), (10, 1, 1, 1, 3));
        assert!(split(8).unwrap().is_none());
        assert!(split(9).is_err());
    }

    #[test]
    fn quartic_examples() {
        assert_eq!(pair(&split_quartic(5).unwrap().unwrap()), (5, 1, 4, 1, 1));
        assert_eq!(pair(&split_quartic(21).unwrap().unwrap()), (7, 3, 4, 1, 1));
        assert!(split_quartic(3).unwrap().is_none());
    }

    #[test]
    fn coprime_split_count() {
        assert_eq!(coprime_splits(30).len(), 8);
        assert_eq!(coprime_splits(12), vec![(1, 12), (3, 4), (4, 3), (12, 1)]);
    }
}
