//! Fundamental and minimal solutions, solution enumeration, and the
//! relations between the minimal solutions of the five equations
//!
//! ```text
//! kx² − ly² = 1,  x² − kly² = 1,  kx² − ly² = 2,  kx² − ly² = 4,  x² − kly² = 4.
//! ```
//!
//! Fundamental units come from the continued fraction of √D. Odd solutions
//! of x² − Dy² = ±4 are found as exact cube roots of the fundamental unit of
//! Z[√D]: if η = (t + y√D)/2 has η³ = a + b√D and N(η) = n, then
//! t³ − 3nt = 2a and y = 2b/(t² − n).

use num_bigint::{BigInt, BigUint};
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::is_perfect_square;
use crate::error::{domain, Error, Result};
use crate::quadring::{
    check_mixed_params, check_radicand, mixed_mul, mixed_pow, quad_pow, MixedSolution, QuadInt,
    RingElement,
};

/// Right-hand side of a pure Pell equation x² − Dy² = rhs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub enum PellRhs {
    PlusOne,
    MinusOne,
    PlusFour,
    MinusFour,
}

impl PellRhs {
    pub fn value(self) -> i64 {
        match self {
            PellRhs::PlusOne => 1,
            PellRhs::MinusOne => -1,
            PellRhs::PlusFour => 4,
            PellRhs::MinusFour => -4,
        }
    }

    /// Solutions of ±4 equations stand for the unit (x + y√D)/2.
    pub fn scale(self) -> u8 {
        match self {
            PellRhs::PlusOne | PellRhs::MinusOne => 1,
            PellRhs::PlusFour | PellRhs::MinusFour => 2,
        }
    }

    pub fn is_negative(self) -> bool {
        self.value() < 0
    }
}

impl TryFrom<i64> for PellRhs {
    type Error = Error;
    fn try_from(v: i64) -> Result<Self> {
        match v {
            1 => Ok(PellRhs::PlusOne),
            -1 => Ok(PellRhs::MinusOne),
            4 => Ok(PellRhs::PlusFour),
            -4 => Ok(PellRhs::MinusFour),
            _ => domain(format!("rhs must be one of 1, -1, 4, -4, got {v}")),
        }
    }
}

impl From<PellRhs> for i64 {
    fn from(r: PellRhs) -> i64 {
        r.value()
    }
}

impl std::fmt::Display for PellRhs {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// √D = [a0; period, period, ...] with the minimal period.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CFExpansion {
    pub a0: u64,
    pub period: Vec<u64>,
}

/// Continued fraction of √D.
pub fn cf_sqrt(d: u64) -> Result<CFExpansion> {
    check_radicand(d)?;
    let a0 = d.sqrt();
    let (d, a0w) = (d as u128, a0 as u128);
    let (mut m, mut q, mut a) = (0u128, 1u128, a0w);
    let mut period = Vec::new();
    loop {
        m = q * a - m;
        q = (d - m * m) / q;
        a = (a0w + m) / q;
        period.push(a as u64);
        if a == 2 * a0w {
            break;
        }
    }
    Ok(CFExpansion { a0, period })
}

/// A solution of x² − Dy² = rhs.
///
/// `denom` is the denominator of the associated unit (x + y√D)/scale once
/// reduced: 2 exactly when rhs = ±4 and x, y are both odd, 1 otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PellRepr", into = "PellRepr")]
pub struct PellSolution {
    x: BigUint,
    y: BigUint,
    d: u64,
    rhs: PellRhs,
    denom: u8,
}

#[derive(Serialize, Deserialize)]
struct PellRepr {
    #[serde(with = "crate::dec::nat")]
    x: BigUint,
    #[serde(with = "crate::dec::nat")]
    y: BigUint,
    d: u64,
    rhs: PellRhs,
    denom: u8,
}

impl TryFrom<PellRepr> for PellSolution {
    type Error = Error;
    fn try_from(r: PellRepr) -> Result<Self> {
        let s = PellSolution::new(r.x, r.y, r.d, r.rhs)?;
        if s.denom != r.denom {
            return domain(format!("denom {} inconsistent with ({}, {})", r.denom, s.x, s.y));
        }
        Ok(s)
    }
}

impl From<PellSolution> for PellRepr {
    fn from(s: PellSolution) -> Self {
        PellRepr {
            x: s.x,
            y: s.y,
            d: s.d,
            rhs: s.rhs,
            denom: s.denom,
        }
    }
}

impl PellSolution {
    pub fn new(x: impl Into<BigUint>, y: impl Into<BigUint>, d: u64, rhs: PellRhs) -> Result<Self> {
        check_radicand(d)?;
        let (x, y) = (x.into(), y.into());
        if x.is_zero() || y.is_zero() {
            return domain("Pell solutions must be positive");
        }
        let lhs = BigInt::from(&x * &x) - BigInt::from(d) * BigInt::from(&y * &y);
        if lhs != BigInt::from(rhs.value()) {
            return domain(format!("{x}² − {d}·{y}² ≠ {rhs}"));
        }
        let denom = if rhs.scale() == 2 && x.is_odd() && y.is_odd() {
            2
        } else {
            1
        };
        Ok(PellSolution { x, y, d, rhs, denom })
    }

    pub fn x(&self) -> &BigUint {
        &self.x
    }

    pub fn y(&self) -> &BigUint {
        &self.y
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn rhs(&self) -> PellRhs {
        self.rhs
    }

    pub fn denom(&self) -> u8 {
        self.denom
    }

    pub fn is_odd(&self) -> bool {
        self.x.is_odd() && self.y.is_odd()
    }

    /// The unit (x + y√D)/scale.
    ///
    /// Fails for rhs = ±4 with 4 | D and y odd, where the unit lives in
    /// Z[√(D/4)] rather than in a ring this crate represents over √D.
    pub fn unit(&self) -> Result<QuadInt> {
        QuadInt::from_fraction(
            BigInt::from(self.x.clone()),
            BigInt::from(self.y.clone()),
            self.d,
            &BigInt::from(self.rhs.scale()),
        )
    }

    pub(crate) fn pair(&self) -> (BigInt, BigInt) {
        (BigInt::from(self.x.clone()), BigInt::from(self.y.clone()))
    }
}

impl std::fmt::Display for PellSolution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}) on x² − {}y² = {}", self.x, self.y, self.d, self.rhs)
    }
}

/// Product of the units (x₁ + y₁√D)/s and (x₂ + y₂√D)/s, returned in the
/// same scaled coordinates.
pub(crate) fn compose(
    a: &(BigInt, BigInt),
    b: &(BigInt, BigInt),
    d: u64,
    scale: u8,
) -> Result<(BigInt, BigInt)> {
    let d = BigInt::from(d);
    let s = BigInt::from(scale);
    let x = &a.0 * &b.0 + &d * &a.1 * &b.1;
    let y = &a.0 * &b.1 + &a.1 * &b.0;
    let (qx, rx) = x.div_rem(&s);
    let (qy, ry) = y.div_rem(&s);
    if !rx.is_zero() || !ry.is_zero() {
        return domain("composition left the solution lattice");
    }
    Ok((qx, qy))
}

/// Quotient of the units a/b where b has norm `norm_b` (±1 after scaling).
pub(crate) fn compose_div(
    a: &(BigInt, BigInt),
    b: &(BigInt, BigInt),
    d: u64,
    scale: u8,
    norm_b: i64,
) -> Result<(BigInt, BigInt)> {
    let conj = (b.0.clone(), -&b.1);
    let (x, y) = compose(a, &conj, d, scale)?;
    Ok(if norm_b < 0 { (-x, -y) } else { (x, y) })
}

/// Least solution of x² − Dy² = ±1 reached by the continued fraction,
/// with its norm: (x, y, −1) when the period is odd, (x, y, +1) otherwise.
fn cf_unit(d: u64) -> Result<(BigUint, BigUint, i64)> {
    let cf = cf_sqrt(d)?;
    let (mut p0, mut p1) = (BigUint::one(), BigUint::from(cf.a0));
    let (mut q0, mut q1) = (BigUint::zero(), BigUint::one());
    for &a in &cf.period[..cf.period.len() - 1] {
        let p2 = &p1 * a + &p0;
        let q2 = &q1 * a + &q0;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
    }
    let norm = if cf.period.len() % 2 == 1 { -1 } else { 1 };
    Ok((p1, q1, norm))
}

/// Least odd η = (t + y√D)/2 with t² − Dy² = ±4, and N(η).
fn odd_unit(d: u64) -> Result<Option<(BigUint, BigUint, i64)>> {
    if d % 8 != 5 {
        return Ok(None);
    }
    let (a, b, n) = cf_unit(d)?;
    let two_a = BigInt::from(&a * 2u32);
    let guess = BigInt::from((&a * 2u32).cbrt());
    let nn = BigInt::from(n);
    for delta in -2i64..=2 {
        let t = &guess + delta;
        if !t.is_positive() {
            continue;
        }
        if &t * &t * &t - BigInt::from(3) * &nn * &t != two_a {
            continue;
        }
        let den = &t * &t - &nn;
        let num = BigInt::from(&b * 2u32);
        if den.is_zero() || !(&num % &den).is_zero() {
            continue;
        }
        let y = num / den;
        let (t, y) = (t.to_biguint().unwrap(), y.to_biguint().unwrap());
        if t.is_odd() && y.is_odd() {
            return Ok(Some((t, y, n)));
        }
    }
    Ok(None)
}

/// Least positive solution of x² − Dy² = rhs, or `None` when unsolvable.
///
/// For rhs = ±4 the least solution is odd when an odd one exists. With
/// `odd_only` only odd solutions are returned; otherwise an even solution
/// is returned when no odd one exists: 2·(the ±1 solution) in general, and
/// (2X, Y) from X² − (D/4)Y² = ±1 when 4 | D.
pub fn fundamental_solution(d: u64, rhs: PellRhs, odd_only: bool) -> Result<Option<PellSolution>> {
    check_radicand(d)?;
    let plus_one = |d: u64| -> Result<(BigUint, BigUint)> {
        let (x, y, n) = cf_unit(d)?;
        Ok(if n == 1 {
            (x, y)
        } else {
            let dd = BigUint::from(d);
            (&x * &x + &dd * &y * &y, BigUint::from(2u32) * &x * &y)
        })
    };
    let minus_one = |d: u64| -> Result<Option<(BigUint, BigUint)>> {
        let (x, y, n) = cf_unit(d)?;
        Ok((n == -1).then_some((x, y)))
    };
    let found = match rhs {
        PellRhs::PlusOne => Some(plus_one(d)?),
        PellRhs::MinusOne => minus_one(d)?,
        PellRhs::PlusFour | PellRhs::MinusFour => {
            let negative = rhs == PellRhs::MinusFour;
            let odd = match odd_unit(d)? {
                Some((t, y, n)) if n == -1 && negative => Some((t, y)),
                Some((t, y, n)) if !negative => {
                    if n == 1 {
                        Some((t, y))
                    } else {
                        // η has norm −1; η² = ((t² + Dy²)/2 + ty√D)/2.
                        let dd = BigUint::from(d);
                        Some(((&t * &t + &dd * &y * &y) / 2u32, &t * &y))
                    }
                }
                _ => None,
            };
            if odd.is_some() || odd_only {
                odd
            } else if d % 4 == 0 {
                let sub = if negative {
                    minus_one(d / 4)?
                } else {
                    Some(plus_one(d / 4)?)
                };
                sub.map(|(x, y)| (x * 2u32, y))
            } else {
                let base = if negative {
                    minus_one(d)?
                } else {
                    Some(plus_one(d)?)
                };
                base.map(|(x, y)| (x * 2u32, y * 2u32))
            }
        }
    };
    found
        .map(|(x, y)| PellSolution::new(x, y, d, rhs))
        .transpose()
}

/// Least positive solution of kx² − ly² = C, or `None` when unsolvable.
///
/// Reads the answer off the fundamental unit of Z[√(kl)]: the square of
/// the minimal mixed solution is that unit (times 1/C), so
/// C = 1: kx² = (x₀ + 1)/2, ly² = (x₀ − 1)/2;
/// C = 2: kx² = x₀ + 1, ly² = x₀ − 1;
/// C = 4: kx² = X₀ + 2, ly² = X₀ − 2 with X₀ from the least odd solution of
/// X² − klY² = 4, falling back to twice the C = 1 solution.
pub fn minimal_solution(k: u64, l: u64, c: u8) -> Result<Option<MixedSolution>> {
    check_mixed_params(k, l, c)?;
    if k == 1 && c != 2 {
        return domain(format!(
            "k = 1 with C = {c} is a pure Pell equation; use fundamental_solution"
        ));
    }
    let d = k * l;
    let extract = |a: BigUint, b: BigUint| -> Result<Option<MixedSolution>> {
        let (kk, ll) = (BigUint::from(k), BigUint::from(l));
        if !(&a % &kk).is_zero() || !(&b % &ll).is_zero() {
            return Ok(None);
        }
        match (is_perfect_square(&(a / kk)), is_perfect_square(&(b / ll))) {
            (Some(u), Some(v)) if !u.is_zero() && !v.is_zero() => {
                MixedSolution::new(u, v, k, l, c).map(Some)
            }
            _ => Ok(None),
        }
    };
    match c {
        1 | 2 => {
            let eps = fundamental_solution(d, PellRhs::PlusOne, false)?
                .expect("x² − Dy² = 1 is always solvable");
            let x0 = eps.x().clone();
            if c == 1 {
                if x0.is_even() {
                    return Ok(None);
                }
                extract((&x0 + 1u32) / 2u32, (&x0 - 1u32) / 2u32)
            } else {
                if x0.is_odd() {
                    return Ok(None);
                }
                extract(&x0 + 1u32, &x0 - 1u32)
            }
        }
        _ => {
            if let Some(eta) = fundamental_solution(d, PellRhs::PlusFour, true)? {
                let x0 = eta.x().clone();
                if let Some(s) = extract(&x0 + 2u32, &x0 - 2u32)? {
                    return Ok(Some(s));
                }
            }
            match minimal_solution(k, l, 1)? {
                Some(s) => MixedSolution::new(s.x() * 2u32, s.y() * 2u32, k, l, 4).map(Some),
                None => Ok(None),
            }
        }
    }
}

/// Least solution of kx² − ly² = C with y ≤ `y_max`, by direct search.
/// The independent check on [`minimal_solution`].
pub fn minimal_solution_search(k: u64, l: u64, c: u8, y_max: u64) -> Option<(u64, u64)> {
    let (k128, l128) = (k as u128, l as u128);
    for y in 1..=y_max as u128 {
        let t = c as u128 + l128 * y * y;
        if t % k128 == 0 {
            let x2 = t / k128;
            let x = x2.sqrt();
            if x > 0 && x * x == x2 {
                return Some((x as u64, y as u64));
            }
        }
    }
    None
}

/// A solution of either kind.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Solution {
    Pell(PellSolution),
    Mixed(MixedSolution),
}

impl Solution {
    pub fn x(&self) -> &BigUint {
        match self {
            Solution::Pell(s) => s.x(),
            Solution::Mixed(s) => s.x(),
        }
    }

    pub fn y(&self) -> &BigUint {
        match self {
            Solution::Pell(s) => s.y(),
            Solution::Mixed(s) => s.y(),
        }
    }
}

/// The first `count` solutions generated by a fundamental or minimal one:
/// every power for x² − Dy² = 1 or 4, odd powers only for the −1 and −4
/// equations and for mixed equations.
pub fn solutions(seed: &Solution, count: usize) -> Result<Vec<Solution>> {
    Ok(match seed {
        Solution::Pell(s) => pell_solutions(s, count)?
            .into_iter()
            .map(Solution::Pell)
            .collect(),
        Solution::Mixed(s) => mixed_solutions(s, count)?
            .into_iter()
            .map(Solution::Mixed)
            .collect(),
    })
}

pub fn pell_solutions(seed: &PellSolution, count: usize) -> Result<Vec<PellSolution>> {
    let (d, rhs, scale) = (seed.d, seed.rhs, seed.rhs.scale());
    let base = seed.pair();
    let step = if rhs.is_negative() {
        compose(&base, &base, d, scale)?
    } else {
        base.clone()
    };
    let mut out = Vec::with_capacity(count);
    let mut cur = base;
    for i in 0..count {
        if i > 0 {
            cur = compose(&cur, &step, d, scale)?;
        }
        out.push(PellSolution::new(
            cur.0.to_biguint().unwrap(),
            cur.1.to_biguint().unwrap(),
            d,
            rhs,
        )?);
    }
    Ok(out)
}

pub fn mixed_solutions(seed: &MixedSolution, count: usize) -> Result<Vec<MixedSolution>> {
    let step = RingElement::Pure(seed.square()?);
    let mut out: Vec<MixedSolution> = Vec::with_capacity(count);
    for i in 0..count {
        let next = if i == 0 {
            seed.clone()
        } else {
            match mixed_mul(&out[i - 1], &step)? {
                RingElement::Mixed(m) => m,
                RingElement::Pure(_) => unreachable!(),
            }
        };
        out.push(next);
    }
    Ok(out)
}

/// Outcome of one identity among the relations of the minimal solutions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    /// 1..=6, in the order ε₂ = ε₁², ε₂ = ε₃²/2, ε₂ = (ε₄/2)⁶,
    /// ε₂ = (ε₅/2)³, ε₁ = (ε₄/2)³, ε₅ = ε₄²/2.
    pub id: u8,
    pub statement: String,
    /// `None` when a constituent equation is unsolvable.
    pub holds: Option<bool>,
    pub note: String,
}

/// The minimal solutions ε₁…ε₅ for one (k, l) and the identities among them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationReport {
    pub k: u64,
    pub l: u64,
    /// kx² − ly² = 1
    pub eps1: Option<MixedSolution>,
    /// x² − kly² = 1
    pub eps2: PellSolution,
    /// kx² − ly² = 2
    pub eps3: Option<MixedSolution>,
    /// kx² − ly² = 4, odd solutions only
    pub eps4: Option<MixedSolution>,
    /// x² − kly² = 4, odd solutions only
    pub eps5: Option<PellSolution>,
    pub checks: Vec<IdentityCheck>,
}

impl RelationReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds != Some(false))
    }
}

/// Computes ε₁…ε₅ for D = kl and checks every applicable identity exactly.
///
/// The identities involving ε₄ or ε₅ presuppose odd solutions of
/// kx² − ly² = 4, so they are checked only when one exists.
pub fn lemma24_relations(k: u64, l: u64) -> Result<RelationReport> {
    check_mixed_params(k, l, 1)?;
    let d = k * l;
    if d % 2 == 0 {
        return domain(format!("kl must be odd, got {d}"));
    }
    if k < 2 {
        return domain("k must exceed 1");
    }
    let eps1 = minimal_solution(k, l, 1)?;
    let eps2 = fundamental_solution(d, PellRhs::PlusOne, false)?.expect("always solvable");
    let eps3 = minimal_solution(k, l, 2)?;
    let eps4 = minimal_solution(k, l, 4)?.filter(|s| s.x().is_odd() && s.y().is_odd());
    let eps5 = fundamental_solution(d, PellRhs::PlusFour, true)?;
    let unit2 = eps2.unit()?;

    let mut checks = Vec::new();
    let mut push = |id: u8, statement: &str, holds: Option<bool>, note: &str| {
        checks.push(IdentityCheck {
            id,
            statement: statement.into(),
            holds,
            note: note.into(),
        })
    };

    match &eps1 {
        Some(e1) => push(1, "ε₂ = ε₁²", Some(e1.square()? == unit2), ""),
        None => push(1, "ε₂ = ε₁²", None, "kx² − ly² = 1 is unsolvable"),
    }
    match &eps3 {
        Some(e3) => push(2, "ε₂ = ε₃²/2", Some(e3.square()? == unit2), ""),
        None => push(2, "ε₂ = ε₃²/2", None, "kx² − ly² = 2 is unsolvable"),
    }
    let no_odd = "kx² − ly² = 4 has no odd solution";
    match &eps4 {
        Some(e4) => {
            let half_sq = e4.square()?;
            push(3, "ε₂ = (ε₄/2)⁶", Some(quad_pow(&half_sq, 3)? == unit2), "");
            match &eps5 {
                Some(e5) => {
                    let u5 = e5.unit()?;
                    push(4, "ε₂ = (ε₅/2)³", Some(quad_pow(&u5, 3)? == unit2), "");
                    push(6, "ε₅ = ε₄²/2", Some(u5 == half_sq), "");
                }
                None => {
                    let note = "x² − kly² = 4 has no odd solution";
                    push(4, "ε₂ = (ε₅/2)³", Some(false), note);
                    push(6, "ε₅ = ε₄²/2", Some(false), note);
                }
            }
            let cube = mixed_pow(e4, 3)?;
            let holds = match &eps1 {
                Some(e1) => cube.x() == &(e1.x() * 2u32) && cube.y() == &(e1.y() * 2u32),
                None => false,
            };
            push(5, "ε₁ = (ε₄/2)³", Some(holds), "");
        }
        None => {
            push(3, "ε₂ = (ε₄/2)⁶", None, no_odd);
            push(4, "ε₂ = (ε₅/2)³", None, no_odd);
            push(5, "ε₁ = (ε₄/2)³", None, no_odd);
            push(6, "ε₅ = ε₄²/2", None, no_odd);
        }
    }
    checks.sort_by_key(|c| c.id);
    Ok(RelationReport {
        k,
        l,
        eps1,
        eps2,
        eps3,
        eps4,
        eps5,
        checks,
    })
}

/// Convenience: y-coordinate of the fundamental unit as u64, when it fits.
pub fn fundamental_y_u64(d: u64) -> Result<Option<u64>> {
    Ok(fundamental_solution(d, PellRhs::PlusOne, false)?.and_then(|s| s.y().to_u64()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy(s: &PellSolution) -> (u64, u64) {
        (s.x().to_u64().unwrap(), s.y().to_u64().unwrap())
    }

    fn mxy(s: &MixedSolution) -> (u64, u64) {
        (s.x().to_u64().unwrap(), s.y().to_u64().unwrap())
    }

    #[test]
    fn cf_examples() {
        assert_eq!(cf_sqrt(2).unwrap(), CFExpansion { a0: 1, period: vec![2] });
        assert_eq!(cf_sqrt(7).unwrap(), CFExpansion { a0: 2, period: vec![1, 1, 1, 4] });
        assert!(cf_sqrt(4).is_err());
    }

    #[test]
    fn fundamental_examples() {
        let s = fundamental_solution(3, PellRhs::PlusOne, false).unwrap().unwrap();
        assert_eq!(xy(&s), (2, 1));
        let s = fundamental_solution(5, PellRhs::PlusFour, true).unwrap().unwrap();
        assert_eq!(xy(&s), (3, 1));
        assert_eq!(s.denom(), 2);
        assert!(fundamental_solution(3, PellRhs::MinusOne, false).unwrap().is_none());
    }

    #[test]
    fn four_equations_by_residue_class() {
        // D ≡ 5 (mod 8) with an odd unit of norm −1.
        let s = fundamental_solution(5, PellRhs::MinusFour, true).unwrap().unwrap();
        assert_eq!(xy(&s), (1, 1));
        // D = 37: no odd solution, falls back to 2·(6, 1).
        assert!(fundamental_solution(37, PellRhs::MinusFour, true).unwrap().is_none());
        let s = fundamental_solution(37, PellRhs::MinusFour, false).unwrap().unwrap();
        assert_eq!(xy(&s), (12, 2));
        // 4 | D: x² − 12y² = 4 has (4, 1), not 2·(7, 2).
        let s = fundamental_solution(12, PellRhs::PlusFour, false).unwrap().unwrap();
        assert_eq!(xy(&s), (4, 1));
        // D = 3: 2·(2, 1).
        let s = fundamental_solution(3, PellRhs::PlusFour, false).unwrap().unwrap();
        assert_eq!(xy(&s), (4, 2));
        assert!(fundamental_solution(3, PellRhs::PlusFour, true).unwrap().is_none());
    }

    #[test]
    fn minimal_examples() {
        assert_eq!(mxy(&minimal_solution(3, 2, 1).unwrap().unwrap()), (1, 1));
        assert!(minimal_solution(2, 3, 1).unwrap().is_none());
        assert_eq!(mxy(&minimal_solution(5, 1, 4).unwrap().unwrap()), (1, 1));
        assert!(minimal_solution(1, 3, 1).is_err());
        assert!(minimal_solution(2, 3, 2).is_err());
    }

    #[test]
    fn solution_lists() {
        let s = minimal_solution(5, 1, 4).unwrap().unwrap();
        let list = mixed_solutions(&s, 13).unwrap();
        let got: Vec<_> = list.iter().take(3).map(mxy).collect();
        assert_eq!(got, vec![(1, 1), (2, 4), (5, 11)]);
        assert_eq!(mxy(&list[12]), (75025, 167761));

        let e = fundamental_solution(3, PellRhs::PlusOne, false).unwrap().unwrap();
        let got: Vec<_> = pell_solutions(&e, 3).unwrap().iter().map(xy).collect();
        assert_eq!(got, vec![(2, 1), (7, 4), (26, 15)]);
        assert_eq!(pell_solutions(&e, 1).unwrap(), vec![e]);
    }

    #[test]
    fn relation_examples() {
        let r = lemma24_relations(5, 1).unwrap();
        assert!(r.all_hold());
        assert_eq!(mxy(r.eps4.as_ref().unwrap()), (1, 1));
        assert_eq!(mxy(r.eps1.as_ref().unwrap()), (1, 2));
        assert_eq!(xy(r.eps5.as_ref().unwrap()), (3, 1));
        assert!(r.checks.iter().filter(|c| c.holds == Some(true)).count() >= 5);

        let r = lemma24_relations(3, 1).unwrap();
        assert_eq!(mxy(r.eps3.as_ref().unwrap()), (1, 1));
        assert_eq!(r.checks[1].holds, Some(true));
        assert_eq!(r.checks[0].holds, None);
    }
}
