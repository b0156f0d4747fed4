//! Exact arithmetic in real quadratic rings.
//!
//! [`QuadInt`] is (u + v√D)/denom with denom ∈ {1, 2}. [`MixedSolution`] is
//! a positive solution (x, y) of kx² − ly² = C, read as the irrational
//! number (x√k + y√l)/√C. The product of two mixed elements lands in
//! Z[√(kl)] (possibly with denominator 2), and a mixed element times a pure
//! one is mixed again, which is what [`mixed_mul`] dispatches on.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

pub(crate) fn check_radicand(d: u64) -> Result<()> {
    if d < 2 {
        return domain(format!("radicand must be at least 2, got {d}"));
    }
    let r = d.sqrt();
    if r * r == d {
        return domain(format!("radicand {d} is a perfect square"));
    }
    Ok(())
}

/// (u + v√D)/denom, kept canonical: denom is 2 only when u and v are both odd.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "QuadIntRepr", into = "QuadIntRepr")]
pub struct QuadInt {
    u: BigInt,
    v: BigInt,
    d: u64,
    denom: u8,
}

#[derive(Serialize, Deserialize)]
struct QuadIntRepr {
    #[serde(with = "crate::dec::int")]
    u: BigInt,
    #[serde(with = "crate::dec::int")]
    v: BigInt,
    d: u64,
    denom: u8,
}

impl TryFrom<QuadIntRepr> for QuadInt {
    type Error = crate::Error;
    fn try_from(r: QuadIntRepr) -> Result<Self> {
        QuadInt::new(r.u, r.v, r.d, r.denom)
    }
}

impl From<QuadInt> for QuadIntRepr {
    fn from(q: QuadInt) -> Self {
        QuadIntRepr {
            u: q.u,
            v: q.v,
            d: q.d,
            denom: q.denom,
        }
    }
}

impl QuadInt {
    /// Builds (u + v√d)/denom and reduces it.
    ///
    /// Half-integers (u, v odd) are only closed under multiplication when
    /// d ≡ 1 (mod 4), so they are rejected for other radicands.
    pub fn new(u: impl Into<BigInt>, v: impl Into<BigInt>, d: u64, denom: u8) -> Result<Self> {
        check_radicand(d)?;
        let (u, v) = (u.into(), v.into());
        match denom {
            1 => Ok(QuadInt { u, v, d, denom: 1 }),
            2 => {
                if u.is_even() != v.is_even() {
                    return domain(format!("({u} + {v}√{d})/2 has mixed parity"));
                }
                if u.is_even() {
                    return Ok(QuadInt {
                        u: u / 2,
                        v: v / 2,
                        d,
                        denom: 1,
                    });
                }
                if d % 4 != 1 {
                    return domain(format!(
                        "half-integer elements need D ≡ 1 (mod 4), got D = {d}"
                    ));
                }
                Ok(QuadInt { u, v, d, denom: 2 })
            }
            _ => domain(format!("denominator must be 1 or 2, got {denom}")),
        }
    }

    /// (a + b√d)/den for any positive den, provided the value lies in the ring.
    pub fn from_fraction(a: BigInt, b: BigInt, d: u64, den: &BigInt) -> Result<Self> {
        if !den.is_positive() {
            return domain("denominator must be positive");
        }
        let g = a.gcd(&b).gcd(den);
        let (a, b, den) = if g.is_zero() {
            (a, b, den.clone())
        } else {
            (a / &g, b / &g, den / &g)
        };
        if den.is_one() {
            QuadInt::new(a, b, d, 1)
        } else if den == BigInt::from(2) {
            QuadInt::new(a, b, d, 2)
        } else {
            domain(format!("({a} + {b}√{d})/{den} is not in the ring"))
        }
    }

    pub fn one(d: u64) -> Result<Self> {
        QuadInt::new(1, 0, d, 1)
    }

    pub fn u(&self) -> &BigInt {
        &self.u
    }

    pub fn v(&self) -> &BigInt {
        &self.v
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn denom(&self) -> u8 {
        self.denom
    }

    pub fn is_one(&self) -> bool {
        self.u.is_one() && self.v.is_zero() && self.denom == 1
    }

    pub fn conj(&self) -> QuadInt {
        QuadInt {
            u: self.u.clone(),
            v: -&self.v,
            d: self.d,
            denom: self.denom,
        }
    }

    pub fn neg(&self) -> QuadInt {
        QuadInt {
            u: -&self.u,
            v: -&self.v,
            d: self.d,
            denom: self.denom,
        }
    }

    /// The pair (X, Y) with self = (X + Y√D)/2.
    pub fn halves(&self) -> (BigInt, BigInt) {
        if self.denom == 2 {
            (self.u.clone(), self.v.clone())
        } else {
            (&self.u * 2, &self.v * 2)
        }
    }

    pub fn mul(&self, other: &QuadInt) -> Result<QuadInt> {
        quad_mul(self, other)
    }

    pub fn pow(&self, n: u64) -> Result<QuadInt> {
        quad_pow(self, n)
    }

    pub fn norm(&self) -> Result<BigInt> {
        quad_norm(self)
    }

    /// Exact quotient by a unit (norm ±1).
    pub fn div_unit(&self, unit: &QuadInt) -> Result<QuadInt> {
        let n = quad_norm(unit)?;
        let q = quad_mul(self, &unit.conj())?;
        if n.is_one() {
            Ok(q)
        } else if n == BigInt::from(-1) {
            Ok(q.neg())
        } else {
            domain(format!("{unit} has norm {n}, not a unit"))
        }
    }

    /// Sign of u + v√D as a real number.
    pub fn signum(&self) -> Sign {
        let (su, sv) = (self.u.sign(), self.v.sign());
        if su == sv || sv == Sign::NoSign {
            return su;
        }
        if su == Sign::NoSign {
            return sv;
        }
        // Opposite signs: compare u² with Dv².
        let lhs = &self.u * &self.u;
        let rhs = &self.v * &self.v * BigInt::from(self.d);
        match lhs.cmp(&rhs) {
            std::cmp::Ordering::Greater => su,
            std::cmp::Ordering::Less => sv,
            std::cmp::Ordering::Equal => Sign::NoSign,
        }
    }
}

impl std::fmt::Display for QuadInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let sign = if self.v.is_negative() { '-' } else { '+' };
        let body = format!("{} {} {}√{}", self.u, sign, self.v.abs(), self.d);
        if self.denom == 2 {
            write!(f, "({body})/2")
        } else {
            write!(f, "{body}")
        }
    }
}

/// Ring product in canonical form.
pub fn quad_mul(p: &QuadInt, q: &QuadInt) -> Result<QuadInt> {
    if p.d != q.d {
        return domain(format!("radicands differ: {} vs {}", p.d, q.d));
    }
    let d = BigInt::from(p.d);
    let a = &p.u * &q.u + &d * &p.v * &q.v;
    let b = &p.u * &q.v + &p.v * &q.u;
    let den = BigInt::from(p.denom as u32 * q.denom as u32);
    QuadInt::from_fraction(a, b, p.d, &den)
}

/// p^n by repeated squaring.
pub fn quad_pow(p: &QuadInt, n: u64) -> Result<QuadInt> {
    let mut acc = QuadInt::one(p.d)?;
    let mut base = p.clone();
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc = quad_mul(&acc, &base)?;
        }
        e >>= 1;
        if e > 0 {
            base = quad_mul(&base, &base)?;
        }
    }
    Ok(acc)
}

/// (u² − Dv²)/denom².
pub fn quad_norm(p: &QuadInt) -> Result<BigInt> {
    let raw = &p.u * &p.u - BigInt::from(p.d) * &p.v * &p.v;
    let den = BigInt::from(p.denom as u32 * p.denom as u32);
    let (q, r) = raw.div_rem(&den);
    if !r.is_zero() {
        return domain(format!("{p} has non-integral norm {raw}/{den}"));
    }
    Ok(q)
}

/// A positive solution (x, y) of kx² − ly² = C, standing for (x√k + y√l)/√C.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MixedRepr", into = "MixedRepr")]
pub struct MixedSolution {
    x: BigUint,
    y: BigUint,
    k: u64,
    l: u64,
    c: u8,
}

#[derive(Serialize, Deserialize)]
struct MixedRepr {
    #[serde(with = "crate::dec::nat")]
    x: BigUint,
    #[serde(with = "crate::dec::nat")]
    y: BigUint,
    k: u64,
    l: u64,
    c: u8,
}

impl TryFrom<MixedRepr> for MixedSolution {
    type Error = crate::Error;
    fn try_from(r: MixedRepr) -> Result<Self> {
        MixedSolution::new(r.x, r.y, r.k, r.l, r.c)
    }
}

impl From<MixedSolution> for MixedRepr {
    fn from(s: MixedSolution) -> Self {
        MixedRepr {
            x: s.x,
            y: s.y,
            k: s.k,
            l: s.l,
            c: s.c,
        }
    }
}

/// Checks the standing hypotheses on (k, l, C): coprime, kl nonsquare,
/// C ∈ {1, 2, 4}, and kl odd when C is 2 or 4.
pub fn check_mixed_params(k: u64, l: u64, c: u8) -> Result<()> {
    if k == 0 || l == 0 {
        return domain("k and l must be positive");
    }
    if !matches!(c, 1 | 2 | 4) {
        return domain(format!("C must be 1, 2 or 4, got {c}"));
    }
    if k.gcd(&l) != 1 {
        return domain(format!("k = {k} and l = {l} are not coprime"));
    }
    let d = k
        .checked_mul(l)
        .ok_or_else(|| crate::Error::Domain("k·l overflows u64".into()))?;
    check_radicand(d)?;
    if c != 1 && d % 2 == 0 {
        return domain(format!("C = {c} needs kl odd, got kl = {d}"));
    }
    Ok(())
}

impl MixedSolution {
    /// Validates kx² − ly² = C exactly.
    ///
    /// Both parities are accepted for C = 4: odd minimal solutions have even
    /// powers, e.g. (2, 4) = ((√5 + 1)/2)³ over 5x² − y² = 4.
    pub fn new(x: impl Into<BigUint>, y: impl Into<BigUint>, k: u64, l: u64, c: u8) -> Result<Self> {
        check_mixed_params(k, l, c)?;
        let (x, y) = (x.into(), y.into());
        if x.is_zero() || y.is_zero() {
            return domain("mixed solutions must be positive");
        }
        let lhs = BigInt::from(k) * BigInt::from(&x * &x);
        let rhs = BigInt::from(l) * BigInt::from(&y * &y) + BigInt::from(c);
        if lhs != rhs {
            return domain(format!("{k}·{x}² − {l}·{y}² ≠ {c}"));
        }
        Ok(MixedSolution { x, y, k, l, c })
    }

    pub fn x(&self) -> &BigUint {
        &self.x
    }

    pub fn y(&self) -> &BigUint {
        &self.y
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn l(&self) -> u64 {
        self.l
    }

    pub fn c(&self) -> u8 {
        self.c
    }

    /// The radicand kl of the pure ring its even powers live in.
    pub fn d(&self) -> u64 {
        self.k * self.l
    }

    pub fn same_equation(&self, other: &MixedSolution) -> bool {
        (self.k, self.l, self.c) == (other.k, other.l, other.c)
    }

    /// α² as an element of Z[√(kl)] (or its half-integer extension).
    pub fn square(&self) -> Result<QuadInt> {
        match mixed_mul(self, &RingElement::Mixed(self.clone()))? {
            RingElement::Pure(q) => Ok(q),
            RingElement::Mixed(_) => unreachable!("mixed times mixed is pure"),
        }
    }
}

impl std::fmt::Display for MixedSolution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({}, {}) on {}x² − {}y² = {}",
            self.x, self.y, self.k, self.l, self.c
        )
    }
}

/// Either side of the mixed/pure dispatch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RingElement {
    Mixed(MixedSolution),
    Pure(QuadInt),
}

/// Product of a mixed element with a mixed or pure one.
///
/// Mixed × mixed = (kx₁x₂ + ly₁y₂ + (x₁y₂ + x₂y₁)√kl)/C, a pure element.
/// Mixed × (u + v√kl)/e = ((xu + lyv)√k + (kxv + yu)√l)/(e√C), mixed again.
pub fn mixed_mul(s: &MixedSolution, t: &RingElement) -> Result<RingElement> {
    match t {
        RingElement::Mixed(t) => {
            if !s.same_equation(t) {
                return domain("mixed factors belong to different equations");
            }
            let (k, l) = (BigInt::from(s.k), BigInt::from(s.l));
            let (x1, y1) = (BigInt::from(s.x.clone()), BigInt::from(s.y.clone()));
            let (x2, y2) = (BigInt::from(t.x.clone()), BigInt::from(t.y.clone()));
            let a = &k * &x1 * &x2 + &l * &y1 * &y2;
            let b = &x1 * &y2 + &x2 * &y1;
            QuadInt::from_fraction(a, b, s.d(), &BigInt::from(s.c)).map(RingElement::Pure)
        }
        RingElement::Pure(q) => {
            if q.d != s.d() {
                return domain(format!("pure factor lives over √{}, not √{}", q.d, s.d()));
            }
            let (x, y) = signed_mixed_times_pure(
                &BigInt::from(s.x.clone()),
                &BigInt::from(s.y.clone()),
                s.k,
                s.l,
                q,
            )?;
            match (x.to_biguint(), y.to_biguint()) {
                (Some(x), Some(y)) if !x.is_zero() && !y.is_zero() => {
                    MixedSolution::new(x, y, s.k, s.l, s.c).map(RingElement::Mixed)
                }
                _ => domain(format!("product ({x}, {y}) is not a positive solution")),
            }
        }
    }
}

/// (x√k + y√l)·q with signed coordinates, as the coordinate pair.
pub(crate) fn signed_mixed_times_pure(
    x: &BigInt,
    y: &BigInt,
    k: u64,
    l: u64,
    q: &QuadInt,
) -> Result<(BigInt, BigInt)> {
    let (k, l) = (BigInt::from(k), BigInt::from(l));
    let nx = x * &q.u + &l * y * &q.v;
    let ny = &k * x * &q.v + y * &q.u;
    let den = BigInt::from(q.denom);
    let (qx, rx) = nx.div_rem(&den);
    let (qy, ry) = ny.div_rem(&den);
    if !rx.is_zero() || !ry.is_zero() {
        return domain("mixed product leaves the lattice");
    }
    Ok((qx, qy))
}

/// s/t for two mixed elements of the same equation, a pure element.
///
/// Uses t⁻¹ = (x√k − y√l)/√C, valid because kx² − ly² = C.
pub fn mixed_div(s: &MixedSolution, t: &MixedSolution) -> Result<QuadInt> {
    if !s.same_equation(t) {
        return domain("mixed operands belong to different equations");
    }
    let (k, l) = (BigInt::from(s.k), BigInt::from(s.l));
    let (x1, y1) = (BigInt::from(s.x.clone()), BigInt::from(s.y.clone()));
    let (x2, y2) = (BigInt::from(t.x.clone()), BigInt::from(t.y.clone()));
    let a = &k * &x1 * &x2 - &l * &y1 * &y2;
    let b = &x2 * &y1 - &x1 * &y2;
    QuadInt::from_fraction(a, b, s.d(), &BigInt::from(s.c))
}

/// The n-th solution αⁿ for odd n.
pub fn mixed_pow(s: &MixedSolution, n: u64) -> Result<MixedSolution> {
    if n % 2 == 0 {
        return domain(format!(
            "mixed_pow needs an odd exponent, got {n}; even powers are pure, use mixed_mul"
        ));
    }
    let eps = s.square()?;
    let e = quad_pow(&eps, (n - 1) / 2)?;
    match mixed_mul(s, &RingElement::Pure(e))? {
        RingElement::Mixed(m) => Ok(m),
        RingElement::Pure(_) => unreachable!("mixed times pure is mixed"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(u: i64, v: i64, d: u64, den: u8) -> QuadInt {
        QuadInt::new(u, v, d, den).unwrap()
    }

    #[test]
    fn mul_examples() {
        assert_eq!(quad_mul(&q(2, 1, 3, 1), &q(2, 1, 3, 1)).unwrap(), q(7, 4, 3, 1));
        let x = q(5, -3, 7, 1);
        assert_eq!(quad_mul(&x, &QuadInt::one(7).unwrap()).unwrap(), x);
        assert!(quad_mul(&q(3, 1, 5, 2), &q(3, -1, 5, 2)).unwrap().is_one());
        assert!(quad_mul(&q(1, 1, 5, 1), &q(1, 1, 7, 1)).is_err());
    }

    #[test]
    fn pow_examples() {
        assert_eq!(quad_pow(&q(2, 1, 3, 1), 3).unwrap(), q(26, 15, 3, 1));
        assert_eq!(quad_pow(&q(3, 1, 5, 2), 5).unwrap(), q(123, 55, 5, 2));
        assert!(quad_pow(&q(9, 4, 5, 1), 0).unwrap().is_one());
    }

    #[test]
    fn norm_examples() {
        assert_eq!(quad_norm(&q(26, 15, 3, 1)).unwrap(), BigInt::from(1));
        assert_eq!(quad_norm(&q(3, 1, 5, 2)).unwrap(), BigInt::from(1));
        assert_eq!(quad_norm(&q(2, 1, 5, 1)).unwrap(), BigInt::from(-1));
        // (1 + √13)/2 has norm −3, (1 + √17)/2 has norm −4.
        assert_eq!(quad_norm(&q(1, 1, 13, 2)).unwrap(), BigInt::from(-3));
    }

    #[test]
    fn canonical_form() {
        let a = q(4, 2, 5, 2);
        assert_eq!((a.u().clone(), a.v().clone(), a.denom()), (2.into(), 1.into(), 1));
        assert!(QuadInt::new(1, 2, 5, 2).is_err());
        assert!(QuadInt::new(1, 1, 3, 2).is_err());
        assert!(QuadInt::new(1, 1, 4, 1).is_err());
    }

    fn golden() -> MixedSolution {
        MixedSolution::new(1u32, 1u32, 5, 1, 4).unwrap()
    }

    #[test]
    fn mixed_square_and_identity() {
        let s = golden();
        assert_eq!(s.square().unwrap(), q(3, 1, 5, 2));
        let id = RingElement::Pure(QuadInt::one(5).unwrap());
        assert_eq!(mixed_mul(&s, &id).unwrap(), RingElement::Mixed(s.clone()));
    }

    #[test]
    fn mixed_powers() {
        let s = golden();
        let p5 = mixed_pow(&s, 5).unwrap();
        assert_eq!((p5.x().clone(), p5.y().clone()), (5u32.into(), 11u32.into()));
        let p3 = mixed_pow(&s, 3).unwrap();
        assert_eq!((p3.x().clone(), p3.y().clone()), (2u32.into(), 4u32.into()));
        let p25 = mixed_pow(&s, 25).unwrap();
        assert_eq!(
            (p25.x().clone(), p25.y().clone()),
            (75025u32.into(), 167761u32.into())
        );
        assert_eq!(mixed_pow(&s, 1).unwrap(), s);
        assert!(mixed_pow(&s, 2).is_err());
    }

    #[test]
    fn mixed_division_inverts_powers() {
        let s = golden();
        let p7 = mixed_pow(&s, 7).unwrap();
        let quotient = mixed_div(&p7, &s).unwrap();
        assert_eq!(quotient, quad_pow(&s.square().unwrap(), 3).unwrap());
    }

    #[test]
    fn mixed_validation() {
        assert!(MixedSolution::new(1u32, 1u32, 5, 1, 3).is_err());
        assert!(MixedSolution::new(1u32, 1u32, 6, 2, 4).is_err());
        assert!(MixedSolution::new(2u32, 1u32, 5, 1, 4).is_err());
        assert!(MixedSolution::new(1u32, 1u32, 3, 2, 1).is_ok());
    }

    #[test]
    fn serde_round_trip() {
        let s = mixed_pow(&golden(), 25).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.contains("\"75025\""));
        let back: MixedSolution = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        let bad = r#"{"x":"2","y":"1","k":5,"l":1,"c":4}"#;
        assert!(serde_json::from_str::<MixedSolution>(bad).is_err());
    }
}
