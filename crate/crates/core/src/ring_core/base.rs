use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::gf::{invmod, is_prime, powmod, GaloisField};
use crate::error::{Error, Result};

/// An exact coefficient ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseRing {
    /// F_{p^e}.
    Finite(GaloisField),
    /// The field ℚ.
    Rationals,
    /// ℤ localized at finitely many primes: fractions whose denominator is
    /// coprime to every listed prime. Primes are kept sorted.
    Localized(Vec<u64>),
    /// ℤ/p^n, a precision-n model of the p-adic integers.
    Truncated { p: u64, n: u32, modulus: u64 },
    Product(Vec<BaseRing>),
}

/// A ring element in canonical form. Which variant is used depends on the ring:
/// `Int` for finite fields (field code) and truncated rings (reduced residue),
/// `Rat` for the rationals and localizations, `Tuple` for products.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingElem {
    Int(u64),
    Rat(BigRational),
    Tuple(Vec<RingElem>),
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(n: &BigInt, p: u64) -> u32 {
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    if n.is_zero() {
        return u32::MAX;
    }
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    v
}

/// Valuation of a rational; `i64::MAX` for zero.
pub fn rat_valuation(x: &BigRational, p: u64) -> i64 {
    if x.is_zero() {
        return i64::MAX;
    }
    valuation(x.numer(), p) as i64 - valuation(x.denom(), p) as i64
}

fn divisible(n: &BigInt, p: u64) -> bool {
    (n % BigInt::from(p)).is_zero()
}

/// Image of a p-integral rational in ℤ/m, where m is a power of p.
fn rat_mod(x: &BigRational, p: u64, m: u64) -> Result<u64> {
    if divisible(x.denom(), p) {
        return Err(Error::NotInDomain(format!("denominator of {x} divisible by {p}")));
    }
    let mb = BigInt::from(m);
    let n = x.numer().mod_floor(&mb).to_u64().unwrap();
    let d = x.denom().mod_floor(&mb).to_u64().unwrap();
    let di = invmod(d, m).expect("denominator coprime to p");
    Ok(((n as u128 * di as u128) % m as u128) as u64)
}

impl BaseRing {
    pub fn finite_field(p: u64, e: u32) -> Result<Self> {
        Ok(BaseRing::Finite(GaloisField::new(p, e)?))
    }

    pub fn prime_field(p: u64) -> Result<Self> {
        Self::finite_field(p, 1)
    }

    /// ℤ localized at distinct odd primes.
    pub fn localized(primes: &[u64]) -> Result<Self> {
        Self::localized_with(primes, false)
    }

    /// As [`BaseRing::localized`], optionally allowing the prime 2.
    pub fn localized_with(primes: &[u64], allow_two: bool) -> Result<Self> {
        let mut ps = primes.to_vec();
        ps.sort_unstable();
        ps.dedup();
        if ps.len() != primes.len() {
            return Err(Error::Invalid("primes must be distinct".into()));
        }
        if ps.is_empty() {
            return Err(Error::Invalid("at least one prime is required".into()));
        }
        for &p in &ps {
            if !is_prime(p) {
                return Err(Error::Invalid(format!("{p} is not prime")));
            }
            if p == 2 && !allow_two {
                return Err(Error::HypothesisViolated("the prime 2 is not allowed".into()));
            }
        }
        Ok(BaseRing::Localized(ps))
    }

    pub fn truncated(p: u64, n: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Invalid(format!("{p} is not prime")));
        }
        if n == 0 {
            return Err(Error::Invalid("precision must be at least 1".into()));
        }
        let modulus = p
            .checked_pow(n)
            .filter(|&m| m < (1u64 << 62))
            .ok_or_else(|| Error::UnsupportedRing(format!("{p}^{n} is too large")))?;
        Ok(BaseRing::Truncated { p, n, modulus })
    }

    pub fn product(parts: Vec<BaseRing>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Invalid("empty product".into()));
        }
        Ok(BaseRing::Product(parts))
    }

    pub fn is_field(&self) -> bool {
        matches!(self, BaseRing::Finite(_) | BaseRing::Rationals)
    }

    /// Number of elements, for finite rings.
    pub fn size(&self) -> Option<u64> {
        match self {
            BaseRing::Finite(f) => Some(f.order()),
            BaseRing::Truncated { modulus, .. } => Some(*modulus),
            BaseRing::Product(parts) => parts.iter().try_fold(1u64, |acc, r| acc.checked_mul(r.size()?)),
            _ => None,
        }
    }

    /// The residue characteristic of a local finite ring.
    pub fn residue_prime(&self) -> Option<u64> {
        match self {
            BaseRing::Finite(f) => Some(f.p()),
            BaseRing::Truncated { p, .. } => Some(*p),
            _ => None,
        }
    }

    /// Whether 2 is invertible.
    pub fn two_is_unit(&self) -> bool {
        let two = self.from_int(2);
        self.is_unit(&two)
    }

    pub fn zero(&self) -> RingElem {
        match self {
            BaseRing::Finite(_) | BaseRing::Truncated { .. } => RingElem::Int(0),
            BaseRing::Rationals | BaseRing::Localized(_) => RingElem::Rat(BigRational::zero()),
            BaseRing::Product(parts) => RingElem::Tuple(parts.iter().map(|r| r.zero()).collect()),
        }
    }

    pub fn one(&self) -> RingElem {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> RingElem {
        match self {
            BaseRing::Finite(f) => RingElem::Int(f.from_int(n)),
            BaseRing::Truncated { modulus, .. } => RingElem::Int(n.rem_euclid(*modulus as i64) as u64),
            BaseRing::Rationals | BaseRing::Localized(_) => RingElem::Rat(rat_int(n)),
            BaseRing::Product(parts) => RingElem::Tuple(parts.iter().map(|r| r.from_int(n)).collect()),
        }
    }

    /// Image of a rational number, when it lies in the ring.
    pub fn from_rational(&self, x: &BigRational) -> Result<RingElem> {
        match self {
            BaseRing::Finite(f) => Ok(RingElem::Int(rat_mod(x, f.p(), f.p())?)),
            BaseRing::Truncated { p, modulus, .. } => Ok(RingElem::Int(rat_mod(x, *p, *modulus)?)),
            BaseRing::Rationals => Ok(RingElem::Rat(x.clone())),
            BaseRing::Localized(ps) => {
                if let Some(p) = ps.iter().find(|&&p| divisible(x.denom(), p)) {
                    return Err(Error::NotInDomain(format!("denominator of {x} divisible by {p}")));
                }
                Ok(RingElem::Rat(x.clone()))
            }
            BaseRing::Product(parts) => Ok(RingElem::Tuple(
                parts.iter().map(|r| r.from_rational(x)).collect::<Result<Vec<_>>>()?,
            )),
        }
    }

    /// Parse "a", "-a" or "a/b".
    pub fn parse(&self, s: &str) -> Result<RingElem> {
        let x = parse_rational(s)?;
        self.from_rational(&x)
    }

    /// Whether `x` is a well-formed canonical element of this ring.
    pub fn contains(&self, x: &RingElem) -> bool {
        match (self, x) {
            (BaseRing::Finite(f), RingElem::Int(a)) => *a < f.order(),
            (BaseRing::Truncated { modulus, .. }, RingElem::Int(a)) => a < modulus,
            (BaseRing::Rationals, RingElem::Rat(_)) => true,
            (BaseRing::Localized(ps), RingElem::Rat(r)) => ps.iter().all(|&p| !divisible(r.denom(), p)),
            (BaseRing::Product(parts), RingElem::Tuple(xs)) => {
                parts.len() == xs.len() && parts.iter().zip(xs).all(|(r, x)| r.contains(x))
            }
            _ => false,
        }
    }

    pub fn add(&self, a: &RingElem, b: &RingElem) -> RingElem {
        match (self, a, b) {
            (BaseRing::Finite(f), RingElem::Int(x), RingElem::Int(y)) => RingElem::Int(f.add(*x, *y)),
            (BaseRing::Truncated { modulus, .. }, RingElem::Int(x), RingElem::Int(y)) => {
                RingElem::Int(((*x as u128 + *y as u128) % *modulus as u128) as u64)
            }
            (_, RingElem::Rat(x), RingElem::Rat(y)) => RingElem::Rat(x + y),
            (BaseRing::Product(parts), RingElem::Tuple(xs), RingElem::Tuple(ys)) => {
                RingElem::Tuple(parts.iter().zip(xs.iter().zip(ys)).map(|(r, (x, y))| r.add(x, y)).collect())
            }
            _ => panic!("element does not belong to {self:?}"),
        }
    }

    pub fn neg(&self, a: &RingElem) -> RingElem {
        match (self, a) {
            (BaseRing::Finite(f), RingElem::Int(x)) => RingElem::Int(f.neg(*x)),
            (BaseRing::Truncated { modulus, .. }, RingElem::Int(x)) => RingElem::Int((modulus - x) % modulus),
            (_, RingElem::Rat(x)) => RingElem::Rat(-x),
            (BaseRing::Product(parts), RingElem::Tuple(xs)) => {
                RingElem::Tuple(parts.iter().zip(xs).map(|(r, x)| r.neg(x)).collect())
            }
            _ => panic!("element does not belong to {self:?}"),
        }
    }

    pub fn sub(&self, a: &RingElem, b: &RingElem) -> RingElem {
        match (self, a, b) {
            (BaseRing::Finite(f), RingElem::Int(x), RingElem::Int(y)) => RingElem::Int(f.sub(*x, *y)),
            (_, RingElem::Rat(x), RingElem::Rat(y)) => RingElem::Rat(x - y),
            _ => self.add(a, &self.neg(b)),
        }
    }

    pub fn mul(&self, a: &RingElem, b: &RingElem) -> RingElem {
        match (self, a, b) {
            (BaseRing::Finite(f), RingElem::Int(x), RingElem::Int(y)) => RingElem::Int(f.mul(*x, *y)),
            (BaseRing::Truncated { modulus, .. }, RingElem::Int(x), RingElem::Int(y)) => {
                RingElem::Int(((*x as u128 * *y as u128) % *modulus as u128) as u64)
            }
            (_, RingElem::Rat(x), RingElem::Rat(y)) => RingElem::Rat(x * y),
            (BaseRing::Product(parts), RingElem::Tuple(xs), RingElem::Tuple(ys)) => {
                RingElem::Tuple(parts.iter().zip(xs.iter().zip(ys)).map(|(r, (x, y))| r.mul(x, y)).collect())
            }
            _ => panic!("element does not belong to {self:?}"),
        }
    }

    pub fn is_zero(&self, a: &RingElem) -> bool {
        match a {
            RingElem::Int(x) => *x == 0,
            RingElem::Rat(x) => x.is_zero(),
            RingElem::Tuple(xs) => match self {
                BaseRing::Product(parts) => parts.iter().zip(xs).all(|(r, x)| r.is_zero(x)),
                _ => false,
            },
        }
    }

    pub fn is_one(&self, a: &RingElem) -> bool {
        *a == self.one()
    }

    pub fn is_unit(&self, a: &RingElem) -> bool {
        match (self, a) {
            (BaseRing::Finite(_), RingElem::Int(x)) => *x != 0,
            (BaseRing::Truncated { p, .. }, RingElem::Int(x)) => x % p != 0,
            (BaseRing::Rationals, RingElem::Rat(x)) => !x.is_zero(),
            (BaseRing::Localized(ps), RingElem::Rat(x)) => {
                !x.is_zero() && ps.iter().all(|&p| !divisible(x.numer(), p))
            }
            (BaseRing::Product(parts), RingElem::Tuple(xs)) => parts.iter().zip(xs).all(|(r, x)| r.is_unit(x)),
            _ => false,
        }
    }

    pub fn inv(&self, a: &RingElem) -> Option<RingElem> {
        match (self, a) {
            (BaseRing::Finite(f), RingElem::Int(x)) => f.inv(*x).map(RingElem::Int),
            (BaseRing::Truncated { modulus, .. }, RingElem::Int(x)) => invmod(*x, *modulus).map(RingElem::Int),
            (BaseRing::Rationals | BaseRing::Localized(_), RingElem::Rat(x)) => {
                if self.is_unit(a) {
                    Some(RingElem::Rat(x.recip()))
                } else {
                    None
                }
            }
            (BaseRing::Product(parts), RingElem::Tuple(xs)) => Some(RingElem::Tuple(
                parts.iter().zip(xs).map(|(r, x)| r.inv(x)).collect::<Option<Vec<_>>>()?,
            )),
            _ => None,
        }
    }

    pub fn pow(&self, a: &RingElem, mut k: u64) -> RingElem {
        match (self, a) {
            (BaseRing::Finite(f), RingElem::Int(x)) => RingElem::Int(f.pow(*x, k)),
            (BaseRing::Truncated { modulus, .. }, RingElem::Int(x)) => RingElem::Int(powmod(*x, k, *modulus)),
            _ => {
                let mut base = a.clone();
                let mut acc = self.one();
                while k > 0 {
                    if k & 1 == 1 {
                        acc = self.mul(&acc, &base);
                    }
                    base = self.mul(&base, &base);
                    k >>= 1;
                }
                acc
            }
        }
    }

    /// All elements, for finite rings, in canonical order.
    pub fn elements(&self) -> Result<Vec<RingElem>> {
        match self {
            BaseRing::Finite(f) => Ok((0..f.order()).map(RingElem::Int).collect()),
            BaseRing::Truncated { modulus, .. } => Ok((0..*modulus).map(RingElem::Int).collect()),
            BaseRing::Product(parts) => {
                let lists = parts.iter().map(|r| r.elements()).collect::<Result<Vec<_>>>()?;
                let mut out = vec![vec![]];
                for list in &lists {
                    let mut next = Vec::with_capacity(out.len() * list.len());
                    for prefix in &out {
                        for x in list {
                            let mut v: Vec<RingElem> = prefix.clone();
                            v.push(x.clone());
                            next.push(v);
                        }
                    }
                    out = next;
                }
                Ok(out.into_iter().map(RingElem::Tuple).collect())
            }
            _ => Err(Error::UnsupportedRing(format!("{} is infinite", self.name()))),
        }
    }

    /// Dense integer index of an element of a finite ring (for hashing).
    pub fn index_of(&self, a: &RingElem) -> u64 {
        match (self, a) {
            (_, RingElem::Int(x)) => *x,
            (BaseRing::Product(parts), RingElem::Tuple(xs)) => {
                let mut acc = 0u64;
                for (r, x) in parts.iter().zip(xs) {
                    acc = acc * r.size().unwrap_or(1) + r.index_of(x);
                }
                acc
            }
            _ => panic!("index_of on an infinite ring"),
        }
    }

    /// Rational value of an element of ℚ or a localization.
    pub fn to_rational(&self, a: &RingElem) -> Option<BigRational> {
        match a {
            RingElem::Rat(x) => Some(x.clone()),
            _ => None,
        }
    }

    /// Canonical non-negative integer lift of an element of ℤ/p^n or F_p.
    pub fn lift(&self, a: &RingElem) -> Option<BigInt> {
        match (self, a) {
            (BaseRing::Truncated { .. }, RingElem::Int(x)) => Some(BigInt::from(*x)),
            (BaseRing::Finite(f), RingElem::Int(x)) if f.degree() == 1 => Some(BigInt::from(*x)),
            _ => None,
        }
    }

    /// Symmetric integer lift in (-m/2, m/2], used for readable output.
    pub fn lift_symmetric(&self, a: &RingElem) -> Option<i64> {
        let m = match self {
            BaseRing::Truncated { modulus, .. } => *modulus,
            BaseRing::Finite(f) if f.degree() == 1 => f.p(),
            _ => return None,
        };
        let x = self.lift(a)?.to_i64()?;
        Some(if x > (m as i64) / 2 { x - m as i64 } else { x })
    }

    pub fn format(&self, a: &RingElem) -> String {
        match (self, a) {
            (BaseRing::Finite(f), RingElem::Int(x)) => f.format(*x),
            (_, RingElem::Int(x)) => x.to_string(),
            (_, RingElem::Rat(x)) => x.to_string(),
            (BaseRing::Product(parts), RingElem::Tuple(xs)) => {
                let inner: Vec<String> = parts.iter().zip(xs).map(|(r, x)| r.format(x)).collect();
                format!("({})", inner.join(","))
            }
            (_, RingElem::Tuple(xs)) => format!("{xs:?}"),
        }
    }

    pub fn name(&self) -> String {
        match self {
            BaseRing::Finite(f) if f.degree() == 1 => format!("F_{}", f.p()),
            BaseRing::Finite(f) => format!("F_{}^{}", f.p(), f.degree()),
            BaseRing::Rationals => "Q".into(),
            BaseRing::Localized(ps) => {
                let s: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
                format!("Z_({})", s.join(","))
            }
            BaseRing::Truncated { p, n, .. } => format!("Z/{p}^{n}"),
            BaseRing::Product(parts) => parts.iter().map(|r| r.name()).collect::<Vec<_>>().join(" x "),
        }
    }
}

impl fmt::Display for BaseRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Invalid(format!("cannot parse '{s}' as a rational number"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(BigRational::new(n, d))
    } else {
        let n: BigInt = s.parse().map_err(|_| bad())?;
        Ok(BigRational::from_integer(n))
    }
}

/// True when `x` is an integer power of primes drawn from `primes`, up to sign.
pub fn is_s_unit_free(x: &BigInt, primes: &[u64]) -> bool {
    let mut n = x.abs();
    for &p in primes {
        let pb = BigInt::from(p);
        while !n.is_zero() && (&n % &pb).is_zero() {
            n /= &pb;
        }
    }
    n.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn is_unit_examples() {
        let f5 = BaseRing::prime_field(5).unwrap();
        assert!(f5.is_unit(&f5.from_int(2)));
        let z35 = BaseRing::localized(&[3, 5]).unwrap();
        assert!(z35.is_unit(&z35.from_rational(&rat(7, 2)).unwrap()));
        assert!(!z35.is_unit(&z35.from_int(3)));
        let z81 = BaseRing::truncated(3, 4).unwrap();
        assert!(z81.is_unit(&z81.from_int(4)));
        assert!(!z81.is_unit(&z81.from_int(6)));
    }

    #[test]
    fn localized_rejects_bad_denominators() {
        let z3 = BaseRing::localized(&[3]).unwrap();
        assert!(z3.from_rational(&rat(1, 3)).is_err());
        assert!(z3.from_rational(&rat(1, 5)).is_ok());
        assert!(BaseRing::localized(&[2]).is_err());
        assert!(BaseRing::localized(&[3, 3]).is_err());
    }

    #[test]
    fn products_are_componentwise() {
        let r = BaseRing::product(vec![BaseRing::prime_field(3).unwrap(), BaseRing::prime_field(5).unwrap()])
            .unwrap();
        let x = r.from_int(2);
        assert_eq!(x, RingElem::Tuple(vec![RingElem::Int(2), RingElem::Int(2)]));
        let y = r.inv(&x).unwrap();
        assert!(r.is_one(&r.mul(&x, &y)));
        assert_eq!(r.elements().unwrap().len(), 15);
        assert!(!r.is_unit(&r.from_int(3)));
    }

    #[test]
    fn parse_and_format() {
        let q = BaseRing::Rationals;
        assert_eq!(q.format(&q.parse("-6/4").unwrap()), "-3/2");
        assert!(q.parse("1/0").is_err());
        let f9 = BaseRing::finite_field(3, 2).unwrap();
        assert_eq!(f9.format(&RingElem::Int(5)), "t+2");
    }

    #[test]
    fn s_unit_free() {
        assert!(is_s_unit_free(&BigInt::from(-45), &[3, 5]));
        assert!(!is_s_unit_free(&BigInt::from(14), &[3, 5]));
    }
}
