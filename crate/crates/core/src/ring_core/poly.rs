//! Univariate polynomials over a field, low degree first.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::base::{BaseRing, RingElem};

pub type Poly = Vec<RingElem>;

pub fn trim(ring: &BaseRing, mut a: Poly) -> Poly {
    while a.last().is_some_and(|x| ring.is_zero(x)) {
        a.pop();
    }
    a
}

pub fn degree(a: &Poly) -> Option<usize> {
    if a.is_empty() {
        None
    } else {
        Some(a.len() - 1)
    }
}

pub fn add(ring: &BaseRing, a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    let z = ring.zero();
    let out = (0..n).map(|i| ring.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z))).collect();
    trim(ring, out)
}

pub fn sub(ring: &BaseRing, a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    let z = ring.zero();
    let out = (0..n).map(|i| ring.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z))).collect();
    trim(ring, out)
}

pub fn mul(ring: &BaseRing, a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![ring.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = ring.add(&out[i + j], &ring.mul(x, y));
        }
    }
    trim(ring, out)
}

pub fn scale(ring: &BaseRing, c: &RingElem, a: &Poly) -> Poly {
    trim(ring, a.iter().map(|x| ring.mul(c, x)).collect())
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem(ring: &BaseRing, a: &Poly, b: &Poly) -> (Poly, Poly) {
    let b = trim(ring, b.clone());
    let db = b.len() - 1;
    let lead_inv = ring.inv(&b[db]).expect("leading coefficient is invertible");
    let mut r = trim(ring, a.clone());
    if r.len() <= db {
        return (vec![], r);
    }
    let mut q = vec![ring.zero(); r.len() - db];
    while r.len() > db {
        let k = r.len() - 1 - db;
        let c = ring.mul(r.last().unwrap(), &lead_inv);
        for (i, bi) in b.iter().enumerate() {
            r[k + i] = ring.sub(&r[k + i], &ring.mul(&c, bi));
        }
        q[k] = c;
        r.pop();
        r = trim(ring, r);
    }
    (trim(ring, q), r)
}

pub fn monic(ring: &BaseRing, a: &Poly) -> Poly {
    match a.last() {
        None => vec![],
        Some(l) => scale(ring, &ring.inv(l).unwrap(), a),
    }
}

pub fn gcd(ring: &BaseRing, a: &Poly, b: &Poly) -> Poly {
    let (mut x, mut y) = (trim(ring, a.clone()), trim(ring, b.clone()));
    while !y.is_empty() {
        let (_, r) = divrem(ring, &x, &y);
        x = y;
        y = r;
    }
    monic(ring, &x)
}

/// (g, s, t) with s a + t b = g monic.
pub fn ext_gcd(ring: &BaseRing, a: &Poly, b: &Poly) -> (Poly, Poly, Poly) {
    let (mut r0, mut r1) = (trim(ring, a.clone()), trim(ring, b.clone()));
    let (mut s0, mut s1) = (vec![ring.one()], vec![]);
    let (mut t0, mut t1) = (vec![], vec![ring.one()]);
    while !r1.is_empty() {
        let (q, r) = divrem(ring, &r0, &r1);
        let s2 = sub(ring, &s0, &mul(ring, &q, &s1));
        let t2 = sub(ring, &t0, &mul(ring, &q, &t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    if let Some(l) = r0.last() {
        let li = ring.inv(l).unwrap();
        (scale(ring, &li, &r0), scale(ring, &li, &s0), scale(ring, &li, &t0))
    } else {
        (r0, s0, t0)
    }
}

pub fn eval(ring: &BaseRing, a: &Poly, x: &RingElem) -> RingElem {
    let mut acc = ring.zero();
    for c in a.iter().rev() {
        acc = ring.add(&ring.mul(&acc, x), c);
    }
    acc
}

pub fn derivative(ring: &BaseRing, a: &Poly) -> Poly {
    let out = a.iter().enumerate().skip(1).map(|(i, c)| ring.mul(&ring.from_int(i as i64), c)).collect();
    trim(ring, out)
}

/// Roots in a finite field, by exhaustion.
pub fn finite_roots(ring: &BaseRing, a: &Poly) -> Vec<RingElem> {
    ring.elements()
        .unwrap_or_default()
        .into_iter()
        .filter(|x| ring.is_zero(&eval(ring, a, x)))
        .collect()
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            let e = &n / &d;
            if e != d {
                out.push(e);
            }
        }
        d += 1;
    }
    out
}

/// Rational roots of a polynomial with rational coefficients.
pub fn rational_roots(a: &Poly) -> Vec<BigRational> {
    let q = BaseRing::Rationals;
    let a = trim(&q, a.clone());
    if a.len() <= 1 {
        return vec![];
    }
    let coeffs: Vec<BigRational> = a.iter().map(|x| q.to_rational(x).unwrap()).collect();
    let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> =
        coeffs.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
    let mut roots = Vec::new();
    // strip zero roots first
    let shift = ints.iter().take_while(|c| c.is_zero()).count();
    if shift > 0 {
        roots.push(BigRational::zero());
    }
    let ints = &ints[shift..];
    if ints.len() <= 1 {
        return roots;
    }
    let lead = ints.last().unwrap();
    let constant = &ints[0];
    for p in divisors(constant) {
        for qd in divisors(lead) {
            for sign in [1, -1] {
                let r = BigRational::new(&p * BigInt::from(sign), qd.clone());
                let val = coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * &r + c);
                if val.is_zero() && !roots.contains(&r) {
                    roots.push(r);
                }
            }
        }
    }
    roots.sort();
    roots
}
