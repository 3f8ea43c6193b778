//! Finite fields F_{p^e}. Elements are integer codes: the base-p digits of the
//! code are the coefficients (low degree first) of a polynomial in the
//! generator t, reduced modulo a fixed irreducible polynomial.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest extension field for which log tables are built.
const MAX_TABLE_SIZE: u64 = 1 << 20;

#[derive(Debug)]
struct Inner {
    p: u64,
    e: u32,
    q: u64,
    /// Monic modulus, low degree first, length e + 1. Empty for prime fields.
    modulus: Vec<u64>,
    exp: Vec<u64>,
    log: Vec<u32>,
}

#[derive(Clone)]
pub struct GaloisField(Arc<Inner>);

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.e)
    }
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.e == other.0.e && self.0.modulus == other.0.modulus
    }
}
impl Eq for GaloisField {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn powmod(mut a: u64, mut k: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while k > 0 {
        if k & 1 == 1 {
            r = mulmod(r, a, m);
        }
        a = mulmod(a, a, m);
        k >>= 1;
    }
    r
}

/// Inverse of `a` modulo `m`, if it exists.
pub(crate) fn invmod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

// Small dense polynomial helpers over F_p, low degree first.
fn poly_trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = invmod(b[db], p).expect("nonzero leading coefficient");
    while r.len() > db {
        let k = r.len() - 1 - db;
        let c = mulmod(*r.last().unwrap(), lead_inv, p);
        for (i, &bi) in b.iter().enumerate() {
            r[k + i] = (r[k + i] + p - mulmod(c, bi, p)) % p;
        }
        poly_trim(&mut r);
    }
    r
}

fn poly_mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod(x, y, p)) % p;
        }
    }
    poly_rem(&out, m, p)
}

fn digits_of(mut code: u64, p: u64, e: u32) -> Vec<u64> {
    let mut d = Vec::with_capacity(e as usize);
    for _ in 0..e {
        d.push(code % p);
        code /= p;
    }
    d
}

fn code_of(d: &[u64], p: u64) -> u64 {
    d.iter().rev().fold(0u64, |acc, &x| acc * p + x)
}

fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = f.len() - 1;
    for d in 1..=n / 2 {
        // every monic polynomial of degree d
        let count = p.pow(d as u32);
        for c in 0..count {
            let mut g = digits_of(c, p, d as u32);
            g.push(1);
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl GaloisField {
    pub fn new(p: u64, e: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Invalid(format!("{p} is not prime")));
        }
        if e == 0 {
            return Err(Error::Invalid("field degree must be at least 1".into()));
        }
        if e == 1 {
            return Ok(GaloisField(Arc::new(Inner { p, e, q: p, modulus: vec![], exp: vec![], log: vec![] })));
        }
        let q = p
            .checked_pow(e)
            .filter(|&q| q <= MAX_TABLE_SIZE)
            .ok_or_else(|| Error::UnsupportedRing(format!("F_{p}^{e} is too large")))?;
        let mut modulus = None;
        for c in 0..q {
            let mut f = digits_of(c, p, e);
            if f[0] == 0 {
                continue;
            }
            f.push(1);
            if is_irreducible(&f, p) {
                modulus = Some(f);
                break;
            }
        }
        let modulus = modulus.expect("irreducible polynomials exist in every degree");
        // find a primitive element and tabulate its powers
        for g in 1..q {
            let gd = digits_of(g, p, e);
            let mut exp = Vec::with_capacity(q as usize - 1);
            let mut cur = vec![1u64];
            let mut ok = true;
            for k in 0..q - 1 {
                let mut padded = cur.clone();
                padded.resize(e as usize, 0);
                let code = code_of(&padded, p);
                if k > 0 && code == 1 {
                    ok = false;
                    break;
                }
                exp.push(code);
                cur = poly_mul_mod(&cur, &gd, &modulus, p);
            }
            if !ok {
                continue;
            }
            let mut log = vec![0u32; q as usize];
            for (k, &c) in exp.iter().enumerate() {
                log[c as usize] = k as u32;
            }
            return Ok(GaloisField(Arc::new(Inner { p, e, q, modulus, exp, log })));
        }
        unreachable!("multiplicative group of a finite field is cyclic")
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }
    pub fn degree(&self) -> u32 {
        self.0.e
    }
    pub fn order(&self) -> u64 {
        self.0.q
    }
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn digits(&self, x: u64) -> Vec<u64> {
        digits_of(x, self.0.p, self.0.e)
    }
    pub fn from_digits(&self, d: &[u64]) -> u64 {
        let mut v = d.to_vec();
        v.resize(self.0.e as usize, 0);
        code_of(&v, self.0.p)
    }

    pub fn from_int(&self, n: i64) -> u64 {
        n.rem_euclid(self.0.p as i64) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let p = self.0.p;
        if self.0.e == 1 {
            return (a + b) % p;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.0.e {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    pub fn neg(&self, a: u64) -> u64 {
        let p = self.0.p;
        if self.0.e == 1 {
            return (p - a) % p;
        }
        let mut a = a;
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.0.e {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        out
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if self.0.e == 1 {
            return mulmod(a, b, self.0.p);
        }
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.0.q - 1;
        let k = (self.0.log[a as usize] as u64 + self.0.log[b as usize] as u64) % n;
        self.0.exp[k as usize]
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        if self.0.e == 1 {
            return invmod(a, self.0.p);
        }
        let n = self.0.q - 1;
        let k = (n - self.0.log[a as usize] as u64) % n;
        Some(self.0.exp[k as usize])
    }

    pub fn pow(&self, a: u64, k: u64) -> u64 {
        if self.0.e == 1 {
            return powmod(a, k, self.0.p);
        }
        if a == 0 {
            return if k == 0 { 1 } else { 0 };
        }
        let n = self.0.q - 1;
        let l = (self.0.log[a as usize] as u128 * k as u128 % n as u128) as usize;
        self.0.exp[l]
    }

    /// Human-readable element: an integer for prime fields, otherwise a
    /// polynomial in t.
    pub fn format(&self, a: u64) -> String {
        if self.0.e == 1 {
            return a.to_string();
        }
        let d = self.digits(a);
        let mut terms = Vec::new();
        for (i, &c) in d.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let t = match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "t".to_string(),
                (1, c) => format!("{c}t"),
                (i, 1) => format!("t^{i}"),
                (i, c) => format!("{c}t^{i}"),
            };
            terms.push(t);
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}
