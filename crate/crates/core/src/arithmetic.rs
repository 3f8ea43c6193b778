//! Legendre and Hilbert symbols, quaternion splitting, and the classical
//! invariants of rational quadratic forms.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring_core::base::valuation;
use crate::ring_core::gf::powmod;

/// A place of ℚ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Place {
    Prime(u64),
    Infinity,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Prime(p) => write!(f, "{p}"),
            Place::Infinity => write!(f, "inf"),
        }
    }
}

/// Legendre symbol (a/p) for an odd prime p, by Euler's criterion.
pub fn legendre(a: &BigInt, p: u64) -> i8 {
    let r = a.mod_floor(&BigInt::from(p)).to_u64().unwrap();
    if r == 0 {
        return 0;
    }
    if powmod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Square-class representative of a nonzero rational as an integer (n·d).
fn integer_class(x: &BigRational) -> BigInt {
    x.numer() * x.denom()
}

/// Split n = p^v · w with w prime to p.
fn split_p(n: &BigInt, p: u64) -> (u32, BigInt) {
    let v = valuation(n, p);
    (v, n / BigInt::from(p).pow(v))
}

/// Hilbert symbol (a, b)_v for nonzero rationals.
pub fn hilbert_symbol(a: &BigRational, b: &BigRational, v: Place) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::Invalid("Hilbert symbol of zero".into()));
    }
    let a = integer_class(a);
    let b = integer_class(b);
    Ok(match v {
        Place::Infinity => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Prime(2) => {
            let (al, u) = split_p(&a, 2);
            let (be, w) = split_p(&b, 2);
            let eps = |x: &BigInt| -> u64 { ((x.mod_floor(&BigInt::from(4))).to_u64().unwrap() - 1) / 2 % 2 };
            let omega = |x: &BigInt| -> u64 {
                let r = x.mod_floor(&BigInt::from(8)).to_u64().unwrap();
                ((r * r - 1) / 8) % 2
            };
            let e = eps(&u) * eps(&w) + al as u64 * omega(&w) + be as u64 * omega(&u);
            if e % 2 == 0 {
                1
            } else {
                -1
            }
        }
        Place::Prime(p) => {
            if p < 3 || !crate::ring_core::gf::is_prime(p) {
                return Err(Error::Invalid(format!("{p} is not an odd prime")));
            }
            let (al, u) = split_p(&a, p);
            let (be, w) = split_p(&b, p);
            let mut s: i8 = 1;
            if (al as u64 * be as u64 * ((p - 1) / 2)) % 2 == 1 {
                s = -s;
            }
            if be % 2 == 1 {
                s *= legendre(&u, p);
            }
            if al % 2 == 1 {
                s *= legendre(&w, p);
            }
            s
        }
    })
}

/// Prime divisors of a nonzero integer (trial division).
pub fn prime_divisors(n: &BigInt) -> Vec<u64> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::from(2);
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.to_u64().expect("prime factor fits in u64"));
            while (&n % &d).is_zero() {
                n /= &d;
            }
        }
        d += 1;
    }
    if n > BigInt::one() {
        out.push(n.to_u64().expect("prime factor fits in u64"));
    }
    out
}

/// The places where (a, b)_v can be −1: ∞, 2 and the odd primes dividing
/// numerators or denominators.
pub fn candidate_places(values: &[&BigRational]) -> Vec<Place> {
    let mut primes = vec![2u64];
    for x in values {
        primes.extend(prime_divisors(x.numer()));
        primes.extend(prime_divisors(x.denom()));
    }
    primes.sort_unstable();
    primes.dedup();
    let mut out: Vec<Place> = primes.into_iter().map(Place::Prime).collect();
    out.push(Place::Infinity);
    out
}

pub fn quaternion_splits_at(u: &BigRational, v: &BigRational, place: Place) -> Result<bool> {
    Ok(hilbert_symbol(u, v, place)? == 1)
}

/// Places where (u, v) ramifies.
pub fn ramified_places(u: &BigRational, v: &BigRational) -> Result<Vec<Place>> {
    let mut out = Vec::new();
    for pl in candidate_places(&[u, v]) {
        if hilbert_symbol(u, v, pl)? == -1 {
            out.push(pl);
        }
    }
    Ok(out)
}

pub fn quaternion_division_over_q(u: &BigRational, v: &BigRational) -> Result<bool> {
    Ok(!ramified_places(u, v)?.is_empty())
}

/// Whether x is the square of a rational.
pub fn is_rational_square(x: &BigRational) -> bool {
    if x.is_negative() {
        return false;
    }
    if x.is_zero() {
        return true;
    }
    let n = x.numer();
    let d = x.denom();
    let rn = n.sqrt();
    let rd = d.sqrt();
    &(&rn * &rn) == n && &(&rd * &rd) == d
}

/// Diagonal entries of a congruent diagonal form of a symmetric rational
/// matrix (any zero entries are kept).
pub fn diagonalize_symmetric(m: &[Vec<BigRational>]) -> Vec<BigRational> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m.to_vec();
    let mut diag = Vec::with_capacity(n);
    let mut k = 0;
    while k < n {
        if a[k][k].is_zero() {
            // bring a nonzero diagonal entry to position k, or create one
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // replace x_k by x_k + x_j: new a_kk = a_kk + 2a_kj + a_jj
                for i in 0..n {
                    let t = a[i][j].clone();
                    a[i][k] += t;
                }
                for i in 0..n {
                    let t = a[j][i].clone();
                    a[k][i] += t;
                }
            } else {
                diag.push(BigRational::zero());
                k += 1;
                continue;
            }
        }
        let pivot = a[k][k].clone();
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &pivot;
            for j in k..n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
            for j in k..n {
                let t = &f * &a[j][k];
                a[j][i] -= t;
            }
        }
        diag.push(pivot);
        k += 1;
    }
    diag
}

/// Hasse invariant Π_{i<j} (a_i, a_j)_v of a nondegenerate diagonal form.
pub fn hasse_invariant(diag: &[BigRational], v: Place) -> Result<i8> {
    let mut s = 1i8;
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            s *= hilbert_symbol(&diag[i], &diag[j], v)?;
        }
    }
    Ok(s)
}

/// Hasse–Minkowski test for two nondegenerate symmetric bilinear forms over ℚ.
pub fn rational_forms_isometric(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Result<bool> {
    if a.len() != b.len() {
        return Ok(false);
    }
    let da = diagonalize_symmetric(a);
    let db = diagonalize_symmetric(b);
    if da.iter().chain(&db).any(|x| x.is_zero()) {
        return Err(Error::Invalid("degenerate rational form".into()));
    }
    let det_a: BigRational = da.iter().fold(BigRational::one(), |acc, x| acc * x);
    let det_b: BigRational = db.iter().fold(BigRational::one(), |acc, x| acc * x);
    if !is_rational_square(&(det_a * det_b)) {
        return Ok(false);
    }
    let neg = |d: &[BigRational]| d.iter().filter(|x| x.is_negative()).count();
    if neg(&da) != neg(&db) {
        return Ok(false);
    }
    let refs: Vec<&BigRational> = da.iter().chain(&db).collect();
    for pl in candidate_places(&refs) {
        if pl == Place::Infinity {
            continue;
        }
        if hasse_invariant(&da, pl)? != hasse_invariant(&db, pl)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Hilbert symbol (a, b)_p for nonzero integers by counting points on the
/// conic z² = a x² + b y² over F_p, or by primitive search mod 32 when p = 2.
pub fn conic_hilbert_symbol(a: i64, b: i64, p: u64) -> Result<i8> {
    if a == 0 || b == 0 {
        return Err(Error::Invalid("Hilbert symbol of zero".into()));
    }
    let split = |x: i64| -> (u32, i64) {
        let (mut x, mut v) = (x, 0u32);
        while x % p as i64 == 0 {
            x /= p as i64;
            v += 1;
        }
        (v % 2, x)
    };
    let ((va, a0), (vb, b0)) = (split(a), split(b));
    if p == 2 {
        let m = 32i64;
        let (a, b) = ((a0 << va).rem_euclid(m), (b0 << vb).rem_euclid(m));
        let found = (0..m).any(|x| {
            (0..m).any(|y| {
                (0..m).any(|z| (x | y | z) & 1 == 1 && (z * z - a * x * x - b * y * y).rem_euclid(m) == 0)
            })
        });
        return Ok(if found { 1 } else { -1 });
    }
    let pi = p as i64;
    let (a0, b0) = (a0.rem_euclid(pi), b0.rem_euclid(pi));
    let sq = |x: i64| x * x % pi;
    let found = match (va, vb) {
        // smooth conic: any point lifts
        (0, 0) => (0..pi).any(|x| (0..pi).any(|y| (0..pi).any(|z| (x, y, z) != (0, 0, 0) && sq(z) == (a0 * sq(x) + b0 * sq(y)) % pi))),
        (1, 0) => (1..pi).any(|y| (0..pi).any(|z| sq(z) == b0 * sq(y) % pi)),
        (0, 1) => (1..pi).any(|x| (0..pi).any(|z| sq(z) == a0 * sq(x) % pi)),
        _ => (0..pi).any(|x| (0..pi).any(|y| (x, y) != (0, 0) && (a0 * sq(x) + b0 * sq(y)) % pi == 0)),
    };
    Ok(if found { 1 } else { -1 })
}

#[derive(Clone, Debug, Serialize)]
pub struct HilbertSuiteReport {
    pub max_prime: u64,
    pub oracle_pairs: u64,
    pub oracle_mismatches: Vec<(i64, i64, u64)>,
    pub product_samples: u64,
    pub product_failures: Vec<(i64, i64)>,
    pub seed: u64,
}

impl HilbertSuiteReport {
    pub fn passed(&self) -> bool {
        self.oracle_mismatches.is_empty() && self.product_failures.is_empty()
    }
}

/// Compares the Hilbert symbol with the conic oracle on all pairs u·p^α,
/// 0 < u < p (u ∈ {1,3,5,7} at 2), α ∈ {0,1}, for primes up to `max_prime`,
/// and checks the product formula on random integer pairs.
pub fn hilbert_suite(max_prime: u64, samples: u64, seed: u64) -> Result<HilbertSuiteReport> {
    use rand::{Rng, SeedableRng};
    let mut report = HilbertSuiteReport {
        max_prime,
        oracle_pairs: 0,
        oracle_mismatches: vec![],
        product_samples: samples,
        product_failures: vec![],
        seed,
    };
    for p in (2..=max_prime).filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)) {
        let units: Vec<i64> = if p == 2 { vec![1, 3, 5, 7] } else { (1..p as i64).collect() };
        let args: Vec<i64> = units.iter().flat_map(|&u| [u, u * p as i64, -u]).collect();
        for &a in &args {
            for &b in &args {
                report.oracle_pairs += 1;
                let fast = hilbert_symbol(&BigRational::from_integer(a.into()), &BigRational::from_integer(b.into()), Place::Prime(p))?;
                if fast != conic_hilbert_symbol(a, b, p)? {
                    report.oracle_mismatches.push((a, b, p));
                }
            }
        }
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let mut pick = || loop {
            let x: i64 = rng.gen_range(-2000..=2000);
            if x != 0 {
                break x;
            }
        };
        let (a, b) = (pick(), pick());
        let (ra, rb) = (BigRational::from_integer(a.into()), BigRational::from_integer(b.into()));
        let mut prod = 1i8;
        for v in candidate_places(&[&ra, &rb]) {
            prod *= hilbert_symbol(&ra, &rb, v)?;
        }
        if prod != 1 {
            report.product_failures.push((a, b));
        }
    }
    Ok(report)
}
