//! Finitely generated submodules of ℚ^n over ℤ localized at finitely many
//! primes, kept in echelon form with canonical pivots.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::base::valuation;

type Row = Vec<BigRational>;

#[derive(Clone, Debug)]
pub struct Lattice {
    primes: Vec<u64>,
    dim: usize,
    rows: Vec<Row>,
    pivots: Vec<usize>,
}

/// Whether a rational lies in ℤ_(S).
pub fn in_local_ring(x: &BigRational, primes: &[u64]) -> bool {
    primes.iter().all(|&p| !(x.denom() % BigInt::from(p)).is_zero())
}

/// The canonical generator Π p^{v_p(x)} of the fractional ideal x·ℤ_(S).
fn canonical_generator(x: &BigRational, primes: &[u64]) -> BigRational {
    let mut g = BigRational::one();
    for &p in primes {
        let v = valuation(x.numer(), p) as i64 - valuation(x.denom(), p) as i64;
        let pp = BigRational::from_integer(BigInt::from(p));
        if v >= 0 {
            g *= num_traits::pow(pp, v as usize);
        } else {
            g /= num_traits::pow(pp, (-v) as usize);
        }
    }
    g
}

fn axpy(a: &BigRational, x: &Row, b: &BigRational, y: &Row) -> Row {
    x.iter().zip(y).map(|(u, v)| a * u + b * v).collect()
}

/// Extended gcd on integers: (g, s, t) with s a + t b = g ≥ 0.
fn egcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Echelonize `rows` in place using unimodular integer row operations, picking
/// pivots only in columns `< ncols`. Returns the pivot columns; rows beyond the
/// pivot count have zero entries in the first `ncols` columns.
fn echelonize(rows: &mut [Row], ncols: usize, primes: &[u64]) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(first) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, first);
        for k in r + 1..rows.len() {
            if rows[k][c].is_zero() {
                continue;
            }
            let a = rows[r][c].clone();
            let b = rows[k][c].clone();
            let d = a.denom().lcm(b.denom());
            let ai = (&a * BigRational::from_integer(d.clone())).to_integer();
            let bi = (&b * BigRational::from_integer(d)).to_integer();
            let (g, s, t) = egcd(&ai, &bi);
            let s = BigRational::from_integer(s);
            let t = BigRational::from_integer(t);
            let mb = BigRational::from_integer(-(&bi / &g));
            let ma = BigRational::from_integer(&ai / &g);
            let new_r = axpy(&s, &rows[r], &t, &rows[k]);
            let new_k = axpy(&mb, &rows[r], &ma, &rows[k]);
            rows[r] = new_r;
            rows[k] = new_k;
        }
        // normalise the pivot to its canonical generator (multiply by a unit)
        let piv = rows[r][c].clone();
        let unit = canonical_generator(&piv, primes) / &piv;
        for x in rows[r].iter_mut() {
            *x = &*x * &unit;
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

impl Lattice {
    pub fn span(primes: &[u64], dim: usize, gens: &[Row]) -> Lattice {
        let mut rows: Vec<Row> = gens.iter().filter(|g| g.iter().any(|x| !x.is_zero())).cloned().collect();
        let pivots = echelonize(&mut rows, dim, primes);
        rows.truncate(pivots.len());
        Lattice { primes: primes.to_vec(), dim, rows, pivots }
    }

    pub fn basis(&self) -> &[Row] {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn contains(&self, v: &[BigRational]) -> bool {
        let mut v = v.to_vec();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            if v[c].is_zero() {
                continue;
            }
            let t = &v[c] / &row[c];
            if !in_local_ring(&t, &self.primes) {
                return false;
            }
            for (x, y) in v.iter_mut().zip(row) {
                *x = &*x - &t * y;
            }
        }
        v.iter().all(|x| x.is_zero())
    }

    /// Whether every generator of `other` lies in `self`.
    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }
}

/// ℤ_(S)-basis of {x ∈ ℤ_(S)^n : x·M = 0}, where `m` has n rows. The result
/// is saturated: it is the full intersection of the rational kernel with
/// ℤ_(S)^n.
pub fn left_kernel(primes: &[u64], m: &[Row]) -> Vec<Row> {
    let n = m.len();
    let k = m.first().map_or(0, |r| r.len());
    let mut rows: Vec<Row> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            for j in 0..n {
                row.push(if i == j { BigRational::one() } else { BigRational::zero() });
            }
            row
        })
        .collect();
    let pivots = echelonize(&mut rows, k, primes);
    rows[pivots.len()..].iter().map(|r| r[k..].to_vec()).collect()
}
