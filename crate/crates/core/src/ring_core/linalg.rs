//! Row reduction over fields and over ℤ/p^n (unit pivots only).

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::base::{BaseRing, RingElem};
use super::matrix::Matrix;
use crate::error::{Error, Result};

/// Reduced row echelon form plus the pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

/// Solution set of a linear system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Solved { particular: Vec<RingElem>, kernel: Vec<Vec<RingElem>> },
    Inconsistent,
}

fn check_supported(ring: &BaseRing) -> Result<()> {
    match ring {
        BaseRing::Finite(_) | BaseRing::Rationals | BaseRing::Truncated { .. } => Ok(()),
        BaseRing::Localized(_) => Err(Error::NotAField),
        BaseRing::Product(_) => Err(Error::UnsupportedRing("linear algebra over a product ring".into())),
    }
}

/// Row reduce, choosing pivots only among the first `ncols` columns.
pub fn rref_cols(ring: &BaseRing, m: &Matrix, ncols: usize) -> Result<Echelon> {
    check_supported(ring)?;
    let rows = m.rows();
    let cols = m.cols();
    let mut a: Vec<Vec<RingElem>> = m.to_rows();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols.min(cols) {
        if r == rows {
            break;
        }
        let pick = (r..rows).find(|&i| ring.is_unit(&a[i][c]));
        let Some(pi) = pick else {
            if (r..rows).any(|i| !ring.is_zero(&a[i][c])) {
                return Err(Error::PrecisionLoss(format!("no unit pivot in column {c} over {}", ring.name())));
            }
            continue;
        };
        a.swap(r, pi);
        let inv = ring.inv(&a[r][c]).expect("pivot is a unit");
        for x in a[r].iter_mut() {
            *x = ring.mul(&inv, x);
        }
        for i in 0..rows {
            if i == r || ring.is_zero(&a[i][c]) {
                continue;
            }
            let f = a[i][c].clone();
            for j in 0..cols {
                if ring.is_zero(&a[r][j]) {
                    continue;
                }
                let t = ring.mul(&f, &a[r][j]);
                a[i][j] = ring.sub(&a[i][j], &t);
            }
        }
        pivots.push(c);
        r += 1;
    }
    Ok(Echelon { matrix: Matrix::from_rows(a).unwrap_or_else(|_| Matrix::zeros(ring, rows, cols)), pivots })
}

pub fn rref(ring: &BaseRing, m: &Matrix) -> Result<Echelon> {
    rref_cols(ring, m, m.cols())
}

pub fn rank(ring: &BaseRing, m: &Matrix) -> Result<usize> {
    if m.rows() == 0 || m.cols() == 0 {
        return Ok(0);
    }
    Ok(rref(ring, m)?.pivots.len())
}

/// Basis of the right kernel {x : m x = 0}.
pub fn kernel(ring: &BaseRing, m: &Matrix) -> Result<Vec<Vec<RingElem>>> {
    let cols = m.cols();
    if m.rows() == 0 {
        return Ok((0..cols).map(|j| unit_vector(ring, cols, j)).collect());
    }
    let e = rref(ring, m)?;
    Ok(kernel_from_echelon(ring, &e, cols))
}

fn kernel_from_echelon(ring: &BaseRing, e: &Echelon, cols: usize) -> Vec<Vec<RingElem>> {
    let mut out = Vec::new();
    for f in (0..cols).filter(|c| !e.pivots.contains(c)) {
        let mut v = vec![ring.zero(); cols];
        v[f] = ring.one();
        for (r, &pc) in e.pivots.iter().enumerate() {
            v[pc] = ring.neg(e.matrix.get(r, f));
        }
        out.push(v);
    }
    out
}

pub fn unit_vector(ring: &BaseRing, n: usize, j: usize) -> Vec<RingElem> {
    let mut v = vec![ring.zero(); n];
    v[j] = ring.one();
    v
}

/// Solve `a x = b` for a column `b`.
pub fn solve_linear(ring: &BaseRing, a: &Matrix, b: &Matrix) -> Result<Solution> {
    if b.cols() != 1 || b.rows() != a.rows() {
        return Err(Error::Invalid("right-hand side must be a column matching the row count".into()));
    }
    let n = a.cols();
    let mut aug = Vec::with_capacity(a.rows());
    for i in 0..a.rows() {
        let mut row = a.row(i).to_vec();
        row.push(b.get(i, 0).clone());
        aug.push(row);
    }
    let aug = if aug.is_empty() { Matrix::zeros(ring, 0, n + 1) } else { Matrix::from_rows(aug)? };
    let e = rref_cols(ring, &aug, n)?;
    for r in e.pivots.len()..a.rows() {
        if !ring.is_zero(e.matrix.get(r, n)) {
            return Ok(Solution::Inconsistent);
        }
    }
    let mut particular = vec![ring.zero(); n];
    for (r, &pc) in e.pivots.iter().enumerate() {
        particular[pc] = e.matrix.get(r, n).clone();
    }
    let kernel = kernel_from_echelon(ring, &e, n);
    Ok(Solution::Solved { particular, kernel })
}

/// Solve `a x = b` and return one solution, if any.
pub fn solve_one(ring: &BaseRing, a: &Matrix, b: &[RingElem]) -> Result<Option<Vec<RingElem>>> {
    match solve_linear(ring, a, &Matrix::column(b.to_vec()))? {
        Solution::Solved { particular, .. } => Ok(Some(particular)),
        Solution::Inconsistent => Ok(None),
    }
}

/// Inverse over a field, ℤ/p^n, or a localization of ℤ.
pub fn inverse(ring: &BaseRing, m: &Matrix) -> Result<Option<Matrix>> {
    let n = m.rows();
    if n != m.cols() {
        return Ok(None);
    }
    if let BaseRing::Localized(_) = ring {
        let Some(inv) = inverse(&BaseRing::Rationals, m)? else { return Ok(None) };
        return Ok(if inv.data().iter().all(|x| ring.contains(x)) { Some(inv) } else { None });
    }
    check_supported(ring)?;
    let mut aug = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = m.row(i).to_vec();
        row.extend(unit_vector(ring, n, i));
        aug.push(row);
    }
    if n == 0 {
        return Ok(Some(m.clone()));
    }
    let e = match rref_cols(ring, &Matrix::from_rows(aug)?, n) {
        Ok(e) => e,
        // over ℤ/p^n a column without unit entries means the matrix is singular mod p
        Err(Error::PrecisionLoss(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    if e.pivots.len() < n {
        return Ok(None);
    }
    let mut out = Matrix::zeros(ring, n, n);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, e.matrix.get(i, n + j).clone());
        }
    }
    Ok(Some(out))
}

pub fn is_invertible(ring: &BaseRing, m: &Matrix) -> Result<bool> {
    match ring {
        BaseRing::Localized(_) => {
            let d = det(ring, m)?;
            Ok(ring.is_unit(&d))
        }
        _ => Ok(inverse(ring, m)?.is_some()),
    }
}

/// Determinant over a commutative base ring.
pub fn det(ring: &BaseRing, m: &Matrix) -> Result<RingElem> {
    let n = m.rows();
    if n != m.cols() {
        return Err(Error::Invalid("determinant of a non-square matrix".into()));
    }
    match ring {
        BaseRing::Finite(_) | BaseRing::Rationals => det_field(ring, m),
        BaseRing::Localized(_) => det_field(&BaseRing::Rationals, m),
        BaseRing::Truncated { modulus, .. } => {
            let ints: Vec<Vec<BigInt>> =
                (0..n).map(|i| (0..n).map(|j| ring.lift(m.get(i, j)).unwrap()).collect()).collect();
            let d = bareiss(ints);
            let md = BigInt::from(*modulus);
            let r = ((d % &md) + &md) % &md;
            Ok(RingElem::Int(r.try_into().unwrap()))
        }
        BaseRing::Product(_) => Err(Error::UnsupportedRing("determinant over a product ring".into())),
    }
}

fn det_field(ring: &BaseRing, m: &Matrix) -> Result<RingElem> {
    let n = m.rows();
    let mut a = m.to_rows();
    let mut d = ring.one();
    for c in 0..n {
        let Some(pi) = (c..n).find(|&i| !ring.is_zero(&a[i][c])) else { return Ok(ring.zero()) };
        if pi != c {
            a.swap(pi, c);
            d = ring.neg(&d);
        }
        d = ring.mul(&d, &a[c][c]);
        let inv = ring.inv(&a[c][c]).unwrap();
        for i in c + 1..n {
            if ring.is_zero(&a[i][c]) {
                continue;
            }
            let f = ring.mul(&a[i][c], &inv);
            for j in c..n {
                let t = ring.mul(&f, &a[c][j]);
                a[i][j] = ring.sub(&a[i][j], &t);
            }
        }
    }
    Ok(d)
}

/// Fraction-free integer determinant.
pub fn bareiss(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(ring: &BaseRing, rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| ring.from_int(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn solve_examples() {
        let f3 = BaseRing::prime_field(3).unwrap();
        let a = mat(&f3, &[&[1, 0], &[0, 1]]);
        let b = mat(&f3, &[&[1], &[2]]);
        assert_eq!(
            solve_linear(&f3, &a, &b).unwrap(),
            Solution::Solved { particular: vec![f3.from_int(1), f3.from_int(2)], kernel: vec![] }
        );
        let f5 = BaseRing::prime_field(5).unwrap();
        let a = mat(&f5, &[&[1, 1], &[2, 2]]);
        let b = mat(&f5, &[&[0], &[0]]);
        match solve_linear(&f5, &a, &b).unwrap() {
            Solution::Solved { kernel, .. } => assert_eq!(kernel.len(), 1),
            _ => panic!(),
        }
        let z9 = BaseRing::truncated(3, 2).unwrap();
        let a = mat(&z9, &[&[3]]);
        let b = mat(&z9, &[&[3]]);
        assert!(matches!(solve_linear(&z9, &a, &b), Err(Error::PrecisionLoss(_))));
    }

    #[test]
    fn inconsistent_system() {
        let f5 = BaseRing::prime_field(5).unwrap();
        let a = mat(&f5, &[&[1, 1], &[2, 2]]);
        let b = mat(&f5, &[&[0], &[1]]);
        assert_eq!(solve_linear(&f5, &a, &b).unwrap(), Solution::Inconsistent);
    }

    #[test]
    fn localized_needs_field() {
        let z3 = BaseRing::localized(&[3]).unwrap();
        let a = mat(&z3, &[&[1]]);
        assert_eq!(rank(&z3, &a).unwrap_err(), Error::NotAField);
    }

    #[test]
    fn inverse_and_det() {
        let z81 = BaseRing::truncated(3, 4).unwrap();
        let a = mat(&z81, &[&[1, 3], &[3, 2]]);
        let inv = inverse(&z81, &a).unwrap().unwrap();
        assert_eq!(a.mul(&z81, &inv).unwrap(), Matrix::identity(&z81, 2));
        assert_eq!(det(&z81, &a).unwrap(), z81.from_int(-7));
        let b = mat(&z81, &[&[3, 0], &[0, 1]]);
        assert!(inverse(&z81, &b).unwrap().is_none());
        let z3 = BaseRing::localized(&[3]).unwrap();
        let c = mat(&z3, &[&[2, 0], &[0, 5]]);
        assert!(is_invertible(&z3, &c).unwrap());
        let c = mat(&z3, &[&[6]]);
        assert!(!is_invertible(&z3, &c).unwrap());
        let q = BaseRing::Rationals;
        assert_eq!(det(&q, &mat(&q, &[&[1, 2], &[3, 4]])).unwrap(), q.from_int(-2));
        assert_eq!(bareiss(vec![vec![BigInt::from(2), BigInt::from(1)], vec![BigInt::from(4), BigInt::from(3)]]), BigInt::from(2));
    }
}
