use crate::error::{Error, Result};
use crate::ring_core::linalg;
use crate::ring_core::{Matrix, RingElem};
use crate::unitary_algebra::{AlgElem, Algebra, UnitaryRing};

/// Matrix with entries in an algebra A. Acts on columns A^m from the left;
/// A acts on A^m from the right.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<AlgElem>,
}

impl AlgMatrix {
    pub fn zeros(alg: &Algebra, rows: usize, cols: usize) -> Self {
        AlgMatrix { rows, cols, data: vec![alg.zero(); rows * cols] }
    }

    pub fn identity(alg: &Algebra, n: usize) -> Self {
        let mut m = Self::zeros(alg, n, n);
        for i in 0..n {
            m.set(i, i, alg.one());
        }
        m
    }

    pub fn diagonal(alg: &Algebra, entries: &[AlgElem]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(alg, n, n);
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<AlgElem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Invalid("ragged matrix".into()));
        }
        Ok(AlgMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Square matrix over the base ring viewed inside a rank-1 algebra.
    pub fn from_scalars(alg: &Algebra, rows: &[Vec<RingElem>]) -> Result<Self> {
        let data: Vec<Vec<AlgElem>> =
            rows.iter().map(|r| r.iter().map(|x| alg.scalar(x)).collect()).collect();
        Self::from_rows(data)
    }

    pub fn get(&self, i: usize, j: usize) -> &AlgElem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: AlgElem) {
        self.data[i * self.cols + j] = x;
    }

    pub fn column(&self, j: usize) -> Vec<AlgElem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, alg: &Algebra, other: &AlgMatrix) -> AlgMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = AlgMatrix::zeros(alg, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if alg.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if alg.is_zero(b) {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = alg.add(&out.data[idx], &alg.mul(a, b));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, alg: &Algebra, v: &[AlgElem]) -> Vec<AlgElem> {
        (0..self.rows)
            .map(|i| {
                let mut acc = alg.zero();
                for (j, x) in v.iter().enumerate() {
                    acc = alg.add(&acc, &alg.mul(self.get(i, j), x));
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, alg: &Algebra, other: &AlgMatrix) -> AlgMatrix {
        let data = self.data.iter().zip(&other.data).map(|(a, b)| alg.add(a, b)).collect();
        AlgMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, alg: &Algebra, other: &AlgMatrix) -> AlgMatrix {
        let data = self.data.iter().zip(&other.data).map(|(a, b)| alg.sub(a, b)).collect();
        AlgMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self, alg: &Algebra) -> AlgMatrix {
        let data = self.data.iter().map(|a| alg.neg(a)).collect();
        AlgMatrix { rows: self.rows, cols: self.cols, data }
    }

    /// Entrywise right multiplication by an algebra element.
    pub fn mul_right(&self, alg: &Algebra, c: &[RingElem]) -> AlgMatrix {
        let data = self.data.iter().map(|a| alg.mul(a, c)).collect();
        AlgMatrix { rows: self.rows, cols: self.cols, data }
    }

    /// φ† with (φ†)_st = σ(φ_ts).
    pub fn adjoint(&self, ring: &UnitaryRing) -> AlgMatrix {
        let mut out = AlgMatrix::zeros(&ring.algebra, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, ring.sig(self.get(i, j)));
            }
        }
        out
    }

    /// Same adjoint with an explicit involution matrix.
    pub fn adjoint_with(&self, alg: &Algebra, sigma: &Matrix) -> AlgMatrix {
        let mut out = AlgMatrix::zeros(alg, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, sigma.mul_vec(alg.base(), self.get(i, j)));
            }
        }
        out
    }

    pub fn is_zero(&self, alg: &Algebra) -> bool {
        self.data.iter().all(|a| alg.is_zero(a))
    }

    /// Matrix over the base ring of the same A-linear map on A^cols → A^rows.
    pub fn block_expand(&self, alg: &Algebra) -> Matrix {
        let d = alg.dim();
        let base = alg.base();
        let mut m = Matrix::zeros(base, self.rows * d, self.cols * d);
        for s in 0..self.rows {
            for t in 0..self.cols {
                let l = alg.left_mult(self.get(s, t));
                for i in 0..d {
                    for j in 0..d {
                        m.set(s * d + i, t * d + j, l.get(i, j).clone());
                    }
                }
            }
        }
        m
    }

    pub fn is_invertible(&self, alg: &Algebra) -> Result<bool> {
        if !self.is_square() {
            return Ok(false);
        }
        if self.rows == 0 {
            return Ok(true);
        }
        linalg::is_invertible(alg.base(), &self.block_expand(alg))
    }

    pub fn inverse(&self, alg: &Algebra) -> Result<Option<AlgMatrix>> {
        if !self.is_square() {
            return Ok(None);
        }
        let d = alg.dim();
        let base = alg.base();
        let Some(inv) = linalg::inverse(base, &self.block_expand(alg))? else { return Ok(None) };
        let unit = alg.one();
        let mut out = AlgMatrix::zeros(alg, self.rows, self.cols);
        for s in 0..self.rows {
            for t in 0..self.cols {
                // block (s,t) is left multiplication by the entry; apply it to 1
                let mut e = alg.zero();
                for i in 0..d {
                    let mut acc = base.zero();
                    for j in 0..d {
                        acc = base.add(&acc, &base.mul(inv.get(s * d + i, t * d + j), &unit[j]));
                    }
                    e[i] = acc;
                }
                out.set(s, t, e);
            }
        }
        Ok(Some(out))
    }

    /// Block diagonal sum.
    pub fn direct_sum(&self, alg: &Algebra, other: &AlgMatrix) -> AlgMatrix {
        let mut out = AlgMatrix::zeros(alg, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    pub fn map_entries(&self, f: impl Fn(&AlgElem) -> Result<AlgElem>) -> Result<AlgMatrix> {
        let data = self.data.iter().map(f).collect::<Result<_>>()?;
        Ok(AlgMatrix { rows: self.rows, cols: self.cols, data })
    }

    /// Dense key over a finite base.
    pub fn key(&self, alg: &Algebra) -> Vec<u64> {
        self.data.iter().flat_map(|a| alg.key(a)).collect()
    }

    pub fn format(&self, alg: &Algebra) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| alg.format(self.get(i, j))).collect()).collect()
    }
}
