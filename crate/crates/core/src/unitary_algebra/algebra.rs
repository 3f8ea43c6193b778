use crate::error::{Error, Result};
use crate::ring_core::hom::RingHom;
use crate::ring_core::linalg;
use crate::ring_core::{BaseRing, Matrix, RingElem};

/// Coordinate vector of an algebra element.
pub type AlgElem = Vec<RingElem>;

/// Finite-rank algebra given by structure constants e_i·e_j = Σ_k c_ijk e_k.
#[derive(Clone, Debug, PartialEq)]
pub struct Algebra {
    base: BaseRing,
    dim: usize,
    /// Sparse products, indexed by i·dim + j.
    table: Vec<Vec<(usize, RingElem)>>,
    unit: AlgElem,
}

impl Algebra {
    /// Build from dense constants `c[i][j][k]`. Axioms are not checked here;
    /// see [`Algebra::diagnostics`].
    pub fn new(base: BaseRing, constants: Vec<Vec<Vec<RingElem>>>, unit: AlgElem) -> Result<Self> {
        let dim = constants.len();
        if unit.len() != dim {
            return Err(Error::Invalid("unit has the wrong length".into()));
        }
        let mut table = Vec::with_capacity(dim * dim);
        for (i, row) in constants.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::Invalid(format!("structure constants row {i} has the wrong length")));
            }
            for cell in row {
                if cell.len() != dim {
                    return Err(Error::Invalid("structure constants must be n x n x n".into()));
                }
                let mut sparse = Vec::new();
                for (k, c) in cell.iter().enumerate() {
                    if !base.contains(c) {
                        return Err(Error::Invalid(format!("constant outside {}", base.name())));
                    }
                    if !base.is_zero(c) {
                        sparse.push((k, c.clone()));
                    }
                }
                table.push(sparse);
            }
        }
        Ok(Algebra { base, dim, table, unit })
    }

    /// Build from a closure giving e_i·e_j as a coordinate vector.
    pub fn from_fn(base: BaseRing, dim: usize, unit: AlgElem, f: impl Fn(usize, usize) -> AlgElem) -> Result<Self> {
        let constants = (0..dim).map(|i| (0..dim).map(|j| f(i, j)).collect()).collect();
        Self::new(base, constants, unit)
    }

    /// The base ring itself as a rank-1 algebra.
    pub fn scalars(base: BaseRing) -> Self {
        let one = base.one();
        Algebra { dim: 1, table: vec![vec![(0, one.clone())]], unit: vec![one], base }
    }

    pub fn base(&self) -> &BaseRing {
        &self.base
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn one(&self) -> AlgElem {
        self.unit.clone()
    }
    pub fn zero(&self) -> AlgElem {
        vec![self.base.zero(); self.dim]
    }

    pub fn basis(&self, i: usize) -> AlgElem {
        let mut v = self.zero();
        v[i] = self.base.one();
        v
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> RingElem {
        self.table[i * self.dim + j]
            .iter()
            .find(|(kk, _)| *kk == k)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.base.zero())
    }

    pub fn scalar(&self, c: &RingElem) -> AlgElem {
        self.scale(c, &self.unit)
    }

    pub fn add(&self, a: &[RingElem], b: &[RingElem]) -> AlgElem {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }

    pub fn sub(&self, a: &[RingElem], b: &[RingElem]) -> AlgElem {
        a.iter().zip(b).map(|(x, y)| self.base.sub(x, y)).collect()
    }

    pub fn neg(&self, a: &[RingElem]) -> AlgElem {
        a.iter().map(|x| self.base.neg(x)).collect()
    }

    pub fn scale(&self, c: &RingElem, a: &[RingElem]) -> AlgElem {
        a.iter().map(|x| self.base.mul(c, x)).collect()
    }

    pub fn mul(&self, a: &[RingElem], b: &[RingElem]) -> AlgElem {
        let r = &self.base;
        let mut out = self.zero();
        for (i, x) in a.iter().enumerate() {
            if r.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if r.is_zero(y) {
                    continue;
                }
                let xy = r.mul(x, y);
                for (k, c) in &self.table[i * self.dim + j] {
                    out[*k] = r.add(&out[*k], &r.mul(&xy, c));
                }
            }
        }
        out
    }

    pub fn is_zero(&self, a: &[RingElem]) -> bool {
        a.iter().all(|x| self.base.is_zero(x))
    }

    pub fn pow(&self, a: &[RingElem], mut k: u64) -> AlgElem {
        let mut base = a.to_vec();
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

    /// Matrix of x ↦ a·x (column j is a·e_j).
    pub fn left_mult(&self, a: &[RingElem]) -> Matrix {
        let mut m = Matrix::zeros(&self.base, self.dim, self.dim);
        for j in 0..self.dim {
            let col = self.mul(a, &self.basis(j));
            for (i, x) in col.into_iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    /// Matrix of x ↦ x·a.
    pub fn right_mult(&self, a: &[RingElem]) -> Matrix {
        let mut m = Matrix::zeros(&self.base, self.dim, self.dim);
        for j in 0..self.dim {
            let col = self.mul(&self.basis(j), a);
            for (i, x) in col.into_iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    /// Two-sided inverse, if `a` is a unit.
    pub fn inv(&self, a: &[RingElem]) -> Result<Option<AlgElem>> {
        let l = self.left_mult(a);
        let Some(li) = linalg::inverse(&self.base, &l)? else { return Ok(None) };
        Ok(Some(li.mul_vec(&self.base, &self.unit)))
    }

    pub fn is_unit(&self, a: &[RingElem]) -> Result<bool> {
        linalg::is_invertible(&self.base, &self.left_mult(a))
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| self.table[i * self.dim + j] == self.table[j * self.dim + i]))
    }

    /// Violated algebra axioms (empty when valid).
    pub fn diagnostics(&self) -> Vec<String> {
        let mut out = Vec::new();
        'assoc: for i in 0..self.dim {
            for j in 0..self.dim {
                let eij = self.mul(&self.basis(i), &self.basis(j));
                for k in 0..self.dim {
                    let lhs = self.mul(&eij, &self.basis(k));
                    let rhs = self.mul(&self.basis(i), &self.mul(&self.basis(j), &self.basis(k)));
                    if lhs != rhs {
                        out.push(format!("not associative on basis triple ({i},{j},{k})"));
                        break 'assoc;
                    }
                }
            }
        }
        for i in 0..self.dim {
            let e = self.basis(i);
            if self.mul(&self.unit, &e) != e || self.mul(&e, &self.unit) != e {
                out.push(format!("unit does not act as identity on e_{i}"));
                break;
            }
        }
        out
    }

    /// Entrywise image of the structure constants under a base change.
    pub fn map_base(&self, hom: &RingHom) -> Result<Algebra> {
        let base = hom.target().clone();
        let mut table = Vec::with_capacity(self.table.len());
        for cell in &self.table {
            let mut sparse = Vec::new();
            for (k, c) in cell {
                let x = hom.apply(c)?;
                if !base.is_zero(&x) {
                    sparse.push((*k, x));
                }
            }
            table.push(sparse);
        }
        Ok(Algebra { base, dim: self.dim, table, unit: hom.apply_all(&self.unit)? })
    }

    /// All elements of an algebra over a finite base, in lexicographic order
    /// of coordinates.
    pub fn elements(&self, budget: u64) -> Result<Vec<AlgElem>> {
        let base_elems = self.base.elements()?;
        let q = base_elems.len() as u64;
        let total = q
            .checked_pow(self.dim as u32)
            .filter(|&t| t <= budget)
            .ok_or_else(|| Error::BudgetExceeded(format!("{}^{} algebra elements", q, self.dim)))?;
        let mut out = Vec::with_capacity(total as usize);
        for mut code in 0..total {
            let mut v = vec![self.base.zero(); self.dim];
            for slot in v.iter_mut().rev() {
                *slot = base_elems[(code % q) as usize].clone();
                code /= q;
            }
            out.push(v);
        }
        Ok(out)
    }

    /// Basis of the center (base must be a field).
    pub fn center(&self) -> Result<Vec<AlgElem>> {
        let n = self.dim;
        let mut m = Matrix::zeros(&self.base, n * n, n);
        for j in 0..n {
            let ej = self.basis(j);
            for c in 0..n {
                let ec = self.basis(c);
                let comm = self.sub(&self.mul(&ec, &ej), &self.mul(&ej, &ec));
                for (k, x) in comm.into_iter().enumerate() {
                    m.set(j * n + k, c, x);
                }
            }
        }
        linalg::kernel(&self.base, &m)
    }

    /// Dense key for hashing elements of finite algebras.
    pub fn key(&self, a: &[RingElem]) -> Vec<u64> {
        a.iter().map(|x| self.base.index_of(x)).collect()
    }

    pub fn format(&self, a: &[RingElem]) -> String {
        let parts: Vec<String> = a.iter().map(|x| self.base.format(x)).collect();
        format!("[{}]", parts.join(","))
    }
}
