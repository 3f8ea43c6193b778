use num_rational::BigRational;

use super::algebra::AlgElem;
use crate::error::{Error, Result};
use crate::ring_core::lattice::Lattice;
use crate::ring_core::linalg;
use crate::ring_core::{BaseRing, Matrix, RingElem};

/// Submodule of R^n spanned by finitely many vectors. Over fields and ℤ/p^n it
/// is kept in reduced echelon form; over localizations of ℤ as a lattice.
#[derive(Clone, Debug)]
pub enum Span {
    Linear { ring: BaseRing, dim: usize, rows: Vec<AlgElem>, pivots: Vec<usize> },
    Local { ring: BaseRing, lattice: Lattice },
}

fn to_rat(v: &[RingElem]) -> Vec<BigRational> {
    v.iter()
        .map(|x| match x {
            RingElem::Rat(r) => r.clone(),
            _ => panic!("expected rational coordinates"),
        })
        .collect()
}

impl Span {
    pub fn new(ring: &BaseRing, dim: usize, gens: &[AlgElem]) -> Result<Span> {
        match ring {
            BaseRing::Localized(ps) => {
                let rows: Vec<_> = gens.iter().map(|g| to_rat(g)).collect();
                Ok(Span::Local { ring: ring.clone(), lattice: Lattice::span(ps, dim, &rows) })
            }
            _ => {
                if gens.is_empty() {
                    return Ok(Span::Linear { ring: ring.clone(), dim, rows: vec![], pivots: vec![] });
                }
                let m = Matrix::from_rows(gens.to_vec())?;
                let e = linalg::rref(ring, &m)?;
                let rows = (0..e.pivots.len()).map(|i| e.matrix.row(i).to_vec()).collect();
                Ok(Span::Linear { ring: ring.clone(), dim, rows, pivots: e.pivots })
            }
        }
    }

    pub fn zero(ring: &BaseRing, dim: usize) -> Span {
        Span::new(ring, dim, &[]).expect("empty span")
    }

    pub fn ring(&self) -> &BaseRing {
        match self {
            Span::Linear { ring, .. } | Span::Local { ring, .. } => ring,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Span::Linear { dim, .. } => *dim,
            Span::Local { lattice, .. } => lattice.dim(),
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            Span::Linear { rows, .. } => rows.len(),
            Span::Local { lattice, .. } => lattice.rank(),
        }
    }

    pub fn basis(&self) -> Vec<AlgElem> {
        match self {
            Span::Linear { rows, .. } => rows.clone(),
            Span::Local { lattice, .. } => {
                lattice.basis().iter().map(|r| r.iter().cloned().map(RingElem::Rat).collect()).collect()
            }
        }
    }

    /// Canonical representative of v modulo the span: the coordinates at pivot
    /// positions are cleared. Only for fields and ℤ/p^n.
    pub fn reduce(&self, v: &[RingElem]) -> Result<AlgElem> {
        match self {
            Span::Linear { ring, rows, pivots, .. } => {
                let mut v = v.to_vec();
                for (row, &c) in rows.iter().zip(pivots) {
                    if ring.is_zero(&v[c]) {
                        continue;
                    }
                    let t = v[c].clone();
                    for (x, y) in v.iter_mut().zip(row) {
                        *x = ring.sub(x, &ring.mul(&t, y));
                    }
                }
                Ok(v)
            }
            Span::Local { .. } => Err(Error::NotAField),
        }
    }

    pub fn contains(&self, v: &[RingElem]) -> bool {
        match self {
            Span::Linear { ring, .. } => self.reduce(v).map(|r| r.iter().all(|x| ring.is_zero(x))).unwrap_or(false),
            Span::Local { lattice, .. } => lattice.contains(&to_rat(v)),
        }
    }

    pub fn contains_all(&self, vs: &[AlgElem]) -> bool {
        vs.iter().all(|v| self.contains(v))
    }

    /// Every element of a span over a finite base.
    pub fn elements(&self, budget: u64) -> Result<Vec<AlgElem>> {
        let ring = self.ring();
        let scalars = ring.elements()?;
        let rows = self.basis();
        let q = scalars.len() as u64;
        let total = q
            .checked_pow(rows.len() as u32)
            .filter(|&t| t <= budget)
            .ok_or_else(|| Error::BudgetExceeded("span enumeration".into()))?;
        let mut out = Vec::with_capacity(total as usize);
        for mut code in 0..total {
            let mut v = vec![ring.zero(); self.dim()];
            for row in &rows {
                let c = &scalars[(code % q) as usize];
                code /= q;
                for (x, y) in v.iter_mut().zip(row) {
                    *x = ring.add(x, &ring.mul(c, y));
                }
            }
            out.push(v);
        }
        Ok(out)
    }
}
