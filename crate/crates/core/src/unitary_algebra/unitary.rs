use num_rational::BigRational;
use num_traits::{One, Zero};

use super::algebra::{AlgElem, Algebra};
use super::span::Span;
use crate::error::{Error, Result};
use crate::ring_core::hom::RingHom;
use crate::ring_core::lattice::left_kernel;
use crate::ring_core::linalg;
use crate::ring_core::{rat_int, BaseRing, Matrix, RingElem};

/// A quartet (A, σ, u, Λ).
#[derive(Clone, Debug)]
pub struct UnitaryRing {
    pub algebra: Algebra,
    /// Column j holds the coordinates of σ(e_j).
    pub sigma: Matrix,
    pub u: AlgElem,
    pub lambda_basis: Vec<AlgElem>,
    lambda: Span,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixInvolution {
    Transpose,
    Symplectic,
}

impl UnitaryRing {
    pub fn new(algebra: Algebra, sigma: Matrix, u: AlgElem, lambda_basis: Vec<AlgElem>) -> Result<Self> {
        let n = algebra.dim();
        if sigma.rows() != n || sigma.cols() != n || u.len() != n || lambda_basis.iter().any(|l| l.len() != n) {
            return Err(Error::Invalid("unitary ring data has inconsistent dimensions".into()));
        }
        let lambda = Span::new(algebra.base(), n, &lambda_basis)?;
        Ok(UnitaryRing { algebra, sigma, u, lambda_basis, lambda })
    }

    /// Same algebra, σ and u with Λ = Λ^min(u).
    pub fn with_min_lambda(algebra: Algebra, sigma: Matrix, u: AlgElem) -> Result<Self> {
        let (min, _) = lambda_min_max(&algebra, &sigma, &u)?;
        Self::new(algebra, sigma, u, min)
    }

    pub fn base(&self) -> &BaseRing {
        self.algebra.base()
    }
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }
    pub fn lambda(&self) -> &Span {
        &self.lambda
    }

    pub fn sig(&self, a: &[RingElem]) -> AlgElem {
        self.sigma.mul_vec(self.base(), a)
    }

    pub fn in_lambda(&self, a: &[RingElem]) -> bool {
        self.lambda.contains(a)
    }

    /// (R, id, u, 0) or (R, id, u, R) over a commutative base ring.
    pub fn scalar_ring(base: BaseRing, u: i64, full_lambda: bool) -> Result<Self> {
        let alg = Algebra::scalars(base.clone());
        let sigma = Matrix::identity(&base, 1);
        let lam = if full_lambda { vec![vec![base.one()]] } else { vec![] };
        Self::new(alg, sigma, vec![base.from_int(u)], lam)
    }

    /// M_n(R) with the transpose or the symplectic involution, u = ±1 and
    /// Λ = Λ^min(u). Basis E_ij has index i·n + j.
    pub fn matrix_algebra(n: usize, base: BaseRing, inv: MatrixInvolution, u: i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("matrix size must be positive".into()));
        }
        let dim = n * n;
        let r = base.clone();
        let mut unit = vec![r.zero(); dim];
        for i in 0..n {
            unit[i * n + i] = r.one();
        }
        let alg = Algebra::from_fn(base.clone(), dim, unit.clone(), |a, b| {
            let (i, j) = (a / n, a % n);
            let (k, l) = (b / n, b % n);
            let mut v = vec![r.zero(); dim];
            if j == k {
                v[i * n + l] = r.one();
            }
            v
        })?;
        let mut sigma = Matrix::zeros(&base, dim, dim);
        match inv {
            MatrixInvolution::Transpose => {
                for i in 0..n {
                    for j in 0..n {
                        sigma.set(j * n + i, i * n + j, base.one());
                    }
                }
            }
            MatrixInvolution::Symplectic => {
                if n % 2 != 0 {
                    return Err(Error::Invalid("symplectic involution needs even size".into()));
                }
                // X ↦ J⁻¹ Xᵀ J with J = [[0, I], [-I, 0]]
                let h = n / 2;
                let mut j = Matrix::zeros(&base, n, n);
                for i in 0..h {
                    j.set(i, h + i, base.one());
                    j.set(h + i, i, base.from_int(-1));
                }
                let jinv = linalg::inverse(&base, &j)?.ok_or(Error::NotInvertible)?;
                for a in 0..n {
                    for b in 0..n {
                        let mut et = Matrix::zeros(&base, n, n);
                        et.set(b, a, base.one());
                        let img = jinv.mul(&base, &et)?.mul(&base, &j)?;
                        for x in 0..n {
                            for y in 0..n {
                                sigma.set(x * n + y, a * n + b, img.get(x, y).clone());
                            }
                        }
                    }
                }
            }
        }
        let uvec = alg.scale(&base.from_int(u), &unit);
        Self::with_min_lambda(alg, sigma, uvec)
    }

    /// The order R + πRx + πRy + πRxy in the quaternion algebra (u,v) with
    /// basis (1, πx, πy, πxy); σ fixes x and y and negates xy, the form
    /// element is 1 and Λ = Λ^min(1). With π = 1 this is the full algebra.
    pub fn quaternion(base: BaseRing, u: &BigRational, v: &BigRational, pi: &BigRational) -> Result<Self> {
        if u.is_zero() || v.is_zero() || pi.is_zero() {
            return Err(Error::Invalid("quaternion parameters must be nonzero".into()));
        }
        // products of 1, x, y, xy: (index, coefficient)
        let one = BigRational::one();
        let prod = |i: usize, j: usize| -> (usize, BigRational) {
            match (i, j) {
                (0, j) => (j, one.clone()),
                (i, 0) => (i, one.clone()),
                (1, 1) => (0, u.clone()),
                (1, 2) => (3, one.clone()),
                (1, 3) => (2, u.clone()),
                (2, 1) => (3, -one.clone()),
                (2, 2) => (0, v.clone()),
                (2, 3) => (1, -v.clone()),
                (3, 1) => (2, -u.clone()),
                (3, 2) => (1, v.clone()),
                (3, 3) => (0, -(u * v)),
                _ => unreachable!(),
            }
        };
        let s = [one.clone(), pi.clone(), pi.clone(), pi.clone()];
        let mut constants = vec![vec![vec![base.zero(); 4]; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let (k, c) = prod(i, j);
                let scaled = c * &s[i] * &s[j] / &s[k];
                constants[i][j][k] = base.from_rational(&scaled)?;
            }
        }
        let unit = vec![base.one(), base.zero(), base.zero(), base.zero()];
        let alg = Algebra::new(base.clone(), constants, unit.clone())?;
        let mut sigma = Matrix::identity(&base, 4);
        sigma.set(3, 3, base.from_int(-1));
        Self::with_min_lambda(alg, sigma, unit)
    }

    /// R × R with the exchange involution, u = (1,1), Λ = Λ^min.
    pub fn swap_pair(base: BaseRing) -> Result<Self> {
        let r = base.clone();
        let unit = vec![r.one(), r.one()];
        let alg = Algebra::from_fn(base.clone(), 2, unit.clone(), |i, j| {
            let mut v = vec![r.zero(), r.zero()];
            if i == j {
                v[i] = r.one();
            }
            v
        })?;
        let mut sigma = Matrix::zeros(&base, 2, 2);
        sigma.set(0, 1, base.one());
        sigma.set(1, 0, base.one());
        Self::with_min_lambda(alg, sigma, unit)
    }

    /// Tiled order in M_n(ℚ) over ℤ localized at `primes`, with basis
    /// c_ij E_ij where c_ij = Π p^{m_ij(p)}. The involution is the
    /// transpose-type involution sending c_ij E_ij to c_ji E_ji; u = 1 and
    /// Λ = Λ^min(1).
    pub fn tiled(primes: &[u64], n: usize, patterns: &[(u64, Vec<Vec<u32>>)]) -> Result<Self> {
        let base = BaseRing::localized(primes)?;
        for (p, m) in patterns {
            if !primes.contains(p) {
                return Err(Error::Invalid(format!("pattern given for {p}, which is not a base prime")));
            }
            if m.len() != n || m.iter().any(|r| r.len() != n) {
                return Err(Error::Invalid("pattern must be n x n".into()));
            }
            for i in 0..n {
                if m[i][i] != 0 {
                    return Err(Error::Invalid("pattern diagonal must be zero".into()));
                }
                for j in 0..n {
                    for l in 0..n {
                        if m[i][l] > m[i][j] + m[j][l] {
                            return Err(Error::Invalid(format!(
                                "pattern at {p} is not closed under multiplication ({i},{j},{l})"
                            )));
                        }
                    }
                }
            }
            // σ(c_ij E_ij) = c_ji E_ji requires m_ji - m_ij to be a coboundary
            let k: Vec<i64> = (0..n).map(|i| m[0][i] as i64 - m[i][0] as i64).collect();
            for i in 0..n {
                for j in 0..n {
                    if k[i] - k[j] != m[j][i] as i64 - m[i][j] as i64 {
                        return Err(Error::Invalid(format!(
                            "no transpose-type involution preserves the pattern at {p}"
                        )));
                    }
                }
            }
        }
        let c = |i: usize, j: usize| -> BigRational {
            let mut x = BigRational::one();
            for (p, m) in patterns {
                x *= num_traits::pow(rat_int(*p as i64), m[i][j] as usize);
            }
            x
        };
        let dim = n * n;
        let r = base.clone();
        let mut unit = vec![r.zero(); dim];
        for i in 0..n {
            unit[i * n + i] = r.one();
        }
        let mut constants = vec![vec![vec![r.zero(); dim]; dim]; dim];
        for a in 0..dim {
            for b in 0..dim {
                let (i, j) = (a / n, a % n);
                let (k, l) = (b / n, b % n);
                if j == k {
                    let coef = c(i, j) * c(j, l) / c(i, l);
                    constants[a][b][i * n + l] = r.from_rational(&coef)?;
                }
            }
        }
        let alg = Algebra::new(base.clone(), constants, unit.clone())?;
        let mut sigma = Matrix::zeros(&base, dim, dim);
        for i in 0..n {
            for j in 0..n {
                sigma.set(j * n + i, i * n + j, base.one());
            }
        }
        Self::with_min_lambda(alg, sigma, unit)
    }

    /// Entrywise base change of all data.
    pub fn map_base(&self, hom: &RingHom) -> Result<UnitaryRing> {
        let algebra = self.algebra.map_base(hom)?;
        let sigma = self.sigma.map(|x| hom.apply(x))?;
        let u = hom.apply_all(&self.u)?;
        let lam = self.lambda_basis.iter().map(|l| hom.apply_all(l)).collect::<Result<Vec<_>>>()?;
        UnitaryRing::new(algebra, sigma, u, lam)
    }
}

/// Bases of Λ^min(u) = {a − σ(a)u} and Λ^max(u) = {a : σ(a)u = −a}.
pub fn lambda_min_max(alg: &Algebra, sigma: &Matrix, u: &[RingElem]) -> Result<(Vec<AlgElem>, Vec<AlgElem>)> {
    let base = alg.base();
    let n = alg.dim();
    let sig = |a: &AlgElem| sigma.mul_vec(base, a);
    let min_gens: Vec<AlgElem> = (0..n)
        .map(|j| {
            let e = alg.basis(j);
            alg.sub(&e, &alg.mul(&sig(&e), u))
        })
        .collect();
    let min = Span::new(base, n, &min_gens)?.basis();
    // T(a) = σ(a)u + a
    let images: Vec<AlgElem> = (0..n)
        .map(|j| {
            let e = alg.basis(j);
            alg.add(&alg.mul(&sig(&e), u), &e)
        })
        .collect();
    let max = match base {
        BaseRing::Localized(ps) => {
            let rows: Vec<Vec<BigRational>> =
                images.iter().map(|v| v.iter().map(|x| base.to_rational(x).unwrap()).collect()).collect();
            left_kernel(ps, &rows).into_iter().map(|r| r.into_iter().map(RingElem::Rat).collect()).collect()
        }
        BaseRing::Product(_) => return Err(Error::NotAField),
        _ => {
            let m = Matrix::from_rows(images)?.transpose();
            linalg::kernel(base, &m)?
        }
    };
    Ok((min, max))
}

/// All violated unitary-ring axioms; empty means valid.
pub fn check_unitary(ring: &UnitaryRing) -> Vec<String> {
    let alg = &ring.algebra;
    let base = alg.base();
    let n = alg.dim();
    let mut out = alg.diagnostics();
    if ring.sigma.mul(base, &ring.sigma).ok() != Some(Matrix::identity(base, n)) {
        out.push("σ² ≠ id".into());
    }
    'anti: for i in 0..n {
        for j in 0..n {
            let (ei, ej) = (alg.basis(i), alg.basis(j));
            let lhs = ring.sig(&alg.mul(&ei, &ej));
            let rhs = alg.mul(&ring.sig(&ej), &ring.sig(&ei));
            if lhs != rhs {
                out.push(format!("σ is not anti-multiplicative on (e_{i}, e_{j})"));
                break 'anti;
            }
        }
    }
    let u = &ring.u;
    if (0..n).any(|j| {
        let e = alg.basis(j);
        alg.mul(u, &e) != alg.mul(&e, u)
    }) {
        out.push("u is not central".into());
    }
    if alg.mul(&ring.sig(u), u) != alg.one() {
        out.push("u^σ·u ≠ 1".into());
    }
    if ring.lambda_basis.iter().any(|l| !alg.is_zero(&alg.add(&alg.mul(&ring.sig(l), u), l))) {
        out.push("Λ ⊄ Λ^max".into());
    }
    match lambda_min_max(alg, &ring.sigma, u) {
        Ok((min, _)) => {
            if !ring.lambda().contains_all(&min) {
                out.push("Λ^min ⊄ Λ".into());
            }
        }
        Err(e) => out.push(format!("Λ^min not computable: {e}")),
    }
    'conj: for i in 0..n {
        let a = alg.basis(i);
        let sa = ring.sig(&a);
        for l in &ring.lambda_basis {
            if !ring.in_lambda(&alg.mul(&alg.mul(&sa, l), &a)) {
                out.push("a^σ Λ a ⊄ Λ".into());
                break 'conj;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring_core::rat_int;

    #[test]
    fn documented_diagnostics() {
        let f5 = BaseRing::prime_field(5).unwrap();
        let ok = UnitaryRing::scalar_ring(f5.clone(), 1, false).unwrap();
        assert!(check_unitary(&ok).is_empty());
        let bad = UnitaryRing::scalar_ring(f5, 1, true).unwrap();
        assert!(check_unitary(&bad).contains(&"Λ ⊄ Λ^max".to_string()));
        let f3 = BaseRing::prime_field(3).unwrap();
        let m2 = UnitaryRing::matrix_algebra(2, f3, MatrixInvolution::Transpose, 1).unwrap();
        assert!(check_unitary(&m2).is_empty());
        assert_eq!(m2.lambda().rank(), 1);
    }

    #[test]
    fn lambda_examples() {
        let f5 = BaseRing::prime_field(5).unwrap();
        let r = UnitaryRing::scalar_ring(f5.clone(), -1, true).unwrap();
        let (min, max) = lambda_min_max(&r.algebra, &r.sigma, &r.u).unwrap();
        assert_eq!((min.len(), max.len()), (1, 1));
        let f3 = BaseRing::prime_field(3).unwrap();
        let m2 = UnitaryRing::matrix_algebra(2, f3, MatrixInvolution::Transpose, 1).unwrap();
        let (min, max) = lambda_min_max(&m2.algebra, &m2.sigma, &m2.u).unwrap();
        assert_eq!((min.len(), max.len()), (1, 1));
        let sw = UnitaryRing::swap_pair(f5.clone()).unwrap();
        let (min, max) = lambda_min_max(&sw.algebra, &sw.sigma, &sw.u).unwrap();
        assert_eq!((min.len(), max.len()), (1, 1));
        assert!(sw.in_lambda(&[f5.from_int(1), f5.from_int(-1)]));
        assert!(check_unitary(&sw).is_empty());
    }

    #[test]
    fn symplectic_is_valid_and_larger_lambda() {
        let f3 = BaseRing::prime_field(3).unwrap();
        let s = UnitaryRing::matrix_algebra(2, f3, MatrixInvolution::Symplectic, 1).unwrap();
        assert!(check_unitary(&s).is_empty());
        assert_eq!(s.lambda().rank(), 3);
    }

    #[test]
    fn quaternion_order_is_valid() {
        let z3 = BaseRing::localized(&[3]).unwrap();
        let q = UnitaryRing::quaternion(z3, &rat_int(-1), &rat_int(-1), &rat_int(3)).unwrap();
        assert!(check_unitary(&q).is_empty(), "{:?}", check_unitary(&q));
        let (min, max) = lambda_min_max(&q.algebra, &q.sigma, &q.u).unwrap();
        assert_eq!(min.len(), 1);
        assert_eq!(max.len(), 1);
    }

    #[test]
    fn tiled_orders() {
        let t = UnitaryRing::tiled(&[3], 2, &[(3, vec![vec![0, 1], vec![0, 0]])]).unwrap();
        assert!(check_unitary(&t).is_empty(), "{:?}", check_unitary(&t));
        let g = UnitaryRing::tiled(&[3, 5], 2, &[(3, vec![vec![0, 1], vec![1, 0]]), (5, vec![vec![0, 1], vec![1, 0]])])
            .unwrap();
        assert!(check_unitary(&g).is_empty());
        assert!(UnitaryRing::tiled(&[3], 2, &[(3, vec![vec![1, 0], vec![0, 0]])]).is_err());
    }
}
