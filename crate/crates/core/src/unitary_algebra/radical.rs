use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::algebra::{AlgElem, Algebra};
use super::span::Span;
use super::unitary::UnitaryRing;
use crate::error::{Error, Result};
use crate::ring_core::hom::RingHom;
use crate::ring_core::linalg;
use crate::ring_core::{BaseRing, Matrix};

/// Basis (generators over ℤ/p^n) of the Jacobson radical.
pub fn jacobson_radical(alg: &Algebra) -> Result<Vec<AlgElem>> {
    let base = alg.base();
    match base {
        BaseRing::Rationals => trace_form_radical(alg),
        BaseRing::Finite(f) if f.degree() == 1 => prime_field_radical(alg, f.p()),
        BaseRing::Finite(f) => {
            if !alg.is_commutative() {
                return Err(Error::UnsupportedRing(
                    "radical of a noncommutative algebra over an extension field".into(),
                ));
            }
            // nilradical = kernel of a ↦ a^(q^k), which is linear here
            let q = f.order();
            let mut k = q;
            while (k as usize) < alg.dim() {
                k = k.saturating_mul(q);
            }
            let n = alg.dim();
            let mut m = Matrix::zeros(base, n, n);
            for j in 0..n {
                let img = alg.pow(&alg.basis(j), k);
                for (i, x) in img.into_iter().enumerate() {
                    m.set(i, j, x);
                }
            }
            linalg::kernel(base, &m)
        }
        BaseRing::Truncated { p, .. } => {
            let fp = BaseRing::prime_field(*p)?;
            let hom = RingHom::new(base, &fp)?;
            let reduced = alg.map_base(&hom)?;
            let rad = jacobson_radical(&reduced)?;
            let mut gens: Vec<AlgElem> =
                rad.iter().map(|v| v.iter().map(|x| base.from_int(fp.lift(x).unwrap().to_i64().unwrap())).collect()).collect();
            for j in 0..alg.dim() {
                gens.push(alg.scale(&base.from_int(*p as i64), &alg.basis(j)));
            }
            Ok(gens)
        }
        _ => Err(Error::UnsupportedRing(format!("radical over {}", base.name()))),
    }
}

fn trace_form_radical(alg: &Algebra) -> Result<Vec<AlgElem>> {
    let base = alg.base();
    let n = alg.dim();
    let mut t = Matrix::zeros(base, n, n);
    for i in 0..n {
        for j in 0..n {
            let l = alg.left_mult(&alg.mul(&alg.basis(i), &alg.basis(j)));
            let mut tr = base.zero();
            for k in 0..n {
                tr = base.add(&tr, l.get(k, k));
            }
            t.set(i, j, tr);
        }
    }
    // a with T(a, b) = 0 for all b: rows of T combine to zero
    linalg::kernel(base, &t.transpose())
}

/// Iterated trace functionals over F_p on the left regular representation.
fn prime_field_radical(alg: &Algebra, p: u64) -> Result<Vec<AlgElem>> {
    let base = alg.base();
    let n = alg.dim();
    let mut current: Vec<AlgElem> = (0..n).map(|j| alg.basis(j)).collect();
    let mut bound = 0u32;
    while (p as u128).pow(bound + 1) <= n as u128 {
        bound += 1;
    }
    for i in 0..=bound {
        if current.is_empty() {
            break;
        }
        let pi = BigInt::from(p).pow(i);
        let modulus = &pi * BigInt::from(p);
        // functional value g_i(v_k e_j), laid out as rows j, columns k
        let mut m = Matrix::zeros(base, n, current.len());
        for (k, v) in current.iter().enumerate() {
            for j in 0..n {
                let x = alg.mul(v, &alg.basis(j));
                let val = g_functional(alg, &x, p.pow(i), &modulus, &pi);
                m.set(j, k, base.from_int(val));
            }
        }
        let kern = linalg::kernel(base, &m)?;
        current = kern
            .iter()
            .map(|c| {
                let mut acc = alg.zero();
                for (ck, v) in c.iter().zip(&current) {
                    acc = alg.add(&acc, &alg.scale(ck, v));
                }
                acc
            })
            .collect();
    }
    Ok(Span::new(base, n, &current)?.basis())
}

/// Tr(Ã^{e}) / p^i mod p where Ã is an integer lift of the regular
/// representation of x, and e = p^i. Computed modulo p^{i+1}.
fn g_functional(alg: &Algebra, x: &[crate::ring_core::RingElem], e: u64, modulus: &BigInt, pi: &BigInt) -> i64 {
    let base = alg.base();
    let l = alg.left_mult(x);
    let n = l.rows();
    let lift: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| base.lift(l.get(i, j)).unwrap()).collect()).collect();
    let mut acc: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| BigInt::from((i == j) as u8)).collect()).collect();
    for _ in 0..e {
        let mut next = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for k in 0..n {
                if acc[i][k].is_zero() {
                    continue;
                }
                for j in 0..n {
                    next[i][j] += &acc[i][k] * &lift[k][j];
                }
            }
        }
        for row in next.iter_mut() {
            for v in row.iter_mut() {
                *v = ((&*v % modulus) + modulus) % modulus;
            }
        }
        acc = next;
    }
    let mut tr = BigInt::zero();
    for (i, row) in acc.iter().enumerate() {
        tr += &row[i];
    }
    let tr = ((tr % modulus) + modulus) % modulus;
    (tr / pi).to_i64().unwrap()
}

/// A quotient A/J over a field, with the coordinate maps.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub algebra: Algebra,
    /// (dim A/J) × (dim A): coordinates of the image.
    pub proj: Matrix,
    /// (dim A) × (dim A/J): a fixed set-theoretic lift (zero at pivot slots).
    pub lift: Matrix,
}

/// Quotient of an algebra over a field by a two-sided ideal.
pub fn quotient(alg: &Algebra, ideal: &[AlgElem]) -> Result<Quotient> {
    let base = alg.base().clone();
    let n = alg.dim();
    let span = Span::new(&base, n, ideal)?;
    let pivots = match &span {
        Span::Linear { pivots, .. } => pivots.clone(),
        _ => return Err(Error::NotAField),
    };
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let d = free.len();
    let project = |v: &AlgElem| -> Result<AlgElem> {
        let r = span.reduce(v)?;
        Ok(free.iter().map(|&c| r[c].clone()).collect())
    };
    let mut proj = Matrix::zeros(&base, d, n);
    for j in 0..n {
        for (i, x) in project(&alg.basis(j))?.into_iter().enumerate() {
            proj.set(i, j, x);
        }
    }
    let mut lift = Matrix::zeros(&base, n, d);
    for (i, &c) in free.iter().enumerate() {
        lift.set(c, i, base.one());
    }
    let mut constants = Vec::with_capacity(d);
    for &a in &free {
        let mut row = Vec::with_capacity(d);
        for &b in &free {
            row.push(project(&alg.mul(&alg.basis(a), &alg.basis(b)))?);
        }
        constants.push(row);
    }
    let unit = project(&alg.one())?;
    Ok(Quotient { algebra: Algebra::new(base, constants, unit)?, proj, lift })
}

/// The residue unitary ring modulo p, before and after dividing out the radical.
#[derive(Clone, Debug)]
pub struct BarData {
    /// Entrywise reduction to the residue field (identity for finite fields).
    pub raw: UnitaryRing,
    /// Quotient by the Jacobson radical.
    pub bar: UnitaryRing,
    /// Coordinates raw → bar.
    pub proj: Matrix,
    pub lift: Matrix,
    pub radical_dim: usize,
}

/// Entrywise reduction of a unitary ring over a localization of ℤ or ℤ/p^n to F_p.
pub fn reduce_unitary(ring: &UnitaryRing, p: u64) -> Result<UnitaryRing> {
    match ring.base() {
        BaseRing::Localized(ps) if ps.contains(&p) => {}
        BaseRing::Truncated { p: q, .. } if *q == p => {}
        BaseRing::Rationals => {}
        other => return Err(Error::UnsupportedRing(format!("cannot reduce {} modulo {p}", other.name()))),
    }
    let fp = BaseRing::prime_field(p)?;
    let hom = RingHom::new(ring.base(), &fp)?;
    ring.map_base(&hom)
}

/// The semisimple residue ring (Ā, σ̄, ū, Λ̄).
pub fn bar_construction(ring: &UnitaryRing) -> Result<BarData> {
    let raw = match ring.base() {
        BaseRing::Finite(_) | BaseRing::Rationals => ring.clone(),
        BaseRing::Truncated { p, .. } => reduce_unitary(ring, *p)?,
        BaseRing::Localized(ps) if ps.len() == 1 => reduce_unitary(ring, ps[0])?,
        other => {
            return Err(Error::UnsupportedRing(format!(
                "residue ring of {} needs a single prime; reduce first",
                other.name()
            )))
        }
    };
    let rad = jacobson_radical(&raw.algebra)?;
    let q = quotient(&raw.algebra, &rad)?;
    let base = raw.base().clone();
    let d = q.algebra.dim();
    let image = |v: &AlgElem| q.proj.mul_vec(&base, v);
    let mut sigma = Matrix::zeros(&base, d, d);
    for j in 0..d {
        let lifted = q.lift.col(j);
        for (i, x) in image(&raw.sig(&lifted)).into_iter().enumerate() {
            sigma.set(i, j, x);
        }
    }
    let u = image(&raw.u);
    let lam: Vec<AlgElem> = raw.lambda_basis.iter().map(&image).collect();
    let bar = UnitaryRing::new(q.algebra.clone(), sigma, u, lam)?;
    Ok(BarData { raw, bar, proj: q.proj, lift: q.lift, radical_dim: rad.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring_core::{rat_int, RingElem};
    use crate::unitary_algebra::unitary::MatrixInvolution;

    fn dual(base: &BaseRing) -> Algebra {
        let z = base.zero();
        let o = base.one();
        Algebra::new(
            base.clone(),
            vec![vec![vec![o.clone(), z.clone()], vec![z.clone(), o.clone()]], vec![vec![z.clone(), o.clone()], vec![z.clone(), z.clone()]]],
            vec![o, z],
        )
        .unwrap()
    }

    /// Oracle: a ∈ J iff every element of aA is nilpotent (finite algebras).
    fn brute_radical_size(alg: &Algebra) -> usize {
        let all = alg.elements(1 << 16).unwrap();
        let n = alg.dim() as u64;
        all.iter()
            .filter(|a| all.iter().all(|b| alg.is_zero(&alg.pow(&alg.mul(a, b), n + 1))))
            .count()
    }

    #[test]
    fn radical_of_dual_numbers() {
        for p in [2u64, 3, 5] {
            let f = BaseRing::prime_field(p).unwrap();
            let a = dual(&f);
            let j = jacobson_radical(&a).unwrap();
            assert_eq!(j.len(), 1);
            assert_eq!(p.pow(j.len() as u32) as usize, brute_radical_size(&a));
        }
    }

    #[test]
    fn radical_of_simple_and_triangular() {
        let f3 = BaseRing::prime_field(3).unwrap();
        let m2 = UnitaryRing::matrix_algebra(2, f3.clone(), MatrixInvolution::Transpose, 1).unwrap();
        assert!(jacobson_radical(&m2.algebra).unwrap().is_empty());
        // upper triangular 2x2 over ℚ: basis e11, e12, e22
        let q = BaseRing::Rationals;
        let idx = |i: usize, j: usize| match (i, j) {
            (0, 0) => 0,
            (0, 1) => 1,
            (1, 1) => 2,
            _ => usize::MAX,
        };
        let pairs = [(0, 0), (0, 1), (1, 1)];
        let ut = Algebra::from_fn(q.clone(), 3, vec![q.one(), q.zero(), q.one()], |a, b| {
            let (i, j) = pairs[a];
            let (k, l) = pairs[b];
            let mut v = vec![q.zero(); 3];
            if j == k {
                v[idx(i, l)] = q.one();
            }
            v
        })
        .unwrap();
        let j = jacobson_radical(&ut).unwrap();
        assert_eq!(j.len(), 1);
        assert!(q.is_zero(&j[0][0]) && q.is_zero(&j[0][2]) && !q.is_zero(&j[0][1]));
    }

    #[test]
    fn quaternion_order_mod_three() {
        let z3 = BaseRing::localized(&[3]).unwrap();
        let ord = UnitaryRing::quaternion(z3, &rat_int(-1), &rat_int(-1), &rat_int(3)).unwrap();
        let b = bar_construction(&ord).unwrap();
        assert_eq!(b.raw.dim(), 4);
        assert_eq!(b.radical_dim, 3);
        assert_eq!(b.bar.dim(), 1);
        assert!(b.bar.lambda().rank() == 0);
        assert_eq!(b.bar.u, vec![RingElem::Int(1)]);
    }

    #[test]
    fn tiled_mod_three() {
        let t = UnitaryRing::tiled(&[3], 2, &[(3, vec![vec![0, 1], vec![0, 0]])]).unwrap();
        let b = bar_construction(&t).unwrap();
        assert_eq!(b.radical_dim, 2);
        assert_eq!(b.bar.dim(), 2);
        assert!(b.bar.algebra.is_commutative());
        let m = UnitaryRing::matrix_algebra(2, BaseRing::localized(&[3]).unwrap(), MatrixInvolution::Transpose, 1).unwrap();
        let b = bar_construction(&m).unwrap();
        assert_eq!((b.radical_dim, b.bar.dim()), (0, 4));
    }

    #[test]
    fn truncated_radical_contains_p() {
        let z9 = BaseRing::truncated(3, 2).unwrap();
        let a = Algebra::scalars(z9.clone());
        let j = jacobson_radical(&a).unwrap();
        assert!(j.iter().any(|v| v[0] == z9.from_int(3)));
    }
}
