//! Structural shortcuts: hereditary tiled patterns, the enough-idempotents
//! condition and the second-kind criterion.

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::spec::OrderSpec;
use crate::arithmetic::Place;
use crate::error::{Error, Result};
use crate::ring_core::base::valuation;
use crate::ring_core::{BaseRing, RingHom};
use crate::unitary_algebra::factor::component_splits_at;
use crate::unitary_algebra::{
    bar_construction, jacobson_radical, reduce_unitary, semisimple_factorization, AlgElem, ComponentReport,
    SimpleFactorization, Span, UnitaryRing,
};

/// (A_F, its simple factors) for an order over a localization of ℤ.
pub fn rational_factorization(ring: &UnitaryRing) -> Result<(UnitaryRing, SimpleFactorization)> {
    let hom = RingHom::new(ring.base(), &BaseRing::Rationals)?;
    let af = ring.map_base(&hom)?;
    if !jacobson_radical(&af.algebra)?.is_empty() {
        return Err(Error::UnsupportedSpec("A_F is not semisimple".into()));
    }
    let fac = semisimple_factorization(&af)?;
    Ok((af, fac))
}

/// Index of the division part of A_F,c ⊗ ℚ_p.
pub fn local_index(c: &ComponentReport, p: u64) -> Result<usize> {
    match component_splits_at(c, Some(Place::Prime(p)))? {
        Some(true) => Ok(1),
        Some(false) if c.deg == 2 => Ok(2),
        _ => Err(Error::SplitUndecidable),
    }
}

/// Standard hereditary form at one prime: after a simultaneous permutation,
/// blocks on the diagonal carry exponent 0, blocks above carry 1, blocks below 0.
pub fn pattern_is_hereditary(m: &[Vec<u32>]) -> bool {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return false;
    }
    for i in 0..n {
        if m[i][i] != 0 {
            return false;
        }
        for j in 0..n {
            if m[i][j] > 1 || m[i][j] + m[j][i] > 1 {
                return false;
            }
            for k in 0..n {
                if m[i][k] > m[i][j] + m[j][k] {
                    return false;
                }
            }
        }
    }
    // i ~ j when both exponents vanish; the triangle condition makes this an equivalence
    let mut block = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for i in 0..n {
        if block[i] != usize::MAX {
            continue;
        }
        block[i] = reps.len();
        for j in i + 1..n {
            if m[i][j] == 0 && m[j][i] == 0 {
                block[j] = reps.len();
            }
        }
        reps.push(i);
    }
    for i in 0..n {
        for j in 0..n {
            if block[i] == block[j] && (m[i][j] != 0 || m[j][i] != 0) {
                return false;
            }
            // between blocks the exponent depends only on the pair of blocks
            if m[i][j] != m[reps[block[i]]][reps[block[j]]] {
                return false;
            }
        }
    }
    // the block relation B < C (exponent 1 from B to C) must be a strict total order
    let r = reps.len();
    let less = |a: usize, b: usize| m[reps[a]][reps[b]] == 1;
    for a in 0..r {
        for b in 0..r {
            if a != b && less(a, b) == less(b, a) {
                return false;
            }
            for c in 0..r {
                if less(a, b) && less(b, c) && !less(a, c) {
                    return false;
                }
            }
        }
    }
    true
}

/// Conjunction of [`pattern_is_hereditary`] over the given primes; primes
/// without a pattern carry the zero pattern.
pub fn hereditary_tiled_check(n: usize, patterns: &[(u64, Vec<Vec<u32>>)], primes: &[u64]) -> bool {
    primes.iter().all(|p| match patterns.iter().find(|(q, _)| q == p) {
        Some((_, m)) => m.len() == n && pattern_is_hereditary(m),
        None => true,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct IdempotentCheckAtPrime {
    pub prime: u64,
    pub holds: bool,
    pub premises: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdempotentReport {
    pub holds: bool,
    pub per_prime: Vec<IdempotentCheckAtPrime>,
}

/// dim_ℚ of ε_c·e·A_F.
fn corner_dim(af: &UnitaryRing, c: &ComponentReport, e: &AlgElem) -> Result<usize> {
    let alg = &af.algebra;
    let ce = alg.mul(&c.idempotent, e);
    let gens: Vec<AlgElem> = (0..alg.dim()).map(|k| alg.mul(&ce, &alg.basis(k))).collect();
    Ok(Span::new(alg.base(), alg.dim(), &gens)?.rank())
}

/// Condition (2) at one prime p, with idempotents given in A coordinates.
pub fn idempotent_condition_at(
    ring: &UnitaryRing,
    af: &UnitaryRing,
    fac: &SimpleFactorization,
    p: u64,
    idempotents: &[AlgElem],
) -> Result<IdempotentCheckAtPrime> {
    let alg = &ring.algebra;
    let hom = RingHom::new(ring.base(), &BaseRing::Rationals)?;
    let mut premises = Vec::new();
    let mut es = Vec::with_capacity(idempotents.len());
    for e in idempotents {
        if e.len() != alg.dim() || alg.mul(e, e) != *e {
            return Err(Error::NotIdempotent);
        }
        es.push(hom.apply_all(e)?);
    }
    let afa = &af.algebra;
    let mut holds = true;
    for c in &fac.components {
        if c.center_dimension != 1 {
            return Err(Error::UnsupportedSpec(format!(
                "component {} has a center of degree {} over ℚ",
                c.index, c.center_dimension
            )));
        }
        let covered = es.iter().any(|e| !afa.is_zero(&afa.mul(&c.idempotent, e)));
        premises.push(format!("component {} at {p}: {}", c.index, if covered { "A e A covers it" } else { "no e_j meets it" }));
        holds &= covered;
    }
    for (j, e) in es.iter().enumerate() {
        let touched: Vec<&ComponentReport> =
            fac.components.iter().filter(|c| !afa.is_zero(&afa.mul(&c.idempotent, e))).collect();
        let local = match touched.as_slice() {
            [c] => corner_dim(af, c, e)? == local_index(c, p)? * c.deg * c.center_dimension,
            _ => false,
        };
        premises.push(format!("e_{j} A_K e_{j} at {p}: {}", if local { "local" } else { "not local" }));
        holds &= local;
    }
    Ok(IdempotentCheckAtPrime { prime: p, holds, premises })
}

pub fn idempotent_condition_check(spec: &OrderSpec) -> Result<IdempotentReport> {
    let ring = spec.build()?;
    let (af, fac) = rational_factorization(&ring)?;
    let mut per_prime = Vec::new();
    for &p in spec.primes() {
        let es = spec.idempotents_at(&ring, p)?;
        per_prime.push(idempotent_condition_at(&ring, &af, &fac, p, &es)?);
    }
    Ok(IdempotentReport { holds: per_prime.iter().all(|r| r.holds), per_prime })
}

/// Input to [`second_kind_check`].
pub enum SecondKindInput<'a> {
    /// R′ = R[x]/(x² − a·x − b) over ℤ localized at `primes`.
    Galois { primes: &'a [u64], a: BigRational, b: BigRational },
    /// A candidate element of the ring itself.
    Element { ring: &'a UnitaryRing, a: AlgElem },
}

pub fn second_kind_check(input: &SecondKindInput) -> Result<bool> {
    match input {
        SecondKindInput::Galois { primes, a, b } => {
            let d = a * a + BigRational::from_integer(4.into()) * b;
            Ok(!d.is_zero() && primes.iter().all(|&p| valuation(d.numer(), p) == 0 && valuation(d.denom(), p) == 0))
        }
        SecondKindInput::Element { ring, a } => {
            let residues: Vec<UnitaryRing> = match ring.base() {
                BaseRing::Localized(ps) => ps.iter().map(|&p| reduce_unitary(ring, p)).collect::<Result<_>>()?,
                BaseRing::Truncated { p, .. } => vec![reduce_unitary(ring, *p)?],
                BaseRing::Finite(_) => vec![(*ring).clone()],
                other => return Err(Error::UnsupportedRing(other.name())),
            };
            let hom_target = |r: &UnitaryRing| RingHom::new(ring.base(), r.base());
            for raw in &residues {
                let hom = hom_target(raw)?;
                let ar = hom.apply_all(a)?;
                let alg = &raw.algebra;
                let diff = alg.sub(&ar, &raw.sig(&ar));
                if !alg.is_unit(&diff)? {
                    return Ok(false);
                }
                let bar = bar_construction(raw)?;
                let ab = bar.proj.mul_vec(raw.base(), &ar);
                let balg = &bar.bar.algebra;
                let central =
                    (0..balg.dim()).all(|k| balg.mul(&ab, &balg.basis(k)) == balg.mul(&balg.basis(k), &ab));
                if !central {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}
