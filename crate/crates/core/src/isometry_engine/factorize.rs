use std::sync::Arc;

use serde::Serialize;

use super::dickson::{gf2_span, DicksonEngine};
use super::reflection::{form_value, reflection_matrix, Reflection};
use crate::error::{Error, Result};
use crate::quadratic_space::forms::herm_gram;
use crate::quadratic_space::{is_isometry, scalar_extend, AlgMatrix, QuadClass};
use crate::ring_core::hom::RingHom;
use crate::ring_core::{BaseRing, Matrix, RingElem};
use crate::unitary_algebra::{AlgElem, UnitaryRing};

/// Commutative base, trivial involution, u = 1, 2 a unit.
fn check_symmetric_local(ring: &UnitaryRing) -> Result<()> {
    let base = ring.base();
    let ok_base = matches!(base, BaseRing::Finite(_) | BaseRing::Truncated { .. } | BaseRing::Localized(_));
    if !ok_base || ring.dim() != 1 || ring.sigma != Matrix::identity(base, 1) || ring.u != ring.algebra.one() {
        return Err(Error::UnsupportedRing(
            "factorization needs a commutative local base with trivial involution and u = 1".into(),
        ));
    }
    if !base.two_is_unit() {
        return Err(Error::HypothesisViolated("2 is not a unit".into()));
    }
    Ok(())
}

fn scale_vec(ring: &UnitaryRing, v: &[AlgElem], c: &AlgElem) -> Vec<AlgElem> {
    v.iter().map(|x| ring.algebra.mul(x, c)).collect()
}

fn sub_vec(ring: &UnitaryRing, a: &[AlgElem], b: &[AlgElem]) -> Vec<AlgElem> {
    a.iter().zip(b).map(|(x, y)| ring.algebra.sub(x, y)).collect()
}

fn add_vec(ring: &UnitaryRing, a: &[AlgElem], b: &[AlgElem]) -> Vec<AlgElem> {
    a.iter().zip(b).map(|(x, y)| ring.algebra.add(x, y)).collect()
}

/// An h-orthogonal basis with unit lengths (unimodular h, 2 a unit).
fn orthogonal_basis(ring: &UnitaryRing, h: &AlgMatrix) -> Result<Vec<Vec<AlgElem>>> {
    let alg = &ring.algebra;
    let m = h.rows;
    let mut pool: Vec<Vec<AlgElem>> = (0..m)
        .map(|i| (0..m).map(|j| if i == j { alg.one() } else { alg.zero() }).collect())
        .collect();
    let mut out = Vec::with_capacity(m);
    while !pool.is_empty() {
        let unit_len = |v: &Vec<AlgElem>| alg.is_unit(&form_value(ring, h, v, v)).unwrap_or(false);
        let pick = if let Some(i) = pool.iter().position(unit_len) {
            pool.remove(i)
        } else {
            let mut found = None;
            'outer: for i in 0..pool.len() {
                for j in i + 1..pool.len() {
                    let s = add_vec(ring, &pool[i], &pool[j]);
                    if unit_len(&s) {
                        found = Some((i, s));
                        break 'outer;
                    }
                }
            }
            let (i, s) = found.ok_or(Error::NotUnimodular)?;
            pool[i] = s;
            pool.remove(i)
        };
        let len_inv = alg.inv(&form_value(ring, h, &pick, &pick))?.ok_or(Error::NotUnimodular)?;
        for v in pool.iter_mut() {
            let coef = alg.mul(&form_value(ring, h, &pick, v), &len_inv);
            *v = sub_vec(ring, v, &scale_vec(ring, &pick, &coef));
        }
        out.push(pick);
    }
    Ok(out)
}

fn reflection_for(q: &QuadClass, h: &AlgMatrix, y: Vec<AlgElem>) -> Result<(Reflection, AlgMatrix)> {
    let ring = q.parent();
    let c = form_value(ring, q.gram(), &y, &y);
    let c_inv = ring.algebra.inv(&c)?.ok_or(Error::ResidueFieldTooSmall)?;
    let s = reflection_matrix(ring, h, &y, &c_inv);
    Ok((Reflection { y, c }, s))
}

/// Write an isometry as a product s_1·s_2⋯s_k of at most 2m reflections.
pub fn cd_factorize(phi: &AlgMatrix, q: &QuadClass) -> Result<Vec<Reflection>> {
    let ring = q.parent();
    check_symmetric_local(ring)?;
    let alg = &ring.algebra;
    if !is_isometry(phi, q, q)? {
        return Err(Error::Invalid("input is not an isometry of the form".into()));
    }
    let h = herm_gram(ring, q.gram());
    if !h.is_invertible(alg)? {
        return Err(Error::NotUnimodular);
    }
    let basis = orthogonal_basis(ring, &h)?;
    let mut psi = phi.clone();
    let mut out = Vec::new();
    for v in basis {
        let w = psi.mul_vec(alg, &v);
        if w == v {
            continue;
        }
        let d = sub_vec(ring, &v, &w);
        if alg.is_unit(&form_value(ring, &h, &d, &d))? {
            let (r, s) = reflection_for(q, &h, d)?;
            psi = s.mul(alg, &psi);
            out.push(r);
        } else {
            let e = add_vec(ring, &v, &w);
            if !alg.is_unit(&form_value(ring, &h, &e, &e))? {
                return Err(Error::ResidueFieldTooSmall);
            }
            let (r1, s1) = reflection_for(q, &h, e)?;
            let (r2, s2) = reflection_for(q, &h, v)?;
            psi = s2.mul(alg, &s1.mul(alg, &psi));
            out.push(r1);
            out.push(r2);
        }
    }
    if psi != AlgMatrix::identity(alg, q.rank()) {
        return Err(Error::Invalid("factorization did not terminate at the identity".into()));
    }
    // every step used an involution, so φ = s_1 s_2 ⋯ s_k
    if reflection_product(q, &out)? != *phi {
        return Err(Error::Invalid("reflection product does not reproduce the input".into()));
    }
    Ok(out)
}

/// s_1·s_2⋯s_k for a list of reflection data.
pub fn reflection_product(q: &QuadClass, refl: &[Reflection]) -> Result<AlgMatrix> {
    let ring = q.parent();
    let alg = &ring.algebra;
    let h = herm_gram(ring, q.gram());
    let mut acc = AlgMatrix::identity(alg, q.rank());
    for r in refl {
        let c_inv = alg.inv(&r.c)?.ok_or(Error::CNotUnit)?;
        acc = acc.mul(alg, &reflection_matrix(ring, &h, &r.y, &c_inv));
    }
    Ok(acc)
}

#[derive(Clone, Debug, Serialize)]
pub struct Approximation {
    /// Exact isometry over ℤ_(p), entries as rationals.
    #[serde(skip)]
    pub psi: AlgMatrix,
    pub entries: Vec<Vec<String>>,
    pub reflections: usize,
    pub exact_isometry: bool,
    pub congruent: bool,
    pub signature: Vec<u8>,
}

/// Lift an isometry of q mod p^N (entries in `trunc` = ℤ/p^N) to an exact
/// isometry over ℤ_(p) congruent to it, through reflections. `image`
/// generates the allowed Dickson values; `None` means ⟨ξ⟩.
pub fn weak_approximate(
    phi: &AlgMatrix,
    trunc: &BaseRing,
    q: &QuadClass,
    image: Option<&[Vec<u8>]>,
) -> Result<Approximation> {
    let BaseRing::Truncated { p, .. } = trunc else {
        return Err(Error::UnsupportedRing("the isometry must be given over Z/p^N".into()));
    };
    let p = *p;
    let local = BaseRing::localized(&[p])?;
    let q_p = match q.parent().base() {
        BaseRing::Localized(ps) if ps.contains(&p) => scalar_extend(q, &RingHom::new(q.parent().base(), &local)?)?,
        _ => return Err(Error::UnsupportedRing(format!("form must live over a localization containing {p}"))),
    };
    check_symmetric_local(q_p.parent())?;
    let to_trunc = RingHom::new(&local, trunc)?;
    let q_n = scalar_extend(&q_p, &to_trunc)?;
    if phi.rows != q.rank() || phi.data.iter().flatten().any(|x| !trunc.contains(x)) {
        return Err(Error::Invalid(format!("isometry entries must lie in {}", trunc.name())));
    }
    let phi_n = phi.clone();
    let engine = DicksonEngine::new(&q_n)?;
    let sig = engine.signature(&phi_n)?;
    let gens: Vec<Vec<u8>> = match image {
        Some(g) => g.to_vec(),
        None => vec![engine.xi.clone()],
    };
    if !gf2_span(&gens, sig.bits.len()).contains(&sig.bits) {
        return Err(Error::DicksonObstruction);
    }
    let refl = cd_factorize(&phi_n, &q_n)?;
    let ring_p: &Arc<UnitaryRing> = q_p.parent();
    let lift = |x: &RingElem| -> Result<RingElem> {
        let n = trunc.lift(x).ok_or_else(|| Error::Invalid("cannot lift".into()))?;
        Ok(RingElem::Rat(num_rational::BigRational::from_integer(n)))
    };
    let mut lifted = Vec::with_capacity(refl.len());
    for r in &refl {
        let y: Vec<AlgElem> = r.y.iter().map(|a| a.iter().map(&lift).collect::<Result<_>>()).collect::<Result<_>>()?;
        let c = form_value(ring_p, q_p.gram(), &y, &y);
        if !ring_p.algebra.is_unit(&c)? {
            return Err(Error::PrecisionLoss("lifted reflection constant is not a p-adic unit".into()));
        }
        lifted.push(Reflection { y, c });
    }
    let psi = reflection_product(&q_p, &lifted)?;
    let exact_isometry = is_isometry(&psi, &q_p, &q_p)?;
    let reduced = psi.map_entries(|a| to_trunc.apply_all(a))?;
    let congruent = reduced == phi_n;
    let entries = psi.format(&ring_p.algebra);
    Ok(Approximation { psi, entries, reflections: lifted.len(), exact_isometry, congruent, signature: sig.bits })
}

#[derive(Clone, Debug, Serialize)]
pub struct ApproximationSuiteReport {
    pub prime: u64,
    pub precision: u32,
    pub rank: usize,
    pub trials: usize,
    pub exact_isometries: usize,
    pub congruent: usize,
    pub max_reflections: usize,
    pub seed: u64,
}

impl ApproximationSuiteReport {
    pub fn passed(&self) -> bool {
        self.exact_isometries == self.trials && self.congruent == self.trials
    }
}

/// Random products of 1 to 4 reflections of ⟨1,…,1⟩ mod p^N, each lifted back
/// to an exact isometry over ℤ_(p).
pub fn approximation_suite(p: u64, precision: u32, rank: usize, trials: usize, seed: u64) -> Result<ApproximationSuiteReport> {
    use rand::{Rng, SeedableRng};
    let local = Arc::new(UnitaryRing::scalar_ring(BaseRing::localized(&[p])?, 1, false)?);
    let ones: Vec<Vec<i64>> = (0..rank).map(|i| (0..rank).map(|j| i64::from(i == j)).collect()).collect();
    let q = QuadClass::from_ints(local.clone(), &ones)?;
    let trunc = BaseRing::truncated(p, precision)?;
    let q_n = scalar_extend(&q, &RingHom::new(local.base(), &trunc)?)?;
    let ring_n = q_n.parent().clone();
    let alg = &ring_n.algebra;
    let modulus = p.pow(precision) as i64;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut report = ApproximationSuiteReport {
        prime: p,
        precision,
        rank,
        trials,
        exact_isometries: 0,
        congruent: 0,
        max_reflections: 0,
        seed,
    };
    for _ in 0..trials {
        let k = rng.gen_range(1..=4);
        let mut refl = Vec::with_capacity(k);
        while refl.len() < k {
            let y: Vec<AlgElem> = (0..rank).map(|_| alg.scalar(&trunc.from_int(rng.gen_range(0..modulus)))).collect();
            let c = form_value(&ring_n, q_n.gram(), &y, &y);
            if alg.is_unit(&c)? {
                refl.push(Reflection { y, c });
            }
        }
        let phi = reflection_product(&q_n, &refl)?;
        let out = weak_approximate(&phi, &trunc, &q, None)?;
        report.exact_isometries += usize::from(out.exact_isometry);
        report.congruent += usize::from(out.congruent);
        report.max_reflections = report.max_reflections.max(out.reflections);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isometry_engine::reflection::reflection_map;
    use crate::quadratic_space::classify::DEFAULT_BUDGET;
    use crate::isometry_engine::group::orthogonal_group;

    fn scalar(base: BaseRing) -> Arc<UnitaryRing> {
        Arc::new(UnitaryRing::scalar_ring(base, 1, false).unwrap())
    }

    #[test]
    fn single_reflection_over_f5() {
        let f5 = scalar(BaseRing::prime_field(5).unwrap());
        let q = QuadClass::from_ints(f5.clone(), &[vec![1, 0], vec![0, 1]]).unwrap();
        let phi = QuadClass::from_ints(f5.clone(), &[vec![-1, 0], vec![0, 1]]).unwrap().gram().clone();
        let r = cd_factorize(&phi, &q).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(reflection_map(&r[0], &q).unwrap(), phi);
        assert!(cd_factorize(&AlgMatrix::identity(&f5.algebra, 2), &q).unwrap().is_empty());
    }

    #[test]
    fn whole_orthogonal_group_factors() {
        let f3 = scalar(BaseRing::prime_field(3).unwrap());
        let q = QuadClass::from_ints(f3, &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 2]]).unwrap();
        for g in &orthogonal_group(&q, DEFAULT_BUDGET).unwrap().elements {
            let r = cd_factorize(g, &q).unwrap();
            assert!(r.len() <= 6);
            assert_eq!(&reflection_product(&q, &r).unwrap(), g);
        }
    }

    #[test]
    fn approximation_suite_small() {
        let r = approximation_suite(3, 4, 3, 5, 1).unwrap();
        assert!(r.passed(), "{r:?}");
        let again = approximation_suite(3, 4, 3, 5, 1).unwrap();
        assert_eq!(serde_json::to_string(&r).unwrap(), serde_json::to_string(&again).unwrap());
    }

    #[test]
    fn weak_approximation_round_trip() {
        let z3 = scalar(BaseRing::localized(&[3]).unwrap());
        let q = QuadClass::from_ints(z3.clone(), &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        let z81 = BaseRing::truncated(3, 4).unwrap();
        let q81 = scalar_extend(&q, &RingHom::new(z3.base(), &z81).unwrap()).unwrap();
        let a = &q81.parent().algebra;
        let k = |n: i64| a.scalar(&z81.from_int(n));
        let r1 = Reflection { y: vec![k(1), k(1), k(0)], c: k(2) };
        let r2 = Reflection { y: vec![k(2), k(0), k(5)], c: k(29) };
        let phi = reflection_product(&q81, &[r1, r2]).unwrap();
        let out = weak_approximate(&phi, &z81, &q, None).unwrap();
        assert!(out.exact_isometry && out.congruent);
        // Δ = 1 is rejected when only 0 is allowed
        let r3 = Reflection { y: vec![k(1), k(0), k(0)], c: k(1) };
        let refl = reflection_product(&q81, &[r3]).unwrap();
        assert!(matches!(weak_approximate(&refl, &z81, &q, Some(&[])), Err(Error::DicksonObstruction)));
    }
}
