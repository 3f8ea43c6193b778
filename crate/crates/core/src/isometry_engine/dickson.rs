use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadratic_space::{AlgMatrix, QuadClass, ResidueMap};
use crate::ring_core::{linalg, BaseRing, Matrix, RingElem};
use crate::unitary_algebra::{Classification, ComponentReport};

/// Δ_𝓘(φ), one bit per split-orthogonal component.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DicksonSignature {
    pub components: Vec<usize>,
    pub bits: Vec<u8>,
}

impl DicksonSignature {
    pub fn add(&self, other: &DicksonSignature) -> DicksonSignature {
        let bits = self.bits.iter().zip(&other.bits).map(|(a, b)| (a + b) % 2).collect();
        DicksonSignature { components: self.components.clone(), bits }
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&b| b == 0)
    }
}

/// Precomputed E = End_{A_i}(P_i) for one split-orthogonal component.
#[derive(Clone, Debug)]
pub struct DicksonContext {
    pub component: ComponentReport,
    pub rank: usize,
    /// Basis of E as dim_F P_i × dim_F P_i matrices over F.
    pub e_basis: Vec<Matrix>,
    /// [K : F].
    pub center_degree: usize,
    pub deg_e: usize,
}

impl DicksonContext {
    pub fn new(component: &ComponentReport, rank: usize) -> Result<Self> {
        if component.classification != Classification::SplitOrthogonal {
            return Err(Error::NotSplitOrthogonal);
        }
        let alg = &component.ring.algebra;
        let base = alg.base();
        if !base.is_field() {
            return Err(Error::NotAField);
        }
        let d = alg.dim();
        let dp = rank * d;
        // right action of each basis element on P_i = A_i^m
        let mut eqs: Vec<Vec<RingElem>> = Vec::new();
        for j in 0..d {
            let r = alg.right_mult(&alg.basis(j));
            let mut big = Matrix::zeros(base, dp, dp);
            for b in 0..rank {
                for x in 0..d {
                    for y in 0..d {
                        big.set(b * d + x, b * d + y, r.get(x, y).clone());
                    }
                }
            }
            // X·R − R·X = 0 in the unknowns X_{ab}, flattened a·dp + b
            for row in 0..dp {
                for col in 0..dp {
                    let mut eq = vec![base.zero(); dp * dp];
                    for k in 0..dp {
                        let a = big.get(k, col);
                        if !base.is_zero(a) {
                            eq[row * dp + k] = base.add(&eq[row * dp + k], a);
                        }
                        let b = big.get(row, k);
                        if !base.is_zero(b) {
                            eq[k * dp + col] = base.sub(&eq[k * dp + col], b);
                        }
                    }
                    eqs.push(eq);
                }
            }
        }
        let kernel = if eqs.is_empty() {
            (0..dp * dp).map(|i| linalg::unit_vector(base, dp * dp, i)).collect()
        } else {
            linalg::kernel(base, &Matrix::from_rows(eqs)?)?
        };
        let e_basis: Vec<Matrix> = kernel.into_iter().map(|v| Matrix::from_vec(dp, dp, v)).collect();
        let k = component.center_dimension;
        let dim_k = e_basis.len() / k;
        let deg_e = (dim_k as f64).sqrt().round() as usize;
        if deg_e * deg_e * k != e_basis.len() {
            return Err(Error::Invalid("endomorphism ring is not central simple of the expected size".into()));
        }
        Ok(DicksonContext { component: component.clone(), rank, e_basis, center_degree: k, deg_e })
    }

    fn base(&self) -> &BaseRing {
        self.component.ring.base()
    }

    /// Δ(ψ) = dim_K((1−ψ)E) / deg E mod 2, for ψ over the component ring.
    pub fn dickson(&self, psi: &AlgMatrix) -> Result<u8> {
        let alg = &self.component.ring.algebra;
        let base = self.base();
        let big = psi.block_expand(alg);
        let dp = big.rows();
        let one_minus = Matrix::identity(base, dp).sub(base, &big);
        let mut rows = Vec::with_capacity(self.e_basis.len());
        for e in &self.e_basis {
            rows.push(one_minus.mul(base, e)?.data().to_vec());
        }
        let r = if rows.is_empty() { 0 } else { linalg::rank(base, &Matrix::from_rows(rows)?)? };
        let denom = self.center_degree * self.deg_e;
        if denom == 0 || r % denom != 0 {
            return Err(Error::Invalid(format!("dim (1-ψ)E = {r} is not a multiple of {denom}")));
        }
        Ok(((r / denom) % 2) as u8)
    }

    /// det_F(ψ) = (−1)^{Δ·n·[K:F]} when 2 is a unit; `None` when the exponent
    /// is even (the check is then vacuous) or 2 is not a unit.
    pub fn rednorm_check(&self, psi: &AlgMatrix, delta: u8) -> Result<Option<bool>> {
        let base = self.base();
        let n = self.component.n.unwrap_or(self.component.deg);
        if !base.two_is_unit() || (n * self.center_degree) % 2 == 0 {
            return Ok(None);
        }
        let det = linalg::det(base, &psi.block_expand(&self.component.ring.algebra))?;
        let expect = if delta == 0 { base.one() } else { base.from_int(-1) };
        Ok(Some(det == expect))
    }
}

pub fn dickson(phi: &AlgMatrix, component: &ComponentReport) -> Result<u8> {
    DicksonContext::new(component, phi.rows)?.dickson(phi)
}

/// Residue reduction plus one Dickson context per split-orthogonal component.
#[derive(Clone, Debug)]
pub struct DicksonEngine {
    pub residue: ResidueMap,
    pub contexts: Vec<DicksonContext>,
    pub xi: Vec<u8>,
}

impl DicksonEngine {
    pub fn new(q: &QuadClass) -> Result<Self> {
        Self::from_residue(ResidueMap::new(q.parent())?, q.rank())
    }

    pub fn from_residue(residue: ResidueMap, rank: usize) -> Result<Self> {
        let f = &residue.factorization;
        let contexts = f
            .split_orthogonal
            .iter()
            .map(|&i| DicksonContext::new(&f.components[i], rank))
            .collect::<Result<Vec<_>>>()?;
        let xi = f.xi.clone();
        Ok(DicksonEngine { residue, contexts, xi })
    }

    pub fn components(&self) -> Vec<usize> {
        self.contexts.iter().map(|c| c.component.index).collect()
    }

    pub fn signature(&self, phi: &AlgMatrix) -> Result<DicksonSignature> {
        let mut bits = Vec::with_capacity(self.contexts.len());
        for ctx in &self.contexts {
            let psi = self.residue.matrix_to_component(ctx.component.index, phi)?;
            bits.push(ctx.dickson(&psi)?);
        }
        Ok(DicksonSignature { components: self.components(), bits })
    }

    /// Whether Δ_𝓘(φ) ∈ {0, ξ}.
    pub fn in_zero_xi(&self, sig: &DicksonSignature) -> bool {
        sig.is_zero() || sig.bits == self.xi
    }
}

/// All GF(2)-combinations of the given bit vectors (of a common length).
pub fn gf2_span(gens: &[Vec<u8>], len: usize) -> BTreeSet<Vec<u8>> {
    let mut out = BTreeSet::from([vec![0u8; len]]);
    for g in gens {
        let added: Vec<Vec<u8>> = out.iter().map(|v| v.iter().zip(g).map(|(a, b)| (a + b) % 2).collect()).collect();
        out.extend(added);
    }
    out
}

pub fn dickson_signature(phi: &AlgMatrix, q: &QuadClass) -> Result<DicksonSignature> {
    DicksonEngine::new(q)?.signature(phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadratic_space::classify::DEFAULT_BUDGET;
    use crate::isometry_engine::group::orthogonal_group;
    use crate::ring_core::rat_int;
    use crate::unitary_algebra::UnitaryRing;
    use std::sync::Arc;

    #[test]
    fn dickson_examples_over_f3() {
        let f3 = Arc::new(UnitaryRing::scalar_ring(BaseRing::prime_field(3).unwrap(), 1, false).unwrap());
        let q = QuadClass::from_ints(f3.clone(), &[vec![1, 0], vec![0, 1]]).unwrap();
        let eng = DicksonEngine::new(&q).unwrap();
        let phi = QuadClass::from_ints(f3.clone(), &[vec![-1, 0], vec![0, 1]]).unwrap().gram().clone();
        assert_eq!(eng.signature(&phi).unwrap().bits, vec![1]);
        let neg = QuadClass::from_ints(f3.clone(), &[vec![-1, 0], vec![0, -1]]).unwrap().gram().clone();
        assert_eq!(eng.signature(&neg).unwrap().bits, vec![0]);
        let id = AlgMatrix::identity(&f3.algebra, 2);
        assert!(eng.signature(&id).unwrap().is_zero());
        // reduced norm agrees with the determinant on all of O
        let o = orthogonal_group(&q, DEFAULT_BUDGET).unwrap();
        for g in &o.elements {
            let d = eng.contexts[0].dickson(g).unwrap();
            assert_eq!(eng.contexts[0].rednorm_check(g, d).unwrap(), Some(true));
        }
    }

    #[test]
    fn quaternion_order_component() {
        let z3 = BaseRing::localized(&[3]).unwrap();
        let ord = Arc::new(UnitaryRing::quaternion(z3, &rat_int(-1), &rat_int(-1), &rat_int(3)).unwrap());
        let q = QuadClass::diagonal(ord.clone(), &[ord.algebra.one()]).unwrap();
        let eng = DicksonEngine::new(&q).unwrap();
        assert_eq!(eng.xi, vec![1]);
        let neg = AlgMatrix::diagonal(&ord.algebra, &[ord.algebra.neg(&ord.algebra.one())]);
        assert_eq!(eng.signature(&neg).unwrap().bits, vec![1]);
    }

    #[test]
    fn not_split_orthogonal_rejected() {
        let f5 = BaseRing::prime_field(5).unwrap();
        let sw = Arc::new(UnitaryRing::swap_pair(f5).unwrap());
        let res = ResidueMap::new(&sw).unwrap();
        let c = &res.factorization.components[0];
        let id = AlgMatrix::identity(&c.ring.algebra, 1);
        assert!(matches!(dickson(&id, c), Err(Error::NotSplitOrthogonal)));
    }
}
