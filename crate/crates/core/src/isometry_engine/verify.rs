use std::collections::BTreeSet;

use serde::Serialize;

use super::dickson::DicksonEngine;
use super::group::{orthogonal_group, reflection_subgroup};
use crate::error::Result;
use crate::quadratic_space::{QuadClass, ResidueMap};

/// Outcome of comparing O′([f]) with Δ_𝓘^{-1}({0, ξ}) on one finite instance.
#[derive(Clone, Debug, Serialize)]
pub struct GenerationReport {
    pub ring: String,
    pub rank: usize,
    pub hypothesis_violation: Option<String>,
    pub order_o: usize,
    pub order_o_prime: usize,
    pub kernel_set_size: usize,
    pub xi: Vec<u8>,
    pub o_prime_inside_kernel_set: bool,
    pub equality: bool,
    pub index: usize,
    pub index_power_of_two: bool,
    pub delta_image_size: usize,
    pub delta_codomain_size: usize,
    pub surjective: bool,
}

impl GenerationReport {
    pub fn passed(&self) -> bool {
        self.hypothesis_violation.is_none() && self.equality && self.index_power_of_two && self.surjective
    }
}

pub fn verify_gen_by_reflections(q: &QuadClass, budget: u64) -> Result<GenerationReport> {
    let ring_name = q.parent().base().name();
    let mut report = GenerationReport {
        ring: ring_name,
        rank: q.rank(),
        hypothesis_violation: None,
        order_o: 0,
        order_o_prime: 0,
        kernel_set_size: 0,
        xi: vec![],
        o_prime_inside_kernel_set: false,
        equality: false,
        index: 0,
        index_power_of_two: false,
        delta_image_size: 0,
        delta_codomain_size: 0,
        surjective: false,
    };
    let residue = ResidueMap::new(q.parent())?;
    if let Some(c) = residue.factorization.components.iter().find(|c| c.division_part_is_f2) {
        let what = if c.center_dimension == 2 { "F_2 x F_2" } else { "F_2" };
        report.hypothesis_violation = Some(format!("hypothesis violated: D_i ≅ {what}"));
        return Ok(report);
    }
    if q.rank() == 0 {
        report.hypothesis_violation = Some("hypothesis violated: P_i = 0".into());
        return Ok(report);
    }
    let engine = DicksonEngine::from_residue(residue, q.rank())?;
    let o = orthogonal_group(q, budget)?;
    let o_prime = reflection_subgroup(q, budget)?;
    let mut kernel_set = Vec::new();
    let mut image = BTreeSet::new();
    for g in &o.elements {
        let sig = engine.signature(g)?;
        if engine.in_zero_xi(&sig) {
            kernel_set.push(g.clone());
        }
        image.insert(sig.bits);
    }
    let all = 1usize << engine.xi.len();
    report.xi = engine.xi.clone();
    report.order_o = o.order();
    report.order_o_prime = o_prime.order();
    report.kernel_set_size = kernel_set.len();
    report.o_prime_inside_kernel_set = o_prime.elements.iter().all(|g| engine.signature(g).is_ok_and(|s| engine.in_zero_xi(&s)));
    report.equality = report.o_prime_inside_kernel_set && o_prime.order() == kernel_set.len();
    report.index = if o_prime.order() > 0 { o.order() / o_prime.order() } else { 0 };
    report.index_power_of_two = o_prime.order() > 0 && o.order() % o_prime.order() == 0 && report.index.is_power_of_two();
    report.delta_image_size = image.len();
    report.delta_codomain_size = all;
    report.surjective = image.len() == all;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadratic_space::classify::DEFAULT_BUDGET;
    use crate::ring_core::BaseRing;
    use crate::unitary_algebra::{MatrixInvolution, UnitaryRing};
    use std::sync::Arc;

    #[test]
    fn f3_plane() {
        let f3 = Arc::new(UnitaryRing::scalar_ring(BaseRing::prime_field(3).unwrap(), 1, false).unwrap());
        let q = QuadClass::from_ints(f3, &[vec![1, 0], vec![0, 1]]).unwrap();
        let r = verify_gen_by_reflections(&q, DEFAULT_BUDGET).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.index, 1);
    }

    #[test]
    fn m2f3_rank_one_has_index_two() {
        let m2 = Arc::new(
            UnitaryRing::matrix_algebra(2, BaseRing::prime_field(3).unwrap(), MatrixInvolution::Transpose, 1).unwrap(),
        );
        let q = QuadClass::diagonal(m2.clone(), &[m2.algebra.one()]).unwrap();
        let r = verify_gen_by_reflections(&q, DEFAULT_BUDGET).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.index, 2);
    }

    #[test]
    fn f2_guard() {
        let f2 = Arc::new(UnitaryRing::scalar_ring(BaseRing::prime_field(2).unwrap(), 1, false).unwrap());
        let q = QuadClass::from_ints(f2, &[vec![1]]).unwrap();
        let r = verify_gen_by_reflections(&q, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.hypothesis_violation.as_deref(), Some("hypothesis violated: D_i ≅ F_2"));
        assert!(!r.passed());
    }
}
