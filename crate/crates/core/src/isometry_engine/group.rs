use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quadratic_space::classify::{isometries, Match};
use crate::quadratic_space::{AlgMatrix, QuadClass};
use crate::unitary_algebra::UnitaryRing;

use super::reflection::all_reflections;

/// A finite group of m×m matrices over a finite algebra, stored sorted by
/// canonical key.
#[derive(Clone, Debug)]
pub struct GroupEnumeration {
    pub ring: Arc<UnitaryRing>,
    pub rank: usize,
    pub elements: Vec<AlgMatrix>,
    pub generators: Vec<AlgMatrix>,
    index: HashMap<Vec<u64>, usize>,
}

impl GroupEnumeration {
    pub fn from_elements(ring: Arc<UnitaryRing>, rank: usize, mut elements: Vec<AlgMatrix>, generators: Vec<AlgMatrix>) -> Self {
        let alg = &ring.algebra;
        elements.sort_by_cached_key(|g| g.key(alg));
        elements.dedup();
        let index = elements.iter().enumerate().map(|(i, g)| (g.key(alg), i)).collect();
        GroupEnumeration { ring, rank, elements, generators, index }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &AlgMatrix) -> bool {
        self.index.contains_key(&g.key(&self.ring.algebra))
    }

    pub fn position(&self, g: &AlgMatrix) -> Option<usize> {
        self.index.get(&g.key(&self.ring.algebra)).copied()
    }

    pub fn mul(&self, a: &AlgMatrix, b: &AlgMatrix) -> AlgMatrix {
        a.mul(&self.ring.algebra, b)
    }

    pub fn identity(&self) -> AlgMatrix {
        AlgMatrix::identity(&self.ring.algebra, self.rank)
    }

    /// Identity, inverses and closure under all products.
    pub fn verify_axioms(&self) -> Result<bool> {
        let alg = &self.ring.algebra;
        if !self.contains(&self.identity()) {
            return Ok(false);
        }
        for g in &self.elements {
            match g.inverse(alg)? {
                Some(inv) if self.contains(&inv) => {}
                _ => return Ok(false),
            }
            for h in &self.elements {
                if !self.contains(&g.mul(alg, h)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn is_subgroup_of(&self, other: &GroupEnumeration) -> bool {
        self.elements.iter().all(|g| other.contains(g))
    }
}

/// O([f]) by exhaustive search.
pub fn orthogonal_group(q: &QuadClass, budget: u64) -> Result<GroupEnumeration> {
    let ring = q.parent();
    if ring.base().size().is_none() {
        return Err(Error::UnsupportedRing(format!("{} is not finite", ring.base().name())));
    }
    let g = q.gram().clone();
    let elems = isometries(ring, &[ring.sigma.clone()], &[g.clone()], &[g], Match::Quadratic, None, budget)?;
    Ok(GroupEnumeration::from_elements(ring.clone(), q.rank(), elems, vec![]))
}

/// Subgroup generated by a list of matrices (closure by left multiplication).
pub fn closure(ring: Arc<UnitaryRing>, rank: usize, generators: Vec<AlgMatrix>, budget: u64) -> Result<GroupEnumeration> {
    let alg = &ring.algebra;
    let id = AlgMatrix::identity(alg, rank);
    let mut seen: HashMap<Vec<u64>, ()> = HashMap::new();
    seen.insert(id.key(alg), ());
    let mut elements = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in &generators {
            let y = g.mul(alg, &x);
            let k = y.key(alg);
            if seen.insert(k, ()).is_none() {
                if elements.len() as u64 >= budget {
                    return Err(Error::BudgetExceeded("subgroup closure".into()));
                }
                elements.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(GroupEnumeration::from_elements(ring, rank, elements, generators))
}

/// O′([f]), the subgroup generated by all reflections of [f].
pub fn reflection_subgroup(q: &QuadClass, budget: u64) -> Result<GroupEnumeration> {
    let gens: Vec<AlgMatrix> = all_reflections(q, budget)?.into_iter().map(|(_, s)| s).collect();
    let alg = q.algebra();
    let mut uniq: Vec<AlgMatrix> = Vec::new();
    let mut keys = HashMap::new();
    for g in gens {
        if keys.insert(g.key(alg), ()).is_none() {
            uniq.push(g);
        }
    }
    closure(q.parent().clone(), q.rank(), uniq, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadratic_space::classify::{brute_force_classify, Flavor, DEFAULT_BUDGET};
    use crate::ring_core::BaseRing;

    fn scalar(p: u64) -> Arc<UnitaryRing> {
        Arc::new(UnitaryRing::scalar_ring(BaseRing::prime_field(p).unwrap(), 1, false).unwrap())
    }

    #[test]
    fn orthogonal_group_orders() {
        let f3 = scalar(3);
        let q = QuadClass::from_ints(f3.clone(), &[vec![1, 0], vec![0, 1]]).unwrap();
        let o = orthogonal_group(&q, DEFAULT_BUDGET).unwrap();
        assert_eq!(o.order(), 8);
        assert!(o.verify_axioms().unwrap());
        let q1 = QuadClass::from_ints(f3, &[vec![1]]).unwrap();
        assert_eq!(orthogonal_group(&q1, DEFAULT_BUDGET).unwrap().order(), 2);
    }

    #[test]
    fn hyperbolic_plane_matches_stabilizer() {
        let f5 = scalar(5);
        let hyp = QuadClass::from_ints(f5.clone(), &[vec![0, 1], vec![0, 0]]).unwrap();
        let o = orthogonal_group(&hyp, DEFAULT_BUDGET).unwrap();
        let classes = brute_force_classify(&f5, 2, Flavor::Quadratic, true, DEFAULT_BUDGET).unwrap();
        let idx = classes.class_of_quad(&hyp).unwrap().unwrap();
        assert_eq!(o.order() as u128, classes.classes[idx].stabilizer_order);
    }

    #[test]
    fn reflection_subgroup_examples() {
        let f3 = scalar(3);
        let q = QuadClass::from_ints(f3, &[vec![1, 0], vec![0, 1]]).unwrap();
        let o = orthogonal_group(&q, DEFAULT_BUDGET).unwrap();
        let r = reflection_subgroup(&q, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.order(), o.order());
        let f5 = scalar(5);
        let q = QuadClass::from_ints(f5, &[vec![1]]).unwrap();
        assert_eq!(reflection_subgroup(&q, DEFAULT_BUDGET).unwrap().order(), 2);
    }
}
