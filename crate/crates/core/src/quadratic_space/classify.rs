use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use super::alg_matrix::AlgMatrix;
use super::forms::{canonical_gram, herm_gram, lambda_complement_reps, QuadClass};
use crate::error::{Error, Result};
use crate::ring_core::hom::RingHom;
use crate::ring_core::{BaseRing, Matrix};
use crate::unitary_algebra::factor::primitive_idempotents;
use crate::unitary_algebra::radical::{jacobson_radical, quotient};
use crate::unitary_algebra::{AlgElem, Algebra, Span, UnitaryRing};

pub const DEFAULT_BUDGET: u64 = 4_000_000;

#[derive(Clone, Debug, PartialEq)]
pub enum Flavor {
    Quadratic,
    Hermitian,
    /// Simultaneous congruence of several sesquilinear forms, one per involution
    /// (each given as a matrix on algebra coordinates).
    System(Vec<Matrix>),
}

impl Flavor {
    pub fn name(&self) -> &'static str {
        match self {
            Flavor::Quadratic => "quadratic",
            Flavor::Hermitian => "hermitian",
            Flavor::System(_) => "system",
        }
    }
}

#[derive(Clone, Debug)]
pub struct FormClass {
    /// One Gram matrix per form (a single one unless the flavor is a system).
    pub representative: Vec<AlgMatrix>,
    pub orbit_size: u64,
    pub stabilizer_order: u128,
    pub unimodular: bool,
}

#[derive(Clone, Debug)]
pub struct ClassList {
    pub rank: usize,
    pub flavor: Flavor,
    pub classes: Vec<FormClass>,
    /// Number of forms (or classes mod Λ_P) enumerated in the listed orbits.
    pub total: u64,
    pub group_order: u128,
    class_of: HashMap<Vec<u64>, usize>,
}

impl ClassList {
    pub fn class_of_key(&self, key: &[u64]) -> Option<usize> {
        self.class_of.get(key).copied()
    }

    /// Class index of a quadratic class (quadratic flavor only).
    pub fn class_of_quad(&self, q: &QuadClass) -> Result<Option<usize>> {
        Ok(self.class_of_key(&q.key()?))
    }
}

/// All units of a finite algebra.
pub fn units(alg: &Algebra, budget: u64) -> Result<Vec<AlgElem>> {
    let mut out = Vec::new();
    for a in alg.elements(budget)? {
        if alg.is_unit(&a)? {
            out.push(a);
        }
    }
    Ok(out)
}

fn gl_field(q: u128, k: u32) -> Option<u128> {
    let qk = q.checked_pow(k)?;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(qk - q.checked_pow(i)?)?;
    }
    Some(acc)
}

/// |GL_m(A)| for a finite algebra, from |GL_m(A/J)| and |J|^{m²}.
pub fn gl_order(alg: &Algebra, m: usize) -> Result<u128> {
    let overflow = || Error::BudgetExceeded("group order overflows".into());
    let m = m as u32;
    match alg.base() {
        BaseRing::Truncated { p, n, .. } => {
            let fp = BaseRing::prime_field(*p)?;
            let red = alg.map_base(&RingHom::new(alg.base(), &fp)?)?;
            let k = gl_order(&red, m as usize)?;
            let extra = (*n as u64 - 1) * alg.dim() as u64 * (m as u64) * (m as u64);
            (*p as u128).checked_pow(extra as u32).and_then(|x| x.checked_mul(k)).ok_or_else(overflow)
        }
        BaseRing::Finite(f) => {
            let q = f.order() as u128;
            let rad = jacobson_radical(alg)?;
            let quo = quotient(alg, &rad)?;
            let a = &quo.algebra;
            let mut acc = q.checked_pow(rad.len() as u32 * m * m).ok_or_else(overflow)?;
            if a.dim() == 0 {
                return Ok(acc);
            }
            let center = a.center()?;
            for e in primitive_idempotents(a, &center)? {
                let gens: Vec<AlgElem> = (0..a.dim()).map(|j| a.mul(&e, &a.basis(j))).collect();
                let d = Span::new(a.base(), a.dim(), &gens)?.rank();
                let zs: Vec<AlgElem> = center.iter().map(|z| a.mul(&e, z)).collect();
                let z = Span::new(a.base(), a.dim(), &zs)?.rank();
                let n = ((d / z) as f64).sqrt().round() as u32;
                let g = gl_field(q.checked_pow(z as u32).ok_or_else(overflow)?, m * n).ok_or_else(overflow)?;
                acc = acc.checked_mul(g).ok_or_else(overflow)?;
            }
            Ok(acc)
        }
        other => Err(Error::UnsupportedRing(format!("{} is not finite", other.name()))),
    }
}

/// Mixed-radix enumeration of all tuples drawn from the given slot lists.
fn odometer<T: Clone>(slots: &[Vec<T>], budget: u64, mut visit: impl FnMut(Vec<T>) -> Result<()>) -> Result<()> {
    let mut total: u64 = 1;
    for s in slots {
        total = total.checked_mul(s.len() as u64).filter(|&t| t <= budget).ok_or_else(|| {
            Error::BudgetExceeded(format!("more than {budget} forms to enumerate"))
        })?;
    }
    if total == 0 {
        return Ok(());
    }
    let mut idx = vec![0usize; slots.len()];
    loop {
        visit(idx.iter().zip(slots).map(|(&i, s)| s[i].clone()).collect())?;
        let mut k = slots.len();
        loop {
            if k == 0 {
                return Ok(());
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < slots[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Brute-force enumeration of GL_m(A) (test oracle).
pub fn general_linear(alg: &Algebra, m: usize, budget: u64) -> Result<Vec<AlgMatrix>> {
    let elems = alg.elements(budget)?;
    let slots = vec![elems; m * m];
    let mut out = Vec::new();
    odometer(&slots, budget, |data| {
        let g = AlgMatrix { rows: m, cols: m, data };
        if g.is_invertible(alg)? {
            out.push(g);
        }
        Ok(())
    })?;
    Ok(out)
}

/// Generators of GL_m(A) for a finite ring: elementary matrices and
/// diag(a, 1, …, 1) for units a.
pub fn gl_generators(alg: &Algebra, m: usize, budget: u64) -> Result<Vec<AlgMatrix>> {
    let elems = alg.elements(budget)?;
    let mut gens = Vec::new();
    for a in units(alg, budget)? {
        if a == alg.one() {
            continue;
        }
        let mut d = AlgMatrix::identity(alg, m);
        if m > 0 {
            d.set(0, 0, a);
            gens.push(d);
        }
    }
    for s in 0..m {
        for t in 0..m {
            if s == t {
                continue;
            }
            for a in &elems {
                if alg.is_zero(a) {
                    continue;
                }
                let mut e = AlgMatrix::identity(alg, m);
                e.set(s, t, a.clone());
                gens.push(e);
            }
        }
    }
    Ok(gens)
}

struct Action<'a> {
    ring: &'a UnitaryRing,
    flavor: &'a Flavor,
}

impl Action<'_> {
    fn sigmas(&self) -> Vec<Matrix> {
        match self.flavor {
            Flavor::System(s) => s.clone(),
            _ => vec![self.ring.sigma.clone()],
        }
    }

    fn key(&self, state: &[AlgMatrix]) -> Result<Vec<u64>> {
        let alg = &self.ring.algebra;
        match self.flavor {
            Flavor::Quadratic => Ok(canonical_gram(self.ring, &state[0])?.key(alg)),
            _ => Ok(state.iter().flat_map(|g| g.key(alg)).collect()),
        }
    }

    fn act(&self, g: &AlgMatrix, state: &[AlgMatrix], sigmas: &[Matrix]) -> Vec<AlgMatrix> {
        let alg = &self.ring.algebra;
        state.iter().zip(sigmas).map(|(f, s)| g.adjoint_with(alg, s).mul(alg, f).mul(alg, g)).collect()
    }

    fn unimodular(&self, state: &[AlgMatrix]) -> Result<bool> {
        let alg = &self.ring.algebra;
        match self.flavor {
            Flavor::Quadratic => herm_gram(self.ring, &state[0]).is_invertible(alg),
            _ => {
                for g in state {
                    if !g.is_invertible(alg)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }
}

/// Enumerate forms of rank m over a finite unitary ring and split them into
/// GL_m(A)-orbits.
pub fn brute_force_classify(
    ring: &Arc<UnitaryRing>,
    m: usize,
    flavor: Flavor,
    unimodular_only: bool,
    budget: u64,
) -> Result<ClassList> {
    let alg = &ring.algebra;
    if ring.base().size().is_none() {
        return Err(Error::UnsupportedRing(format!("{} is not finite", ring.base().name())));
    }
    if let Flavor::System(s) = &flavor {
        if s.is_empty() || s.iter().any(|x| x.rows() != alg.dim() || x.cols() != alg.dim()) {
            return Err(Error::Invalid("system needs involution matrices of the algebra's size".into()));
        }
    }
    let elems = alg.elements(budget)?;
    let idx = |s: usize, t: usize| s * m + t;
    // slot lists describing every form exactly once
    let mut slots: Vec<Vec<AlgElem>> = Vec::new();
    let mut layout: Vec<(usize, usize, usize)> = Vec::new(); // (form, s, t)
    match &flavor {
        Flavor::Quadratic => {
            let reps = lambda_complement_reps(ring, budget)?;
            for s in 0..m {
                slots.push(reps.clone());
                layout.push((0, s, s));
                for t in s + 1..m {
                    slots.push(elems.clone());
                    layout.push((0, s, t));
                }
            }
        }
        Flavor::Hermitian => {
            let fixed: Vec<AlgElem> =
                elems.iter().filter(|a| alg.mul(&ring.sig(a), &ring.u) == **a).cloned().collect();
            for s in 0..m {
                slots.push(fixed.clone());
                layout.push((0, s, s));
                for t in s + 1..m {
                    slots.push(elems.clone());
                    layout.push((0, s, t));
                }
            }
        }
        Flavor::System(sig) => {
            for k in 0..sig.len() {
                for s in 0..m {
                    for t in 0..m {
                        slots.push(elems.clone());
                        layout.push((k, s, t));
                    }
                }
            }
        }
    }
    let nforms = match &flavor {
        Flavor::System(s) => s.len(),
        _ => 1,
    };
    let action = Action { ring, flavor: &flavor };
    let sigmas = action.sigmas();
    let gens = gl_generators(alg, m, budget)?;
    let group_order = gl_order(alg, m)?;
    let mut class_of: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut classes: Vec<FormClass> = Vec::new();
    let mut total = 0u64;
    odometer(&slots, budget, |vals| {
        let mut state = vec![AlgMatrix::zeros(alg, m, m); nforms];
        for (v, &(k, s, t)) in vals.into_iter().zip(&layout) {
            if matches!(flavor, Flavor::Hermitian) && s != t {
                state[k].set(t, s, alg.mul(&ring.sig(&v), &ring.u));
            }
            state[k].data[idx(s, t)] = v;
        }
        let key = action.key(&state)?;
        if class_of.contains_key(&key) {
            return Ok(());
        }
        let unimodular = action.unimodular(&state)?;
        if unimodular_only && !unimodular {
            return Ok(());
        }
        let id = classes.len();
        class_of.insert(key, id);
        let mut queue = VecDeque::from([state.clone()]);
        let mut size = 1u64;
        while let Some(cur) = queue.pop_front() {
            for g in &gens {
                let next = action.act(g, &cur, &sigmas);
                let k = action.key(&next)?;
                if let std::collections::hash_map::Entry::Vacant(e) = class_of.entry(k) {
                    e.insert(id);
                    size += 1;
                    if size > budget {
                        return Err(Error::BudgetExceeded("orbit too large".into()));
                    }
                    queue.push_back(next);
                }
            }
        }
        total += size;
        let representative = match &flavor {
            Flavor::Quadratic => vec![canonical_gram(ring, &state[0])?],
            _ => state,
        };
        classes.push(FormClass { representative, orbit_size: size, stabilizer_order: group_order / size as u128, unimodular });
        Ok(())
    })?;
    Ok(ClassList { rank: m, flavor, classes, total, group_order, class_of })
}

/// Which comparison the isometry search uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Match {
    /// Equality modulo Λ_P.
    Quadratic,
    /// Exact equality of Gram matrices.
    Exact,
}

/// All invertible φ with φ†Bφ matching A (one pair per involution), found by
/// column-wise backtracking. Stops after `limit` solutions when given.
pub fn isometries(
    ring: &UnitaryRing,
    sigmas: &[Matrix],
    a: &[AlgMatrix],
    b: &[AlgMatrix],
    mode: Match,
    limit: Option<usize>,
    budget: u64,
) -> Result<Vec<AlgMatrix>> {
    let alg = &ring.algebra;
    let m = a.first().map_or(0, |g| g.rows);
    if a.len() != b.len() || a.len() != sigmas.len() || b.iter().any(|g| g.rows != m) {
        return Err(Error::Invalid("isometry search needs matching form lists".into()));
    }
    if m == 0 {
        return Ok(vec![AlgMatrix::identity(alg, 0)]);
    }
    let elems = alg.elements(budget)?;
    let mut columns: Vec<Vec<AlgElem>> = Vec::new();
    odometer(&vec![elems; m], budget, |c| {
        columns.push(c);
        Ok(())
    })?;
    let base = alg.base();
    let twist = |x: &AlgElem| alg.mul(&ring.sig(x), &ring.u);
    // rows[c][k] = c^{†_k} B_k
    let rows: Vec<Vec<Vec<AlgElem>>> = columns
        .iter()
        .map(|c| {
            sigmas
                .iter()
                .zip(b)
                .map(|(s, bk)| {
                    (0..m)
                        .map(|l| {
                            let mut acc = alg.zero();
                            for (i, ci) in c.iter().enumerate() {
                                acc = alg.add(&acc, &alg.mul(&s.mul_vec(base, ci), bk.get(i, l)));
                            }
                            acc
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let pair = |x: usize, y: usize, k: usize| -> AlgElem {
        let mut acc = alg.zero();
        for l in 0..m {
            acc = alg.add(&acc, &alg.mul(&rows[x][k][l], &columns[y][l]));
        }
        acc
    };
    let diag_ok = |x: usize, s: usize| -> bool {
        (0..a.len()).all(|k| {
            let v = pair(x, x, k);
            match mode {
                Match::Quadratic => ring.in_lambda(&alg.sub(&v, a[k].get(s, s))),
                Match::Exact => v == *a[k].get(s, s),
            }
        })
    };
    let cand: Vec<Vec<usize>> = (0..m).map(|s| (0..columns.len()).filter(|&x| diag_ok(x, s)).collect()).collect();
    let off_ok = |xs: usize, xt: usize, s: usize, t: usize| -> bool {
        (0..a.len()).all(|k| {
            let vst = pair(xs, xt, k);
            let vts = pair(xt, xs, k);
            match mode {
                Match::Quadratic => {
                    alg.add(&vst, &twist(&vts)) == alg.add(a[k].get(s, t), &twist(a[k].get(t, s)))
                }
                Match::Exact => vst == *a[k].get(s, t) && vts == *a[k].get(t, s),
            }
        })
    };
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::with_capacity(m);
    let mut steps = 0u64;
    fn rec(
        t: usize,
        m: usize,
        cand: &[Vec<usize>],
        chosen: &mut Vec<usize>,
        off_ok: &dyn Fn(usize, usize, usize, usize) -> bool,
        emit: &mut dyn FnMut(&[usize]) -> Result<bool>,
        steps: &mut u64,
        budget: u64,
    ) -> Result<bool> {
        if t == m {
            return emit(chosen);
        }
        for &x in &cand[t] {
            *steps += 1;
            if *steps > budget {
                return Err(Error::BudgetExceeded("isometry search".into()));
            }
            if (0..t).all(|s| off_ok(chosen[s], x, s, t)) {
                chosen.push(x);
                let stop = rec(t + 1, m, cand, chosen, off_ok, emit, steps, budget)?;
                chosen.pop();
                if stop {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }
    let mut emit = |sel: &[usize]| -> Result<bool> {
        let mut phi = AlgMatrix::zeros(alg, m, m);
        for (t, &x) in sel.iter().enumerate() {
            for s in 0..m {
                phi.set(s, t, columns[x][s].clone());
            }
        }
        if phi.is_invertible(alg)? {
            out.push(phi);
        }
        Ok(limit.is_some_and(|l| out.len() >= l))
    };
    rec(0, m, &cand, &mut chosen, &off_ok, &mut emit, &mut steps, budget)?;
    Ok(out)
}

/// Some isometry from a to b, if any.
pub fn find_isometry(a: &QuadClass, b: &QuadClass, budget: u64) -> Result<Option<AlgMatrix>> {
    if a.rank() != b.rank() {
        return Ok(None);
    }
    let ring = a.parent();
    let found = isometries(ring, &[ring.sigma.clone()], &[a.gram().clone()], &[b.gram().clone()], Match::Quadratic, Some(1), budget)?;
    Ok(found.into_iter().next())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadratic_space::forms::is_isometry;
    use crate::unitary_algebra::MatrixInvolution;

    fn scalar(p: u64, e: u32) -> Arc<UnitaryRing> {
        Arc::new(UnitaryRing::scalar_ring(BaseRing::finite_field(p, e).unwrap(), 1, false).unwrap())
    }

    #[test]
    fn gl_order_matches_enumeration() {
        let f3 = scalar(3, 1);
        assert_eq!(gl_order(&f3.algebra, 2).unwrap(), 48);
        assert_eq!(general_linear(&f3.algebra, 2, 1 << 20).unwrap().len(), 48);
        let m2 = UnitaryRing::matrix_algebra(2, BaseRing::prime_field(3).unwrap(), MatrixInvolution::Transpose, 1).unwrap();
        assert_eq!(gl_order(&m2.algebra, 1).unwrap(), 48);
        let z9 = UnitaryRing::scalar_ring(BaseRing::truncated(3, 2).unwrap(), 1, false).unwrap();
        assert_eq!(gl_order(&z9.algebra, 1).unwrap(), 6);
        assert_eq!(general_linear(&z9.algebra, 2, 1 << 20).unwrap().len() as u128, gl_order(&z9.algebra, 2).unwrap());
    }

    #[test]
    fn classify_examples() {
        let f3 = scalar(3, 1);
        let c = brute_force_classify(&f3, 1, Flavor::Quadratic, true, DEFAULT_BUDGET).unwrap();
        assert_eq!(c.classes.len(), 2);
        let c = brute_force_classify(&f3, 2, Flavor::Quadratic, true, DEFAULT_BUDGET).unwrap();
        assert_eq!(c.classes.len(), 2);
        for cl in &c.classes {
            assert_eq!(cl.stabilizer_order * cl.orbit_size as u128, c.group_order);
        }
        let f5 = scalar(5, 1);
        let c = brute_force_classify(&f5, 1, Flavor::Quadratic, false, DEFAULT_BUDGET).unwrap();
        assert_eq!(c.classes.len(), 3);
        assert_eq!(c.total, 5);
    }

    #[test]
    fn stabilizer_matches_isometry_search() {
        let f5 = scalar(5, 1);
        let c = brute_force_classify(&f5, 2, Flavor::Quadratic, true, DEFAULT_BUDGET).unwrap();
        for cl in &c.classes {
            let g = &cl.representative[0];
            let o = isometries(&f5, &[f5.sigma.clone()], &[g.clone()], &[g.clone()], Match::Quadratic, None, DEFAULT_BUDGET)
                .unwrap();
            assert_eq!(o.len() as u128, cl.stabilizer_order);
        }
    }

    #[test]
    fn hermitian_and_system() {
        let f3 = scalar(3, 1);
        let h = brute_force_classify(&f3, 1, Flavor::Hermitian, true, DEFAULT_BUDGET).unwrap();
        assert_eq!(h.classes.len(), 2);
        let id = Matrix::identity(f3.base(), 1);
        let s = brute_force_classify(&f3, 1, Flavor::System(vec![id.clone(), id]), true, DEFAULT_BUDGET).unwrap();
        // pairs (a,b) of units up to simultaneous scaling by squares
        assert_eq!(s.classes.len(), 4);
    }

    #[test]
    fn find_isometry_between_diagonal_forms() {
        let f5 = scalar(5, 1);
        let a = QuadClass::from_ints(f5.clone(), &[vec![1, 0], vec![0, 1]]).unwrap();
        let b = QuadClass::from_ints(f5.clone(), &[vec![2, 0], vec![0, 3]]).unwrap();
        let phi = find_isometry(&a, &b, DEFAULT_BUDGET).unwrap().unwrap();
        assert!(is_isometry(&phi, &a, &b).unwrap());
    }
}
