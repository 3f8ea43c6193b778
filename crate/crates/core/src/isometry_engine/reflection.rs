use crate::error::{Error, Result};
use crate::quadratic_space::forms::herm_gram;
use crate::quadratic_space::{is_isometry, AlgMatrix, QuadClass};
use crate::unitary_algebra::{AlgElem, UnitaryRing};

/// Reflection datum (y, c) with c a unit and c ≡ f̃(y,y) modulo Λ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reflection {
    pub y: Vec<AlgElem>,
    pub c: AlgElem,
}

/// f̃(x, y) = Σ σ(x_s) g_st y_t.
pub fn form_value(ring: &UnitaryRing, g: &AlgMatrix, x: &[AlgElem], y: &[AlgElem]) -> AlgElem {
    let alg = &ring.algebra;
    let mut acc = alg.zero();
    for s in 0..g.rows {
        let sx = ring.sig(&x[s]);
        for t in 0..g.cols {
            acc = alg.add(&acc, &alg.mul(&alg.mul(&sx, g.get(s, t)), &y[t]));
        }
    }
    acc
}

/// Matrix of s_{y,c}: x ↦ x − y·c⁻¹·h̃(y, x), without validity checks.
pub fn reflection_matrix(ring: &UnitaryRing, h: &AlgMatrix, y: &[AlgElem], c_inv: &AlgElem) -> AlgMatrix {
    let alg = &ring.algebra;
    let m = y.len();
    // row vector y†H
    let row: Vec<AlgElem> = (0..m)
        .map(|t| {
            let mut acc = alg.zero();
            for (s, ys) in y.iter().enumerate() {
                acc = alg.add(&acc, &alg.mul(&ring.sig(ys), h.get(s, t)));
            }
            acc
        })
        .collect();
    let mut out = AlgMatrix::identity(alg, m);
    for s in 0..m {
        let yc = alg.mul(&y[s], c_inv);
        for (t, r) in row.iter().enumerate() {
            let cur = out.get(s, t).clone();
            out.set(s, t, alg.sub(&cur, &alg.mul(&yc, r)));
        }
    }
    out
}

pub fn check_reflection(r: &Reflection, q: &QuadClass) -> Result<AlgElem> {
    let ring = q.parent();
    let alg = &ring.algebra;
    if r.y.len() != q.rank() {
        return Err(Error::RankMismatch { expected: q.rank(), got: r.y.len() });
    }
    let c_inv = alg.inv(&r.c)?.ok_or(Error::CNotUnit)?;
    let fy = form_value(ring, q.gram(), &r.y, &r.y);
    if !ring.in_lambda(&alg.sub(&r.c, &fy)) {
        return Err(Error::CNotInFhat);
    }
    Ok(c_inv)
}

/// The isometry s_{y,c} of [f].
pub fn reflection_map(r: &Reflection, q: &QuadClass) -> Result<AlgMatrix> {
    let c_inv = check_reflection(r, q)?;
    let ring = q.parent();
    let h = herm_gram(ring, q.gram());
    let s = reflection_matrix(ring, &h, &r.y, &c_inv);
    if !is_isometry(&s, q, q)? {
        return Err(Error::Invalid("reflection failed the isometry postcondition".into()));
    }
    Ok(s)
}

/// The datum of s_{y,c}⁻¹ = s_{y, c^σ u}.
pub fn inverse_reflection(r: &Reflection, ring: &UnitaryRing) -> Reflection {
    Reflection { y: r.y.clone(), c: ring.algebra.mul(&ring.sig(&r.c), &ring.u) }
}

/// Every valid reflection of a form over a finite ring, with its matrix.
pub fn all_reflections(q: &QuadClass, budget: u64) -> Result<Vec<(Reflection, AlgMatrix)>> {
    let ring = q.parent();
    let alg = &ring.algebra;
    let m = q.rank();
    let elems = alg.elements(budget)?;
    let lam = ring.lambda().elements(budget)?;
    let h = herm_gram(ring, q.gram());
    let q_size = elems.len() as u64;
    let ny = q_size
        .checked_pow(m as u32)
        .filter(|&t| t.saturating_mul(lam.len() as u64) <= budget)
        .ok_or_else(|| Error::BudgetExceeded("reflection enumeration".into()))?;
    let mut out = Vec::new();
    for mut code in 0..ny {
        let mut y = Vec::with_capacity(m);
        for _ in 0..m {
            y.push(elems[(code % q_size) as usize].clone());
            code /= q_size;
        }
        let fy = form_value(ring, q.gram(), &y, &y);
        for l in &lam {
            let c = alg.add(&fy, l);
            let Some(c_inv) = alg.inv(&c)? else { continue };
            let s = reflection_matrix(ring, &h, &y, &c_inv);
            out.push((Reflection { y: y.clone(), c }, s));
        }
    }
    Ok(out)
}
