//! Transfer of forms on A^m into rank-1 forms over B = End_A(A^m) ≅ M_m(A).

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::isometry_engine::{orthogonal_group, DicksonEngine};
use crate::quadratic_space::classify::{brute_force_classify, find_isometry, Flavor};
use crate::quadratic_space::{is_unimodular, lambda_p_generators, AlgMatrix, HermForm, QuadClass, ResidueMap};
use crate::ring_core::Matrix;
use crate::unitary_algebra::{check_unitary, AlgElem, Algebra, Classification, UnitaryRing};

/// (B, τ, 1, Γ) built from a unimodular hermitian (A^m, h).
///
/// B has basis E_st·e_k at index (s·m + t)·n + k, n = dim A.
#[derive(Clone, Debug)]
pub struct TransferContext {
    pub source: Arc<UnitaryRing>,
    pub base_form: HermForm,
    pub target: Arc<UnitaryRing>,
    h_inv: AlgMatrix,
}

impl TransferContext {
    pub fn rank(&self) -> usize {
        self.base_form.rank()
    }

    /// m×m matrix over A → element of B.
    pub fn to_b(&self, phi: &AlgMatrix) -> Result<AlgElem> {
        let m = self.rank();
        if phi.rows != m || phi.cols != m {
            return Err(Error::RankMismatch { expected: m, got: phi.rows });
        }
        Ok(flatten(phi))
    }

    /// Element of B → m×m matrix over A.
    pub fn from_b(&self, b: &[crate::ring_core::RingElem]) -> AlgMatrix {
        unflatten(&self.source.algebra, self.rank(), b)
    }

    /// τ evaluated through the dictionary: h⁻¹ φ† h.
    pub fn tau_matrix(&self, phi: &AlgMatrix) -> AlgMatrix {
        let alg = &self.source.algebra;
        self.h_inv.mul(alg, &phi.adjoint(&self.source)).mul(alg, self.base_form.gram())
    }
}

fn flatten(phi: &AlgMatrix) -> AlgElem {
    phi.data.iter().flat_map(|a| a.iter().cloned()).collect()
}

fn unflatten(alg: &Algebra, m: usize, b: &[crate::ring_core::RingElem]) -> AlgMatrix {
    let n = alg.dim();
    let mut out = AlgMatrix::zeros(alg, m, m);
    for s in 0..m {
        for t in 0..m {
            let off = (s * m + t) * n;
            out.set(s, t, b[off..off + n].to_vec());
        }
    }
    out
}

/// B = M_m(A) as a structure-constant algebra over the base of A.
fn matrix_ring(alg: &Algebra, m: usize) -> Result<Algebra> {
    let n = alg.dim();
    let dim = m * m * n;
    let unit = flatten(&AlgMatrix::identity(alg, m));
    let base = alg.base().clone();
    Algebra::from_fn(base.clone(), dim, unit, |i, j| {
        let (st, a) = (i / n, i % n);
        let (uv, b) = (j / n, j % n);
        let (s, t) = (st / m, st % m);
        let (u, v) = (uv / m, uv % m);
        let mut out = vec![base.zero(); dim];
        if t == u {
            let prod = alg.mul(&alg.basis(a), &alg.basis(b));
            let off = (s * m + v) * n;
            out[off..off + n].clone_from_slice(&prod);
        }
        out
    })
}

pub fn make_transfer(source: &Arc<UnitaryRing>, h: &HermForm) -> Result<TransferContext> {
    if source.algebra.dim() != h.form.algebra().dim() || source.base() != h.form.parent.base() {
        return Err(Error::Invalid("hermitian form lives over a different ring".into()));
    }
    let alg = &source.algebra;
    let h_inv = h.gram().inverse(alg)?.ok_or(Error::NotUnimodular)?;
    let m = h.rank();
    let b_alg = matrix_ring(alg, m)?;
    let dim = b_alg.dim();
    let mut ctx = TransferContext {
        source: source.clone(),
        base_form: h.clone(),
        target: Arc::new(UnitaryRing::scalar_ring(source.base().clone(), 1, false)?),
        h_inv: h_inv.clone(),
    };
    let base = alg.base();
    let mut sigma = Matrix::zeros(base, dim, dim);
    for j in 0..dim {
        let img = flatten(&ctx.tau_matrix(&unflatten(alg, m, &b_alg.basis(j))));
        for (i, x) in img.into_iter().enumerate() {
            sigma.set(i, j, x);
        }
    }
    let gamma: Vec<AlgElem> =
        lambda_p_generators(source, m).iter().map(|d| flatten(&h_inv.mul(alg, d))).collect();
    let one = b_alg.one();
    let target = UnitaryRing::new(b_alg, sigma, one, gamma)?;
    let problems = check_unitary(&target);
    if !problems.is_empty() {
        return Err(Error::Invalid(format!("transferred ring is not unitary: {}", problems.join("; "))));
    }
    ctx.target = Arc::new(target);
    Ok(ctx)
}

/// [T_h f]: the rank-1 class over B with Gram h⁻¹·G.
pub fn transfer_form(ctx: &TransferContext, q: &QuadClass) -> Result<QuadClass> {
    if q.rank() != ctx.rank() {
        return Err(Error::RankMismatch { expected: ctx.rank(), got: q.rank() });
    }
    let g = ctx.h_inv.mul(&ctx.source.algebra, q.gram());
    let gram = AlgMatrix::from_rows(vec![vec![flatten(&g)]])?;
    QuadClass::from_gram(ctx.target.clone(), gram)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct TransferReport {
    pub unimodular_equivalence: bool,
    pub group_equality: bool,
    pub class_correspondence: bool,
    pub dickson_compatible: bool,
    pub split_orthogonal_preserved: bool,
    pub group_order: usize,
    pub notes: Vec<String>,
}

impl TransferReport {
    pub fn passed(&self) -> bool {
        self.unimodular_equivalence
            && self.group_equality
            && self.class_correspondence
            && self.dickson_compatible
            && self.split_orthogonal_preserved
    }
}

fn split_orthogonal_count(r: &ResidueMap) -> (usize, usize) {
    let f = &r.factorization;
    let so = f.components.iter().filter(|c| c.classification == Classification::SplitOrthogonal).count();
    (f.components.len(), so)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

pub fn verify_transfer(ctx: &TransferContext, q: &QuadClass, q2: &QuadClass, budget: u64) -> Result<TransferReport> {
    let tq = transfer_form(ctx, q)?;
    let tq2 = transfer_form(ctx, q2)?;
    let mut report = TransferReport {
        unimodular_equivalence: is_unimodular(q)? == is_unimodular(&tq)? && is_unimodular(q2)? == is_unimodular(&tq2)?,
        ..Default::default()
    };

    let o = orthogonal_group(q, budget)?;
    let ob = orthogonal_group(&tq, budget)?;
    report.group_order = o.order();
    let b_alg = &ctx.target.algebra;
    let mut src_keys = BTreeSet::new();
    for g in &o.elements {
        src_keys.insert(b_alg.key(&ctx.to_b(g)?));
    }
    let tgt_keys: BTreeSet<Vec<u64>> = ob.elements.iter().map(|g| b_alg.key(g.get(0, 0))).collect();
    report.group_equality = src_keys == tgt_keys;

    let src_iso = find_isometry(q, q2, budget)?.is_some();
    let tgt_iso = find_isometry(&tq, &tq2, budget)?.is_some();
    report.class_correspondence = src_iso == tgt_iso;

    let src_res = ResidueMap::new(&ctx.source)?;
    let tgt_res = ResidueMap::new(&ctx.target)?;
    report.split_orthogonal_preserved = split_orthogonal_count(&src_res) == split_orthogonal_count(&tgt_res);

    if src_res.factorization.components.iter().any(|c| c.division_part_is_f2) {
        report.notes.push("Dickson comparison skipped: residue field F_2".into());
        report.dickson_compatible = true;
        return Ok(report);
    }
    let src_eng = DicksonEngine::from_residue(src_res, q.rank())?;
    let tgt_eng = DicksonEngine::from_residue(tgt_res, 1)?;
    let k = src_eng.contexts.len();
    if k != tgt_eng.contexts.len() {
        report.notes.push(format!("split-orthogonal components: {k} on A, {} on B", tgt_eng.contexts.len()));
        return Ok(report);
    }
    let mut pairs = Vec::with_capacity(o.order());
    for g in &o.elements {
        let b = AlgMatrix::from_rows(vec![vec![ctx.to_b(g)?]])?;
        pairs.push((src_eng.signature(g)?.bits, tgt_eng.signature(&b)?.bits));
    }
    // components of A and B are matched through their central idempotents;
    // any consistent relabelling is accepted
    report.dickson_compatible =
        permutations(k).iter().any(|perm| pairs.iter().all(|(a, b)| (0..k).all(|i| a[i] == b[perm[i]])));
    Ok(report)
}

/// Exhaustive transfer check over all unimodular classes of rank m.
#[derive(Clone, Debug, Serialize)]
pub struct TransferSuiteReport {
    pub source_classes: usize,
    pub target_classes: usize,
    pub bijection: bool,
    pub pairs_checked: usize,
    pub unimodular_equivalence: bool,
    pub group_equality: bool,
    pub class_correspondence: bool,
    pub dickson_compatible: bool,
    pub split_orthogonal_preserved: bool,
}

impl TransferSuiteReport {
    pub fn passed(&self) -> bool {
        self.bijection
            && self.unimodular_equivalence
            && self.group_equality
            && self.class_correspondence
            && self.dickson_compatible
            && self.split_orthogonal_preserved
    }
}

pub fn transfer_suite(ctx: &TransferContext, budget: u64) -> Result<TransferSuiteReport> {
    let m = ctx.rank();
    let src = brute_force_classify(&ctx.source, m, Flavor::Quadratic, true, budget)?;
    let tgt = brute_force_classify(&ctx.target, 1, Flavor::Quadratic, true, budget)?;
    let reps: Vec<QuadClass> = src
        .classes
        .iter()
        .map(|c| QuadClass::from_gram(ctx.source.clone(), c.representative[0].clone()))
        .collect::<Result<_>>()?;
    let mut images = BTreeSet::new();
    for r in &reps {
        let t = transfer_form(ctx, r)?;
        if let Some(i) = tgt.class_of_quad(&t)? {
            images.insert(i);
        }
    }
    let mut out = TransferSuiteReport {
        source_classes: src.classes.len(),
        target_classes: tgt.classes.len(),
        bijection: images.len() == reps.len() && images.len() == tgt.classes.len(),
        pairs_checked: 0,
        unimodular_equivalence: true,
        group_equality: true,
        class_correspondence: true,
        dickson_compatible: true,
        split_orthogonal_preserved: true,
    };
    for a in &reps {
        for b in &reps {
            let r = verify_transfer(ctx, a, b, budget)?;
            out.pairs_checked += 1;
            out.unimodular_equivalence &= r.unimodular_equivalence;
            out.group_equality &= r.group_equality;
            out.class_correspondence &= r.class_correspondence;
            out.dickson_compatible &= r.dickson_compatible;
            out.split_orthogonal_preserved &= r.split_orthogonal_preserved;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadratic_space::classify::DEFAULT_BUDGET;
    use crate::quadratic_space::{herm_of, SesqForm};
    use crate::ring_core::hom::RingHom;
    use crate::ring_core::BaseRing;
    use crate::unitary_algebra::{lambda_min_max, MatrixInvolution};

    fn scalar(p: u64) -> Arc<UnitaryRing> {
        Arc::new(UnitaryRing::scalar_ring(BaseRing::prime_field(p).unwrap(), 1, false).unwrap())
    }

    fn herm(ring: &Arc<UnitaryRing>, rows: &[Vec<i64>]) -> HermForm {
        HermForm::new(SesqForm::from_ints(ring.clone(), rows).unwrap()).unwrap()
    }

    #[test]
    fn identity_transfer() {
        let f5 = scalar(5);
        let ctx = make_transfer(&f5, &herm(&f5, &[vec![1]])).unwrap();
        assert_eq!(ctx.target.dim(), 1);
        assert_eq!(ctx.target.sigma, Matrix::identity(f5.base(), 1));
        assert_eq!(ctx.target.lambda().rank(), 0);
        let q = QuadClass::from_ints(f5.clone(), &[vec![2]]).unwrap();
        let r = verify_transfer(&ctx, &q, &q, DEFAULT_BUDGET).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn f3_plane_is_transpose() {
        let f3 = scalar(3);
        let ctx = make_transfer(&f3, &herm(&f3, &[vec![1, 0], vec![0, 1]])).unwrap();
        let b = &ctx.target;
        assert_eq!(b.dim(), 4);
        // τ(E_01) = E_10
        let mut e01 = vec![f3.base().zero(); 4];
        e01[1] = f3.base().one();
        let mut e10 = vec![f3.base().zero(); 4];
        e10[2] = f3.base().one();
        assert_eq!(b.sig(&e01), e10);
        // Γ is the skew matrices
        assert_eq!(b.lambda().rank(), 1);
        let skew = b.algebra.sub(&e01, &e10);
        assert!(b.in_lambda(&skew));
    }

    #[test]
    fn nonstandard_h_gives_twisted_transpose() {
        let f3 = scalar(3);
        let ctx = make_transfer(&f3, &herm(&f3, &[vec![1, 0], vec![0, 2]])).unwrap();
        let alg = &f3.algebra;
        let x = AlgMatrix::from_rows(vec![
            vec![alg.scalar(&f3.base().from_int(1)), alg.scalar(&f3.base().from_int(2))],
            vec![alg.zero(), alg.scalar(&f3.base().from_int(1))],
        ])
        .unwrap();
        let got = ctx.from_b(&ctx.target.sig(&ctx.to_b(&x).unwrap()));
        // h⁻¹ xᵗ h with h = h⁻¹ = diag(1,2)
        let expect = AlgMatrix::from_rows(vec![
            vec![alg.scalar(&f3.base().from_int(1)), alg.zero()],
            vec![alg.scalar(&f3.base().from_int(1)), alg.scalar(&f3.base().from_int(1))],
        ])
        .unwrap();
        assert_eq!(got, expect);
    }

    #[test]
    fn rejects_degenerate_h_and_rank_mismatch() {
        let f3 = scalar(3);
        let bad = herm(&f3, &[vec![1, 0], vec![0, 0]]);
        assert!(matches!(make_transfer(&f3, &bad), Err(Error::NotUnimodular)));
        let ctx = make_transfer(&f3, &herm(&f3, &[vec![1, 0], vec![0, 1]])).unwrap();
        let q = QuadClass::from_ints(f3, &[vec![1]]).unwrap();
        assert!(matches!(transfer_form(&ctx, &q), Err(Error::RankMismatch { .. })));
    }

    #[test]
    fn half_h_transfers_to_one() {
        let f3 = scalar(3);
        let h = herm(&f3, &[vec![1, 0], vec![0, 1]]);
        let ctx = make_transfer(&f3, &h).unwrap();
        // ½·diag(1,1) = diag(2,2) over F_3
        let q = QuadClass::from_ints(f3, &[vec![2, 0], vec![0, 2]]).unwrap();
        let t = transfer_form(&ctx, &q).unwrap();
        assert_eq!(herm_of(&t).gram().get(0, 0), &ctx.target.algebra.one());
    }

    #[test]
    fn hyperbolic_example() {
        let f3 = scalar(3);
        let ctx = make_transfer(&f3, &herm(&f3, &[vec![1, 0], vec![0, 1]])).unwrap();
        let q = QuadClass::from_ints(f3.clone(), &[vec![0, 1], vec![0, 0]]).unwrap();
        let t = transfer_form(&ctx, &q).unwrap();
        assert_eq!(ctx.from_b(t.gram().get(0, 0)), q.gram().clone());
        assert!(is_unimodular(&t).unwrap());
    }

    #[test]
    fn f3_plane_suite() {
        let f3 = scalar(3);
        let ctx = make_transfer(&f3, &herm(&f3, &[vec![1, 0], vec![0, 1]])).unwrap();
        let r = transfer_suite(&ctx, DEFAULT_BUDGET).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.source_classes, 2);
    }

    #[test]
    fn matrix_source_preserves_split_orthogonality() {
        let m2 = Arc::new(
            UnitaryRing::matrix_algebra(2, BaseRing::prime_field(3).unwrap(), MatrixInvolution::Transpose, 1).unwrap(),
        );
        let h = HermForm::new(SesqForm::diagonal(m2.clone(), &[m2.algebra.one()]).unwrap()).unwrap();
        let ctx = make_transfer(&m2, &h).unwrap();
        let q = QuadClass::diagonal(m2.clone(), &[m2.algebra.one()]).unwrap();
        let r = verify_transfer(&ctx, &q, &q, DEFAULT_BUDGET).unwrap();
        assert!(r.split_orthogonal_preserved && r.passed(), "{r:?}");
    }

    #[test]
    fn tau_is_an_involutive_anti_automorphism() {
        let f3 = scalar(3);
        let ctx = make_transfer(&f3, &herm(&f3, &[vec![1, 1], vec![1, 2]])).unwrap();
        let b = &ctx.target;
        let elems = b.algebra.elements(DEFAULT_BUDGET).unwrap();
        for x in elems.iter().step_by(7) {
            assert_eq!(&b.sig(&b.sig(x)), x);
            for y in elems.iter().step_by(11) {
                assert_eq!(b.sig(&b.algebra.mul(x, y)), b.algebra.mul(&b.sig(y), &b.sig(x)));
            }
        }
    }

    #[test]
    fn commutes_with_scalar_extension() {
        for (p, e) in [(3u64, 2u32), (5, 2), (3, 3)] {
            let small = BaseRing::prime_field(p).unwrap();
            let big = BaseRing::finite_field(p, e).unwrap();
            let hom = RingHom::new(&small, &big).unwrap();
            let src = scalar(p);
            let h = herm(&src, &[vec![1, 0], vec![0, 2]]);
            let ctx = make_transfer(&src, &h).unwrap();
            let ext_src = Arc::new(src.map_base(&hom).unwrap());
            let ext_h = HermForm::new(SesqForm::new(ext_src.clone(), h.gram().map_entries(|a| hom.apply_all(a)).unwrap()).unwrap()).unwrap();
            let ctx_ext = make_transfer(&ext_src, &ext_h).unwrap();
            let mapped = ctx.target.map_base(&hom).unwrap();
            let (a, b) = (&mapped, &ctx_ext.target);
            let d = a.dim();
            for i in 0..d {
                assert_eq!(a.sig(&a.algebra.basis(i)), b.sig(&b.algebra.basis(i)));
                for j in 0..d {
                    assert_eq!(
                        a.algebra.mul(&a.algebra.basis(i), &a.algebra.basis(j)),
                        b.algebra.mul(&b.algebra.basis(i), &b.algebra.basis(j))
                    );
                }
            }
            assert!(a.lambda().contains_all(&b.lambda_basis) && b.lambda().contains_all(&a.lambda_basis));
        }
    }

    #[test]
    fn gamma_min_tracks_lambda_min() {
        let f3 = scalar(3);
        let ctx = make_transfer(&f3, &herm(&f3, &[vec![1, 0], vec![0, 1]])).unwrap();
        let b = &ctx.target;
        let (min, _) = lambda_min_max(&b.algebra, &b.sigma, &b.u).unwrap();
        assert!(b.lambda().contains_all(&min) && b.lambda().rank() == min.len());
    }
}
