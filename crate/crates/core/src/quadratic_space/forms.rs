use std::sync::Arc;

use serde::Serialize;

use super::alg_matrix::AlgMatrix;
use crate::error::{Error, Result};
use crate::ring_core::hom::RingHom;
use crate::ring_core::{BaseRing, RingElem};
use crate::unitary_algebra::{
    bar_construction, lambda_min_max, semisimple_factorization, AlgElem, Algebra, BarData, SimpleFactorization, Span, UnitaryRing,
};

/// Sesquilinear form on the free module A^m, stored by its Gram matrix
/// g_st = f̃(x_s, x_t).
#[derive(Clone, Debug)]
pub struct SesqForm {
    pub parent: Arc<UnitaryRing>,
    pub gram: AlgMatrix,
}

impl SesqForm {
    pub fn new(parent: Arc<UnitaryRing>, gram: AlgMatrix) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::Invalid("Gram matrix must be square".into()));
        }
        let d = parent.dim();
        let base = parent.base();
        for a in &gram.data {
            if a.len() != d || a.iter().any(|x| !base.contains(x)) {
                return Err(Error::Invalid(format!("Gram entry is not an element of the algebra over {}", base.name())));
            }
        }
        Ok(SesqForm { parent, gram })
    }

    /// Diagonal form ⟨a_1, …, a_m⟩.
    pub fn diagonal(parent: Arc<UnitaryRing>, entries: &[AlgElem]) -> Result<Self> {
        let g = AlgMatrix::diagonal(&parent.algebra, entries);
        Self::new(parent, g)
    }

    /// Gram matrix with integer entries n·1_A.
    pub fn from_ints(parent: Arc<UnitaryRing>, rows: &[Vec<i64>]) -> Result<Self> {
        let alg = &parent.algebra;
        let base = alg.base();
        let data: Vec<Vec<AlgElem>> =
            rows.iter().map(|r| r.iter().map(|&x| alg.scale(&base.from_int(x), &alg.one())).collect()).collect();
        let g = AlgMatrix::from_rows(data)?;
        Self::new(parent, g)
    }

    pub fn rank(&self) -> usize {
        self.gram.rows
    }

    pub fn algebra(&self) -> &Algebra {
        &self.parent.algebra
    }
}

/// A quadratic class [f], i.e. f modulo Λ_P.
#[derive(Clone, Debug)]
pub struct QuadClass {
    pub rep: SesqForm,
}

impl QuadClass {
    pub fn new(rep: SesqForm) -> Self {
        QuadClass { rep }
    }

    pub fn from_gram(parent: Arc<UnitaryRing>, gram: AlgMatrix) -> Result<Self> {
        Ok(QuadClass { rep: SesqForm::new(parent, gram)? })
    }

    pub fn diagonal(parent: Arc<UnitaryRing>, entries: &[AlgElem]) -> Result<Self> {
        Ok(QuadClass { rep: SesqForm::diagonal(parent, entries)? })
    }

    pub fn from_ints(parent: Arc<UnitaryRing>, rows: &[Vec<i64>]) -> Result<Self> {
        Ok(QuadClass { rep: SesqForm::from_ints(parent, rows)? })
    }

    pub fn parent(&self) -> &Arc<UnitaryRing> {
        &self.rep.parent
    }

    pub fn gram(&self) -> &AlgMatrix {
        &self.rep.gram
    }

    pub fn rank(&self) -> usize {
        self.rep.rank()
    }

    pub fn algebra(&self) -> &Algebra {
        &self.rep.parent.algebra
    }

    /// Canonical representative: upper triangle h_st (s<t), zero below,
    /// diagonal reduced modulo Λ. Needs Λ in echelon form (fields, ℤ/p^n).
    pub fn canonical_gram(&self) -> Result<AlgMatrix> {
        canonical_gram(&self.rep.parent, &self.rep.gram)
    }

    pub fn key(&self) -> Result<Vec<u64>> {
        Ok(self.canonical_gram()?.key(self.algebra()))
    }

    /// The class of φ†Gφ.
    pub fn pullback(&self, phi: &AlgMatrix) -> QuadClass {
        let alg = self.algebra();
        let g = phi.adjoint(self.parent()).mul(alg, &self.rep.gram).mul(alg, phi);
        QuadClass { rep: SesqForm { parent: self.rep.parent.clone(), gram: g } }
    }
}

/// Hermitian form: h_ts = σ(h_st)·u.
#[derive(Clone, Debug)]
pub struct HermForm {
    pub form: SesqForm,
}

impl HermForm {
    pub fn new(form: SesqForm) -> Result<Self> {
        if !is_hermitian(&form.parent, &form.gram) {
            return Err(Error::Invalid("form is not u-hermitian".into()));
        }
        Ok(HermForm { form })
    }

    pub fn gram(&self) -> &AlgMatrix {
        &self.form.gram
    }

    pub fn rank(&self) -> usize {
        self.form.rank()
    }

    pub fn is_unimodular(&self) -> Result<bool> {
        self.form.gram.is_invertible(self.form.algebra())
    }
}

/// Per-component residue classes (P_i, [f_i]).
#[derive(Clone, Debug)]
pub struct ComponentForms {
    pub forms: Vec<(usize, QuadClass)>,
}

pub fn is_hermitian(ring: &UnitaryRing, g: &AlgMatrix) -> bool {
    let alg = &ring.algebra;
    (0..g.rows).all(|s| (0..g.cols).all(|t| *g.get(t, s) == alg.mul(&ring.sig(g.get(s, t)), &ring.u)))
}

/// σ(a)·u.
fn twist(ring: &UnitaryRing, a: &AlgElem) -> AlgElem {
    ring.algebra.mul(&ring.sig(a), &ring.u)
}

pub fn herm_gram(ring: &UnitaryRing, g: &AlgMatrix) -> AlgMatrix {
    let alg = &ring.algebra;
    let mut h = AlgMatrix::zeros(alg, g.rows, g.cols);
    for s in 0..g.rows {
        for t in 0..g.cols {
            h.set(s, t, alg.add(g.get(s, t), &twist(ring, g.get(t, s))));
        }
    }
    h
}

pub fn canonical_gram(ring: &UnitaryRing, g: &AlgMatrix) -> Result<AlgMatrix> {
    let alg = &ring.algebra;
    let m = g.rows;
    let mut out = AlgMatrix::zeros(alg, m, m);
    for s in 0..m {
        out.set(s, s, ring.lambda().reduce(g.get(s, s))?);
        for t in s + 1..m {
            out.set(s, t, alg.add(g.get(s, t), &twist(ring, g.get(t, s))));
        }
    }
    Ok(out)
}

/// Whether d ∈ Λ_P: diagonal in Λ and d_ts = −σ(d_st)·u off the diagonal.
pub fn in_lambda_p(ring: &UnitaryRing, d: &AlgMatrix) -> bool {
    let alg = &ring.algebra;
    for s in 0..d.rows {
        if !ring.in_lambda(d.get(s, s)) {
            return false;
        }
        for t in s + 1..d.cols {
            if *d.get(t, s) != alg.neg(&twist(ring, d.get(s, t))) {
                return false;
            }
        }
    }
    true
}

/// Base-module spanning set of Λ_P on A^m.
pub fn lambda_p_generators(ring: &UnitaryRing, m: usize) -> Vec<AlgMatrix> {
    let alg = &ring.algebra;
    let mut out = Vec::new();
    for s in 0..m {
        for l in &ring.lambda_basis {
            let mut d = AlgMatrix::zeros(alg, m, m);
            d.set(s, s, l.clone());
            out.push(d);
        }
        for t in s + 1..m {
            for k in 0..alg.dim() {
                let a = alg.basis(k);
                let mut d = AlgMatrix::zeros(alg, m, m);
                d.set(t, s, alg.neg(&twist(ring, &a)));
                d.set(s, t, a);
                out.push(d);
            }
        }
    }
    out
}

fn flat(d: &AlgMatrix) -> Vec<RingElem> {
    d.data.iter().flatten().cloned().collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct LambdaExtensionReport {
    pub rank: usize,
    pub degree: u32,
    /// dim Λ_P over the source field.
    pub source_dim: usize,
    /// dim Λ_{P'} over the target field, with Λ' recomputed on the extended algebra.
    pub target_dim: usize,
    /// Rank over the target field of the image of Λ_P.
    pub image_rank: usize,
    pub image_inside: bool,
    pub holds: bool,
}

/// Compares Λ_{P ⊗ S} with the image of Λ_P under base change along a field extension.
pub fn lambda_p_extension(ring: &UnitaryRing, hom: &RingHom, m: usize) -> Result<LambdaExtensionReport> {
    let (src, dst) = (hom.source(), hom.target());
    let (BaseRing::Finite(a), BaseRing::Finite(b)) = (src, dst) else {
        return Err(Error::UnsupportedRing("lambda extension check needs finite fields".into()));
    };
    let degree = b.degree() / a.degree();
    let ext = ring.map_base(hom)?;
    // recompute Λ' from scratch when Λ is the minimal or maximal parameter
    let (min, max) = lambda_min_max(&ring.algebra, &ring.sigma, &ring.u)?;
    let (emin, emax) = lambda_min_max(&ext.algebra, &ext.sigma, &ext.u)?;
    let n = ring.dim();
    let lam = Span::new(src, n, &ring.lambda_basis)?;
    let same = |gens: &[AlgElem]| -> Result<bool> {
        let s = Span::new(src, n, gens)?;
        Ok(s.rank() == lam.rank() && lam.contains_all(gens))
    };
    let ext_lambda = if same(&min)? {
        emin
    } else if same(&max)? {
        emax
    } else {
        ext.lambda_basis.clone()
    };
    let ext = UnitaryRing::new(ext.algebra.clone(), ext.sigma.clone(), ext.u.clone(), ext_lambda)?;
    let len = m * m * n;
    let source_dim = Span::new(src, len, &lambda_p_generators(ring, m).iter().map(flat).collect::<Vec<_>>())?.rank();
    let target_dim = Span::new(dst, len, &lambda_p_generators(&ext, m).iter().map(flat).collect::<Vec<_>>())?.rank();
    let images: Vec<AlgMatrix> =
        lambda_p_generators(ring, m).iter().map(|d| d.map_entries(|x| hom.apply_all(x))).collect::<Result<_>>()?;
    let image_inside = images.iter().all(|d| in_lambda_p(&ext, d));
    let image_rank = Span::new(dst, len, &images.iter().map(flat).collect::<Vec<_>>())?.rank();
    Ok(LambdaExtensionReport {
        rank: m,
        degree,
        source_dim,
        target_dim,
        image_rank,
        image_inside,
        holds: image_inside && image_rank == target_dim && target_dim == source_dim,
    })
}

pub fn herm_of(q: &QuadClass) -> HermForm {
    let gram = herm_gram(q.parent(), q.gram());
    HermForm { form: SesqForm { parent: q.parent().clone(), gram } }
}

pub fn quad_equal(a: &QuadClass, b: &QuadClass) -> bool {
    if a.rank() != b.rank() || a.algebra().dim() != b.algebra().dim() {
        return false;
    }
    let d = a.gram().sub(a.algebra(), b.gram());
    in_lambda_p(a.parent(), &d)
}

pub fn is_unimodular(q: &QuadClass) -> Result<bool> {
    herm_of(q).is_unimodular()
}

/// Whether φ carries b back to a, i.e. [φ†bφ] = [a].
pub fn is_isometry(phi: &AlgMatrix, a: &QuadClass, b: &QuadClass) -> Result<bool> {
    if phi.rows != b.rank() || phi.cols != a.rank() || !phi.is_invertible(a.algebra())? {
        return Err(Error::NotInvertible);
    }
    Ok(quad_equal(&b.pullback(phi), a))
}

pub fn orth_sum(a: &QuadClass, b: &QuadClass) -> QuadClass {
    let g = a.gram().direct_sum(a.algebra(), b.gram());
    QuadClass { rep: SesqForm { parent: a.parent().clone(), gram: g } }
}

/// Base change along `hom`, into a freshly built parent.
pub fn scalar_extend(q: &QuadClass, hom: &RingHom) -> Result<QuadClass> {
    let target = Arc::new(q.parent().map_base(hom)?);
    scalar_extend_into(q, &target, hom)
}

/// Base change into an already extended parent (shared across many forms).
pub fn scalar_extend_into(q: &QuadClass, target: &Arc<UnitaryRing>, hom: &RingHom) -> Result<QuadClass> {
    let gram = q.gram().map_entries(|a| hom.apply_all(a))?;
    QuadClass::from_gram(target.clone(), gram)
}

/// Reduction data for a semilocal unitary ring with a single residue prime
/// (or a finite/rational base): A → Ā = A/Jac → Π A_i.
#[derive(Clone, Debug)]
pub struct ResidueMap {
    hom: Option<RingHom>,
    pub bar: BarData,
    pub factorization: SimpleFactorization,
    pub components: Vec<Arc<UnitaryRing>>,
}

impl ResidueMap {
    pub fn new(ring: &UnitaryRing) -> Result<Self> {
        let hom = match ring.base() {
            BaseRing::Truncated { p, .. } => Some(RingHom::new(ring.base(), &BaseRing::prime_field(*p)?)?),
            BaseRing::Localized(ps) if ps.len() == 1 => Some(RingHom::new(ring.base(), &BaseRing::prime_field(ps[0])?)?),
            _ => None,
        };
        let bar = bar_construction(ring)?;
        let factorization = semisimple_factorization(&bar.bar)?;
        let components = factorization.components.iter().map(|c| Arc::new(c.ring.clone())).collect();
        Ok(ResidueMap { hom, bar, factorization, components })
    }

    /// Residue map at one prime of a multi-prime localization.
    pub fn at_prime(ring: &UnitaryRing, p: u64) -> Result<Self> {
        match ring.base() {
            BaseRing::Localized(ps) if ps.len() > 1 => {
                if !ps.contains(&p) {
                    return Err(Error::Invalid(format!("{p} is not a base prime")));
                }
                let single = BaseRing::localized(&[p])?;
                let hom = RingHom::new(ring.base(), &single)?;
                let local = ring.map_base(&hom)?;
                let mut out = Self::new(&local)?;
                out.hom = Some(RingHom::new(ring.base(), &BaseRing::prime_field(p)?)?);
                Ok(out)
            }
            _ => Self::new(ring),
        }
    }

    pub fn residue_field(&self) -> &BaseRing {
        self.bar.bar.base()
    }

    pub fn to_bar(&self, a: &[RingElem]) -> Result<AlgElem> {
        let raw = match &self.hom {
            Some(h) => h.apply_all(a)?,
            None => a.to_vec(),
        };
        Ok(self.bar.proj.mul_vec(self.residue_field(), &raw))
    }

    pub fn to_component(&self, i: usize, a: &[RingElem]) -> Result<AlgElem> {
        let b = self.to_bar(a)?;
        Ok(self.factorization.components[i].project(&b))
    }

    pub fn matrix_to_component(&self, i: usize, m: &AlgMatrix) -> Result<AlgMatrix> {
        m.map_entries(|a| self.to_component(i, a))
    }

    pub fn reduce(&self, q: &QuadClass) -> Result<ComponentForms> {
        let mut forms = Vec::new();
        for (i, comp) in self.components.iter().enumerate() {
            let g = self.matrix_to_component(i, q.gram())?;
            forms.push((i, QuadClass::from_gram(comp.clone(), g)?));
        }
        Ok(ComponentForms { forms })
    }
}

pub fn reduce_components(q: &QuadClass) -> Result<ComponentForms> {
    ResidueMap::new(q.parent())?.reduce(q)
}

/// Elements of A whose class in A/Λ is canonical (zero at the pivots of Λ).
pub fn lambda_complement_reps(ring: &UnitaryRing, budget: u64) -> Result<Vec<AlgElem>> {
    let all = ring.algebra.elements(budget)?;
    let lam: &Span = ring.lambda();
    let mut out = Vec::new();
    for a in all {
        if lam.reduce(&a)? == a {
            out.push(a);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unitary_algebra::MatrixInvolution;

    fn f(p: u64) -> Arc<UnitaryRing> {
        Arc::new(UnitaryRing::scalar_ring(BaseRing::prime_field(p).unwrap(), 1, false).unwrap())
    }

    #[test]
    fn lambda_p_scales_with_extension_degree() {
        for (p, e) in [(3u64, 2u32), (3, 3), (5, 2), (5, 3)] {
            let hom = RingHom::new(&BaseRing::prime_field(p).unwrap(), &BaseRing::finite_field(p, e).unwrap()).unwrap();
            for full in [false, true] {
                let ring = UnitaryRing::scalar_ring(BaseRing::prime_field(p).unwrap(), 1, full).unwrap();
                for m in 1..=2 {
                    let r = lambda_p_extension(&ring, &hom, m).unwrap();
                    assert!(r.holds, "{r:?}");
                    assert_eq!(r.source_dim, if full { m + m * (m - 1) / 2 } else { m * (m - 1) / 2 });
                }
            }
        }
        let m2 = UnitaryRing::matrix_algebra(2, BaseRing::prime_field(3).unwrap(), MatrixInvolution::Transpose, 1).unwrap();
        let hom = RingHom::new(&BaseRing::prime_field(3).unwrap(), &BaseRing::finite_field(3, 3).unwrap()).unwrap();
        assert!(lambda_p_extension(&m2, &hom, 2).unwrap().holds);
    }

    #[test]
    fn herm_of_examples() {
        let r = f(5);
        let h = herm_of(&QuadClass::from_ints(r.clone(), &[vec![1]]).unwrap());
        assert_eq!(h.gram(), QuadClass::from_ints(r.clone(), &[vec![2]]).unwrap().gram());
        let hyp = QuadClass::from_ints(r.clone(), &[vec![0, 1], vec![0, 0]]).unwrap();
        let h = herm_of(&hyp);
        assert_eq!(h.gram(), QuadClass::from_ints(r, &[vec![0, 1], vec![1, 0]]).unwrap().gram());
        assert!(is_unimodular(&hyp).unwrap());

        let m2 = Arc::new(
            UnitaryRing::matrix_algebra(2, BaseRing::prime_field(3).unwrap(), MatrixInvolution::Transpose, 1).unwrap(),
        );
        let alg = &m2.algebra;
        let q = QuadClass::diagonal(m2.clone(), &[alg.basis(0)]).unwrap();
        let h = herm_of(&q);
        let two_e11 = alg.scale(&alg.base().from_int(2), &alg.basis(0));
        assert_eq!(h.gram().get(0, 0), &two_e11);
        assert!(!is_unimodular(&q).unwrap());
    }

    #[test]
    fn quad_equal_examples() {
        let r = f(5);
        let a = QuadClass::from_ints(r.clone(), &[vec![0, 1], vec![0, 0]]).unwrap();
        let b = QuadClass::from_ints(r.clone(), &[vec![0, 0], vec![-1 + 5, 0]]).unwrap();
        // a − b = [[0,1],[1,0]]: not skew, so not equal
        assert!(!quad_equal(&a, &b));
        let c = QuadClass::from_ints(r.clone(), &[vec![0, 0], vec![1, 0]]).unwrap();
        assert!(quad_equal(&a, &c));
        assert_eq!(a.key().unwrap(), c.key().unwrap());
        assert!(!quad_equal(
            &QuadClass::from_ints(r.clone(), &[vec![1]]).unwrap(),
            &QuadClass::from_ints(r, &[vec![2]]).unwrap()
        ));
    }

    #[test]
    fn isometry_examples() {
        let r = f(5);
        let a = QuadClass::from_ints(r.clone(), &[vec![1, 0], vec![0, 1]]).unwrap();
        let swap = QuadClass::from_ints(r.clone(), &[vec![0, 1], vec![1, 0]]).unwrap().gram().clone();
        assert!(is_isometry(&swap, &a, &a).unwrap());
        let b = QuadClass::from_ints(r.clone(), &[vec![1, 0], vec![0, 2]]).unwrap();
        let id = AlgMatrix::identity(a.algebra(), 2);
        assert!(!is_isometry(&id, &a, &b).unwrap());
        let zero = AlgMatrix::zeros(a.algebra(), 2, 2);
        assert!(matches!(is_isometry(&zero, &a, &a), Err(Error::NotInvertible)));
    }

    #[test]
    fn orth_sum_and_extend() {
        let r = f(3);
        let a = QuadClass::from_ints(r.clone(), &[vec![1]]).unwrap();
        let b = QuadClass::from_ints(r.clone(), &[vec![2]]).unwrap();
        let s = orth_sum(&a, &b);
        assert!(quad_equal(&s, &QuadClass::from_ints(r.clone(), &[vec![1, 0], vec![0, 2]]).unwrap()));
        let empty = QuadClass::from_ints(r.clone(), &[]).unwrap();
        assert!(quad_equal(&orth_sum(&empty, &a), &a));
        let f9 = BaseRing::finite_field(3, 2).unwrap();
        let hom = RingHom::new(r.base(), &f9).unwrap();
        let e = scalar_extend(&s, &hom).unwrap();
        assert_eq!(e.parent().base(), &f9);
        assert_eq!(e.gram().get(1, 1), &vec![f9.from_int(2)]);
    }

    #[test]
    fn reduce_quaternion_order() {
        use crate::ring_core::rat_int;
        let z3 = BaseRing::localized(&[3]).unwrap();
        let ord = Arc::new(UnitaryRing::quaternion(z3, &rat_int(-1), &rat_int(-1), &rat_int(3)).unwrap());
        let q = QuadClass::diagonal(ord.clone(), &[ord.algebra.one()]).unwrap();
        assert!(is_unimodular(&q).unwrap());
        let c = reduce_components(&q).unwrap();
        assert_eq!(c.forms.len(), 1);
        let (_, f0) = &c.forms[0];
        assert_eq!(f0.algebra().dim(), 1);
        assert!(is_unimodular(f0).unwrap());
    }
}
