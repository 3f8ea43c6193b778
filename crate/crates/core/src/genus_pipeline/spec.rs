//! Order descriptions, deserialized from TOML.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadratic_space::{AlgMatrix, QuadClass};
use crate::ring_core::base::{parse_rational, valuation};
use crate::ring_core::{BaseRing, Matrix};
use crate::unitary_algebra::{check_unitary, AlgElem, Algebra, UnitaryRing};

/// An integer or a rational written as a string ("3/5").
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Str(String),
}

impl Num {
    pub fn to_rational(&self) -> Result<BigRational> {
        match self {
            Num::Int(n) => Ok(BigRational::from_integer((*n).into())),
            Num::Str(s) => parse_rational(s),
        }
    }
}

impl From<i64> for Num {
    fn from(n: i64) -> Self {
        Num::Int(n)
    }
}

fn rationals(xs: &[Num]) -> Result<Vec<BigRational>> {
    xs.iter().map(Num::to_rational).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TiledPattern {
    pub prime: u64,
    pub exponents: Vec<Vec<u32>>,
}

/// ℤ_(p_1..p_t)[x]/(x² − a·x − b) with x ↦ a − x.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaloisData {
    pub a: Num,
    pub b: Num,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenericOrder {
    pub primes: Vec<u64>,
    /// Structure constants c[i][j][k] with e_i e_j = Σ_k c[i][j][k] e_k.
    #[serde(default)]
    pub constants: Vec<Vec<Vec<Num>>>,
    #[serde(default)]
    pub unit: Vec<Num>,
    /// sigma[j] = coordinates of σ(e_j).
    #[serde(default)]
    pub sigma: Vec<Vec<Num>>,
    #[serde(default)]
    pub u: Vec<Num>,
    /// Basis of Λ; Λ^min(u) when absent.
    #[serde(default)]
    pub lambda: Option<Vec<Vec<Num>>>,
    /// Shortcut constructor replacing the explicit tables.
    #[serde(default)]
    pub galois: Option<GaloisData>,
    /// Hereditarity asserted by the caller (not checked).
    #[serde(default)]
    pub hereditary: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum OrderKind {
    Quaternion { primes: Vec<u64>, u: Num, v: Num, pi: Num },
    Tiled { primes: Vec<u64>, n: usize, #[serde(default)] patterns: Vec<TiledPattern> },
    Generic(GenericOrder),
}

/// Idempotent of A_{S_p}, in the coordinates of A; `prime = None` means every base prime.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdempotentSpec {
    #[serde(default)]
    pub prime: Option<u64>,
    pub coords: Vec<Num>,
}

/// Caller-supplied Δ-image at one place (0 stands for the fraction field).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeclaredImage {
    pub place: u64,
    /// Generators, as bit vectors over the coordinates of 𝓘 at that place.
    pub image: Vec<Vec<u8>>,
    pub provenance: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FormSpec {
    /// Gram matrix with scalar entries (multiples of 1_A).
    #[serde(default)]
    pub gram: Option<Vec<Vec<Num>>>,
    /// ⟨1, …, 1⟩ of this rank when no Gram matrix is given.
    #[serde(default)]
    pub rank: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderSpec {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(flatten)]
    pub kind: OrderKind,
    #[serde(default)]
    pub form: FormSpec,
    #[serde(default)]
    pub idempotents: Vec<IdempotentSpec>,
    #[serde(default)]
    pub declared: Vec<DeclaredImage>,
}

impl OrderSpec {
    pub fn from_toml(text: &str) -> Result<Self> {
        let spec: OrderSpec = toml::from_str(text).map_err(|e| Error::UnsupportedSpec(e.message().to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn quaternion(primes: &[u64], u: i64, v: i64, pi: i64) -> Self {
        Self::bare(OrderKind::Quaternion { primes: primes.to_vec(), u: u.into(), v: v.into(), pi: pi.into() })
    }

    pub fn tiled(primes: &[u64], n: usize, patterns: &[(u64, Vec<Vec<u32>>)]) -> Self {
        let patterns =
            patterns.iter().map(|(p, m)| TiledPattern { prime: *p, exponents: m.clone() }).collect();
        Self::bare(OrderKind::Tiled { primes: primes.to_vec(), n, patterns })
    }

    pub fn galois(primes: &[u64], a: i64, b: i64) -> Self {
        Self::bare(OrderKind::Generic(GenericOrder {
            primes: primes.to_vec(),
            constants: vec![],
            unit: vec![],
            sigma: vec![],
            u: vec![],
            lambda: None,
            galois: Some(GaloisData { a: a.into(), b: b.into() }),
            hereditary: false,
        }))
    }

    fn bare(kind: OrderKind) -> Self {
        OrderSpec { name: None, kind, form: FormSpec::default(), idempotents: vec![], declared: vec![] }
    }

    pub fn kind_name(&self) -> &'static str {
        match &self.kind {
            OrderKind::Quaternion { .. } => "quaternion",
            OrderKind::Tiled { .. } => "tiled",
            OrderKind::Generic(_) => "generic",
        }
    }

    pub fn primes(&self) -> &[u64] {
        match &self.kind {
            OrderKind::Quaternion { primes, .. } | OrderKind::Tiled { primes, .. } => primes,
            OrderKind::Generic(g) => &g.primes,
        }
    }

    /// Tiled exponent pattern at p (all zeros when none is given).
    pub fn pattern_at(&self, p: u64) -> Option<Vec<Vec<u32>>> {
        match &self.kind {
            OrderKind::Tiled { n, patterns, .. } => Some(
                patterns.iter().find(|t| t.prime == p).map(|t| t.exponents.clone()).unwrap_or_else(|| vec![vec![0; *n]; *n]),
            ),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let primes = self.primes();
        if primes.contains(&2) {
            return Err(Error::HypothesisViolated("residue field F_2 at p = 2".into()));
        }
        BaseRing::localized(primes)?;
        match &self.kind {
            OrderKind::Quaternion { u, v, pi, .. } => {
                let (u, v, pi) = (u.to_rational()?, v.to_rational()?, pi.to_rational()?);
                if pi.is_zero() {
                    return Err(Error::UnsupportedSpec("π must be nonzero".into()));
                }
                for &p in primes {
                    if valuation(pi.numer(), p) == 0 || valuation(pi.denom(), p) > 0 {
                        return Err(Error::UnsupportedSpec(format!("π is not in the Jacobson radical at {p}")));
                    }
                    for (name, x) in [("u", &u), ("v", &v)] {
                        if x.is_zero() || valuation(x.numer(), p) > 0 || valuation(x.denom(), p) > 0 {
                            return Err(Error::UnsupportedSpec(format!("{name} is not a unit at {p}")));
                        }
                    }
                }
            }
            OrderKind::Tiled { patterns, .. } => {
                for t in patterns {
                    if t.exponents.iter().enumerate().any(|(i, r)| r.get(i).copied().unwrap_or(0) != 0) {
                        return Err(Error::UnsupportedSpec(format!("pattern at {} has a nonzero diagonal", t.prime)));
                    }
                }
            }
            OrderKind::Generic(_) => {}
        }
        Ok(())
    }

    pub fn build(&self) -> Result<Arc<UnitaryRing>> {
        self.validate()?;
        let ring = match &self.kind {
            OrderKind::Quaternion { primes, u, v, pi } => UnitaryRing::quaternion(
                BaseRing::localized(primes)?,
                &u.to_rational()?,
                &v.to_rational()?,
                &pi.to_rational()?,
            )?,
            OrderKind::Tiled { primes, n, patterns } => {
                let pats: Vec<(u64, Vec<Vec<u32>>)> =
                    patterns.iter().map(|t| (t.prime, t.exponents.clone())).collect();
                UnitaryRing::tiled(primes, *n, &pats).map_err(|e| Error::UnsupportedSpec(e.to_string()))?
            }
            OrderKind::Generic(g) => build_generic(g)?,
        };
        let problems = check_unitary(&ring);
        if !problems.is_empty() {
            return Err(Error::UnsupportedSpec(problems.join("; ")));
        }
        Ok(Arc::new(ring))
    }

    /// The form named in the spec, or ⟨1,…,1⟩ of `rank`.
    pub fn form(&self, ring: &Arc<UnitaryRing>, rank: Option<usize>) -> Result<QuadClass> {
        let alg = &ring.algebra;
        let base = alg.base();
        if let (Some(g), None) = (&self.form.gram, rank) {
            let rows: Vec<Vec<AlgElem>> = g
                .iter()
                .map(|r| r.iter().map(|x| Ok(alg.scale(&base.from_rational(&x.to_rational()?)?, &alg.one()))).collect())
                .collect::<Result<_>>()?;
            return QuadClass::from_gram(ring.clone(), AlgMatrix::from_rows(rows)?);
        }
        let m = rank.or(self.form.rank).unwrap_or(1);
        QuadClass::diagonal(ring.clone(), &vec![alg.one(); m])
    }

    /// Idempotents per prime: the declared ones, or the diagonal matrix units
    /// of a tiled order, or 1.
    pub fn idempotents_at(&self, ring: &UnitaryRing, p: u64) -> Result<Vec<AlgElem>> {
        let base = ring.base();
        if !self.idempotents.is_empty() {
            return self
                .idempotents
                .iter()
                .filter(|e| e.prime.is_none_or(|q| q == p))
                .map(|e| e.coords.iter().map(|x| base.from_rational(&x.to_rational()?)).collect())
                .collect();
        }
        Ok(match &self.kind {
            OrderKind::Tiled { n, .. } => (0..*n)
                .map(|i| {
                    let mut v = vec![base.zero(); n * n];
                    v[i * n + i] = base.one();
                    v
                })
                .collect(),
            _ => vec![ring.algebra.one()],
        })
    }
}

fn build_generic(g: &GenericOrder) -> Result<UnitaryRing> {
    let base = BaseRing::localized(&g.primes)?;
    if let Some(gal) = &g.galois {
        let (a, b) = (gal.a.to_rational()?, gal.b.to_rational()?);
        let (a, b) = (base.from_rational(&a)?, base.from_rational(&b)?);
        let r = base.clone();
        // basis 1, x with x² = a·x + b
        let alg = Algebra::from_fn(base.clone(), 2, vec![r.one(), r.zero()], |i, j| match (i, j) {
            (0, k) | (k, 0) => {
                let mut v = vec![r.zero(), r.zero()];
                v[k] = r.one();
                v
            }
            _ => vec![b.clone(), a.clone()],
        })?;
        let mut sigma = Matrix::identity(&base, 2);
        sigma.set(0, 1, a.clone());
        sigma.set(1, 1, base.from_int(-1));
        let one = alg.one();
        return UnitaryRing::with_min_lambda(alg, sigma, one);
    }
    let n = g.unit.len();
    if n == 0 || g.constants.len() != n || g.sigma.len() != n || g.u.len() != n {
        return Err(Error::UnsupportedSpec("generic order needs constants, unit, sigma and u of one dimension".into()));
    }
    let conv = |xs: &[Num]| -> Result<Vec<_>> { rationals(xs)?.iter().map(|x| base.from_rational(x)).collect() };
    let mut constants = Vec::with_capacity(n);
    for row in &g.constants {
        if row.len() != n {
            return Err(Error::UnsupportedSpec("structure constants have the wrong shape".into()));
        }
        constants.push(row.iter().map(|c| conv(c)).collect::<Result<Vec<_>>>()?);
    }
    let alg = Algebra::new(base.clone(), constants, conv(&g.unit)?)?;
    let mut sigma = Matrix::zeros(&base, n, n);
    for (j, col) in g.sigma.iter().enumerate() {
        for (i, x) in conv(col)?.into_iter().enumerate() {
            sigma.set(i, j, x);
        }
    }
    let u = conv(&g.u)?;
    match &g.lambda {
        Some(l) => UnitaryRing::new(alg, sigma, u, l.iter().map(|v| conv(v)).collect::<Result<_>>()?),
        None => UnitaryRing::with_min_lambda(alg, sigma, u),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_kinds() {
        let q = OrderSpec::from_toml("kind = \"quaternion\"\nprimes = [3]\nu = -1\nv = -1\npi = 3\n").unwrap();
        assert_eq!(q.kind_name(), "quaternion");
        assert_eq!(q.build().unwrap().dim(), 4);
        let t = OrderSpec::from_toml(
            "kind = \"tiled\"\nprimes = [3]\nn = 2\n[[patterns]]\nprime = 3\nexponents = [[0, 1], [0, 0]]\n",
        )
        .unwrap();
        assert_eq!(t.pattern_at(3).unwrap(), vec![vec![0, 1], vec![0, 0]]);
        let g = OrderSpec::from_toml("kind = \"generic\"\nprimes = [3]\n[galois]\na = 1\nb = \"1\"\n").unwrap();
        assert_eq!(g.build().unwrap().dim(), 2);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(matches!(
            OrderSpec::from_toml("kind = \"quaternion\"\nprimes = [2]\nu = -1\nv = -1\npi = 2\n"),
            Err(Error::HypothesisViolated(_))
        ));
        assert!(matches!(OrderSpec::quaternion(&[3], -1, -1, 5).validate(), Err(Error::UnsupportedSpec(_))));
        assert!(matches!(OrderSpec::from_toml("kind = \"nonsense\"\n"), Err(Error::UnsupportedSpec(_))));
    }

    #[test]
    fn generic_tables_roundtrip() {
        // ℤ_(3) itself, written out by hand
        let text = "kind = \"generic\"\nprimes = [3]\nconstants = [[[1]]]\nunit = [1]\nsigma = [[1]]\nu = [1]\n";
        let spec = OrderSpec::from_toml(text).unwrap();
        let r = spec.build().unwrap();
        assert_eq!(r.dim(), 1);
        assert_eq!(spec.form(&r, Some(2)).unwrap().rank(), 2);
    }
}
