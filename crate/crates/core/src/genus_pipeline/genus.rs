//! Genus size from Δ-image certificates, and the residue-field genus test.

use std::sync::Arc;

use serde::Serialize;

use super::spec::{OrderKind, OrderSpec};
use super::structure::{hereditary_tiled_check, idempotent_condition_at, rational_factorization, second_kind_check, SecondKindInput};
use crate::arithmetic::{self, Place};
use crate::error::{Error, Result};
use crate::isometry_engine::all_reflections;
use crate::isometry_engine::dickson::gf2_span;
use crate::quadratic_space::classify::{find_isometry, DEFAULT_BUDGET};
use crate::quadratic_space::forms::herm_gram;
use crate::quadratic_space::{is_isometry, is_unimodular, quad_equal, scalar_extend_into, AlgMatrix, QuadClass};
use crate::ring_core::{BaseRing, RingHom};
use crate::unitary_algebra::factor::component_splits_at;
use crate::unitary_algebra::{bar_construction, reduce_unitary, semisimple_factorization, Classification, UnitaryRing};

pub const RULE_DIVISION: &str = "R-division";
pub const RULE_LOCAL_REFLECTIONS: &str = "R-local-reflections";
pub const RULE_BRUTE_RESIDUE: &str = "R-brute-residue";
pub const RULE_DECLARED: &str = "R-declared";
pub const RULE_HEREDITARY: &str = "R-hereditary";
pub const RULE_IDEMPOTENTS: &str = "R-idempotents";
pub const RULE_SECOND_KIND: &str = "R-second-kind";

/// One simple factor of A_{K_p}, obtained from a factor of A_F.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalComponent {
    pub prime: u64,
    pub component: usize,
    pub deg: usize,
    pub classification: String,
    pub splits: Option<bool>,
    pub provenance: String,
    pub in_i: bool,
}

/// A subgroup of (ℤ/2)^𝓘 claimed as Δ(O([f_T])) for T = F (place 0) or S_p.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeltaImageCertificate {
    pub place: u64,
    pub rule: String,
    /// Generators over all coordinates of 𝓘.
    pub image: Vec<Vec<u8>>,
    /// False when the generators only span a subgroup of the image.
    pub exact: bool,
    pub premises: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GenusReport {
    pub spec: String,
    pub name: Option<String>,
    pub primes: Vec<u64>,
    pub rank: usize,
    /// Coordinates of 𝓘 as "p/component".
    pub i_set: Vec<String>,
    pub components: Vec<LocalComponent>,
    pub certificates: Vec<DeltaImageCertificate>,
    pub image_size: u64,
    /// Exact genus size when every needed certificate is exact.
    pub size: Option<u64>,
    /// The size always divides this.
    pub divides: u64,
    pub rule_trace: Vec<String>,
    pub module_note: String,
}

impl GenusReport {
    pub fn i_size(&self) -> usize {
        self.i_set.len()
    }
}

struct Coord {
    prime: u64,
    deg: usize,
}

fn unit_vectors_at(coords: &[Coord], p: u64) -> Vec<Vec<u8>> {
    (0..coords.len())
        .filter(|&k| coords[k].prime == p)
        .map(|k| (0..coords.len()).map(|j| u8::from(j == k)).collect())
        .collect()
}

/// Δ-values of reflections: deg mod 2 on the selected coordinates.
fn deg_vector(coords: &[Coord], at: Option<u64>) -> Vec<u8> {
    coords.iter().map(|c| if at.is_none_or(|p| p == c.prime) { (c.deg % 2) as u8 } else { 0 }).collect()
}

fn embed_declared(coords: &[Coord], place: u64, local: &[Vec<u8>]) -> Result<Vec<Vec<u8>>> {
    let slots: Vec<usize> = (0..coords.len()).filter(|&k| place == 0 || coords[k].prime == place).collect();
    local
        .iter()
        .map(|v| {
            if v.len() != slots.len() || v.iter().any(|&b| b > 1) {
                return Err(Error::UnsupportedSpec(format!(
                    "declared image at {place} needs bit vectors of length {}",
                    slots.len()
                )));
            }
            let mut full = vec![0u8; coords.len()];
            for (b, &k) in v.iter().zip(&slots) {
                full[k] = *b;
            }
            Ok(full)
        })
        .collect()
}

pub fn genus_size(spec: &OrderSpec, q: &QuadClass) -> Result<GenusReport> {
    genus_size_with_budget(spec, q, DEFAULT_BUDGET)
}

pub fn genus_size_with_budget(spec: &OrderSpec, q: &QuadClass, budget: u64) -> Result<GenusReport> {
    let ring = spec.build()?;
    if q.algebra().dim() != ring.dim() || q.parent().base() != ring.base() {
        return Err(Error::UnsupportedSpec("form does not live over the order of the spec".into()));
    }
    if !is_unimodular(q)? {
        return Err(Error::HypothesisViolated("form is not unimodular".into()));
    }
    let primes = spec.primes().to_vec();
    let mut trace = Vec::new();
    let (_af, fac) = rational_factorization(&ring)?;
    trace.push(format!("A_F splits into {} simple factor(s)", fac.components.len()));

    let mut components = Vec::new();
    let mut coords = Vec::new();
    for &p in &primes {
        for c in &fac.components {
            let (classification, splits, provenance) = match c.classification {
                Classification::SecondKind => ("second-kind", None, "involution moves the center".to_string()),
                Classification::NotOrthogonal => ("not-orthogonal", None, "dim Λ over the center is not n(n-1)/2".into()),
                _ => {
                    if c.center_dimension != 1 {
                        return Err(Error::UnsupportedSpec(format!(
                            "first-kind factor with a center of degree {}",
                            c.center_dimension
                        )));
                    }
                    let s = component_splits_at(c, Some(Place::Prime(p)))?.ok_or(Error::SplitUndecidable)?;
                    let how = if c.deg == 1 { "commutative factor".to_string() } else { format!("Hilbert symbol at {p}") };
                    (if s { "split-orthogonal" } else { "orthogonal-non-split" }, Some(s), how)
                }
            };
            let in_i = q.rank() > 0 && splits == Some(true);
            if in_i {
                coords.push(Coord { prime: p, deg: c.deg });
            }
            components.push(LocalComponent {
                prime: p,
                component: c.index,
                deg: c.deg,
                classification: classification.into(),
                splits,
                provenance,
                in_i,
            });
        }
    }
    let i_set: Vec<String> = components.iter().filter(|c| c.in_i).map(|c| format!("{}/{}", c.prime, c.component)).collect();
    trace.push(format!("|I| = {}", coords.len()));

    if let OrderKind::Generic(g) = &spec.kind {
        if let Some(gal) = &g.galois {
            let input = SecondKindInput::Galois { primes: &primes, a: gal.a.to_rational()?, b: gal.b.to_rational()? };
            if second_kind_check(&input)? {
                trace.push(format!("{RULE_SECOND_KIND}: a^2 + 4b is a unit, so I is empty"));
                if !coords.is_empty() {
                    return Err(Error::Invalid("second-kind criterion holds but I is not empty".into()));
                }
            }
        }
    }

    let n = coords.len();
    let mut certificates = Vec::new();
    let mut exact_places = 0usize;
    if n > 0 {
        // place 0
        let declared0 = spec.declared.iter().find(|d| d.place == 0);
        if let Some(d) = declared0 {
            certificates.push(DeltaImageCertificate {
                place: 0,
                rule: RULE_DECLARED.into(),
                image: embed_declared(&coords, 0, &d.image)?,
                exact: true,
                premises: vec![format!("declared: {}", d.provenance)],
            });
        } else if let Some(premises) = division_premises(&fac)? {
            certificates.push(DeltaImageCertificate {
                place: 0,
                rule: RULE_DIVISION.into(),
                image: vec![deg_vector(&coords, None)],
                exact: true,
                premises,
            });
        } else {
            trace.push("place 0: no rule applies".into());
        }
        for &p in &primes {
            if let Some(c) = place_certificate(spec, &ring, &fac, q, p, &coords, budget, &mut trace)? {
                certificates.push(c);
            } else {
                trace.push(format!("place {p}: no rule applies"));
            }
        }
        exact_places = certificates.iter().filter(|c| c.exact).count();
    }

    let gens: Vec<Vec<u8>> = certificates.iter().flat_map(|c| c.image.iter().cloned()).collect();
    let span = gf2_span(&gens, n).len() as u64;
    let full = 1u64 << n;
    let all_exact = exact_places == primes.len() + 1;
    let size = if n == 0 || span == full || all_exact { Some(full / span) } else { None };
    match size {
        Some(s) => trace.push(format!("size = 2^{n} / {span} = {s}")),
        None => trace.push(format!("undecided: size divides 2^{n} / {span} = {}", full / span)),
    }
    Ok(GenusReport {
        spec: spec.kind_name().into(),
        name: spec.name.clone(),
        primes,
        rank: q.rank(),
        i_set,
        components,
        certificates,
        image_size: span,
        size,
        divides: full / span,
        rule_trace: trace,
        module_note: "every member of the genus has underlying module P' ≅ P".into(),
    })
}

/// Premises of the division rule when A_F is a division algebra.
fn division_premises(fac: &crate::unitary_algebra::SimpleFactorization) -> Result<Option<Vec<String>>> {
    let [c] = fac.components.as_slice() else { return Ok(None) };
    if c.deg == 1 {
        return Ok(Some(vec![
            "A_F is a field".into(),
            "O([f_F]) is generated by reflections (local ring, residue field not F_2)".into(),
            "a reflection has Δ = deg mod 2 = 1 on every coordinate".into(),
        ]));
    }
    if c.deg == 2 && c.center_dimension == 1 && component_splits_at(c, None)? == Some(false) {
        let (a, b) = crate::unitary_algebra::factor::quaternion_parameters(&c.ring.algebra)?;
        let ram: Vec<String> = arithmetic::ramified_places(&a, &b)?.iter().map(|p| p.to_string()).collect();
        return Ok(Some(vec![
            format!("A_F ≅ ({a}, {b})_Q is a division algebra, ramified at {}", ram.join(", ")),
            "O([f_F]) is generated by reflections (A_F is local)".into(),
            "a reflection has Δ = deg A_K mod 2 = 0 on every coordinate".into(),
        ]));
    }
    Ok(None)
}

#[allow(clippy::too_many_arguments)]
fn place_certificate(
    spec: &OrderSpec,
    ring: &Arc<UnitaryRing>,
    fac: &crate::unitary_algebra::SimpleFactorization,
    q: &QuadClass,
    p: u64,
    coords: &[Coord],
    budget: u64,
    trace: &mut Vec<String>,
) -> Result<Option<DeltaImageCertificate>> {
    if !coords.iter().any(|c| c.prime == p) {
        trace.push(format!("place {p}: I has no coordinates here"));
        return Ok(Some(DeltaImageCertificate { place: p, rule: "R-empty".into(), image: vec![], exact: true, premises: vec![] }));
    }
    if let Some(d) = spec.declared.iter().find(|d| d.place == p) {
        return Ok(Some(DeltaImageCertificate {
            place: p,
            rule: RULE_DECLARED.into(),
            image: embed_declared(coords, p, &d.image)?,
            exact: true,
            premises: vec![format!("declared: {}", d.provenance)],
        }));
    }
    let mut found: Option<DeltaImageCertificate> = None;

    // hereditary
    let hereditary = match &spec.kind {
        OrderKind::Tiled { n, .. } => {
            let m = spec.pattern_at(p).unwrap_or_default();
            hereditary_tiled_check(*n, &[(p, m.clone())], &[p]).then(|| format!("pattern {m:?} at {p} is in standard hereditary form"))
        }
        OrderKind::Generic(g) if g.hereditary => Some(format!("hereditary at {p} as declared by the caller")),
        _ => None,
    };
    if let Some(why) = hereditary {
        offer(
            &mut found,
            DeltaImageCertificate {
                place: p,
                rule: RULE_HEREDITARY.into(),
                image: unit_vectors_at(coords, p),
                exact: true,
                premises: vec![why, "hereditary orders with 2 a unit have full local Δ-image".into()],
            },
            trace,
        );
    } else {
        trace.push(format!("place {p}: {RULE_HEREDITARY} does not apply"));
    }

    // enough idempotents
    let es = spec.idempotents_at(ring, p)?;
    let af_hom = RingHom::new(ring.base(), &BaseRing::Rationals)?;
    let af = ring.map_base(&af_hom)?;
    match idempotent_condition_at(ring, &af, fac, p, &es) {
        Ok(r) if r.holds => offer(
            &mut found,
            DeltaImageCertificate { place: p, rule: RULE_IDEMPOTENTS.into(), image: unit_vectors_at(coords, p), exact: true, premises: r.premises },
            trace,
        ),
        Ok(_) => trace.push(format!("place {p}: {RULE_IDEMPOTENTS} premises fail")),
        Err(e) => trace.push(format!("place {p}: {RULE_IDEMPOTENTS} not evaluated ({e})")),
    }

    // local residue ring
    let raw = reduce_unitary(ring, p)?;
    let bar = bar_construction(&raw)?;
    let bar_fac = semisimple_factorization(&bar.bar)?;
    let local = bar_fac.components.len() == 1 && bar_fac.components[0].deg == 1;
    let size = bar.bar.base().size().unwrap_or(0).pow(bar.bar.dim() as u32);
    if local && size > 2 && bar_fac.split_orthogonal.len() <= 1 && bar_fac.xi.iter().all(|&x| x == 1) {
        offer(
            &mut found,
            DeltaImageCertificate {
                place: p,
                rule: RULE_LOCAL_REFLECTIONS.into(),
                image: vec![deg_vector(coords, Some(p))],
                exact: true,
                premises: vec![
                    format!("A_S at {p} is local with residue field of size {size}"),
                    format!("radical of A/{p}A has dimension {}", bar.radical_dim),
                    "O([f_S]) is generated by reflections".into(),
                    "a reflection has Δ = deg A_K mod 2 on the coordinates at this place".into(),
                ],
            },
            trace,
        );
    } else {
        trace.push(format!("place {p}: {RULE_LOCAL_REFLECTIONS} does not apply (A_S not local)"));
    }

    if found.is_none() {
        let fp = raw.base().clone();
        let hom = RingHom::new(ring.base(), &fp)?;
        let qr = scalar_extend_into(q, &Arc::new(raw.clone()), &hom)?;
        match all_reflections(&qr, budget) {
            Ok(refl) if !refl.is_empty() => offer(
                &mut found,
                DeltaImageCertificate {
                    place: p,
                    rule: RULE_BRUTE_RESIDUE.into(),
                    image: vec![deg_vector(coords, Some(p))],
                    exact: false,
                    premises: vec![format!("{} reflections of the residue form lift to A_S", refl.len())],
                },
                trace,
            ),
            Ok(_) => trace.push(format!("place {p}: residue form has no reflections")),
            Err(e) => trace.push(format!("place {p}: {RULE_BRUTE_RESIDUE} not evaluated ({e})")),
        }
    }
    Ok(found)
}

/// Recomputes every certificate and compares it with the report.
pub fn recheck(spec: &OrderSpec, q: &QuadClass, report: &GenusReport) -> Result<bool> {
    let again = genus_size(spec, q)?;
    Ok(again.certificates == report.certificates && again.size == report.size && again.i_set == report.i_set)
}

fn offer(found: &mut Option<DeltaImageCertificate>, c: DeltaImageCertificate, trace: &mut Vec<String>) {
    let verb = if found.is_none() { "applies" } else { "also applies" };
    trace.push(format!("place {}: {} {verb}", c.place, c.rule));
    if found.is_none() {
        *found = Some(c);
    }
}

/// Outcome of comparing two forms over every residue field and over ℚ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "reason", rename_all = "kebab-case")]
pub enum GenusVerdict {
    Equal,
    Different(String),
    Undecided(String),
}

/// Same genus, decided by isometry over each F_p and over ℚ.
pub fn residue_genus_equal(q: &QuadClass, q2: &QuadClass, witness: Option<&AlgMatrix>, budget: u64) -> Result<GenusVerdict> {
    let ring = q.parent();
    let BaseRing::Localized(primes) = ring.base() else {
        return Err(Error::UnsupportedRing(format!("{} is not a localization of Z", ring.base().name())));
    };
    if q.rank() != q2.rank() {
        return Ok(GenusVerdict::Different("ranks differ".into()));
    }
    if quad_equal(q, q2) {
        return Ok(GenusVerdict::Equal);
    }
    if is_unimodular(q)? != is_unimodular(q2)? {
        return Ok(GenusVerdict::Different("unimodularity differs".into()));
    }
    for &p in primes {
        let raw = Arc::new(reduce_unitary(ring, p)?);
        let hom = RingHom::new(ring.base(), raw.base())?;
        let a = scalar_extend_into(q, &raw, &hom)?;
        let b = scalar_extend_into(q2, &raw, &hom)?;
        if find_isometry(&a, &b, budget)?.is_none() {
            return Ok(GenusVerdict::Different(format!("not isometric over F_{p}")));
        }
    }
    if let Some(w) = witness {
        return Ok(if is_isometry(w, q2, q).unwrap_or(false) || is_isometry(w, q, q2).unwrap_or(false) {
            GenusVerdict::Equal
        } else {
            GenusVerdict::Undecided("witness is not an isometry; undecided at place 0".into())
        });
    }
    if ring.dim() != 1 || !ring.algebra.is_commutative() || ring.sig(&ring.algebra.one()) != ring.algebra.one() {
        return Ok(GenusVerdict::Undecided("undecided at place 0".into()));
    }
    if ring.u != ring.algebra.one() {
        return Ok(GenusVerdict::Undecided("undecided at place 0 (u ≠ 1)".into()));
    }
    let to_rat = |g: &AlgMatrix| -> Vec<Vec<num_rational::BigRational>> {
        let h = herm_gram(ring, g);
        (0..h.rows).map(|s| (0..h.cols).map(|t| ring.base().to_rational(&h.get(s, t)[0]).unwrap()).collect()).collect()
    };
    if arithmetic::rational_forms_isometric(&to_rat(q.gram()), &to_rat(q2.gram()))? {
        Ok(GenusVerdict::Equal)
    } else {
        Ok(GenusVerdict::Different("not isometric over Q".into()))
    }
}
