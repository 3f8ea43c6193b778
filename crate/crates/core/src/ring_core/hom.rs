use super::base::{BaseRing, RingElem};
use crate::error::{Error, Result};

/// A canonical ring homomorphism between two supported base rings, prepared
/// once and applied elementwise.
#[derive(Clone, Debug)]
pub struct RingHom {
    src: BaseRing,
    dst: BaseRing,
    kind: HomKind,
}

#[derive(Clone, Debug)]
enum HomKind {
    Identity,
    /// ℚ or a localization into anything accepting rationals.
    FromRational,
    /// ℤ/p^n → ℤ/p^m (m ≤ n) or ℤ/p^n → F_p^e.
    Reduce { modulus: u64 },
    /// F_p^a → F_p^b: images of the generator's powers.
    FieldEmbed { powers: Vec<u64> },
    Componentwise(Vec<RingHom>),
}

impl RingHom {
    pub fn new(src: &BaseRing, dst: &BaseRing) -> Result<Self> {
        let unsupported = || {
            Error::UnsupportedRing(format!("no canonical homomorphism {} -> {}", src.name(), dst.name()))
        };
        let kind = if src == dst {
            HomKind::Identity
        } else {
            match (src, dst) {
                (_, BaseRing::Product(parts)) => {
                    HomKind::Componentwise(parts.iter().map(|d| RingHom::new(src, d)).collect::<Result<_>>()?)
                }
                (BaseRing::Rationals | BaseRing::Localized(_), _) => {
                    if let (BaseRing::Localized(a), BaseRing::Localized(b)) = (src, dst) {
                        if !b.iter().all(|p| a.contains(p)) {
                            return Err(unsupported());
                        }
                    }
                    HomKind::FromRational
                }
                (BaseRing::Truncated { p, n, .. }, BaseRing::Truncated { p: q, n: m, modulus }) => {
                    if p != q || m > n {
                        return Err(unsupported());
                    }
                    HomKind::Reduce { modulus: *modulus }
                }
                (BaseRing::Truncated { p, .. }, BaseRing::Finite(f)) => {
                    if *p != f.p() {
                        return Err(unsupported());
                    }
                    HomKind::Reduce { modulus: *p }
                }
                (BaseRing::Finite(a), BaseRing::Finite(b)) => {
                    if a.p() != b.p() || b.degree() % a.degree() != 0 {
                        return Err(unsupported());
                    }
                    if a.degree() == 1 {
                        HomKind::Reduce { modulus: a.p() }
                    } else {
                        // send the generator to the smallest root of its minimal polynomial
                        let m = a.modulus();
                        let root = (0..b.order())
                            .find(|&x| {
                                let mut acc = 0u64;
                                for &c in m.iter().rev() {
                                    acc = b.add(b.mul(acc, x), c);
                                }
                                acc == 0
                            })
                            .ok_or_else(unsupported)?;
                        let mut powers = Vec::new();
                        let mut cur = 1u64;
                        for _ in 0..a.degree() {
                            powers.push(cur);
                            cur = b.mul(cur, root);
                        }
                        HomKind::FieldEmbed { powers }
                    }
                }
                _ => return Err(unsupported()),
            }
        };
        Ok(RingHom { src: src.clone(), dst: dst.clone(), kind })
    }

    pub fn source(&self) -> &BaseRing {
        &self.src
    }
    pub fn target(&self) -> &BaseRing {
        &self.dst
    }

    pub fn apply(&self, x: &RingElem) -> Result<RingElem> {
        match &self.kind {
            HomKind::Identity => Ok(x.clone()),
            HomKind::FromRational => match x {
                RingElem::Rat(r) => self.dst.from_rational(r),
                _ => Err(Error::Invalid("expected a rational element".into())),
            },
            HomKind::Reduce { modulus } => match x {
                RingElem::Int(a) => Ok(RingElem::Int(a % modulus)),
                _ => Err(Error::Invalid("expected a residue".into())),
            },
            HomKind::FieldEmbed { powers } => match (&self.src, &self.dst, x) {
                (BaseRing::Finite(a), BaseRing::Finite(b), RingElem::Int(v)) => {
                    let mut acc = 0u64;
                    for (d, &pw) in a.digits(*v).iter().zip(powers) {
                        acc = b.add(acc, b.mul(*d, pw));
                    }
                    Ok(RingElem::Int(acc))
                }
                _ => Err(Error::Invalid("expected a field element".into())),
            },
            HomKind::Componentwise(homs) => {
                Ok(RingElem::Tuple(homs.iter().map(|h| h.apply(x)).collect::<Result<_>>()?))
            }
        }
    }

    pub fn apply_all(&self, xs: &[RingElem]) -> Result<Vec<RingElem>> {
        xs.iter().map(|x| self.apply(x)).collect()
    }
}

/// Image of `x` under the canonical homomorphism `src → dst`.
pub fn ring_hom(src: &BaseRing, dst: &BaseRing, x: &RingElem) -> Result<RingElem> {
    RingHom::new(src, dst)?.apply(x)
}
