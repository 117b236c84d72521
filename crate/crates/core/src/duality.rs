//! The finite dual category of labelled sets and the functors `Σ_L`, `Π_L`.

use serde::{Deserialize, Serialize};

use crate::algebra::{for_each_tuple, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::hom::{enumerate_homomorphisms, Homomorphism};
use crate::variety::{SemiprimalBase, VarietyAlgebra};

/// A finite set whose points carry subuniverse ids of the base.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StoneLObject {
    pub v: Vec<usize>,
}

impl StoneLObject {
    pub fn new(base: &SemiprimalBase, v: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = v.iter().find(|&&id| id >= base.subs.len()) {
            return Err(Error::InvalidInput(format!(
                "label {bad} is not a subuniverse id (base has {})",
                base.subs.len()
            )));
        }
        Ok(StoneLObject { v })
    }

    pub fn points(&self) -> usize {
        self.v.len()
    }

    pub fn to_json(&self, base_name: &str) -> StoneLJson {
        StoneLJson {
            base: base_name.into(),
            points: self.points(),
            v: self.v.clone(),
        }
    }

    pub fn from_json(base: &SemiprimalBase, json: &StoneLJson) -> Result<Self> {
        if json.points != json.v.len() {
            return Err(Error::InvalidInput(format!(
                "points: {} declared but v has {} labels",
                json.points,
                json.v.len()
            )));
        }
        Self::new(base, json.v.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoneLJson {
    pub base: String,
    pub points: usize,
    pub v: Vec<usize>,
}

/// `m : (X, v) → (Y, w)` with `w(m(x)) ⊆ v(x)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StoneLMorphism {
    pub map: Vec<usize>,
}

impl StoneLMorphism {
    pub fn identity(n: usize) -> Self {
        StoneLMorphism { map: (0..n).collect() }
    }

    pub fn is_valid(&self, base: &SemiprimalBase, dom: &StoneLObject, cod: &StoneLObject) -> bool {
        self.map.len() == dom.points()
            && self.map.iter().enumerate().all(|(x, &y)| {
                y < cod.points() && base.subs[cod.v[y]].is_subset(&base.subs[dom.v[x]])
            })
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &StoneLMorphism) -> StoneLMorphism {
        StoneLMorphism {
            map: self.map.iter().map(|&y| other.map[y]).collect(),
        }
    }
}

/// Every morphism `dom → cod`, lexicographic.
pub fn enumerate_stonel_morphisms(base: &SemiprimalBase, dom: &StoneLObject, cod: &StoneLObject) -> Vec<StoneLMorphism> {
    let mut out = Vec::new();
    for_each_tuple(cod.points(), dom.points(), |m| {
        let mor = StoneLMorphism { map: m.to_vec() };
        if mor.is_valid(base, dom, cod) {
            out.push(mor);
        }
    });
    out
}

/// `Σ_L(A)`: the homomorphisms into `L`, labelled by their images.
#[derive(Clone, Debug)]
pub struct SigmaResult {
    pub object: StoneLObject,
    pub homs: Vec<Homomorphism>,
}

pub fn sigma_obj(a: &FiniteAlgebra, base: &SemiprimalBase) -> Result<SigmaResult> {
    let homs = enumerate_homomorphisms(a, &base.algebra)?;
    let v = homs
        .iter()
        .map(|h| {
            base.sub_id(&h.image(base.size()))
                .ok_or_else(|| Error::InvalidInput("homomorphic image is not a subuniverse".into()))
        })
        .collect::<Result<_>>()?;
    Ok(SigmaResult {
        object: StoneLObject { v },
        homs,
    })
}

/// `Σ_L f : Σ(A₂) → Σ(A₁)`, `h ↦ h ∘ f`.
pub fn sigma_mor(
    base: &SemiprimalBase,
    f: &Homomorphism,
    s1: &SigmaResult,
    s2: &SigmaResult,
) -> Result<StoneLMorphism> {
    let map = s2
        .homs
        .iter()
        .map(|h| {
            let composite = f.then(h);
            s1.homs
                .binary_search(&composite)
                .map_err(|_| Error::RoundTripFailure("h ∘ f is missing from Σ(A₁)".into()))
        })
        .collect::<Result<_>>()?;
    let m = StoneLMorphism { map };
    if !m.is_valid(base, &s2.object, &s1.object) {
        return Err(Error::RoundTripFailure("Σ f violates the label condition".into()));
    }
    Ok(m)
}

/// `Π_L(X, v) = ∏ v(x)`.
pub fn pi_obj(x: &StoneLObject, base: &SemiprimalBase) -> Result<VarietyAlgebra> {
    VarietyAlgebra::full_product(base, &x.v)
}

/// `Π_L m : Π(Y) → Π(X)`, `g ↦ g ∘ m`.
pub fn pi_mor(m: &StoneLMorphism, px: &VarietyAlgebra, py: &VarietyAlgebra) -> Result<Homomorphism> {
    let map = (0..py.size())
        .map(|i| {
            let g = py.tuple(i);
            let gm: Vec<usize> = m.map.iter().map(|&y| g[y]).collect();
            px.element_of(&gm)
                .ok_or_else(|| Error::RoundTripFailure("g ∘ m leaves Π(X)".into()))
        })
        .collect::<Result<_>>()?;
    let h = Homomorphism::new(map);
    if !h.verify(&py.algebra, &px.algebra) {
        return Err(Error::RoundTripFailure("Π m is not a homomorphism".into()));
    }
    Ok(h)
}

/// Explicit isomorphism `A → Π_L Σ_L(A)`, `a ↦ (h(a))_h`.
pub fn roundtrip_algebra(a: &FiniteAlgebra, base: &SemiprimalBase) -> Result<Homomorphism> {
    let sigma = sigma_obj(a, base)?;
    let pi = pi_obj(&sigma.object, base)?;
    let map = (0..a.size())
        .map(|x| {
            let t: Vec<usize> = sigma.homs.iter().map(|h| h.apply(x)).collect();
            pi.element_of(&t)
                .ok_or_else(|| Error::RoundTripFailure("evaluation leaves Π Σ (A)".into()))
        })
        .collect::<Result<_>>()?;
    let iso = Homomorphism::new(map);
    if a.size() != pi.size() || !iso.is_injective(pi.size()) || !iso.verify(a, &pi.algebra) {
        return Err(Error::RoundTripFailure(format!(
            "`{}` ({} elements) is not isomorphic to Π Σ of it ({} elements)",
            a.name,
            a.size(),
            pi.size()
        )));
    }
    Ok(iso)
}

/// Explicit isomorphism `X → Σ_L Π_L(X)`, `x ↦ pr_x`, as indices into the hom list.
pub fn roundtrip_space(x: &StoneLObject, base: &SemiprimalBase) -> Result<StoneLMorphism> {
    let pi = pi_obj(x, base)?;
    let sigma = sigma_obj(&pi.algebra, base)?;
    let map = (0..x.points())
        .map(|p| {
            let pr = Homomorphism::new((0..pi.size()).map(|i| pi.tuple(i)[p]).collect());
            sigma
                .homs
                .binary_search(&pr)
                .map_err(|_| Error::RoundTripFailure(format!("projection {p} is not a point of Σ Π X")))
        })
        .collect::<Result<Vec<usize>>>()?;
    let mut sorted = map.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != sigma.homs.len() || sorted.len() != x.points() {
        return Err(Error::RoundTripFailure(format!(
            "{} points but {} homomorphisms",
            x.points(),
            sigma.homs.len()
        )));
    }
    if map.iter().enumerate().any(|(p, &h)| sigma.object.v[h] != x.v[p]) {
        return Err(Error::RoundTripFailure("labels differ after the round trip".into()));
    }
    Ok(StoneLMorphism { map })
}

/// The functors between plain finite sets and labelled sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StoneLFunctor {
    /// Forget the labels.
    U,
    /// Label every point with `L`.
    Vtop,
    /// Label every point with the smallest subuniverse.
    Vbot,
    /// Points labelled with the smallest subuniverse.
    C,
    /// Label every point with `S`.
    VS(usize),
    /// Points whose label is contained in `S`.
    CS(usize),
}

/// Result of a functor: either a labelled set, or a plain set given by its size
/// together with the surviving point indices for the subset functors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum FunctorOutput {
    Plain { points: usize, kept: Vec<usize> },
    Labelled(StoneLObject),
}

/// Applies a functor to a labelled set (`U`, `C`, `C_S`) or to a plain set of
/// `x.points()` points whose labels are ignored (`V⊤`, `V⊥`, `V_S`).
pub fn stonel_functors(base: &SemiprimalBase, x: &StoneLObject, which: StoneLFunctor) -> Result<FunctorOutput> {
    let n = x.points();
    let check = |s: usize| {
        if s < base.subs.len() {
            Ok(s)
        } else {
            Err(Error::InvalidInput(format!("unknown subuniverse id {s}")))
        }
    };
    let subset = |keep: &dyn Fn(usize) -> bool| {
        let kept: Vec<usize> = (0..n).filter(|&p| keep(x.v[p])).collect();
        FunctorOutput::Plain {
            points: kept.len(),
            kept,
        }
    };
    Ok(match which {
        StoneLFunctor::U => FunctorOutput::Plain {
            points: n,
            kept: (0..n).collect(),
        },
        StoneLFunctor::Vtop => FunctorOutput::Labelled(StoneLObject {
            v: vec![base.full_sub(); n],
        }),
        StoneLFunctor::Vbot => FunctorOutput::Labelled(StoneLObject {
            v: vec![base.smallest_sub(); n],
        }),
        StoneLFunctor::VS(s) => FunctorOutput::Labelled(StoneLObject { v: vec![check(s)?; n] }),
        StoneLFunctor::C => subset(&|id| id == base.smallest_sub()),
        StoneLFunctor::CS(s) => {
            let s = check(s)?;
            subset(&|id| base.subs[id].is_subset(&base.subs[s]))
        }
    })
}

/// Number of maps between plain sets of the given sizes.
pub fn set_hom_count(from: usize, to: usize) -> u128 {
    crate::algebra::checked_pow(to, from)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain_with_t(n: usize) -> FiniteAlgebra {
        let mut ops = vec![
            FiniteAlgebra::op_from_fn("meet", n, 2, |t| t[0].min(t[1])),
            FiniteAlgebra::op_from_fn("join", n, 2, |t| t[0].max(t[1])),
            FiniteAlgebra::op_from_fn("zero", n, 0, |_| 0),
            FiniteAlgebra::op_from_fn("one", n, 0, |_| n - 1),
        ];
        for l in 0..n {
            ops.push(FiniteAlgebra::op_from_fn(format!("T_{l}"), n, 1, move |t| {
                if t[0] == l {
                    n - 1
                } else {
                    0
                }
            }));
        }
        FiniteAlgebra::new("t", n, ops).unwrap()
    }

    #[test]
    fn round_trips_on_small_products() {
        let base = SemiprimalBase::new(chain_with_t(3)).unwrap();
        assert_eq!(base.subs.len(), 2);
        for v in [vec![], vec![0], vec![1, 0], vec![1, 1, 0]] {
            let x = StoneLObject::new(&base, v).unwrap();
            let back = roundtrip_space(&x, &base).unwrap();
            assert_eq!(back.map.len(), x.points());
            let pi = pi_obj(&x, &base).unwrap();
            roundtrip_algebra(&pi.algebra, &base).unwrap();
        }
    }

    #[test]
    fn label_condition_and_functors() {
        let base = SemiprimalBase::new(chain_with_t(3)).unwrap();
        let x = StoneLObject::new(&base, vec![0, 1]).unwrap();
        let y = StoneLObject::new(&base, vec![1]).unwrap();
        // Mapping the small-label point onto a full-label point is forbidden.
        assert_eq!(enumerate_stonel_morphisms(&base, &x, &y).len(), 0);
        assert_eq!(enumerate_stonel_morphisms(&base, &y, &x).len(), 2);
        assert_eq!(
            stonel_functors(&base, &x, StoneLFunctor::C).unwrap(),
            FunctorOutput::Plain { points: 1, kept: vec![0] }
        );
        assert!(stonel_functors(&base, &x, StoneLFunctor::VS(7)).is_err());
    }
}
