//! Members of the variety generated by a semi-primal lattice-based algebra,
//! the Boolean skeleton and Boolean power functors, and their adjunctions.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{for_each_tuple, tuple_index, FiniteAlgebra};
use crate::boolean::{enumerate_boolean_homs, BooleanHom, FiniteBooleanAlgebra};
use crate::congruence::{congruence_generated, quotient};
use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::hom::{enumerate_homomorphisms, Homomorphism};
use crate::lattice::{detect_lattice, LatticeReduct};
use crate::primality::{is_semi_primal, Route};
use crate::product::product_size;
use crate::subuniverse::{enumerate_subuniverses, induced_algebra, SubUniverse};

/// A semi-primal algebra `L` with a bounded-lattice reduct, certified once.
#[derive(Clone, Debug)]
pub struct SemiprimalBase {
    pub algebra: FiniteAlgebra,
    pub lattice: LatticeReduct,
    /// Subuniverses in canonical order; ids used everywhere index into this list.
    pub subs: Vec<SubUniverse>,
    pub cap: usize,
}

impl SemiprimalBase {
    pub fn new(algebra: FiniteAlgebra) -> Result<Self> {
        Self::with_cap(algebra, crate::algebra::DEFAULT_CAP)
    }

    pub fn with_cap(algebra: FiniteAlgebra, cap: usize) -> Result<Self> {
        let lattice = detect_lattice(&algebra, None)?;
        let verdict = match is_semi_primal(&algebra, &lattice, Route::TRoute) {
            Err(Error::BoundsNotInSubuniverses) => {
                return Err(Error::NotSemiPrimal(format!(
                    "`{}`: bounds are missing from some subuniverse",
                    algebra.name
                )))
            }
            other => other?,
        };
        if !verdict.level.is_semi_primal() {
            return Err(Error::NotSemiPrimal(format!("`{}` has level {}", algebra.name, verdict.level)));
        }
        let subs = enumerate_subuniverses(&algebra);
        Ok(SemiprimalBase {
            algebra,
            lattice,
            subs,
            cap,
        })
    }

    pub fn size(&self) -> usize {
        self.algebra.size()
    }

    pub fn sub_id(&self, set: &ElemSet) -> Option<usize> {
        self.subs.iter().position(|s| s.set() == set)
    }

    /// Id of the subuniverse generated by the bounds.
    pub fn smallest_sub(&self) -> usize {
        0
    }

    pub fn full_sub(&self) -> usize {
        self.subs.len() - 1
    }

    pub fn t(&self, l: usize, x: usize) -> usize {
        if x == l {
            self.lattice.top
        } else {
            self.lattice.bot
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Carrier {
    Full,
    Tuples,
}

/// A member of `V(L)` as an explicit set of tuples inside `∏ S_i`, with its
/// realized operation tables. Element `i` of `algebra` is `tuples[i]`.
#[derive(Clone, Debug)]
pub struct VarietyAlgebra {
    pub factors: Vec<usize>,
    pub carrier: Carrier,
    pub algebra: FiniteAlgebra,
    tuples: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl VarietyAlgebra {
    /// `∏ S_i` over the given subuniverse ids, tuples in lexicographic order.
    pub fn full_product(base: &SemiprimalBase, factors: &[usize]) -> Result<Self> {
        let lists: Vec<Vec<usize>> = factors
            .iter()
            .map(|&id| {
                base.subs
                    .get(id)
                    .map(|s| s.elements())
                    .ok_or_else(|| Error::InvalidInput(format!("unknown subuniverse id {id}")))
            })
            .collect::<Result<_>>()?;
        let radices: Vec<usize> = lists.iter().map(Vec::len).collect();
        let size = product_size(&radices, base.cap)?;
        let mut tuples = Vec::with_capacity(size);
        for code in 0..size {
            let digits = crate::product::decode(&radices, code);
            tuples.push(digits.iter().zip(&lists).map(|(&d, l)| l[d]).collect());
        }
        Self::realize(base, factors.to_vec(), tuples, Carrier::Full)
    }

    /// A subalgebra of `∏ S_i` given by its tuples; order is normalized.
    pub fn from_tuples(base: &SemiprimalBase, factors: &[usize], mut tuples: Vec<Vec<usize>>) -> Result<Self> {
        for t in &tuples {
            if t.len() != factors.len() {
                return Err(Error::InvalidInput("tuple length differs from factor count".into()));
            }
            for (x, &id) in t.iter().zip(factors) {
                let sub = base
                    .subs
                    .get(id)
                    .ok_or_else(|| Error::InvalidInput(format!("unknown subuniverse id {id}")))?;
                if !sub.contains(*x) {
                    return Err(Error::InvalidInput(format!("entry {x} outside factor {id}")));
                }
            }
        }
        tuples.sort();
        tuples.dedup();
        if tuples.is_empty() {
            return Err(Error::InvalidInput("empty carrier".into()));
        }
        let full: usize = factors.iter().map(|&id| base.subs[id].len()).product();
        let carrier = if tuples.len() == full { Carrier::Full } else { Carrier::Tuples };
        Self::realize(base, factors.to_vec(), tuples, carrier)
    }

    fn realize(base: &SemiprimalBase, factors: Vec<usize>, tuples: Vec<Vec<usize>>, carrier: Carrier) -> Result<Self> {
        let index: HashMap<Vec<usize>, usize> = tuples.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        let n = tuples.len();
        let l = &base.algebra;
        let mut ops = Vec::with_capacity(l.ops().len());
        let mut scratch = vec![0; factors.len()];
        let mut args = Vec::new();
        for (op_i, op) in l.ops().iter().enumerate() {
            let entries = crate::algebra::checked_pow(n, op.arity);
            if entries > crate::algebra::TABLE_ENTRY_CAP {
                return Err(Error::SizeCapExceeded {
                    requested: entries,
                    cap: crate::algebra::TABLE_ENTRY_CAP as usize,
                });
            }
            let mut table = Vec::with_capacity(entries as usize);
            let mut missing = None;
            for_each_tuple(n, op.arity, |t| {
                for (c, slot) in scratch.iter_mut().enumerate() {
                    args.clear();
                    args.extend(t.iter().map(|&e| tuples[e][c]));
                    *slot = l.apply(op_i, &args);
                }
                match index.get(&scratch) {
                    Some(&v) => table.push(v),
                    None => {
                        missing.get_or_insert_with(|| scratch.clone());
                        table.push(0);
                    }
                }
            });
            if let Some(t) = missing {
                return Err(Error::InvalidInput(format!(
                    "carrier not closed under `{}`: {:?} is missing",
                    op.name, t
                )));
            }
            ops.push(crate::algebra::Operation {
                name: op.name.clone(),
                arity: op.arity,
                table,
            });
        }
        let name = format!(
            "{}[{}]",
            l.name,
            factors.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(",")
        );
        let mut algebra = FiniteAlgebra::new(name, n, ops)?;
        algebra.lattice_hint = Some(crate::algebra::LatticeHint {
            meet: base.lattice.meet_op.clone(),
            join: base.lattice.join_op.clone(),
        });
        Ok(VarietyAlgebra {
            factors,
            carrier,
            algebra,
            tuples,
            index,
        })
    }

    pub fn size(&self) -> usize {
        self.tuples.len()
    }

    pub fn tuple(&self, i: usize) -> &[usize] {
        &self.tuples[i]
    }

    pub fn tuples(&self) -> &[Vec<usize>] {
        &self.tuples
    }

    pub fn element_of(&self, tuple: &[usize]) -> Option<usize> {
        self.index.get(tuple).copied()
    }

    /// Applies a unary map of `L` in every coordinate.
    pub fn map_componentwise(&self, i: usize, f: impl Fn(usize) -> usize) -> Option<usize> {
        let t: Vec<usize> = self.tuples[i].iter().map(|&x| f(x)).collect();
        self.element_of(&t)
    }

    pub fn to_json(&self, base_name: &str) -> VarietyJson {
        VarietyJson {
            base: base_name.to_string(),
            factors: self.factors.clone(),
            carrier: match self.carrier {
                Carrier::Full => CarrierJson::Tag("full".into()),
                Carrier::Tuples => CarrierJson::Tuples(self.tuples.clone()),
            },
        }
    }

    pub fn from_json(base: &SemiprimalBase, json: &VarietyJson) -> Result<Self> {
        match &json.carrier {
            CarrierJson::Tag(t) if t == "full" => Self::full_product(base, &json.factors),
            CarrierJson::Tag(t) => Err(Error::InvalidInput(format!("carrier: expected \"full\" or tuples, found \"{t}\""))),
            CarrierJson::Tuples(ts) => Self::from_tuples(base, &json.factors, ts.clone()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CarrierJson {
    Tag(String),
    Tuples(Vec<Vec<usize>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarietyJson {
    pub base: String,
    pub factors: Vec<usize>,
    pub carrier: CarrierJson,
}

/// Normal form of an arbitrary algebra of the base signature via evaluation
/// into `L`: `a ↦ (h(a))_{h ∈ Hom(A, L)}`. Returns the normal form and the
/// isomorphism from `alg` onto it.
pub fn canonicalize(alg: &FiniteAlgebra, base: &SemiprimalBase) -> Result<(VarietyAlgebra, Homomorphism)> {
    let homs = enumerate_homomorphisms(alg, &base.algebra)?;
    let mut factors = Vec::with_capacity(homs.len());
    for h in &homs {
        let img = h.image(base.size());
        factors.push(base.sub_id(&img).ok_or_else(|| {
            Error::InvalidInput("homomorphic image is not a subuniverse of the base".into())
        })?);
    }
    let eval: Vec<Vec<usize>> = (0..alg.size()).map(|a| homs.iter().map(|h| h.apply(a)).collect()).collect();
    let mut sorted = eval.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != alg.size() {
        return Err(Error::NotInVariety(format!(
            "`{}`: homomorphisms into the base do not separate points",
            alg.name
        )));
    }
    let full: u128 = factors.iter().map(|&id| base.subs[id].len() as u128).product();
    if (sorted.len() as u128) != full {
        return Err(Error::NotSurjective(format!(
            "`{}`: image has {} of {} tuples",
            alg.name,
            sorted.len(),
            full
        )));
    }
    let va = VarietyAlgebra::full_product(base, &factors)?;
    let iso = Homomorphism::new(eval.iter().map(|t| va.element_of(t).expect("image is the full product")).collect());
    if !iso.verify(alg, &va.algebra) {
        return Err(Error::NotInVariety(format!("`{}`: evaluation is not a homomorphism", alg.name)));
    }
    Ok((va, iso))
}

/// The Boolean skeleton `{a : T_⊤(a) = a}` with its atom normalization.
#[derive(Clone, Debug, Serialize)]
pub struct SkeletonResult {
    pub boolean: FiniteBooleanAlgebra,
    /// `elements[m]` is the carrier element with mask `m`.
    pub elements: Vec<usize>,
    #[serde(skip)]
    mask_of: Vec<Option<u64>>,
}

impl SkeletonResult {
    pub fn mask(&self, a: usize) -> Option<u64> {
        self.mask_of[a]
    }
}

pub fn skeleton(a: &VarietyAlgebra, base: &SemiprimalBase) -> Result<SkeletonResult> {
    let top = base.lattice.top;
    let members: Vec<usize> = (0..a.size())
        .filter(|&i| a.map_componentwise(i, |x| base.t(top, x)) == Some(i))
        .collect();
    let is_top = |i: usize| -> Vec<bool> { a.tuple(i).iter().map(|&x| x == top).collect() };
    let below = |x: usize, y: usize| is_top(x).iter().zip(is_top(y)).all(|(&p, q)| !p || q);
    let zero = members.iter().copied().find(|&i| is_top(i).iter().all(|&b| !b));
    let atoms: Vec<usize> = members
        .iter()
        .copied()
        .filter(|&x| Some(x) != zero && members.iter().all(|&y| y == x || Some(y) == zero || !below(y, x)))
        .collect();
    let boolean = FiniteBooleanAlgebra::with_cap(atoms.len(), base.cap)?;
    if members.len() != boolean.size() {
        return Err(Error::BijectionFailure(format!(
            "skeleton has {} elements but {} atoms",
            members.len(),
            atoms.len()
        )));
    }
    let mut elements = vec![usize::MAX; boolean.size()];
    let mut mask_of = vec![None; a.size()];
    for &s in &members {
        let m = atoms
            .iter()
            .enumerate()
            .filter(|&(_, &at)| below(at, s))
            .fold(0u64, |acc, (i, _)| acc | 1 << i);
        if elements[m as usize] != usize::MAX {
            return Err(Error::BijectionFailure("two skeleton elements share a mask".into()));
        }
        elements[m as usize] = s;
        mask_of[s] = Some(m);
    }
    Ok(SkeletonResult {
        boolean,
        elements,
        mask_of,
    })
}

/// `M[B]`: partition-of-unity maps `ξ : M → B`, operations by the join-of-meets formula.
#[derive(Clone, Debug)]
pub struct BooleanPower {
    pub algebra: FiniteAlgebra,
    pub boolean: FiniteBooleanAlgebra,
    m_size: usize,
    xi: Vec<Vec<u64>>,
}

impl BooleanPower {
    pub fn xi(&self, i: usize) -> &[u64] {
        &self.xi[i]
    }

    /// For each atom, the unique `ℓ` whose mask contains it.
    pub fn assignment(&self, xi: &[u64]) -> Option<Vec<usize>> {
        let mut out = Vec::with_capacity(self.boolean.atoms);
        for atom in 0..self.boolean.atoms {
            let holders: Vec<usize> = (0..self.m_size).filter(|&l| xi[l] >> atom & 1 == 1).collect();
            if holders.len() != 1 {
                return None;
            }
            out.push(holders[0]);
        }
        let extra = xi.iter().any(|&m| m & !self.boolean.one() != 0);
        (!extra).then_some(out)
    }

    pub fn index_of(&self, xi: &[u64]) -> Option<usize> {
        if xi.len() != self.m_size {
            return None;
        }
        self.assignment(xi).map(|a| tuple_index(&a, self.m_size))
    }

    pub fn element_from_assignment(&self, assignment: &[usize]) -> usize {
        tuple_index(assignment, self.m_size)
    }
}

fn xi_of_assignment(m_size: usize, assignment: &[usize]) -> Vec<u64> {
    let mut xi = vec![0u64; m_size];
    for (atom, &l) in assignment.iter().enumerate() {
        xi[l] |= 1 << atom;
    }
    xi
}

pub fn boolean_power(m: &FiniteAlgebra, b: &FiniteBooleanAlgebra, cap: usize) -> Result<BooleanPower> {
    let ms = m.size();
    let size = product_size(&vec![ms; b.atoms], cap)?;
    let mut xi = Vec::with_capacity(size);
    for_each_tuple(ms, b.atoms, |a| xi.push(xi_of_assignment(ms, a)));
    let shell = BooleanPower {
        algebra: FiniteAlgebra::new("shell", 1, Vec::new())?,
        boolean: *b,
        m_size: ms,
        xi,
    };
    let mut ops = Vec::with_capacity(m.ops().len());
    for op in m.ops() {
        let entries = crate::algebra::checked_pow(size, op.arity);
        if entries > crate::algebra::TABLE_ENTRY_CAP {
            return Err(Error::SizeCapExceeded {
                requested: entries,
                cap: crate::algebra::TABLE_ENTRY_CAP as usize,
            });
        }
        let mut table = Vec::with_capacity(entries as usize);
        let mut bad = false;
        let mut out = vec![0u64; ms];
        for_each_tuple(size, op.arity, |args| {
            out.iter_mut().for_each(|o| *o = 0);
            for_each_tuple(ms, op.arity, |ls| {
                let meet = args
                    .iter()
                    .zip(ls)
                    .fold(b.one(), |acc, (&e, &l)| acc & shell.xi[e][l]);
                out[op.table[tuple_index(ls, ms)]] |= meet;
            });
            match shell.index_of(&out) {
                Some(v) => table.push(v),
                None => {
                    bad = true;
                    table.push(0);
                }
            }
        });
        if bad {
            return Err(Error::BijectionFailure(format!(
                "`{}` on the Boolean power left the partitions of unity",
                op.name
            )));
        }
        ops.push(crate::algebra::Operation {
            name: op.name.clone(),
            arity: op.arity,
            table,
        });
    }
    let mut algebra = FiniteAlgebra::new(format!("{}[2^{}]", m.name, b.atoms), size, ops)?;
    algebra.lattice_hint = m.lattice_hint.clone();
    Ok(BooleanPower { algebra, ..shell })
}

/// The skeleton of `M[B]` read off the literal `T_⊤` formula on the power:
/// `T_⊤(ξ)(ℓ) = ⋁_{T_⊤(ℓ') = ℓ} ξ(ℓ')`. Returns, for each mask `m ∈ B`, the
/// element `ξ` with `ξ(⊤) = m` fixed by `T_⊤`, after checking that these are
/// all fixed points and that meet and join agree with the mask operations.
pub fn power_skeleton(p: &BooleanPower, lattice: &LatticeReduct) -> Result<Vec<usize>> {
    let (bot, top) = (lattice.bot, lattice.top);
    let ms = p.m_size;
    let t_top = |l: usize| if l == top { top } else { bot };
    let mut by_mask = vec![usize::MAX; p.boolean.size()];
    for i in 0..p.algebra.size() {
        let xi = p.xi(i);
        let mut image = vec![0u64; ms];
        for (l, &mask) in xi.iter().enumerate() {
            image[t_top(l)] |= mask;
        }
        if image == xi {
            let m = xi[top] as usize;
            if by_mask[m] != usize::MAX {
                return Err(Error::BijectionFailure("two skeleton elements with equal top mask".into()));
            }
            by_mask[m] = i;
        }
    }
    if by_mask.contains(&usize::MAX) {
        return Err(Error::BijectionFailure("some mask has no skeleton element".into()));
    }
    let meet = p.algebra.op_index(&lattice.meet_op).expect("lattice op exists");
    let join = p.algebra.op_index(&lattice.join_op).expect("lattice op exists");
    for m1 in 0..by_mask.len() {
        for m2 in 0..by_mask.len() {
            let (x, y) = (by_mask[m1], by_mask[m2]);
            if p.algebra.apply(meet, &[x, y]) != by_mask[m1 & m2] || p.algebra.apply(join, &[x, y]) != by_mask[m1 | m2] {
                return Err(Error::BijectionFailure("skeleton operations differ from mask operations".into()));
            }
        }
    }
    Ok(by_mask)
}

/// Unit `a ↦ 𝒯_a` with `𝒯_a(ℓ) = T_ℓ(a)` into `L[𝔖(A)]`.
#[derive(Clone, Debug)]
pub struct UnitEmbedding {
    pub skeleton: SkeletonResult,
    pub power: BooleanPower,
    pub map: Homomorphism,
}

pub fn unit_xi(a: &VarietyAlgebra, base: &SemiprimalBase, skel: &SkeletonResult, i: usize) -> Result<Vec<u64>> {
    (0..base.size())
        .map(|l| {
            let t = a
                .map_componentwise(i, |x| base.t(l, x))
                .ok_or_else(|| Error::BijectionFailure("T-image outside the carrier".into()))?;
            skel.mask(t)
                .ok_or_else(|| Error::BijectionFailure("T-image outside the skeleton".into()))
        })
        .collect()
}

pub fn unit_embedding(a: &VarietyAlgebra, base: &SemiprimalBase) -> Result<UnitEmbedding> {
    let skel = skeleton(a, base)?;
    let power = boolean_power(&base.algebra, &skel.boolean, base.cap)?;
    let mut map = Vec::with_capacity(a.size());
    for i in 0..a.size() {
        let xi = unit_xi(a, base, &skel, i)?;
        map.push(
            power
                .index_of(&xi)
                .ok_or_else(|| Error::BijectionFailure("𝒯_a is not a partition of unity".into()))?,
        );
    }
    let map = Homomorphism::new(map);
    if !map.verify(&a.algebra, &power.algebra) || !map.is_injective(power.algebra.size()) {
        return Err(Error::BijectionFailure("unit is not an injective homomorphism".into()));
    }
    let target = power_skeleton(&power, &base.lattice)?;
    for (m, &s) in skel.elements.iter().enumerate() {
        if map.apply(s) != target[m] {
            return Err(Error::BijectionFailure("unit does not match skeletons".into()));
        }
    }
    Ok(UnitEmbedding {
        skeleton: skel,
        power,
        map,
    })
}

/// Summary of a verified bijection between two hom-sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BijectionReport {
    pub left: usize,
    pub right: usize,
}

/// `Hom_BA(𝔖A, B) ≅ Hom(A, L[B])` by `φ ↦ (a ↦ φ ∘ 𝒯_a)` and restriction,
/// both composites checked to be identities.
pub fn transpose(a: &VarietyAlgebra, base: &SemiprimalBase, b: &FiniteBooleanAlgebra) -> Result<BijectionReport> {
    let skel = skeleton(a, base)?;
    let power = boolean_power(&base.algebra, b, base.cap)?;
    let left = enumerate_boolean_homs(&skel.boolean, b);
    let right = enumerate_homomorphisms(&a.algebra, &power.algebra)?;
    let units: Vec<Vec<u64>> = (0..a.size()).map(|i| unit_xi(a, base, &skel, i)).collect::<Result<_>>()?;
    let forward = |phi: &BooleanHom| -> Result<Homomorphism> {
        let map = units
            .iter()
            .map(|u| {
                let xi: Vec<u64> = u.iter().map(|&m| phi.apply(m)).collect();
                power
                    .index_of(&xi)
                    .ok_or_else(|| Error::BijectionFailure("transpose left the partitions of unity".into()))
            })
            .collect::<Result<_>>()?;
        Ok(Homomorphism::new(map))
    };
    let top = base.lattice.top;
    let backward = |h: &Homomorphism| -> Result<BooleanHom> {
        let masks: Vec<u64> = skel.elements.iter().map(|&s| power.xi(h.apply(s))[top]).collect();
        BooleanHom::from_mask_map(&skel.boolean, b, &masks)
            .ok_or_else(|| Error::BijectionFailure("restriction is not a Boolean homomorphism".into()))
    };
    let mut images = Vec::with_capacity(left.len());
    for phi in &left {
        let h = forward(phi)?;
        if right.binary_search(&h).is_err() {
            return Err(Error::BijectionFailure("transpose is not a homomorphism".into()));
        }
        if backward(&h)? != *phi {
            return Err(Error::BijectionFailure("restriction does not invert transpose".into()));
        }
        images.push(h);
    }
    for h in &right {
        if forward(&backward(h)?)? != *h {
            return Err(Error::BijectionFailure("transpose does not invert restriction".into()));
        }
    }
    images.sort();
    images.dedup();
    if images.len() != right.len() {
        return Err(Error::BijectionFailure(format!(
            "{} Boolean homomorphisms but {} algebra homomorphisms",
            left.len(),
            right.len()
        )));
    }
    Ok(BijectionReport {
        left: left.len(),
        right: right.len(),
    })
}

/// `Hom(A, L) ≅ Hom_BA(𝔖A, 2)` by restriction; the inverse sends `φ` to
/// `h̄(a) = ℓ ⇔ φ(T_ℓ(a)) = 1`.
pub fn skeleton_hom_bijection(a: &VarietyAlgebra, base: &SemiprimalBase) -> Result<BijectionReport> {
    let skel = skeleton(a, base)?;
    let two = FiniteBooleanAlgebra::new(1)?;
    let homs = enumerate_homomorphisms(&a.algebra, &base.algebra)?;
    let left = enumerate_boolean_homs(&skel.boolean, &two);
    let top = base.lattice.top;
    let restrict = |h: &Homomorphism| -> Result<BooleanHom> {
        let masks: Vec<u64> = skel.elements.iter().map(|&s| (h.apply(s) == top) as u64).collect();
        BooleanHom::from_mask_map(&skel.boolean, &two, &masks)
            .ok_or_else(|| Error::BijectionFailure("restriction is not a Boolean homomorphism".into()))
    };
    let units: Vec<Vec<u64>> = (0..a.size()).map(|i| unit_xi(a, base, &skel, i)).collect::<Result<_>>()?;
    let extend = |phi: &BooleanHom| -> Result<Homomorphism> {
        let map = units
            .iter()
            .map(|u| {
                let hits: Vec<usize> = (0..base.size()).filter(|&l| phi.apply(u[l]) == 1).collect();
                match hits.as_slice() {
                    [l] => Ok(*l),
                    _ => Err(Error::BijectionFailure("no unique ℓ with φ(T_ℓ(a)) = 1".into())),
                }
            })
            .collect::<Result<_>>()?;
        Ok(Homomorphism::new(map))
    };
    for h in &homs {
        if extend(&restrict(h)?)? != *h {
            return Err(Error::BijectionFailure("extension does not invert restriction".into()));
        }
    }
    for phi in &left {
        let h = extend(phi)?;
        if !h.verify(&a.algebra, &base.algebra) || restrict(&h)? != *phi {
            return Err(Error::BijectionFailure("restriction does not invert extension".into()));
        }
    }
    if homs.len() != left.len() {
        return Err(Error::BijectionFailure(format!("{} vs {}", homs.len(), left.len())));
    }
    Ok(BijectionReport {
        left: homs.len(),
        right: left.len(),
    })
}

/// `𝔖f`: restriction of `f : A₁ → A₂` to the skeletons, in atom form.
pub fn skeleton_map(s1: &SkeletonResult, s2: &SkeletonResult, f: &Homomorphism) -> Result<BooleanHom> {
    let masks: Vec<u64> = s1
        .elements
        .iter()
        .map(|&s| {
            s2.mask(f.apply(s))
                .ok_or_else(|| Error::BijectionFailure("image of a skeleton element is outside the skeleton".into()))
        })
        .collect::<Result<_>>()?;
    BooleanHom::from_mask_map(&s1.boolean, &s2.boolean, &masks)
        .ok_or_else(|| Error::BijectionFailure("skeleton map is not a Boolean homomorphism".into()))
}

/// `𝔓φ : L[B₁] → L[B₂]`, `ξ ↦ φ ∘ ξ`.
pub fn power_map(p1: &BooleanPower, p2: &BooleanPower, phi: &BooleanHom) -> Result<Homomorphism> {
    let map = (0..p1.algebra.size())
        .map(|i| {
            let xi: Vec<u64> = p1.xi(i).iter().map(|&m| phi.apply(m)).collect();
            p2.index_of(&xi)
                .ok_or_else(|| Error::BijectionFailure("power map left the partitions of unity".into()))
        })
        .collect::<Result<_>>()?;
    Ok(Homomorphism::new(map))
}

/// Checks `𝔓(𝔖f) ∘ 𝒯 = 𝒯 ∘ f` for `f : A₁ → A₂`.
pub fn unit_naturality(
    a1: &VarietyAlgebra,
    a2: &VarietyAlgebra,
    base: &SemiprimalBase,
    f: &Homomorphism,
) -> Result<bool> {
    if !f.verify(&a1.algebra, &a2.algebra) {
        return Err(Error::InvalidInput("map is not a homomorphism".into()));
    }
    let u1 = unit_embedding(a1, base)?;
    let u2 = unit_embedding(a2, base)?;
    let sf = skeleton_map(&u1.skeleton, &u2.skeleton, f)?;
    let psf = power_map(&u1.power, &u2.power, &sf)?;
    Ok(u1.map.then(&psf) == f.then(&u2.map))
}

/// `Q_S(A)`: quotient by the congruence generated by `(χ_S(a), 1)`, re-normalized.
#[derive(Clone, Debug)]
pub struct QuotientResult {
    pub algebra: VarietyAlgebra,
    /// Surjection from `A` onto the normal form of the quotient.
    pub surjection: Homomorphism,
}

pub fn quotient_functor(a: &VarietyAlgebra, base: &SemiprimalBase, s: usize) -> Result<QuotientResult> {
    let sub = base
        .subs
        .get(s)
        .ok_or_else(|| Error::InvalidInput(format!("unknown subuniverse id {s}")))?;
    let r = &base.lattice;
    let chi = r.chi_table(&sub.elements());
    let one = a
        .element_of(&vec![r.top; a.factors.len()])
        .ok_or_else(|| Error::InvalidInput("carrier lacks the top element".into()))?;
    let pairs: Vec<(usize, usize)> = (0..a.size())
        .map(|i| {
            a.map_componentwise(i, |x| chi[x])
                .map(|c| (c, one))
                .ok_or_else(|| Error::InvalidInput("χ_S image outside the carrier".into()))
        })
        .collect::<Result<_>>()?;
    let theta = congruence_generated(&a.algebra, &pairs)?;
    let (q, surj) = quotient(&a.algebra, &theta)?;
    let (normal, iso) = canonicalize(&q, base)?;
    if normal.factors.iter().any(|&f| !base.subs[f].is_subset(sub)) {
        return Err(Error::BijectionFailure("quotient has a factor outside S".into()));
    }
    Ok(QuotientResult {
        algebra: normal,
        surjection: surj.then(&iso),
    })
}

/// Factor-filtering prediction for `Q_S` on a full product: the factors contained in `S`.
pub fn quotient_prediction(a: &VarietyAlgebra, base: &SemiprimalBase, s: usize) -> Vec<usize> {
    let mut kept: Vec<usize> = a
        .factors
        .iter()
        .copied()
        .filter(|&f| base.subs[f].is_subset(&base.subs[s]))
        .collect();
    kept.sort();
    kept
}

/// `I_S(B) = S[B]` viewed inside `V(L)`.
pub fn inclusion_functor(b: &FiniteBooleanAlgebra, base: &SemiprimalBase, s: usize) -> Result<VarietyAlgebra> {
    let sub = base
        .subs
        .get(s)
        .ok_or_else(|| Error::InvalidInput(format!("unknown subuniverse id {s}")))?;
    let (s_alg, _) = induced_algebra(&base.algebra, sub)?;
    let p = boolean_power(&s_alg, b, base.cap)?;
    Ok(canonicalize(&p.algebra, base)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Three-element Post-style chain: lattice, bounds and cyclic successor.
    fn post3() -> FiniteAlgebra {
        let n = 3;
        FiniteAlgebra::new(
            "p3",
            n,
            vec![
                FiniteAlgebra::op_from_fn("meet", n, 2, |t| t[0].min(t[1])),
                FiniteAlgebra::op_from_fn("join", n, 2, |t| t[0].max(t[1])),
                FiniteAlgebra::op_from_fn("zero", n, 0, |_| 0),
                FiniteAlgebra::op_from_fn("one", n, 0, |_| 2),
                FiniteAlgebra::op_from_fn("succ", n, 1, |t| (t[0] + 1) % 3),
            ],
        )
        .unwrap()
    }

    #[test]
    fn full_product_and_canonical_form() {
        let base = SemiprimalBase::new(post3()).unwrap();
        assert_eq!(base.subs.len(), 1);
        let sq = VarietyAlgebra::full_product(&base, &[0, 0]).unwrap();
        assert_eq!(sq.size(), 9);
        let (c, iso) = canonicalize(&sq.algebra, &base).unwrap();
        assert_eq!(c.factors, vec![0, 0]);
        assert!(iso.is_injective(9));
    }

    #[test]
    fn skeleton_of_square_has_two_atoms() {
        let base = SemiprimalBase::new(post3()).unwrap();
        let sq = VarietyAlgebra::full_product(&base, &[0, 0]).unwrap();
        let s = skeleton(&sq, &base).unwrap();
        assert_eq!(s.boolean.atoms, 2);
        assert_eq!(sq.tuple(s.elements[3]), &[2, 2]);
    }

    #[test]
    fn power_of_two_atoms_is_square_sized() {
        let base = SemiprimalBase::new(post3()).unwrap();
        let b = FiniteBooleanAlgebra::new(2).unwrap();
        let p = boolean_power(&base.algebra, &b, 1000).unwrap();
        assert_eq!(p.algebra.size(), 9);
        assert_eq!(power_skeleton(&p, &base.lattice).unwrap().len(), 4);
    }

    #[test]
    fn unit_and_transpose_on_square() {
        let base = SemiprimalBase::new(post3()).unwrap();
        let sq = VarietyAlgebra::full_product(&base, &[0, 0]).unwrap();
        let u = unit_embedding(&sq, &base).unwrap();
        assert_eq!(u.power.algebra.size(), 9);
        for k in 0..3 {
            let b = FiniteBooleanAlgebra::new(k).unwrap();
            let rep = transpose(&sq, &base, &b).unwrap();
            assert_eq!((rep.left, rep.right), (2usize.pow(k as u32), 2usize.pow(k as u32)));
        }
        assert_eq!(skeleton_hom_bijection(&sq, &base).unwrap(), BijectionReport { left: 2, right: 2 });
    }

    #[test]
    fn non_semi_primal_base_is_rejected() {
        let n = 3;
        let chain = FiniteAlgebra::new(
            "c3",
            n,
            vec![
                FiniteAlgebra::op_from_fn("meet", n, 2, |t| t[0].min(t[1])),
                FiniteAlgebra::op_from_fn("join", n, 2, |t| t[0].max(t[1])),
                FiniteAlgebra::op_from_fn("zero", n, 0, |_| 0),
                FiniteAlgebra::op_from_fn("one", n, 0, |_| 2),
            ],
        )
        .unwrap();
        assert!(matches!(SemiprimalBase::new(chain), Err(Error::NotSemiPrimal(_))));
    }
}
