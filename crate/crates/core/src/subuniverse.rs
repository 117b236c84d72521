//! Subuniverse closure and enumeration.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::algebra::{tuple_index, FiniteAlgebra, Operation};
use crate::elemset::ElemSet;
use crate::error::{Error, Result};

/// A subset of a carrier closed under every operation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubUniverse {
    set: ElemSet,
}

impl SubUniverse {
    /// Wraps `set` after checking closure in `alg`.
    pub fn new(alg: &FiniteAlgebra, set: ElemSet) -> Result<Self> {
        if set.universe() != alg.size() {
            return Err(Error::InvalidInput("subset universe differs from carrier".into()));
        }
        if !is_closed(alg, &set) {
            return Err(Error::InvalidInput(format!(
                "{:?} is not closed under the operations of `{}`",
                set, alg.name
            )));
        }
        Ok(SubUniverse { set })
    }

    pub(crate) fn from_closed(set: ElemSet) -> Self {
        SubUniverse { set }
    }

    pub fn set(&self) -> &ElemSet {
        &self.set
    }

    pub fn elements(&self) -> Vec<usize> {
        self.set.to_vec()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.set.contains(x)
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn is_subset(&self, other: &SubUniverse) -> bool {
        self.set.is_subset(&other.set)
    }
}

impl Serialize for SubUniverse {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.elements().serialize(s)
    }
}

/// Plain list form used when a subuniverse travels without its parent.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SubUniverseJson(pub Vec<usize>);

/// Checks whether `set` is closed under all operations of `alg`.
pub fn is_closed(alg: &FiniteAlgebra, set: &ElemSet) -> bool {
    let elems = set.to_vec();
    alg.ops().iter().all(|op| {
        let mut ok = true;
        crate::algebra::for_each_tuple(elems.len(), op.arity, |t| {
            if ok {
                let args: Vec<usize> = t.iter().map(|&i| elems[i]).collect();
                ok = set.contains(op.table[tuple_index(&args, alg.size())]);
            }
        });
        ok
    })
}

/// Visits every index tuple in `[0, end)^k` having at least one coordinate in
/// `[done, end)`, each exactly once.
pub(crate) fn for_each_new_tuple(k: usize, done: usize, end: usize, mut f: impl FnMut(&[usize])) {
    let mut idx = Vec::with_capacity(k);
    for p in 0..k {
        if done >= end || (p > 0 && done == 0) {
            break;
        }
        let lo = |i: usize| if i == p { done } else { 0 };
        let hi = |i: usize| if i < p { done } else { end };
        idx.clear();
        idx.extend((0..k).map(lo));
        loop {
            f(&idx);
            let mut i = k;
            let mut finished = true;
            while i > 0 {
                i -= 1;
                idx[i] += 1;
                if idx[i] < hi(i) {
                    finished = false;
                    break;
                }
                idx[i] = lo(i);
            }
            if finished {
                break;
            }
        }
    }
}

/// Semi-naive closure engine.
///
/// `order[..done]` must already be closed. Every tuple with at least one
/// coordinate from `order[done..]` is evaluated exactly once per round; new
/// values are appended to `order` and reported through `on_new` together with
/// the operation and arguments that produced them.
pub(crate) fn close_semi_naive(
    alg: &FiniteAlgebra,
    members: &mut ElemSet,
    order: &mut Vec<usize>,
    mut done: usize,
    mut on_new: impl FnMut(usize, usize, &[usize]),
) {
    let n = alg.size();
    let mut args = Vec::new();
    let mut fresh = Vec::new();
    loop {
        let end = order.len();
        if done == end {
            return;
        }
        for (op_i, op) in alg.ops().iter().enumerate() {
            if op.arity == 0 {
                continue;
            }
            let snapshot = &order[..end];
            for_each_new_tuple(op.arity, done, end, |idx| {
                args.clear();
                args.extend(idx.iter().map(|&i| snapshot[i]));
                let v = op.table[tuple_index(&args, n)];
                if members.insert(v) {
                    on_new(v, op_i, &args);
                    fresh.push(v);
                }
            });
            order.append(&mut fresh);
        }
        done = end;
    }
}

fn nullary_values(alg: &FiniteAlgebra) -> impl Iterator<Item = &Operation> {
    alg.ops().iter().filter(|o| o.arity == 0)
}

/// Smallest subuniverse containing `seed` (and all constants).
pub fn subuniverse_closure(alg: &FiniteAlgebra, seed: &[usize]) -> Result<SubUniverse> {
    let mut members = ElemSet::empty(alg.size());
    let mut order = Vec::new();
    for op in nullary_values(alg) {
        if members.insert(op.table[0]) {
            order.push(op.table[0]);
        }
    }
    for &x in seed {
        if x >= alg.size() {
            return Err(Error::InvalidInput(format!(
                "seed element {x} outside carrier of size {}",
                alg.size()
            )));
        }
        if members.insert(x) {
            order.push(x);
        }
    }
    close_semi_naive(alg, &mut members, &mut order, 0, |_, _, _| {});
    Ok(SubUniverse { set: members })
}

/// Closure of `base ∪ extra` where `base` is already a subuniverse.
pub fn closure_extending(alg: &FiniteAlgebra, base: &SubUniverse, extra: &[usize]) -> SubUniverse {
    let mut members = base.set.clone();
    let mut order = base.set.to_vec();
    let done = order.len();
    for &x in extra {
        if members.insert(x) {
            order.push(x);
        }
    }
    close_semi_naive(alg, &mut members, &mut order, done, |_, _, _| {});
    SubUniverse { set: members }
}

/// All subuniverses of `alg`, sorted by size and then lexicographically.
///
/// Breadth-first over one-element extensions of already found subuniverses,
/// starting from the closure of the empty set.
pub fn enumerate_subuniverses(alg: &FiniteAlgebra) -> Vec<SubUniverse> {
    let bottom = subuniverse_closure(alg, &[]).expect("empty seed is valid");
    let mut seen: HashSet<ElemSet> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(bottom.set.clone());
    queue.push_back(bottom);
    let mut out = Vec::new();
    while let Some(s) = queue.pop_front() {
        for x in 0..alg.size() {
            if s.contains(x) {
                continue;
            }
            let t = closure_extending(alg, &s, &[x]);
            if seen.insert(t.set.clone()) {
                queue.push_back(t);
            }
        }
        out.push(s);
    }
    sort_subuniverses(&mut out);
    out
}

pub(crate) fn sort_subuniverses(subs: &mut [SubUniverse]) {
    subs.sort_by_cached_key(|s| (s.len(), s.elements()));
}

/// The subalgebra on `sub`, re-indexed to `{0..|sub|-1}` in increasing order,
/// together with the embedding into the parent carrier.
pub fn induced_algebra(alg: &FiniteAlgebra, sub: &SubUniverse) -> Result<(FiniteAlgebra, Vec<usize>)> {
    let embed = sub.elements();
    if embed.is_empty() {
        return Err(Error::InvalidInput("empty subuniverse has no induced algebra".into()));
    }
    let mut index = vec![usize::MAX; alg.size()];
    for (i, &x) in embed.iter().enumerate() {
        index[x] = i;
    }
    let m = embed.len();
    let mut args = Vec::new();
    let ops = alg
        .ops()
        .iter()
        .map(|op| {
            FiniteAlgebra::op_from_fn(op.name.clone(), m, op.arity, |t| {
                args.clear();
                args.extend(t.iter().map(|&i| embed[i]));
                index[op.table[tuple_index(&args, alg.size())]]
            })
        })
        .collect();
    let mut sub_alg = FiniteAlgebra::new(format!("{}|{:?}", alg.name, embed), m, ops)?;
    if let Some(names) = &alg.element_names {
        sub_alg.element_names = Some(embed.iter().map(|&x| names[x].clone()).collect());
    }
    sub_alg.lattice_hint = alg.lattice_hint.clone();
    Ok((sub_alg, embed))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Three-element chain with meet, join and both bounds as constants.
    fn chain3() -> FiniteAlgebra {
        FiniteAlgebra::new(
            "chain3",
            3,
            vec![
                FiniteAlgebra::op_from_fn("meet", 3, 2, |t| t[0].min(t[1])),
                FiniteAlgebra::op_from_fn("join", 3, 2, |t| t[0].max(t[1])),
                FiniteAlgebra::op_from_fn("zero", 3, 0, |_| 0),
                FiniteAlgebra::op_from_fn("one", 3, 0, |_| 2),
            ],
        )
        .unwrap()
    }

    #[test]
    fn closure_of_empty_seed_is_constants() {
        let a = chain3();
        assert_eq!(subuniverse_closure(&a, &[]).unwrap().elements(), vec![0, 2]);
        assert!(subuniverse_closure(&a, &[7]).is_err());
    }

    #[test]
    fn enumeration_of_chain_lattice() {
        let subs = enumerate_subuniverses(&chain3());
        let lists: Vec<_> = subs.iter().map(|s| s.elements()).collect();
        assert_eq!(lists, vec![vec![0, 2], vec![0, 1, 2]]);
    }

    #[test]
    fn enumeration_without_constants_includes_empty_set() {
        let a = FiniteAlgebra::new(
            "semilattice",
            2,
            vec![FiniteAlgebra::op_from_fn("meet", 2, 2, |t| t[0].min(t[1]))],
        )
        .unwrap();
        let lists: Vec<_> = enumerate_subuniverses(&a).iter().map(|s| s.elements()).collect();
        assert_eq!(lists, vec![vec![], vec![0], vec![1], vec![0, 1]]);
    }

    #[test]
    fn induced_algebra_reindexes() {
        let a = chain3();
        let s = subuniverse_closure(&a, &[]).unwrap();
        let (b, embed) = induced_algebra(&a, &s).unwrap();
        assert_eq!(embed, vec![0, 2]);
        assert_eq!(b.size(), 2);
        assert_eq!(b.apply(1, &[0, 1]), 1);
        assert_eq!(b.apply(3, &[]), 1);
    }

    #[test]
    fn subuniverse_new_rejects_unclosed() {
        let a = chain3();
        assert!(SubUniverse::new(&a, ElemSet::from_elems(3, [0, 1])).is_err());
        assert!(SubUniverse::new(&a, ElemSet::from_elems(3, [0, 1, 2])).is_ok());
    }
}
