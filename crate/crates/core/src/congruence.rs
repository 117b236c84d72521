//! Congruence generation, quotients and kernels.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::algebra::{for_each_tuple, tuple_index, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::hom::Homomorphism;

/// An equivalence on a carrier, stored as block ids numbered by first occurrence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Congruence {
    blocks: Vec<usize>,
}

impl Congruence {
    /// Canonicalizes an arbitrary labelling into first-occurrence block ids.
    pub fn from_labels<T: Eq + std::hash::Hash + Clone>(labels: &[T]) -> Self {
        let mut ids = std::collections::HashMap::new();
        let blocks = labels
            .iter()
            .map(|l| {
                let next = ids.len();
                *ids.entry(l.clone()).or_insert(next)
            })
            .collect();
        Congruence { blocks }
    }

    pub fn identity(n: usize) -> Self {
        Congruence { blocks: (0..n).collect() }
    }

    pub fn full(n: usize) -> Self {
        Congruence { blocks: vec![0; n] }
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn size(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_count(&self) -> usize {
        self.blocks.iter().max().map_or(0, |m| m + 1)
    }

    #[inline]
    pub fn related(&self, a: usize, b: usize) -> bool {
        self.blocks[a] == self.blocks[b]
    }

    /// `self ⊆ other` as relations.
    pub fn leq(&self, other: &Congruence) -> bool {
        let n = self.size();
        (0..n).all(|a| (0..n).all(|b| !self.related(a, b) || other.related(a, b)))
    }

    /// Whether the equivalence is compatible with every operation of `alg`.
    pub fn is_compatible(&self, alg: &FiniteAlgebra) -> bool {
        let n = alg.size();
        if self.size() != n {
            return false;
        }
        let mut shifted = Vec::new();
        alg.ops().iter().all(|op| {
            let mut ok = true;
            for_each_tuple(n, op.arity, |t| {
                if !ok {
                    return;
                }
                let base = op.table[tuple_index(t, n)];
                for p in 0..t.len() {
                    for b in 0..n {
                        if b != t[p] && self.related(t[p], b) {
                            shifted.clear();
                            shifted.extend_from_slice(t);
                            shifted[p] = b;
                            if !self.related(base, op.table[tuple_index(&shifted, n)]) {
                                ok = false;
                                return;
                            }
                        }
                    }
                }
            });
            ok
        })
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// Smallest congruence containing `pairs`.
///
/// Every pair that causes a merge is queued and pushed through all basic
/// translations `x ↦ f(c_1, …, x, …, c_k)`; this reaches the fixpoint because
/// the generated congruence is the equivalence closure of the translation
/// images of the seed pairs.
pub fn congruence_generated(alg: &FiniteAlgebra, pairs: &[(usize, usize)]) -> Result<Congruence> {
    let n = alg.size();
    if let Some(&(a, b)) = pairs.iter().find(|(a, b)| *a >= n || *b >= n) {
        return Err(Error::InvalidInput(format!(
            "pair ({a}, {b}) outside carrier of size {n}"
        )));
    }
    let mut uf = UnionFind::new(n);
    let mut queue = VecDeque::new();
    for &(a, b) in pairs {
        if uf.union(a, b) {
            queue.push_back((a, b));
        }
    }
    let mut ta = Vec::new();
    let mut tb = Vec::new();
    while let Some((a, b)) = queue.pop_front() {
        for op in alg.ops() {
            if op.arity == 0 {
                continue;
            }
            for p in 0..op.arity {
                for_each_tuple(n, op.arity - 1, |rest| {
                    ta.clear();
                    ta.extend_from_slice(&rest[..p]);
                    ta.push(a);
                    ta.extend_from_slice(&rest[p..]);
                    tb.clear();
                    tb.extend_from_slice(&ta);
                    tb[p] = b;
                    let (x, y) = (op.table[tuple_index(&ta, n)], op.table[tuple_index(&tb, n)]);
                    if uf.union(x, y) {
                        queue.push_back((x, y));
                    }
                });
            }
        }
    }
    let roots: Vec<usize> = (0..n).map(|x| uf.find(x)).collect();
    Ok(Congruence::from_labels(&roots))
}

/// Join of two congruences of `alg`.
pub fn congruence_join(alg: &FiniteAlgebra, a: &Congruence, b: &Congruence) -> Congruence {
    let pairs: Vec<(usize, usize)> = (0..alg.size())
        .flat_map(|x| [(x, first_in_block(a, x)), (x, first_in_block(b, x))])
        .collect();
    congruence_generated(alg, &pairs).expect("pairs are in range")
}

fn first_in_block(c: &Congruence, x: usize) -> usize {
    c.blocks.iter().position(|&id| id == c.blocks[x]).expect("x is in its own block")
}

/// All congruences of `alg`, as joins of principal congruences, sorted.
pub fn all_congruences(alg: &FiniteAlgebra) -> Vec<Congruence> {
    let n = alg.size();
    let mut principals = BTreeSet::new();
    for a in 0..n {
        for b in a + 1..n {
            principals.insert(congruence_generated(alg, &[(a, b)]).expect("in range"));
        }
    }
    let mut found: BTreeSet<Congruence> = BTreeSet::new();
    found.insert(Congruence::identity(n));
    let mut queue: VecDeque<Congruence> = VecDeque::from([Congruence::identity(n)]);
    while let Some(c) = queue.pop_front() {
        for p in &principals {
            let j = congruence_join(alg, &c, p);
            if found.insert(j.clone()) {
                queue.push_back(j);
            }
        }
    }
    found.into_iter().collect()
}

/// Simple: at least two elements and only the trivial congruences.
pub fn is_simple(alg: &FiniteAlgebra) -> bool {
    let n = alg.size();
    n >= 2
        && (0..n).all(|a| {
            (a + 1..n).all(|b| congruence_generated(alg, &[(a, b)]).expect("in range").block_count() == 1)
        })
}

/// Quotient algebra on the blocks of `theta`, with the canonical surjection.
pub fn quotient(alg: &FiniteAlgebra, theta: &Congruence) -> Result<(FiniteAlgebra, Homomorphism)> {
    if theta.size() != alg.size() {
        return Err(Error::InvalidInput("congruence belongs to a different carrier".into()));
    }
    if !theta.is_compatible(alg) {
        return Err(Error::InvalidInput("equivalence is not compatible with the operations".into()));
    }
    let n = alg.size();
    let m = theta.block_count();
    let reps: Vec<usize> = (0..m)
        .map(|id| theta.blocks.iter().position(|&b| b == id).expect("block ids are dense"))
        .collect();
    let mut args = Vec::new();
    let ops = alg
        .ops()
        .iter()
        .map(|op| {
            FiniteAlgebra::op_from_fn(op.name.clone(), m, op.arity, |t| {
                args.clear();
                args.extend(t.iter().map(|&i| reps[i]));
                theta.blocks[op.table[tuple_index(&args, n)]]
            })
        })
        .collect();
    let mut q = FiniteAlgebra::new(format!("{}/θ", alg.name), m, ops)?;
    q.lattice_hint = alg.lattice_hint.clone();
    Ok((q, Homomorphism::new(theta.blocks.clone())))
}

/// Kernel of a map out of a carrier.
pub fn kernel(h: &Homomorphism) -> Congruence {
    Congruence::from_labels(&h.map)
}
