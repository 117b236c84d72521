//! Homomorphism search between finite algebras of the same signature.

use serde::{Deserialize, Serialize};

use crate::algebra::{tuple_index, FiniteAlgebra};
use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::subuniverse::{
    close_semi_naive, closure_extending, enumerate_subuniverses, for_each_new_tuple, induced_algebra, SubUniverse,
};

/// A map between carriers. Whether it commutes with the operations is checked
/// by [`Homomorphism::verify`]; the search functions only return verified maps.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Homomorphism {
    pub map: Vec<usize>,
}

impl Homomorphism {
    pub fn new(map: Vec<usize>) -> Self {
        Homomorphism { map }
    }

    pub fn identity(n: usize) -> Self {
        Homomorphism { map: (0..n).collect() }
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `other ∘ self`: first `self`, then `other`.
    pub fn then(&self, other: &Homomorphism) -> Homomorphism {
        Homomorphism {
            map: self.map.iter().map(|&x| other.map[x]).collect(),
        }
    }

    pub fn is_injective(&self, cod_size: usize) -> bool {
        let mut seen = ElemSet::empty(cod_size);
        self.map.iter().all(|&y| seen.insert(y))
    }

    pub fn image(&self, cod_size: usize) -> ElemSet {
        ElemSet::from_elems(cod_size, self.map.iter().copied())
    }

    /// Checks shape and the homomorphism condition on every tuple.
    pub fn verify(&self, dom: &FiniteAlgebra, cod: &FiniteAlgebra) -> bool {
        if !dom.same_signature(cod) || self.map.len() != dom.size() || self.map.iter().any(|&y| y >= cod.size()) {
            return false;
        }
        let mut img = Vec::new();
        dom.ops().iter().zip(cod.ops()).all(|(fa, fb)| {
            let mut ok = true;
            crate::algebra::for_each_tuple(dom.size(), fa.arity, |t| {
                if ok {
                    img.clear();
                    img.extend(t.iter().map(|&x| self.map[x]));
                    ok = self.map[fa.table[tuple_index(t, dom.size())]] == fb.table[tuple_index(&img, cod.size())];
                }
            });
            ok
        })
    }
}

/// How to derive `elem`'s image from already assigned images.
#[derive(Clone, Debug)]
struct Step {
    elem: usize,
    op: usize,
    args: Vec<usize>,
}

#[derive(Clone, Debug)]
struct Stage {
    generator: Option<usize>,
    steps: Vec<Step>,
    start: usize,
    end: usize,
}

/// Search plan for maps out of a fixed domain: stage 0 covers the constants and
/// what they generate, each later stage adds one greedily chosen generator.
#[derive(Clone, Debug)]
struct HomPlan {
    order: Vec<usize>,
    stages: Vec<Stage>,
}

impl HomPlan {
    fn build(dom: &FiniteAlgebra) -> HomPlan {
        let n = dom.size();
        let mut members = ElemSet::empty(n);
        let mut order = Vec::new();
        let mut steps = Vec::new();
        for (op_i, op) in dom.ops().iter().enumerate() {
            if op.arity == 0 && members.insert(op.table[0]) {
                order.push(op.table[0]);
                steps.push(Step {
                    elem: op.table[0],
                    op: op_i,
                    args: Vec::new(),
                });
            }
        }
        close_semi_naive(dom, &mut members, &mut order, 0, |v, op, args| {
            steps.push(Step {
                elem: v,
                op,
                args: args.to_vec(),
            })
        });
        let mut stages = vec![Stage {
            generator: None,
            steps,
            start: 0,
            end: order.len(),
        }];
        while order.len() < n {
            let current = SubUniverse::from_closed(members.clone());
            let mut best = (0, usize::MAX);
            for x in (0..n).filter(|&x| !members.contains(x)) {
                let size = closure_extending(dom, &current, &[x]).len();
                if size > best.0 {
                    best = (size, x);
                    if size == n {
                        break;
                    }
                }
            }
            let g = best.1;
            let start = order.len();
            members.insert(g);
            order.push(g);
            let mut steps = Vec::new();
            close_semi_naive(dom, &mut members, &mut order, start, |v, op, args| {
                steps.push(Step {
                    elem: v,
                    op,
                    args: args.to_vec(),
                })
            });
            stages.push(Stage {
                generator: Some(g),
                steps,
                start,
                end: order.len(),
            });
        }
        HomPlan { order, stages }
    }

    fn generators(&self) -> Vec<usize> {
        self.stages.iter().filter_map(|s| s.generator).collect()
    }
}

struct Search<'a, F> {
    dom: &'a FiniteAlgebra,
    cod: &'a FiniteAlgebra,
    plan: &'a HomPlan,
    injective: bool,
    h: Vec<usize>,
    used: Vec<bool>,
    visit: F,
}

impl<F: FnMut(&[usize]) -> bool> Search<'_, F> {
    /// Assigns a derived image, respecting injectivity.
    fn assign(&mut self, x: usize, y: usize, touched: &mut Vec<usize>) -> bool {
        if self.injective {
            if self.used[y] {
                return false;
            }
            self.used[y] = true;
            touched.push(y);
        }
        self.h[x] = y;
        true
    }

    fn apply_stage(&mut self, s: usize, touched: &mut Vec<usize>) -> bool {
        let stage = &self.plan.stages[s];
        let mut args = Vec::new();
        for step in &stage.steps {
            args.clear();
            args.extend(step.args.iter().map(|&a| self.h[a]));
            let y = self.cod.apply(step.op, &args);
            if !self.assign(step.elem, y, touched) {
                return false;
            }
        }
        self.check_stage(s)
    }

    /// Homomorphism condition on all tuples over `order[..end]` that touch the stage.
    fn check_stage(&self, s: usize) -> bool {
        let stage = &self.plan.stages[s];
        let order = &self.plan.order;
        let (nd, nc) = (self.dom.size(), self.cod.size());
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (fa, fb) in self.dom.ops().iter().zip(self.cod.ops()) {
            if fa.arity == 0 {
                if s == 0 && self.h[fa.table[0]] != fb.table[0] {
                    return false;
                }
                continue;
            }
            let mut ok = true;
            for_each_new_tuple(fa.arity, stage.start, stage.end, |idx| {
                if !ok {
                    return;
                }
                a.clear();
                a.extend(idx.iter().map(|&i| order[i]));
                b.clear();
                b.extend(a.iter().map(|&x| self.h[x]));
                ok = self.h[fa.table[tuple_index(&a, nd)]] == fb.table[tuple_index(&b, nc)];
            });
            if !ok {
                return false;
            }
        }
        true
    }

    fn undo(&mut self, touched: &[usize]) {
        for &y in touched {
            self.used[y] = false;
        }
    }

    /// Returns false when the visitor asked to stop.
    fn run(&mut self, s: usize) -> bool {
        if s == self.plan.stages.len() {
            return (self.visit)(&self.h);
        }
        let g = self.plan.stages[s].generator.expect("later stages have generators");
        for y in 0..self.cod.size() {
            let mut touched = Vec::new();
            let ok = self.assign(g, y, &mut touched) && self.apply_stage(s, &mut touched);
            let keep_going = !ok || self.run(s + 1);
            self.undo(&touched);
            if !keep_going {
                return false;
            }
        }
        true
    }
}

fn search(dom: &FiniteAlgebra, cod: &FiniteAlgebra, injective: bool, visit: impl FnMut(&[usize]) -> bool) {
    let plan = HomPlan::build(dom);
    let mut st = Search {
        dom,
        cod,
        plan: &plan,
        injective,
        h: vec![usize::MAX; dom.size()],
        used: vec![false; cod.size()],
        visit,
    };
    let mut touched = Vec::new();
    if st.apply_stage(0, &mut touched) {
        st.run(1);
    }
}

/// Every homomorphism `dom → cod`, sorted lexicographically by map.
pub fn enumerate_homomorphisms(dom: &FiniteAlgebra, cod: &FiniteAlgebra) -> Result<Vec<Homomorphism>> {
    dom.require_same_signature(cod)?;
    let mut out = Vec::new();
    search(dom, cod, false, |h| {
        out.push(Homomorphism::new(h.to_vec()));
        true
    });
    out.sort();
    Ok(out)
}

/// Number of homomorphisms without materializing them.
pub fn count_homomorphisms(dom: &FiniteAlgebra, cod: &FiniteAlgebra) -> Result<usize> {
    dom.require_same_signature(cod)?;
    let mut count = 0;
    search(dom, cod, false, |_| {
        count += 1;
        true
    });
    Ok(count)
}

/// Every injective homomorphism `dom → cod`, sorted lexicographically.
pub fn enumerate_embeddings(dom: &FiniteAlgebra, cod: &FiniteAlgebra) -> Result<Vec<Homomorphism>> {
    dom.require_same_signature(cod)?;
    let mut out = Vec::new();
    search(dom, cod, true, |h| {
        out.push(Homomorphism::new(h.to_vec()));
        true
    });
    out.sort();
    Ok(out)
}

/// The first isomorphism found in search order, if any.
pub fn find_isomorphism(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<Option<Homomorphism>> {
    a.require_same_signature(b)?;
    if a.size() != b.size() {
        return Ok(None);
    }
    let mut found = None;
    search(a, b, true, |h| {
        found = Some(Homomorphism::new(h.to_vec()));
        false
    });
    Ok(found)
}

/// Generators chosen by the search plan for `alg`; exposed for diagnostics.
pub fn greedy_generators(alg: &FiniteAlgebra) -> Vec<usize> {
    HomPlan::build(alg).generators()
}

/// An isomorphism between two subalgebras of the same algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InternalIso {
    pub domain: SubUniverse,
    pub codomain: SubUniverse,
    /// Pairs `(x, φ(x))` in increasing order of `x`.
    pub pairs: Vec<(usize, usize)>,
}

impl InternalIso {
    pub fn is_identity(&self) -> bool {
        self.domain == self.codomain && self.pairs.iter().all(|(x, y)| x == y)
    }
}

/// All isomorphisms between subalgebras of `alg` (identities included), ordered
/// by domain, then codomain (subuniverse order), then map.
pub fn internal_isomorphisms(alg: &FiniteAlgebra) -> Vec<InternalIso> {
    internal_isomorphisms_among(alg, &enumerate_subuniverses(alg))
}

/// As [`internal_isomorphisms`] with a precomputed subuniverse list.
pub fn internal_isomorphisms_among(alg: &FiniteAlgebra, subs: &[SubUniverse]) -> Vec<InternalIso> {
    let induced: Vec<_> = subs
        .iter()
        .map(|s| if s.is_empty() { None } else { induced_algebra(alg, s).ok() })
        .collect();
    let mut out = Vec::new();
    for (i, s1) in subs.iter().enumerate() {
        for (j, s2) in subs.iter().enumerate() {
            if s1.len() != s2.len() {
                continue;
            }
            match (&induced[i], &induced[j]) {
                (Some((a1, e1)), Some((a2, e2))) => {
                    let isos = enumerate_embeddings(a1, a2).expect("induced algebras share the signature");
                    for iso in isos {
                        out.push(InternalIso {
                            domain: s1.clone(),
                            codomain: s2.clone(),
                            pairs: e1.iter().zip(&iso.map).map(|(&x, &y)| (x, e2[y])).collect(),
                        });
                    }
                }
                _ => out.push(InternalIso {
                    domain: s1.clone(),
                    codomain: s2.clone(),
                    pairs: Vec::new(),
                }),
            }
        }
    }
    out
}

/// Every homomorphism from `dom` into `cod` by exhaustive scan of all maps.
/// Only for cross-checking at tiny sizes.
pub fn brute_force_homomorphisms(dom: &FiniteAlgebra, cod: &FiniteAlgebra) -> Result<Vec<Homomorphism>> {
    dom.require_same_signature(cod)?;
    let total = crate::algebra::checked_pow(cod.size(), dom.size());
    if total > 50_000_000 {
        return Err(Error::SizeCapExceeded {
            requested: total,
            cap: 50_000_000,
        });
    }
    let mut out = Vec::new();
    crate::algebra::for_each_tuple(cod.size(), dom.size(), |m| {
        let h = Homomorphism::new(m.to_vec());
        if h.verify(dom, cod) {
            out.push(h);
        }
    });
    Ok(out)
}
