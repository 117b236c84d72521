//! Bounded-lattice reducts and the unary maps derived from them.

use serde::{Deserialize, Serialize};

use crate::algebra::{for_each_tuple, FiniteAlgebra};
use crate::error::{Error, Result};

/// A validated bounded-lattice reduct of an algebra.
#[derive(Clone, Debug)]
pub struct LatticeReduct {
    pub meet_op: String,
    pub join_op: String,
    size: usize,
    meet: Vec<usize>,
    join: Vec<usize>,
    pub bot: usize,
    pub top: usize,
    leq: Vec<bool>,
    /// Other operation pairs that also form a bounded lattice (detection by scan only).
    pub alternatives: Vec<(String, String)>,
}

const MEET_NAMES: [&str; 2] = ["meet", "∧"];
const JOIN_NAMES: [&str; 2] = ["join", "∨"];

impl LatticeReduct {
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.size + y]
    }

    #[inline]
    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x * self.size + y]
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x * self.size + y]
    }

    /// Row-major `n × n` order table.
    pub fn order_table(&self) -> &[bool] {
        &self.leq
    }

    pub fn join_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.bot, |a, b| self.join(a, b))
    }

    pub fn meet_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.top, |a, b| self.meet(a, b))
    }

    /// `T_ℓ`: top on `ℓ`, bottom elsewhere.
    pub fn t_table(&self, l: usize) -> Vec<usize> {
        (0..self.size).map(|x| if x == l { self.top } else { self.bot }).collect()
    }

    /// `τ_ℓ`: top on the principal up-set of `ℓ`, bottom elsewhere.
    pub fn tau_table(&self, l: usize) -> Vec<usize> {
        (0..self.size)
            .map(|x| if self.leq(l, x) { self.top } else { self.bot })
            .collect()
    }

    /// `χ_S = ⋁_{s∈S} T_s`.
    pub fn chi_table(&self, s: &[usize]) -> Vec<usize> {
        (0..self.size)
            .map(|x| self.join_all(s.iter().map(|&l| if x == l { self.top } else { self.bot })))
            .collect()
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    /// Whether the order is total.
    pub fn is_chain(&self) -> bool {
        (0..self.size).all(|x| (0..self.size).all(|y| self.leq(x, y) || self.leq(y, x)))
    }
}

fn binary_table<'a>(alg: &'a FiniteAlgebra, name: &str) -> Option<&'a [usize]> {
    alg.op_by_name(name).filter(|o| o.arity == 2).map(|o| o.table.as_slice())
}

/// Checks the lattice laws and boundedness for a pair of binary tables.
fn validate(n: usize, meet: &[usize], join: &[usize]) -> std::result::Result<(usize, usize, Vec<bool>), String> {
    let m = |x: usize, y: usize| meet[x * n + y];
    let j = |x: usize, y: usize| join[x * n + y];
    for x in 0..n {
        if m(x, x) != x || j(x, x) != x {
            return Err(format!("not idempotent at {x}"));
        }
        for y in 0..n {
            if m(x, y) != m(y, x) || j(x, y) != j(y, x) {
                return Err(format!("not commutative at ({x}, {y})"));
            }
            if m(x, j(x, y)) != x || j(x, m(x, y)) != x {
                return Err(format!("absorption fails at ({x}, {y})"));
            }
        }
    }
    let mut bad = None;
    for_each_tuple(n, 3, |t| {
        if bad.is_none() {
            let (x, y, z) = (t[0], t[1], t[2]);
            if m(m(x, y), z) != m(x, m(y, z)) || j(j(x, y), z) != j(x, j(y, z)) {
                bad = Some(format!("not associative at ({x}, {y}, {z})"));
            }
        }
    });
    if let Some(e) = bad {
        return Err(e);
    }
    let bot = (0..n).find(|&b| (0..n).all(|y| m(b, y) == b));
    let top = (0..n).find(|&t| (0..n).all(|y| m(t, y) == y));
    match (bot, top) {
        (Some(b), Some(t)) if b != t => {
            let leq = (0..n * n).map(|i| m(i / n, i % n) == i / n).collect();
            Ok((b, t, leq))
        }
        (Some(_), Some(_)) => Err("bottom equals top".into()),
        _ => Err("no bounds".into()),
    }
}

fn build(alg: &FiniteAlgebra, meet: &str, join: &str) -> std::result::Result<LatticeReduct, String> {
    let mt = binary_table(alg, meet).ok_or_else(|| format!("no binary operation `{meet}`"))?;
    let jt = binary_table(alg, join).ok_or_else(|| format!("no binary operation `{join}`"))?;
    let (bot, top, leq) = validate(alg.size(), mt, jt).map_err(|e| format!("({meet}, {join}): {e}"))?;
    Ok(LatticeReduct {
        meet_op: meet.into(),
        join_op: join.into(),
        size: alg.size(),
        meet: mt.to_vec(),
        join: jt.to_vec(),
        bot,
        top,
        leq,
        alternatives: Vec::new(),
    })
}

/// Finds a bounded-lattice reduct.
///
/// Explicit `hints`, then the algebra's own hint, then operations named
/// meet/∧ and join/∨, and finally every ordered pair of binary operations in
/// signature order. The first valid pair wins; further valid pairs found by the
/// scan are recorded in `alternatives`.
pub fn detect_lattice(alg: &FiniteAlgebra, hints: Option<(&str, &str)>) -> Result<LatticeReduct> {
    if let Some((m, j)) = hints {
        return build(alg, m, j).map_err(Error::NoLatticeReduct);
    }
    if let Some(h) = &alg.lattice_hint {
        return build(alg, &h.meet, &h.join).map_err(Error::NoLatticeReduct);
    }
    for m in MEET_NAMES {
        for j in JOIN_NAMES {
            if binary_table(alg, m).is_some() && binary_table(alg, j).is_some() {
                if let Ok(r) = build(alg, m, j) {
                    return Ok(r);
                }
            }
        }
    }
    let binaries: Vec<&str> = alg
        .ops()
        .iter()
        .filter(|o| o.arity == 2)
        .map(|o| o.name.as_str())
        .collect();
    let mut found: Option<LatticeReduct> = None;
    let mut alternatives = Vec::new();
    for &m in &binaries {
        for &j in &binaries {
            if m == j {
                continue;
            }
            if let Ok(r) = build(alg, m, j) {
                if found.is_none() {
                    found = Some(r);
                } else {
                    alternatives.push((m.to_string(), j.to_string()));
                }
            }
        }
    }
    match found {
        Some(mut r) => {
            r.alternatives = alternatives;
            Ok(r)
        }
        None => Err(Error::NoLatticeReduct(format!(
            "no pair of binary operations of `{}` forms a bounded lattice",
            alg.name
        ))),
    }
}

/// Which derived unary map to tabulate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "param", rename_all = "lowercase")]
pub enum DerivedKind {
    T(usize),
    Tau(usize),
    Chi(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivedUnary {
    #[serde(flatten)]
    pub kind: DerivedKind,
    pub table: Vec<usize>,
}

pub fn derived_unary(r: &LatticeReduct, kind: DerivedKind) -> Result<DerivedUnary> {
    let n = r.size();
    let check = |l: usize| {
        if l < n {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("element {l} outside carrier of size {n}")))
        }
    };
    let table = match &kind {
        DerivedKind::T(l) => {
            check(*l)?;
            r.t_table(*l)
        }
        DerivedKind::Tau(l) => {
            check(*l)?;
            r.tau_table(*l)
        }
        DerivedKind::Chi(s) => {
            for &l in s {
                check(l)?;
            }
            r.chi_table(s)
        }
    };
    Ok(DerivedUnary { kind, table })
}

/// Median `(x∧y) ∨ (x∧z) ∨ (y∧z)` as a row-major ternary table.
pub fn median_eval(r: &LatticeReduct) -> Vec<usize> {
    let mut out = Vec::with_capacity(r.size().pow(3));
    for_each_tuple(r.size(), 3, |t| {
        let (x, y, z) = (t[0], t[1], t[2]);
        out.push(r.join(r.join(r.meet(x, y), r.meet(x, z)), r.meet(y, z)));
    });
    out
}

/// The residuum `x → y = max{z : x⊙z ≤ y}` of a commutative monotone product,
/// validated against `x⊙y ≤ z ⇔ x ≤ y→z` on all triples.
pub fn residuum_from_monoid(alg: &FiniteAlgebra, r: &LatticeReduct, prod_op: &str) -> Result<Vec<usize>> {
    let prod = binary_table(alg, prod_op)
        .ok_or_else(|| Error::NotResiduated(format!("no binary operation `{prod_op}`")))?;
    residuum_of_table(r, prod)
}

pub fn residuum_of_table(r: &LatticeReduct, prod: &[usize]) -> Result<Vec<usize>> {
    let n = r.size();
    let p = |x: usize, y: usize| prod[x * n + y];
    for x in 0..n {
        for y in 0..n {
            if p(x, y) != p(y, x) {
                return Err(Error::NotResiduated(format!("product not commutative at ({x}, {y})")));
            }
            for z in 0..n {
                if r.leq(y, z) && !r.leq(p(x, y), p(x, z)) {
                    return Err(Error::NotResiduated(format!(
                        "product not monotone: {y} ≤ {z} but {x}⊙{y} ≰ {x}⊙{z}"
                    )));
                }
            }
        }
    }
    let mut imp = vec![0; n * n];
    for x in 0..n {
        for y in 0..n {
            let cands: Vec<usize> = (0..n).filter(|&z| r.leq(p(x, z), y)).collect();
            let max = cands
                .iter()
                .copied()
                .find(|&c| cands.iter().all(|&z| r.leq(z, c)))
                .ok_or_else(|| Error::NotResiduated(format!("no largest z with {x}⊙z ≤ {y}")))?;
            imp[x * n + y] = max;
        }
    }
    let mut bad = None;
    for_each_tuple(n, 3, |t| {
        let (x, y, z) = (t[0], t[1], t[2]);
        if bad.is_none() && r.leq(p(x, y), z) != r.leq(x, imp[y * n + z]) {
            bad = Some((x, y, z));
        }
    });
    if let Some((x, y, z)) = bad {
        return Err(Error::NotResiduated(format!("biconditional fails at ({x}, {y}, {z})")));
    }
    Ok(imp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn chain(n: usize) -> FiniteAlgebra {
        FiniteAlgebra::new(
            "chain",
            n,
            vec![
                FiniteAlgebra::op_from_fn("join", n, 2, |t| t[0].max(t[1])),
                FiniteAlgebra::op_from_fn("meet", n, 2, |t| t[0].min(t[1])),
            ],
        )
        .unwrap()
    }

    #[test]
    fn named_ops_are_preferred_over_order() {
        let r = detect_lattice(&chain(3), None).unwrap();
        assert_eq!((r.meet_op.as_str(), r.bot, r.top), ("meet", 0, 2));
        assert!(r.is_chain());
    }

    #[test]
    fn scan_finds_unnamed_pair_and_records_dual() {
        let n = 3;
        let a = FiniteAlgebra::new(
            "anon",
            n,
            vec![
                FiniteAlgebra::op_from_fn("f", n, 2, |t| t[0].min(t[1])),
                FiniteAlgebra::op_from_fn("g", n, 2, |t| t[0].max(t[1])),
            ],
        )
        .unwrap();
        let r = detect_lattice(&a, None).unwrap();
        assert_eq!((r.meet_op.as_str(), r.join_op.as_str()), ("f", "g"));
        assert_eq!(r.alternatives, vec![("g".to_string(), "f".to_string())]);
    }

    #[test]
    fn non_associative_meet_is_rejected() {
        let n = 3;
        let mut meet = FiniteAlgebra::op_from_fn("meet", n, 2, |t| t[0].min(t[1]));
        // Break one entry symmetrically so only associativity or absorption can catch it.
        meet.table[n + 2] = 0;
        meet.table[2 * n + 1] = 0;
        let a = FiniteAlgebra::new(
            "bad",
            n,
            vec![meet, FiniteAlgebra::op_from_fn("join", n, 2, |t| t[0].max(t[1]))],
        )
        .unwrap();
        assert!(matches!(detect_lattice(&a, None), Err(Error::NoLatticeReduct(_))));
    }

    #[test]
    fn derived_tables_on_five_chain() {
        let r = detect_lattice(&chain(5), None).unwrap();
        assert_eq!(r.t_table(2), vec![0, 0, 4, 0, 0]);
        assert_eq!(r.tau_table(2), vec![0, 0, 4, 4, 4]);
        assert_eq!(r.chi_table(&[0, 2, 4]), vec![4, 0, 4, 0, 4]);
        assert!(derived_unary(&r, DerivedKind::T(9)).is_err());
    }

    #[test]
    fn meet_as_product_gives_heyting_implication() {
        let r = detect_lattice(&chain(2), None).unwrap();
        let imp = residuum_of_table(&r, &[0, 0, 0, 1]).unwrap();
        assert_eq!(imp, vec![1, 1, 0, 1]);
    }

    #[test]
    fn non_monotone_product_is_not_residuated() {
        let r = detect_lattice(&chain(3), None).unwrap();
        // Commutative but antitone in each argument.
        let prod: Vec<usize> = (0..9).map(|i| 2 - (i / 3).max(i % 3)).collect();
        assert!(matches!(residuum_of_table(&r, &prod), Err(Error::NotResiduated(_))));
    }

    proptest! {
        #[test]
        fn median_is_majority(n in 2usize..6, x in 0usize..6, y in 0usize..6) {
            let (x, y) = (x % n, y % n);
            let r = detect_lattice(&chain(n), None).unwrap();
            let m = median_eval(&r);
            let at = |a: usize, b: usize, c: usize| m[(a * n + b) * n + c];
            prop_assert_eq!(at(x, x, y), x);
            prop_assert_eq!(at(x, y, x), x);
            prop_assert_eq!(at(y, x, x), x);
        }

        #[test]
        fn t_maps_partition_unity(n in 2usize..7) {
            let r = detect_lattice(&chain(n), None).unwrap();
            let ts: Vec<Vec<usize>> = (0..n).map(|l| r.t_table(l)).collect();
            for x in 0..n {
                prop_assert_eq!(r.join_all(ts.iter().map(|t| t[x])), r.top);
                for l in 0..n {
                    for k in 0..n {
                        if l != k {
                            prop_assert_eq!(r.meet(ts[l][x], ts[k][x]), r.bot);
                        }
                    }
                }
            }
        }
    }
}
