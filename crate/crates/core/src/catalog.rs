//! Named example algebras together with the verdicts expected of them.
//!
//! Chain families are generated from closed formulas. Residuated entries are
//! described in `data/catalog.json` by their order and a few product
//! relations; the full product table is recovered by an exhaustive
//! constraint search that must have exactly one solution.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::algebra::{for_each_tuple, FiniteAlgebra, Operation};
use crate::error::{Error, Result};
use crate::lattice::{detect_lattice, residuum_of_table, LatticeReduct};
use crate::primality::Level;

const GOLDEN: &str = include_str!("../data/catalog.json");

/// Largest chain parameter accepted by the family builders.
pub const MAX_CHAIN_N: usize = 255;

/// How many subuniverses a family member has, as a function of `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountRule {
    /// Every subset containing both bounds: `2^(n-1)`.
    InteriorSubsets,
    /// One per divisor of `n`.
    Divisors,
    /// `{0,1}` and the whole carrier.
    BoundsOnly,
    /// The whole carrier only.
    Whole,
    Unstated,
}

impl CountRule {
    pub fn count(self, n: usize) -> Option<usize> {
        match self {
            CountRule::InteriorSubsets => Some(1 << (n - 1)),
            CountRule::Divisors => Some((1..=n).filter(|&d| n.is_multiple_of(d)).count()),
            CountRule::BoundsOnly => Some(if n == 1 { 1 } else { 2 }),
            CountRule::Whole => Some(1),
            CountRule::Unstated => None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilyMeta {
    pub key: String,
    pub description: String,
    pub min_n: usize,
    pub level: Level,
    pub subuniverses: CountRule,
    pub note: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EntryMeta {
    pub key: String,
    pub param: Option<String>,
    pub elements: Vec<String>,
    /// Covering pairs `(lower, upper)` of the lattice order.
    pub order: Vec<(String, String)>,
    /// Product relations `x ⊙ y = z`.
    #[serde(default)]
    pub relations: Vec<(String, String, String)>,
    /// Monoid unit when it is not the top.
    #[serde(default)]
    pub unit: Option<String>,
    /// Generating pairs of the involution; completed symmetrically.
    #[serde(default)]
    pub inv: Vec<(String, String)>,
    /// Graph of the pseudo-negation.
    #[serde(default)]
    pub prime: Vec<(String, String)>,
    pub level: Level,
    pub subuniverses: Option<Vec<Vec<String>>>,
    pub note: String,
}

#[derive(Debug, Deserialize)]
struct Golden {
    version: u32,
    families: Vec<FamilyMeta>,
    entries: Vec<EntryMeta>,
}

fn golden() -> &'static Golden {
    static CELL: OnceLock<Golden> = OnceLock::new();
    CELL.get_or_init(|| {
        let g: Golden = serde_json::from_str(GOLDEN).expect("catalog metadata parses");
        assert_eq!(g.version, 1, "catalog metadata version");
        g
    })
}

/// Verdict metadata for one concrete algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Expected {
    pub level: Level,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subuniverse_count: Option<usize>,
    /// Subuniverses as sorted carrier indices, sorted by size then elements.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subuniverses: Option<Vec<Vec<usize>>>,
    pub note: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub key: String,
    pub param: Option<String>,
    #[serde(serialize_with = "ser_algebra")]
    pub algebra: FiniteAlgebra,
    /// Name of the monoid operation for residuated entries.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub product: Option<String>,
    pub expected: Expected,
}

fn ser_algebra<S: serde::Serializer>(a: &FiniteAlgebra, s: S) -> std::result::Result<S::Ok, S::Error> {
    a.to_json().serialize(s)
}

/// One line of [`list`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogInfo {
    pub key: String,
    /// `n >= k` for families, the fixed parameter otherwise.
    pub params: Option<String>,
    pub level: Level,
    pub note: String,
}

/// Every key with its expected verdict, families first, in file order.
pub fn list() -> Vec<CatalogInfo> {
    let g = golden();
    let fams = g.families.iter().map(|f| CatalogInfo {
        key: f.key.clone(),
        params: Some(format!("n >= {}", f.min_n)),
        level: f.level,
        note: f.note.clone(),
    });
    let entries = g.entries.iter().map(|e| CatalogInfo {
        key: e.key.clone(),
        params: e.param.clone(),
        level: e.level,
        note: e.note.clone(),
    });
    fams.chain(entries).collect()
}

/// The residuated entries described by relations, for table pinning.
pub fn relation_entries() -> &'static [EntryMeta] {
    &golden().entries
}

pub fn family_meta(key: &str) -> Option<&'static FamilyMeta> {
    golden().families.iter().find(|f| f.key == key)
}

/// Builds a catalog algebra.
///
/// Families take `n` as `param`; `flew` takes an entry name such as
/// `R_5_1_17` (also accepted directly as the key); `pseudologic` takes 1, 2
/// or 3; the De Morgan monoids take `e` (default) or `no_e`.
pub fn build(key: &str, param: Option<&str>) -> Result<CatalogEntry> {
    if key.starts_with("R_") && param.is_none() {
        return build("flew", Some(key));
    }
    if let Some(f) = family_meta(key) {
        let p = param.ok_or_else(|| Error::InvalidInput(format!("`{key}` needs a parameter n")))?;
        let n: usize = p
            .parse()
            .map_err(|_| Error::InvalidInput(format!("`{key}` parameter `{p}` is not an integer")))?;
        return build_family(f, n);
    }
    let param = match (key, param) {
        ("demorgan_C4" | "demorgan_D4", None) => Some("e"),
        (_, p) => p,
    };
    let meta = golden()
        .entries
        .iter()
        .find(|e| e.key == key && e.param.as_deref() == param)
        .ok_or_else(|| match param {
            Some(p) => Error::UnknownCatalogKey(format!("{key} {p}")),
            None => Error::UnknownCatalogKey(key.to_string()),
        })?;
    build_entry(meta)
}

/// Convenience for the chain families.
pub fn family(key: &str, n: usize) -> Result<FiniteAlgebra> {
    Ok(build(key, Some(&n.to_string()))?.algebra)
}

fn build_family(f: &FamilyMeta, n: usize) -> Result<CatalogEntry> {
    if n < f.min_n || n > MAX_CHAIN_N {
        return Err(Error::InvalidInput(format!(
            "`{}` needs {} <= n <= {MAX_CHAIN_N}, got {n}",
            f.key, f.min_n
        )));
    }
    let size = n + 1;
    let r = detect_lattice(&bounded_chain(n), None)?;
    let neg = |x: usize| n - x;
    let extra: Vec<Operation> = match f.key.as_str() {
        "general_chain" => (0..size)
            .map(|l| table_op(format!("T[{}]", chain_name(l, n)), 1, r.t_table(l)))
            .collect(),
        "moisil" => std::iter::once(FiniteAlgebra::op_from_fn("neg", size, 1, |t| neg(t[0])))
            .chain((1..size).map(|l| table_op(format!("tau[{}]", chain_name(l, n)), 1, r.tau_table(l))))
            .collect(),
        "lukasiewicz" => vec![
            FiniteAlgebra::op_from_fn("oplus", size, 2, |t| (t[0] + t[1]).min(n)),
            FiniteAlgebra::op_from_fn("odot", size, 2, |t| (t[0] + t[1]).saturating_sub(n)),
            FiniteAlgebra::op_from_fn("neg", size, 1, |t| neg(t[0])),
        ],
        "cornish" => vec![
            FiniteAlgebra::op_from_fn("neg", size, 1, |t| neg(t[0])),
            FiniteAlgebra::op_from_fn("f", size, 1, |t| if t[0] == 0 || t[0] == n { t[0] } else { t[0] + 1 }),
        ],
        "post" => vec![FiniteAlgebra::op_from_fn("prime", size, 1, |t| {
            if t[0] == n {
                0
            } else {
                t[0] + 1
            }
        })],
        "bounded_chain" => vec![],
        "goedel_chain" => {
            let prod: Vec<usize> = {
                let mut v = Vec::with_capacity(size * size);
                for_each_tuple(size, 2, |t| v.push(t[0].min(t[1])));
                v
            };
            let imp = residuum_of_table(&r, &prod)?;
            vec![table_op("prod", 2, prod), table_op("imp", 2, imp)]
        }
        other => return Err(Error::UnknownCatalogKey(other.to_string())),
    };
    let mut ops = bounded_chain(n).ops().to_vec();
    ops.extend(extra);
    let product = (f.key == "goedel_chain").then(|| "prod".to_string());
    let algebra = FiniteAlgebra::new(format!("{}_{n}", f.key), size, ops)?
        .with_element_names((0..size).map(|i| chain_name(i, n)).collect())?
        .with_lattice_hint("meet", "join");
    let level = match f.level {
        Level::SemiPrimal if n == 1 => Level::Primal,
        l => l,
    };
    Ok(CatalogEntry {
        key: f.key.clone(),
        param: Some(n.to_string()),
        algebra,
        product,
        expected: Expected {
            level,
            subuniverse_count: f.subuniverses.count(n),
            subuniverses: None,
            note: f.note.clone(),
        },
    })
}

/// `i/n` with the bounds written `0` and `1`.
pub fn chain_name(i: usize, n: usize) -> String {
    match i {
        0 => "0".into(),
        i if i == n => "1".into(),
        i => format!("{i}/{n}"),
    }
}

fn table_op(name: impl Into<String>, arity: usize, table: Vec<usize>) -> Operation {
    Operation {
        name: name.into(),
        arity,
        table,
    }
}

/// The chain `0 < 1 < ... < n` with meet, join and both bounds.
pub fn bounded_chain(n: usize) -> FiniteAlgebra {
    let size = n + 1;
    FiniteAlgebra::new(
        format!("chain_{n}"),
        size,
        vec![
            FiniteAlgebra::op_from_fn("meet", size, 2, |t| t[0].min(t[1])),
            FiniteAlgebra::op_from_fn("join", size, 2, |t| t[0].max(t[1])),
            FiniteAlgebra::op_from_fn("zero", size, 0, |_| 0),
            FiniteAlgebra::op_from_fn("one", size, 0, |_| n),
        ],
    )
    .expect("chain tables are well formed")
    .with_lattice_hint("meet", "join")
}

/// Meet and join tables of the lattice generated by covering pairs, or an
/// error if the order is not a bounded lattice.
pub fn lattice_from_covers(n: usize, covers: &[(usize, usize)]) -> Result<(Vec<usize>, Vec<usize>)> {
    let mut leq = vec![false; n * n];
    for x in 0..n {
        leq[x * n + x] = true;
    }
    for &(a, b) in covers {
        leq[a * n + b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if leq[i * n + k] && leq[k * n + j] {
                    leq[i * n + j] = true;
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && leq[i * n + j] && leq[j * n + i] {
                return Err(Error::InvalidAlgebra(format!("order has a cycle through {i} and {j}")));
            }
        }
    }
    let bound = |x: usize, y: usize, lower: bool| -> Result<usize> {
        let below = |a: usize, b: usize| if lower { leq[a * n + b] } else { leq[b * n + a] };
        let cands: Vec<usize> = (0..n).filter(|&z| below(z, x) && below(z, y)).collect();
        cands
            .iter()
            .copied()
            .find(|&c| cands.iter().all(|&z| below(z, c)))
            .ok_or_else(|| Error::InvalidAlgebra(format!("{x} and {y} have no {}", if lower { "meet" } else { "join" })))
    };
    let mut meet = vec![0; n * n];
    let mut join = vec![0; n * n];
    for x in 0..n {
        for y in 0..n {
            meet[x * n + y] = bound(x, y, true)?;
            join[x * n + y] = bound(x, y, false)?;
        }
    }
    Ok((meet, join))
}

/// Every commutative, order-preserving monoid table with identity `unit`,
/// absorbing bottom and the given relations that is associative and
/// residuated. Bottom absorbs because the product preserves the empty join.
pub fn monoid_completions(r: &LatticeReduct, unit: usize, relations: &[(usize, usize, usize)]) -> Vec<Vec<usize>> {
    let n = r.size();
    let mut table: Vec<Option<usize>> = vec![None; n * n];
    let mut fixed = Vec::new();
    for x in 0..n {
        fixed.push((unit, x, x));
        fixed.push((r.bot, x, r.bot));
    }
    fixed.extend_from_slice(relations);
    for (x, y, z) in fixed {
        for (i, j) in [(x, y), (y, x)] {
            match table[i * n + j] {
                Some(v) if v != z => return vec![],
                _ => table[i * n + j] = Some(z),
            }
        }
    }
    if !(0..n * n).all(|c| table[c].is_none() || monotone_at(r, &table, c / n, c % n)) {
        return vec![];
    }
    let cells: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (x..n).map(move |y| (x, y)))
        .filter(|&(x, y)| table[x * n + y].is_none())
        .collect();
    let mut out = Vec::new();
    search(r, &mut table, &cells, 0, &mut out);
    out
}

fn monotone_at(r: &LatticeReduct, table: &[Option<usize>], x: usize, y: usize) -> bool {
    let n = r.size();
    let v = table[x * n + y].expect("cell assigned");
    (0..n).all(|x2| {
        (0..n).all(|y2| match table[x2 * n + y2] {
            None => true,
            Some(w) => {
                (!(r.leq(x, x2) && r.leq(y, y2)) || r.leq(v, w)) && (!(r.leq(x2, x) && r.leq(y2, y)) || r.leq(w, v))
            }
        })
    })
}

fn search(
    r: &LatticeReduct,
    table: &mut Vec<Option<usize>>,
    cells: &[(usize, usize)],
    i: usize,
    out: &mut Vec<Vec<usize>>,
) {
    let n = r.size();
    if i == cells.len() {
        let prod: Vec<usize> = table.iter().map(|v| v.expect("complete")).collect();
        let assoc = (0..n).all(|x| {
            (0..n).all(|y| (0..n).all(|z| prod[prod[x * n + y] * n + z] == prod[x * n + prod[y * n + z]]))
        });
        if assoc && residuum_of_table(r, &prod).is_ok() {
            out.push(prod);
        }
        return;
    }
    let (x, y) = cells[i];
    for v in 0..n {
        table[x * n + y] = Some(v);
        table[y * n + x] = Some(v);
        if monotone_at(r, table, x, y) {
            search(r, table, cells, i + 1, out);
        }
    }
    table[x * n + y] = None;
    table[y * n + x] = None;
}

/// The unique completion, or the ambiguity/infeasibility error.
pub fn complete_monoid(r: &LatticeReduct, unit: usize, relations: &[(usize, usize, usize)]) -> Result<Vec<usize>> {
    let mut all = monoid_completions(r, unit, relations);
    match all.len() {
        0 => Err(Error::ConstructionInfeasible(
            "no associative residuated monoid satisfies the relations".into(),
        )),
        1 => Ok(all.pop().expect("one solution")),
        count => Err(Error::ConstructionAmbiguous { count, candidates: all }),
    }
}

/// Every product completion of a relation-described entry; a well-posed
/// entry has exactly one.
pub fn entry_completions(key: &str, param: Option<&str>) -> Result<Vec<Vec<usize>>> {
    let meta = golden()
        .entries
        .iter()
        .find(|e| e.key == key && e.param.as_deref() == param && !e.relations.is_empty())
        .ok_or_else(|| Error::UnknownCatalogKey(format!("{key} {}", param.unwrap_or(""))))?;
    let n = meta.elements.len();
    let idx = |s: &str| meta.elements.iter().position(|x| x == s).expect("validated by build");
    let covers: Vec<(usize, usize)> = meta.order.iter().map(|(a, b)| (idx(a), idx(b))).collect();
    let (meet, join) = lattice_from_covers(n, &covers)?;
    let lattice = FiniteAlgebra::new(
        "lattice",
        n,
        vec![table_op("meet", 2, meet), table_op("join", 2, join)],
    )?;
    let r = detect_lattice(&lattice, Some(("meet", "join")))?;
    let relations: Vec<(usize, usize, usize)> =
        meta.relations.iter().map(|(x, y, z)| (idx(x), idx(y), idx(z))).collect();
    let unit = meta.unit.as_deref().map_or(r.top, idx);
    Ok(monoid_completions(&r, unit, &relations))
}

fn build_entry(meta: &EntryMeta) -> Result<CatalogEntry> {
    let names = &meta.elements;
    let n = names.len();
    let idx = |s: &str| -> Result<usize> {
        names
            .iter()
            .position(|x| x == s)
            .ok_or_else(|| Error::InvalidAlgebra(format!("unknown element `{s}` in `{}`", meta.key)))
    };
    let covers = meta
        .order
        .iter()
        .map(|(a, b)| Ok((idx(a)?, idx(b)?)))
        .collect::<Result<Vec<_>>>()?;
    let (meet, join) = lattice_from_covers(n, &covers)?;
    let lattice = FiniteAlgebra::new(
        "lattice",
        n,
        vec![table_op("meet", 2, meet.clone()), table_op("join", 2, join.clone())],
    )?;
    let r = detect_lattice(&lattice, Some(("meet", "join")))?;
    let mut ops = vec![
        table_op("meet", 2, meet),
        table_op("join", 2, join),
        table_op("zero", 0, vec![r.bot]),
        table_op("one", 0, vec![r.top]),
    ];
    let mut product = None;
    if !meta.prime.is_empty() {
        let mut prime = vec![usize::MAX; n];
        for (a, b) in &meta.prime {
            prime[idx(a)?] = idx(b)?;
        }
        if prime.contains(&usize::MAX) {
            return Err(Error::InvalidAlgebra(format!("`{}`: pseudo-negation is partial", meta.key)));
        }
        ops.push(table_op("prime", 1, prime));
    } else {
        let relations = meta
            .relations
            .iter()
            .map(|(x, y, z)| Ok((idx(x)?, idx(y)?, idx(z)?)))
            .collect::<Result<Vec<_>>>()?;
        let unit = match &meta.unit {
            Some(u) => idx(u)?,
            None => r.top,
        };
        let prod = complete_monoid(&r, unit, &relations)?;
        let imp = residuum_of_table(&r, &prod)?;
        ops.push(table_op("prod", 2, prod));
        ops.push(table_op("imp", 2, imp));
        if meta.unit.is_some() {
            if meta.param.as_deref() != Some("no_e") {
                ops.push(table_op("e", 0, vec![unit]));
            }
            ops.push(table_op("inv", 1, involution(meta, n, &idx, &r)?));
        }
        product = Some("prod".to_string());
    }
    let name = match &meta.param {
        Some(p) if meta.key == "flew" => p.clone(),
        Some(p) => format!("{}_{p}", meta.key),
        None => meta.key.clone(),
    };
    let algebra = FiniteAlgebra::new(name, n, ops)?
        .with_element_names(names.clone())?
        .with_lattice_hint("meet", "join");
    let subuniverses = match &meta.subuniverses {
        None => None,
        Some(list) => {
            let mut sets = Vec::new();
            for s in list {
                let mut v = s.iter().map(|x| idx(x)).collect::<Result<Vec<_>>>()?;
                v.sort_unstable();
                sets.push(v);
            }
            sets.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
            Some(sets)
        }
    };
    Ok(CatalogEntry {
        key: meta.key.clone(),
        param: meta.param.clone(),
        algebra,
        product,
        expected: Expected {
            level: meta.level,
            subuniverse_count: subuniverses.as_ref().map(Vec::len),
            subuniverses,
            note: meta.note.clone(),
        },
    })
}

fn involution(
    meta: &EntryMeta,
    n: usize,
    idx: &dyn Fn(&str) -> Result<usize>,
    r: &LatticeReduct,
) -> Result<Vec<usize>> {
    let mut inv = vec![usize::MAX; n];
    for (a, b) in &meta.inv {
        let (a, b) = (idx(a)?, idx(b)?);
        inv[a] = b;
        inv[b] = a;
    }
    let bad = inv.contains(&usize::MAX)
        || (0..n).any(|x| inv[inv[x]] != x)
        || (0..n).any(|x| (0..n).any(|y| r.leq(x, y) && !r.leq(inv[y], inv[x])));
    if bad {
        return Err(Error::InvalidAlgebra(format!(
            "`{}`: stated pairs do not extend to an order-reversing involution",
            meta.key
        )));
    }
    Ok(inv)
}

/// The two sufficient conditions for pseudo-logics: no `a > 0` with `a' = 1`,
/// and every `a < 1` meets some even iterate `a^(2k)`, `k ≥ 1`, in bottom.
/// The top is excluded since `1'' = 1` in every pseudo-logic.
pub fn pseudologic_conditions(alg: &FiniteAlgebra) -> Result<(bool, bool)> {
    let r = detect_lattice(alg, None)?;
    let prime = alg
        .op_by_name("prime")
        .filter(|o| o.arity == 1)
        .ok_or_else(|| Error::InvalidInput(format!("`{}` has no unary `prime`", alg.name)))?;
    let p = |x: usize| prime.table[x];
    let n = alg.size();
    let first = (0..n).all(|a| a == r.bot || p(a) != r.top);
    let second = (0..n).filter(|&a| a != r.top).all(|a| {
        let mut x = a;
        (1..=n).any(|_| {
            x = p(p(x));
            r.meet(a, x) == r.bot
        })
    });
    Ok((first, second))
}

/// Keys of the residuated catalog entries in file order.
pub fn flew_keys() -> Vec<String> {
    golden()
        .entries
        .iter()
        .filter(|e| e.key == "flew")
        .filter_map(|e| e.param.clone())
        .collect()
}

/// Subuniverses of `alg` written with element names, for display.
pub fn named_sets(alg: &FiniteAlgebra, sets: &[Vec<usize>]) -> Vec<BTreeSet<String>> {
    sets.iter()
        .map(|s| s.iter().map(|&x| alg.element_name(x)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::derived_unary;
    use crate::lattice::DerivedKind;

    #[test]
    fn list_is_deterministic_and_complete() {
        let l = list();
        assert_eq!(l, list());
        let keys: BTreeSet<&str> = l.iter().map(|i| i.key.as_str()).collect();
        for k in ["post", "moisil", "cornish", "lukasiewicz", "general_chain", "demorgan_C4", "demorgan_D4"] {
            assert!(keys.contains(k), "{k}");
        }
        assert_eq!(flew_keys().len(), 8);
        let dm: Vec<_> = l.iter().filter(|i| i.key.starts_with("demorgan")).collect();
        assert_eq!(dm.len(), 4);
    }

    #[test]
    fn every_entry_builds_and_has_a_lattice() {
        for info in list() {
            let entry = match info.params.as_deref() {
                Some(p) if p.starts_with("n >= ") => build(&info.key, Some(&p[5..])),
                p => build(&info.key, p),
            }
            .unwrap();
            detect_lattice(&entry.algebra, None).unwrap();
        }
    }

    #[test]
    fn lukasiewicz_tables() {
        let l = family("lukasiewicz", 4).unwrap();
        assert_eq!(l.size(), 5);
        let odot = l.op_index("odot").unwrap();
        assert_eq!(l.apply(odot, &[3, 2]), 1);
        assert_eq!(l.apply(odot, &[1, 2]), 0);
        assert_eq!(l.element_name(2), "2/4");
    }

    #[test]
    fn moisil_term_identities() {
        for n in 1..6 {
            let m = family("moisil", n).unwrap();
            let r = detect_lattice(&m, None).unwrap();
            let t1 = derived_unary(&r, DerivedKind::T(n)).unwrap().table;
            let t0 = derived_unary(&r, DerivedKind::T(0)).unwrap().table;
            let tau1 = &m.op_by_name(&format!("tau[{}]", chain_name(n, n))).unwrap().table;
            let neg = &m.op_by_name("neg").unwrap().table;
            assert_eq!(&t1, tau1);
            let composed: Vec<usize> = (0..=n).map(|x| t1[neg[x]]).collect();
            assert_eq!(t0, composed);
        }
    }

    #[test]
    fn cornish_and_post_shift() {
        let c = family("cornish", 3).unwrap();
        assert_eq!(c.op_by_name("f").unwrap().table, vec![0, 2, 3, 3]);
        let p = family("post", 3).unwrap();
        assert_eq!(p.op_by_name("prime").unwrap().table, vec![1, 2, 3, 0]);
    }

    #[test]
    fn flew_alias_and_unknown_keys() {
        let a = build("R_5_1_20", None).unwrap();
        assert_eq!(a.algebra.name, "R_5_1_20");
        assert!(matches!(build("nope", None), Err(Error::UnknownCatalogKey(_))));
        assert!(matches!(build("lukasiewicz", None), Err(Error::InvalidInput(_))));
        assert!(matches!(build("lukasiewicz", Some("0")), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn diamond_is_not_a_lattice_without_both_covers() {
        assert!(lattice_from_covers(3, &[(0, 1), (0, 2)]).is_err());
        assert!(lattice_from_covers(2, &[(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn unconstrained_monoid_is_ambiguous() {
        let chain = bounded_chain(2);
        let r = detect_lattice(&chain, None).unwrap();
        match complete_monoid(&r, 2, &[]) {
            Err(Error::ConstructionAmbiguous { count, candidates }) => {
                assert_eq!(count, 2);
                assert_eq!(candidates.len(), 2);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn contradictory_relations_are_infeasible() {
        let r = detect_lattice(&bounded_chain(2), None).unwrap();
        assert!(matches!(
            complete_monoid(&r, 2, &[(1, 1, 2)]),
            Err(Error::ConstructionInfeasible(_))
        ));
    }
}
