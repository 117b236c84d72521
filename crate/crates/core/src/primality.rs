//! Primal, semi-primal and quasi-primal decision procedures.
//!
//! All term-definability questions are reduced to preservation of the
//! subuniverses of `A²`, which is sound because the lattice median is a
//! majority term.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{for_each_tuple, tuple_index, FiniteAlgebra, DEFAULT_CAP};
use crate::error::{Error, Result};
use crate::hom::{internal_isomorphisms_among, InternalIso};
use crate::lattice::{residuum_of_table, LatticeReduct};
use crate::product::direct_product;
use crate::subuniverse::{enumerate_subuniverses, subuniverse_closure, SubUniverse};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Level {
    Primal,
    SemiPrimal,
    QuasiPrimalOnly,
    None,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Primal => "primal",
            Level::SemiPrimal => "semi-primal",
            Level::QuasiPrimalOnly => "quasi-primal-only",
            Level::None => "none",
        })
    }
}

impl Level {
    pub fn is_semi_primal(self) -> bool {
        matches!(self, Level::Primal | Level::SemiPrimal)
    }

    pub fn is_quasi_primal(self) -> bool {
        self != Level::None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    /// Every `T_ℓ` preserves the subuniverses of `A²`.
    TRoute,
    /// Every subuniverse of `A²` is a product or a diagonal.
    SquareRoute,
    /// Quasi-primal and every internal isomorphism is an identity.
    DiscriminatorRoute,
    All,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::TRoute => "t-route",
            Route::SquareRoute => "square-route",
            Route::DiscriminatorRoute => "discriminator-route",
            Route::All => "all",
        })
    }
}

impl std::str::FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "t" | "t-route" => Ok(Route::TRoute),
            "square" | "square-route" => Ok(Route::SquareRoute),
            "discriminator" | "discriminator-route" => Ok(Route::DiscriminatorRoute),
            "all" => Ok(Route::All),
            other => Err(Error::InvalidInput(format!("unknown route `{other}`"))),
        }
    }
}

/// Why a level was not reached.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// `T_ℓ` maps `pair ∈ relation` outside `relation`.
    TNotPreserved {
        ell: usize,
        relation: Vec<(usize, usize)>,
        pair: (usize, usize),
    },
    /// A subuniverse of `A²` that is neither a product nor a diagonal.
    SquareSubuniverse { relation: Vec<(usize, usize)> },
    /// An internal isomorphism other than an identity.
    InternalIsomorphism {
        domain: SubUniverse,
        codomain: SubUniverse,
        pairs: Vec<(usize, usize)>,
    },
    /// The discriminator maps `args` (all in `relation`) outside `relation`.
    DiscriminatorNotPreserved {
        relation: Vec<(usize, usize)>,
        args: [(usize, usize); 3],
    },
    /// A subuniverse other than the whole carrier, so not primal.
    ProperSubuniverse { elements: Vec<usize> },
}

/// Outcome of every route when all were run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RouteReport {
    pub t_route: bool,
    pub square_route: bool,
    pub discriminator_route: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimalityVerdict {
    pub level: Level,
    pub route: Route,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub routes: Option<RouteReport>,
}

/// A binary relation on the carrier, given as its pair list and a membership table.
#[derive(Clone, Debug)]
pub struct Relation {
    n: usize,
    pub pairs: Vec<(usize, usize)>,
    member: Vec<bool>,
}

impl Relation {
    fn from_codes(n: usize, codes: &[usize]) -> Self {
        let mut member = vec![false; n * n];
        let pairs = codes
            .iter()
            .map(|&c| {
                member[c] = true;
                (c / n, c % n)
            })
            .collect();
        Relation { n, pairs, member }
    }

    #[inline]
    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.member[x * self.n + y]
    }
}

/// Subuniverses of `A` and of `A²`, shared by every route.
///
/// The subuniverses of `A²` generated by one pair are computed eagerly; the
/// full list, which can be exponential in `|A|`, only on first use.
#[derive(Debug)]
pub struct SquareData {
    pub subs: Vec<SubUniverse>,
    n: usize,
    square: FiniteAlgebra,
    principal: Vec<Relation>,
    relations: OnceLock<Vec<Relation>>,
}

impl SquareData {
    pub fn new(alg: &FiniteAlgebra) -> Result<Self> {
        let n = alg.size();
        let square = direct_product(&alg.signature(), &[alg, alg], DEFAULT_CAP)?.algebra;
        let principal = (0..n * n)
            .map(|c| Ok(Relation::from_codes(n, &subuniverse_closure(&square, &[c])?.elements())))
            .collect::<Result<_>>()?;
        Ok(SquareData {
            subs: enumerate_subuniverses(alg),
            n,
            square,
            principal,
            relations: OnceLock::new(),
        })
    }

    /// `Sg{(x, y)}` in `A²`.
    pub fn principal(&self, x: usize, y: usize) -> &Relation {
        &self.principal[x * self.n + y]
    }

    /// Every subuniverse of `A²`.
    pub fn relations(&self) -> &[Relation] {
        self.relations.get_or_init(|| {
            enumerate_subuniverses(&self.square)
                .iter()
                .map(|s| Relation::from_codes(self.n, &s.elements()))
                .collect()
        })
    }
}

/// First tuple (lexicographic) whose image under `f` leaves the subuniverse
/// generated by the tuple's entries.
pub fn preserves_subuniverses(alg: &FiniteAlgebra, f: &[usize], arity: usize) -> Result<Option<Vec<usize>>> {
    let n = alg.size();
    if f.len() as u128 != crate::algebra::checked_pow(n, arity) || f.iter().any(|&v| v >= n) {
        return Err(Error::InvalidInput("function table has the wrong shape".into()));
    }
    let mut bad = None;
    for_each_tuple(n, arity, |t| {
        if bad.is_none() {
            let closure = subuniverse_closure(alg, t).expect("tuple entries are in range");
            if !closure.contains(f[tuple_index(t, n)]) {
                bad = Some(t.to_vec());
            }
        }
    });
    Ok(bad)
}

/// The ternary discriminator as a row-major table.
pub fn discriminator_table(n: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(n * n * n);
    for_each_tuple(n, 3, |t| out.push(if t[0] == t[1] { t[2] } else { t[0] }));
    out
}

/// The discriminator assembled from `T`-maps and lattice operations:
/// `c(x,y) = ⋁_ℓ T_ℓ(x) ∧ T_ℓ(y)`, `d = T_⊥ ∘ c`, `t = (d ∧ x) ∨ (c ∧ z)`.
pub fn build_discriminator_from_t(r: &LatticeReduct) -> Vec<usize> {
    let n = r.size();
    let ts: Vec<Vec<usize>> = (0..n).map(|l| r.t_table(l)).collect();
    let t_bot = &ts[r.bot];
    let c = |x: usize, y: usize| r.join_all((0..n).map(|l| r.meet(ts[l][x], ts[l][y])));
    let mut out = Vec::with_capacity(n * n * n);
    for_each_tuple(n, 3, |t| {
        let (x, y, z) = (t[0], t[1], t[2]);
        let cxy = c(x, y);
        let d = t_bot[cxy];
        out.push(r.join(r.meet(d, x), r.meet(cxy, z)));
    });
    out
}

fn bounds_in_every_subuniverse(alg: &FiniteAlgebra, r: &LatticeReduct) -> bool {
    (0..alg.size()).all(|x| {
        let s = subuniverse_closure(alg, &[x]).expect("in range");
        s.contains(r.bot) && s.contains(r.top)
    })
}

fn t_route(alg: &FiniteAlgebra, r: &LatticeReduct, sq: &SquareData) -> Result<Option<Witness>> {
    if !bounds_in_every_subuniverse(alg, r) {
        return Err(Error::BoundsNotInSubuniverses);
    }
    // A unary map preserves every subuniverse of A² iff it sends each pair
    // into the subuniverse that pair generates.
    let n = alg.size();
    for l in 0..n {
        let t = r.t_table(l);
        for x in 0..n {
            for y in 0..n {
                let rel = sq.principal(x, y);
                if !rel.contains(t[x], t[y]) {
                    return Ok(Some(Witness::TNotPreserved {
                        ell: l,
                        relation: rel.pairs.clone(),
                        pair: (x, y),
                    }));
                }
            }
        }
    }
    Ok(None)
}

fn is_product_or_diagonal(rel: &Relation) -> bool {
    let first: BTreeSet<usize> = rel.pairs.iter().map(|p| p.0).collect();
    let second: BTreeSet<usize> = rel.pairs.iter().map(|p| p.1).collect();
    let diagonal = rel.pairs.iter().all(|(x, y)| x == y);
    diagonal || rel.pairs.len() == first.len() * second.len()
}

fn square_route(sq: &SquareData) -> Option<Witness> {
    let bad = |rels: &[Relation]| {
        rels.iter()
            .find(|rel| !is_product_or_diagonal(rel))
            .map(|rel| Witness::SquareSubuniverse {
                relation: rel.pairs.clone(),
            })
    };
    bad(&sq.principal).or_else(|| bad(sq.relations()))
}

/// A subuniverse of `A²` not preserved by the discriminator; one-generated
/// subuniverses are tried before the full list.
fn discriminator_violation(sq: &SquareData) -> Option<Witness> {
    discriminator_violation_in(&sq.principal).or_else(|| discriminator_violation_in(sq.relations()))
}

fn discriminator_violation_in(relations: &[Relation]) -> Option<Witness> {
    relations.par_iter().find_map_first(|rel| {
        for &a in &rel.pairs {
            for &b in &rel.pairs {
                let (x_eq, y_eq) = (a.0 == b.0, a.1 == b.1);
                if x_eq && y_eq {
                    continue;
                }
                for &c in &rel.pairs {
                    let x = if x_eq { c.0 } else { a.0 };
                    let y = if y_eq { c.1 } else { a.1 };
                    if !rel.contains(x, y) {
                        return Some(Witness::DiscriminatorNotPreserved {
                            relation: rel.pairs.clone(),
                            args: [a, b, c],
                        });
                    }
                }
            }
        }
        None
    })
}

fn first_non_identity(isos: Vec<InternalIso>) -> Option<Witness> {
    isos.into_iter().find(|i| !i.is_identity()).map(|i| Witness::InternalIsomorphism {
        domain: i.domain,
        codomain: i.codomain,
        pairs: i.pairs,
    })
}

fn discriminator_route(alg: &FiniteAlgebra, sq: &SquareData) -> Option<Witness> {
    discriminator_violation(sq).or_else(|| first_non_identity(internal_isomorphisms_among(alg, &sq.subs)))
}

/// Whether the discriminator is a term function; the witness is the first
/// subuniverse of `A²` it fails to preserve.
pub fn is_quasi_primal(alg: &FiniteAlgebra, _r: &LatticeReduct) -> Result<Option<Witness>> {
    Ok(discriminator_violation(&SquareData::new(alg)?))
}

fn finish(
    alg: &FiniteAlgebra,
    sq: &SquareData,
    route: Route,
    semi: Option<Witness>,
    routes: Option<RouteReport>,
) -> PrimalityVerdict {
    let (level, witness) = match semi {
        None => match sq.subs.iter().find(|s| s.len() != alg.size()) {
            None => (Level::Primal, None),
            Some(s) => (
                Level::SemiPrimal,
                Some(Witness::ProperSubuniverse { elements: s.elements() }),
            ),
        },
        Some(w) => {
            let level = if discriminator_violation(sq).is_none() {
                Level::QuasiPrimalOnly
            } else {
                Level::None
            };
            (level, Some(w))
        }
    };
    PrimalityVerdict {
        level,
        route,
        witness,
        routes,
    }
}

/// Semi-primality by the chosen route; the level additionally distinguishes
/// primal and quasi-primal-only.
pub fn is_semi_primal(alg: &FiniteAlgebra, r: &LatticeReduct, route: Route) -> Result<PrimalityVerdict> {
    let sq = SquareData::new(alg)?;
    is_semi_primal_with(alg, r, route, &sq)
}

pub fn is_semi_primal_with(
    alg: &FiniteAlgebra,
    r: &LatticeReduct,
    route: Route,
    sq: &SquareData,
) -> Result<PrimalityVerdict> {
    match route {
        Route::TRoute => Ok(finish(alg, sq, route, t_route(alg, r, sq)?, None)),
        Route::SquareRoute => Ok(finish(alg, sq, route, square_route(sq), None)),
        Route::DiscriminatorRoute => Ok(finish(alg, sq, route, discriminator_route(alg, sq), None)),
        Route::All => {
            let t = t_route(alg, r, sq)?;
            let s = square_route(sq);
            let d = discriminator_route(alg, sq);
            let report = RouteReport {
                t_route: t.is_none(),
                square_route: s.is_none(),
                discriminator_route: d.is_none(),
            };
            if report.t_route != report.square_route || report.square_route != report.discriminator_route {
                return Err(Error::RouteDisagreement(format!(
                    "`{}`: t-route {}, square-route {}, discriminator-route {}",
                    alg.name, report.t_route, report.square_route, report.discriminator_route
                )));
            }
            Ok(finish(alg, sq, route, d, Some(report)))
        }
    }
}

/// Primal iff semi-primal with no proper subuniverse.
pub fn is_primal(alg: &FiniteAlgebra, r: &LatticeReduct) -> Result<PrimalityVerdict> {
    is_semi_primal(alg, r, Route::SquareRoute)
}

fn binary_op<'a>(alg: &'a FiniteAlgebra, name: &str) -> Result<&'a [usize]> {
    alg.op_by_name(name)
        .filter(|o| o.arity == 2)
        .map(|o| o.table.as_slice())
        .ok_or_else(|| Error::InvalidInput(format!("no binary operation `{name}`")))
}

/// Checks the FL_ew axioms for `prod` over the lattice reduct and returns the residuum.
pub fn validate_flew(alg: &FiniteAlgebra, r: &LatticeReduct, prod_op: &str) -> Result<Vec<usize>> {
    let n = alg.size();
    let p = binary_op(alg, prod_op).map_err(|e| Error::NotFLew(e.to_string()))?;
    for x in 0..n {
        if p[r.top * n + x] != x || p[x * n + r.top] != x {
            return Err(Error::NotFLew(format!("top is not the unit at {x}")));
        }
    }
    let mut bad = None;
    for_each_tuple(n, 3, |t| {
        let (x, y, z) = (t[0], t[1], t[2]);
        if bad.is_none() && p[p[x * n + y] * n + z] != p[x * n + p[y * n + z]] {
            bad = Some((x, y, z));
        }
    });
    if let Some((x, y, z)) = bad {
        return Err(Error::NotFLew(format!("product not associative at ({x}, {y}, {z})")));
    }
    residuum_of_table(r, p).map_err(|e| Error::NotFLew(e.to_string()))
}

/// Least `n ≤ max_n` with `x ∨ ¬(xⁿ) = ⊤` for every `x`, where `¬x = x → ⊥`.
pub fn flew_quasiprimal_witness(
    alg: &FiniteAlgebra,
    r: &LatticeReduct,
    prod_op: &str,
    max_n: usize,
) -> Result<Option<usize>> {
    let size = alg.size();
    let imp = validate_flew(alg, r, prod_op)?;
    let p = binary_op(alg, prod_op)?;
    let neg = |x: usize| imp[x * size + r.bot];
    let mut power: Vec<usize> = (0..size).collect();
    for k in 1..=max_n {
        if (0..size).all(|x| r.join(x, neg(power[x])) == r.top) {
            return Ok(Some(k));
        }
        for (x, px) in power.iter_mut().enumerate() {
            *px = p[*px * size + x];
        }
    }
    Ok(None)
}

/// All `x` with `x ⊙ x = x`.
pub fn idempotent_elements(alg: &FiniteAlgebra, prod_op: &str) -> Result<Vec<usize>> {
    let n = alg.size();
    let p = binary_op(alg, prod_op)?;
    Ok((0..n).filter(|&x| p[x * n + x] == x).collect())
}

/// Unary term functions, generated by composing the basic operations starting
/// from the identity. Independent of the square criterion; tiny carriers only.
pub fn unary_clone(alg: &FiniteAlgebra) -> Result<BTreeSet<Vec<usize>>> {
    let n = alg.size();
    if n > 3 {
        return Err(Error::SizeCapExceeded {
            requested: n as u128,
            cap: 3,
        });
    }
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    found.insert((0..n).collect());
    loop {
        let current: Vec<Vec<usize>> = found.iter().cloned().collect();
        let mut grew = false;
        for op in alg.ops() {
            let mut fresh = Vec::new();
            for_each_tuple(current.len(), op.arity, |c| {
                let f: Vec<usize> = (0..n)
                    .map(|x| {
                        let args: Vec<usize> = c.iter().map(|&i| current[i][x]).collect();
                        op.table[tuple_index(&args, n)]
                    })
                    .collect();
                fresh.push(f);
            });
            for f in fresh {
                grew |= found.insert(f);
            }
        }
        if !grew {
            return Ok(found);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::detect_lattice;

    fn bounded_chain(n: usize, extra: Vec<crate::algebra::Operation>) -> FiniteAlgebra {
        let mut ops = vec![
            FiniteAlgebra::op_from_fn("meet", n, 2, |t| t[0].min(t[1])),
            FiniteAlgebra::op_from_fn("join", n, 2, |t| t[0].max(t[1])),
            FiniteAlgebra::op_from_fn("zero", n, 0, |_| 0),
            FiniteAlgebra::op_from_fn("one", n, 0, |_| n - 1),
        ];
        ops.extend(extra);
        FiniteAlgebra::new("chain", n, ops).unwrap()
    }

    #[test]
    fn pure_three_chain_is_not_quasi_primal() {
        let a = bounded_chain(3, vec![]);
        let r = detect_lattice(&a, None).unwrap();
        let v = is_semi_primal(&a, &r, Route::All).unwrap();
        assert_eq!(v.level, Level::None);
        assert!(is_quasi_primal(&a, &r).unwrap().is_some());
    }

    #[test]
    fn two_element_lattice_needs_complement_to_be_primal() {
        let a = bounded_chain(2, vec![]);
        let r = detect_lattice(&a, None).unwrap();
        assert_eq!(is_semi_primal(&a, &r, Route::All).unwrap().level, Level::None);
        let b = bounded_chain(2, vec![FiniteAlgebra::op_from_fn("neg", 2, 1, |t| 1 - t[0])]);
        let rb = detect_lattice(&b, None).unwrap();
        assert_eq!(is_semi_primal(&b, &rb, Route::All).unwrap().level, Level::Primal);
    }

    #[test]
    fn discriminator_term_matches_on_chain_with_all_t() {
        let n = 4;
        let extra = (0..n)
            .map(|l| FiniteAlgebra::op_from_fn(format!("T_{l}"), n, 1, move |t| if t[0] == l { n - 1 } else { 0 }))
            .collect();
        let a = bounded_chain(n, extra);
        let r = detect_lattice(&a, None).unwrap();
        assert_eq!(build_discriminator_from_t(&r), discriminator_table(n));
        let v = is_semi_primal(&a, &r, Route::All).unwrap();
        assert_eq!(v.level, Level::SemiPrimal);
        assert!(preserves_subuniverses(&a, &r.t_table(1), 1).unwrap().is_none());
        assert_eq!(preserves_subuniverses(&a, &[1, 1, 1, 1], 1).unwrap(), Some(vec![0]));
    }

    #[test]
    fn meet_product_has_all_elements_idempotent() {
        let a = bounded_chain(3, vec![]);
        assert_eq!(idempotent_elements(&a, "meet").unwrap(), vec![0, 1, 2]);
        let r = detect_lattice(&a, None).unwrap();
        assert_eq!(flew_quasiprimal_witness(&a, &r, "meet", 32).unwrap(), None);
    }

    #[test]
    fn unary_clone_of_two_element_lattice() {
        let a = bounded_chain(2, vec![]);
        let clone = unary_clone(&a).unwrap();
        let expected: BTreeSet<Vec<usize>> = [vec![0, 1], vec![0, 0], vec![1, 1]].into_iter().collect();
        assert_eq!(clone, expected);
    }
}
