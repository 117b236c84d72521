//! Finite Boolean algebras in atom form.

use serde::{Deserialize, Serialize};

use crate::algebra::{FiniteAlgebra, DEFAULT_CAP};
use crate::error::{Error, Result};

/// Largest atom count representable with `u64` masks.
pub const MAX_ATOMS: usize = 63;

/// `2^atoms`; element `m` is the join of the atoms whose bits are set in `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteBooleanAlgebra {
    pub atoms: usize,
}

impl FiniteBooleanAlgebra {
    pub fn new(atoms: usize) -> Result<Self> {
        Self::with_cap(atoms, DEFAULT_CAP)
    }

    pub fn with_cap(atoms: usize, cap: usize) -> Result<Self> {
        if atoms > MAX_ATOMS || (1u128 << atoms) > cap as u128 {
            return Err(Error::SizeCapExceeded {
                requested: 1u128 << atoms.min(127),
                cap,
            });
        }
        Ok(FiniteBooleanAlgebra { atoms })
    }

    pub fn size(&self) -> usize {
        1 << self.atoms
    }

    pub fn zero(&self) -> u64 {
        0
    }

    pub fn one(&self) -> u64 {
        (1u64 << self.atoms) - 1
    }

    pub fn complement(&self, m: u64) -> u64 {
        !m & self.one()
    }

    pub fn atom(&self, i: usize) -> u64 {
        1 << i
    }

    /// Signature `meet, join, not, zero, one`, carrier indexed by mask value.
    pub fn as_finite_algebra(&self) -> FiniteAlgebra {
        let n = self.size();
        let one = self.one() as usize;
        FiniteAlgebra::new(
            format!("2^{}", self.atoms),
            n,
            vec![
                FiniteAlgebra::op_from_fn("meet", n, 2, |t| t[0] & t[1]),
                FiniteAlgebra::op_from_fn("join", n, 2, |t| t[0] | t[1]),
                FiniteAlgebra::op_from_fn("not", n, 1, |t| !t[0] & one),
                FiniteAlgebra::op_from_fn("zero", n, 0, |_| 0),
                FiniteAlgebra::op_from_fn("one", n, 0, |_| one),
            ],
        )
        .expect("Boolean tables are well formed")
        .with_lattice_hint("meet", "join")
    }
}

/// The principal ultrafilter of all elements above one atom.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Ultrafilter {
    pub atom: usize,
}

impl Ultrafilter {
    pub fn contains(&self, m: u64) -> bool {
        m >> self.atom & 1 == 1
    }
}

pub fn ultrafilters(b: &FiniteBooleanAlgebra) -> Vec<Ultrafilter> {
    (0..b.atoms).map(|atom| Ultrafilter { atom }).collect()
}

/// A Boolean homomorphism `dom → cod`, determined by sending each atom of `cod`
/// to the atom of `dom` whose ultrafilter it pulls back to.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BooleanHom {
    pub dom_atoms: usize,
    pub cod_atoms: usize,
    pub atom_map: Vec<usize>,
}

impl BooleanHom {
    /// `h(m)` has bit `j` set iff atom `atom_map[j]` lies below `m`.
    pub fn apply(&self, m: u64) -> u64 {
        self.atom_map
            .iter()
            .enumerate()
            .filter(|&(_, &i)| m >> i & 1 == 1)
            .fold(0, |acc, (j, _)| acc | 1 << j)
    }

    /// Recovers the atom form from an arbitrary mask map, if it is a Boolean hom.
    pub fn from_mask_map(dom: &FiniteBooleanAlgebra, cod: &FiniteBooleanAlgebra, map: &[u64]) -> Option<BooleanHom> {
        if map.len() != dom.size() {
            return None;
        }
        let mut atom_map = Vec::with_capacity(cod.atoms);
        for j in 0..cod.atoms {
            let pre: Vec<usize> = (0..dom.atoms).filter(|&i| map[1 << i] >> j & 1 == 1).collect();
            if pre.len() != 1 {
                return None;
            }
            atom_map.push(pre[0]);
        }
        let h = BooleanHom {
            dom_atoms: dom.atoms,
            cod_atoms: cod.atoms,
            atom_map,
        };
        (0..dom.size() as u64).all(|m| h.apply(m) == map[m as usize]).then_some(h)
    }

    pub fn compose(&self, then: &BooleanHom) -> BooleanHom {
        BooleanHom {
            dom_atoms: self.dom_atoms,
            cod_atoms: then.cod_atoms,
            atom_map: then.atom_map.iter().map(|&i| self.atom_map[i]).collect(),
        }
    }
}

/// All homomorphisms `b1 → b2`, in lexicographic order of atom maps.
pub fn enumerate_boolean_homs(b1: &FiniteBooleanAlgebra, b2: &FiniteBooleanAlgebra) -> Vec<BooleanHom> {
    let mut out = Vec::new();
    crate::algebra::for_each_tuple(b1.atoms, b2.atoms, |t| {
        out.push(BooleanHom {
            dom_atoms: b1.atoms,
            cod_atoms: b2.atoms,
            atom_map: t.to_vec(),
        })
    });
    out
}

/// Atom count of a finite algebra that is a Boolean algebra under the given
/// order, found by counting atoms above the bottom.
pub fn count_atoms(leq: impl Fn(usize, usize) -> bool, elements: &[usize], bot: usize) -> usize {
    elements
        .iter()
        .filter(|&&a| {
            a != bot
                && elements
                    .iter()
                    .all(|&b| b == bot || b == a || !leq(b, a))
        })
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::enumerate_homomorphisms;

    #[test]
    fn sizes_and_ultrafilters() {
        for k in 0..4 {
            let b = FiniteBooleanAlgebra::new(k).unwrap();
            assert_eq!(b.size(), 1 << k);
            assert_eq!(ultrafilters(&b).len(), k);
        }
        assert!(FiniteBooleanAlgebra::with_cap(20, 1000).is_err());
    }

    #[test]
    fn hom_counts_are_powers() {
        let b = |k| FiniteBooleanAlgebra::new(k).unwrap();
        assert_eq!(enumerate_boolean_homs(&b(2), &b(2)).len(), 4);
        assert_eq!(enumerate_boolean_homs(&b(1), &b(3)).len(), 1);
        assert_eq!(enumerate_boolean_homs(&b(2), &b(1)).len(), 2);
        assert_eq!(enumerate_boolean_homs(&b(0), &b(0)).len(), 1);
        assert_eq!(enumerate_boolean_homs(&b(0), &b(1)).len(), 0);
    }

    #[test]
    fn agrees_with_general_hom_search() {
        for k1 in 0..4 {
            for k2 in 0..4 {
                let (b1, b2) = (FiniteBooleanAlgebra::new(k1).unwrap(), FiniteBooleanAlgebra::new(k2).unwrap());
                let general = enumerate_homomorphisms(&b1.as_finite_algebra(), &b2.as_finite_algebra()).unwrap();
                let mut ours: Vec<Vec<usize>> = enumerate_boolean_homs(&b1, &b2)
                    .iter()
                    .map(|h| (0..b1.size() as u64).map(|m| h.apply(m) as usize).collect())
                    .collect();
                ours.sort();
                let general: Vec<Vec<usize>> = general.into_iter().map(|h| h.map).collect();
                assert_eq!(ours, general, "2^{k1} -> 2^{k2}");
            }
        }
    }

    #[test]
    fn mask_map_round_trip() {
        let (b1, b2) = (FiniteBooleanAlgebra::new(2).unwrap(), FiniteBooleanAlgebra::new(3).unwrap());
        for h in enumerate_boolean_homs(&b1, &b2) {
            let masks: Vec<u64> = (0..4).map(|m| h.apply(m)).collect();
            assert_eq!(BooleanHom::from_mask_map(&b1, &b2, &masks), Some(h));
        }
    }

    #[test]
    fn atom_recovery_from_tables() {
        let elems: Vec<usize> = (0..8).collect();
        assert_eq!(count_atoms(|x, y| x & y == x, &elems, 0), 3);
    }
}
