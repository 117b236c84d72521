//! Direct products with mixed-radix carrier encoding.

use crate::algebra::{checked_pow, FiniteAlgebra, Operation, Signature};
use crate::error::{Error, Result};
use crate::hom::Homomorphism;

/// A direct product together with its coordinate codec.
///
/// Tuple `(x_0, …, x_{m-1})` is encoded as `Σ x_i · r_{i+1} ⋯ r_{m-1}`, so the
/// first coordinate is most significant and carrier order is lexicographic.
#[derive(Clone, Debug)]
pub struct Product {
    pub algebra: FiniteAlgebra,
    radices: Vec<usize>,
}

impl Product {
    pub fn radices(&self) -> &[usize] {
        &self.radices
    }

    pub fn factor_count(&self) -> usize {
        self.radices.len()
    }

    pub fn encode(&self, tuple: &[usize]) -> usize {
        encode(&self.radices, tuple)
    }

    pub fn decode(&self, x: usize) -> Vec<usize> {
        decode(&self.radices, x)
    }

    pub fn projection(&self, i: usize) -> Homomorphism {
        Homomorphism::new((0..self.algebra.size()).map(|x| self.decode(x)[i]).collect())
    }
}

pub fn encode(radices: &[usize], tuple: &[usize]) -> usize {
    debug_assert_eq!(radices.len(), tuple.len());
    tuple.iter().zip(radices).fold(0, |acc, (&x, &r)| {
        debug_assert!(x < r);
        acc * r + x
    })
}

pub fn decode(radices: &[usize], mut x: usize) -> Vec<usize> {
    let mut out = vec![0; radices.len()];
    for (slot, &r) in out.iter_mut().zip(radices).rev() {
        *slot = x % r;
        x /= r;
    }
    out
}

/// Product size, refusing anything above `cap`.
pub fn product_size(radices: &[usize], cap: usize) -> Result<usize> {
    let mut size: u128 = 1;
    for &r in radices {
        size = size.saturating_mul(r as u128);
    }
    if size > cap as u128 {
        return Err(Error::SizeCapExceeded { requested: size, cap });
    }
    Ok(size as usize)
}

/// Componentwise product of `factors`, all of which must have `signature`.
pub fn direct_product(signature: &Signature, factors: &[&FiniteAlgebra], cap: usize) -> Result<Product> {
    for f in factors {
        if f.signature() != *signature {
            return Err(Error::SignatureMismatch(format!(
                "factor `{}` does not have the product signature",
                f.name
            )));
        }
    }
    let radices: Vec<usize> = factors.iter().map(|f| f.size()).collect();
    let size = product_size(&radices, cap)?;
    for sym in &signature.ops {
        let entries = checked_pow(size, sym.arity);
        if entries > crate::algebra::TABLE_ENTRY_CAP {
            return Err(Error::SizeCapExceeded {
                requested: entries,
                cap: crate::algebra::TABLE_ENTRY_CAP as usize,
            });
        }
    }
    let decoded: Vec<Vec<usize>> = (0..size).map(|x| decode(&radices, x)).collect();
    let mut ops = Vec::with_capacity(signature.ops.len());
    for (op_i, sym) in signature.ops.iter().enumerate() {
        let mut coord_args = Vec::with_capacity(sym.arity);
        let mut out = vec![0; factors.len()];
        let op: Operation = FiniteAlgebra::op_from_fn(sym.name.clone(), size, sym.arity, |t| {
            for (i, f) in factors.iter().enumerate() {
                coord_args.clear();
                coord_args.extend(t.iter().map(|&x| decoded[x][i]));
                out[i] = f.apply(op_i, &coord_args);
            }
            encode(&radices, &out)
        });
        ops.push(op);
    }
    let name = if factors.is_empty() {
        "trivial".to_string()
    } else {
        factors.iter().map(|f| f.name.as_str()).collect::<Vec<_>>().join(" x ")
    };
    let mut algebra = FiniteAlgebra::new(name, size, ops)?;
    algebra.lattice_hint = factors.first().and_then(|f| f.lattice_hint.clone());
    Ok(Product { algebra, radices })
}

/// The one-element algebra of a signature.
pub fn trivial_algebra(signature: &Signature) -> FiniteAlgebra {
    direct_product(signature, &[], 1).expect("empty product fits").algebra
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn chain(n: usize) -> FiniteAlgebra {
        FiniteAlgebra::new(
            format!("c{n}"),
            n,
            vec![
                FiniteAlgebra::op_from_fn("meet", n, 2, |t| t[0].min(t[1])),
                FiniteAlgebra::op_from_fn("one", n, 0, |_| n - 1),
            ],
        )
        .unwrap()
    }

    #[test]
    fn empty_product_is_trivial() {
        let sig = chain(2).signature();
        let t = trivial_algebra(&sig);
        assert_eq!(t.size(), 1);
    }

    #[test]
    fn projections_are_homomorphisms() {
        let (a, b) = (chain(2), chain(3));
        let p = direct_product(&a.signature(), &[&a, &b], 100).unwrap();
        assert_eq!(p.algebra.size(), 6);
        assert!(p.projection(0).verify(&p.algebra, &a));
        assert!(p.projection(1).verify(&p.algebra, &b));
        assert_eq!(p.algebra.apply(1, &[]), p.encode(&[1, 2]));
    }

    #[test]
    fn cap_is_enforced() {
        let a = chain(10);
        assert!(matches!(
            direct_product(&a.signature(), &[&a, &a, &a], 999),
            Err(Error::SizeCapExceeded { requested: 1000, .. })
        ));
    }

    proptest! {
        #[test]
        fn decode_inverts_encode(radices in prop::collection::vec(1usize..6, 0..5), seed in any::<u64>()) {
            let size: usize = radices.iter().product();
            let x = (seed % size as u64) as usize;
            prop_assert_eq!(encode(&radices, &decode(&radices, x)), x);
        }
    }
}
