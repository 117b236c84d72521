//! Decision procedures and functor constructions for finite lattice-based
//! algebras: primality levels, Boolean skeletons and powers, and the finite
//! dual equivalence with labelled sets.

pub mod algebra;
pub mod boolean;
pub mod catalog;
pub mod congruence;
pub mod duality;
pub mod elemset;
pub mod error;
pub mod experiments;
pub mod hom;
pub mod lattice;
pub mod primality;
pub mod product;
pub mod subuniverse;
pub mod variety;

pub use algebra::{FiniteAlgebra, Operation, Signature};
pub use elemset::ElemSet;
pub use error::{Error, Result};
pub use hom::Homomorphism;
pub use subuniverse::SubUniverse;
