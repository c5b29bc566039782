//! Exact integer linear algebra: Smith forms, presented abelian groups,
//! homomorphisms and homology of chain complexes.

pub(crate) mod coeff;
pub mod complex;
pub mod group;
pub mod lattice;
pub mod matrix;
pub mod snf;
pub mod sparse;
mod unitelim;

pub use complex::{free_homology, CanonicalComplex, ChainComplex};
pub use group::{format_group, Canonical, FgAbGroup, GroupHom};
pub use lattice::{kernel_basis, Lattice, Solver};
pub use matrix::{big, bigvec, Matrix};
pub use snf::{invariant_factors_dense, is_unimodular, rank, smith_normal_form, Snf};
pub use sparse::invariant_factors;
