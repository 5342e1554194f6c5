//! Moduli of subalgebras of finite-dimensional algebras.
//!
//! The crate computes singularity invariants (delta, conductor, delta-prime,
//! branch conductances, gluing profiles) of subalgebras of finite commutative
//! algebras over exact fields, emits the polynomial systems cutting subalgebra
//! loci out of Grassmannian charts, verifies the structure of those loci by
//! exhaustive finite-field enumeration, and enumerates combinatorial types of
//! singular curves together with stratum reports.

pub mod acceptance;
pub mod algebra;
pub mod cli;
pub mod combtypes;
pub mod config;
pub mod equations;
pub mod error;
pub mod field;
pub mod invariants;
pub mod jsonio;
pub mod linalg;
pub mod pointcount;
pub mod poly;

pub use error::{Error, Result};
