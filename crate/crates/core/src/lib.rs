//! Base partitionings of matroid families.
//!
//! Given matroids `(M_i : i ∈ K)` on a common ground set `E`, a base
//! partitioning picks a base `B_i` of each `M_i` with the `B_i` partitioning
//! `E`. One exists exactly when the family has both a covering by
//! independent sets and a packing of spanning sets; this crate finds one
//! element at a time from those two certificates, or returns the certificate
//! that rules it out.

#[macro_use]
pub mod set;

pub mod assignment;
pub mod augment;
pub mod brute;
pub mod error;
pub mod family;
pub mod feasible;
pub mod gen;
pub mod ground;
pub mod io;
pub mod matroid;
pub mod partition;
pub mod selftest;
pub mod tight;

pub use assignment::{Assignment, Mode};
pub use error::{Error, Result};
pub use family::{MatroidFamily, Member, Role};
pub use ground::GroundSet;
pub use matroid::Matroid;
pub use set::{Element, ElementSet};
