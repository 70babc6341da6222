//! Characteristic functionals of Dirichlet and Dirichlet–Ferguson measures.
//!
//! Cycle-index polynomials, moments and the Humbert `ₖΦ₂` series of the
//! Dirichlet distribution, the ladder-operator algebra on its weight lattice,
//! Pólya shading enumeration, and stick-breaking simulation of the
//! Dirichlet–Ferguson measure with partition-level cross-checks.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod combinatorics;
pub mod cycle_index;
pub mod dirichlet;
pub mod dsa;
pub mod error;
pub mod exec;
pub mod ferguson;
pub mod poly;
pub mod polya;
pub mod verify;

pub use error::{Error, Result};
pub use exec::Execution;
