//! Ladder operators on the weight lattice `Λ_α = α + ℤ^k`.
//!
//! Basis labels `f_{α'}` stand for the functions `ₖΦ₂[α'; |α'|; ·]`; the
//! operators act through their closed-form shifts, and [`realize`] evaluates
//! a vector as an actual function when needed.

mod lattice;
mod operators;
mod region;
mod verify;

pub use lattice::{Anchor, Coefficient, LatticePoint, LatticeVector, PRUNE_TOL};
pub use operators::{
    apply, apply_word, commutator, posterior_operator, posterior_word, realize, weyl_permute,
    LadderOperator, OperatorSum,
};
pub use region::{region_membership, support_within, RegionPredicate};
pub use verify::{
    cartan_matrix_a, check_subspace_preservation, check_weyl_conjugation, chevalley,
    generic_anchor, verify_commutation_table, verify_serre, RelationCheck, VerificationReport,
    RELATION_TOL,
};
