//! Finite matrix-group laboratory over Z/m.

pub mod gens;
pub mod lemmas;
pub mod lie;
pub mod matrix;
pub mod perm;
pub mod schreier;

pub use gens::{build_gsp_delta, gsp_group, sp_generators, sp_group, transvection};
pub use lemmas::{
    check_lifting_lemma, check_pair_surjection_lemma, check_s2m_lifting, goursat_decompose,
    gsp_order_mod, serre_subgroup, simplicity_mod_center, sp_order_mod,
};
pub use matrix::{gsp_membership, omega, ModMatrix};
pub use schreier::{FiniteMatrixGroup, StabChain, ENUM_CAP};
