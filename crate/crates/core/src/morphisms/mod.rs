//! Derivations and automorphisms of H(f).

mod automorphism;
mod derivation;

pub use automorphism::{
    apply_x_fixing_automorphism, automorphism_group, satisfies_pair_identity, AutGroup,
};
pub use derivation::{
    apply_derivation, check_derivation, classify_locally_finite, derivation_homogeneous_parts,
    derivation_power_bounded, DerivationSpec, NilpotencyProbe,
};
