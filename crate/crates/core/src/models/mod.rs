//! Physical systems that produce test spectra.

pub mod bessel;
pub mod billiard;
pub mod spin_chain;

pub use bessel::{bessel_j, bessel_zero, bessel_zeros_below};
pub use billiard::{circular_billiard_levels, lowest_billiard_levels, BilliardLevels, DegeneracyPolicy};
pub use spin_chain::{
    build_spin_chain_block, commutator_max, reflection_permutation, sector_basis,
    spin_chain_spectrum, spin_flip_permutation, SpinChainParams,
};
