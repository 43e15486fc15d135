//! Mod-2 cohomology rings of spheres, real projective spaces, their products,
//! and symmetric squares, with cup-length and zero-divisor cup-length.

mod cup;
pub mod f2;
mod ring;
mod sp2;

use thiserror::Error;

pub use cup::{
    cup_length, cup_length_with_witness, zero_divisor_basis, zero_divisor_cup_length, CupLength,
};
pub use ring::{
    kunneth, ring_of_rp, ring_of_sphere, tensor_power, BasisId, BasisLabel, CohClass,
    DumpElement, GradedBasisElement, GradedRing, MultEntry, RingDump, SqEntry,
};
pub use sp2::nakaoka_sp2;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("ring carries no Steenrod squares")]
    MissingSteenrod,
    #[error("symmetric square is not closed: {0}")]
    NakaokaClosure(String),
    #[error("ring axiom violated: {0}")]
    AxiomViolation(String),
    #[error("dimension must be at least 1, got {0}")]
    InvalidDimension(usize),
    #[error("invalid ring dump: {0}")]
    InvalidDump(String),
}
