//! Cohomology jump loci of finite cochain complexes over Laurent polynomial rings.
//!
//! `V^i_k(C) = {p ∈ (ℂ*)^n : dim H^i(C ⊗ ℂ_p) ≥ k}` is computed from exact evaluations at
//! torsion points of a chosen level, glued into torsion cosets, and each coset is certified
//! symbolically by generic ranks along it.

pub mod complex;
pub mod cyclotomic;
pub mod elimination;
pub mod fox;
pub mod laurent;
pub mod loci;

use num_bigint::BigInt;
use thiserror::Error;

use crate::torus::TorusError;

pub use complex::{LaurentChainComplex, LaurentMatrix};
pub use cyclotomic::CyclotomicNumber;
pub use fox::{fox_complex, Abelianization, FoxComplex, GroupPresentation};
pub use laurent::{CycLaurent, LaurentPoly};
pub use loci::{
    cohomology_dims, cohomology_dims_at, coset_jump_certify, generic_rank_on_coset, grid_dims, jump_locus_reconstruct,
    non_torsion_probe, semicontinuity_check, specialize, symmetry_check, torsion_values, verify_absolute,
    JumpCertificate, JumpLocusReport, ReconstructOptions, SemicontinuityReport, SymmetryReport, Verdict, Witness,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JumpError {
    #[error("{0}")]
    Shape(String),
    #[error("composition of d^{} and d^{index} is not zero", index + 1)]
    NotAComplex { index: usize },
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("degree {degree} is outside a complex of length {length}")]
    DegreeOutOfRange { degree: usize, length: usize },
    #[error("{0} lies outside the support of the complex")]
    OutsideSupport(String),
    #[error("coordinate {0} of the point is zero")]
    SingularPoint(usize),
    #[error("search grid of level {level} in rank {rank} has {points} points, above the ceiling {ceiling}")]
    Budget { level: u64, rank: usize, points: String, ceiling: u64 },
    #[error("level {level} is not a multiple of the claimed torsion order {order}")]
    LevelViolation { level: u64, order: BigInt },
    #[error("line {line}, column {col}: {message}")]
    Presentation { line: usize, col: usize, message: String },
    #[error(transparent)]
    Torus(#[from] TorusError),
}
