//! Torsion-translated subtori of `(ℂ*)^n` and the boolean algebra they generate.

mod coset;
mod galois;
mod grid;
mod monomial;
mod set;

pub use coset::{solve_character_system, TorsionCoset, TorsionPoint};
pub use galois::{galois_apply, galois_invariant, galois_orbit, galois_witness, units, GaloisElement};
pub use grid::{grid_mask, grid_mask_with, grid_oracle, Grid};
pub use monomial::{image, preimage};
pub use set::{AbsoluteSet, Cell};

use num_bigint::BigInt;
use thiserror::Error;

use crate::lattice::LatticeError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TorusError {
    #[error("ambient rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("character lattice is not saturated")]
    NotSaturated,
    #[error("{0}")]
    Shape(String),
    #[error("torsion order {order} does not divide level {level}")]
    LevelViolation { level: u64, order: BigInt },
    #[error("{unit} is not a unit modulo {level}")]
    NotAUnit { unit: u64, level: u64 },
    #[error("set is not closed; cell {0:?} has exclusions")]
    NotClosed(Box<Cell>),
    #[error("grid of level {level} in rank {rank} is too large")]
    GridTooLarge { level: u64, rank: usize },
}

impl From<LatticeError> for TorusError {
    fn from(e: LatticeError) -> Self {
        match e {
            LatticeError::RankMismatch(a, b) => TorusError::RankMismatch(a, b),
            LatticeError::Shape(s) => TorusError::Shape(s),
        }
    }
}

/// Boolean operations named as free functions.
pub fn coset_member(p: &TorsionPoint, c: &TorsionCoset) -> Result<bool, TorusError> {
    c.contains_point(p)
}

pub fn coset_contains(outer: &TorsionCoset, inner: &TorsionCoset) -> Result<bool, TorusError> {
    outer.contains(inner)
}

pub fn coset_intersect(a: &TorsionCoset, b: &TorsionCoset) -> Result<AbsoluteSet, TorusError> {
    let parts = a.intersect(b)?;
    AbsoluteSet::from_cosets(a.ambient_rank(), parts)
}

pub fn invert(s: &AbsoluteSet) -> AbsoluteSet {
    s.invert()
}
